"""Exception hierarchy shared by every module."""


class EDError(Exception):
    """Base class for all package errors."""


class AxiomViolation(EDError):
    def __init__(self, axiom, witness=(), detail=""):
        self.axiom = axiom
        self.witness = tuple(witness)
        self.detail = detail
        msg = f"{axiom} violated"
        if self.witness:
            msg += f" at {', '.join(map(str, self.witness))}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class UnknownPoint(EDError):
    pass


class FrameTooLarge(EDError):
    pass


class EmptyInput(EDError):
    pass


class NonPositiveInput(EDError):
    pass


class InvalidMass(EDError):
    pass


class NotADoubtFunction(EDError):
    def __init__(self, subset, value, reason="negative mass"):
        self.subset = subset
        self.value = value
        self.reason = reason
        super().__init__(f"not a doubt function: {reason} {value} at {subset}")


class OutOfRange(EDError):
    pass


class InvalidJoint(EDError):
    pass


class EmptyComponentSet(EDError):
    pass


class UnknownComponent(EDError):
    pass


class EDSyntaxError(EDError):
    def __init__(self, position, expected, text=""):
        self.position = position
        self.expected = expected
        self.text = text
        super().__init__(f"syntax error at position {position}: expected {expected}")


class UnknownToken(EDSyntaxError):
    def __init__(self, position, token, text=""):
        self.token = token
        EDError.__init__(self, f"unknown token {token!r} at position {position}")
        self.position = position
        self.expected = "a valid token"
        self.text = text


class UnknownProposition(EDError):
    pass


class DnfTooLarge(EDError):
    pass


class ResourceLimit(EDError):
    pass


class TooManyVariables(EDError):
    pass


class AtomBudgetExceeded(EDError):
    pass


class ModelBudgetExceeded(EDError):
    pass
