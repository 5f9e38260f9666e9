"""Mass functions, belief/doubt/plausibility and the Möbius inversion between them.

Set functions are stored as a tuple indexed by subset bitmask, so
``sf.values[0]`` is the value on the empty set and ``sf.values[-1]`` the
value on the whole frame.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import EmptyInput, InvalidMass, NonPositiveInput, NotADoubtFunction
from .rational import to_fraction
from .space import Frame

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class SetFunction:
    frame: Frame
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != 1 << len(self.frame):
            raise ValueError(
                f"set function needs {1 << len(self.frame)} values, got {len(self.values)}")
        object.__setattr__(self, "values", tuple(to_fraction(v) for v in self.values))

    def __call__(self, subset):
        return self.values[self.frame.mask(subset)]

    def items(self):
        return ((self.frame.members(m), v) for m, v in enumerate(self.values))


@dataclass(frozen=True)
class MassFunction:
    frame: Frame
    mass: tuple[Fraction, ...]

    def __post_init__(self):
        size = 1 << len(self.frame)
        if len(self.mass) != size:
            raise InvalidMass(f"mass table needs {size} entries, got {len(self.mass)}")
        mass = tuple(to_fraction(v) for v in self.mass)
        object.__setattr__(self, "mass", mass)
        if mass[0] != 0:
            raise InvalidMass(f"m(empty) = {mass[0]}, must be 0")
        for m, v in enumerate(mass):
            if v < 0:
                raise InvalidMass(f"negative mass {v} on {self.frame.members(m)}")
        total = sum(mass, ZERO)
        if total != 1:
            raise InvalidMass(f"masses sum to {total}, not 1")

    @classmethod
    def from_dict(cls, frame: Frame, table):
        mass = [ZERO] * (1 << len(frame))
        for subset, v in table.items():
            mass[frame.mask(subset)] += to_fraction(v)
        return cls(frame, tuple(mass))

    def __call__(self, subset):
        return self.mass[self.frame.mask(subset)]

    def focal(self):
        return {m: v for m, v in enumerate(self.mass) if v}


def _subset_sums(values: Sequence[Fraction], n: int) -> list[Fraction]:
    """Zeta transform: out[A] = sum of values[U] over U ⊆ A."""
    out = list(values)
    for bit in range(n):
        b = 1 << bit
        for m in range(len(out)):
            if m & b:
                out[m] += out[m ^ b]
    return out


def _mobius(values: Sequence[Fraction], n: int) -> list[Fraction]:
    """Inverse zeta: out[A] = sum of (-1)^{|A|-|U|} values[U] over U ⊆ A."""
    out = list(values)
    for bit in range(n):
        b = 1 << bit
        for m in range(len(out)):
            if m & b:
                out[m] -= out[m ^ b]
    return out


# alternating min-max over a linearly ordered commutative group

def _nonempty_subsets(values):
    n = len(values)
    for r in range(1, n + 1):
        for idx in combinations(range(n), r):
            yield r, [values[i] for i in idx]


def alternating_max(values) -> Fraction:
    """max(values) rebuilt as an alternating sum of subset minima."""
    values = [to_fraction(v) for v in values]
    if not values:
        raise EmptyInput("alternating_max needs at least one value")
    total = ZERO
    for r, sub in _nonempty_subsets(values):
        total += min(sub) if r % 2 else -min(sub)
    return total


def alternating_min(values) -> Fraction:
    values = [to_fraction(v) for v in values]
    if not values:
        raise EmptyInput("alternating_min needs at least one value")
    total = ZERO
    for r, sub in _nonempty_subsets(values):
        total += max(sub) if r % 2 else -max(sub)
    return total


def alternating_max_multiplicative(values) -> Fraction:
    """The same identity in the multiplicative group of positive rationals."""
    values = [to_fraction(v) for v in values]
    if not values:
        raise EmptyInput("alternating_max_multiplicative needs at least one value")
    if any(v <= 0 for v in values):
        raise NonPositiveInput("all values must be positive")
    num, den = ONE, ONE
    for r, sub in _nonempty_subsets(values):
        if r % 2:
            num *= min(sub)
        else:
            den *= min(sub)
    return num / den


# belief-theoretic functions from a mass function

def belief_from_mass(m: MassFunction) -> SetFunction:
    return SetFunction(m.frame, tuple(_subset_sums(m.mass, len(m.frame))))


def doubt_from_mass(m: MassFunction) -> SetFunction:
    bel = _subset_sums(m.mass, len(m.frame))
    full = m.frame.full
    return SetFunction(m.frame, tuple(bel[full & ~a] for a in range(full + 1)))


def plausibility_from_mass(m: MassFunction) -> SetFunction:
    doubt = doubt_from_mass(m).values
    return SetFunction(m.frame, tuple(1 - v for v in doubt))


def _mass_table_from_doubt(sf: SetFunction) -> list[Fraction]:
    full = sf.frame.full
    # Doubt(U^c) is the belief of U
    bel = [sf.values[full & ~u] for u in range(full + 1)]
    return _mobius(bel, len(sf.frame))


def mass_from_doubt(sf: SetFunction) -> MassFunction:
    """Möbius-invert a doubt table into its mass function.

    Raises :class:`NotADoubtFunction` naming the first offending subset
    (in bitmask order) when the inverted table is not a mass function.
    """
    mass = _mass_table_from_doubt(sf)
    if mass[0] != 0:
        raise NotADoubtFunction((), mass[0], "nonzero mass on the empty set")
    for a, v in enumerate(mass):
        if v < 0:
            raise NotADoubtFunction(sf.frame.members(a), v)
    total = sum(mass, ZERO)
    if total != 1:
        raise NotADoubtFunction(sf.frame.points, total, "total mass")
    return MassFunction(sf.frame, tuple(mass))


def is_doubt_function(sf: SetFunction) -> bool:
    if sf.values[0] != 1 or sf.values[-1] != 0:
        return False
    return all(v >= 0 for v in _mass_table_from_doubt(sf))
