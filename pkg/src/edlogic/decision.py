"""Semantics and the consistency / entailment procedure for ED formulas.

A formula is decided by putting it in DNF and handing each conjunct to the
linear solver.  The unknowns are mass variables ``m_J``, one per set ``J``
of atoms; the expected distance of a disjunction of atoms ``I`` is
``e_I = sum of m_J over J ⊆ complement(I)``.  A feasible mass vector is
turned into an explicit witness model whose expected distances reproduce
every ``e_I``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping

from .errors import AtomBudgetExceeded, InvalidMass, ModelBudgetExceeded, UnknownProposition
from .linarith import Constraint, LinearConstraintSystem, feasible
from .space import MetricProbSpace, PartitionMetric, expected_distance, validate_space
from .syntax import (DEFAULT_DNF_LITERAL_CAP, AtomBasis, And, Basic, Formula, Not, Prop,
                     atom_basis, compare, conjoin, eval_prop, prop_to_atom_set, prop_vars,
                     to_dnf)

ZERO = Fraction(0)
ONE = Fraction(1)

DEFAULT_ATOM_BUDGET = 3
DEFAULT_MODEL_POINT_CAP = 10_000


def subsets_of(mask):
    """All submasks of ``mask``, including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def index_set(mask) -> str:
    """1-based rendering of an atom set, e.g. ``{1,3}``."""
    return "{" + ",".join(str(i + 1) for i in range(mask.bit_length()) if mask >> i & 1) + "}"


def parse_index_set(text) -> int:
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise ValueError(f"index set must look like {{1,3}}, got {text!r}")
    body = body[1:-1].strip()
    mask = 0
    for part in filter(None, (p.strip() for p in body.split(","))):
        mask |= 1 << (int(part) - 1)
    return mask


@dataclass(frozen=True)
class Model:
    space: MetricProbSpace
    valuation: tuple[frozenset, ...]
    vocabulary: frozenset
    _classes: dict = field(init=False, repr=False, compare=False, hash=False)
    _ed_cache: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        val = tuple(frozenset(v) for v in self.valuation)
        if len(val) != len(self.space):
            raise ValueError(f"valuation covers {len(val)} of {len(self.space)} points")
        voc = frozenset(self.vocabulary)
        for v in val:
            extra = v - voc
            if extra:
                raise UnknownProposition(f"valuation uses {sorted(extra)} outside vocabulary")
        classes = {}
        for i, v in enumerate(val):
            classes[v] = classes.get(v, 0) | 1 << i
        object.__setattr__(self, "valuation", val)
        object.__setattr__(self, "vocabulary", voc)
        object.__setattr__(self, "_classes", classes)
        object.__setattr__(self, "_ed_cache", {})

    @classmethod
    def from_mapping(cls, space, valuation: Mapping[str, object], vocabulary=None):
        rows = [frozenset()] * len(space)
        for point, props in valuation.items():
            rows[space.frame.index(point)] = frozenset(props)
        if vocabulary is None:
            vocabulary = frozenset().union(*rows)
        return cls(space, tuple(rows), frozenset(vocabulary))

    def ed(self, mask) -> Fraction:
        cached = self._ed_cache.get(mask)
        if cached is None:
            cached = self._ed_cache[mask] = expected_distance(self.space, mask)
        return cached


def extension(m: Model, psi: Prop) -> int:
    """Bitmask of the points where ``psi`` holds."""
    unknown = prop_vars(psi) - m.vocabulary
    if unknown:
        raise UnknownProposition(f"propositions {sorted(unknown)} not in model vocabulary")
    out = 0
    for truth, mask in m._classes.items():
        if eval_prop(psi, truth):
            out |= mask
    return out


def term_value(m: Model, term) -> Fraction:
    return sum((c * m.ed(extension(m, p)) for c, p in term.summands), ZERO)


def satisfies(m: Model, f: Formula) -> bool:
    if isinstance(f, Basic):
        return compare(term_value(m, f.term), f.rel, f.bound)
    if isinstance(f, Not):
        return not satisfies(m, f.arg)
    if isinstance(f, And):
        return satisfies(m, f.left) and satisfies(m, f.right)
    return satisfies(m, f.left) or satisfies(m, f.right)


# translation to linear systems

def mass_var(mask) -> str:
    return "m_" + index_set(mask)


def _check_budget(basis, atom_budget):
    if basis.k > atom_budget:
        raise AtomBudgetExceeded(
            f"{basis.k} primitive propositions exceeds atom budget {atom_budget}")


def _literal_row(coeffs, rel, bound):
    if rel == ">=":
        return Constraint(tuple(coeffs), ">=", bound)
    if rel == ">":
        return Constraint(tuple(coeffs), ">", bound)
    if rel == "<=":
        return Constraint(tuple(-c for c in coeffs), ">=", -bound)
    if rel == "<":
        return Constraint(tuple(-c for c in coeffs), ">", -bound)
    return Constraint(tuple(coeffs), "=", bound)


def translate_conjunct(literals, basis: AtomBasis,
                       atom_budget=DEFAULT_ATOM_BUDGET) -> LinearConstraintSystem:
    """Linear system over the 2^n mass variables for one DNF conjunct."""
    _check_budget(basis, atom_budget)
    size = 1 << basis.n
    full_atoms = (1 << basis.n) - 1
    rows = []
    for J in range(size):
        unit = [ZERO] * size
        unit[J] = ONE
        rows.append(Constraint(tuple(unit), ">=", ZERO))
    empty = [ZERO] * size
    empty[0] = ONE
    rows.append(Constraint(tuple(empty), "=", ZERO))
    rows.append(Constraint(tuple([ONE] * size), "=", ONE))
    for lit in literals:
        coeffs = [ZERO] * size
        for c, psi in lit.term.summands:
            I = prop_to_atom_set(psi, basis)
            for J in subsets_of(full_atoms & ~I):
                coeffs[J] += c
        rows.append(_literal_row(coeffs, lit.rel, lit.bound))
    return LinearConstraintSystem(tuple(mass_var(J) for J in range(size)), tuple(rows))


def e_var(mask) -> str:
    return "e_" + index_set(mask)


def translate_conjunct_direct(literals, basis: AtomBasis) -> LinearConstraintSystem:
    """The same conjunct over variables e_I with the full inclusion-exclusion family.

    The family ranges over every non-empty collection K of atom sets, which
    is doubly exponential, so this is only offered for k <= 1.
    """
    _check_budget(basis, 1)
    n = basis.n
    size = 1 << n
    full_atoms = size - 1

    def row(entries):
        coeffs = [ZERO] * size
        for I, c in entries:
            coeffs[I] += c
        return tuple(coeffs)

    rows = [Constraint(row([(0, ONE)]), "=", ONE),
            Constraint(row([(full_atoms, ONE)]), "=", ZERO)]
    rows += [Constraint(row([(I, ONE)]), ">=", ZERO) for I in range(size)]
    sets = list(range(size))
    for r in range(1, len(sets) + 1):
        for K in combinations(sets, r):
            inter = full_atoms
            for I in K:
                inter &= I
            entries = [(inter, ONE)]
            for s in range(1, len(K) + 1):
                sign = -ONE if s % 2 else ONE
                for sub in combinations(K, s):
                    union = 0
                    for I in sub:
                        union |= I
                    entries.append((union, sign))
            rows.append(Constraint(row(entries), ">=", ZERO))
    for lit in literals:
        entries = [(prop_to_atom_set(psi, basis), c) for c, psi in lit.term.summands]
        rows.append(_literal_row(row(entries), lit.rel, lit.bound))
    return LinearConstraintSystem(tuple(e_var(I) for I in range(size)), tuple(rows))


def e_from_mass(mass: Mapping[int, Fraction], n: int) -> dict[int, Fraction]:
    """e_I = sum of m_J over J ⊆ complement(I), for every atom set I."""
    full_atoms = (1 << n) - 1
    return {I: sum((mass.get(J, ZERO) for J in subsets_of(full_atoms & ~I)), ZERO)
            for I in range(1 << n)}


# witness model construction

def model_size(n: int) -> int:
    return n * n * (1 << (n - 1))


def _label_name(label):
    if label[0] == "x":
        _, i, J = label
        return f"x_{i + 1}_{index_set(J)}"
    _, i, j, K = label
    return f"y_{i + 1}_{j + 1}_{index_set(K)}"


def model_labels(n: int):
    """Point labels ('x', i, J) and ('y', i, j, K), atoms 0-based."""
    full_atoms = (1 << n) - 1
    labels = []
    for i in range(n):
        for J in subsets_of(full_atoms & ~(1 << i)):
            labels.append(("x", i, J))
    for i in range(n):
        for j in range(n):
            if i != j:
                for K in subsets_of(full_atoms & ~(1 << j)):
                    labels.append(("y", i, j, K))
    return labels


def label_distance(a, b) -> Fraction:
    """Pointwise distance between two witness-model labels.

    A y-point ``y_{i,j,K}`` hangs at distance 0 from its anchor ``x_{j,K}``
    exactly when ``i`` is outside ``K``; everything else is at distance 1.
    Two y-points share distance 0 only when they hang on the same anchor.
    """
    if a == b:
        return ZERO
    if a[0] == "x" and b[0] == "x":
        return ONE
    if a[0] == "y" and b[0] == "x":
        a, b = b, a
    if a[0] == "x":
        _, j2, K2 = a
        _, i, j, K = b
        return ZERO if (j == j2 and K == K2 and not K >> i & 1) else ONE
    _, i, j, K = a
    _, i2, j2, K2 = b
    if (j, K) != (j2, K2):
        return ONE
    anchor = ("x", j, K)
    return max(label_distance(anchor, a), label_distance(anchor, b))


def build_model(mass: Mapping[int, Fraction], basis: AtomBasis,
                point_cap=DEFAULT_MODEL_POINT_CAP, verify=True) -> Model:
    """Witness model realising e_I = sum_{J ⊆ I^c} m_J for every atom set I."""
    n = basis.n
    full_atoms = (1 << n) - 1
    m = {J: Fraction(v) for J, v in mass.items() if v}
    if any(not 0 <= J <= full_atoms for J in m):
        raise InvalidMass("mass assigned to a set outside the atoms")
    if m.get(0, ZERO) != 0:
        raise InvalidMass(f"m(empty) = {m[0]}, must be 0")
    if any(v < 0 for v in m.values()):
        raise InvalidMass("negative mass")
    if sum(m.values(), ZERO) != 1:
        raise InvalidMass(f"masses sum to {sum(m.values(), ZERO)}, not 1")
    size = model_size(n)
    if size > point_cap:
        raise ModelBudgetExceeded(f"witness model needs {size} points, cap is {point_cap}")

    labels = model_labels(n)
    index = {lab: k for k, lab in enumerate(labels)}
    prob = []
    blocks = []
    for k, lab in enumerate(labels):
        if lab[0] == "x":
            _, i, J = lab
            comp = full_atoms & ~J
            prob.append(m.get(comp, ZERO) / comp.bit_count())
            blocks.append(k)
        else:
            _, i, j, K = lab
            prob.append(ZERO)
            blocks.append(index[("x", j, K)] if not K >> i & 1 else k)
    space = validate_space([_label_name(lab) for lab in labels], PartitionMetric(blocks), prob)
    valuation = tuple(basis.true_props(lab[1]) for lab in labels)
    model = Model(space, valuation, frozenset(basis.props))
    if verify:
        e = e_from_mass(m, n)
        for I, target in e.items():
            got = model.ed(atoms_extension(model, basis, I))
            if got != target:
                raise AssertionError(f"witness model gives ed = {got} for {index_set(I)}, "
                                     f"expected {target}")
    return model


def atoms_extension(model: Model, basis: AtomBasis, I: int) -> int:
    """Points satisfying the disjunction of the atoms in ``I``."""
    out = 0
    for truth, mask in model._classes.items():
        for a in range(basis.n):
            if I >> a & 1 and basis.true_props(a) == truth:
                out |= mask
                break
    return out


# decision procedure

@dataclass(frozen=True)
class SatResult:
    consistent: bool
    basis: AtomBasis
    e: dict | None = None
    mass: dict | None = None
    model: Model | None = None
    conjunct: tuple | None = None

    def __bool__(self):
        return self.consistent


def _conjunct_holds(literals, basis, e):
    for lit in literals:
        val = sum((c * e[prop_to_atom_set(p, basis)] for c, p in lit.term.summands), ZERO)
        if not compare(val, lit.rel, lit.bound):
            return False
    return True


def check_consistency(f: Formula, atom_budget=DEFAULT_ATOM_BUDGET,
                      model_point_cap=DEFAULT_MODEL_POINT_CAP,
                      dnf_literal_cap=DEFAULT_DNF_LITERAL_CAP, build=True) -> SatResult:
    """Consistent with a witness, or Inconsistent when every conjunct is infeasible.

    The witness model is built when ``build`` is set and its frame fits
    within ``model_point_cap``; it is then checked against ``f`` itself.
    """
    basis = atom_basis(f)
    _check_budget(basis, atom_budget)
    for literals in to_dnf(f, dnf_literal_cap):
        system = translate_conjunct(literals, basis, atom_budget)
        res = feasible(system)
        if not res:
            continue
        mass = {J: res.assignment[mass_var(J)] for J in range(1 << basis.n)}
        e = e_from_mass(mass, basis.n)
        if not _conjunct_holds(literals, basis, e):
            raise AssertionError("feasible mass does not satisfy its conjunct")
        model = None
        if build and model_size(basis.n) <= model_point_cap:
            model = build_model(mass, basis, model_point_cap)
            if not satisfies(model, f):
                raise AssertionError("witness model does not satisfy the formula")
        return SatResult(True, basis, e, mass, model, literals)
    return SatResult(False, basis)


def countermodel(premises, goal: Formula, **kw) -> SatResult:
    """Consistency check of premises ∧ ¬goal."""
    f = conjoin(list(premises) + [Not(goal)])
    return check_consistency(f, **kw)


def entails(premises, goal: Formula, **kw) -> bool:
    kw.setdefault("build", False)
    return not countermodel(premises, goal, **kw).consistent
