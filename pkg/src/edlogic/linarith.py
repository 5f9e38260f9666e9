"""Exact feasibility of linear systems with >=, > and = constraints.

Two independent deciders live here: :func:`feasible`, an exact-rational
simplex that handles strict rows through one shared slack variable, and
:func:`feasible_by_elimination`, Fourier-Motzkin elimination with
strictness tracking.  The second exists to cross-check the first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ResourceLimit, TooManyVariables
from .rational import fmt, to_fraction

ZERO = Fraction(0)
ONE = Fraction(1)

REL = (">=", ">", "=")

DEFAULT_MAX_PIVOTS = 50_000
DEFAULT_MAX_ELIM_VARS = 12
DEFAULT_MAX_ELIM_ROWS = 200_000


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    rel: str
    bound: Fraction

    def __post_init__(self):
        if self.rel not in REL:
            raise ValueError(f"relation must be one of {REL}, got {self.rel!r}")
        object.__setattr__(self, "coeffs", tuple(to_fraction(c) for c in self.coeffs))
        object.__setattr__(self, "bound", to_fraction(self.bound))

    def lhs(self, values: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.coeffs, values) if c), ZERO)

    def holds(self, values) -> bool:
        v = self.lhs(values)
        if self.rel == ">=":
            return v >= self.bound
        if self.rel == ">":
            return v > self.bound
        return v == self.bound


@dataclass(frozen=True)
class LinearConstraintSystem:
    variables: tuple[str, ...]
    constraints: tuple[Constraint, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        n = len(self.variables)
        for c in self.constraints:
            if len(c.coeffs) != n:
                raise ValueError(f"constraint has {len(c.coeffs)} coefficients for {n} variables")

    def violated(self, assignment) -> Constraint | None:
        values = [assignment.get(v, ZERO) for v in self.variables]
        for c in self.constraints:
            if not c.holds(values):
                return c
        return None

    def dump(self) -> str:
        lines = ["vars: " + ", ".join(self.variables)]
        for c in self.constraints:
            terms = [f"{fmt(a)}*{v}" for a, v in zip(c.coeffs, self.variables) if a]
            lines.append(f"{' + '.join(terms) or '0'} {c.rel} {fmt(c.bound)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse_dump(cls, text: str) -> "LinearConstraintSystem":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("vars:"):
            raise ValueError("dump must start with a 'vars:' line")
        names = [v.strip() for v in lines[0][5:].split(",") if v.strip()]
        index = {v: i for i, v in enumerate(names)}
        out = []
        for ln in lines[1:]:
            m = re.fullmatch(r"(.*?)\s*(>=|>|=)\s*(\S+)", ln)
            if not m:
                raise ValueError(f"cannot parse constraint line {ln!r}")
            coeffs = [ZERO] * len(names)
            lhs = m.group(1).strip()
            if lhs != "0":
                for term in lhs.split(" + "):
                    c, v = term.split("*")
                    coeffs[index[v.strip()]] += to_fraction(c)
            out.append(Constraint(tuple(coeffs), m.group(2), to_fraction(m.group(3))))
        return cls(tuple(names), tuple(out))


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    assignment: dict | None = None

    def __bool__(self):
        return self.feasible


INFEASIBLE = FeasibilityResult(False)


def _checked(sys: LinearConstraintSystem, values) -> FeasibilityResult:
    assignment = dict(zip(sys.variables, values))
    bad = sys.violated(assignment)
    if bad is not None:
        raise AssertionError(f"solver produced an assignment violating {bad}")
    return FeasibilityResult(True, assignment)


# exact simplex

def _pivot(T, r, c):
    row = T[r]
    p = row[c]
    if p != 1:
        inv = 1 / p
        T[r] = row = [v * inv if v else v for v in row]
    nz = [(j, v) for j, v in enumerate(row) if v]
    for i, other in enumerate(T):
        if i != r:
            f = other[c]
            if f:
                for j, v in nz:
                    other[j] -= f * v


def _run_simplex(T, basis, cost, allowed, budget):
    """Minimise cost·x over the tableau with Bland's least-index rule.

    ``budget`` is a one-element list holding the remaining pivot count.
    Returns False if unbounded.
    """
    ncols = len(cost)
    while True:
        cb = [cost[b] for b in basis]
        entering = None
        for j in range(ncols):
            if not allowed[j]:
                continue
            rc = cost[j]
            for i, row in enumerate(T):
                if row[j] and cb[i]:
                    rc -= cb[i] * row[j]
            if rc < 0:
                entering = j
                break
        if entering is None:
            return True
        leave, best = None, None
        for i, row in enumerate(T):
            a = row[entering]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            return False
        if budget[0] <= 0:
            raise ResourceLimit("simplex pivot budget exhausted")
        budget[0] -= 1
        _pivot(T, leave, entering)
        basis[leave] = entering


def feasible(sys: LinearConstraintSystem, max_pivots=DEFAULT_MAX_PIVOTS) -> FeasibilityResult:
    """Decide feasibility over the rationals, strict rows included.

    Every ``a·x > b`` row becomes ``a·x - s >= b`` for one shared slack
    ``s`` with ``0 <= s <= 1``; the system is feasible iff the largest
    attainable ``s`` is positive.  A row of the form ``c·x_j >= 0`` with
    ``c > 0`` is read as a sign restriction on ``x_j`` instead of a row.
    """
    nvars = len(sys.variables)
    nonneg = [False] * nvars
    rows = []
    for con in sys.constraints:
        nz = [j for j, a in enumerate(con.coeffs) if a]
        if con.rel == ">=" and len(nz) == 1 and con.coeffs[nz[0]] > 0 and con.bound == 0:
            nonneg[nz[0]] = True
            continue
        if not nz:
            ok = (0 >= con.bound) if con.rel == ">=" else (0 > con.bound) if con.rel == ">" \
                else (con.bound == 0)
            if not ok:
                return INFEASIBLE
            continue
        rows.append(con)
    strict = any(c.rel == ">" for c in rows)

    # columns: per variable x+ (and x- when free), then s, then surplus per inequality
    col_of = []
    ncols = 0
    for j in range(nvars):
        if nonneg[j]:
            col_of.append((ncols, None))
            ncols += 1
        else:
            col_of.append((ncols, ncols + 1))
            ncols += 2
    s_col = None
    if strict:
        s_col = ncols
        ncols += 1
    surplus_start = ncols
    n_ineq = sum(1 for c in rows if c.rel != "=") + (1 if strict else 0)
    ncols += n_ineq
    art_start = ncols
    m = len(rows) + (1 if strict else 0)
    ncols += m

    T = []
    k = 0
    for con in rows:
        row = [ZERO] * (ncols + 1)
        for j, a in enumerate(con.coeffs):
            if a:
                pos, neg = col_of[j]
                row[pos] = a
                if neg is not None:
                    row[neg] = -a
        if con.rel != "=":
            row[surplus_start + k] = -ONE
            k += 1
        if con.rel == ">":
            row[s_col] = -ONE
        row[-1] = con.bound
        T.append(row)
    if strict:
        row = [ZERO] * (ncols + 1)
        row[s_col] = ONE
        row[surplus_start + k] = ONE
        row[-1] = ONE
        T.append(row)
    for i, row in enumerate(T):
        if row[-1] < 0:
            T[i] = row = [-v for v in row]
        row[art_start + i] = ONE
    basis = [art_start + i for i in range(m)]
    budget = [max_pivots]

    cost1 = [ZERO] * art_start + [ONE] * m
    _run_simplex(T, basis, cost1, [True] * ncols, budget)
    if sum((T[i][-1] for i, b in enumerate(basis) if b >= art_start), ZERO) != 0:
        return INFEASIBLE

    # drive zero-valued artificials out of the basis; drop redundant rows
    i = 0
    while i < len(T):
        if basis[i] >= art_start:
            col = next((j for j in range(art_start) if T[i][j]), None)
            if col is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, i, col)
            basis[i] = col
        i += 1

    allowed = [j < art_start for j in range(ncols)]
    if strict:
        cost2 = [ZERO] * ncols
        cost2[s_col] = -ONE
        _run_simplex(T, basis, cost2, allowed, budget)

    value = [ZERO] * ncols
    for i, b in enumerate(basis):
        value[b] = T[i][-1]
    if strict and value[s_col] <= 0:
        return INFEASIBLE
    xs = []
    for pos, neg in col_of:
        xs.append(value[pos] - (value[neg] if neg is not None else ZERO))
    return _checked(sys, xs)


# Fourier-Motzkin oracle

def _normalize(coeffs, bound, strict):
    """Scale so the first nonzero coefficient has magnitude 1."""
    lead = next((a for a in coeffs if a), None)
    if lead is None:
        return coeffs, bound, strict
    s = abs(lead)
    return tuple(a / s for a in coeffs), bound / s, strict


def _tighten(rows):
    """Keep only the tightest row for each coefficient direction."""
    best = {}
    for coeffs, bound, strict in rows:
        coeffs, bound, strict = _normalize(coeffs, bound, strict)
        cur = best.get(coeffs)
        if cur is None or bound > cur[0] or (bound == cur[0] and strict and not cur[1]):
            best[coeffs] = (bound, strict)
    return [(c, b, s) for c, (b, s) in best.items()]


def feasible_by_elimination(sys: LinearConstraintSystem, max_vars=DEFAULT_MAX_ELIM_VARS,
                            max_rows=DEFAULT_MAX_ELIM_ROWS) -> FeasibilityResult:
    """Fourier-Motzkin elimination with back-substitution for a witness."""
    n = len(sys.variables)
    if n > max_vars:
        raise TooManyVariables(f"{n} variables exceeds elimination limit {max_vars}")

    # rows are (coeffs, bound, strict) meaning coeffs·x >= bound (or > when strict)
    rows = []
    eqs = []
    for c in sys.constraints:
        if c.rel == "=":
            eqs.append((list(c.coeffs), c.bound))
        else:
            rows.append((tuple(c.coeffs), c.bound, c.rel == ">"))

    # equalities: solve for one variable and substitute everywhere
    substitutions = []  # (var, coeffs, const): x_var = const + coeffs·x
    while eqs:
        coeffs, bound = eqs.pop()
        j = next((k for k, a in enumerate(coeffs) if a), None)
        if j is None:
            if bound != 0:
                return INFEASIBLE
            continue
        a = coeffs[j]
        expr = [ZERO if k == j else -v / a for k, v in enumerate(coeffs)]
        const = bound / a
        substitutions.append((j, expr, const))

        def subst(cs, b):
            f = cs[j]
            if not f:
                return list(cs), b
            new = [v + f * e for v, e in zip(cs, expr)]
            new[j] = ZERO
            return new, b - f * const

        eqs = [subst(cs, b) for cs, b in eqs]
        rows = [(tuple(cs), b, st) for (cs, b), st in
                ((subst(cs, b), st) for cs, b, st in rows)]

    rows = _tighten(rows)
    remaining = [k for k in range(n) if k not in {s[0] for s in substitutions}]
    history = []  # (var, rows mentioning var at elimination time)
    while remaining:
        def cost(k):
            pos = sum(1 for c, _, _ in rows if c[k] > 0)
            neg = sum(1 for c, _, _ in rows if c[k] < 0)
            return pos * neg - pos - neg, k
        var = min(remaining, key=cost)
        remaining.remove(var)
        pos = [r for r in rows if r[0][var] > 0]
        neg = [r for r in rows if r[0][var] < 0]
        rest = [r for r in rows if r[0][var] == 0]
        history.append((var, pos + neg))
        for pc, pb, ps in pos:
            for nc, nb, ns in neg:
                fp, fn = pc[var], -nc[var]
                cs = tuple(fn * a + fp * b for a, b in zip(pc, nc))
                rest.append((cs, fn * pb + fp * nb, ps or ns))
        rows = _tighten(rest)
        if len(rows) > max_rows:
            raise ResourceLimit(f"elimination produced {len(rows)} rows")

    for _, bound, strict in rows:
        if bound > 0 or (strict and bound == 0):
            return INFEASIBLE

    values = [ZERO] * n
    for var, mentioned in reversed(history):
        lo = hi = None
        lo_strict = hi_strict = False
        for cs, b, strict in mentioned:
            a = cs[var]
            rest = sum((c * v for k, (c, v) in enumerate(zip(cs, values)) if k != var and c), ZERO)
            limit = (b - rest) / a
            if a > 0:
                if lo is None or limit > lo:
                    lo, lo_strict = limit, strict
                elif limit == lo:
                    lo_strict = lo_strict or strict
            else:
                if hi is None or limit < hi:
                    hi, hi_strict = limit, strict
                elif limit == hi:
                    hi_strict = hi_strict or strict
        if lo is not None and hi is not None:
            values[var] = lo if lo == hi else (lo + hi) / 2
        elif lo is not None:
            values[var] = lo + 1 if lo_strict else lo
        elif hi is not None:
            values[var] = hi - 1 if hi_strict else hi
    for var, expr, const in reversed(substitutions):
        values[var] = const + sum((e * v for e, v in zip(expr, values) if e), ZERO)
    return _checked(sys, values)
