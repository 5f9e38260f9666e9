"""Random generators shared by the test modules (plain ``random.Random``)."""

from fractions import Fraction

from edlogic.evidence import MassFunction
from edlogic.space import Frame, validate_space
from edlogic.syntax import (FALSE, RELATIONS, TRUE, And, Basic, EDTerm, Not, Or, PropAnd,
                            PropNot, PropOr, PropVar)


def rand_unit(rng, dens=(1, 2, 3, 4, 5, 6, 8, 10)):
    d = rng.choice(dens)
    return Fraction(rng.randint(0, d), d)


def rand_metric(rng, n, zero_bias=0.15):
    """Random 1-bounded pseudometric: random symmetric weights closed under shortest paths."""
    d = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = Fraction(0) if rng.random() < zero_bias else rand_unit(rng)
            d[i][j] = d[j][i] = v
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return d


def rand_prob(rng, n, zero_bias=0.2):
    w = [0 if rng.random() < zero_bias else rng.randint(1, 9) for _ in range(n)]
    if not any(w):
        w[rng.randrange(n)] = 1
    total = sum(w)
    return [Fraction(x, total) for x in w]


def rand_space(rng, n=None, lo=1, hi=5, names=None):
    n = n if n is not None else rng.randint(lo, hi)
    names = names or [f"p{i}" for i in range(n)]
    return validate_space(names, rand_metric(rng, n), rand_prob(rng, n))


def rand_mass_table(rng, size, sparsity=0.5):
    """Mass values indexed by bitmask over ``size`` subsets, m(empty) = 0."""
    w = [0] + [rng.randint(1, 9) if rng.random() < sparsity else 0 for _ in range(size - 1)]
    if not any(w):
        w[rng.randrange(1, size)] = 1
    total = sum(w)
    return [Fraction(x, total) for x in w]


def rand_mass(rng, n_points):
    frame = Frame(tuple(f"w{i}" for i in range(n_points)))
    return MassFunction(frame, tuple(rand_mass_table(rng, 1 << n_points)))


def rand_rationals(rng, length, lo=-20, hi=20):
    return [Fraction(rng.randint(lo, hi), rng.randint(1, 7)) for _ in range(length)]


def rand_positive_rationals(rng, length):
    return [Fraction(rng.randint(1, 30), rng.randint(1, 7)) for _ in range(length)]


# formulas

def rand_prop(rng, names, depth=2):
    if depth == 0 or rng.random() < 0.35:
        r = rng.random()
        if r < 0.08:
            return TRUE
        if r < 0.16:
            return FALSE
        return PropVar(rng.choice(names))
    kind = rng.randrange(3)
    if kind == 0:
        return PropNot(rand_prop(rng, names, depth - 1))
    cls = PropAnd if kind == 1 else PropOr
    return cls(rand_prop(rng, names, depth - 1), rand_prop(rng, names, depth - 1))


def rand_basic(rng, names, terms=2, depth=2):
    summands = tuple((Fraction(rng.randint(-4, 4) or 1, rng.randint(1, 3)),
                      rand_prop(rng, names, depth)) for _ in range(rng.randint(1, terms)))
    return Basic(EDTerm(summands), rng.choice(RELATIONS), Fraction(rng.randint(-2, 6), 4))


def rand_formula(rng, names, depth=2):
    if depth == 0 or rng.random() < 0.3:
        return rand_basic(rng, names)
    kind = rng.randrange(3)
    if kind == 0:
        return Not(rand_formula(rng, names, depth - 1))
    cls = And if kind == 1 else Or
    return cls(rand_formula(rng, names, depth - 1), rand_formula(rng, names, depth - 1))


def rand_atom_mass(rng, n, sparsity=0.4):
    """Random mass over atom sets of an n-atom basis, as {mask: value}."""
    table = rand_mass_table(rng, 1 << n, sparsity)
    return {J: v for J, v in enumerate(table) if v}


def rand_consistent_formula(rng, props, mass_e, literals=3):
    """Conjunction of relations that the given e-values make true.

    ``mass_e(psi)`` returns the exact e-value of a proposition; each literal
    is built around that value so the sampled mass is a witness.
    """
    out = []
    for _ in range(literals):
        summands = tuple((Fraction(rng.randint(-3, 3) or 1, rng.randint(1, 2)),
                          rand_prop(rng, props, 2)) for _ in range(rng.randint(1, 2)))
        value = sum(c * mass_e(p) for c, p in summands)
        slack = Fraction(rng.randint(1, 4), 8)
        rel, bound = rng.choice([("=", value), (">=", value), ("<=", value),
                                 (">", value - slack), ("<", value + slack),
                                 (">=", value - slack)])
        out.append(Basic(EDTerm(summands), rel, bound))
    f = out[0]
    for b in out[1:]:
        f = And(f, b)
    if rng.random() < 0.3:
        # a disjunct that may or may not hold keeps the DNF non-trivial
        f = Or(rand_basic(rng, props), f) if rng.random() < 0.5 else Or(f, rand_basic(rng, props))
    return f
