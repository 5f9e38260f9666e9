"""Product spaces under the probabilistic-sum metric 1 - prod(1 - d_i).

Product points are tuples of component point identifiers; in files and in
the expanded frame they are written joined by ``"|"``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product as cartesian
from math import prod

from .errors import (FrameTooLarge, InvalidJoint, OutOfRange, UnknownComponent,
                     UnknownPoint)
from .rational import to_fraction
from .space import (Frame, MetricProbSpace, expected_distance, iter_bits,
                    revalidate, set_distance)

ONE = Fraction(1)
ZERO = Fraction(0)

DEFAULT_PRODUCT_BOUND = 4096
# full O(N^3) triangle check on construction only up to this many tuples
DEFAULT_VALIDATE_LIMIT = 512

SEP = "|"


def lambda_combine(distances) -> Fraction:
    """1 - prod(1 - d_i) for component distances in [0, 1]."""
    ds = [to_fraction(d) for d in distances]
    for d in ds:
        if not 0 <= d <= 1:
            raise OutOfRange(f"component distance {d} outside [0, 1]")
    return 1 - prod((1 - d for d in ds), start=ONE)


class ProductMetric:
    """Lazy product pseudometric over the cartesian product of components."""

    def __init__(self, components, coords):
        self.components = components
        self.coords = coords

    def __len__(self):
        return len(self.coords)

    def __call__(self, i, j):
        if i == j:
            return ZERO
        sim = ONE
        for space, a, b in zip(self.components, self.coords[i], self.coords[j]):
            sim *= 1 - space.metric(a, b)
            if not sim:
                return ONE
        return 1 - sim

    def to_rows(self):
        n = len(self.coords)
        return [[self(i, j) for j in range(n)] for i in range(n)]

    def distances_to(self, mask, rows=None):
        rows = range(len(self.coords)) if rows is None else rows
        if mask == 0:
            return [ONE for _ in rows]
        members = iter_bits(mask)
        return [min(self(i, j) for j in members) for i in rows]


@dataclass(frozen=True)
class ProductSpace:
    components: tuple[MetricProbSpace, ...]
    space: MetricProbSpace
    coords: tuple[tuple[int, ...], ...]

    @property
    def arity(self):
        return len(self.components)

    def index_of(self, point):
        """Index of a product point given as a tuple or as an ``"a|b"`` string."""
        if isinstance(point, str):
            return self.space.frame.index(point)
        ids = tuple(point)
        if len(ids) != self.arity:
            raise UnknownPoint(f"tuple {point!r} has wrong arity")
        return self.space.frame.index(SEP.join(ids))

    def point(self, index):
        return tuple(c.points[k] for c, k in zip(self.components, self.coords[index]))


def _tuple_key(key):
    return key if isinstance(key, str) else SEP.join(key)


def build_product(components, joint=None, *, max_points=DEFAULT_PRODUCT_BOUND,
                  validate_limit=DEFAULT_VALIDATE_LIMIT) -> ProductSpace:
    """Product of two or more spaces.

    ``joint`` maps product points (tuples or ``"a|b"`` strings) to
    probabilities; missing tuples get 0.  Without it the independent product
    of the component probabilities is used.
    """
    components = tuple(components)
    if len(components) < 2:
        raise ValueError("a product needs at least two components")
    size = prod(len(c) for c in components)
    if size > max_points:
        raise FrameTooLarge(f"product has {size} tuples, bound is {max_points}")
    for c in components:
        bad = [p for p in c.points if SEP in p]
        if bad:
            raise ValueError(f"point identifier {bad[0]!r} contains {SEP!r}")

    coords = tuple(cartesian(*(range(len(c)) for c in components)))
    names = tuple(SEP.join(c.points[k] for c, k in zip(components, t)) for t in coords)
    frame = Frame(names)

    if joint is None:
        weights = tuple(prod((c.prob[k] for c, k in zip(components, t)), start=ONE)
                        for t in coords)
    else:
        w = [ZERO] * size
        for key, value in joint.items():
            name = _tuple_key(key)
            try:
                idx = frame.index(name)
            except UnknownPoint:
                raise InvalidJoint(f"joint entry {name!r} is not a product point") from None
            v = to_fraction(value)
            if v < 0:
                raise InvalidJoint(f"negative joint probability {v} at {name!r}")
            w[idx] += v
        total = sum(w, ZERO)
        if total != 1:
            raise InvalidJoint(f"joint probabilities sum to {total}")
        weights = tuple(w)

    metric = ProductMetric(components, coords)
    space = MetricProbSpace(frame, metric, weights)
    if size <= validate_limit:
        revalidate(space)
    return ProductSpace(components, space, coords)


def marginal(ps: ProductSpace, i: int) -> tuple[Fraction, ...]:
    _check_component(ps, i)
    out = [ZERO] * len(ps.components[i])
    for t, w in zip(ps.coords, ps.space.prob):
        out[t[i]] += w
    return tuple(out)


def _check_component(ps, i):
    if not isinstance(i, int) or not 0 <= i < ps.arity:
        raise UnknownComponent(f"component {i!r} not in 0..{ps.arity - 1}")


def cylinder(ps: ProductSpace, i: int, A) -> int:
    """Mask of Ω_1 × … × A × … × Ω_n inside the product frame."""
    _check_component(ps, i)
    amask = ps.components[i].mask(A)
    out = 0
    for idx, t in enumerate(ps.coords):
        if amask >> t[i] & 1:
            out |= 1 << idx
    return out


def rectangle(ps: ProductSpace, rects) -> int:
    """Mask of A_1 × … × A_n."""
    masks = [c.mask(a) for c, a in zip(ps.components, rects)]
    if len(masks) != ps.arity:
        raise UnknownComponent("one subset per component is required")
    out = 0
    for idx, t in enumerate(ps.coords):
        if all(m >> k & 1 for m, k in zip(masks, t)):
            out |= 1 << idx
    return out


def product_set_distance(ps: ProductSpace, x, rects) -> Fraction:
    """Distance from a product point to A_1 × … × A_n.

    Computed both from the per-component distances and by a direct minimum
    over the rectangle; the two must agree.  An empty A_i gives 1 on both
    routes.
    """
    idx = ps.index_of(x)
    xt = ps.point(idx)
    factored = lambda_combine(set_distance(c, xi, a)
                              for c, xi, a in zip(ps.components, xt, rects))
    mask = rectangle(ps, rects)
    direct = ONE if mask == 0 else min(ps.space.metric(idx, j) for j in iter_bits(mask))
    if factored != direct:
        raise AssertionError(f"product distance mismatch: {factored} != {direct}")
    return factored


def rectangle_distance(components, A, B) -> Fraction:
    """min over point pairs of the product metric between two rectangles.

    Works for any number of components (one included) without building the
    product frame.
    """
    comps = list(components)
    amasks = [c.mask(a) for c, a in zip(comps, A)]
    bmasks = [c.mask(b) for c, b in zip(comps, B)]
    if any(m == 0 for m in amasks + bmasks):
        return ONE
    # 1 - Λ factorises, so the minimum splits per coordinate
    sims = []
    for c, am, bm in zip(comps, amasks, bmasks):
        sims.append(max(1 - c.metric(i, j) for i in iter_bits(am) for j in iter_bits(bm)))
    return 1 - prod(sims, start=ONE)


def rectangle_distance_brute(components, A, B) -> Fraction:
    comps = list(components)
    asets = [list(iter_bits(c.mask(a))) for c, a in zip(comps, A)]
    bsets = [list(iter_bits(c.mask(b))) for c, b in zip(comps, B)]
    best = ONE
    for xs in cartesian(*asets):
        for ys in cartesian(*bsets):
            d = lambda_combine(c.metric(i, j) for c, i, j in zip(comps, xs, ys))
            best = min(best, d)
    return best


def independent_relative_to_ed(ps: ProductSpace, events) -> bool:
    """Check 1 - ed(∩_{i∈I} A_i) = Π_{i∈I} (1 - ed(A_i)) for every non-empty I.

    ``events`` maps component index to a subset of that component's frame;
    each A_i is read as its cylinder in the product.
    """
    items = sorted(events.items())
    for i, _ in items:
        _check_component(ps, i)
    cyl = {i: cylinder(ps, i, a) for i, a in items}
    single = {i: expected_distance(ps.space, m) for i, m in cyl.items()}
    keys = [i for i, _ in items]
    for r in range(1, len(keys) + 1):
        for sub in combinations(keys, r):
            inter = ps.space.frame.full
            for i in sub:
                inter &= cyl[i]
            lhs = 1 - expected_distance(ps.space, inter)
            rhs = prod((1 - single[i] for i in sub), start=ONE)
            if lhs != rhs:
                return False
    return True

