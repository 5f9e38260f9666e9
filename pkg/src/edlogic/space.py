"""Finite metric probability spaces and the expected-distance measure.

Subsets of a frame are encoded as integer bitmasks: bit ``i`` is set when
``frame.points[i]`` is a member.  Public functions accept either a bitmask
or an iterable of point identifiers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from .errors import AxiomViolation, EDError, FrameTooLarge, UnknownPoint
from .rational import to_fraction

ONE = Fraction(1)
ZERO = Fraction(0)

DEFAULT_POWERSET_BOUND = 16


class ShapeMismatch(EDError):
    pass


def iter_bits(mask):
    """Indices of set bits, lowest first."""
    if mask < 0:
        raise ValueError("negative mask")
    bits = bin(mask)[:1:-1]
    return [i for i, c in enumerate(bits) if c == "1"]


@dataclass(frozen=True)
class Frame:
    points: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        pts = tuple(str(p) for p in self.points)
        if not pts:
            raise ShapeMismatch("frame must be non-empty")
        if len(set(pts)) != len(pts):
            dup = next(p for p in pts if pts.count(p) > 1)
            raise ShapeMismatch(f"duplicate point identifier {dup!r}")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(pts)})

    def __len__(self):
        return len(self.points)

    @property
    def full(self):
        return (1 << len(self.points)) - 1

    def index(self, point):
        try:
            return self._index[point]
        except KeyError:
            raise UnknownPoint(f"unknown point {point!r}") from None

    def mask(self, subset):
        """Bitmask for ``subset`` (a mask already, or point identifiers)."""
        if isinstance(subset, int):
            if subset < 0 or subset > self.full:
                raise UnknownPoint(f"mask {subset} outside frame of {len(self)} points")
            return subset
        m = 0
        for p in subset:
            m |= 1 << self.index(p)
        return m

    def members(self, mask):
        return tuple(self.points[i] for i in iter_bits(mask))


class MatrixMetric:
    """Pseudometric stored as a dense square matrix of Fractions."""

    def __init__(self, dist: Sequence[Sequence[Fraction]]):
        self.dist = tuple(tuple(row) for row in dist)

    def __len__(self):
        return len(self.dist)

    def __call__(self, i, j):
        return self.dist[i][j]

    def __eq__(self, other):
        return isinstance(other, MatrixMetric) and self.dist == other.dist

    def __hash__(self):
        return hash(self.dist)

    def to_rows(self):
        return [list(row) for row in self.dist]

    def distances_to(self, mask, rows=None):
        """d(x, U) for every point x (or for the indices in ``rows``)."""
        rows = range(len(self.dist)) if rows is None else rows
        if mask == 0:
            return [ONE for _ in rows]
        members = iter_bits(mask)
        return [min(self.dist[i][j] for j in members) for i in rows]


class PartitionMetric:
    """Crisp pseudometric induced by a partition: 0 inside a block, 1 across.

    Such a function is always a 1-bounded pseudometric, so large spaces
    can use it without an O(n^3) triangle check.
    """

    def __init__(self, blocks: Sequence[int]):
        self.blocks = tuple(blocks)

    def __len__(self):
        return len(self.blocks)

    def __call__(self, i, j):
        return ZERO if i == j or self.blocks[i] == self.blocks[j] else ONE

    def __eq__(self, other):
        return isinstance(other, PartitionMetric) and self.blocks == other.blocks

    def __hash__(self):
        return hash(self.blocks)

    def to_rows(self):
        n = len(self.blocks)
        return [[self(i, j) for j in range(n)] for i in range(n)]

    def distances_to(self, mask, rows=None):
        rows = range(len(self.blocks)) if rows is None else rows
        hit = {self.blocks[j] for j in iter_bits(mask)}
        return [ZERO if self.blocks[i] in hit else ONE for i in rows]


@dataclass(frozen=True)
class MetricProbSpace:
    frame: Frame
    metric: MatrixMetric | PartitionMetric
    prob: tuple[Fraction, ...]

    @property
    def points(self):
        return self.frame.points

    def __len__(self):
        return len(self.frame)

    def d(self, x, y):
        return self.metric(self.frame.index(x), self.frame.index(y))

    def mask(self, subset):
        return self.frame.mask(subset)

    def support(self):
        return [i for i, p in enumerate(self.prob) if p]

    def to_dense(self):
        return MetricProbSpace(self.frame, MatrixMetric(self.metric.to_rows()), self.prob)


@dataclass(frozen=True)
class MeasureQuad:
    ed: Fraction
    es: Fraction
    ea: Fraction
    er: Fraction

    def as_dict(self):
        return {"ed": self.ed, "es": self.es, "ea": self.ea, "er": self.er}


def _check_triangle(rows):
    """Return (x, y, z) with d(x,y) + d(y,z) < d(x,z), or None."""
    n = len(rows)
    if n < 3:
        return None
    den = 1
    for row in rows:
        for v in row:
            den = lcm(den, v.denominator)
    # exact on integers; fall back to Fraction loops when numerators would overflow
    if den < 2**40:
        mat = np.array([[int(v * den) for v in row] for row in rows], dtype=np.int64)
        for y in range(n):
            bad = mat[:, y, None] + mat[None, y, :] < mat
            if bad.any():
                x, z = np.argwhere(bad)[0]
                return int(x), y, int(z)
        return None
    for y in range(n):
        for x in range(n):
            dxy = rows[x][y]
            for z in range(n):
                if dxy + rows[y][z] < rows[x][z]:
                    return x, y, z
    return None


def validate_space(points, metric, prob) -> MetricProbSpace:
    """Build a :class:`MetricProbSpace`, raising on the first violated axiom.

    ``metric`` is either a square matrix of numbers (anything accepted by
    :func:`to_fraction`) or a :class:`PartitionMetric`.  Checks run in the
    order PMet1, PMet2, PMet4, PMet3, Prob1, Prob2.
    """
    frame = Frame(tuple(points))
    n = len(frame)
    pts = frame.points
    weights = tuple(to_fraction(w) for w in prob)
    if len(weights) != n:
        raise ShapeMismatch(f"{len(weights)} weights for {n} points")

    if isinstance(metric, PartitionMetric):
        if len(metric) != n:
            raise ShapeMismatch(f"partition of {len(metric)} points for {n} points")
        met = metric
    else:
        if isinstance(metric, MatrixMetric):
            metric = metric.dist
        rows = [tuple(to_fraction(v) for v in row) for row in metric]
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ShapeMismatch(f"metric must be {n}x{n}")
        for i in range(n):
            if rows[i][i] != 0:
                raise AxiomViolation("PMet1", (pts[i],), f"d = {rows[i][i]}")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise AxiomViolation("PMet2", (pts[i], pts[j]),
                                         f"{rows[i][j]} != {rows[j][i]}")
        for i in range(n):
            for j in range(n):
                if not 0 <= rows[i][j] <= 1:
                    raise AxiomViolation("PMet4", (pts[i], pts[j]),
                                         f"d = {rows[i][j]} outside [0, 1]")
        bad = _check_triangle(rows)
        if bad is not None:
            x, y, z = bad
            raise AxiomViolation("PMet3", (pts[x], pts[y], pts[z]),
                                 f"{rows[x][y]} + {rows[y][z]} < {rows[x][z]}")
        met = MatrixMetric(rows)

    for i, w in enumerate(weights):
        if w < 0:
            raise AxiomViolation("Prob1", (pts[i],), f"P = {w}")
    total = sum(weights, ZERO)
    if total != 1:
        raise AxiomViolation("Prob2", (), f"total probability {total}")
    return MetricProbSpace(frame, met, weights)


def revalidate(space: MetricProbSpace) -> MetricProbSpace:
    """Run every axiom check on an existing space (dense form)."""
    dense = space.metric if isinstance(space.metric, MatrixMetric) else MatrixMetric(space.metric.to_rows())
    return validate_space(space.points, dense, space.prob)


def set_distance(space: MetricProbSpace, x, U) -> Fraction:
    """min over U of d(x, y); 1 for the empty set."""
    i = space.frame.index(x)
    mask = space.mask(U)
    if mask == 0:
        return ONE
    return min(space.metric(i, j) for j in iter_bits(mask))


def expected_distance(space: MetricProbSpace, U) -> Fraction:
    mask = space.mask(U)
    support = space.support()
    dist = space.metric.distances_to(mask, support)
    return sum((d * space.prob[i] for d, i in zip(dist, support)), ZERO)


def dual_measures(space: MetricProbSpace, U) -> MeasureQuad:
    mask = space.mask(U)
    ed = expected_distance(space, mask)
    ea = expected_distance(space, space.frame.full & ~mask)
    return MeasureQuad(ed=ed, es=1 - ed, ea=ea, er=1 - ea)


def ed_set_function(space: MetricProbSpace, max_points=DEFAULT_POWERSET_BOUND):
    """Tabulate ed over the full powerset of the frame."""
    from .evidence import SetFunction

    n = len(space)
    if n > max_points:
        raise FrameTooLarge(f"{n} points exceeds powerset bound {max_points}")
    size = 1 << n
    support = space.support()
    # dist[U][x] built incrementally: d(x, U) = min(d(x, U - low), d(x, low))
    per_point = {x: [ONE] * size for x in support}
    for mask in range(1, size):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        for x in support:
            tab = per_point[x]
            dxl = space.metric(x, low)
            tab[mask] = dxl if rest == 0 else min(tab[rest], dxl)
    values = [sum((per_point[x][m] * space.prob[x] for x in support), ZERO) for m in range(size)]
    return SetFunction(space.frame, tuple(values))
