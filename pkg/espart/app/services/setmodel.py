"""Interval unions on the torus [0, 1) and cover costs."""
import math
from typing import Iterable, List, Sequence, Tuple
from app.core.errors import ConfigError, InputError
from app.models.sets import CoverSpec, IntervalUnion
from app.schemas.reports import CoverCost
import logging

logger = logging.getLogger(__name__)

Pair = Tuple[float, float]


def _arc_pieces(a: float, b: float) -> List[Pair]:
    """Pieces in [0, 1] of the arc from a to b (a > b wraps forward through the seam)."""
    if 0.0 <= a < b <= 1.0:
        return [(a, b)]
    if a < b and b - a >= 1.0:
        return [(0.0, 1.0)]
    start, end = a - math.floor(a), b - math.floor(b)
    if start == end:
        return []
    if start < end:
        return [(start, end)]
    return [(start, 1.0), (0.0, end)]


def normalize(intervals: Iterable[Sequence[float]]) -> IntervalUnion:
    """Canonical disjoint union of raw (a, b) pairs taken mod 1."""
    pieces: List[Pair] = []
    for pair in intervals:
        if len(pair) != 2:
            raise InputError(f"interval must be a pair, got {pair!r}")
        a, b = float(pair[0]), float(pair[1])
        if not (math.isfinite(a) and math.isfinite(b)):
            raise InputError(f"non-finite interval endpoint in ({a}, {b})")
        pieces.extend(_arc_pieces(a, b))

    merged: List[Pair] = []
    for a, b in sorted(p for p in pieces if p[1] > p[0]):
        if merged and a <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], b))
        else:
            merged.append((a, b))
    return IntervalUnion(intervals=tuple(merged))


def complement(u: IntervalUnion) -> IntervalUnion:
    gaps: List[Pair] = []
    cursor = 0.0
    for a, b in u.intervals:
        if a > cursor:
            gaps.append((cursor, a))
        cursor = b
    if cursor < 1.0:
        gaps.append((cursor, 1.0))
    return IntervalUnion(intervals=tuple(gaps))


def intersect(u: IntervalUnion, v: IntervalUnion) -> IntervalUnion:
    result: List[Pair] = []
    i = j = 0
    while i < len(u.intervals) and j < len(v.intervals):
        a = max(u.intervals[i][0], v.intervals[j][0])
        b = min(u.intervals[i][1], v.intervals[j][1])
        if a < b:
            result.append((a, b))
        if u.intervals[i][1] < v.intervals[j][1]:
            i += 1
        else:
            j += 1
    return IntervalUnion(intervals=tuple(result))


def contains(outer: IntervalUnion, inner: IntervalUnion, tol: float = 1e-12) -> bool:
    """True when inner \\ outer has measure at most tol."""
    return intersect(inner, complement(outer)).measure <= tol


def cover_cost(c: CoverSpec) -> CoverCost:
    """Head sum up to Z plus the alpha-power tail beyond Z."""
    head = c.head_sum(c.Z)
    try:
        tail_alpha = c.power_tail(c.Z, c.alpha)
    except ConfigError:
        logger.error(f"Divergent tail under alpha={c.alpha}")
        raise
    total = head + tail_alpha
    logger.debug(f"cover cost head={head} tail={tail_alpha} total={total}")
    return CoverCost(head=head, tail_alpha=tail_alpha, total=total, satisfied=total < 1.0)


def sum_lengths(c: CoverSpec) -> float:
    """F_bar = sum of all lengths, an upper bound for |union of E_n|."""
    return c.power_tail(0, 1.0)


def realize_cover(c: CoverSpec, n_max: int) -> IntervalUnion:
    """Union of the first n_max intervals [center - l/2, center + l/2] mod 1."""
    if c.centers is None or len(c.centers) < n_max:
        have = 0 if c.centers is None else len(c.centers)
        raise ConfigError(f"cover has {have} centers, {n_max} needed")
    raw = []
    for n in range(1, n_max + 1):
        half = c.length(n) / 2
        if half > 0:
            center = c.centers[n - 1]
            raw.append((center - half, center + half))
    return normalize(raw)
