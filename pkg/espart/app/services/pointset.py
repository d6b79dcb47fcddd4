"""Finite-window estimators of Beurling densities and dimensions on the line.

Sup over centres x is exact for closed windows: a window can always slide until its left
end sits on a point without losing points. Inf over centres is restricted to cubes lying
inside the observed span; with no such cube it is 0.
"""
import math
from typing import List, Optional, Sequence, Tuple
import numpy as np
from scipy import stats
from app.core.config import settings
from app.core.errors import ConfigError, DomainError
from app.core.parallel import parallel_map
from app.models.points import PointSetWindow
from app.schemas.reports import DensityReport, DimensionReport, DiscretenessProfile
import logging

logger = logging.getLogger(__name__)


def count_in_cube(w: PointSetWindow, x: float, h: float) -> int:
    """#(L ∩ [x - h, x + h])."""
    if h <= 0:
        raise DomainError(f"cube half-width must be positive, got {h}")
    arr = w.array
    return int(np.searchsorted(arr, x + h, side="right") - np.searchsorted(arr, x - h, side="left"))


def covers_cube(w: PointSetWindow, x: float, h: float) -> bool:
    """Whether a count over Q_h(x) is representative (not cut by the window edges)."""
    if w.window_certified:
        return True
    if not len(w):
        return False
    tol = 1e-12 * max(1.0, abs(x) + h)
    return w.points[0] <= x - h + tol and x + h - tol <= w.points[-1]


def separation(w: PointSetWindow) -> float:
    if len(w) < 2:
        raise DomainError("separation needs at least 2 points")
    return float(np.min(np.diff(w.array)))


def dense_radius(w: PointSetWindow) -> float:
    """Smallest h for which the window is h-dense: half the largest gap."""
    if len(w) < 2:
        raise DomainError("dense radius needs at least 2 points")
    return float(np.max(np.diff(w.array))) / 2


def max_count(w: PointSetWindow, r: float) -> int:
    """sup_x #(L ∩ Q_r(x))."""
    if r <= 0:
        raise DomainError(f"scale must be positive, got {r}")
    arr = w.array
    if not arr.size:
        return 0
    right = np.searchsorted(arr, arr + 2 * r, side="right")
    return int(np.max(right - np.arange(arr.size)))


def covering_multiplicity(w: PointSetWindow, h: float) -> int:
    """sup_x #{lambda : x in Q_h(lambda)}; equal to the sup count since |x - lambda| <= h is symmetric."""
    return max_count(w, h)


def min_count_inside(w: PointSetWindow, h: float) -> int:
    """inf of #(L ∩ Q_h(x)) over centres whose cube lies inside the window span."""
    if h <= 0:
        raise DomainError(f"scale must be positive, got {h}")
    arr = w.array
    if not arr.size:
        return 0
    lo, hi = arr[0] + h, arr[-1] - h
    if lo > hi:
        return 0
    if lo == hi:
        centres = np.array([lo])
    else:
        # the count is constant between breakpoints and only larger on them
        breaks = np.concatenate([arr - h, arr + h, [lo, hi]])
        breaks = np.unique(breaks[(breaks >= lo) & (breaks <= hi)])
        centres = (breaks[:-1] + breaks[1:]) / 2
    counts = np.searchsorted(arr, centres + h, side="right") - np.searchsorted(arr, centres - h, side="left")
    return int(np.min(counts))


def d_plus_profile(w: PointSetWindow, alpha: float, r: float) -> float:
    """D+_{alpha,L}(r) = sup_x #(L ∩ Q_r(x)) / r**alpha."""
    if alpha < 0:
        raise DomainError(f"alpha must be nonnegative, got {alpha}")
    return max_count(w, r) / r ** alpha


def discreteness_profile(w: PointSetWindow, h: float) -> DiscretenessProfile:
    """Sup and inf counts at scale h; truncated when no cube of half-width h fits in the window."""
    centre = (w.points[0] + w.points[-1]) / 2 if len(w) else 0.0
    return DiscretenessProfile(
        h=h,
        sup_count=max_count(w, h),
        inf_count=min_count_inside(w, h),
        truncated=not covers_cube(w, centre, h),
    )


def _check_grid(h_grid: Sequence[float], name: str = "h_grid") -> np.ndarray:
    grid = np.asarray(list(h_grid), dtype=float)
    if not grid.size:
        raise ConfigError(f"{name} is empty")
    if np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise ConfigError(f"{name} must be positive and increasing")
    return grid


def _profiles(w: PointSetWindow, grid: np.ndarray) -> Tuple[List[int], List[int], List[bool]]:
    profiles = parallel_map(lambda h: discreteness_profile(w, float(h)), grid)
    return [p.sup_count for p in profiles], [p.inf_count for p in profiles], [p.truncated for p in profiles]


def scale_grid(w: PointSetWindow, steps: Optional[int] = None, h_min: float = 1.0) -> List[float]:
    """Geometric grid from h_min to half the window span."""
    steps = steps or settings.DIM_STEPS
    h_max = w.span / 2
    if h_max <= h_min:
        raise ConfigError(
            f"window span {w.span} is too small for a scale grid starting at {h_min}",
            {"span": w.span},
        )
    return [float(h) for h in np.geomspace(h_min, h_max, steps)]


def density_estimate(w: PointSetWindow, r: float, h_grid: Sequence[float]) -> DensityReport:
    """Per-scale sup/inf of count / h**r; the estimates use the largest third of the scales."""
    if r <= 0:
        raise DomainError(f"density exponent must be positive, got {r}")
    grid = _check_grid(h_grid)
    sup_counts, inf_counts, cut = _profiles(w, grid)
    sup_curve = [c / h ** r for c, h in zip(sup_counts, grid)]
    inf_curve = [c / h ** r for c, h in zip(inf_counts, grid)]

    tail = max(1, math.ceil(len(grid) / 3))
    d_plus = max(sup_curve[-tail:])
    d_minus = min(inf_curve[-tail:])
    truncated = any(cut)
    if truncated:
        logger.warning(f"Scale grid reaches {grid[-1]} beyond half the window span {w.span / 2}")
    if d_plus == 0:
        uniform = bool(d_minus == 0)
    else:
        uniform = bool(abs(d_plus - d_minus) <= 0.05 * d_plus)

    return DensityReport(
        r=r,
        h_values=[float(h) for h in grid],
        sup_counts=sup_counts,
        inf_counts=inf_counts,
        sup_curve=sup_curve,
        inf_curve=inf_curve,
        d_plus_estimate=d_plus,
        d_minus_estimate=d_minus,
        truncated=truncated,
        uniform=uniform,
    )


def _slope(h: np.ndarray, counts: np.ndarray) -> float:
    fit = stats.linregress(np.log(h), np.log(counts))
    return float(fit.slope)


def sup_corners(w: PointSetWindow, h_min: float = 0.0, h_max: float = math.inf) -> Tuple[np.ndarray, np.ndarray]:
    """Corners of the sup-count staircase: for each count c >= 2, the smallest h with
    sup_x #(L ∩ Q_h(x)) = c, i.e. half the narrowest span of c consecutive points.

    Counts are sampled geometrically once the window has more than DIM_CORNERS points.
    """
    arr = w.array
    if arr.size < 2:
        return np.empty(0), np.empty(0, dtype=int)
    counts = np.arange(2, arr.size + 1)
    if counts.size > settings.DIM_CORNERS:
        counts = np.unique(np.round(np.geomspace(2, arr.size, settings.DIM_CORNERS)).astype(int))
    h = np.array([np.min(arr[c - 1:] - arr[:arr.size - c + 1]) / 2 for c in counts])
    keep = (h >= h_min) & (h <= h_max)
    return h[keep], counts[keep]


def upper_dimension(h: np.ndarray, counts: np.ndarray, factor: float) -> Tuple[float, float, float, int]:
    """Largest log-log slope of the staircase over windows spanning a factor `factor` in h.

    Returns (slope, h_lo, h_hi, corners). The maximum over windows stands in for the lim sup;
    a single fit over all scales averages in the plateaus of sets that grow in bursts.
    """
    log_h = np.log(h)
    best: Optional[Tuple[float, float, float, int]] = None
    for i in range(log_h.size):
        k = int(np.searchsorted(log_h, log_h[i] + math.log(factor)))
        if k >= log_h.size:
            break
        if k - i + 1 < 3:
            continue
        slope = _slope(h[i:k + 1], counts[i:k + 1])
        if best is None or slope > best[0]:
            best = (slope, float(h[i]), float(h[k]), k - i + 1)
    if best is None:
        if h.size < 3:
            raise ConfigError(f"degenerate regression: {h.size} staircase corners in range")
        best = (_slope(h, counts), float(h[0]), float(h[-1]), int(h.size))
    return best


def dim_estimate(
    w: PointSetWindow,
    r_grid: Sequence[float],
    h_grid: Sequence[float],
    fit_fraction: Optional[float] = None,
    window_factor: Optional[float] = None,
) -> DimensionReport:
    """dim+ from the sup-count staircase inside [h_grid[0], h_grid[-1]]; dim- from a log-log
    regression of the inf count over the largest `fit_fraction` of the grid.

    Trailing scales where the sup count has stopped growing are dropped from the dim- fit:
    there the window is saturated, not the set.
    """
    grid = _check_grid(h_grid)
    r_values = _check_grid(r_grid, "r_grid")
    fraction = settings.DIM_FIT_FRACTION if fit_fraction is None else fit_fraction
    if not 0 < fraction <= 1:
        raise ConfigError(f"fit fraction must lie in (0, 1], got {fraction}")
    factor = settings.DIM_WINDOW_FACTOR if window_factor is None else window_factor
    if not factor > 1:
        raise ConfigError(f"window factor must exceed 1, got {factor}")

    sup_counts, inf_counts, _ = _profiles(w, grid)
    last = len(grid) - 1
    while last > 0 and sup_counts[last - 1] == sup_counts[-1]:
        last -= 1
    kept = last + 1
    if kept < 3 or sup_counts[0] == 0:
        raise ConfigError(
            f"degenerate regression: {kept} usable scales",
            {"h_values": [float(h) for h in grid], "sup_counts": sup_counts},
        )
    corner_h, corner_counts = sup_corners(w, grid[0], grid[-1])
    dim_plus, fit_lo, fit_hi, n_fit = upper_dimension(corner_h, corner_counts, factor)

    n_inf = min(kept, max(3, math.ceil(fraction * kept)))
    fit_h = grid[kept - n_inf:kept]
    fit_inf = np.asarray(inf_counts[kept - n_inf:kept], dtype=float)
    positive = fit_inf > 0
    dim_minus = _slope(fit_h[positive], fit_inf[positive]) if np.count_nonzero(positive) >= 3 else 0.0

    tail = max(1, math.ceil(len(grid) / 3))
    d_plus_by_r = [max(c / h ** r for c, h in zip(sup_counts[-tail:], grid[-tail:])) for r in r_values]
    d_minus_by_r = [min(c / h ** r for c, h in zip(inf_counts[-tail:], grid[-tail:])) for r in r_values]

    logger.info(
        f"Dimension estimate: dim+={dim_plus:.4f} on h in [{fit_lo:g}, {fit_hi:g}] ({n_fit} corners), "
        f"dim-={dim_minus:.4f}"
    )
    return DimensionReport(
        dim_plus=min(1.0, max(0.0, dim_plus)),
        dim_minus=min(1.0, max(0.0, dim_minus)),
        h_values=[float(h) for h in grid],
        sup_counts=sup_counts,
        inf_counts=inf_counts,
        fit_scales=n_fit,
        fit_h_range=(fit_lo, fit_hi),
        r_values=[float(r) for r in r_values],
        d_plus_by_r=d_plus_by_r,
        d_minus_by_r=d_minus_by_r,
    )


def subsample(w: PointSetWindow, N: int, j: int) -> PointSetWindow:
    """L_j(N) = {lambda_{mN + j}} restricted to the window."""
    if N < 1:
        raise DomainError(f"modulus must be at least 1, got {N}")
    if not 1 <= j <= N:
        raise DomainError(f"offset j={j} outside 1..{N}")
    positions = np.nonzero((w.global_indices() - j) % N == 0)[0]
    return w.take(positions)
