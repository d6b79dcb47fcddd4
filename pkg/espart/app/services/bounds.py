"""Closed-form trigonometric energies and the quantitative estimates built on them."""
import math
from typing import List, Optional, Sequence, Tuple
import numpy as np
from app.core.config import settings
from app.core.errors import ConfigError, DomainError, ExtrapolationError
from app.core.parallel import parallel_map
from app.models.points import PointSetWindow
from app.models.trig import TrigPolynomial
from app.schemas.reports import LemmaL2Result, LemmaL2Verification, MvReport, MvSuiteSummary
from app.services import pointset
import logging

logger = logging.getLogger(__name__)


def interval_kernel(nu, a: float, b: float) -> np.ndarray:
    """Elementwise integral of exp(2 pi i nu t) over [a, b]."""
    nu = np.asarray(nu, dtype=float)
    length = b - a
    small = np.abs(nu) * length < settings.SMALL_NU_THRESHOLD
    safe_nu = np.where(small, 1.0, nu)
    quotient = (np.exp(2j * np.pi * safe_nu * b) - np.exp(2j * np.pi * safe_nu * a)) / (2j * np.pi * safe_nu)
    stable = np.exp(1j * np.pi * nu * (a + b)) * length * np.sinc(nu * length)
    return np.where(small, stable, quotient)


def _check_frequencies(frequencies: Sequence[float]) -> np.ndarray:
    freqs = np.asarray(frequencies, dtype=float)
    if freqs.size > 1 and np.any(np.diff(freqs) <= 0):
        raise DomainError("frequencies must be distinct and increasing", {"frequencies": list(map(float, freqs))})
    return freqs


def exact_energy(p: TrigPolynomial, interval: Tuple[float, float]) -> float:
    """Integral of |sum a_n exp(2 pi i lambda_n t)|^2 over the interval, in closed form."""
    a, b = interval
    if not b > a:
        raise DomainError(f"interval ({a}, {b}) must have positive length")
    freqs = _check_frequencies(p.frequencies)
    if not freqs.size:
        return 0.0
    kernel = interval_kernel(freqs[:, None] - freqs[None, :], a, b)
    coeffs = p.coefficients
    energy = float(np.real(coeffs @ kernel @ np.conj(coeffs)))
    return max(energy, 0.0)


def mv_check(p: TrigPolynomial, interval: Tuple[float, float], delta: Optional[float] = None) -> MvReport:
    """(T - 1/delta) sum|a|^2 <= energy <= (T + 1/delta) sum|a|^2 for a delta-separated polynomial.

    delta defaults to the separation of the frequencies (infinite for a single term); a
    declared delta larger than the separation is rejected.
    """
    freqs = _check_frequencies(p.frequencies)
    separation = float(np.min(np.diff(freqs))) if freqs.size > 1 else math.inf
    if delta is None:
        delta = separation
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    if delta > separation:
        raise DomainError(f"declared delta {delta} exceeds the separation {separation}")

    a, b = interval
    length = b - a
    norm = p.norm_squared
    energy = exact_energy(p, interval)
    lower = (length - 1 / delta) * norm
    upper = (length + 1 / delta) * norm
    tol = settings.MV_REL_TOL * norm
    return MvReport(
        lower=lower,
        energy=energy,
        upper=upper,
        delta=delta,
        interval=(a, b),
        norm_squared=norm,
        holds=lower - tol <= energy <= upper + tol,
    )


def random_separated(rng: np.random.Generator, max_terms: int = 20) -> Tuple[TrigPolynomial, Tuple[float, float], float]:
    """A random delta-separated polynomial with a random interval placement."""
    size = int(rng.integers(1, max_terms + 1))
    delta = float(rng.uniform(0.1, 10.0))
    gaps = delta + rng.exponential(delta, size - 1)
    freqs = float(rng.uniform(-10.0, 10.0)) + np.concatenate([[0.0], np.cumsum(gaps)])
    coeffs = rng.normal(size=size) + 1j * rng.normal(size=size)
    length = float(rng.uniform(0.1, 2.0))
    start = float(rng.uniform(-5.0, 5.0))
    p = TrigPolynomial(frequencies=tuple(float(f) for f in freqs), coefficients=list(coeffs))
    return p, (start, start + length), delta


def mv_random_suite(instances: int, seed: int) -> MvSuiteSummary:
    if instances < 1:
        raise ConfigError(f"suite size must be positive, got {instances}")
    rng = np.random.default_rng(seed)
    holds = 0
    worst_lower = math.inf
    worst_upper = math.inf
    for _ in range(instances):
        p, interval, delta = random_separated(rng)
        report = mv_check(p, interval, delta)
        holds += report.holds
        worst_lower = min(worst_lower, (report.energy - report.lower) / report.norm_squared)
        worst_upper = min(worst_upper, (report.upper - report.energy) / report.norm_squared)
    logger.info(f"Random suite seed={seed}: {holds}/{instances} instances hold")
    return MvSuiteSummary(
        instances=instances,
        holds=holds,
        worst_lower_slack=worst_lower,
        worst_upper_slack=worst_upper,
        seed=seed,
    )


def lemma_l1(w: PointSetWindow, K: float) -> int:
    """Largest index difference j - i with lambda_j - lambda_i <= K over the window."""
    if not K > 0:
        raise DomainError(f"K must be positive, got {K}")
    arr = w.array
    if not arr.size:
        return 0
    if not w.window_certified:
        logger.debug("index-gap bound computed on an uncertified window")
    right = np.searchsorted(arr, arr + K, side="right")
    return int(np.max(right - 1 - np.arange(arr.size)))


def lemma_scales(w: PointSetWindow, steps: Optional[int] = None) -> List[float]:
    """Integer scales of a geometric grid on [1, span / 2]."""
    steps = steps or settings.SCALE_STEPS
    half = w.span / 2
    if half <= 1:
        return [1.0]
    return [float(r) for r in np.unique(np.floor(np.geomspace(1.0, half, steps)))]


def lemma_l2(w: PointSetWindow, beta: float, eps: float, scales: Optional[Sequence[float]] = None) -> LemmaL2Result:
    """Smallest scan scale R with a flat tail, D+_beta(r) < D+_beta(R) + eps for r >= R.

    N is then the largest count of a cube of radius R.
    """
    if not 0 < beta <= 1:
        raise DomainError(f"beta must lie in (0, 1], got {beta}")
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps}")
    if not len(w):
        raise DomainError("empty window")

    grid = list(scales) if scales is not None else lemma_scales(w)
    curve = parallel_map(lambda r: pointset.d_plus_profile(w, beta, r), grid)
    need = min(settings.TAIL_SCALES, len(grid))
    for i in range(len(grid) - need + 1):
        tail_max = max(curve[i:])
        if tail_max < curve[i] + eps:
            R = grid[i]
            N = pointset.max_count(w, R)
            if not w.window_certified:
                logger.warning(f"Lemma scale R={R} chosen from an uncertified window")
            logger.info(f"Subsample density scan: R={R} N={N} over {len(grid)} scales")
            return LemmaL2Result(
                N=N,
                R=R,
                beta=beta,
                eps=eps,
                scales=grid,
                curve=curve,
                tail_max=tail_max,
                window_certified=w.window_certified,
            )
    logger.error(f"No scale with a flat density tail among {len(grid)} scales")
    raise ExtrapolationError({"scales": grid, "curve": curve, "beta": beta, "eps": eps})


def verify_lemma_l2(
    w: PointSetWindow,
    beta: float,
    eps: float,
    N: int,
    R: float,
    r_grid: Optional[Sequence[float]] = None,
) -> LemmaL2Verification:
    """Checks D+_beta of every subsample L_j(N) against 2 R**-beta + eps on r_grid."""
    upper = max(w.span / 2, R)
    if r_grid is None:
        r_grid = [r for r in lemma_scales(w) if r >= R] or [R]
    for r in r_grid:
        if r < R or r > upper:
            raise ConfigError(f"verification scale {r} outside [{R}, {upper}]")

    bound = 2 * R ** -beta + eps

    def check_offset(j: int) -> List[Tuple[int, float, float]]:
        sub = pointset.subsample(w, N, j)
        if not len(sub):
            return [(j, float(r), 0.0) for r in r_grid]
        return [(j, float(r), pointset.d_plus_profile(sub, beta, r)) for r in r_grid]

    rows = [row for chunk in parallel_map(check_offset, range(1, N + 1)) for row in chunk]
    worst_j, worst_r, worst_value = max(rows, key=lambda row: row[2])
    violations = [
        {"j": j, "r": r, "value": value, "margin": bound - value}
        for j, r, value in rows
        if value > bound
    ]
    if violations:
        logger.warning(f"Subsample density exceeds {bound} at {len(violations)} points; window not representative")
    return LemmaL2Verification(
        N=N,
        R=R,
        beta=beta,
        eps=eps,
        bound=bound,
        worst_value=worst_value,
        worst_margin=bound - worst_value,
        worst_j=worst_j,
        worst_r=worst_r,
        violations=violations,
        passed=not violations,
    )


def beter_bound(w: PointSetWindow, I_length: float) -> float:
    """B = 2 l(I) D+_0(1 / l(I)); the energy over I is at most B * sum|a|^2."""
    if not I_length > 0:
        raise DomainError(f"interval length must be positive, got {I_length}")
    return 2 * I_length * pointset.max_count(w, 1 / I_length)
