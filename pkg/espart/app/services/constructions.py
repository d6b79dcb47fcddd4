"""Generators for the rational-centred cover, the lacunary-block frequency set and simple
test windows, plus the arithmetic-progression search on subsamples."""
import bisect
import math
from typing import Iterator, List, Optional, Sequence, Tuple
from app.core.config import settings
from app.core.errors import ConfigError, DomainError, NotFoundError
from app.models.descriptors import (
    EasycorDescriptor,
    HkwDescriptor,
    IntegersDescriptor,
    LengthRule,
    LengthRuleKind,
    PowerDescriptor,
    Schedule,
)
from app.models.points import PointSetWindow
from app.models.sets import CoverSpec, GeometricTail
from app.schemas.reports import ProgressionCertificate
from app.services import pointset
import logging

logger = logging.getLogger(__name__)

LOG_BASES = {"e": math.log, "2": math.log2, "10": math.log10}
TOWER_SCHEDULE_MAX_J = 6


def farey_centers() -> Iterator[Tuple[int, int]]:
    """Rationals p/q in [0, 1) in lowest terms, by denominator then numerator."""
    q = 1
    while True:
        for p in range(q):
            if math.gcd(p, q) == 1:
                yield p, q
        q += 1


def hkw_cover(n_max: int, rule: Optional[LengthRule] = None, Z: int = 0, alpha: float = 0.5) -> CoverSpec:
    """Cover of the rationals by intervals centred at the first n_max Farey points.

    Geometric rules keep their closed-form tail past n_max; the slow rule is truncated.
    """
    rule = rule or LengthRule()
    if n_max < 1:
        raise ConfigError(f"n_max must be positive, got {n_max}")
    total = rule.total()
    if total >= 1:
        raise ConfigError(f"length rule sums to {total}, not below 1", rule.model_dump(mode="json"))
    if rule.length(1) > 1:
        raise ConfigError("first length exceeds the torus")

    centers = []
    for (p, q), _ in zip(farey_centers(), range(n_max)):
        centers.append(p / q)
    lengths = tuple(rule.length(n) for n in range(1, n_max + 1))
    tail = None
    if rule.kind == LengthRuleKind.GEOMETRIC:
        tail = GeometricTail(c=rule.c, rho=rule.rho, from_n=n_max + 1)
    logger.info(f"Built cover with {n_max} centres, total length {total}")
    return CoverSpec(lengths=lengths, tail=tail, centers=tuple(centers), Z=Z, alpha=alpha)


def block_step(j: int, gamma: float) -> int:
    # ceil with a guard for exact powers such as 16**0.25
    return max(1, math.ceil(j ** gamma - 1e-12))


def easycor_schedule(beta: float, j_max: int, schedule: Schedule = Schedule.DESK,
                     q_values: Optional[Sequence[int]] = None) -> List[int]:
    gamma = (1 - beta) / beta
    if schedule == Schedule.DESK:
        return [j * 2 ** j * block_step(j, gamma) for j in range(1, j_max + 1)]
    if schedule == Schedule.TOWER:
        if j_max > TOWER_SCHEDULE_MAX_J:
            raise ConfigError(f"the 2**(2**j) schedule is limited to j <= {TOWER_SCHEDULE_MAX_J}")
        return [2 ** (2 ** j) for j in range(1, j_max + 1)]
    if q_values is None or len(q_values) < j_max:
        raise ConfigError(f"explicit schedule needs {j_max} values")
    return [int(q) for q in q_values[:j_max]]


def easycor_blocks(beta: float, j_max: int, schedule: Schedule = Schedule.DESK,
                   q_values: Optional[Sequence[int]] = None) -> List[List[int]]:
    """Blocks {Q_j + a * ceil(j**gamma) : 0 <= a <= j} with gamma = (1 - beta) / beta."""
    if not 2 / 3 < beta < 1:
        raise ConfigError(f"beta must lie in (2/3, 1), got {beta}")
    if j_max < 1:
        raise ConfigError(f"j_max must be positive, got {j_max}")
    gamma = (1 - beta) / beta
    starts = easycor_schedule(beta, j_max, Schedule(schedule), q_values)
    blocks = []
    for j, q in enumerate(starts, start=1):
        step = block_step(j, gamma)
        if blocks and q <= blocks[-1][-1]:
            raise ConfigError(f"block {j} starting at {q} overlaps block {j - 1}", {"j": j})
        blocks.append([q + a * step for a in range(j + 1)])
    return blocks


def easycor_lambda(beta: float, j_max: int, schedule: Schedule = Schedule.DESK,
                   q_values: Optional[Sequence[int]] = None) -> PointSetWindow:
    blocks = easycor_blocks(beta, j_max, schedule, q_values)
    exact = tuple(x for block in blocks for x in block)
    return PointSetWindow(points=tuple(float(x) for x in exact), exact=exact)


def integers_window(lo: int, hi: int) -> PointSetWindow:
    if hi < lo:
        raise ConfigError(f"empty integer range [{lo}, {hi}]")
    return PointSetWindow(points=tuple(float(n) for n in range(lo, hi + 1)))


def power_window(exponent: float, n_max: int, include_zero: bool = True) -> PointSetWindow:
    """{sign(n) |n|**exponent : 1 <= |n| <= n_max}, with 0 when include_zero."""
    positive = [float(n) ** exponent for n in range(1, n_max + 1)]
    points = [-x for x in reversed(positive)] + ([0.0] if include_zero else []) + positive
    return PointSetWindow(points=tuple(points))


def from_descriptor(descriptor) -> PointSetWindow:
    if isinstance(descriptor, EasycorDescriptor):
        return easycor_lambda(descriptor.beta, descriptor.j_max, descriptor.schedule, descriptor.q_values)
    if isinstance(descriptor, IntegersDescriptor):
        return integers_window(descriptor.lo, descriptor.hi)
    if isinstance(descriptor, PowerDescriptor):
        return power_window(descriptor.exponent, descriptor.n_max, descriptor.include_zero)
    raise ConfigError(f"unknown point-set descriptor {descriptor!r}")


def cover_from_descriptor(descriptor: HkwDescriptor) -> CoverSpec:
    return hkw_cover(descriptor.n_max, descriptor.rule, descriptor.Z, descriptor.alpha)


def _integer_values(w: PointSetWindow) -> List[int]:
    if w.exact is not None:
        return list(w.exact)
    values = []
    for x in w.points:
        if not float(x).is_integer():
            raise DomainError(f"progression search needs integer points, got {x}")
        values.append(int(x))
    return values


def progression_value(ell: int, n_prog: int, log_base: str = "e") -> float:
    """ell * n**-1/2 * (log n)**3."""
    log = LOG_BASES[log_base]
    return ell * n_prog ** -0.5 * log(n_prog) ** 3


def progression_check(
    w: PointSetWindow,
    N_sub: int,
    delta: float,
    search_budget: Optional[int] = None,
    log_base: Optional[str] = None,
) -> ProgressionCertificate:
    """First progression {M, M + ell, ..., M + N_prog ell} inside the subsample L_{N_sub}(N_sub)
    with ell * N_prog**-1/2 * (log N_prog)**3 < delta.

    Candidates are maximal constant-step runs of the subsample, scanned left to right with
    N_prog increasing from 2.
    """
    base = log_base or settings.LOG_BASE
    if base not in LOG_BASES:
        raise ConfigError(f"log base must be one of {sorted(LOG_BASES)}, got {base}")
    if N_sub < 1:
        raise ConfigError(f"subsample modulus must be positive, got {N_sub}")
    if not delta > 0:
        raise ConfigError(f"delta must be positive, got {delta}")
    budget = search_budget or settings.SEARCH_BUDGET

    _integer_values(w)
    sub = _integer_values(pointset.subsample(w, N_sub, N_sub))
    tried = 0
    i = 0
    while i + 2 < len(sub):
        ell = sub[i + 1] - sub[i]
        end = i + 1
        while end + 1 < len(sub) and sub[end + 1] - sub[end] == ell:
            end += 1
        for n_prog in range(2, end - i + 1):
            tried += 1
            if tried > budget:
                raise NotFoundError(f"search budget of {budget} candidates exhausted", {"budget": budget})
            value = progression_value(ell, n_prog, base)
            if value < delta:
                start = sub[i]
                elements = [start + k * ell for k in range(n_prog + 1)]
                contained = all(_member(sub, x) for x in elements)
                if contained:
                    logger.info(f"Found progression M={start} ell={ell} N={n_prog} value={value:.4f}")
                    return ProgressionCertificate(
                        M=start,
                        N_prog=n_prog,
                        ell=ell,
                        delta=delta,
                        value=value,
                        log_base=base,
                        N_sub=N_sub,
                        contained=contained,
                        elements=elements,
                    )
        i = end
    raise NotFoundError(
        f"no progression with value below {delta} in the subsample of modulus {N_sub}",
        {"candidates": tried, "subsample_size": len(sub), "log_base": base},
    )


def _member(values: List[int], x: int) -> bool:
    k = bisect.bisect_left(values, x)
    return k < len(values) and values[k] == x
