"""Extraction of the uniform partition modulus N and the certificate of every inequality used."""
import math
from typing import List, Optional, Sequence, Tuple
import numpy as np
from app.core.config import settings
from app.core.errors import ConfigError, DomainError, ExtractionFailure, HypothesisFailure, ValidationFailure
from app.core.parallel import parallel_map
from app.models.points import PointSetWindow
from app.models.sets import CoverSpec, IntervalUnion
from app.schemas.reports import (
    CheckRecord,
    PartitionCertificate,
    RecertificationReport,
    SectionResult,
    ValidationReport,
)
from app.services import bounds, pointset, setmodel
from app.services.gram_service import GramService
import logging

logger = logging.getLogger(__name__)


def subsample_gap(w: PointSetWindow, N: int) -> float:
    """Smallest gap between consecutive elements of any L_j(N); infinite if no L_j(N) has two points."""
    arr = w.array
    if arr.size <= N:
        return math.inf
    return float(np.min(arr[N:] - arr[:-N]))


class PartitionService:
    def __init__(self, gram_service: Optional[GramService] = None):
        self.gram_service = gram_service or GramService()

    def choose_epsilon(self, F_bar: float) -> float:
        """eps = (1 - F_bar) / 8; both eps-conditions need eps < (1 - F_bar) / 4."""
        if F_bar < 0:
            raise ConfigError(f"F_bar must be nonnegative, got {F_bar}")
        if F_bar >= 1:
            raise HypothesisFailure(
                "cover_cost_below_one",
                f"sum of cover lengths {F_bar} is not below 1",
                {"F_bar": F_bar},
            )
        eps = (1 - F_bar) / 8
        if eps < settings.DEGENERATE_EPS:
            logger.warning(f"Degenerate epsilon {eps:.3e} (F_bar = {F_bar})")
        return eps

    def m_conditions(self, c: CoverSpec, eps: float, R: float, M: int) -> List[CheckRecord]:
        length = c.length(M)
        tail = c.power_tail(M, c.alpha)
        head = length ** (1 - c.alpha)
        return [
            CheckRecord.strict("M_condition_1", 4 * head * tail, 1.0),
            CheckRecord.strict("M_condition_2", 4 * (head + eps) * tail, eps),
            CheckRecord.strict("M_condition_3", R, 1 / length if length > 0 else math.inf),
        ]

    def choose_M(self, c: CoverSpec, eps: float, R: float) -> int:
        """Smallest M >= max(Z, 1) meeting the three tail conditions."""
        if not eps > 0:
            raise ConfigError(f"eps must be positive, got {eps}")
        last = settings.MAX_M if c.tail is not None else min(settings.MAX_M, c.explicit_count)
        records: List[CheckRecord] = []
        M = max(c.Z, 1)
        for M in range(max(c.Z, 1), last + 1):
            records = self.m_conditions(c, eps, R, M)
            if all(record.passed for record in records):
                logger.info(f"Chose M={M}")
                return M
        unmet = next((record for record in records if not record.passed), None)
        condition = unmet.name if unmet is not None else "M_at_least_Z"
        logger.error(f"No admissible M up to {last}; last unmet condition {condition}")
        raise ExtractionFailure(
            "choose_M",
            condition,
            {"last_M": M, "checks": [record.model_dump(by_alias=True) for record in records]},
        )

    def choose_K(self, M: int, eps: float) -> int:
        if not eps > 0:
            raise ConfigError(f"eps must be positive, got {eps}")
        return max(2, math.floor(M / eps) + 1)

    def constant_checks(
        self,
        c: CoverSpec,
        dim_plus: float,
        F_bar: float,
        eps: float,
        M: int,
        K: int,
        R: float,
    ) -> List[CheckRecord]:
        """Every inequality that follows from the chosen constants alone."""
        alpha = c.alpha
        tail = c.power_tail(M, alpha)
        head = c.length(M) ** (1 - alpha)
        lower = (1 - F_bar) / 4
        return [
            CheckRecord.strict("hypothesis_cover_cost", setmodel.cover_cost(c).total, 1.0),
            CheckRecord.strict("hypothesis_dimension", dim_plus, 1 - alpha),
            CheckRecord.strict("F_bar_below_one", F_bar, 1.0),
            CheckRecord.strict("eps_condition_1", 0.75 + F_bar / 4, 1 - eps),
            CheckRecord.strict("eps_condition_2", F_bar + 2 * eps, (1 + F_bar) / 2),
            *self.m_conditions(c, eps, R, M),
            CheckRecord.strict("M_at_least_Z", c.Z, M + 1),
            CheckRecord.strict("K_condition", M / K, eps),
            CheckRecord.strict("inverse_K", 1 / K, lower),
            CheckRecord.strict("S1", c.head_sum(M) + M / K, F_bar + eps),
            CheckRecord.strict("S2", 2 * tail * (2 * head + eps), eps),
            CheckRecord.strict("lower_bound_positive", 0.0, lower),
        ]

    def window_checks(self, w: PointSetWindow, beta: float, eps: float, J: int, R: float, N: int, K: int,
                      tail_max: float, curve_at_R: float) -> List[CheckRecord]:
        """Checks that need the point window: the density tail, its subsample conclusion and the gap."""
        verification = bounds.verify_lemma_l2(w, beta, eps, N, R)
        return [
            CheckRecord.strict("lemma_l2_tail", tail_max, curve_at_R + eps),
            CheckRecord.strict("lemma_l2_conclusion", verification.worst_value, verification.bound),
            CheckRecord.strict("N_at_least_J", J, N + 1),
            CheckRecord.strict("separation", K, subsample_gap(w, N)),
        ]

    def dimension(self, w: PointSetWindow, beta: float) -> Tuple[float, str]:
        if w.density_bound is not None:
            return w.density_bound.beta_bar, "density_bound"
        report = pointset.dim_estimate(w, [beta], pointset.scale_grid(w))
        logger.warning(f"Dimension {report.dim_plus:.4f} is a window estimate, not a certified bound")
        return report.dim_plus, "window_estimate"

    def extract(self, c: CoverSpec, w: PointSetWindow) -> PartitionCertificate:
        logger.info(f"Extracting partition constants for {len(w)} points, alpha={c.alpha}")
        alpha = c.alpha
        beta = 1 - alpha

        cost = setmodel.cover_cost(c)
        if not cost.satisfied:
            raise HypothesisFailure(
                "cover_cost_below_one",
                f"cover cost {cost.total} is not below 1",
                cost.model_dump(),
            )
        dim_plus, source = self.dimension(w, beta)
        if not dim_plus < beta:
            raise HypothesisFailure(
                "dim_plus_below_1_minus_alpha",
                f"dim+ = {dim_plus:.4f} is not below 1 - alpha = {beta}",
                {"dim_plus": dim_plus, "beta": beta, "source": source},
            )

        F_bar = setmodel.sum_lengths(c)
        eps = self.choose_epsilon(F_bar)
        l2 = bounds.lemma_l2(w, beta, eps)
        J, R = l2.N, l2.R
        M = self.choose_M(c, eps, R)
        K = self.choose_K(M, eps)
        L_star = bounds.lemma_l1(w, K)
        N_base = max(J, L_star)
        N = N_base
        while subsample_gap(w, N) <= K:
            N += 1
        if N != N_base:
            logger.info(f"Raised N from {N_base} to {N} for subsample gaps above K={K}")

        checks = self.constant_checks(c, dim_plus, F_bar, eps, M, K, R)
        curve_at_R = l2.curve[l2.scales.index(R)]
        checks += self.window_checks(w, beta, eps, J, R, N, K, l2.tail_max, curve_at_R)
        cert = PartitionCertificate(
            F_bar=F_bar,
            eps=eps,
            M=M,
            K=K,
            L_star=L_star,
            R=R,
            J=J,
            N_base=N_base,
            N=N,
            alpha=alpha,
            beta=beta,
            Z=c.Z,
            cover_cost_total=cost.total,
            dim_plus_estimate=dim_plus,
            dimension_source=source,
            window_certified=w.window_certified,
            degenerate=eps < settings.DEGENERATE_EPS,
            predicted_lower_riesz=(1 - F_bar) / 4,
            predicted_upper_riesz=1 + 1 / K,
            checks=checks,
        )
        failed = [check.name for check in checks if not check.passed]
        if failed:
            logger.warning(f"Certificate has failing checks: {failed}")
        logger.info(f"Extraction done: N={N} K={K} M={M} R={R} J={J} L*={L_star}")
        return cert

    def recertify(
        self, cert: PartitionCertificate, c: CoverSpec, w: Optional[PointSetWindow] = None
    ) -> RecertificationReport:
        """Re-evaluates every check from the stored constants and compares the flags."""
        checks = self.constant_checks(c, cert.dim_plus_estimate, cert.F_bar, cert.eps, cert.M, cert.K, cert.R)
        if w is not None:
            at_R = pointset.d_plus_profile(w, cert.beta, cert.R)
            tail = [pointset.d_plus_profile(w, cert.beta, r) for r in bounds.lemma_scales(w) if r > cert.R]
            tail_max = max([at_R, *tail])
            checks += self.window_checks(w, cert.beta, cert.eps, cert.J, cert.R, cert.N, cert.K, tail_max, at_R)
        else:
            fresh = {check.name for check in checks}
            checks += [check for check in cert.checks if check.name not in fresh]

        stored = {check.name: check.passed for check in cert.checks}
        mismatches = [check.name for check in checks if stored.get(check.name) != check.passed]
        mismatches += [name for name in stored if name not in {check.name for check in checks}]
        if mismatches:
            logger.warning(f"Recertification disagrees on {mismatches}")
        return RecertificationReport(
            agrees=not mismatches,
            valid=all(check.passed for check in checks),
            mismatches=mismatches,
            checks=checks,
        )

    def _section(self, cert: PartitionCertificate, E: IntervalUnion, complement: IntervalUnion,
                 sub: PointSetWindow, j: int, m: int) -> SectionResult:
        start = max(0, (len(sub) - m) // 2)
        freqs = sub.points[start:start + m]
        on_complement = self.gram_service.section(complement, freqs)
        on_set = self.gram_service.section(E, freqs)
        lower_margin = on_complement.lambda_min - cert.predicted_lower_riesz
        upper_margin = cert.predicted_upper_riesz + settings.VALIDATE_TOL - on_complement.lambda_max
        gap = pointset.separation(sub) if len(sub) >= 2 else None
        gap_margin = None if gap is None else gap - cert.K
        return SectionResult(
            j=j,
            m=m,
            size=len(freqs),
            truncated=len(sub) < m,
            lambda_min=on_complement.lambda_min,
            lambda_max=on_complement.lambda_max,
            lower_margin=lower_margin,
            upper_margin=upper_margin,
            separation=gap,
            separation_margin=gap_margin,
            lambda_min_on_set=on_set.lambda_min,
            passed=lower_margin > 0 and upper_margin > 0 and (gap_margin is None or gap_margin > 0),
        )

    def validate(
        self,
        cert: PartitionCertificate,
        c: CoverSpec,
        E: IntervalUnion,
        w: PointSetWindow,
        window_sizes: Optional[Sequence[int]] = None,
        raise_on_failure: bool = True,
    ) -> ValidationReport:
        """Finite Gram sections of every L_j(N) on the complement of E against the predicted bounds."""
        sizes = list(window_sizes or settings.WINDOW_SIZES)
        if not sizes or any(m < 1 for m in sizes):
            raise ConfigError(f"window sizes must be positive, got {sizes}")
        if not cert.valid:
            raise DomainError("certificate has failing checks", {"failed": [k.name for k in cert.checks if not k.passed]})
        if c.centers is not None:
            covered = setmodel.realize_cover(c, len(c.centers))
            if not setmodel.contains(covered, E):
                raise DomainError("set is not contained in the realized cover")
        if E.measure > cert.F_bar + 1e-12:
            raise DomainError(f"set measure {E.measure} exceeds the cover sum {cert.F_bar}")

        complement = setmodel.complement(E)
        jobs = []
        for j in range(1, cert.N + 1):
            sub = pointset.subsample(w, cert.N, j)
            if not len(sub):
                logger.warning(f"Subsample j={j} is empty on this window")
                continue
            jobs.extend((sub, j, m) for m in sizes)
        logger.info(f"Validating {len(jobs)} Gram sections")
        sections = parallel_map(lambda job: self._section(cert, E, complement, *job), jobs)

        failures = []
        for s in sections:
            if s.passed:
                continue
            if s.lower_margin <= 0:
                failures.append({"j": s.j, "m": s.m, "assertion": "lower_riesz", "margin": s.lower_margin})
            if s.upper_margin <= 0:
                failures.append({"j": s.j, "m": s.m, "assertion": "upper_riesz", "margin": s.upper_margin})
            if s.separation_margin is not None and s.separation_margin <= 0:
                failures.append({"j": s.j, "m": s.m, "assertion": "separation", "margin": s.separation_margin})

        gap_margins = [s.separation_margin for s in sections if s.separation_margin is not None]
        report = ValidationReport(
            N=cert.N,
            K=cert.K,
            predicted_lower_riesz=cert.predicted_lower_riesz,
            predicted_upper_riesz=cert.predicted_upper_riesz,
            window_sizes=sizes,
            sections=sections,
            worst_lower_margin=min((s.lower_margin for s in sections), default=math.inf),
            worst_upper_margin=min((s.upper_margin for s in sections), default=math.inf),
            worst_separation_margin=min(gap_margins) if gap_margins else None,
            failures=failures,
            passed=not failures,
        )
        if failures and raise_on_failure:
            first = failures[0]
            logger.error(f"Validation failed at j={first['j']}, m={first['m']} ({first['assertion']})")
            raise ValidationFailure(
                f"section j={first['j']}, m={first['m']} fails the {first['assertion']} assertion",
                report.model_dump(mode="json"),
            )
        return report
