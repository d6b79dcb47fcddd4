"""Pipeline commands shared by the CLI and the HTTP service; each returns a RunReport."""
import time
from typing import Any, Dict, List, Optional, Sequence, Tuple
import numpy as np
from app.core.config import settings
from app.core.errors import ConfigError
from app.models.descriptors import EasycorDescriptor, HkwDescriptor, IntegersDescriptor, PowerDescriptor
from app.models.points import PointSetWindow
from app.models.sets import CoverSpec, IntervalUnion
from app.models.trig import TrigPolynomial
from app.schemas.reports import RunReport
from app.services import bounds, constructions, pointset, setmodel
from app.services.gram_service import GramService
from app.services.partition_service import PartitionService
import logging

logger = logging.getLogger(__name__)


class RunService:
    def __init__(self, partition_service: Optional[PartitionService] = None):
        self.partition_service = partition_service or PartitionService()
        self.gram_service = self.partition_service.gram_service

    def _report(self, command: str, inputs: Dict[str, Any], outputs: Dict[str, Any],
                started: float, exit_code: int = 0) -> RunReport:
        return RunReport(
            command=command,
            inputs=inputs,
            outputs=outputs,
            timing_ms=int((time.perf_counter() - started) * 1000),
            version=settings.VERSION,
            exit_code=exit_code,
        )

    def density(self, w: PointSetWindow, r: float = 1.0, h_min: Optional[float] = None,
                h_max: Optional[float] = None, h_steps: Optional[int] = None) -> RunReport:
        started = time.perf_counter()
        h_min = h_min if h_min is not None else 1.0
        h_max = h_max if h_max is not None else max(w.span / 2, h_min)
        steps = h_steps or settings.DIM_STEPS
        if h_max < h_min:
            raise ConfigError(f"h_max {h_max} is below h_min {h_min}")
        grid = [h_min] if h_max == h_min else [float(h) for h in np.geomspace(h_min, h_max, steps)]
        report = pointset.density_estimate(w, r, grid)
        inputs = {"points": len(w), "r": r, "h_min": h_min, "h_max": h_max, "h_steps": len(grid)}
        return self._report("density", inputs, report.model_dump(mode="json"), started)

    def partition(self, c: CoverSpec, w: PointSetWindow, alpha: Optional[float] = None,
                  validate: bool = False, window_sizes: Optional[Sequence[int]] = None,
                  E: Optional[IntervalUnion] = None) -> RunReport:
        started = time.perf_counter()
        if alpha is not None:
            c = CoverSpec.model_validate({**c.model_dump(), "alpha": alpha})
        cert = self.partition_service.extract(c, w)
        outputs: Dict[str, Any] = {"certificate": cert.model_dump(mode="json", by_alias=True)}
        exit_code = 0 if cert.valid else 3
        sizes = list(window_sizes or settings.WINDOW_SIZES)
        if validate and cert.valid:
            if E is None:
                if c.centers is None:
                    raise ConfigError("validation needs a set or a cover with centres")
                E = setmodel.realize_cover(c, len(c.centers))
            report = self.partition_service.validate(cert, c, E, w, sizes, raise_on_failure=False)
            outputs["validation"] = report.model_dump(mode="json")
            if not report.passed:
                exit_code = 4
        inputs = {
            "points": len(w),
            "alpha": c.alpha,
            "Z": c.Z,
            "validate": validate,
            "window_sizes": sizes,
        }
        return self._report("partition", inputs, outputs, started, exit_code)

    def gram(self, E: IntervalUnion, w: PointSetWindow, complement: bool = False,
             target_lower: float = 0.0, include_matrix: bool = False) -> RunReport:
        started = time.perf_counter()
        report = self.gram_service.riesz_margin(complement, E, w.points, target_lower, include_matrix)
        inputs = {"points": len(w), "set_measure": E.measure, "complement": complement, "target_lower": target_lower}
        exit_code = 0 if report.margin > 0 else 4
        return self._report("gram", inputs, report.model_dump(mode="json"), started, exit_code)

    def mv(self, w: Optional[PointSetWindow] = None, coefficients: Optional[List[Any]] = None,
           interval: Tuple[float, float] = (0.0, 1.0), delta: Optional[float] = None,
           random_suite: Optional[int] = None, seed: int = 0) -> RunReport:
        started = time.perf_counter()
        if random_suite:
            summary = bounds.mv_random_suite(random_suite, seed)
            inputs = {"random_suite": random_suite, "seed": seed}
            exit_code = 0 if summary.holds == summary.instances else 4
            return self._report("mv", inputs, summary.model_dump(mode="json"), started, exit_code)
        if w is None:
            raise ConfigError("mv needs a point set or a random suite size")
        coefficients = coefficients if coefficients is not None else [1.0] * len(w)
        if len(coefficients) != len(w):
            raise ConfigError(f"{len(coefficients)} coefficients for {len(w)} frequencies")
        p = TrigPolynomial(frequencies=w.points, coefficients=coefficients)
        report = bounds.mv_check(p, tuple(interval), delta)
        inputs = {"points": len(w), "interval": list(interval), "delta": report.delta}
        return self._report("mv", inputs, report.model_dump(mode="json"), started, 0 if report.holds else 4)

    def gen(self, descriptor) -> RunReport:
        started = time.perf_counter()
        inputs = descriptor.model_dump(mode="json")
        if isinstance(descriptor, HkwDescriptor):
            cover = constructions.cover_from_descriptor(descriptor)
            outputs = cover.model_dump(mode="json")
        elif isinstance(descriptor, EasycorDescriptor):
            blocks = constructions.easycor_blocks(
                descriptor.beta, descriptor.j_max, descriptor.schedule, descriptor.q_values
            )
            points = [x for block in blocks for x in block]
            outputs = {"points": points, "blocks": len(blocks), "schedule": descriptor.schedule.value}
        elif isinstance(descriptor, (IntegersDescriptor, PowerDescriptor)):
            outputs = {"points": list(constructions.from_descriptor(descriptor).points)}
        else:
            raise ConfigError(f"unknown generator {descriptor!r}")
        return self._report("gen", inputs, outputs, started)

    def progression(self, w: PointSetWindow, N_sub: int, delta: float, log_base: Optional[str] = None,
                    search_budget: Optional[int] = None) -> RunReport:
        started = time.perf_counter()
        cert = constructions.progression_check(w, N_sub, delta, search_budget, log_base)
        inputs = {
            "points": len(w),
            "subsample_N": N_sub,
            "delta": delta,
            "log_base": cert.log_base,
            "search_budget": search_budget or settings.SEARCH_BUDGET,
        }
        return self._report("progression", inputs, cert.model_dump(mode="json"), started)
