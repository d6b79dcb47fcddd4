from typing import Any, Dict, List, Optional, Tuple
from pydantic import BaseModel, ConfigDict, Field
import logging

logger = logging.getLogger(__name__)


class CoverCost(BaseModel):
    head: float
    tail_alpha: float
    total: float
    satisfied: bool


class DiscretenessProfile(BaseModel):
    h: float
    sup_count: int
    inf_count: int
    truncated: bool = False


class DensityReport(BaseModel):
    r: float
    h_values: List[float]
    sup_counts: List[int]
    inf_counts: List[int]
    sup_curve: List[float]
    inf_curve: List[float]
    d_plus_estimate: float
    d_minus_estimate: float
    truncated: bool
    uniform: bool


class DimensionReport(BaseModel):
    dim_plus: float
    dim_minus: float
    h_values: List[float]
    sup_counts: List[int]
    inf_counts: List[int]
    fit_scales: int
    fit_h_range: Tuple[float, float] = (0.0, 0.0)
    r_values: List[float] = Field(default_factory=list)
    d_plus_by_r: List[float] = Field(default_factory=list)
    d_minus_by_r: List[float] = Field(default_factory=list)


class MvReport(BaseModel):
    lower: float
    energy: float
    upper: float
    delta: float
    interval: Tuple[float, float]
    norm_squared: float
    holds: bool


class MvSuiteSummary(BaseModel):
    instances: int
    holds: int
    worst_lower_slack: float
    worst_upper_slack: float
    seed: int


class LemmaL2Result(BaseModel):
    N: int
    R: float
    beta: float
    eps: float
    scales: List[float]
    curve: List[float]
    tail_max: float
    window_certified: bool


class LemmaL2Verification(BaseModel):
    N: int
    R: float
    beta: float
    eps: float
    bound: float
    worst_value: float
    worst_margin: float
    worst_j: Optional[int] = None
    worst_r: Optional[float] = None
    violations: List[Dict[str, float]] = Field(default_factory=list)
    passed: bool


class GramReport(BaseModel):
    freqs: List[float]
    set_measure: float
    complement_mode: bool
    lambda_min: float
    lambda_max: float
    lambda_min_reported: float
    target_lower: float
    margin: float
    degenerate: bool
    side: str
    matrix: Optional[List[List[List[float]]]] = None


class CheckRecord(BaseModel):
    """A strict inequality lhs < rhs used by the extraction."""

    model_config = ConfigDict(populate_by_name=True)

    name: str
    lhs: float
    rhs: float
    slack: float
    passed: bool = Field(..., alias="pass")

    @classmethod
    def strict(cls, name: str, lhs: float, rhs: float) -> "CheckRecord":
        return cls(name=name, lhs=lhs, rhs=rhs, slack=rhs - lhs, passed=lhs < rhs)


class PartitionCertificate(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    F_bar: float
    eps: float
    M: int
    K: int
    L_star: int
    R: float
    J: int
    N_base: int
    N: int
    alpha: float
    beta: float
    Z: int
    cover_cost_total: float
    dim_plus_estimate: float
    dimension_source: str
    window_certified: bool
    degenerate: bool
    predicted_lower_riesz: float
    predicted_upper_riesz: float
    checks: List[CheckRecord]

    @property
    def valid(self) -> bool:
        return all(check.passed for check in self.checks)

    def check(self, name: str) -> CheckRecord:
        for record in self.checks:
            if record.name == name:
                return record
        raise KeyError(name)


class SectionResult(BaseModel):
    j: int
    m: int
    size: int
    truncated: bool
    lambda_min: float
    lambda_max: float
    lower_margin: float
    upper_margin: float
    separation: Optional[float] = None
    separation_margin: Optional[float] = None
    lambda_min_on_set: float
    passed: bool


class ValidationReport(BaseModel):
    N: int
    K: int
    predicted_lower_riesz: float
    predicted_upper_riesz: float
    window_sizes: List[int]
    sections: List[SectionResult]
    worst_lower_margin: float
    worst_upper_margin: float
    worst_separation_margin: Optional[float] = None
    failures: List[Dict[str, Any]] = Field(default_factory=list)
    evidence: str = "finite sections: a margin below zero refutes, a margin above zero is consistent"
    passed: bool


class ProgressionCertificate(BaseModel):
    M: int
    N_prog: int
    ell: int
    delta: float
    value: float
    log_base: str
    N_sub: int
    contained: bool
    elements: List[int]


class RunReport(BaseModel):
    command: str
    inputs: Dict[str, Any]
    outputs: Dict[str, Any]
    timing_ms: int
    version: str
    exit_code: int = 0


class RecertificationReport(BaseModel):
    agrees: bool
    valid: bool
    mismatches: List[str] = Field(default_factory=list)
    checks: List[CheckRecord]
