import math
from typing import Literal, Optional, Tuple
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from app.core.errors import ConfigError
import logging

logger = logging.getLogger(__name__)

# Rounding slack on the cached measure, per interval
MEASURE_TOL = 1e-12


class IntervalUnion(BaseModel):
    """Canonical disjoint union of closed intervals in the torus [0, 1).

    Instances are produced by ``setmodel.normalize``; the validator only checks that the
    stored form is canonical.
    """

    model_config = ConfigDict(frozen=True)

    intervals: Tuple[Tuple[float, float], ...] = ()
    measure: float = 0.0

    @model_validator(mode="before")
    @classmethod
    def fill_measure(cls, data):
        if isinstance(data, dict) and "measure" not in data:
            data = dict(data)
            data["measure"] = math.fsum(b - a for a, b in data.get("intervals", ()))
        return data

    @model_validator(mode="after")
    def check_canonical(self):
        previous_end = None
        for a, b in self.intervals:
            if not (0.0 <= a < b <= 1.0):
                raise ValueError(f"interval ({a}, {b}) is not inside [0, 1] with a < b")
            if previous_end is not None and not previous_end < a:
                raise ValueError("intervals must be sorted and pairwise disjoint")
            previous_end = b
        exact = math.fsum(b - a for a, b in self.intervals)
        if abs(exact - self.measure) > MEASURE_TOL * max(1, len(self.intervals)):
            raise ValueError(f"measure {self.measure} does not match interval lengths {exact}")
        return self

    @property
    def is_empty(self) -> bool:
        return not self.intervals


class GeometricTail(BaseModel):
    """Analytic tail l_n = c * rho**n for n >= from_n."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["geometric"] = "geometric"
    c: float = Field(..., gt=0)
    rho: float = Field(..., gt=0, lt=1)
    from_n: int = Field(..., ge=1)

    def length(self, n: int) -> float:
        return self.c * self.rho ** n

    def power_sum(self, start: int, exponent: float, stop: Optional[int] = None) -> float:
        """Sum of l_n**exponent for start <= n <= stop (stop=None: to infinity)."""
        start = max(start, self.from_n)
        ratio = self.rho ** exponent
        if ratio >= 1.0:
            raise ConfigError(
                "geometric tail does not converge under the exponent",
                {"rho": self.rho, "exponent": exponent},
            )
        first = self.c ** exponent * ratio ** start
        if stop is None:
            return first / (1.0 - ratio)
        if stop < start:
            return 0.0
        return first * (1.0 - ratio ** (stop - start + 1)) / (1.0 - ratio)


class CoverSpec(BaseModel):
    """Ordered interval cover {E_n} with nonincreasing lengths, split index Z and exponent alpha."""

    model_config = ConfigDict(frozen=True)

    lengths: Tuple[float, ...] = ()
    tail: Optional[GeometricTail] = None
    centers: Optional[Tuple[float, ...]] = None
    Z: int = Field(0, ge=0)
    alpha: float = Field(..., gt=0, lt=1)

    @field_validator("lengths")
    @classmethod
    def validate_lengths(cls, v):
        for i, length in enumerate(v):
            if not math.isfinite(length) or length <= 0 or length > 1:
                raise ValueError(f"length l_{i + 1} = {length} must lie in (0, 1]")
            if i and length > v[i - 1]:
                raise ValueError(f"lengths must be nonincreasing (l_{i + 1} > l_{i})")
        return v

    @model_validator(mode="after")
    def validate_tail(self):
        if not self.lengths and self.tail is None:
            raise ValueError("a cover needs explicit lengths or an analytic tail")
        if self.tail is not None:
            if self.tail.from_n != len(self.lengths) + 1:
                raise ValueError(
                    f"tail must start right after the explicit list (from_n = {len(self.lengths) + 1})"
                )
            first = self.tail.length(self.tail.from_n)
            if first > 1:
                raise ValueError("tail lengths must be at most 1")
            if self.lengths and first > self.lengths[-1]:
                raise ValueError("tail is inconsistent with the last explicit length")
        if self.centers is not None:
            for center in self.centers:
                if not math.isfinite(center):
                    raise ValueError("centers must be finite")
        return self

    @property
    def explicit_count(self) -> int:
        return len(self.lengths)

    @property
    def is_finite(self) -> bool:
        return self.tail is None

    def length(self, n: int) -> float:
        """Length of E_n (1-based); 0 past the end of a finite cover."""
        if n < 1:
            raise IndexError("cover intervals are indexed from 1")
        if n <= len(self.lengths):
            return self.lengths[n - 1]
        if self.tail is not None:
            return self.tail.length(n)
        return 0.0

    def head_sum(self, stop: int) -> float:
        """Sum of l_n for 1 <= n <= stop."""
        explicit = math.fsum(self.lengths[:stop])
        if self.tail is None or stop < self.tail.from_n:
            return explicit
        return explicit + self.tail.power_sum(self.tail.from_n, 1.0, stop)

    def power_tail(self, after: int, exponent: float) -> float:
        """Sum of l_n**exponent for n > after."""
        explicit = math.fsum(length ** exponent for length in self.lengths[after:])
        if self.tail is None:
            return explicit
        return explicit + self.tail.power_sum(after + 1, exponent)

    def scaled(self, tau: float) -> "CoverSpec":
        """The same cover with every length multiplied by tau (0 < tau <= 1)."""
        if not 0 < tau <= 1:
            raise ConfigError("shrink factor must lie in (0, 1]", {"tau": tau})
        tail = None
        if self.tail is not None:
            tail = self.tail.model_copy(update={"c": self.tail.c * tau})
        return self.model_copy(update={"lengths": tuple(tau * x for x in self.lengths), "tail": tail})
