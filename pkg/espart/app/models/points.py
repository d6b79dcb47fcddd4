import bisect
import math
from typing import Optional, Tuple
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator


class DensityBound(BaseModel):
    """Analytic bound #(L ∩ Q_r(x)) <= C * r**beta_bar for all r >= 1 and all x."""

    model_config = ConfigDict(frozen=True)

    beta_bar: float = Field(..., ge=0)
    C: float = Field(..., gt=0)


class PointSetWindow(BaseModel):
    """Finite sorted window of a bi-infinite frequency set.

    Index 0 is the smallest point >= 0; negative indices extend to the left. ``exact`` holds
    the integer values of windows whose points exceed the float64 integer range.
    """

    model_config = ConfigDict(frozen=True)

    points: Tuple[float, ...]
    window_certified: bool = False
    density_bound: Optional[DensityBound] = None
    exact: Optional[Tuple[int, ...]] = None

    _array: np.ndarray = PrivateAttr()

    @model_validator(mode="after")
    def check_points(self):
        for x in self.points:
            if not math.isfinite(x):
                raise ValueError("points must be finite")
        if self.exact is not None:
            if len(self.exact) != len(self.points):
                raise ValueError("exact values must match the points one to one")
            ordered = self.exact
        else:
            ordered = self.points
        for left, right in zip(ordered, ordered[1:]):
            if not left < right:
                raise ValueError(f"points must be strictly increasing ({left} !< {right})")
        return self

    def model_post_init(self, __context) -> None:
        self._array = np.asarray(self.points, dtype=float)
        self._array.setflags(write=False)

    @property
    def array(self) -> np.ndarray:
        return self._array

    @property
    def anchor(self) -> int:
        """Position of lambda_0 in ``points``."""
        return bisect.bisect_left(self.points, 0.0)

    @property
    def span(self) -> float:
        if not self.points:
            return 0.0
        return self.points[-1] - self.points[0]

    def __len__(self) -> int:
        return len(self.points)

    def global_indices(self) -> np.ndarray:
        return np.arange(len(self.points)) - self.anchor

    def take(self, positions) -> "PointSetWindow":
        """Sub-window at the given array positions (flags carried over)."""
        positions = list(positions)
        exact = None if self.exact is None else tuple(self.exact[i] for i in positions)
        return PointSetWindow(
            points=tuple(self.points[i] for i in positions),
            window_certified=self.window_certified,
            density_bound=self.density_bound,
            exact=exact,
        )
