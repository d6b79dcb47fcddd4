from typing import List, Optional, Tuple
import numpy as np
from pydantic import BaseModel, ConfigDict
from app.models.sets import IntervalUnion


class GramSection(BaseModel):
    """Gram matrix of {exp(2 pi i lambda x) 1_E} over a finite frequency window."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    frequencies: Tuple[float, ...]
    set: IntervalUnion
    matrix: np.ndarray
    lambda_min: Optional[float] = None
    lambda_max: Optional[float] = None

    @property
    def size(self) -> int:
        return len(self.frequencies)

    def matrix_pairs(self) -> List[List[List[float]]]:
        """Row-major [re, im] pairs."""
        return [[[float(z.real), float(z.imag)] for z in row] for row in self.matrix]
