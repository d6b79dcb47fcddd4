from typing import Tuple
import numpy as np
from pydantic import BaseModel, ConfigDict, field_serializer, field_validator, model_validator


class TrigPolynomial(BaseModel):
    """sum_n a_n exp(2 pi i lambda_n t) over strictly increasing frequencies."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    frequencies: Tuple[float, ...]
    coefficients: np.ndarray

    @field_validator("coefficients", mode="before")
    @classmethod
    def parse_coefficients(cls, v):
        """Accept complex numbers, reals, or [re, im] pairs."""
        values = []
        for item in v:
            if isinstance(item, (list, tuple)):
                if len(item) != 2:
                    raise ValueError("coefficient pairs must be [re, im]")
                values.append(complex(item[0], item[1]))
            else:
                values.append(complex(item))
        array = np.asarray(values, dtype=complex)
        if not np.all(np.isfinite(array)):
            raise ValueError("coefficients must be finite")
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def check_shapes(self):
        if len(self.frequencies) != len(self.coefficients):
            raise ValueError("frequencies and coefficients must have the same length")
        if not np.all(np.isfinite(self.frequencies)):
            raise ValueError("frequencies must be finite")
        # Ordering and distinctness are checked by the operations (DomainError)
        return self

    @field_serializer("coefficients")
    def dump_coefficients(self, v):
        return [[float(z.real), float(z.imag)] for z in v]

    @property
    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.coefficients) ** 2))

    @classmethod
    def unit(cls, frequencies) -> "TrigPolynomial":
        return cls(frequencies=tuple(frequencies), coefficients=[1.0] * len(frequencies))
