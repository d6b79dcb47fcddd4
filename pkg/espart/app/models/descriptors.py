import enum
import math
from typing import Annotated, Literal, Optional, Tuple, Union
from pydantic import BaseModel, ConfigDict, Field, field_validator
import logging

logger = logging.getLogger(__name__)


class CaseInsensitiveEnum(str, enum.Enum):
    @classmethod
    def _missing_(cls, value):
        """Handle case-insensitive lookup"""
        if isinstance(value, str):
            value = value.lower()
            for member in cls:
                if member.value == value:
                    return member
        return None


class Schedule(CaseInsensitiveEnum):
    DESK = "desk"
    TOWER = "tower"
    EXPLICIT = "explicit"


class LengthRuleKind(CaseInsensitiveEnum):
    GEOMETRIC = "geometric"
    SLOW = "slow"


class LengthRule(BaseModel):
    """Length rule of a rational-centred cover.

    geometric: l_n = c * rho**n (default c = rho = 1/2, i.e. l_n = 2**-(n+1)).
    slow:      l_n = c / n**2.
    """

    model_config = ConfigDict(frozen=True)

    kind: LengthRuleKind = LengthRuleKind.GEOMETRIC
    c: float = Field(0.5, gt=0)
    rho: float = Field(0.5, gt=0, lt=1)

    def length(self, n: int) -> float:
        if self.kind == LengthRuleKind.GEOMETRIC:
            return self.c * self.rho ** n
        return self.c / n ** 2

    def total(self) -> float:
        if self.kind == LengthRuleKind.GEOMETRIC:
            return self.c * self.rho / (1 - self.rho)
        return self.c * math.pi ** 2 / 6


class HkwDescriptor(BaseModel):
    kind: Literal["hkw"] = "hkw"
    n_max: int = Field(..., ge=1)
    rule: LengthRule = Field(default_factory=LengthRule)
    Z: int = Field(0, ge=0)
    alpha: float = Field(0.5, gt=0, lt=1)


class EasycorDescriptor(BaseModel):
    kind: Literal["easycor"] = "easycor"
    beta: float
    j_max: int = Field(..., ge=1)
    schedule: Schedule = Schedule.DESK
    q_values: Optional[Tuple[int, ...]] = None

    @field_validator("schedule", mode="before")
    @classmethod
    def validate_schedule(cls, v):
        if isinstance(v, str):
            return v.lower()
        return v


class IntegersDescriptor(BaseModel):
    kind: Literal["integers"] = "integers"
    lo: int
    hi: int


class PowerDescriptor(BaseModel):
    kind: Literal["power"] = "power"
    exponent: float = Field(..., gt=0)
    n_max: int = Field(..., ge=1)
    include_zero: bool = True


PointSetDescriptor = Annotated[
    Union[EasycorDescriptor, IntegersDescriptor, PowerDescriptor],
    Field(discriminator="kind"),
]
