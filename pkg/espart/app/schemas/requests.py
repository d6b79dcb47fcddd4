from typing import Any, Dict, List, Optional, Tuple
from pydantic import BaseModel, ConfigDict, Field


class DensityRequest(BaseModel):
    points: Any = Field(..., description="Point-set document: {'points': [...]}, a list, or a generator descriptor")
    r: float = 1.0
    h_min: Optional[float] = None
    h_max: Optional[float] = None
    h_steps: Optional[int] = None


class PartitionRequest(BaseModel):
    cover: Dict[str, Any]
    points: Any
    alpha: Optional[float] = None
    validate_sections: bool = Field(False, alias="validate")
    window_sizes: Optional[List[int]] = None
    set: Optional[Any] = None

    model_config = ConfigDict(populate_by_name=True)


class GramRequest(BaseModel):
    set: Any
    points: Any
    complement: bool = False
    target_lower: float = 0.0
    matrix: bool = False


class MvRequest(BaseModel):
    points: Optional[Any] = None
    coeffs: Optional[List[Any]] = None
    interval: Tuple[float, float] = (0.0, 1.0)
    delta: Optional[float] = None
    random_suite: Optional[int] = Field(None, ge=1, le=100000)
    seed: int = 0


class ProgressionRequest(BaseModel):
    points: Any
    subsample_N: int = Field(1, ge=1)
    delta: float = Field(..., gt=0)
    log_base: Optional[str] = None
    search_budget: Optional[int] = Field(None, ge=1)
