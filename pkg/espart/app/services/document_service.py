"""Reading and writing the JSON / column documents used by the CLI and the HTTP service."""
from typing import Any, Dict, List, Optional, Union
import json
import math
from pathlib import Path
import pandas as pd
from pydantic import BaseModel, TypeAdapter, ValidationError
from app.core.errors import DomainError, InputError
from app.models.descriptors import HkwDescriptor, PointSetDescriptor
from app.models.points import PointSetWindow
from app.models.sets import CoverSpec, IntervalUnion
from app.schemas.reports import DensityReport
from app.services import constructions, setmodel
import logging

logger = logging.getLogger(__name__)

descriptor_adapter = TypeAdapter(PointSetDescriptor)


class DocumentService:
    def _read_text(self, file_path: Union[str, Path]) -> str:
        try:
            with open(file_path, "r") as f:
                return f.read()
        except OSError as e:
            logger.error(f"Cannot read {file_path}: {e}")
            raise InputError(f"cannot read {file_path}: {e.strerror}", {"path": str(file_path)})

    def _parse_json(self, text: str, source: str) -> Any:
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError(f"{source} is not valid JSON: {e.msg} (line {e.lineno})", {"path": source})

    def read_json(self, file_path: Union[str, Path]) -> Any:
        return self._parse_json(self._read_text(file_path), str(file_path))

    def points_from_values(self, values: List[Any], **flags) -> PointSetWindow:
        try:
            numbers = sorted(float(v) for v in values)
        except (TypeError, ValueError):
            raise InputError("points must be real numbers")
        if not numbers:
            raise InputError("point set is empty")
        if not all(math.isfinite(x) for x in numbers):
            raise InputError("points must be finite")
        for left, right in zip(numbers, numbers[1:]):
            if left == right:
                raise DomainError(f"duplicate point {left}")
        try:
            return PointSetWindow(points=tuple(numbers), **flags)
        except ValidationError as e:
            raise InputError(f"invalid point set: {e.errors()[0]['msg']}")

    def points_from_document(self, data: Any) -> PointSetWindow:
        """A point set from a parsed document: {"points": [...]}, a bare list, or a descriptor."""
        if isinstance(data, list):
            return self.points_from_values(data)
        if not isinstance(data, dict):
            raise InputError("point-set document must be an object or a list")
        if "kind" in data:
            try:
                descriptor = descriptor_adapter.validate_python(data)
            except ValidationError as e:
                raise InputError(f"invalid generator descriptor: {e.errors()[0]['msg']}", {"descriptor": data})
            return constructions.from_descriptor(descriptor)
        if "points" not in data:
            raise InputError("point-set document has no 'points'")
        flags = {k: data[k] for k in ("window_certified", "density_bound") if k in data}
        return self.points_from_values(data["points"], **flags)

    def load_points(self, file_path: Union[str, Path]) -> PointSetWindow:
        """JSON document or a plain column file (one real per line, '#' comments)."""
        text = self._read_text(file_path)
        stripped = text.lstrip()
        if stripped.startswith("{") or stripped.startswith("["):
            window = self.points_from_document(self._parse_json(text, str(file_path)))
        else:
            values = []
            for number, line in enumerate(text.splitlines(), start=1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                try:
                    values.append(float(line))
                except ValueError:
                    raise InputError(f"{file_path}:{number}: not a number: {line!r}")
            window = self.points_from_values(values)
        logger.info(f"Loaded {len(window)} points from {file_path}")
        return window

    def cover_from_document(self, data: Any) -> CoverSpec:
        if isinstance(data, dict) and data.get("kind") == "hkw":
            try:
                return constructions.cover_from_descriptor(HkwDescriptor.model_validate(data))
            except ValidationError as e:
                raise InputError(f"invalid cover descriptor: {e.errors()[0]['msg']}")
        try:
            return CoverSpec.model_validate(data)
        except ValidationError as e:
            raise InputError(f"invalid cover: {e.errors()[0]['msg']}")

    def load_cover(self, file_path: Union[str, Path]) -> CoverSpec:
        return self.cover_from_document(self.read_json(file_path))

    def set_from_document(self, data: Any) -> IntervalUnion:
        if isinstance(data, dict):
            data = data.get("intervals")
        if not isinstance(data, list):
            raise InputError("set document must hold a list of intervals")
        return setmodel.normalize(data)

    def load_set(self, file_path: Union[str, Path]) -> IntervalUnion:
        return self.set_from_document(self.read_json(file_path))

    def load_inline_or_file(self, value: str) -> Any:
        """A JSON literal, or the path of a JSON file."""
        if Path(value).is_file():
            return self.read_json(value)
        return self._parse_json(value, "inline value")

    def load_config(self, file_path: Optional[Union[str, Path]]) -> Dict[str, Any]:
        if file_path is None:
            return {}
        data = self.read_json(file_path)
        if not isinstance(data, dict):
            raise InputError("configuration document must be an object")
        return data

    def to_document(self, payload: Any) -> Any:
        if isinstance(payload, BaseModel):
            return payload.model_dump(mode="json", by_alias=True)
        if isinstance(payload, dict):
            return {k: self.to_document(v) for k, v in payload.items()}
        if isinstance(payload, list):
            return [self.to_document(v) for v in payload]
        return payload

    def dumps(self, payload: Any) -> str:
        # json writes floats in shortest round-trip form
        return json.dumps(self.to_document(payload), indent=2)

    def write(self, payload: Any, out: Optional[Union[str, Path]] = None) -> str:
        text = self.dumps(payload)
        if out is not None:
            path = Path(out)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text + "\n")
            logger.info(f"Wrote {path}")
        return text

    def density_frame(self, report: DensityReport) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "h": report.h_values,
                "sup": report.sup_counts,
                "inf": report.inf_counts,
                "sup_ratio": report.sup_curve,
                "inf_ratio": report.inf_curve,
            }
        )

    def write_density_csv(self, report: DensityReport, file_path: Union[str, Path]) -> None:
        path = Path(file_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.density_frame(report).to_csv(path, index=False, float_format="%.17g")
        logger.info(f"Wrote density curves to {path}")
