from typing import Any, Callable, Dict, List, Optional
from fastapi import APIRouter, Depends, HTTPException, Query
from pydantic import TypeAdapter, ValidationError
from app.core.config import settings
from app.core.errors import ConfigError, EspartError
from app.core.storage import JSONStorage
from app.models.descriptors import HkwDescriptor, PointSetDescriptor
from app.schemas.reports import RunReport
from app.schemas.requests import DensityRequest, GramRequest, MvRequest, PartitionRequest, ProgressionRequest
from app.services.document_service import DocumentService
from app.services.run_service import RunService
import logging

logger = logging.getLogger(__name__)
router = APIRouter()

run_service = RunService()
document_service = DocumentService()
generator_adapter = TypeAdapter(PointSetDescriptor)


def get_storage() -> JSONStorage:
    return JSONStorage(settings.STORAGE_PATH)


def execute(storage: JSONStorage, command: str, run: Callable[[], RunReport]) -> Dict[str, Any]:
    """Run a pipeline command, store its report and map domain errors to HTTP errors."""
    try:
        report = run()
    except EspartError as e:
        logger.error(f"{command} failed: {e.message}", exc_info=True)
        raise HTTPException(status_code=e.status_code, detail=e.to_dict())
    except ValidationError as e:
        logger.error(f"{command} rejected invalid input: {e}")
        raise HTTPException(status_code=400, detail={"error": "InputError", "message": str(e), "details": {}})
    return storage.create_run(report.model_dump(mode="json"))


@router.post("/density", status_code=201)
async def density(request: DensityRequest, storage: JSONStorage = Depends(get_storage)):
    """Beurling density estimates of a point window."""
    return execute(storage, "density", lambda: run_service.density(
        document_service.points_from_document(request.points),
        request.r, request.h_min, request.h_max, request.h_steps,
    ))


@router.post("/partition", status_code=201)
async def partition(request: PartitionRequest, storage: JSONStorage = Depends(get_storage)):
    """Extract the partition certificate; validate Gram sections on request."""
    def run() -> RunReport:
        c = document_service.cover_from_document(request.cover)
        w = document_service.points_from_document(request.points)
        E = document_service.set_from_document(request.set) if request.set is not None else None
        return run_service.partition(c, w, request.alpha, request.validate_sections, request.window_sizes, E)
    return execute(storage, "partition", run)


@router.post("/gram", status_code=201)
async def gram(request: GramRequest, storage: JSONStorage = Depends(get_storage)):
    return execute(storage, "gram", lambda: run_service.gram(
        document_service.set_from_document(request.set),
        document_service.points_from_document(request.points),
        request.complement, request.target_lower, request.matrix,
    ))


@router.post("/mv", status_code=201)
async def mv(request: MvRequest, storage: JSONStorage = Depends(get_storage)):
    def run() -> RunReport:
        w = document_service.points_from_document(request.points) if request.points is not None else None
        return run_service.mv(w, request.coeffs, request.interval, request.delta, request.random_suite, request.seed)
    return execute(storage, "mv", run)


@router.post("/progression", status_code=201)
async def progression(request: ProgressionRequest, storage: JSONStorage = Depends(get_storage)):
    return execute(storage, "progression", lambda: run_service.progression(
        document_service.points_from_document(request.points),
        request.subsample_N, request.delta, request.log_base, request.search_budget,
    ))


@router.post("/gen", status_code=201)
async def gen(descriptor: Dict[str, Any], storage: JSONStorage = Depends(get_storage)):
    """Generate a cover (kind 'hkw') or a frequency set from a descriptor."""
    def run() -> RunReport:
        kind = str(descriptor.get("kind", "")).lower()
        if kind == "hkw":
            return run_service.gen(HkwDescriptor.model_validate(descriptor))
        if kind in ("easycor", "integers", "power"):
            return run_service.gen(generator_adapter.validate_python({**descriptor, "kind": kind}))
        raise ConfigError(f"unknown generator kind {kind!r}")
    return execute(storage, "gen", run)


@router.get("/runs", response_model=List[Dict[str, Any]])
async def list_runs(
    skip: int = 0,
    limit: int = Query(10, le=100),
    command: Optional[str] = None,
    storage: JSONStorage = Depends(get_storage),
):
    """List stored run reports."""
    return storage.list_runs(skip, limit, command)


@router.get("/runs/{run_id}")
async def get_run(run_id: int, storage: JSONStorage = Depends(get_storage)):
    run = storage.get_run(run_id)
    if run is None:
        raise HTTPException(status_code=404, detail="Run not found")
    return run
