from typing import Callable, Iterable, List, TypeVar
from joblib import Parallel, delayed
from app.core.config import settings

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """Thread-parallel map capped by ESPART_THREADS; results keep the input order."""
    items = list(items)
    n_jobs = max(1, min(settings.THREADS, len(items) or 1))
    if n_jobs == 1:
        return [fn(item) for item in items]
    return Parallel(n_jobs=n_jobs, prefer="threads")(delayed(fn)(item) for item in items)
