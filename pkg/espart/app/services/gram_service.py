from typing import Optional, Sequence, Tuple
import numpy as np
from scipy import linalg
from app.core.config import settings
from app.core.errors import DomainError
from app.models.gram import GramSection
from app.models.sets import IntervalUnion
from app.schemas.reports import GramReport
from app.services import setmodel
from app.services.bounds import interval_kernel
import logging

logger = logging.getLogger(__name__)


class GramService:
    """Gram matrices of restricted exponential systems and their extremal eigenvalues."""

    def __init__(self, max_size: Optional[int] = None, eig_tol: Optional[float] = None):
        self.max_size = max_size or settings.GRAM_MAX_SIZE
        self.eig_tol = eig_tol if eig_tol is not None else settings.EIG_TOL

    def gram_matrix(self, E: IntervalUnion, freqs: Sequence[float]) -> GramSection:
        """G[n, m] = integral over E of exp(2 pi i (lambda_n - lambda_m) x)."""
        values = np.asarray(list(freqs), dtype=float)
        if values.size > self.max_size:
            raise DomainError(f"section of {values.size} frequencies exceeds the limit {self.max_size}")
        if np.unique(values).size != values.size:
            raise DomainError("duplicate frequencies in the section")

        nu = values[:, None] - values[None, :]
        matrix = np.zeros(nu.shape, dtype=complex)
        for a, b in E.intervals:
            matrix += interval_kernel(nu, a, b)
        # exact Hermitian structure; the diagonal is |E|
        matrix = (matrix + matrix.conj().T) / 2
        np.fill_diagonal(matrix, E.measure)
        return GramSection(frequencies=tuple(float(f) for f in values), set=E, matrix=matrix)

    def extremal_eigs(self, G: GramSection) -> Tuple[float, float]:
        if not G.size:
            return 0.0, 0.0
        asymmetry = np.max(np.abs(G.matrix - G.matrix.conj().T))
        if asymmetry > settings.HERMITIAN_TOL:
            raise DomainError(f"matrix is not Hermitian (max deviation {asymmetry:.3e})")
        eigenvalues = linalg.eigh(G.matrix, eigvals_only=True)
        return float(eigenvalues[0]), float(eigenvalues[-1])

    def section(self, E: IntervalUnion, freqs: Sequence[float]) -> GramSection:
        """Gram section with its extremal eigenvalues filled in."""
        G = self.gram_matrix(E, freqs)
        lambda_min, lambda_max = self.extremal_eigs(G)
        return G.model_copy(update={"lambda_min": lambda_min, "lambda_max": lambda_max})

    def riesz_margin(
        self,
        complement_mode: bool,
        E: IntervalUnion,
        freqs: Sequence[float],
        target_lower: float,
        include_matrix: bool = False,
    ) -> GramReport:
        """lambda_min of the section minus the predicted lower Riesz bound.

        A negative margin disproves the bound at this truncation; a positive one is only
        consistent with it.
        """
        target = setmodel.complement(E) if complement_mode else E
        G = self.section(target, freqs)
        lambda_max = G.lambda_max
        # round-off below zero is clamped in the reported value only
        floor = -self.eig_tol * max(1.0, lambda_max)
        reported = max(G.lambda_min, 0.0) if G.lambda_min >= floor else G.lambda_min
        margin = G.lambda_min - target_lower
        degenerate = target.measure == 0.0
        if degenerate:
            logger.warning("Gram section on a null set: the system is degenerate")
        return GramReport(
            freqs=list(G.frequencies),
            set_measure=target.measure,
            complement_mode=complement_mode,
            lambda_min=G.lambda_min,
            lambda_max=lambda_max,
            lambda_min_reported=reported,
            target_lower=target_lower,
            margin=margin,
            degenerate=degenerate,
            side="refutes" if margin <= 0 else "consistent",
            matrix=G.matrix_pairs() if include_matrix else None,
        )
