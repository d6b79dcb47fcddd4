import math
import numpy as np
import pytest
from scipy import integrate
from app.core.errors import DomainError
from app.models.gram import GramSection
from app.services import setmodel
from app.services.gram_service import GramService

gram_service = GramService()

FULL = setmodel.normalize([(0.0, 1.0)])
EMPTY = setmodel.normalize([])


def random_set(rng, pieces=3):
    return setmodel.normalize(np.sort(rng.uniform(0, 1, size=(pieces, 2)), axis=1).tolist())


def test_integers_on_the_torus_give_identity():
    G = gram_service.gram_matrix(FULL, range(10))
    assert np.allclose(G.matrix, np.eye(10), atol=1e-12)
    assert gram_service.extremal_eigs(G) == pytest.approx((1.0, 1.0), abs=1e-12)


def test_half_interval_entry():
    E = setmodel.normalize([(0.0, 0.5)])
    G = gram_service.gram_matrix(E, (0.0, 1.0))
    assert G.matrix[1, 0] == pytest.approx(1j / math.pi, abs=1e-14)
    assert G.matrix[0, 1] == pytest.approx(-1j / math.pi, abs=1e-14)
    assert G.matrix[0, 0] == 0.5
    lo, hi = gram_service.extremal_eigs(G)
    assert lo == pytest.approx(0.5 - 1 / math.pi, abs=1e-12)
    assert hi == pytest.approx(0.5 + 1 / math.pi, abs=1e-12)


def test_orthogonal_frequencies_on_a_quarter():
    E = setmodel.normalize([(0.0, 0.25)])
    section = gram_service.section(E, (0, 4, 8))
    assert section.lambda_min == pytest.approx(0.25, abs=1e-12)
    assert section.lambda_max == pytest.approx(0.25, abs=1e-12)


def test_entries_match_quadrature():
    E = setmodel.normalize([(0.1, 0.3), (0.55, 0.9)])
    freqs = (0.0, 1.37, 4.2)
    G = gram_service.gram_matrix(E, freqs)
    for n, a in enumerate(freqs):
        for m, b in enumerate(freqs):
            nu = a - b
            re = sum(integrate.quad(lambda x: np.cos(2 * np.pi * nu * x), lo, hi)[0] for lo, hi in E.intervals)
            im = sum(integrate.quad(lambda x: np.sin(2 * np.pi * nu * x), lo, hi)[0] for lo, hi in E.intervals)
            assert G.matrix[n, m] == pytest.approx(complex(re, im), abs=1e-10)


def random_freqs(rng, max_size=64):
    size = int(rng.integers(1, max_size + 1))
    return np.cumsum(rng.uniform(0.2, 3.0, size))


def test_extremal_eigs_match_numpy():
    rng = np.random.default_rng(6)
    for _ in range(100):
        G = gram_service.gram_matrix(random_set(rng), random_freqs(rng))
        assert np.max(np.abs(G.matrix - G.matrix.conj().T)) <= 1e-12
        reference = np.linalg.eigvalsh(G.matrix)
        lo, hi = gram_service.extremal_eigs(G)
        assert lo >= -1e-10
        assert lo == pytest.approx(reference[0], abs=1e-10)
        assert hi == pytest.approx(reference[-1], abs=1e-10)


def test_empty_set_gives_zero_matrix():
    section = gram_service.section(EMPTY, (0.0, 1.5, 3.0))
    assert np.all(section.matrix == 0)
    assert (section.lambda_min, section.lambda_max) == (0.0, 0.0)


def test_gram_is_additive_over_complements():
    rng = np.random.default_rng(2)
    for _ in range(100):
        E = random_set(rng)
        freqs = random_freqs(rng)
        on_set = gram_service.gram_matrix(E, freqs).matrix
        on_complement = gram_service.gram_matrix(setmodel.complement(E), freqs).matrix
        full = gram_service.gram_matrix(FULL, freqs).matrix
        assert np.max(np.abs(full - on_set - on_complement)) <= 1e-12


def test_eigenvalues_grow_with_the_set():
    rng = np.random.default_rng(4)
    for _ in range(100):
        E = random_set(rng, 2)
        bigger = setmodel.normalize([*E.intervals, *random_set(rng, 2).intervals])
        freqs = random_freqs(rng)
        small = gram_service.section(E, freqs)
        large = gram_service.section(bigger, freqs)
        assert large.lambda_min >= small.lambda_min - 1e-10
        assert large.lambda_max >= small.lambda_max - 1e-10


def test_eigenvalues_interlace_as_the_window_grows():
    rng = np.random.default_rng(9)
    for _ in range(100):
        E = random_set(rng)
        freqs = random_freqs(rng, 16)
        previous = gram_service.section(E, freqs[:1])
        for m in range(2, len(freqs) + 1):
            current = gram_service.section(E, freqs[:m])
            assert current.lambda_min <= previous.lambda_min + 1e-10
            assert current.lambda_max >= previous.lambda_max - 1e-10
            previous = current


def test_single_interval_obeys_mv_bounds():
    rng = np.random.default_rng(8)
    for _ in range(100):
        delta = float(rng.uniform(1, 10))
        freqs = np.cumsum(delta + rng.exponential(delta, 8))
        start = float(rng.uniform(0, 0.5))
        length = float(rng.uniform(0.05, 0.5))
        section = gram_service.section(setmodel.normalize([(start, start + length)]), freqs)
        assert section.lambda_max <= length + 1 / delta + 1e-10
        assert section.lambda_min >= length - 1 / delta - 1e-10


def test_riesz_margin_on_complement():
    report = gram_service.riesz_margin(True, EMPTY, range(5), 0.25)
    assert report.lambda_min == pytest.approx(1.0, abs=1e-12)
    assert report.margin == pytest.approx(0.75, abs=1e-12)
    assert report.side == "consistent"
    assert not report.degenerate
    assert report.matrix is None


def test_riesz_margin_flips_with_the_target():
    E = setmodel.normalize([(0.0, 0.1)])
    freqs = [0, 20, 40, 60]
    report = gram_service.riesz_margin(True, E, freqs, 0.0)
    assert report.margin > 0
    raised = gram_service.riesz_margin(True, E, freqs, report.lambda_min + 0.01)
    assert raised.margin < 0
    assert raised.side == "refutes"


def test_riesz_margin_on_null_complement():
    report = gram_service.riesz_margin(True, FULL, (0.0, 1.0), 0.1, include_matrix=True)
    assert report.degenerate
    assert report.margin < 0
    assert report.lambda_min_reported == 0.0
    assert report.matrix == [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]


def test_gram_rejects_bad_sections():
    with pytest.raises(DomainError):
        gram_service.gram_matrix(FULL, (0.0, 1.0, 1.0))
    with pytest.raises(DomainError):
        GramService(max_size=4).gram_matrix(FULL, range(5))


def test_non_hermitian_matrix_is_rejected():
    matrix = np.array([[1.0, 0.5], [0.0, 1.0]], dtype=complex)
    G = GramSection(frequencies=(0.0, 1.0), set=FULL, matrix=matrix)
    with pytest.raises(DomainError):
        gram_service.extremal_eigs(G)


if __name__ == "__main__":
    pytest.main([__file__])
