import warnings
import numpy as np
import pytest
from app.core.config import settings
from app.core.errors import ConfigError, DomainError
from app.models.points import DensityBound, PointSetWindow
from app.services import pointset
from app.services.constructions import easycor_lambda, integers_window, power_window


def window(values):
    return PointSetWindow(points=tuple(float(v) for v in values))


def test_window_rejects_unsorted_points():
    with pytest.raises(ValueError):
        window([0, 2, 1])
    with pytest.raises(ValueError):
        window([0, 1, 1])


def test_global_indices_start_at_first_nonnegative_point():
    w = window([-3, -1, 0.5, 2])
    assert w.anchor == 2
    assert list(w.global_indices()) == [-2, -1, 0, 1]


def test_counts_on_integers():
    w = integers_window(-100, 100)
    assert pointset.count_in_cube(w, 0.5, 1) == 2
    assert pointset.count_in_cube(w, 0.0, 1) == 3
    assert pointset.max_count(w, 1) == 3
    assert pointset.min_count_inside(w, 1) == 2
    assert pointset.covering_multiplicity(w, 1) == 3
    assert pointset.separation(w) == 1.0
    assert pointset.dense_radius(w) == 0.5


def test_counts_match_brute_force():
    rng = np.random.default_rng(3)
    w = window(np.unique(rng.uniform(-50, 50, 200)))
    arr = np.array(w.points)
    for x, h in zip(rng.uniform(-60, 60, 1000), rng.uniform(0.1, 20, 1000)):
        assert pointset.count_in_cube(w, x, h) == np.count_nonzero(np.abs(arr - x) <= h)


def test_small_examples():
    assert pointset.count_in_cube(window([0, 0.5, 1.7]), 1.0, 1.0) == 3
    assert pointset.count_in_cube(integers_window(-10, 10), 0.5, 0.4) == 0
    assert pointset.separation(window([0, 1, 1 + 1e-9])) == pytest.approx(1e-9, rel=1e-6)
    profile = pointset.discreteness_profile(integers_window(-10, 10), 0.4)
    assert (profile.sup_count, profile.inf_count) == (1, 0)


def test_sup_counts_grow_with_the_scale():
    w = power_window(2, 30)
    counts = [pointset.d_plus_profile(w, 0.0, r) for r in np.geomspace(0.5, 500, 30)]
    assert all(a <= b for a, b in zip(counts, counts[1:]))


def test_subsamples_are_no_denser_than_the_set():
    w = power_window(3, 20)
    for j in range(1, 4):
        assert pointset.separation(pointset.subsample(w, 3, j)) >= pointset.separation(w)


def test_counts_reject_bad_scales():
    w = integers_window(0, 5)
    with pytest.raises(DomainError):
        pointset.count_in_cube(w, 0.0, 0)
    with pytest.raises(DomainError):
        pointset.max_count(w, -1)
    with pytest.raises(DomainError):
        pointset.separation(window([1.0]))


def test_discreteness_profile_of_single_point():
    profile = pointset.discreteness_profile(window([0.0]), 5)
    assert profile.sup_count == 1
    assert profile.inf_count == 0


def test_d_plus_profile():
    w = integers_window(-100, 100)
    assert pointset.d_plus_profile(w, 1.0, 10) == pytest.approx(2.1)
    assert pointset.d_plus_profile(w, 0.0, 10) == 21
    with pytest.raises(DomainError):
        pointset.d_plus_profile(w, -0.5, 10)


def test_covers_cube():
    w = integers_window(0, 10)
    assert pointset.covers_cube(w, 5, 5)
    assert not pointset.covers_cube(w, 5, 6)
    certified = w.model_copy(update={"window_certified": True})
    assert pointset.covers_cube(certified, 5, 100)


def test_profiles_flag_cubes_wider_than_the_window():
    w = integers_window(0, 10)
    assert not pointset.discreteness_profile(w, 5).truncated
    assert pointset.discreteness_profile(w, 6).truncated
    certified = w.model_copy(update={"window_certified": True})
    assert not pointset.discreteness_profile(certified, 6).truncated


def test_density_report_holds_plain_bools():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        report = pointset.density_estimate(integers_window(-100, 100), 1.0, [5.0, 10.0, 20.0])
    assert type(report.uniform) is bool
    assert type(report.truncated) is bool


def test_integers_have_density_two():
    w = integers_window(-500, 500)
    report = pointset.density_estimate(w, 1.0, np.geomspace(10, 250, 12))
    print(f"D+ = {report.d_plus_estimate}, D- = {report.d_minus_estimate}")
    assert abs(report.d_plus_estimate - 2) < 0.1
    assert abs(report.d_minus_estimate - 2) < 0.1
    assert report.uniform
    assert not report.truncated
    assert len(report.sup_curve) == 12


def test_threaded_profiles_match_sequential(monkeypatch):
    w = power_window(2, 40)
    grid = [1.0, 5.0, 25.0, 125.0]
    sequential = pointset.density_estimate(w, 0.5, grid)
    monkeypatch.setattr(settings, "THREADS", 2)
    assert pointset.density_estimate(w, 0.5, grid) == sequential


def test_density_of_single_point_is_truncated():
    report = pointset.density_estimate(window([0.0]), 1.0, [1.0, 2.0])
    assert report.d_minus_estimate == 0
    assert report.truncated


def test_density_rejects_bad_grids():
    w = integers_window(0, 10)
    with pytest.raises(ConfigError):
        pointset.density_estimate(w, 1.0, [])
    with pytest.raises(ConfigError):
        pointset.density_estimate(w, 1.0, [2.0, 1.0])
    with pytest.raises(DomainError):
        pointset.density_estimate(w, 0.0, [1.0])


def test_dimension_of_integers():
    w = integers_window(-500, 500)
    report = pointset.dim_estimate(w, [1.0], pointset.scale_grid(w))
    print(f"dim+ = {report.dim_plus}, dim- = {report.dim_minus}")
    assert report.dim_plus > 0.95
    assert report.dim_minus > 0.9
    assert report.r_values == [1.0]
    assert report.d_plus_by_r[0] == pytest.approx(2, abs=0.1)


def test_dimension_of_cubes():
    w = power_window(3, 60)
    report = pointset.dim_estimate(w, [0.5], pointset.scale_grid(w))
    print(f"dim+ of cubes = {report.dim_plus}")
    assert abs(report.dim_plus - 1 / 3) < 0.05


def test_dimension_of_lacunary_blocks():
    w = easycor_lambda(0.8, 24)
    report = pointset.dim_estimate(w, [0.8], pointset.scale_grid(w))
    print(f"dim+ of the block set = {report.dim_plus} on h in {report.fit_h_range}")
    assert abs(report.dim_plus - 0.8) < 0.1
    # the steepest stretch is inside the blocks, far below the block gaps
    assert report.fit_h_range[1] < 100

    block_scales = [j ** 1.25 for j in range(1, 25)]
    assert abs(pointset.dim_estimate(w, [0.8], block_scales).dim_plus - 0.8) < 0.1


def test_sup_corners():
    h, counts = pointset.sup_corners(integers_window(0, 20))
    assert list(counts) == list(range(2, 22))
    assert np.allclose(h, (counts - 1) / 2)

    h, counts = pointset.sup_corners(window([0, 1, 10, 11, 12]), h_min=1.0)
    assert list(counts) == [3, 4, 5]
    assert list(h) == [1.0, 5.5, 6.0]
    for c, half in zip(counts, h):
        assert pointset.max_count(window([0, 1, 10, 11, 12]), half) == c


def test_upper_dimension_takes_the_steepest_window():
    h = np.array([1.0, 2.0, 4.0, 8.0, 1e3, 1e6, 1e9])
    counts = np.array([2, 4, 8, 16, 17, 18, 19])
    slope, lo, hi, corners = pointset.upper_dimension(h, counts, 7.0)
    assert slope == pytest.approx(1.0)
    assert (lo, hi, corners) == (1.0, 8.0, 4)
    with pytest.raises(ConfigError):
        pointset.upper_dimension(h[:2], counts[:2], 7.0)


def test_dimension_needs_three_scales():
    w = integers_window(0, 10)
    with pytest.raises(ConfigError):
        pointset.dim_estimate(w, [1.0], [1.0, 2.0])
    with pytest.raises(ConfigError):
        pointset.dim_estimate(w, [1.0], [1.0, 2.0, 3.0], fit_fraction=0)
    with pytest.raises(ConfigError):
        pointset.dim_estimate(w, [], [1.0, 2.0, 3.0])
    with pytest.raises(ConfigError):
        pointset.dim_estimate(w, [1.0], [1.0, 2.0, 3.0], window_factor=1.0)


def test_scale_grid():
    grid = pointset.scale_grid(integers_window(-100, 100), steps=5)
    assert grid[0] == pytest.approx(1.0)
    assert grid[-1] == pytest.approx(100.0)
    assert len(grid) == 5
    with pytest.raises(ConfigError):
        pointset.scale_grid(window([0.0, 1.0]))


def test_subsample():
    w = window(range(6))
    assert pointset.subsample(w, 3, 2).points == (2.0, 5.0)
    assert pointset.subsample(w, 1, 1).points == w.points

    odd = pointset.subsample(integers_window(-10, 10), 2, 1)
    assert all(int(x) % 2 == 1 for x in odd.points)
    assert len(odd) == 10

    with pytest.raises(DomainError):
        pointset.subsample(w, 3, 0)
    with pytest.raises(DomainError):
        pointset.subsample(w, 0, 1)


def test_subsamples_partition_the_window():
    w = power_window(2, 30)
    N = 4
    pieces = [set(pointset.subsample(w, N, j).points) for j in range(1, N + 1)]
    assert sum(len(p) for p in pieces) == len(w)
    assert set().union(*pieces) == set(w.points)


def test_subsample_keeps_flags():
    w = integers_window(0, 9).model_copy(update={"density_bound": DensityBound(beta_bar=1.0, C=3.0)})
    sub = pointset.subsample(w, 2, 2)
    assert sub.density_bound == w.density_bound


if __name__ == "__main__":
    pytest.main([__file__])
