import math
import pytest
from app.core.errors import ConfigError, DomainError, NotFoundError
from app.models.descriptors import IntegersDescriptor, LengthRule, LengthRuleKind, Schedule
from app.models.points import PointSetWindow
from app.services import constructions, pointset, setmodel


def test_farey_order():
    gen = constructions.farey_centers()
    first = [next(gen) for _ in range(8)]
    assert first == [(0, 1), (1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (1, 5), (2, 5)]


def test_default_cover():
    c = constructions.hkw_cover(3)
    assert c.centers == (0.0, 0.5, 1 / 3)
    assert c.lengths == (0.25, 0.125, 0.0625)
    assert c.tail.from_n == 4
    assert setmodel.sum_lengths(c) == pytest.approx(0.5)


def test_centers_are_distinct_and_dense():
    c = constructions.hkw_cover(1000)
    centers = sorted(c.centers)
    assert len(set(centers)) == 1000
    gaps = [b - a for a, b in zip(centers, centers[1:] + [1.0])]
    # every subinterval of length 0.025 meets a centre
    assert max(gaps) < 0.025


def test_slow_rule_is_truncated():
    rule = LengthRule(kind=LengthRuleKind.SLOW, c=0.5 * 6 / math.pi ** 2)
    assert rule.total() == pytest.approx(0.5)
    c = constructions.hkw_cover(10, rule)
    assert c.tail is None
    assert c.lengths[0] == pytest.approx(rule.c)
    assert c.lengths[-1] == pytest.approx(rule.c / 100)


def test_cover_rejects_bad_rules():
    with pytest.raises(ConfigError):
        constructions.hkw_cover(5, LengthRule(c=0.9, rho=0.6))
    with pytest.raises(ConfigError):
        constructions.hkw_cover(0)


def test_block_step():
    assert constructions.block_step(1, 0.25) == 1
    assert constructions.block_step(16, 0.25) == 2
    assert constructions.block_step(17, 0.25) == 3


def test_easycor_blocks():
    blocks = constructions.easycor_blocks(0.8, 4)
    assert blocks[0] == [2, 3]
    assert blocks[1] == [16, 18, 20]
    assert blocks[3] == [128, 130, 132, 134, 136]
    for j, block in enumerate(blocks, start=1):
        assert len(block) == j + 1
        step = constructions.block_step(j, 0.25)
        assert all(b - a == step for a, b in zip(block, block[1:]))


def test_easycor_blocks_have_uniform_local_density():
    beta = 0.8
    gamma = (1 - beta) / beta
    for j, block in enumerate(constructions.easycor_blocks(beta, 24), start=1):
        w = PointSetWindow(points=tuple(float(x) for x in block))
        count = pointset.max_count(w, j ** (1 + gamma))
        assert 0.5 * j <= count <= 1.5 * (j + 1)


def test_tower_schedule():
    blocks = constructions.easycor_blocks(0.8, 4, Schedule.TOWER)
    assert [block[0] for block in blocks] == [4, 16, 256, 65536]
    with pytest.raises(ConfigError):
        constructions.easycor_blocks(0.8, 7, Schedule.TOWER)


def test_easycor_rejects_bad_parameters():
    with pytest.raises(ConfigError):
        constructions.easycor_blocks(0.6, 4)
    with pytest.raises(ConfigError):
        constructions.easycor_blocks(0.8, 2, Schedule.EXPLICIT, q_values=(10, 11))
    with pytest.raises(ConfigError):
        constructions.easycor_blocks(0.8, 3, Schedule.EXPLICIT, q_values=(10, 100))


def test_easycor_lambda_keeps_exact_values():
    w = constructions.easycor_lambda(0.8, 24)
    assert w.exact is not None
    assert len(w) == sum(j + 1 for j in range(1, 25))
    assert all(float(x) == y for x, y in zip(w.exact, w.points))


def test_simple_windows():
    assert constructions.integers_window(-2, 2).points == (-2.0, -1.0, 0.0, 1.0, 2.0)
    assert constructions.power_window(2, 3, include_zero=False).points == (-9.0, -4.0, -1.0, 1.0, 4.0, 9.0)
    assert len(constructions.from_descriptor(IntegersDescriptor(lo=0, hi=9))) == 10
    with pytest.raises(ConfigError):
        constructions.integers_window(3, 2)


def test_progression_value():
    assert constructions.progression_value(6, 2) == pytest.approx(1.412904, abs=1e-6)
    assert constructions.progression_value(6, 2, "10") == pytest.approx(0.115735, abs=1e-6)


class TestProgressionSearch:
    w = constructions.easycor_lambda(0.8, 24)

    def test_found_below_the_smallest_value(self):
        cert = constructions.progression_check(self.w, 3, 1.5)
        print(cert)
        assert cert.ell == 6
        assert cert.N_prog == 2
        assert cert.M == 1792
        assert cert.value == pytest.approx(1.412904, abs=1e-6)
        assert cert.contained
        sub = set(pointset.subsample(self.w, 3, 3).exact)
        assert all(x in sub for x in cert.elements)

    def test_not_found_with_natural_log(self):
        with pytest.raises(NotFoundError):
            constructions.progression_check(self.w, 3, 0.5)

    def test_found_with_decimal_log(self):
        cert = constructions.progression_check(self.w, 3, 0.5, log_base="10")
        assert cert.log_base == "10"
        assert cert.value < 0.5

    def test_budget_is_enforced(self):
        with pytest.raises(NotFoundError) as exc:
            constructions.progression_check(self.w, 3, 0.5, search_budget=1)
        assert "budget" in exc.value.message

    def test_bad_parameters(self):
        with pytest.raises(ConfigError):
            constructions.progression_check(self.w, 3, 0.5, log_base="3")
        with pytest.raises(ConfigError):
            constructions.progression_check(self.w, 3, 0.0)


def test_progression_on_sparse_subsample():
    w = PointSetWindow(points=(100.0, 101.0, 102.0))
    with pytest.raises(NotFoundError):
        constructions.progression_check(w, 3, 10.0)


def test_progression_needs_integers():
    with pytest.raises(DomainError):
        constructions.progression_check(PointSetWindow(points=(0.5, 1.0, 2.0)), 1, 10.0)


if __name__ == "__main__":
    pytest.main([__file__])
