"""Monte-Carlo oracle: determinism, statistical agreement, reference values."""

import math
from fractions import Fraction

import pytest

from conftest import ball_polynomial, unit_box
from levelvol import (
    BoxSpec,
    DegenerateEstimateError,
    ball_volume,
    mc_pushforward_moment,
    mc_riesz_residual,
    mc_volume,
    model_moment,
    parse_polynomial,
)

F = Fraction


class TestMcVolume:
    def test_whole_box_is_exact(self):
        # x1^2 <= 1 everywhere on [-1,1]^2, so every sample hits
        est = mc_volume(parse_polynomial("x1^2", 2), unit_box(2), 0.0, 1.0, 5000, 1)
        assert est.mean == 4.0 and est.stderr == 0.0

    def test_empty_band(self):
        est = mc_volume(ball_polynomial(2), unit_box(2), 2.0, 3.0, 5000, 1)
        assert est.mean == 0.0

    def test_single_sample_is_bernoulli(self):
        values = {
            mc_volume(ball_polynomial(2), unit_box(2), 0.0, 1.0, 1, seed).mean
            for seed in range(20)
        }
        assert values <= {0.0, 4.0} and len(values) == 2

    def test_disk_area(self):
        est = mc_volume(ball_polynomial(2), unit_box(2), 0.0, 1.0, 1_000_000, 42)
        assert abs(est.mean - math.pi) <= 4 * est.stderr

    def test_determinism(self):
        a = mc_volume(ball_polynomial(3), unit_box(3), 0.0, 1.0, 100_000, 7)
        b = mc_volume(ball_polynomial(3), unit_box(3), 0.0, 1.0, 100_000, 7)
        assert a == b

    def test_seed_changes_estimate(self):
        a = mc_volume(ball_polynomial(3), unit_box(3), 0.0, 1.0, 100_000, 7)
        b = mc_volume(ball_polynomial(3), unit_box(3), 0.0, 1.0, 100_000, 8)
        assert a.mean != b.mean

    def test_radius_scaling(self):
        box = BoxSpec(2, F(13, 10))
        est = mc_volume(ball_polynomial(2), box, 0.0, 1.0, 1_000_000, 5)
        assert abs(est.mean - math.pi) <= 4 * est.stderr

    def test_sample_validation(self):
        with pytest.raises(ValueError):
            mc_volume(ball_polynomial(2), unit_box(2), 0.0, 1.0, 0, 1)


class TestMcPushforwardMoment:
    def test_first_disk_moment(self):
        est = mc_pushforward_moment(
            (ball_polynomial(2),), unit_box(2), 1, samples=400_000, seed=3
        )
        assert abs(est.mean - 2 / 3) <= 4 * est.stderr

    def test_second_disk_moment(self):
        est = mc_pushforward_moment(
            (ball_polynomial(2),), unit_box(2), 2, samples=400_000, seed=4
        )
        assert abs(est.mean - 28 / 45) <= 4 * est.stderr

    def test_zeroth_moment_exact(self):
        est = mc_pushforward_moment(
            (ball_polynomial(2),), unit_box(2), 0, samples=1000, seed=5
        )
        assert est.mean == 1.0 and est.stderr == 0.0

    def test_restricted_moment(self):
        g = ball_polynomial(2)
        est = mc_pushforward_moment(
            (g,), unit_box(2), 1, restriction=(0.0, 1.0), samples=400_000, seed=6
        )
        # E[g 1_{g<=1}] = (pi/4) * 2/(2+2) via the model-measure identity
        expected = (math.pi / 4) * float(model_moment(2, 2, 1))
        assert abs(est.mean - expected) <= 4 * est.stderr

    def test_each_mode_restricts_componentwise(self):
        parts = (parse_polynomial("x1^2", 2), parse_polynomial("x2^2", 2))
        est = mc_pushforward_moment(
            parts, unit_box(2), (0, 0), restriction=(0.0, 0.25), mode="each",
            samples=200_000, seed=8,
        )
        # both coordinates in [-1/2, 1/2]: probability 1/4
        assert abs(est.mean - 0.25) <= 4 * est.stderr

    def test_degenerate_restriction(self):
        with pytest.raises(DegenerateEstimateError):
            mc_pushforward_moment(
                (ball_polynomial(2),), unit_box(2), 1, restriction=(5.0, 6.0),
                samples=1000, seed=9,
            )

    def test_alpha_length_validation(self):
        with pytest.raises(ValueError):
            mc_pushforward_moment(
                (ball_polynomial(2),), unit_box(2), (1, 2), samples=10, seed=0
            )


class TestMcRieszResidual:
    def test_known_moment_relation(self):
        # E[g] - (2/3) E[1] = 0 for the disk map on the unit box
        est = mc_riesz_residual(
            {(1,): F(1), (0,): F(-2, 3)},
            (ball_polynomial(2),),
            unit_box(2),
            samples=400_000,
            seed=10,
        )
        assert abs(est.mean) <= 4 * est.stderr

    def test_lemma_moment_ratios_on_restricted_ball(self):
        # restricted pushforward of the n=3 ball: phi_j = n/(n+2j) phi_0
        g = ball_polynomial(3)
        for j in (1, 2, 3):
            ratio = float(model_moment(3, 2, j))
            est = mc_riesz_residual(
                {(j,): F(1), (0,): -F(3, 3 + 2 * j)},
                (g,),
                unit_box(3),
                restriction=(0.0, 1.0),
                samples=300_000,
                seed=100 + j,
            )
            assert abs(est.mean) <= 4 * est.stderr
            assert ratio == 3 / (3 + 2 * j)

    def test_empty_constraint_rejected(self):
        with pytest.raises(ValueError):
            mc_riesz_residual({}, (ball_polynomial(2),), unit_box(2), samples=10, seed=0)


class TestBallVolume:
    def test_known_values(self):
        assert ball_volume(4) == pytest.approx(4.9348, abs=5e-5)
        assert ball_volume(5) == pytest.approx(5.2638, abs=5e-5)
        assert ball_volume(8) == pytest.approx(4.0587, abs=5e-5)

    def test_low_dimensions_exact(self):
        assert ball_volume(1) == pytest.approx(2.0, rel=1e-14)
        assert ball_volume(2) == pytest.approx(math.pi, rel=1e-14)
        assert ball_volume(3) == pytest.approx(4 * math.pi / 3, rel=1e-14)

    def test_validation(self):
        with pytest.raises(ValueError):
            ball_volume(0)
