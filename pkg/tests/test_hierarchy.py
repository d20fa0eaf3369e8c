"""Hierarchy driver: convergence, monotonicity, bases, diagnostics."""

import math
from fractions import Fraction

import numpy as np
import pytest

import levelvol.hierarchy as hierarchy_module
from conftest import ball_polynomial, unit_box
from levelvol import (
    BoxSpec,
    MomentExtender,
    NotPositiveDefinite,
    ball_volume,
    integral_discriminant,
    model_matrix,
    moment_matrix,
    parse_polynomial,
    pushforward_moments,
    run_hierarchy,
)

F = Fraction


def numpy_pencil_min(A, B):
    """Independent oracle: smallest generalized eigenvalue via numpy solve."""
    w = np.linalg.eigvals(np.linalg.solve(B.entries, A.entries))
    return float(np.min(w.real))


class TestRunHierarchy:
    def test_disk_first_two_degrees(self):
        # the d=1 pencil has eigenvalues {4/5, 8/3} exactly, so 4*tau_1 = 3.2;
        # d=2 is pinned against an independent numpy solve of the same pencil
        report = run_hierarchy(ball_polynomial(2), unit_box(2), 2)
        scaled = report.scaled_estimates()
        assert scaled[0] == pytest.approx(3.2, abs=1e-12)
        seq = pushforward_moments(ball_polynomial(2), unit_box(2), 4)
        oracle = numpy_pencil_min(moment_matrix(seq, 2), model_matrix(2, 2, 2))
        assert scaled[1] == pytest.approx(4 * oracle, rel=1e-10)
        assert scaled[1] == pytest.approx(3.14436, abs=5e-5)

    def test_small_ball_against_numpy_oracle(self):
        n = 4
        g = ball_polynomial(n)
        box = unit_box(n)
        report = run_hierarchy(g, box, 3)
        seq = pushforward_moments(g, box, 6)
        for rec in report.records:
            oracle = numpy_pencil_min(
                moment_matrix(seq, rec.d), model_matrix(n, 2, rec.d)
            )
            assert rec.tau == pytest.approx(oracle, rel=1e-9)

    def test_monotone_nonincreasing(self):
        report = run_hierarchy(ball_polynomial(3), unit_box(3), 5)
        taus = [rec.tau for rec in report.records]
        assert all(b <= a * (1 + 1e-9) for a, b in zip(taus, taus[1:]))
        assert report.monotone

    def test_upper_bounds_known_volume(self):
        for n in (2, 3, 4):
            report = run_hierarchy(ball_polynomial(n), unit_box(n), 5)
            exact = ball_volume(n)
            for scaled in report.scaled_estimates():
                assert scaled >= exact - 1e-6

    def test_scaled_is_volume_factor_times_tau(self):
        report = run_hierarchy(ball_polynomial(2), BoxSpec(2, F(13, 10)), 2)
        factor = float((2 * F(13, 10)) ** 2)
        for rec in report.records:
            assert rec.scaled == factor * rec.tau

    def test_chebyshev_basis_independence(self):
        for n, dmax in ((2, 6), (5, 6)):
            g = ball_polynomial(n)
            box = unit_box(n)
            reference = run_hierarchy(g, box, dmax, plateau_tol=None).scaled_estimates()
            other = run_hierarchy(
                g, box, dmax, basis="chebyshev", plateau_tol=None
            ).scaled_estimates()
            for lhs, rhs in zip(reference, other):
                assert rhs == pytest.approx(lhs, rel=1e-7)

    def test_orthonormal_bases_agree_at_low_degree(self):
        # these run through the floating congruence, so only the well
        # conditioned low degrees are comparable at tight tolerance
        g = ball_polynomial(3)
        box = unit_box(3)
        reference = run_hierarchy(g, box, 3, plateau_tol=None).scaled_estimates()
        for basis in ("orthonormal-model", "orthonormal-pushforward"):
            other = run_hierarchy(
                g, box, 3, basis=basis, plateau_tol=None
            ).scaled_estimates()
            for lhs, rhs in zip(reference, other):
                assert rhs == pytest.approx(lhs, rel=1e-9)

    def test_non_homogeneous_rejected(self):
        with pytest.raises(ValueError, match="homogeneous"):
            run_hierarchy(parse_polynomial("x1^2 + x2", 2), unit_box(2), 2)

    def test_odd_degree_rejected(self):
        with pytest.raises(ValueError, match="even"):
            run_hierarchy(parse_polynomial("x1^3 + x2^3", 2), unit_box(2), 2)

    def test_dmax_validation(self):
        with pytest.raises(ValueError):
            run_hierarchy(ball_polynomial(2), unit_box(2), 0)

    def test_moment_reuse_single_extension(self):
        extender = MomentExtender(ball_polynomial(3), unit_box(3))
        run_hierarchy(
            ball_polynomial(3), unit_box(3), 4, moment_source=extender, checks=False
        )
        assert extender.multiplications == 8
        run_hierarchy(
            ball_polynomial(3), unit_box(3), 4, moment_source=extender, checks=False
        )
        assert extender.multiplications == 8

    def test_plateau_stops_early(self):
        report = run_hierarchy(
            ball_polynomial(2), unit_box(2), 8, plateau_tol=2e-2, checks=False
        )
        skipped = [rec for rec in report.records if rec.error and "plateau" in rec.error]
        assert skipped
        assert all(rec.tau is None for rec in skipped)

    def test_definiteness_failure_stops_and_marks_remaining(self, monkeypatch):
        calls = {"n": 0}

        def flaky(A, B):
            calls["n"] += 1
            if calls["n"] >= 3:
                raise NotPositiveDefinite(2)
            return real_gen_eig(A, B)

        real_gen_eig = hierarchy_module.gen_eig_min
        monkeypatch.setattr(hierarchy_module, "gen_eig_min", flaky)
        report = run_hierarchy(ball_polynomial(2), unit_box(2), 5, checks=False)
        assert [rec.tau is not None for rec in report.records] == [
            True, True, False, False, False,
        ]
        assert "not positive definite" in report.records[2].error
        assert all("unavailable" in rec.error for rec in report.records[3:])
        assert report.final_estimate == report.records[1].scaled


class TestWarnings:
    def test_clean_ball_produces_no_warnings(self):
        report = run_hierarchy(ball_polynomial(2), unit_box(2), 1)
        assert report.warnings == []

    def test_indefinite_polynomial_warns(self):
        g = parse_polynomial("x1^2 - x2^2", 2)
        report = run_hierarchy(g, unit_box(2), 1)
        assert any("negative" in w for w in report.warnings)

    def test_too_small_box_warns_about_containment(self):
        report = run_hierarchy(ball_polynomial(2), BoxSpec(2, F(1, 2)), 1)
        assert any("boundary" in w for w in report.warnings)

    def test_checks_can_be_disabled(self):
        g = parse_polynomial("x1^2 - x2^2", 2)
        report = run_hierarchy(g, unit_box(2), 1, checks=False)
        assert report.warnings == []


class TestIntegralDiscriminant:
    def test_zero_volume(self):
        assert integral_discriminant(0.0, 3, 2) == 0.0

    def test_planar_gaussian(self):
        # integral of exp(-|x|^2) over R^2 is pi = Gamma(2) * pi
        assert integral_discriminant(math.pi, 2, 2) == pytest.approx(2 * math.pi, rel=1e-12)

    def test_four_dimensional_gaussian(self):
        # integral of exp(-|x|^2) over R^4 is pi^2 = Gamma(3+1)/6... vol = pi^2/2
        assert integral_discriminant(math.pi**2 / 2, 4, 2) == pytest.approx(
            3 * math.pi**2, rel=1e-12
        )

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            integral_discriminant(-1.0, 2, 2)
