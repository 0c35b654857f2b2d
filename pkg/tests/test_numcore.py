import math

import numpy as np
import pytest

from sdreduce.errors import BadGrid, BlowUp, NoBracket, NonFiniteSample
from sdreduce.numcore import (
    Grid1,
    Grid2,
    ScalarField2,
    central_diff,
    richardson,
    rk4,
    solve_scalar,
    trapezoid_integrate,
)


def test_grid1_validation():
    g = Grid1(0.0, 1.0, 5)
    assert g.h == pytest.approx(0.25)
    assert np.allclose(g.points(), [0, 0.25, 0.5, 0.75, 1.0])
    with pytest.raises(ValueError):
        Grid1(1.0, 0.0, 5)
    with pytest.raises(ValueError):
        Grid1(0.0, 1.0, 1)


def test_grid2():
    g = Grid2(Grid1(0, 1, 3), Grid1(1, 2, 5))
    assert g.describe() == "0:1:3;1:2:5"


class TestCentralDiff:
    def test_quadratic_exact(self):
        est = central_diff(lambda u, v: u * u, (3.0, 0.0), "1", 0.1)
        assert est.value == pytest.approx(6.0, abs=1e-12)
        assert est.error_bound < 1e-11

    def test_constant_all_partials(self):
        for which in ("1", "2", "11", "22", "12"):
            est = central_diff(lambda u, v: 4.25, (0.3, -0.7), which, 0.1)
            assert est.value == pytest.approx(0.0, abs=1e-13)

    def test_mixed_partial_vs_analytic(self):
        f = lambda u, v: math.sin(u) * math.cos(v)
        est = central_diff(f, (0.7, 0.3), "12", 1e-3)
        exact = -math.cos(0.7) * math.sin(0.3)
        assert abs(est.value - exact) <= max(est.error_bound, 1e-12)

    def test_nonfinite_sample_names_point(self):
        with pytest.raises(NonFiniteSample) as exc:
            central_diff(lambda u, v: 1.0 / u, (0.01, 0.0), "1", 0.01)
        assert "0.0" in str(exc.value)

    def test_polynomial_exactness_second(self):
        est = central_diff(lambda u, v: u**2 + 3 * u * v + v**2, (1.0, 2.0), "12", 0.25)
        assert est.value == pytest.approx(3.0, abs=1e-12)


class TestRichardson:
    def test_exp_first_derivative(self):
        est = richardson(lambda u, v: math.exp(u), (1.0, 0.0), "1", 0.1, 3)
        assert abs(est.value - math.e) < 1e-10

    def test_cubic_second_derivative(self):
        est = richardson(lambda u, v: u**3, (2.0, 0.0), "11", 0.1, 2)
        assert abs(est.value - 12.0) < 1e-9

    def test_singular_input_flagged(self):
        # 1/u near u = 0 with a stencil that straddles the pole: either a
        # non-finite sample or a uselessly large error bound
        try:
            est = richardson(lambda u, v: 1.0 / u, (1e-3, 0.0), "1", 1e-2, 2)
        except NonFiniteSample:
            return
        assert est.error_bound > abs(est.value) * 0.1 or est.error_bound > 1.0

    def test_bound_decreases_with_levels(self):
        bounds = [richardson(lambda u, v: math.exp(u), (1.0, 0.0), "1", 0.1, L).error_bound
                  for L in (1, 2, 3)]
        assert bounds[0] >= bounds[1] >= bounds[2]

    def test_levels_validation(self):
        with pytest.raises(ValueError):
            richardson(lambda u, v: u, (0, 0), "1", 0.1, 0)


class TestRK4:
    def test_exponential(self):
        traj = rk4(lambda t, y: y, 0.0, [1.0], 1.0, 100)
        assert traj[0][0] == 0.0 and traj[-1][0] == 1.0
        assert abs(traj[-1][1][0] - math.e) < 1e-8

    def test_zero_rhs_constant(self):
        traj = rk4(lambda t, y: np.zeros_like(y), 0.0, [2.0, -3.0], 5.0, 7)
        for _, state in traj:
            assert np.array_equal(state, [2.0, -3.0])

    def test_equianharmonic_closed_form(self):
        # A(t) = -1/(t-1)^2 solves A'' = -6 A^2; A(0) = -1, A'(0) = -2
        traj = rk4(lambda t, s: np.array([s[1], -6.0 * s[0] ** 2]),
                   0.0, [-1.0, -2.0], 0.5, 2000)
        assert abs(traj[-1][1][0] - (-4.0)) < 1e-6

    def test_fourth_order(self):
        def err(steps):
            traj = rk4(lambda t, y: y, 0.0, [1.0], 1.0, steps)
            return abs(traj[-1][1][0] - math.e)

        ratio = err(100) / err(200)
        assert 14.0 <= ratio <= 18.0

    def test_blowup_carries_last_finite(self):
        with pytest.raises(BlowUp) as exc:
            rk4(lambda t, y: y * y, 0.0, [1.0], 2.0, 50)
        assert exc.value.t_last is not None
        assert np.all(np.isfinite(exc.value.state_last))


class TestSolveScalar:
    def test_linear(self):
        assert solve_scalar(lambda y: y - 2.0, (0.0, 5.0), 1e-12) == pytest.approx(2.0)

    def test_sqrt2(self):
        root = solve_scalar(lambda y: y * y - 2.0, (0.0, 2.0), 1e-12)
        assert abs(root - math.sqrt(2.0)) < 1e-12

    def test_newton_accelerated_stays_bracketed(self):
        root = solve_scalar(lambda y: y**3 - 2.0, (0.0, 4.0), 1e-13,
                            dg=lambda y: 3.0 * y * y)
        assert abs(root - 2.0 ** (1.0 / 3.0)) < 1e-12

    def test_no_bracket(self):
        with pytest.raises(NoBracket):
            solve_scalar(lambda y: y * y + 1.0, (0.0, 2.0), 1e-12)


class TestTrapezoid:
    def test_constant(self):
        xs = np.linspace(0, 1, 17)
        cum = trapezoid_integrate(list(zip(xs, np.ones_like(xs))))
        assert cum[0] == 0.0
        assert cum[-1] == pytest.approx(1.0, abs=1e-15)

    def test_linear_exact(self):
        xs = np.linspace(0, 2, 9)
        cum = trapezoid_integrate(list(zip(xs, xs)))
        assert cum[-1] == pytest.approx(2.0, abs=1e-14)

    def test_quadratic(self):
        xs = np.linspace(0, 1, 1001)
        cum = trapezoid_integrate(list(zip(xs, xs * xs)))
        assert abs(cum[-1] - 1.0 / 3.0) < 1e-6

    def test_bad_grid(self):
        with pytest.raises(BadGrid):
            trapezoid_integrate([(0.0, 1.0), (0.0, 1.0), (1.0, 1.0)])


class TestScalarField2:
    def test_exact_mode_needs_all(self):
        with pytest.raises(ValueError):
            ScalarField2(lambda u, v: u, d1=lambda u, v: 1.0)

    def test_numeric_partials(self):
        f = ScalarField2.numeric(lambda u, v: np.sin(u) * np.cos(v))
        assert abs(f.d1(0.5, 0.2) - math.cos(0.5) * math.cos(0.2)) < 1e-10
        assert abs(f.d22(0.5, 0.2) + math.sin(0.5) * math.cos(0.2)) < 1e-7
        assert abs(f.d12(0.5, 0.2) + math.cos(0.5) * math.sin(0.2)) < 1e-8

    def test_mixed_partial_symmetry_numeric(self):
        f = ScalarField2.numeric(lambda u, v: np.exp(0.3 * u) * np.sin(v), h0=1e-4)
        g = ScalarField2.numeric(lambda u, v: np.exp(0.3 * u) * np.sin(v), h0=7e-5)
        a = f.estimate("12", 0.4, 1.1)
        b = g.estimate("21", 0.4, 1.1)
        assert abs(a.value - b.value) <= a.error_bound + b.error_bound + 1e-12

    def test_exact_mode_symmetric_by_construction(self):
        f = ScalarField2.exact(
            lambda u, v: u * v,
            lambda u, v: v, lambda u, v: u,
            lambda u, v: 0.0, lambda u, v: 1.0, lambda u, v: 0.0)
        assert f.d12(3.0, 4.0) == f.d21(3.0, 4.0) == 1.0
        assert f.deriv_mode == "exact"

    def test_array_evaluation(self):
        f = ScalarField2.numeric(lambda u, v: u * u + v)
        us = np.array([1.0, 2.0, 3.0])
        assert np.allclose(f.d1(us, 0.0), 2.0 * us, atol=1e-9)
