"""Exact Riemann oracle: wave curves, intermediate states, sampling and junction solutions."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from relaxnet.junction import Branch
from relaxnet.models import BloodFlow, ShallowWater
from relaxnet.riemann import (
    LEFT,
    RIGHT,
    VacuumError,
    junction_riemann_solution,
    lax_curve,
    lax_curve_bf,
    lax_curve_derivative,
    lax_curve_sw,
    sample_solution,
    solve_riemann,
    transitional_curves,
)

SW = ShallowWater()
BF = BloodFlow(rho=1.0, beta=2.0)

bases = st.floats(0.1, 5.0)
vels = st.floats(-3.0, 3.0)


class TestCurveValues:
    @pytest.mark.parametrize("side", [LEFT, RIGHT])
    def test_through_base(self, side):
        assert lax_curve_sw(side, 1.3, 0.4, 1.3) == pytest.approx(0.4)
        assert lax_curve_bf(side, 1.3, 0.4, 1.3, 2.0, 1.0, 1.0) == pytest.approx(0.4)

    def test_rarefaction_value(self):
        # -2 (sqrt(4.905) - sqrt(9.81)) evaluates to 1.83474
        assert lax_curve_sw(LEFT, 1.0, 0.0, 0.5) == pytest.approx(1.83474, abs=5e-6)

    def test_vacuum_limit(self):
        v = lax_curve_sw(LEFT, 1.0, 0.2, 1e-14)
        assert v == pytest.approx(0.2 + 2 * np.sqrt(9.81), abs=1e-6)

    def test_blood_flow_rarefaction(self):
        assert lax_curve_bf(LEFT, 1.0, 0.0, 0.5, 2.0, 1.0, 1.0) == pytest.approx(0.63641, abs=1e-5)

    @given(bases, vels, st.floats(1.01, 4.0))
    def test_blood_flow_shock_mirror(self, a, v, r):
        left = lax_curve_bf(LEFT, a, v, r * a, 2.0, 1.0, 1.0) - v
        right = lax_curve_bf(RIGHT, a, v, r * a, 2.0, 1.0, 1.0) - v
        assert left == pytest.approx(-right)

    def test_positive_height_required(self):
        with pytest.raises(ValueError):
            lax_curve_sw(LEFT, 1.0, 0.0, 0.0)

    def test_transitional(self):
        assert transitional_curves(0.0) == (0.0, 0.0)
        cp, cm = transitional_curves(1.0)
        assert (float(cp), float(cm)) == pytest.approx((3.1321, -3.1321), abs=5e-5)
        assert float(SW.froude(1.0, float(cp))) == pytest.approx(1.0)


class TestCurveProperties:
    @given(bases, vels)
    def test_monotone(self, h0, v0):
        h = np.linspace(1e-3, 10 * h0, 1000)
        assert np.all(np.diff(lax_curve_sw(LEFT, h0, v0, h)) < 0)
        assert np.all(np.diff(lax_curve_sw(RIGHT, h0, v0, h)) > 0)

    @given(st.floats(0.2, 3.0), vels)
    def test_monotone_blood_flow(self, a0, v0):
        a = np.linspace(1e-3, 10 * a0, 1000)
        assert np.all(np.diff(lax_curve_bf(LEFT, a0, v0, a, 2.0, 1.0, 1.0)) < 0)
        assert np.all(np.diff(lax_curve_bf(RIGHT, a0, v0, a, 2.0, 1.0, 1.0)) > 0)

    @given(bases, vels, st.sampled_from([LEFT, RIGHT]))
    def test_c1_matching(self, h0, v0, side):
        eps = 1e-6 * h0
        below = (lax_curve_sw(side, h0, v0, h0) - lax_curve_sw(side, h0, v0, h0 - eps)) / eps
        above = (lax_curve_sw(side, h0, v0, h0 + eps) - lax_curve_sw(side, h0, v0, h0)) / eps
        exact = lax_curve_derivative(SW, side, h0, v0, h0)
        assert below == pytest.approx(exact, rel=1e-5)
        assert above == pytest.approx(exact, rel=1e-5)

    @given(st.floats(0.2, 3.0), vels, st.sampled_from([LEFT, RIGHT]))
    def test_c1_matching_blood_flow(self, a0, v0, side):
        eps = 1e-6 * a0
        f = lambda a: lax_curve(BF, side, a0, v0, a, 1.0)  # noqa: E731
        below = (f(a0) - f(a0 - eps)) / eps
        above = (f(a0 + eps) - f(a0)) / eps
        assert below == pytest.approx(above, rel=1e-5)

    @given(bases, vels, st.floats(0.05, 10.0), st.sampled_from([LEFT, RIGHT]))
    def test_derivative_matches_difference(self, h0, v0, r, side):
        h = r * h0
        eps = 1e-6 * h
        num = (lax_curve_sw(side, h0, v0, h + eps) - lax_curve_sw(side, h0, v0, h - eps)) / (2 * eps)
        assert num == pytest.approx(lax_curve_derivative(SW, side, h0, v0, h), rel=1e-5)


class TestSolve:
    def test_equal_states(self):
        sol = solve_riemann(SW, (1.2, 0.3), (1.2, 0.3))
        assert sol.star == pytest.approx((1.2, 0.3), rel=1e-12)

    def test_dam_break(self):
        sol = solve_riemann(SW, (1.0, 0.0), (0.5, 0.0))
        assert 0.5 < sol.u1_star < 1.0
        assert (sol.left_wave, sol.right_wave) == ("rarefaction", "shock")
        vl = lax_curve_sw(LEFT, 1.0, 0.0, sol.u1_star)
        vr = lax_curve_sw(RIGHT, 0.5, 0.0, sol.u1_star)
        assert vl == pytest.approx(vr, abs=1e-12)

    def test_vacuum(self):
        with pytest.raises(VacuumError):
            solve_riemann(SW, (1.0, -10.0), (1.0, 10.0))

    def test_sampling(self):
        sol = solve_riemann(SW, (1.0, 0.0), (0.5, 0.0))
        assert sample_solution(sol, -100.0) == (1.0, 0.0)
        assert sample_solution(sol, 100.0) == (0.5, 0.0)
        assert sample_solution(sol, 0.0) == pytest.approx(sol.star)

    def test_rankine_hugoniot(self):
        sol = solve_riemann(SW, (1.0, 0.0), (0.5, 0.0))
        s = sol.wave_speeds()["right"][0]
        fs = np.array(SW.flux(*sol.star))
        fr = np.array(SW.flux(0.5, 0.0))
        assert fs - fr == pytest.approx(s * (np.array(sol.star) - np.array([0.5, 0.0])), rel=1e-10)

    @given(st.floats(0.2, 3.0), st.floats(-1, 1), st.floats(0.2, 3.0), st.floats(-1, 1))
    def test_solution_is_continuous_inside_fans(self, hl, vl, hr, vr):
        sol = solve_riemann(SW, (hl, hl * vl), (hr, hr * vr))
        xi = np.linspace(-15, 15, 3001)
        u1, _ = sample_solution(sol, xi)
        jumps = np.abs(np.diff(u1))
        allowed = abs(sol.u1_star - hl) + abs(sol.u1_star - hr)
        assert jumps.max() <= allowed + 1e-12
        assert np.all(u1 > 0)

    @given(st.floats(0.5, 2.0), st.floats(0.5, 2.0))
    def test_blood_flow_star(self, al, ar):
        sol = solve_riemann(BF, (al, 0.0), (ar, 0.0), ref=1.0)
        assert min(al, ar) - 1e-12 <= sol.u1_star <= max(al, ar) + 1e-12
        u1, u2 = sample_solution(sol, np.array([-50.0, 0.0, 50.0]))
        assert u1[0] == al and u1[-1] == ar


class TestJunctionOracle:
    def test_equal_widths_reduce_to_single_problem(self):
        bs = [Branch(1, True, 1.0, 0.0, 0.0, 1.0), Branch(2, False, 0.5, 0.0, 0.0, 1.0)]
        trace, sample = junction_riemann_solution(SW, bs)
        sol = solve_riemann(SW, (1.0, 0.0), (0.5, 0.0))
        assert trace.states[1] == pytest.approx(sol.star, abs=1e-10)
        xi = np.linspace(-5, 5, 11)
        assert sample(1, xi[xi < 0])[0] == pytest.approx(sample_solution(sol, xi[xi < 0])[0], abs=1e-10)
        assert sample(2, xi[xi > 0])[0] == pytest.approx(sample_solution(sol, xi[xi > 0])[0], abs=1e-10)

    def test_bifurcation_mass_balance(self):
        bs = [Branch(1, True, 1.0, 0.2, 0.0, 1.0), Branch(2, False, 0.7, 0.0, 0.0, 1.0),
              Branch(3, False, 0.6, 0.0, 0.0, 1.0, 0.5)]
        trace, _ = junction_riemann_solution(SW, bs)
        q = {k: v[1] for k, v in trace.states.items()}
        assert q[1] - q[2] - 0.5 * q[3] == pytest.approx(0.0, abs=1e-12)
