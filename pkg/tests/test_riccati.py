import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracriccati import riccati as rc
from fracriccati import odeverify as ov
from fracriccati.errors import DegenerateRegimeError
from fracriccati.fracops import frac_const
from fracriccati.specfun import gamma


class TestParams:
    def test_a_nonzero(self):
        with pytest.raises(ValueError):
            rc.RiccatiParams(0.0, 1.0, 0.5)

    def test_delta_range(self):
        with pytest.raises(ValueError):
            rc.RiccatiParams(1.0, 1.0, 1.5)
        with pytest.raises(ValueError):
            rc.RiccatiParams(1.0, 1.0, 0.0)


class TestMapParams:
    def test_classical_oscillatory(self):
        m = rc.map_params(rc.RiccatiParams(1.0, -1.0, 1.0))
        assert (m.p, m.r, m.n) == (0.5, 1.0, 0.5)
        assert m.q_mag == pytest.approx(1.0, rel=1e-14)
        assert m.regime == rc.OSCILLATORY

    def test_sign_flip_changes_regime_only(self):
        m1 = rc.map_params(rc.RiccatiParams(1.0, -1.0, 1.0))
        m2 = rc.map_params(rc.RiccatiParams(1.0, 1.0, 1.0))
        assert m2.regime == rc.MODIFIED
        assert m2.q_mag == pytest.approx(m1.q_mag, rel=1e-14)
        assert (m2.p, m2.r, m2.n) == (m1.p, m1.r, m1.n)

    def test_fractional_values(self):
        m = rc.map_params(rc.RiccatiParams(1.0, 1.0, 0.5))
        assert m.p == 0.5
        assert m.r == pytest.approx(1.25, rel=1e-15)
        assert m.n == pytest.approx(0.4, rel=1e-15)
        assert m.q_mag == pytest.approx(0.8 * math.sqrt(1.0 / gamma(1.5)), rel=1e-14)

    def test_degenerate(self):
        m = rc.map_params(rc.RiccatiParams(1.0, 0.0, 0.5))
        assert m.regime == rc.DEGENERATE
        assert m.q_mag == 0.0

    def test_p_minus_nr_exact(self):
        for d in (0.25, 0.5, 0.75, 1.0, 0.123456):
            m = rc.map_params(rc.RiccatiParams(1.0, -1.0, d))
            assert m.p_minus_nr == 0.0
            assert m.n * m.r == pytest.approx(m.p, rel=1e-15)

    @given(
        st.floats(0.05, 1.0),
        st.sampled_from([-2.0, -1.0, 1.0, 2.0]),
        st.sampled_from([-2.0, -0.5, 0.5, 2.0]),
    )
    @settings(max_examples=60, deadline=None)
    def test_map_invariants_property(self, delta, a, b):
        m = rc.map_params(rc.RiccatiParams(a, b, delta))
        assert m.p == 0.5
        assert 1.0 <= m.r < 1.5
        assert 1.0 / 3.0 < m.n <= 0.5
        assert m.regime == (rc.OSCILLATORY if a * b < 0 else rc.MODIFIED)
        assert m.q_mag > 0.0


class TestBranchValues:
    def test_u1_is_cot(self):
        rp = rc.RiccatiParams(1.0, -1.0, 1.0)
        got = rc.eval_u1(rp, math.pi / 4.0)
        assert not got.pole_flag
        assert got.value == pytest.approx(1.0, rel=1e-12)

    def test_u1_is_coth(self):
        rp = rc.RiccatiParams(1.0, 1.0, 1.0)
        got = rc.eval_u1(rp, 1.0)
        assert got.value == pytest.approx(1.3130352854993313, rel=1e-12)

    def test_u1_small_x_asymptote(self):
        # u1 ~ 1/(a x) as x -> 0+, any regime
        for a, b in ((1.0, -1.0), (2.0, 1.0)):
            rp = rc.RiccatiParams(a, b, 1.0)
            for x in (1e-4, 1e-6):
                assert rc.eval_u1(rp, x).value * x == pytest.approx(1.0 / a, rel=1e-6)

    def test_u2_is_minus_tan(self):
        rp = rc.RiccatiParams(1.0, -1.0, 1.0)
        got = rc.eval_u2(rp, math.pi / 4.0)
        assert got.value == pytest.approx(-1.0, rel=1e-12)

    def test_u2_modified_is_constant_equilibrium(self):
        # K_(1/2) = K_(-1/2) makes u2 = -sqrt(b/a) for every x at delta = 1
        rp = rc.RiccatiParams(1.0, 1.0, 1.0)
        for x in (0.3, 1.0, 2.5, 7.0):
            assert rc.eval_u2(rp, x).value == pytest.approx(-1.0, rel=1e-11)

    def test_pole_flag_at_denominator_zero(self):
        rp = rc.RiccatiParams(1.0, -1.0, 1.0)
        # J_(1/2)(x) = 0 at x = pi; Y_(1/2)(x) = 0 at x = pi/2
        assert rc.eval_u1(rp, math.pi).pole_flag
        assert math.isnan(rc.eval_u1(rp, math.pi).value)
        assert rc.eval_u2(rp, math.pi / 2.0).pole_flag

    def test_degenerate_refused(self):
        rp = rc.RiccatiParams(1.0, 0.0, 0.5)
        with pytest.raises(DegenerateRegimeError):
            rc.eval_u1(rp, 1.0)
        with pytest.raises(DegenerateRegimeError):
            rc.eval_u2(rp, 1.0)

    def test_sign_symmetry(self):
        # (a, b) -> (-a, -b) keeps the linear equation and flips 1/a
        for d in (0.4, 1.0):
            rp = rc.RiccatiParams(1.5, -2.0, d)
            rn = rc.RiccatiParams(-1.5, 2.0, d)
            for x in (0.3, 0.9, 1.4):
                assert rc.eval_u1(rn, x).value == pytest.approx(
                    -rc.eval_u1(rp, x).value, rel=1e-12
                )

    def test_delta_one_reductions_through_general_path(self):
        for c in (0.5, 1.0, 2.0):
            rp = rc.RiccatiParams(c, -c, 1.0)
            for x in np.linspace(0.1, math.pi / (2.0 * c), 25)[:-1]:
                x = float(x)
                want = math.cos(c * x) / math.sin(c * x)
                got = rc.eval_u1(rp, x).value
                assert abs(got - want) <= 1e-8 * (1.0 + abs(want))


class TestYBranch:
    def test_half_order_reduction_branch1(self):
        rp = rc.RiccatiParams(1.0, -1.0, 1.0)
        x = 1.3
        y, yp = rc.eval_y_branch(rp, 1, x)
        amp = math.sqrt(2.0 / math.pi)
        assert y == pytest.approx(amp * math.sin(x), rel=1e-12)
        assert yp == pytest.approx(amp * math.cos(x), rel=1e-12)

    def test_half_order_reduction_branch2(self):
        rp = rc.RiccatiParams(1.0, -1.0, 1.0)
        x = 1.3
        y, yp = rc.eval_y_branch(rp, 2, x)
        amp = math.sqrt(2.0 / math.pi)
        assert y == pytest.approx(-amp * math.cos(x), rel=1e-12)
        assert yp == pytest.approx(amp * math.sin(x), rel=1e-12)

    def test_derivative_forms_agree_generic_delta(self):
        for a, b, d in ((1.0, -1.0, 0.6), (2.0, 1.0, 0.35), (1.0, 1.0, 0.6)):
            rp = rc.RiccatiParams(a, b, d)
            for branch in (1, 2):
                for x in (0.4, 1.1, 2.7):
                    y, d_lo, d_hi = rc._yprime_forms(rp, branch, x)
                    scale = abs(d_lo) + abs(d_hi) + abs(y) / x
                    assert abs(d_lo - d_hi) <= 1e-9 * scale

    def test_u_equals_yprime_over_ay(self):
        rp = rc.RiccatiParams(2.0, -1.0, 0.45)
        for x in (0.5, 1.2):
            y, yp = rc.eval_y_branch(rp, 1, x)
            assert rc.eval_u1(rp, x).value == pytest.approx(yp / (rp.a * y), rel=1e-10)

    def test_branch_validation(self):
        rp = rc.RiccatiParams(1.0, -1.0, 0.5)
        with pytest.raises(ValueError):
            rc.eval_y_branch(rp, 3, 1.0)


class TestResidual:
    def test_equilibrium_fixed_point(self):
        rp = rc.RiccatiParams(1.0, 1.0, 1.0)
        assert rc.residual(rp, 2.0, 1.0, 0.0) == 0.0

    def test_trivial_degenerate_solution(self):
        rp = rc.RiccatiParams(1.0, 0.0, 0.5)
        assert rc.residual(rp, 1.0, 0.0, 0.0) == 0.0

    def test_closed_form_satisfies_equation(self):
        rp = rc.RiccatiParams(2.0, -1.0, 0.5)

        def u_of(t):
            return rc.eval_u1(rp, t).value

        for x in np.linspace(0.3, 2.2, 20):
            x = float(x)
            up = ov.fd_derivative(u_of, x)
            r = rc.residual(rp, x, u_of(x), up)
            assert abs(r) <= 1e-6 * (1.0 + abs(frac_const(rp.b, rp.delta, x)))

    @given(
        st.sampled_from([1.0, 2.0, -1.0]),
        st.sampled_from([1.0, -1.0, 2.0, -2.0]),
        st.sampled_from([0.25, 0.5, 0.75, 1.0]),
        st.floats(0.35, 2.0),
    )
    @settings(max_examples=60, deadline=None)
    def test_residual_property(self, a, b, delta, x):
        rp = rc.RiccatiParams(a, b, delta)
        poles = rc.find_poles(rp, 0.2, 2.3, 1)
        if any(abs(x - p) < 0.08 for p in poles):
            return
        s = rc.eval_u1(rp, x)
        up = ov.fd_derivative(lambda t: rc.eval_u1(rp, t).value, x)
        r = rc.residual(rp, x, s.value, up)
        assert abs(r) <= 1e-6 * (1.0 + abs(frac_const(b, delta, x)))


class TestFindPoles:
    def test_half_order_zeros(self):
        rp = rc.RiccatiParams(1.0, -1.0, 1.0)
        poles = rc.find_poles(rp, 0.5, 7.0, 1)
        assert len(poles) == 2
        assert poles[0] == pytest.approx(math.pi, rel=1e-11)
        assert poles[1] == pytest.approx(2.0 * math.pi, rel=1e-11)

    def test_modified_regime_has_none(self):
        rp = rc.RiccatiParams(1.0, 1.0, 1.0)
        assert rc.find_poles(rp, 0.5, 7.0, 1) == []
        assert rc.find_poles(rp, 0.5, 7.0, 2) == []

    def test_branch2_zeros(self):
        rp = rc.RiccatiParams(1.0, -1.0, 1.0)
        poles = rc.find_poles(rp, 0.5, 7.0, 2)
        assert [pytest.approx(p, rel=1e-11) for p in (math.pi / 2, 3 * math.pi / 2)] == poles

    def test_generic_delta_against_sign_scan(self):
        # brute-force oracle: dense sign scan of the denominator
        rp = rc.RiccatiParams(1.0, -1.0, 0.7)
        bm = rc.map_params(rp)

        def den(x):
            from fracriccati.specfun import bessel
            return bessel("J", bm.n, bm.q_mag * x**bm.r)

        xs = np.linspace(0.3, 8.0, 40001)
        vals = np.array([den(float(t)) for t in xs])
        brackets = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
        scan = [0.5 * (xs[i] + xs[i + 1]) for i in brackets]
        got = rc.find_poles(rp, 0.3, 8.0, 1)
        assert len(got) == len(scan)
        for g, s in zip(got, scan):
            assert g == pytest.approx(s, abs=2.0 * (xs[1] - xs[0]))

    def test_interval_validation(self):
        rp = rc.RiccatiParams(1.0, -1.0, 0.5)
        with pytest.raises(ValueError):
            rc.find_poles(rp, 2.0, 1.0)
