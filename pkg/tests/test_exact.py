import cmath
import math

import numpy as np
import pytest

from dephasr import (DensityMatrix, ExactContext, SpinOperator,
                     SIGMA_X, SIGMA_Y, SIGMA_Z, SIGMA_PLUS, IDENTITY,
                     cf_case1, cf_case2, cf_case3, cf_exact,
                     expectation, expectation_single, pauli_product,
                     reduced_density)
from dephasr.exact import _case3_core

GAMMA, CUTOFF = 0.1, 5.0
R01 = math.sqrt(3) / 4


@pytest.fixture(scope="module")
def ctx0(cache_zero_t, ref_state):
    return ExactContext(cache=cache_zero_t, rho0=ref_state)


@pytest.fixture(scope="module")
def ctx_ref(cache_ref, ref_state):
    return ExactContext(cache=cache_ref, rho0=ref_state)


def zero_t_case1(A, t1, rho):
    """Closed form (1 + L^2 t1^2)^(-2 gamma) * (-a rho10 e^{i t1} + b rho01 e^{-i t1})."""
    mag = (1 + CUTOFF**2 * t1**2) ** (-2 * GAMMA)
    return mag * (-A.a * rho.rho10 * cmath.exp(1j * t1)
                  + A.b * rho.rho01 * cmath.exp(-1j * t1))


def zero_t_case3(A, B, t1, t2, rho):
    """Zero-temperature closed form, consistent with the exact two-time result.

    Phase derived by integrating the cross kernel analytically:
    4*gamma*[arctan(L t1) - arctan(L t2) - arctan(L (t1 - t2))].
    """
    lam = CUTOFF
    mag = (1 + lam**2 * (t1 - t2) ** 2) ** (-2 * GAMMA)
    phase = 4 * GAMMA * (math.atan(lam * t1) - math.atan(lam * t2)
                         - math.atan(lam * (t1 - t2)))
    osc = cmath.exp(1j * (t1 - t2))
    bracket = A.a * B.b * rho.rho00 * osc + A.b * B.a * rho.rho11 / osc
    return mag * cmath.exp(1j * phase) * bracket


class TestReducedDensity:
    def test_initial_state_unchanged(self, ctx0, ref_state):
        rho = reduced_density(0.0, ctx0)
        assert rho.matrix() == pytest.approx(ref_state.matrix(), abs=1e-14)

    def test_populations_frozen(self, ctx0, ref_state):
        for t in (0.5, 3.0, 9.5):
            rho = reduced_density(t, ctx0)
            assert rho.rho00 == ref_state.rho00
            assert rho.rho11 == ref_state.rho11

    def test_coherence_decay_zero_t(self, ctx0):
        rho = reduced_density(0.2, ctx0)
        assert abs(rho.rho01) == pytest.approx(R01 * 2 ** -0.2, rel=1e-12)

    def test_valid_state_along_grid(self, ctx_ref):
        last = 1.0
        for t in np.linspace(0.0, 10.0, 101):
            rho = reduced_density(float(t), ctx_ref)  # validates on build
            mag = abs(rho.rho01)
            assert mag <= last + 1e-12
            last = mag


class TestExpectationSingle:
    def test_sigma_z_constant(self, ctx_ref):
        for t in (0.0, 0.7, 5.0, 10.0):
            assert expectation_single(SIGMA_Z, t, ctx_ref) == pytest.approx(0.5)

    def test_sigma_x_zero_t(self, ctx0):
        expected = 2 * R01 * math.cos(0.2) * 2 ** -0.2
        assert expectation_single(SIGMA_X, 0.2, ctx0) == pytest.approx(
            expected, rel=1e-12)

    def test_identity(self, ctx_ref):
        for t in (0.0, 4.0):
            assert expectation_single(IDENTITY, t, ctx_ref) == pytest.approx(1.0)

    def test_matches_reduced_density(self, ctx_ref):
        rng = np.random.default_rng(5)
        for t in (0.3, 2.0, 8.0):
            vals = rng.standard_normal(8)
            A = SpinOperator(complex(vals[0], vals[1]), complex(vals[2], vals[3]),
                             complex(vals[4], vals[5]), complex(vals[6], vals[7]))
            direct = expectation(A, reduced_density(t, ctx_ref))
            assert expectation_single(A, t, ctx_ref) == pytest.approx(
                direct, abs=1e-12)


class TestCase1:
    def test_sigma_x_value_zero_t(self, ctx0):
        expected = -2j * R01 * math.sin(0.2) * 2 ** -0.2
        assert cf_case1(SIGMA_X, 0.2, 0.1, ctx0) == pytest.approx(
            expected, abs=1e-13)

    def test_independent_of_t2(self, ctx_ref):
        v0 = cf_case1(SIGMA_X, 1.0, 0.0, ctx_ref)
        v1 = cf_case1(SIGMA_X, 1.0, 1.0, ctx_ref)
        assert v0 == v1

    def test_null_operator(self, ctx_ref):
        assert cf_case1(SpinOperator(), 1.0, 0.5, ctx_ref) == 0.0

    def test_zero_t_closed_form(self, ctx0, ref_state):
        rng = np.random.default_rng(8)
        for _ in range(20):
            t1 = rng.uniform(0.0, 10.0)
            A = SpinOperator(0.0, complex(*rng.standard_normal(2)),
                             complex(*rng.standard_normal(2)), 0.0)
            assert cf_case1(A, t1, 0.0, ctx0) == pytest.approx(
                zero_t_case1(A, t1, ref_state), abs=1e-8)

    def test_rejects_diagonal_part(self, ctx_ref):
        with pytest.raises(ValueError):
            cf_case1(SIGMA_Z, 1.0, 0.5, ctx_ref)


class TestCase2:
    def test_real_coherence_gives_zero_for_sx(self, ctx_ref):
        # rho10 - rho01 = 0 for the reference state
        assert cf_case2(SIGMA_X, 1.0, 0.0, ctx_ref) == pytest.approx(0.0, abs=1e-15)

    def test_independent_of_t1(self, ctx_ref):
        v0 = cf_case2(SIGMA_X, 0.5, 0.5, ctx_ref)
        v1 = cf_case2(SIGMA_X, 5.0, 0.5, ctx_ref)
        assert v0 == v1

    def test_sigma_y_at_origin(self, ctx_ref):
        value = cf_case2(SIGMA_Y, 1.0, 0.0, ctx_ref)
        assert value == pytest.approx(-1j * math.sqrt(3) / 2, abs=1e-14)


class TestCase3:
    def test_equal_time_closure(self, ctx_ref):
        for t2 in (0.2, 1.0, 5.0):
            val = cf_case3(SIGMA_X, SIGMA_Y, t2, t2, ctx_ref)
            ref = expectation(pauli_product(SIGMA_X, SIGMA_Y),
                              reduced_density(t2, ctx_ref))
            assert val == pytest.approx(ref, abs=1e-8)
            assert val == pytest.approx(0.5j, abs=1e-8)

    def test_zero_t_reference_point(self, ctx0, ref_state):
        # frozen from the closed form below (rederived analytically and
        # cross-checked against brute-force double quadrature)
        frozen = -0.09132203162323868 + 0.45117521506790575j
        val = cf_case3(SIGMA_X, SIGMA_Y, 0.4, 0.2, ctx0)
        assert val == pytest.approx(frozen, abs=1e-10)
        assert zero_t_case3(SIGMA_X, SIGMA_Y, 0.4, 0.2, ref_state) == \
            pytest.approx(frozen, abs=1e-14)

    def test_zero_t_closed_form_scan(self, ctx0, ref_state):
        rng = np.random.default_rng(21)
        for _ in range(30):
            t1 = rng.uniform(0.01, 10.0)
            t2 = t1 * rng.uniform(0.0, 1.0)
            val = cf_case3(SIGMA_X, SIGMA_Y, t1, t2, ctx0)
            ref = zero_t_case3(SIGMA_X, SIGMA_Y, t1, t2, ref_state)
            assert val == pytest.approx(ref, abs=1e-8)

    def test_raising_raising_vanishes(self, ctx_ref):
        for t1, t2 in ((0.5, 0.2), (4.0, 4.0)):
            assert cf_case3(SIGMA_PLUS, SIGMA_PLUS, t1, t2, ctx_ref) == 0.0

    def test_hermiticity_via_time_swap(self, ctx_ref):
        # conj <sx(t1) sy(t2)> equals <sy(t2) sx(t1)> evaluated with the
        # time-swapped form with operators exchanged
        for t1, t2 in ((0.7, 0.2), (5.0, 1.0)):
            left = np.conj(cf_case3(SIGMA_X, SIGMA_Y, t1, t2, ctx_ref))
            right = _case3_core(SIGMA_Y, SIGMA_X, t2, t1, ctx_ref)
            assert left == pytest.approx(right, abs=1e-12)

    def test_requires_offdiagonal_and_order(self, ctx_ref):
        with pytest.raises(ValueError):
            cf_case3(SIGMA_Z, SIGMA_Y, 1.0, 0.5, ctx_ref)
        with pytest.raises(ValueError):
            cf_case3(SIGMA_X, SIGMA_Y, 0.5, 1.0, ctx_ref)


class TestDispatcher:
    def test_sz_sz_is_one(self, ctx_ref):
        for t1, t2 in ((0.0, 0.0), (3.0, 1.0), (10.0, 10.0)):
            assert cf_exact(SIGMA_Z, SIGMA_Z, t1, t2, ctx_ref) == 1.0

    def test_pure_case_routing(self, ctx_ref):
        v = cf_exact(SIGMA_X, SIGMA_Z, 1.3, 0.4, ctx_ref)
        assert v == cf_case1(SIGMA_X, 1.3, 0.4, ctx_ref)
        v = cf_exact(SIGMA_Z, SIGMA_Y, 1.3, 0.4, ctx_ref)
        assert v == cf_case2(SIGMA_Y, 1.3, 0.4, ctx_ref)

    def test_linearity(self, ctx_ref):
        combo = SIGMA_X + SIGMA_Z
        total = cf_exact(combo, SIGMA_Y, 1.1, 0.3, ctx_ref)
        parts = (cf_case3(SIGMA_X, SIGMA_Y, 1.1, 0.3, ctx_ref)
                 + cf_case2(SIGMA_Y, 1.1, 0.3, ctx_ref))
        assert total == pytest.approx(parts, abs=1e-14)

    def test_equal_time_against_state(self, ctx_ref):
        rng = np.random.default_rng(17)
        for t2 in (0.2, 1.0, 5.0):
            rho_t = reduced_density(t2, ctx_ref)
            for _ in range(20):
                va, vb = rng.standard_normal(8), rng.standard_normal(8)
                A = SpinOperator(complex(va[0], va[1]), complex(va[2], va[3]),
                                 complex(va[4], va[5]), complex(va[6], va[7]))
                B = SpinOperator(complex(vb[0], vb[1]), complex(vb[2], vb[3]),
                                 complex(vb[4], vb[5]), complex(vb[6], vb[7]))
                val = cf_exact(A, B, t2, t2, ctx_ref)
                ref = expectation(pauli_product(A, B), rho_t)
                assert val == pytest.approx(ref, abs=1e-8)

    def test_identity_components(self, ctx_ref):
        # <A(t1) I> reduces to the single-time value at t1
        v = cf_exact(SIGMA_X, IDENTITY, 2.0, 0.5, ctx_ref)
        assert v == pytest.approx(expectation_single(SIGMA_X, 2.0, ctx_ref),
                                  abs=1e-14)
        v = cf_exact(IDENTITY, SIGMA_Y, 2.0, 0.5, ctx_ref)
        assert v == pytest.approx(expectation_single(SIGMA_Y, 0.5, ctx_ref),
                                  abs=1e-14)

    def test_rejects_reversed_times(self, ctx_ref):
        with pytest.raises(ValueError):
            cf_exact(SIGMA_X, SIGMA_Y, 0.2, 0.4, ctx_ref)


class TestHighTemperature:
    def test_decay_much_faster_when_hot(self, ref_state):
        from dephasr import ModelParams, build_cache
        hot = build_cache(ModelParams(1.0, GAMMA, CUTOFF, 10.0), 5.0, 1e-3)
        cold_ctx = ExactContext(cache=build_cache(
            ModelParams(1.0, GAMMA, CUTOFF, 0.1), 5.0, 1e-3), rho0=ref_state)
        hot_ctx = ExactContext(cache=hot, rho0=ref_state)
        cold = abs(expectation_single(SIGMA_X, 5.0, cold_ctx))
        heated = abs(expectation_single(SIGMA_X, 5.0, hot_ctx))
        assert heated < 0.01 * cold
