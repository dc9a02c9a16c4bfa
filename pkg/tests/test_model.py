import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dephasr import (DensityMatrix, ModelParams, SpinOperator, TimeGrid,
                     SIGMA_X, SIGMA_Y, SIGMA_Z, IDENTITY,
                     expectation, pauli_product)


def complex_strategy(r=3.0):
    floats = st.floats(-r, r, allow_nan=False, allow_infinity=False)
    return st.builds(complex, floats, floats)


def operator_strategy():
    return st.builds(SpinOperator, complex_strategy(), complex_strategy(),
                     complex_strategy(), complex_strategy())


class TestSpinOperator:
    def test_round_trip(self):
        rng = np.random.default_rng(7)
        m = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        op = SpinOperator.from_matrix(m)
        assert np.array_equal(op.matrix(), m)
        again = SpinOperator.from_matrix(op.matrix())
        assert (again.c, again.a, again.b, again.d) == (op.c, op.a, op.b, op.d)

    def test_pauli_coefficients_reassemble(self):
        op = SpinOperator(1.5, 2.0 - 1j, 0.5j, -0.25)
        ax, ay, az, ai = op.pauli_coefficients()
        rebuilt = ax * SIGMA_X + ay * SIGMA_Y + az * SIGMA_Z + ai * IDENTITY
        assert np.allclose(rebuilt.matrix(), op.matrix(), atol=1e-15)

    @given(operator_strategy())
    @settings(max_examples=50, deadline=None)
    def test_dagger_involution(self, op):
        twice = op.dagger().dagger()
        assert (twice.c, twice.a, twice.b, twice.d) == (op.c, op.a, op.b, op.d)

    def test_dagger_swaps_offdiagonal(self):
        op = SpinOperator(1 + 1j, 2.0, 3.0 - 1j, 4j)
        dag = op.dagger()
        assert dag.c == np.conj(op.c)
        assert dag.a == np.conj(op.b)
        assert dag.b == np.conj(op.a)
        assert dag.d == np.conj(op.d)


class TestPauliProduct:
    def test_sx_sy_is_i_sz(self):
        prod = pauli_product(SIGMA_X, SIGMA_Y)
        assert (prod.c, prod.a, prod.b, prod.d) == (1j, 0, 0, -1j)

    def test_sz_squared_is_identity(self):
        prod = pauli_product(SIGMA_Z, SIGMA_Z)
        assert (prod.c, prod.a, prod.b, prod.d) == (1, 0, 0, 1)

    def test_identity_is_neutral(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            vals = rng.standard_normal(8)
            op = SpinOperator(complex(vals[0], vals[1]), complex(vals[2], vals[3]),
                              complex(vals[4], vals[5]), complex(vals[6], vals[7]))
            left = pauli_product(IDENTITY, op)
            assert (left.c, left.a, left.b, left.d) == (op.c, op.a, op.b, op.d)

    def test_matches_matrix_product(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            ma = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            mb = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            prod = pauli_product(SpinOperator.from_matrix(ma),
                                 SpinOperator.from_matrix(mb))
            assert np.allclose(prod.matrix(), ma @ mb, atol=1e-14)


class TestExpectation:
    def test_sigma_z_population_difference(self):
        rho = DensityMatrix(0.75, 0.0, 0.0, 0.25)
        assert expectation(SIGMA_Z, rho) == pytest.approx(0.5)

    def test_sigma_x_reads_coherence(self, ref_state):
        # 2 * Re rho01 for the reference state
        assert expectation(SIGMA_X, ref_state) == pytest.approx(math.sqrt(3) / 2)

    def test_identity_unit_trace(self, ref_state):
        assert expectation(IDENTITY, ref_state) == pytest.approx(1.0)

    @given(operator_strategy(), operator_strategy(), complex_strategy())
    @settings(max_examples=50, deadline=None)
    def test_bilinear_in_operators(self, A, B, lam):
        rho = DensityMatrix(0.75, math.sqrt(3) / 4, math.sqrt(3) / 4, 0.25)
        lhs = expectation(pauli_product(lam * A, B), rho)
        rhs = lam * expectation(pauli_product(A, B), rho)
        assert lhs == pytest.approx(rhs, abs=1e-9)
        lhs = expectation(pauli_product(A, lam * B), rho)
        assert lhs == pytest.approx(rhs, abs=1e-9)
        sum_l = expectation(pauli_product(A + B, B), rho)
        split = (expectation(pauli_product(A, B), rho)
                 + expectation(pauli_product(B, B), rho))
        assert sum_l == pytest.approx(split, abs=1e-9)


class TestDensityMatrix:
    def test_pure_state_construction(self, ref_state):
        built = DensityMatrix.from_pure(math.sqrt(3) / 2, 0.5)
        assert built.rho00 == pytest.approx(0.75)
        assert built.rho01 == pytest.approx(math.sqrt(3) / 4)
        assert built.rho11 == pytest.approx(0.25)
        assert built.matrix() == pytest.approx(ref_state.matrix())

    @pytest.mark.parametrize("elems", [
        (0.8, 0.0, 0.0, 0.3),          # trace > 1
        (0.5, 0.2, 0.3, 0.5),          # not Hermitian
        (1.2, 0.0, 0.0, -0.2),         # negative population
        (0.5, 0.6, 0.6, 0.5),          # not positive
    ])
    def test_invalid_states_rejected(self, elems):
        with pytest.raises(ValueError):
            DensityMatrix(*elems)


class TestModelParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            ModelParams(gamma=-0.1)
        with pytest.raises(ValueError):
            ModelParams(cutoff=0.0)
        with pytest.raises(ValueError):
            ModelParams(temperature=-1.0)
        with pytest.raises(ValueError):
            ModelParams(omega_s=math.inf)
        ModelParams(temperature=0.0)  # zero temperature allowed


class TestTimeGrid:
    def test_times(self):
        grid = TimeGrid(0.2, 1.2, 0.1)
        assert grid.n_steps == 10
        times = grid.times()
        assert times[0] == pytest.approx(0.2)
        assert times[-1] == pytest.approx(1.2)
        assert len(times) == 11

    def test_validation(self):
        with pytest.raises(ValueError):
            TimeGrid(1.0, 0.0, 0.1)
        with pytest.raises(ValueError):
            TimeGrid(0.0, 1.0, -0.1)
        with pytest.raises(ValueError):
            TimeGrid(0.0, 1.05, 0.1)  # span not a multiple of step
