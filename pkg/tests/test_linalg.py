import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qdnet.errors import DimMismatchError, InvalidArgumentError, InvalidSubsystemError
from qdnet.linalg import (
    ID2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    check_property,
    dagger,
    embed_on_support,
    embed_single,
    frob_dist,
    kron,
    partial_trace,
    trace_full,
)

BELL = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)


def naive_kron(a, b):
    """Independent four-loop Kronecker product used as the oracle."""
    (ra, ca), (rb, cb) = a.shape, b.shape
    out = np.zeros((ra * rb, ca * cb), dtype=complex)
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k, j * cb + l] = a[i, j] * b[k, l]
    return out


def _random_matrix(rng, d):
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


class TestKron:
    def test_identity_case(self):
        assert np.array_equal(kron(ID2, ID2), np.eye(4))

    def test_block_structure(self):
        got = kron(SIGMA_X, ID2)
        expected = np.block([[np.zeros((2, 2)), np.eye(2)], [np.eye(2), np.zeros((2, 2))]])
        assert np.array_equal(got, expected)

    def test_zz_squares_to_identity(self):
        zz = kron(SIGMA_Z, SIGMA_Z)
        assert np.array_equal(zz @ zz, np.eye(4))

    def test_matches_naive_kron(self, rng):
        a, b = _random_matrix(rng, 2), _random_matrix(rng, 4)
        assert frob_dist(kron(a, b), naive_kron(a, b)) == 0.0

    @given(st.integers(0, 2**32 - 1))
    def test_associative(self, seed):
        rng = np.random.default_rng(seed)
        a, b, c = (_random_matrix(rng, 2) for _ in range(3))
        assert np.array_equal(kron(kron(a, b), c), kron(a, kron(b, c)))

    @given(st.integers(0, 2**32 - 1))
    def test_trace_multiplicative(self, seed):
        rng = np.random.default_rng(seed)
        a, b = _random_matrix(rng, 2), _random_matrix(rng, 2)
        assert abs(trace_full(kron(a, b)) - trace_full(a) * trace_full(b)) < 1e-12


class TestDagger:
    def test_identity(self):
        assert np.array_equal(dagger(np.eye(4)), np.eye(4))

    def test_hermitian_fixed_point(self):
        assert np.array_equal(dagger(SIGMA_Y), SIGMA_Y)

    def test_involution(self, rng):
        a = _random_matrix(rng, 8)
        assert np.array_equal(dagger(dagger(a)), a)


class TestTrace:
    def test_identity(self):
        assert trace_full(np.eye(4)) == 4

    def test_pauli_traceless(self):
        assert trace_full(SIGMA_X) == 0

    def test_zz(self):
        # diagonal of sigma_z (x) sigma_z is (1, -1, -1, 1)
        assert trace_full(kron(SIGMA_Z, SIGMA_Z)) == 0


class TestPartialTrace:
    def test_product_state(self):
        psi = np.array([1, 0, 0, 0], dtype=complex)
        rho = np.outer(psi, psi.conj())
        expected = np.array([[1, 0], [0, 0]], dtype=complex)
        assert frob_dist(partial_trace(rho, {1}, 2), expected) == 0.0

    def test_bell_reduction_is_maximally_mixed(self):
        rho = np.outer(BELL, BELL.conj())
        expected = np.array([[0.5, 0], [0, 0.5]], dtype=complex)
        assert frob_dist(partial_trace(rho, {1}, 2), expected) <= 1e-15

    def test_maximally_mixed(self):
        assert frob_dist(partial_trace(np.eye(4) / 4, {2}, 2), np.eye(2) / 2) == 0.0

    def test_trace_preserved(self, rng):
        a = _random_matrix(rng, 8)
        for keep in ({1}, {2, 3}, {1, 3}, set()):
            reduced = partial_trace(a, keep, 3)
            assert abs(trace_full(reduced) - trace_full(a)) < 1e-12

    def test_trace_all_qubits_is_scalar(self, rng):
        a = _random_matrix(rng, 4)
        reduced = partial_trace(a, set(), 2)
        assert reduced.shape == (1, 1)
        assert abs(reduced[0, 0] - trace_full(a)) < 1e-12

    def test_index_out_of_range(self):
        with pytest.raises(InvalidSubsystemError):
            partial_trace(np.eye(4), {3}, 2)

    def test_dim_mismatch(self):
        with pytest.raises(DimMismatchError):
            partial_trace(np.eye(4), {1}, 3)


class TestFrobDist:
    def test_zero_on_equal(self, rng):
        a = _random_matrix(rng, 4)
        assert frob_dist(a, a) == 0.0

    def test_sign_flip(self):
        assert abs(frob_dist(SIGMA_Z, -SIGMA_Z) - 2 * np.sqrt(2)) < 1e-15

    def test_identity_vs_x(self):
        assert abs(frob_dist(ID2, SIGMA_X) - 2.0) < 1e-15

    def test_dim_mismatch(self):
        with pytest.raises(DimMismatchError):
            frob_dist(np.eye(2), np.eye(4))


class TestCheckProperty:
    def test_pauli_is_unitary(self):
        assert check_property(SIGMA_X, "unitary")

    def test_projector(self):
        p = (ID2 + SIGMA_Z) / 2
        assert np.array_equal(p @ p, p)  # idempotent by direct multiplication
        assert check_property(p, "projector")

    def test_not_hermitian(self):
        assert not check_property(SIGMA_X + 1j * SIGMA_Y, "hermitian")

    def test_unknown_kind(self):
        with pytest.raises(InvalidArgumentError):
            check_property(ID2, "normal")

    @given(st.integers(0, 2**32 - 1))
    def test_random_hermitian(self, seed):
        rng = np.random.default_rng(seed)
        a = _random_matrix(rng, 4)
        assert check_property(a + dagger(a), "hermitian", tol=1e-12)


class TestEmbedding:
    def test_embed_single_slots(self):
        assert np.array_equal(embed_single(SIGMA_X, 1, 2), kron(SIGMA_X, ID2))
        assert np.array_equal(embed_single(SIGMA_X, 2, 2), kron(ID2, SIGMA_X))

    def test_embed_on_support_contiguous(self, rng):
        m = _random_matrix(rng, 4)
        assert frob_dist(embed_on_support(m, (1, 2), 3), kron(m, ID2)) == 0.0

    def test_embed_on_support_reversed(self):
        # factor order follows the support tuple, so (2, 1) swaps the slots
        m = kron(SIGMA_X, SIGMA_Z)
        assert frob_dist(embed_on_support(m, (2, 1), 2), kron(SIGMA_Z, SIGMA_X)) == 0.0

    def test_embed_on_support_gap(self):
        m = kron(SIGMA_X, SIGMA_Y)
        expected = kron(SIGMA_X, kron(ID2, SIGMA_Y))
        assert frob_dist(embed_on_support(m, (1, 3), 3), expected) == 0.0

    def test_bad_support(self):
        with pytest.raises(InvalidSubsystemError):
            embed_on_support(np.eye(4), (1, 1), 2)
