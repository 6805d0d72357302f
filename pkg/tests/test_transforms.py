import numpy as np
import pytest

from conftest import brute_force_operator, closed_form_forward
from powerset_cnn.core import DomainMismatchError, SetFunction, ShiftModel, cardinalities
from powerset_cnn.transforms import (TransformKind, apply_transform, base_matrix, dense_matrix,
                                     fourier_forward, fourier_inverse, frequency_response,
                                     kron_apply, kron_apply_inplace, response_basis)


def sf(values):
    return SetFunction.from_values(values)


class TestKronApplyInplace:
    def test_identity_base(self, rng):
        x = rng.standard_normal(32)
        y = x.copy()
        kron_apply_inplace(y, np.eye(2))
        np.testing.assert_array_equal(x, y)

    def test_small_example(self):
        buf = np.array([1.0, 2.0, 3.0, 4.0])
        kron_apply_inplace(buf, [[1, 0], [1, -1]])
        np.testing.assert_array_equal(buf, [1, -1, -2, 0])

    def test_against_dense_n10(self, rng):
        base = rng.standard_normal((2, 2))
        x = rng.standard_normal(1024)
        dense = np.ones((1, 1))
        for _ in range(10):
            dense = np.kron(base, dense)
        expected = dense @ x
        kron_apply_inplace(x, base)
        np.testing.assert_allclose(x, expected, rtol=1e-10, atol=1e-10 * np.abs(expected).max())

    def test_rejects_non_power_of_two(self):
        with pytest.raises(DomainMismatchError):
            kron_apply_inplace(np.zeros(6), np.eye(2))

    def test_rejects_wrong_n(self):
        with pytest.raises(DomainMismatchError):
            kron_apply_inplace(np.zeros(8), np.eye(2), n=4)

    def test_float32_buffer(self, rng):
        x = rng.standard_normal(64)
        y = x.astype(np.float32)
        kron_apply_inplace(y, [[1, 1], [1, -1]])
        kron_apply_inplace(x, [[1, 1], [1, -1]])
        np.testing.assert_allclose(y, x, rtol=1e-5, atol=1e-5)


class TestFourier:
    def test_absorb_example(self):
        np.testing.assert_array_equal(fourier_forward(sf([1, 2, 3, 4])).values, [1, -1, -2, 0])
        np.testing.assert_array_equal(fourier_inverse(sf([1, -1, -2, 0])).values, [1, 2, 3, 4])

    def test_zero_maps_to_zero(self, model):
        assert not np.any(fourier_forward(sf(np.zeros(64)), model).values)

    def test_two_point_wht(self):
        np.testing.assert_array_equal(fourier_forward(sf([3.0, 5.0]), "symdiff").values, [8, -2])

    @pytest.mark.parametrize("n", range(1, 9))
    def test_forward_matches_closed_form(self, model, n, rng):
        x = rng.standard_normal(1 << n)
        expected = closed_form_forward(model, n) @ x
        got = fourier_forward(sf(x), model).values
        np.testing.assert_allclose(got, expected, rtol=1e-10, atol=1e-10 * np.abs(expected).max())

    @pytest.mark.parametrize("n", range(1, 4))
    def test_inverse_base_verified(self, model, n):
        F = dense_matrix(TransformKind.SIGNAL_FORWARD, model, n)
        Finv = dense_matrix(TransformKind.SIGNAL_INVERSE, model, n)
        np.testing.assert_allclose(F @ Finv, np.eye(1 << n), atol=1e-14)

    def test_round_trip(self, model, rng):
        x = rng.standard_normal(64)
        back = fourier_inverse(fourier_forward(sf(x), model), model).values
        assert np.abs(back - x).max() < 1e-12

    def test_symdiff_forward_integer_exact(self):
        x = np.arange(16, dtype=float)
        spec = fourier_forward(sf(x), "symdiff").values
        np.testing.assert_array_equal(spec, np.round(spec))

    @pytest.mark.parametrize("n", range(1, 11))
    def test_absorb_involution(self, n, rng):
        x = sf(rng.standard_normal(1 << n))
        twice = fourier_forward(fourier_forward(x))
        assert np.abs(twice.values - x.values).max() < 1e-12

    def test_linearity(self, model, rng):
        s, t = sf(rng.standard_normal(128)), sf(rng.standard_normal(128))
        for T in (fourier_forward, fourier_inverse, frequency_response):
            lhs = T(2.5 * s + (-1.5) * t, model).values
            rhs = 2.5 * T(s, model).values - 1.5 * T(t, model).values
            np.testing.assert_allclose(lhs, rhs, atol=1e-12 * max(1, np.abs(rhs).max()))


class TestFrequencyResponse:
    def test_delta_is_all_ones(self, model):
        delta = np.zeros(16)
        delta[0] = 1.0
        np.testing.assert_array_equal(frequency_response(sf(delta), model).values, np.ones(16))

    def test_absorb_example(self):
        np.testing.assert_array_equal(frequency_response(sf([1, 1, 0, 0])).values, [2, 1, 2, 1])

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_diagonalizes_brute_force_operator(self, model, n, rng):
        F = dense_matrix(TransformKind.SIGNAL_FORWARD, model, n)
        Finv = dense_matrix(TransformKind.SIGNAL_INVERSE, model, n)
        for _ in range(10):
            h = rng.standard_normal(1 << n)
            D = F @ brute_force_operator(h, n, model) @ Finv
            off = D - np.diag(np.diag(D))
            assert np.abs(off).max() < 1e-10
            np.testing.assert_allclose(np.diag(D), frequency_response(sf(h), model).values,
                                       atol=1e-10)

    def test_response_basis_one_hop(self):
        n = 3
        support = (0, 1, 2, 4)
        M = response_basis(n, ShiftModel.ABSORB, support)
        c = np.array([0.5, 1.0, -2.0, 3.0])
        h = np.zeros(8)
        h[list(support)] = c
        np.testing.assert_allclose(M @ c, frequency_response(sf(h)).values)


class TestBatched:
    @pytest.mark.parametrize("n", [0, 1, 3, 6, 7, 8])
    def test_kron_apply_matches_inplace(self, n, rng):
        base = rng.standard_normal((2, 2))
        x = rng.standard_normal((1 << n, 3, 2))
        got = kron_apply(x, base, axis=0, block=4)
        for i in range(3):
            for j in range(2):
                col = x[:, i, j].copy()
                kron_apply_inplace(col, base)
                np.testing.assert_allclose(got[:, i, j], col, rtol=1e-10, atol=1e-10)

    def test_axis_argument(self, rng):
        x = rng.standard_normal((4, 32))
        got = kron_apply(x, base_matrix("forward", "absorb"), axis=1)
        for row, out in zip(x, got):
            np.testing.assert_allclose(out, fourier_forward(sf(row)).values, atol=1e-12)

    def test_transpose(self, model, rng):
        n = 4
        x = rng.standard_normal((1 << n, 5))
        F = dense_matrix(TransformKind.SIGNAL_INVERSE, model, n)
        got = apply_transform(x, TransformKind.SIGNAL_INVERSE, model, transpose=True)
        np.testing.assert_allclose(got, F.T @ x, atol=1e-12)

    def test_base_table(self):
        np.testing.assert_array_equal(base_matrix("inverse", "symdiff"), [[0.5, 0.5], [0.5, -0.5]])
        np.testing.assert_array_equal(base_matrix("forward", "union"), [[1, -1], [0, 1]])
