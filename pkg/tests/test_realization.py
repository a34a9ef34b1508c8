import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from innerapprox import (
    CircleGrid,
    MatrixPolynomial,
    contractive_polynomial,
    contractive_realization,
    evaluate_on,
    is_contraction,
    kernel_sample,
    negative_squares,
    operator_norm,
    realize_contractive,
    schur_kernel,
    spectral_factor,
    strictify,
    taylor_coefficients,
)
from innerapprox.errors import NotContractiveInput
from innerapprox.realization import polynomial_sup_norm, shift_realization
from innerapprox.spectral import factorization_residual

from oracles import blaschke, naive_polynomial, qr_unitary


def random_strict_poly(seed, degree, n, target=0.9):
    g = np.random.default_rng(seed)
    coeffs = g.normal(size=(degree + 1, n, n)) + 1j * g.normal(size=(degree + 1, n, n))
    p = MatrixPolynomial(coeffs)
    fine = np.exp(2j * np.pi * np.arange(2048) / 2048)
    sup = np.linalg.norm(evaluate_on(p, fine), 2, axis=(1, 2)).max()
    return MatrixPolynomial(coeffs * target / sup)


def fresh_points(count, seed):
    g = np.random.default_rng(seed)
    return 0.95 * np.sqrt(g.uniform(size=count)) * np.exp(2j * np.pi * g.uniform(size=count))


def max_mismatch(col, coeffs, zs):
    return max(np.abs(col(z) - naive_polynomial(coeffs, z)).max() for z in zs)


def test_kernel_examples():
    zero = lambda z: np.zeros((2, 2))
    assert np.allclose(schur_kernel(zero, 0, 0), np.eye(2))
    for z, w in [(0.3, -0.5j), (0.1 + 0.2j, 0.7)]:
        assert schur_kernel(lambda x: np.array([[x]]), z, w)[0, 0] == pytest.approx(1.0)


def test_kernel_sample_of_contractive_polynomial_is_psd():
    p = random_strict_poly(4, 3, 2)
    sample = kernel_sample(p, fresh_points(6, 1))
    assert np.linalg.eigvalsh(sample.blocks).min() >= -1e-10
    assert negative_squares(sample).negative_eigenvalues == 0


@pytest.mark.parametrize("count", [4, 8, 16])
def test_one_pole_function_has_one_negative_square(count):
    pts = 0.9 * np.exp(2j * np.pi * (np.arange(count) + 0.25) / count)
    f = lambda z: np.array([[1.0 / blaschke(0.5, z)]])
    assert negative_squares(kernel_sample(f, pts)).negative_eigenvalues == 1


def test_constant_two_kernel_is_negative_definite():
    pts = fresh_points(5, 3)
    rep = negative_squares(kernel_sample(lambda z: np.array([[2.0]]), pts))
    assert rep.negative_eigenvalues == 5


def test_shift_realization_is_exact():
    p = random_strict_poly(11, 3, 2)
    col = shift_realization(p)
    assert max_mismatch(col, p.coeffs, fresh_points(20, 2)) <= 1e-11
    a0 = MatrixPolynomial(np.array([[[0.3, 0.1], [0.0, 0.2]]]))
    assert shift_realization(a0).n_state == 0
    iz = shift_realization(MatrixPolynomial(np.array([np.zeros((2, 2)), np.eye(2)])))
    assert np.allclose(iz.a, 0) and np.allclose(iz.b, np.eye(2)) and np.allclose(iz.c, np.eye(2))


def test_realization_examples():
    half = MatrixPolynomial(np.array([[[0.0]], [[0.5]]]))
    assert abs(contractive_realization(half)(0.3)[0, 0] - 0.15) <= 1e-9
    a0 = np.array([[0.2, 0.3], [-0.1, 0.4]])
    col = contractive_realization(MatrixPolynomial(a0[None]))
    for z in fresh_points(5, 0):
        assert np.abs(col(z) - a0).max() <= 1e-10
    iz = contractive_realization(MatrixPolynomial(np.array([np.zeros((2, 2)), np.eye(2)])))
    t = iz.system_matrix
    assert np.abs(t.conj().T @ t - np.eye(t.shape[1])).max() <= 1e-9
    assert np.abs(iz(0.4j) - 0.4j * np.eye(2)).max() <= 1e-9


@given(st.integers(0, 10_000), st.integers(1, 5), st.integers(1, 3))
def test_realization_matches_and_contracts(seed, degree, n):
    p = random_strict_poly(seed, degree, n)
    col = contractive_realization(p)
    assert operator_norm(col.system_matrix) <= 1 + 1e-9
    assert max_mismatch(col, p.coeffs, fresh_points(50, seed + 1)) <= 1e-8


def test_realization_rejects_noncontractive_input():
    with pytest.raises(NotContractiveInput):
        contractive_realization(MatrixPolynomial(np.array([[[0.5]], [[0.9]]])))
    with pytest.raises(NotContractiveInput):
        realize_contractive(MatrixPolynomial(np.array([[[1.5]]])))


def test_strictify_examples():
    assert np.allclose(strictify(MatrixPolynomial(np.zeros((1, 2, 2))), 0.3, 0.5).coeffs, 0)
    iz = MatrixPolynomial(np.array([np.zeros((2, 2)), np.eye(2)]))
    s = strictify(iz, 0.1, 1.0)
    assert np.allclose(s.coeffs[1], 0.9 * np.eye(2))
    assert polynomial_sup_norm(s) == pytest.approx(0.9)
    # z^2 (a polynomial inner function) after strictification
    z2 = MatrixPolynomial(np.array([[[0.0]], [[0.0]], [[1.0]]]))
    assert polynomial_sup_norm(strictify(z2, 0.05, 0.98)) <= 0.95


def test_realize_contractive_boundary_input():
    # sup norm exactly 1: the strictified fallback keeps the colligation contractive
    p = MatrixPolynomial(np.array([[[0.5]], [[0.5]]]))
    col = realize_contractive(p)
    assert is_contraction(col.system_matrix, 1e-9).ok
    assert abs(col(0.3)[0, 0] - 0.65) <= 1e-5


def test_taylor_coefficients_of_blaschke():
    f = lambda z: np.array([[blaschke(0.3, z)]])
    c = taylor_coefficients(f, 6)
    ref = [-0.3] + [(1 - 0.09) * 0.3 ** (k - 1) for k in range(1, 7)]
    assert np.allclose(c[:, 0, 0], ref, atol=1e-12)


def test_contractive_polynomial_stays_in_ball():
    f = lambda z: np.array([[blaschke(0.6, z)]])
    p = contractive_polynomial(f, 8)
    assert polynomial_sup_norm(p) <= 1 + 1e-12


def test_spectral_factor_residual():
    p = random_strict_poly(2, 3, 2)
    e = spectral_factor(p.coeffs)
    assert factorization_residual(p.coeffs, e) <= 1e-9
    zs = CircleGrid(64).points
    pv, ev = evaluate_on(p, zs), evaluate_on(MatrixPolynomial(e), zs)
    lhs = pv @ np.conj(np.swapaxes(pv, 1, 2)) + ev @ np.conj(np.swapaxes(ev, 1, 2))
    assert np.abs(lhs - np.eye(2)).max() <= 1e-8


def test_unitary_constant_realization():
    u = qr_unitary(2, 4)
    col = realize_contractive(MatrixPolynomial(u[None]))
    assert np.abs(col(0.7) - u).max() <= 1e-10
