import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from innerapprox import (
    BidiscSplit,
    CircleGrid,
    Colligation,
    MatrixPolynomial,
    cascade,
    defect_operators,
    evaluate_on,
    is_contraction,
    is_unitary,
    mobius_compose,
    operator_norm,
    psd_sqrt,
    random_colligation,
    random_contraction,
    random_unitary,
    sup_norm_estimate,
    transfer_on_points,
)
from innerapprox.core import eval_polynomial, eval_transfer_bidisc, eval_transfer_disc
from innerapprox.errors import DimensionMismatch

from oracles import naive_polynomial, power_iteration_norm, qr_unitary, series_transfer, series_transfer_bidisc

seeds = st.integers(0, 2**31 - 1)


def test_transfer_of_shift_is_z():
    col = Colligation([[0]], [[1]], [[1]], [[0]])
    assert eval_transfer_disc(col, 0.5) == pytest.approx(0.5)


def test_feedthrough_only_when_c_vanishes():
    col = random_colligation(2, 3, 1)
    col = Colligation(col.a, col.b, np.zeros_like(col.c), col.d_block)
    np.testing.assert_allclose(eval_transfer_disc(col, 0.7 - 0.1j), col.a)


def test_transfer_matches_power_series():
    col = random_colligation(2, 3, 42)
    z = 0.3 + 0.2j
    ref = series_transfer(col.a, col.b, col.c, col.d_block, z)
    assert np.abs(eval_transfer_disc(col, z) - ref).max() <= 1e-10


def test_bidisc_transfer_matches_series():
    col = random_colligation(2, 3, 7)
    split = BidiscSplit(2, 1)
    z1, z2 = 0.4, -0.3j
    ref = series_transfer_bidisc(col.a, col.b, col.c, col.d_block, [z1, z1, z2])
    assert np.abs(eval_transfer_bidisc(col, split, z1, z2) - ref).max() <= 1e-10
    np.testing.assert_allclose(eval_transfer_bidisc(col, split, 0, 0), col.a)


def test_split_must_match_state_dimension():
    with pytest.raises(DimensionMismatch):
        eval_transfer_bidisc(random_colligation(2, 3, 0), BidiscSplit(1, 1), 0.1, 0.1)


@given(seeds, st.floats(-0.95, 0.95), st.floats(-0.95, 0.95))
def test_bidisc_diagonal_reduces_to_disc(seed, x, y):
    z = complex(x, y) * 0.7
    col = random_colligation(2, 3, seed)
    diff = eval_transfer_bidisc(col, BidiscSplit(1, 2), z, z) - eval_transfer_disc(col, z)
    assert np.abs(diff).max() <= 1e-12


def test_polynomial_evaluation():
    a0 = np.array([[0.1, 0.2], [0.3, 0.4]])
    assert np.allclose(eval_polynomial(MatrixPolynomial(a0[None]), 0.9), a0)
    iz = MatrixPolynomial(np.array([np.zeros((2, 2)), np.eye(2)]))
    assert np.allclose(eval_polynomial(iz, 0.25), 0.25 * np.eye(2))
    g = np.random.default_rng(3)
    coeffs = g.normal(size=(5, 2, 2)) + 1j * g.normal(size=(5, 2, 2))
    z = 0.6j
    assert np.abs(eval_polynomial(MatrixPolynomial(coeffs), z) - naive_polynomial(coeffs, z)).max() <= 1e-13


def test_defect_operators_examples():
    u = qr_unitary(3, 0)
    dt, dts = defect_operators(u)
    assert np.abs(dt).max() < 1e-7 and np.abs(dts).max() < 1e-7
    dt, dts = defect_operators(np.zeros((2, 2)))
    assert np.allclose(dt, np.eye(2)) and np.allclose(dts, np.eye(2))
    dt, dts = defect_operators([[0.6]])
    assert np.allclose(dt, [[0.8]]) and np.allclose(dts, [[0.8]])


@given(seeds, st.integers(1, 5), st.floats(0.0, 1.0))
def test_defect_identities(seed, n, norm):
    t = random_contraction(n, np.random.default_rng(seed), norm)
    dt, dts = defect_operators(t)
    eye = np.eye(n)
    assert np.abs(dt @ dt - (eye - t.conj().T @ t)).max() <= 1e-11
    assert np.abs(t @ dt - dts @ t).max() <= 1e-10
    assert np.allclose(dt, dt.conj().T)
    assert np.linalg.eigvalsh(dt).min() >= -1e-12


def test_psd_sqrt_clips_small_negatives():
    h = np.diag([4.0, -1e-14])
    r = psd_sqrt(h)
    assert np.allclose(r, np.diag([2.0, 0.0]))


def test_operator_norm():
    assert operator_norm(np.eye(3)) == pytest.approx(1.0)
    assert operator_norm(np.diag([0.2, -0.9])) == pytest.approx(0.9)
    g = np.random.default_rng(5)
    m = g.normal(size=(4, 4)) + 1j * g.normal(size=(4, 4))
    assert abs(operator_norm(m) - power_iteration_norm(m)) <= 1e-10


def test_sup_norm_estimate():
    a0 = np.array([[0.3, 0.4], [0.0, 0.1]])
    est = sup_norm_estimate(lambda z: a0, CircleGrid(16))
    assert est.value == pytest.approx(operator_norm(a0))
    est = sup_norm_estimate(lambda z: z * np.eye(2), CircleGrid(256))
    assert est.value == pytest.approx(1.0)
    g = np.random.default_rng(8)
    coeffs = 0.3 * (g.normal(size=(4, 2, 2)) + 1j * g.normal(size=(4, 2, 2)))
    p = MatrixPolynomial(coeffs)
    fine = np.exp(2j * np.pi * np.arange(65536) / 65536)
    ref = np.linalg.norm(evaluate_on(p, fine), 2, axis=(1, 2)).max()
    assert abs(sup_norm_estimate(p, CircleGrid(4096)).value - ref) <= 1e-3


def test_contraction_and_unitary_checks():
    assert is_contraction(0.5 * np.eye(2), 1e-12).ok
    chk = is_contraction(2 * np.eye(2), 1e-12)
    assert not chk.ok and chk.defect == pytest.approx(1.0)
    u = random_unitary(4, np.random.default_rng(1))
    assert is_contraction(u, 1e-12).ok and abs(is_contraction(u, 1e-12).defect) <= 1e-13
    assert is_unitary(np.eye(3), 1e-12).ok
    assert not is_unitary(0.99 * np.eye(3), 1e-12).ok
    v = np.random.default_rng(3).normal(size=(4, 1))
    v = v / np.linalg.norm(v)
    assert is_unitary(np.eye(4) - 2 * v @ v.T, 1e-12).ok


@given(seeds, st.integers(1, 3), st.integers(0, 4))
def test_schur_class_bound(seed, n, d):
    col = random_colligation(n, d, seed)
    zs = 0.95 * CircleGrid(32).points
    vals = transfer_on_points(col, zs)
    assert np.linalg.norm(vals, 2, axis=(1, 2)).max() <= 1 + 1e-9


def test_cascade_is_product():
    c1, c2 = random_colligation(2, 2, 1), random_colligation(2, 3, 2)
    z = 0.4 - 0.5j
    np.testing.assert_allclose(eval_transfer_disc(cascade(c1, c2), z), c1(z) @ c2(z), atol=1e-12)


def test_mobius_compose_matches_direct():
    col = random_colligation(2, 3, 4, norm=0.9)
    c = 0.3 - 0.2j
    z = 0.5 + 0.1j
    f = col(z)
    ref = (f + c * np.eye(2)) @ np.linalg.inv(np.eye(2) + np.conj(c) * f)
    np.testing.assert_allclose(mobius_compose(col, c)(z), ref, atol=1e-12)


def test_colligation_shapes_checked():
    with pytest.raises(DimensionMismatch):
        Colligation(np.eye(2), np.zeros((2, 3)), np.zeros((2, 2)), np.zeros((3, 3)))
