import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from innerapprox import (
    BlaschkePotapovProduct,
    BPFactor,
    CircleGrid,
    Colligation,
    KreinLangerPair,
    MatrixPolynomial,
    PGTransformed,
    SignatureSpace,
    is_j_contractive,
    j_inner_approximate,
    j_krein_langer_approximate,
    j_unitarity_defects,
    krein_langer_approximate,
    krein_langer_from_poles,
    pg_inverse,
    pg_inverse_values,
    pg_negative_squares,
    pg_roundtrip_defect,
    pg_transform,
    pg_values,
    random_colligation,
    random_contraction,
    random_inner,
    right_krein_langer_approximate,
    scalar_blaschke_product,
    tail_bound,
    verify_pg_kernel_identity,
)
from innerapprox.errors import NotContractive, SingularBlock
from innerapprox.indefinite import pg_form_defects, pg_inverse_values_alt, pg_values_alt

from oracles import blaschke, pg_direct, qr_unitary

SIGNATURES = [(1, 1), (1, 2), (2, 1)]
seeds = st.integers(0, 2**31 - 1)


def disc_points(count, seed, radius=0.9):
    g = np.random.default_rng(seed)
    return radius * np.sqrt(g.uniform(size=count)) * np.exp(2j * np.pi * g.uniform(size=count))


def j_contractive_function(sig, seed):
    """Inverse transform of a random inner function: J0-contractive and rational."""
    return PGTransformed(random_inner(sig.n, 2, seed), sig, inverse=True)


def j_unitary_constant(sig, seed):
    return pg_inverse_values(qr_unitary(sig.n, seed)[None], sig)[0]


def test_transform_fixed_points():
    sig = SignatureSpace(1, 1)
    eye = lambda z: np.eye(2)
    assert np.allclose(pg_transform(eye, sig, 0.3), np.eye(2))
    assert np.allclose(pg_inverse(eye, sig, 0.3), np.eye(2))
    j = lambda z: np.diag([1.0, -1.0])
    assert np.allclose(pg_transform(j, sig, 0.1), sig.j0)
    assert np.allclose(pg_inverse(j, sig, 0.1), sig.j0)


@pytest.mark.parametrize("p,q", SIGNATURES)
def test_transform_matches_block_formula(p, q):
    sig = SignatureSpace(p, q)
    g = np.random.default_rng(p * 10 + q)
    f = g.normal(size=(p + q, p + q)) + 1j * g.normal(size=(p + q, p + q))
    assert np.abs(pg_values(f[None], sig)[0] - pg_direct(f, p, q)).max() <= 1e-10


@pytest.mark.parametrize("p,q", SIGNATURES)
def test_constant_j_contraction_has_contractive_transform(p, q):
    sig = SignatureSpace(p, q)
    f = pg_inverse_values(random_contraction(sig.n, np.random.default_rng(q), 0.9)[None], sig)[0]
    assert is_j_contractive(lambda z: f, sig, [0.0]).ok
    assert np.linalg.norm(pg_values(f[None], sig)[0], 2) <= 1 + 1e-10


@pytest.mark.parametrize("p,q", SIGNATURES)
def test_involution_forms_and_kernel_identity(p, q):
    sig = SignatureSpace(p, q)
    f = j_contractive_function(sig, 3)
    pts = disc_points(20, 1)
    assert pg_roundtrip_defect(f, sig, pts) <= 1e-10
    assert max(pg_form_defects(f, sig, pts)) <= 1e-10
    zs, ws = disc_points(10, 2), disc_points(10, 3)
    assert max(verify_pg_kernel_identity(f, sig, z, w) for z, w in zip(zs, ws)) <= 1e-9


@given(seeds, st.sampled_from(SIGNATURES))
def test_involution_property(seed, pq):
    sig = SignatureSpace(*pq)
    g = np.random.default_rng(seed)
    vals = g.normal(size=(8, sig.n, sig.n)) + 1j * g.normal(size=(8, sig.n, sig.n))
    sv = pg_values(vals, sig)
    assert np.abs(pg_inverse_values(sv, sig) - vals).max() <= 1e-8 * max(1, np.abs(vals).max())
    assert np.abs(pg_values_alt(vals, sig) - sv).max() <= 1e-8 * max(1, np.abs(sv).max())
    assert np.abs(pg_inverse_values_alt(sv, sig) - vals).max() <= 1e-8 * max(1, np.abs(vals).max())


def test_kernel_identity_trivial_case():
    sig = SignatureSpace(1, 1)
    assert verify_pg_kernel_identity(lambda z: np.eye(2), sig, 0.3, -0.2j) <= 1e-15


def test_singular_corner_raises():
    sig = SignatureSpace(1, 1)
    f = lambda z: np.diag([0.5, z])
    with pytest.raises(SingularBlock):
        verify_pg_kernel_identity(f, sig, 1e-14, 0.2)


def test_j_contractivity_checks():
    sig = SignatureSpace(1, 1)
    v = j_unitary_constant(sig, 4)
    chk = is_j_contractive(lambda z: v, sig, [0.0, 0.5])
    assert chk.ok and abs(chk.defect) <= 1e-12
    assert not is_j_contractive(lambda z: np.diag([2.0, 1.0]), sig, [0.0]).ok
    assert is_j_contractive(j_contractive_function(sig, 1), sig, disc_points(30, 5)).ok


def test_negative_square_counts_agree():
    sig = SignatureSpace(1, 1)
    f = j_contractive_function(sig, 6)
    pts = disc_points(5, 7, 0.8)
    nf, ns = pg_negative_squares(f, sig, pts)
    assert nf == ns == 0


def test_j_constant_is_fixed_point():
    sig = SignatureSpace(1, 1)
    v = j_unitary_constant(sig, 2)
    for app in j_inner_approximate(lambda z: v, sig, [4, 6], degree=4):
        assert np.abs(app(0.3) - v).max() <= 1e-9


def test_j_inner_pipeline_half_z():
    sig = SignatureSpace(1, 1)
    sigma = MatrixPolynomial(np.array([np.zeros((2, 2)), 0.5 * np.eye(2)]))
    f = PGTransformed(sigma, sig, inverse=True)
    zs = 0.7 * CircleGrid(256).points
    circle = CircleGrid(256, 0.5).points
    errs = []
    for app in j_inner_approximate(f, sig, range(4, 11)):
        gate = app.gate(circle)
        assert gate.sum() > 0
        assert j_unitarity_defects(app, sig, circle[gate]).max() <= 1e-6
        errs.append(np.linalg.norm(app.evaluate_many(zs) - f.evaluate_many(zs), 2, axis=(1, 2)).max())
    assert np.all(np.diff(errs) < 0)


def test_j_krein_langer_route():
    # Sigma = b_{0.5}^{-1} (0.5 z) I has one pole; the J0 route still converges away from it
    sig = SignatureSpace(1, 1)
    b = BlaschkePotapovProduct(np.eye(2), (BPFactor(0.5, np.eye(2)),))
    l = MatrixPolynomial(np.array([np.zeros((2, 2)), 0.5 * np.eye(2)]))
    apps = j_krein_langer_approximate(KreinLangerPair(b, l), sig, [4, 8, 12])
    sigma = lambda z: 0.5 * z / blaschke(0.5, z) * np.eye(2)
    zs = 0.6 * CircleGrid(64, 0.5).points
    truth = np.array([pg_inverse(sigma, sig, z) for z in zs])
    errs = [np.abs(a.evaluate_many(zs) - truth).max() for a in apps]
    assert np.all(np.diff(errs) < 0)


def half_z():
    return Colligation([[0]], [[1]], [[0.5]], [[0]])


def region(rho=0.9, gap=0.1, pole=0.5):
    pts = np.concatenate([r * CircleGrid(128).points for r in np.linspace(0.05, rho, 18)])
    return pts[np.abs(pts - pole) >= gap]


def test_krein_langer_compact_mode():
    b = scalar_blaschke_product([0.5])
    pair = KreinLangerPair(b, half_z())
    pts = region()
    truth = np.array([[[0.5 * z / blaschke(0.5, z)]] for z in pts])
    errs = []
    for app in krein_langer_approximate(pair, [4, 6, 8, 10]):
        err = np.abs(app.evaluate_many(pts) - truth).max()
        bound = app.inverse_factor_norms(pts).max() * tail_bound(0.9, app.m).bound
        assert err <= bound
        errs.append(err)
    assert np.all(np.diff(errs) < 0)


def test_krein_langer_identity_factor_reduces_to_disc_pipeline():
    col = random_colligation(2, 2, 3)
    pair = KreinLangerPair(BlaschkePotapovProduct(np.eye(2), ()), col)
    app = krein_langer_approximate(pair, 6)[0]
    from innerapprox import inner_approximant_disc
    z = 0.4 - 0.3j
    assert np.abs(app(z) - inner_approximant_disc(col, 6)(z)).max() <= 1e-12


def test_krein_langer_circle_mode():
    b = scalar_blaschke_product([0.5])
    pair = KreinLangerPair(b, half_z())
    app = krein_langer_approximate(pair, mode="circle", eps=0.05)[0]
    circle = CircleGrid(512).points
    err = np.abs(app.evaluate_many(circle) - pair.evaluate_many(circle)).max()
    assert err <= app.inverse_factor_norms(circle).max() * app.l_m.residual + 1e-12


def test_krein_langer_boundary_values_are_unitary_ratios():
    b = random_inner(2, 1, 4)
    l = random_inner(2, 2, 5)
    app = krein_langer_approximate(KreinLangerPair(b, l.as_colligation()), 6)[0]
    vals = app.evaluate_many(CircleGrid(64, 0.5).points)
    eye = np.eye(2)
    assert np.abs(np.conj(np.swapaxes(vals, 1, 2)) @ vals - eye).max() <= 1e-8


def test_right_pair_and_validation():
    b = scalar_blaschke_product([0.5])
    right = right_krein_langer_approximate(KreinLangerPair(b, half_z()), 6)[0]
    left = krein_langer_approximate(KreinLangerPair(b, half_z()), 6)[0]
    assert np.allclose(right(0.2j), left(0.2j))
    with pytest.raises(NotContractive):
        KreinLangerPair(b, MatrixPolynomial(np.array([[[1.5]]])))


def test_factors_recovered_from_poles():
    alphas = [0.5, -0.3j]
    v1, v2 = np.array([1.0, 0.0]), np.array([1.0, 1.0]) / np.sqrt(2)
    def f(z):
        return 0.3 * np.outer(v1, v1) / blaschke(alphas[0], z) + 0.2 * np.outer(v2, v2) / blaschke(alphas[1], z)
    pair = krein_langer_from_poles(f, alphas, 2)
    assert pair.b.degree == 2
    zs = 0.8 * CircleGrid(16, 0.25).points
    assert max(np.abs(pair(z) - f(z)).max() for z in zs) <= 1e-8
