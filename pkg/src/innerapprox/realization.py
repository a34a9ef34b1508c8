"""Contractive state-space realizations of matrix polynomials and kernel utilities."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import (
    CircleGrid,
    Colligation,
    MatrixPolynomial,
    adj,
    as_matrix,
    evaluate_on,
    sup_norm_estimate,
)
from .errors import (
    DegenerateDenominator,
    NotContractiveInput,
    NumericalFailure,
    RankDeficiencyWarning,
)
from .spectral import spectral_factor

MATCH_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class KernelSample:
    """Block Gram matrix ``[K(w_i, w_j)]`` of a kernel at distinct points."""

    points: np.ndarray
    blocks: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.complex128).ravel()
        blk = as_matrix(self.blocks, name="blocks")
        if blk.shape[0] != blk.shape[1] or blk.shape[0] % max(pts.size, 1):
            raise ValueError("blocks must be square with one block row per point")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "blocks", blk)

    @property
    def block_size(self) -> int:
        return self.blocks.shape[0] // self.points.size

    def hermitian_defect(self) -> float:
        return float(np.abs(self.blocks - adj(self.blocks)).max())


@dataclass(frozen=True)
class NegativeSquaresReport:
    sample_count: int
    negative_eigenvalues: int
    eigenvalue_floor: float
    tolerance: float


def _signature(j, size: int) -> np.ndarray:
    if j is None:
        return np.eye(size)
    return np.asarray(getattr(j, "j0", j), dtype=np.complex128)


def schur_kernel(f: Callable, z: complex, w: complex, j=None) -> np.ndarray:
    """``(J - F(z) J F(w)^*) / (1 - z conj(w))`` with ``J = I`` by default."""
    denom = 1.0 - z * np.conj(w)
    if abs(denom) < 1e-13:
        raise DegenerateDenominator(f"1 - z conj(w) vanishes for z={z}, w={w}")
    fz = np.atleast_2d(np.asarray(f(z), dtype=np.complex128))
    fw = fz if w == z else np.atleast_2d(np.asarray(f(w), dtype=np.complex128))
    jm = _signature(j, fz.shape[0])
    return (jm - fz @ jm @ adj(fw)) / denom


def j_schur_kernel(f: Callable, sig, z: complex, w: complex) -> np.ndarray:
    return schur_kernel(f, z, w, j=sig)


def kernel_sample(f: Callable, points, j=None) -> KernelSample:
    """Assemble the block Gram matrix of the (J-)Schur kernel of ``f`` at ``points``."""
    pts = np.asarray(points, dtype=np.complex128).ravel()
    if np.any(np.abs(pts) >= 1):
        raise ValueError("kernel sample points must lie in the open disc")
    if len(np.unique(np.round(pts, 14))) != pts.size:
        raise ValueError("kernel sample points must be distinct")
    vals = evaluate_on(f, pts)
    size = vals.shape[1]
    jm = _signature(j, size)
    num = jm[None, None] - np.einsum("iab,bc,jdc->ijad", vals, jm, np.conj(vals))
    den = 1.0 - pts[:, None] * np.conj(pts)[None, :]
    blocks = (num / den[:, :, None, None]).transpose(0, 2, 1, 3).reshape(pts.size * size, -1)
    return KernelSample(pts, (blocks + adj(blocks)) / 2)


def negative_squares(sample: KernelSample, tol: float = 1e-10) -> NegativeSquaresReport:
    ev = np.linalg.eigvalsh(sample.blocks)
    return NegativeSquaresReport(
        sample_count=sample.points.size,
        negative_eigenvalues=int(np.sum(ev < -tol)),
        eigenvalue_floor=float(ev.min()),
        tolerance=tol,
    )


def shift_realization(p: MatrixPolynomial) -> Colligation:
    """Exact (generally non-contractive) realization with ``d = degree * N``.

    The state is a delay line: ``C`` injects into the first block, ``D`` shifts
    blocks down and ``B = [P_1, ..., P_n]``.
    """
    n, size = p.degree, p.n
    if n == 0:
        return Colligation(p.coeffs[0], np.zeros((size, 0)), np.zeros((0, size)), np.zeros((0, 0)))
    d = n * size
    c = np.zeros((d, size), dtype=np.complex128)
    c[:size] = np.eye(size)
    dmat = np.zeros((d, d), dtype=np.complex128)
    for i in range(n - 1):
        dmat[(i + 1) * size:(i + 2) * size, i * size:(i + 1) * size] = np.eye(size)
    b = np.hstack(list(p.coeffs[1:]))
    return Colligation(p.coeffs[0], b, c, dmat)


def strictify(p: MatrixPolynomial, delta: float, r: float = 1.0) -> MatrixPolynomial:
    """``(1 - delta) * p(r z)`` truncated to the original degree."""
    if not 0 <= delta < 1:
        raise ValueError("delta must lie in [0, 1)")
    if not 0 <= r <= 1:
        raise ValueError("r must lie in [0, 1]")
    powers = r ** np.arange(p.degree + 1)
    return MatrixPolynomial((1 - delta) * p.coeffs * powers[:, None, None])


def sample_points(count: int, radius: float = 0.5) -> np.ndarray:
    return radius * np.exp(2j * np.pi * np.arange(count) / count)


def _validation_points(count: int = 12) -> np.ndarray:
    return 0.3 * np.exp(2j * np.pi * (np.arange(count) + 0.37) / count)


def _coinner_kernel_coeffs(g: np.ndarray) -> np.ndarray:
    """Coefficient matrix ``M`` of ``(I - G(z)G(w)^*) / (1 - z conj(w))``.

    For a co-inner polynomial row ``G`` of degree ``n`` the kernel is a
    polynomial of bidegree ``(n-1, n-1)``; ``M[i, j]`` multiplies
    ``z^i conj(w)^j`` and solves ``M_ij - M_{i-1,j-1} = R_ij``.
    """
    n = g.shape[0] - 1
    size = g.shape[1]
    m = np.zeros((n * size, n * size), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            acc = np.zeros((size, size), dtype=np.complex128)
            for t in range(min(i, j) + 1):
                acc -= g[i - t] @ adj(g[j - t])
                if i == t and j == t:
                    acc += np.eye(size)
            m[i * size:(i + 1) * size, j * size:(j + 1) * size] = acc
    return (m + adj(m)) / 2


def _poly_values(coeffs: np.ndarray, points: np.ndarray) -> np.ndarray:
    out = np.zeros((points.size,) + coeffs.shape[1:], dtype=np.complex128)
    out[:] = coeffs[-1]
    for ck in coeffs[-2::-1]:
        out = out * points[:, None, None] + ck
    return out


def _lurking_isometry(g: np.ndarray, h_coef: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Solve ``V [conj(w) H(w)^* ; I] = [H(w)^* ; G(w)^*]`` over the sample points."""
    size = g.shape[1]
    n = g.shape[0] - 1
    d = h_coef.shape[1]
    xs, ys = [], []
    gvals = _poly_values(g, points)
    for w, gw in zip(points, gvals):
        phi = np.hstack([w ** i * np.eye(size) for i in range(n)])
        hw = phi @ h_coef
        xs.append(np.vstack([np.conj(w) * adj(hw), np.eye(size)]))
        ys.append(np.vstack([adj(hw), adj(gw)]))
    x = np.hstack(xs)
    y = np.hstack(ys)
    if np.linalg.matrix_rank(x, tol=1e-12 * max(1.0, np.abs(x).max())) < d + size:
        raise NumericalFailure("sample points do not span the isometry domain; add samples")
    v = y @ np.linalg.pinv(x, rcond=1e-13)
    # The data define an isometry; snap to the nearest one so that ||T|| <= 1 holds to roundoff.
    u, _, vh = np.linalg.svd(v, full_matrices=False)
    return u @ vh


def contractive_realization(
    p: MatrixPolynomial,
    sample_count: int | None = None,
    rank_tol: float = 1e-10,
) -> Colligation:
    """Contractive colligation whose transfer function is the polynomial ``p``.

    ``p`` must satisfy ``||p||_inf <= 1``.  The polynomial is completed to a
    co-inner row ``G = [p  E]`` with a spectral factor ``E`` of ``I - p p^*``;
    the Schur kernel of ``G`` then has rank at most ``degree * N`` and a
    lurking-isometry argument at ``sample_count`` points of radius 1/2 yields
    an isometry ``V``.  The first ``N`` input columns of ``V^*`` give ``T``.
    """
    size, n = p.n, p.degree
    k = sample_count if sample_count is not None else 2 * (n + 1)
    if k < n + 1:
        raise ValueError(f"need at least degree+1={n + 1} sample points, got {k}")
    pts = sample_points(k)

    gram = kernel_sample(p, pts)
    floor = np.linalg.eigvalsh(gram.blocks).min()
    if floor < -1e-6:
        raise NotContractiveInput(f"Schur kernel Gram has eigenvalue {floor:.3e}; ||p|| exceeds 1")

    if n == 0:
        a = p.coeffs[0]
        if np.linalg.norm(a, 2) > 1 + 1e-9:
            raise NotContractiveInput("constant polynomial has norm above 1")
        return Colligation(a, np.zeros((size, 0)), np.zeros((0, size)), np.zeros((0, 0)))

    try:
        e = spectral_factor(p.coeffs)
    except ValueError as exc:
        raise NotContractiveInput(str(exc)) from exc
    g = np.concatenate([p.coeffs, e], axis=2)

    mcoef = _coinner_kernel_coeffs(g)
    ev, evec = np.linalg.eigh(mcoef)
    order = np.argsort(ev)[::-1]
    ev, evec = ev[order], evec[:, order]
    top = max(ev[0], 0.0)
    if top <= rank_tol:
        # p is a constant unitary padded with vanishing higher coefficients
        ranks = [0]
    else:
        r0 = int(np.sum(ev > rank_tol * top))
        rmax = int(np.sum(ev > 1e-15 * top))
        ranks = list(range(r0, max(r0, rmax) + 1))

    check_pts = _validation_points()
    target = p.evaluate_many(check_pts)
    best, best_res = None, np.inf
    for d in ranks:
        if d == 0:
            col = Colligation(p.coeffs[0], np.zeros((size, 0)), np.zeros((0, size)), np.zeros((0, 0)))
        else:
            h_coef = evec[:, :d] * np.sqrt(ev[:d])
            v = _lurking_isometry(g, h_coef, pts)
            # V = [[V11, V12], [V21, V22]] on C^d (+) C^N -> C^d (+) C^{2N}; T = V^* reordered
            col = Colligation(
                adj(v[d:, d:])[:, :size],
                adj(v[:d, d:]),
                adj(v[d:, :d])[:, :size],
                adj(v[:d, :d]),
            )
        res = float(np.abs(col.evaluate_many(check_pts) - target).max())
        if res < best_res:
            best, best_res = col, res
        if res <= MATCH_TOL:
            break
    if best.n_state > n * size:
        warnings.warn(f"state dimension {best.n_state} exceeds degree*N={n * size}", RankDeficiencyWarning)
    if best_res > MATCH_TOL:
        raise NumericalFailure(f"realization residual {best_res:.3e} above {MATCH_TOL:.0e}")
    return best


def polynomial_sup_norm(p: MatrixPolynomial, grid_size: int = 4096) -> float:
    return sup_norm_estimate(p, CircleGrid(grid_size)).value


def taylor_coefficients(f: Callable, degree: int, radius: float = 0.5, nodes: int | None = None) -> np.ndarray:
    """Taylor coefficients ``F_0..F_degree`` of a function holomorphic on ``|z| <= radius``.

    Uses the discrete Cauchy integral (an FFT over ``nodes`` points of the
    circle of the given radius); aliasing is of order ``radius^nodes``.
    """
    nodes = nodes if nodes is not None else max(64, 4 * (degree + 1))
    zs = radius * np.exp(2j * np.pi * np.arange(nodes) / nodes)
    vals = evaluate_on(f, zs)
    coeffs = np.fft.fft(vals, axis=0)[: degree + 1] / nodes
    return coeffs / (radius ** np.arange(degree + 1))[:, None, None]


def _fejer(coeffs: np.ndarray) -> np.ndarray:
    n = coeffs.shape[0]
    return coeffs * (1.0 - np.arange(n) / n)[:, None, None]


def contractive_polynomial(f: Callable, degree: int, radius: float = 0.5) -> MatrixPolynomial:
    """Polynomial approximant of a Schur-class ``f`` with sampled sup norm at most 1.

    The truncated Taylor series is used when it is contractive; otherwise the
    Fejer mean, which is contractive because it averages ``f`` against a
    positive kernel.
    """
    coeffs = taylor_coefficients(f, degree, radius)
    coeffs[np.abs(coeffs) < 1e-14] = 0.0
    p = MatrixPolynomial(coeffs)
    if polynomial_sup_norm(p) > 1 + 1e-12:
        p = MatrixPolynomial(_fejer(coeffs))
    return p


def realize_contractive(p: MatrixPolynomial, delta: float = 1e-6) -> Colligation:
    """``contractive_realization`` with a strictification fallback for boundary-touching inputs."""
    sup = polynomial_sup_norm(p)
    if sup > 1 + 1e-9:
        raise NotContractiveInput(f"sampled sup norm {sup:.12g} exceeds 1")
    if p.degree == 0 or np.all(np.abs(p.coeffs[1:]) < 1e-14):
        a = p.coeffs[0]
        if np.linalg.norm(a, 2) > 1:
            u, _, vh = np.linalg.svd(a)
            a = u @ vh
        return Colligation(a, np.zeros((p.n, 0)), np.zeros((0, p.n)), np.zeros((0, 0)))
    if sup <= 1 - delta:
        return contractive_realization(p)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RankDeficiencyWarning)
            return contractive_realization(p)
    except (NumericalFailure, NotContractiveInput):
        return contractive_realization(strictify(p, delta / max(sup, 1.0)))
