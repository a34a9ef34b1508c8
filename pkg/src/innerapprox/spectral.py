"""Matrix Fejer-Riesz factorization of a non-negative trigonometric polynomial.

Given a matrix polynomial ``P`` with ``||P(e^{it})|| <= 1`` we need a
polynomial ``E`` of the same degree with

    E(z) E(z)^* = I - P(z) P(z)^*        for |z| = 1,

so that the row ``[P  E]`` is co-inner.  The factor is read off the
stabilizing solution of a discrete algebraic Riccati equation (solved by
``scipy.linalg.solve_discrete_are``); a block-Toeplitz Riccati iteration is the
fallback when the density is singular on the circle and the Riccati pencil has
unimodular eigenvalues.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg as sl

from .core import adj, psd_sqrt
from .errors import NotContractive, NumericalFailure


def defect_density(coeffs: np.ndarray) -> list[np.ndarray]:
    """Coefficients ``W_0..W_n`` of ``I - P P^*`` on the circle (``W_{-j} = W_j^*``)."""
    n = coeffs.shape[0] - 1
    size = coeffs.shape[1]
    out = []
    for j in range(n + 1):
        w = -sum(coeffs[k] @ adj(coeffs[k - j]) for k in range(j, n + 1))
        if j == 0:
            w = w + np.eye(size)
        out.append(w)
    return out


def _shift_data(w: list[np.ndarray]):
    n = len(w) - 1
    size = w[0].shape[0]
    nn = n * size
    shift = np.zeros((nn, nn), dtype=np.complex128)
    for i in range(n - 1):
        shift[i * size:(i + 1) * size, (i + 1) * size:(i + 2) * size] = np.eye(size)
    head = np.zeros((size, nn), dtype=np.complex128)
    head[:, :size] = np.eye(size)
    cross = np.vstack(w[1:])
    return shift, head, cross


def _factor_from_x(w, x, shift, head, cross):
    size = w[0].shape[0]
    r0 = w[0] + head @ x @ adj(head)
    r0 = (r0 + adj(r0)) / 2
    lead = psd_sqrt(r0, clip_tol=0.0)
    tail = (cross + shift @ x @ adj(head)) @ np.linalg.pinv(adj(lead), rcond=1e-13)
    n = len(w) - 1
    return np.stack([lead] + [tail[i * size:(i + 1) * size] for i in range(n)])


def _riccati_iteration(w, shift, head, cross, max_iter=20000, tol=1e-15):
    # X <- F X F^* - (F X G^* + S)(W0 + G X G^*)^{-1}(.)^* ; block-Toeplitz Cholesky in disguise
    nn = shift.shape[0]
    x = np.zeros((nn, nn), dtype=np.complex128)
    for _ in range(max_iter):
        r0 = w[0] + head @ x @ adj(head)
        k = shift @ x @ adj(head) + cross
        x_new = shift @ x @ adj(shift) - k @ np.linalg.pinv(r0, rcond=1e-14, hermitian=True) @ adj(k)
        x_new = (x_new + adj(x_new)) / 2
        if np.linalg.norm(x_new - x) <= tol * max(1.0, np.linalg.norm(x_new)):
            return x_new
        x = x_new
    return x


def factorization_residual(coeffs: np.ndarray, factor: np.ndarray) -> float:
    w = defect_density(coeffs)
    return float(max(np.linalg.norm(wj - we) for wj, we in zip(w, defect_density_of_factor(factor))))


def defect_density_of_factor(factor: np.ndarray) -> list[np.ndarray]:
    n = factor.shape[0] - 1
    return [sum(factor[k] @ adj(factor[k - j]) for k in range(j, n + 1)) for j in range(n + 1)]


def spectral_factor(coeffs: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Polynomial ``E`` (same degree as ``P``) with ``E E^* = I - P P^*`` on the circle.

    Raises ``NotContractive`` when ``I - P P^*`` is not positive semidefinite on
    the circle, and ``NumericalFailure`` if neither solver reaches ``tol``.
    """
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    w = defect_density(coeffs)
    n = len(w) - 1
    scale = max(1.0, max(np.linalg.norm(wj) for wj in w))
    if n == 0:
        ev = np.linalg.eigvalsh((w[0] + adj(w[0])) / 2)
        if ev.min() < -tol:
            raise NotContractive(f"constant term has norm above 1 (eigenvalue {ev.min():.3e})")
        return psd_sqrt(w[0])[None]
    if max(np.linalg.norm(wj) for wj in w) <= tol:
        return np.zeros_like(coeffs)

    shift, head, cross = _shift_data(w)
    candidates = []
    try:
        x = sl.solve_discrete_are(adj(shift), adj(head), np.zeros_like(shift), w[0], s=cross)
        candidates.append(x)
    except (np.linalg.LinAlgError, ValueError):
        pass
    best, best_res = None, np.inf
    for x in candidates:
        f = _factor_from_x(w, x, shift, head, cross)
        res = factorization_residual(coeffs, f)
        if res < best_res:
            best, best_res = f, res
    if best_res > tol * scale:
        x = _riccati_iteration(w, shift, head, cross)
        f = _factor_from_x(w, x, shift, head, cross)
        res = factorization_residual(coeffs, f)
        if res < best_res:
            best, best_res = f, res
    if best_res > tol * scale:
        _check_density(coeffs)
        raise NumericalFailure(f"spectral factorization residual {best_res:.3e} above {tol:.1e}")
    return best


def _check_density(coeffs: np.ndarray, grid: int = 4096) -> None:
    z = np.exp(2j * np.pi * np.arange(grid) / grid)
    vals = np.zeros((grid,) + coeffs.shape[1:], dtype=np.complex128)
    vals[:] = coeffs[-1]
    for ck in coeffs[-2::-1]:
        vals = vals * z[:, None, None] + ck
    worst = np.linalg.norm(vals, 2, axis=(1, 2)).max()
    if worst > 1 + 1e-9:
        raise NotContractive(f"sampled sup norm {worst:.12g} exceeds 1")
