"""Signature matrices, the Potapov-Ginzburg transform and indefinite-metric pipelines.

With ``J0 = diag(I_p, -I_q)``, ``P = (I + J0) / 2`` and ``Q = (I - J0) / 2``
the transform

    Sigma = (P F + Q)(P + Q F)^{-1},        F = (P - Sigma Q)^{-1}(Sigma P - Q)

exchanges ``J0``-contractive functions and ordinary contractions, and

    I - Sigma(z) Sigma(w)^* = (P - F(z) Q)^{-1} (J0 - F(z) J0 F(w)^*) (P - F(w) Q)^{-*}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .core import (
    CircleGrid,
    Check,
    Colligation,
    MatrixPolynomial,
    adj,
    evaluate_on,
    operator_norm,
)
from .dilation import inner_approximant_disc
from .errors import (
    CornerDegenerate,
    DimensionMismatch,
    NotContractive,
    PoleHit,
    SingularBlock,
)
from .hull import fisher_pipeline
from .potapov import BlaschkePotapovProduct, BPFactor, projection_onto
from .realization import (
    contractive_polynomial,
    kernel_sample,
    negative_squares,
    realize_contractive,
)

BLOCK_COND_LIMIT = 1e12
GATE_COND_LIMIT = 1e8
CORNER_TOL = 1e-10
CORNER_RETRIES = 4


@dataclass(frozen=True, eq=False)
class SignatureSpace:
    p: int
    q: int
    j0: np.ndarray = field(init=False, repr=False)
    proj_p: np.ndarray = field(init=False, repr=False)
    proj_q: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise ValueError("both signature counts must be positive")
        j0 = np.diag(np.r_[np.ones(self.p), -np.ones(self.q)]).astype(np.complex128)
        for name, val in (("j0", j0), ("proj_p", (np.eye(self.n) + j0) / 2), ("proj_q", (np.eye(self.n) - j0) / 2)):
            val.flags.writeable = False
            object.__setattr__(self, name, val)

    @property
    def n(self) -> int:
        return self.p + self.q


def _values(f, zs) -> np.ndarray:
    if isinstance(f, np.ndarray):
        return f.reshape((-1,) + f.shape[-2:]).astype(np.complex128)
    return evaluate_on(f, zs)


def _checked_inv(m: np.ndarray, what: str) -> np.ndarray:
    cond = np.linalg.cond(m)
    if np.any(~np.isfinite(cond)) or np.any(cond > BLOCK_COND_LIMIT):
        raise SingularBlock(f"{what} is singular (condition {np.max(cond):.3e})")
    return np.linalg.inv(m)


def _check_size(vals: np.ndarray, sig: SignatureSpace) -> None:
    if vals.shape[-1] != sig.n or vals.shape[-2] != sig.n:
        raise DimensionMismatch(f"function values are {vals.shape[-2:]}, signature needs {sig.n}x{sig.n}")


# ---------------------------------------------------------------------------
# Transform and inverse on stacks of values
# ---------------------------------------------------------------------------


def pg_values(fv: np.ndarray, sig: SignatureSpace) -> np.ndarray:
    """``(P F + Q)(P + Q F)^{-1}`` for a stack of values."""
    _check_size(fv, sig)
    p, q = sig.proj_p, sig.proj_q
    return (p @ fv + q) @ _checked_inv(p + q @ fv, "P + Q F")


def pg_values_alt(fv: np.ndarray, sig: SignatureSpace) -> np.ndarray:
    """``(P - F Q)^{-1}(F P - Q)``."""
    p, q = sig.proj_p, sig.proj_q
    return _checked_inv(p - fv @ q, "P - F Q") @ (fv @ p - q)


def pg_inverse_values(sv: np.ndarray, sig: SignatureSpace) -> np.ndarray:
    """``(P - Sigma Q)^{-1}(Sigma P - Q)``."""
    _check_size(sv, sig)
    p, q = sig.proj_p, sig.proj_q
    return _checked_inv(p - sv @ q, "P - Sigma Q") @ (sv @ p - q)


def pg_inverse_values_alt(sv: np.ndarray, sig: SignatureSpace) -> np.ndarray:
    """``(Q + P Sigma)(P + Q Sigma)^{-1}``."""
    p, q = sig.proj_p, sig.proj_q
    return (q + p @ sv) @ _checked_inv(p + q @ sv, "P + Q Sigma")


def pg_transform(f, sig: SignatureSpace, z: complex) -> np.ndarray:
    return pg_values(_values(f, np.array([z])), sig)[0]


def pg_inverse(sigma, sig: SignatureSpace, z: complex) -> np.ndarray:
    return pg_inverse_values(_values(sigma, np.array([z])), sig)[0]


def pg_form_defects(f, sig: SignatureSpace, zs) -> tuple[float, float]:
    """Disagreement between the two forms of the transform and of its inverse."""
    fv = _values(f, np.asarray(zs, dtype=np.complex128).ravel())
    sv = pg_values(fv, sig)
    d1 = np.linalg.norm(sv - pg_values_alt(fv, sig), 2, axis=(1, 2)).max()
    d2 = np.linalg.norm(pg_inverse_values(sv, sig) - pg_inverse_values_alt(sv, sig), 2, axis=(1, 2)).max()
    return float(d1), float(d2)


def pg_roundtrip_defect(f, sig: SignatureSpace, zs) -> float:
    fv = _values(f, np.asarray(zs, dtype=np.complex128).ravel())
    back = pg_inverse_values(pg_values(fv, sig), sig)
    return float(np.linalg.norm(back - fv, 2, axis=(1, 2)).max())


class PGTransformed:
    """Pointwise evaluator of the transform (``inverse=False``) or its inverse."""

    def __init__(self, f, sig: SignatureSpace, inverse: bool = False):
        self.f, self.sig, self.inverse = f, sig, inverse

    def evaluate_many(self, zs) -> np.ndarray:
        vals = evaluate_on(self.f, np.asarray(zs, dtype=np.complex128).ravel())
        return pg_inverse_values(vals, self.sig) if self.inverse else pg_values(vals, self.sig)

    def __call__(self, z: complex) -> np.ndarray:
        return self.evaluate_many(np.array([z]))[0]


def verify_pg_kernel_identity(f, sig: SignatureSpace, z: complex, w: complex) -> float:
    """Largest defect of the left and right kernel identities at ``(z, w)``."""
    fz, fw = _values(f, np.array([z]))[0], _values(f, np.array([w]))[0]
    _check_size(fz, sig)
    p, q, j = sig.proj_p, sig.proj_q, sig.j0
    sz = pg_values(fz[None], sig)[0]
    sw = pg_values(fw[None], sig)[0]
    lz = _checked_inv(p - fz @ q, "P - F Q")
    lw = _checked_inv(p - fw @ q, "P - F Q")
    left = np.eye(sig.n) - sz @ adj(sw)
    left_rhs = lz @ (j - fz @ j @ adj(fw)) @ adj(lw)
    rz = _checked_inv(p + q @ fz, "P + Q F")
    rw = _checked_inv(p + q @ fw, "P + Q F")
    right = np.eye(sig.n) - adj(sw) @ sz
    right_rhs = adj(rw) @ (j - adj(fw) @ j @ fz) @ rz
    return max(operator_norm(left - left_rhs), operator_norm(right - right_rhs))


def is_j_contractive(f, sig: SignatureSpace, points, tol: float = 1e-9) -> Check:
    """Worst ``lambda_max(F J0 F^* - J0)`` over the points."""
    vals = _values(f, np.asarray(points, dtype=np.complex128).ravel())
    _check_size(vals, sig)
    gap = vals @ sig.j0 @ adj(vals) - sig.j0
    worst = float(np.linalg.eigvalsh((gap + adj(gap)) / 2)[:, -1].max())
    return Check(bool(worst <= tol), worst)


def j_unitarity_defects(f, sig: SignatureSpace, points) -> np.ndarray:
    vals = _values(f, np.asarray(points, dtype=np.complex128).ravel())
    return np.linalg.norm(vals @ sig.j0 @ adj(vals) - sig.j0, 2, axis=(1, 2))


def pg_negative_squares(f, sig: SignatureSpace, points, tol: float = 1e-9) -> tuple[int, int]:
    """Negative-eigenvalue counts of the ``J0``-kernel of ``F`` and the Schur kernel of its transform."""
    fk = kernel_sample(f, points, j=sig)
    sk = kernel_sample(PGTransformed(f, sig), points)
    return negative_squares(fk, tol).negative_eigenvalues, negative_squares(sk, tol).negative_eigenvalues


# ---------------------------------------------------------------------------
# J0-inner approximation
# ---------------------------------------------------------------------------


class JInnerApproximant:
    """``z -> (P - B(z) Q)^{-1}(B(z) P - Q)`` for an inner ``B`` (given as a unitary colligation)."""

    def __init__(self, inner, sig: SignatureSpace, m: int | None = None):
        self.inner, self.sig, self.m = inner, sig, m

    def evaluate_many(self, zs) -> np.ndarray:
        return pg_inverse_values(evaluate_on(self.inner, np.asarray(zs, dtype=np.complex128).ravel()), self.sig)

    def __call__(self, z: complex) -> np.ndarray:
        return self.evaluate_many(np.array([z]))[0]

    def block_condition(self, zs) -> np.ndarray:
        bv = evaluate_on(self.inner, np.asarray(zs, dtype=np.complex128).ravel())
        return np.linalg.cond(self.sig.proj_p - bv @ self.sig.proj_q)

    def gate(self, zs, cond_limit: float = GATE_COND_LIMIT) -> np.ndarray:
        """Mask of points where ``P - B Q`` has condition at most ``cond_limit``."""
        c = self.block_condition(zs)
        return np.isfinite(c) & (c <= cond_limit)


def corner_determinants(inner, sig: SignatureSpace, zs) -> np.ndarray:
    bv = evaluate_on(inner, np.asarray(zs, dtype=np.complex128).ravel())
    return np.abs(np.linalg.det(bv[:, sig.p:, sig.p:]))


def _corner_grid() -> np.ndarray:
    circle = CircleGrid(256, 0.5).points
    return np.concatenate([circle, 0.5 * circle, 0.9 * circle])


def _as_schur_colligation(sigma, degree: int) -> Colligation:
    if isinstance(sigma, Colligation):
        return sigma
    if isinstance(sigma, BlaschkePotapovProduct):
        return sigma.as_colligation()
    if isinstance(sigma, MatrixPolynomial):
        return realize_contractive(sigma)
    return realize_contractive(contractive_polynomial(sigma, degree))


def j_inner_approximate(
    f,
    sig: SignatureSpace,
    ms: int | Iterable[int] = 8,
    degree: int = 12,
) -> list[JInnerApproximant]:
    """Rational ``J0``-inner approximants ``F_m = PG^{-1}(B_m)`` of a ``J0``-contractive ``f``.

    ``B_m`` is the depth-``m`` inner approximant of a contractive realization of
    the transform of ``f`` (a polynomial approximant of the given ``degree``
    when ``f`` is a plain evaluator).  When the ``q x q`` corner of ``B_m`` is
    numerically singular on the whole check grid the depth is doubled, up to
    four times.
    """
    ms = [ms] if isinstance(ms, int) else list(ms)
    if isinstance(f, PGTransformed) and f.inverse and (f.sig.p, f.sig.q) == (sig.p, sig.q):
        sigma = f.f  # already given through its transform
    else:
        sigma = PGTransformed(f, sig)
    col = _as_schur_colligation(sigma, degree)
    if col.n_out != sig.n:
        raise DimensionMismatch("function size does not match the signature")
    out = []
    grid = _corner_grid()
    for m in ms:
        depth = m
        for attempt in range(CORNER_RETRIES + 1):
            inner = inner_approximant_disc(col, depth)
            if corner_determinants(inner, sig, grid).max() >= CORNER_TOL:
                break
            if attempt == CORNER_RETRIES:
                raise CornerDegenerate(f"corner block of the inner approximant vanishes up to depth {depth}")
            depth *= 2
        out.append(JInnerApproximant(inner, sig, depth))
    return out


# ---------------------------------------------------------------------------
# Krein-Langer factors
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class KreinLangerPair:
    """``F = B^{-1} L`` (``left``) or ``F = L B^{-1}`` (``right``)."""

    b: BlaschkePotapovProduct
    l: object
    side: str = "left"

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        circle = CircleGrid(256, 0.5).points
        pts = np.concatenate([r * circle for r in (1.0, 0.9, 0.6, 0.3)])
        vals = evaluate_on(self.l, pts)
        if vals.shape[1] != self.b.n:
            raise DimensionMismatch("factor sizes differ")
        worst = float(np.linalg.norm(vals, 2, axis=(1, 2)).max())
        if worst > 1 + 1e-9:
            raise NotContractive(f"L has sampled norm {worst:.12g} above 1")

    def __call__(self, z: complex) -> np.ndarray:
        return self.evaluate_many(np.array([z]))[0]

    def evaluate_many(self, zs) -> np.ndarray:
        return _kl_values(self.b, self.l, zs, self.side)


def _kl_values(b: BlaschkePotapovProduct, l, zs, side: str) -> np.ndarray:
    zs = np.asarray(zs, dtype=np.complex128).ravel()
    bv = b.evaluate_many(zs)
    cond = np.linalg.cond(bv)
    if np.any(~np.isfinite(cond)) or np.any(cond > BLOCK_COND_LIMIT):
        bad = zs[~(np.isfinite(cond) & (cond <= BLOCK_COND_LIMIT))][0]
        raise PoleHit(f"det B vanishes near z={bad}")
    lv = evaluate_on(l, zs)
    if side == "left":
        return np.linalg.solve(bv, lv)
    return adj(np.linalg.solve(adj(bv), adj(lv)))


class KreinLangerApproximant:
    def __init__(self, b: BlaschkePotapovProduct, l_m, side: str = "left", m: int | None = None):
        self.b, self.l_m, self.side, self.m = b, l_m, side, m

    def evaluate_many(self, zs) -> np.ndarray:
        return _kl_values(self.b, self.l_m, zs, self.side)

    def __call__(self, z: complex) -> np.ndarray:
        return self.evaluate_many(np.array([z]))[0]

    def inverse_factor_norms(self, zs) -> np.ndarray:
        bv = self.b.evaluate_many(np.asarray(zs, dtype=np.complex128).ravel())
        return 1.0 / np.linalg.svd(bv, compute_uv=False)[:, -1]


def _l_colligation(l, degree: int) -> Colligation:
    return _as_schur_colligation(l, degree)


def krein_langer_approximate(
    pair: KreinLangerPair,
    ms: int | Iterable[int] = 8,
    mode: str = "compact",
    eps: float = 0.05,
    degree: int = 12,
    budget: int = 256,
) -> list[KreinLangerApproximant]:
    """``B^{-1} L_m`` (or ``L_m B^{-1}`` for a right pair).

    ``compact`` mode uses the depth-``m`` inner approximants of ``L``; ``circle``
    mode replaces ``L`` by a convex combination of rational inner functions
    within ``eps`` of it on the closed disc (one approximant, ``m`` unused).
    """
    if mode == "compact":
        col = _l_colligation(pair.l, degree)
        ms = [ms] if isinstance(ms, int) else list(ms)
        return [KreinLangerApproximant(pair.b, inner_approximant_disc(col, m), pair.side, m) for m in ms]
    if mode == "circle":
        l = pair.l
        if not isinstance(l, (Colligation, MatrixPolynomial, BlaschkePotapovProduct)):
            l = _l_colligation(l, degree)
        comb = fisher_pipeline(l, eps, budget=budget)
        return [KreinLangerApproximant(pair.b, comb, pair.side, None)]
    raise ValueError("mode must be 'compact' or 'circle'")


def right_krein_langer_approximate(pair: KreinLangerPair, ms=8, mode: str = "compact", **kw):
    if pair.side != "right":
        pair = KreinLangerPair(pair.b, pair.l, "right")
    return krein_langer_approximate(pair, ms, mode, **kw)


def residue(f: Callable, pole: complex, radius: float = 1e-3, nodes: int = 64) -> np.ndarray:
    """Contour-integral residue of ``f`` at ``pole``."""
    t = np.exp(2j * np.pi * np.arange(nodes) / nodes)
    vals = evaluate_on(f, pole + radius * t)
    return radius * np.mean(vals * t[:, None, None], axis=0)


class ClearedFunction:
    """``B(z) F(z)`` with its removable singularities at the zeros of ``B`` filled in.

    Points within ``guard`` of a pole are evaluated as the mean over a small
    circle around them (mean-value property of holomorphic functions).
    """

    def __init__(self, b: BlaschkePotapovProduct, f: Callable, poles, guard: float = 1e-6, radius: float = 1e-3):
        self.b, self.f = b, f
        self.poles = np.asarray(poles, dtype=np.complex128)
        self.guard, self.radius = guard, radius

    def _raw(self, zs):
        return self.b.evaluate_many(zs) @ evaluate_on(self.f, zs)

    def evaluate_many(self, zs) -> np.ndarray:
        zs = np.asarray(zs, dtype=np.complex128).ravel()
        near = np.zeros(zs.size, bool)
        if self.poles.size:
            near = np.min(np.abs(zs[:, None] - self.poles[None]), axis=1) < self.guard
        out = np.empty((zs.size, self.b.n, self.b.n), dtype=np.complex128)
        if np.any(~near):
            out[~near] = self._raw(zs[~near])
        t = np.exp(2j * np.pi * (np.arange(32) + 0.5) / 32)
        for i in np.flatnonzero(near):
            out[i] = self._raw(zs[i] + self.radius * t).mean(axis=0)
        return out

    def __call__(self, z: complex) -> np.ndarray:
        return self.evaluate_many(np.array([z]))[0]


def krein_langer_from_poles(f: Callable, poles: Sequence[complex], n: int, check_points: int = 32) -> KreinLangerPair:
    """Left factors ``(B, L)`` of a meromorphic ``f`` with simple poles at ``poles``.

    Each pole contributes a rank-one factor whose projection is the leading
    left singular direction of the residue of the partially cleared function.
    ``L = B F`` is returned as an evaluator and checked to be contractive and
    to reproduce ``f`` at sample points.
    """
    factors: list[BPFactor] = []
    cleared = f
    for alpha in poles:
        res = residue(cleared, alpha)
        u, s, _ = np.linalg.svd(res)
        if s[0] < 1e-10:
            raise ValueError(f"f has no pole at {alpha}")
        proj = projection_onto(u[:, :1])
        fac = BPFactor(alpha, proj)
        factors.insert(0, fac)
        cleared = ClearedFunction(BlaschkePotapovProduct(np.eye(n), (fac,)), cleared, [alpha])
    b = BlaschkePotapovProduct(np.eye(n), tuple(factors))
    pair = KreinLangerPair(b, ClearedFunction(b, f, poles))
    zs = 0.7 * np.exp(2j * np.pi * (np.arange(check_points) + 0.25) / check_points)
    err = np.abs(pair.evaluate_many(zs) - evaluate_on(f, zs)).max()
    if err > 1e-8:
        raise ValueError(f"B^-1 L does not reproduce f (error {err:.3e})")
    return pair


class JKreinLangerApproximant:
    """``PG^{-1}(B^{-1} L_m)``: the negative-squares route for ``J0``-kernels."""

    def __init__(self, kl: KreinLangerApproximant, sig: SignatureSpace):
        self.kl, self.sig, self.m = kl, sig, kl.m

    def evaluate_many(self, zs) -> np.ndarray:
        return pg_inverse_values(self.kl.evaluate_many(zs), self.sig)

    def __call__(self, z: complex) -> np.ndarray:
        return self.evaluate_many(np.array([z]))[0]


def j_krein_langer_approximate(sigma_pair: KreinLangerPair, sig: SignatureSpace, ms=8, degree: int = 12):
    """Approximants of ``F = PG^{-1}(B^{-1} L)`` whose ``J0``-kernel has finitely many negative squares."""
    return [JKreinLangerApproximant(a, sig) for a in krein_langer_approximate(sigma_pair, ms, "compact", degree=degree)]
