"""Blaschke factors, Blaschke-Potapov products, radial scaling and inner-ness checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .core import (
    CircleGrid,
    Check,
    Colligation,
    adj,
    as_matrix,
    cascade,
    evaluate_on,
    is_unitary,
    left_multiply,
    random_unitary,
)
from .errors import DimensionMismatch, InvalidRadius, NotUnitary, NumericalFailure, PoleHit

POLE_TOL = 1e-13
PROJ_TOL = 1e-12
POLE_ROTATION = 1e-9


@dataclass(frozen=True)
class BlaschkeFactor:
    alpha: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        if not abs(self.alpha) < 1:
            raise ValueError(f"Blaschke zero must lie in the open disc, got {self.alpha}")

    def __call__(self, z: complex) -> complex:
        return eval_blaschke(self, z)


def eval_blaschke(bf: BlaschkeFactor | complex, z: complex) -> complex:
    """``(z - alpha) / (1 - conj(alpha) z)``."""
    alpha = bf.alpha if isinstance(bf, BlaschkeFactor) else complex(bf)
    den = 1.0 - np.conj(alpha) * z
    if abs(den) < POLE_TOL:
        raise PoleHit(f"z={z} is the pole of b_alpha with alpha={alpha}")
    return complex((z - alpha) / den)


def _blaschke_many(alpha: complex, zs: np.ndarray) -> np.ndarray:
    den = 1.0 - np.conj(alpha) * zs
    if np.any(np.abs(den) < POLE_TOL):
        raise PoleHit(f"evaluation grid hits the pole 1/conj({alpha})")
    return (zs - alpha) / den


@dataclass(frozen=True, eq=False)
class BPFactor:
    """``b_alpha(z) P + (I - P)`` with ``P`` an orthogonal projection."""

    alpha: complex
    proj: np.ndarray

    def __post_init__(self):
        alpha = complex(self.alpha)
        if not abs(alpha) < 1:
            raise ValueError(f"factor zero must lie in the open disc, got {alpha}")
        p = as_matrix(self.proj, name="proj")
        if p.shape[0] != p.shape[1]:
            raise DimensionMismatch("projection must be square")
        if np.abs(p @ p - p).max() > PROJ_TOL or np.abs(p - adj(p)).max() > PROJ_TOL:
            raise ValueError("proj is not an orthogonal projection")
        p = (p + adj(p)) / 2
        p.flags.writeable = False
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "proj", p)

    @property
    def n(self) -> int:
        return self.proj.shape[0]

    @property
    def rank(self) -> int:
        return int(round(np.trace(self.proj).real))

    def range_basis(self) -> np.ndarray:
        w, v = np.linalg.eigh(self.proj)
        return v[:, w > 0.5]

    def __call__(self, z: complex) -> np.ndarray:
        b = eval_blaschke(self.alpha, z)
        return b * self.proj + (np.eye(self.n) - self.proj)

    def as_colligation(self) -> Colligation:
        """Unitary realization with state dimension ``rank(P)``."""
        q = self.range_basis()
        s = np.sqrt(1.0 - abs(self.alpha) ** 2)
        a = np.eye(self.n) - (1.0 + self.alpha) * self.proj
        return Colligation(a, s * q, s * adj(q), np.conj(self.alpha) * np.eye(q.shape[1]))


def projection_onto(vectors) -> np.ndarray:
    """Orthogonal projection onto the column span of ``vectors``."""
    v = np.atleast_2d(np.asarray(vectors, dtype=np.complex128))
    if v.shape[0] == 1 and v.shape[1] > 1:
        v = v.T
    q, r = np.linalg.qr(v)
    keep = np.abs(np.diag(r)) > 1e-12 * max(1.0, np.abs(r).max())
    q = q[:, keep]
    return q @ adj(q)


@dataclass(frozen=True, eq=False)
class BlaschkePotapovProduct:
    """``U * prod_m (b_{alpha_m} P_m + I - P_m)``, factors applied in list order."""

    unitary: np.ndarray
    factors: tuple = field(default_factory=tuple)

    def __post_init__(self):
        u = as_matrix(self.unitary, name="unitary")
        chk = is_unitary(u, 1e-12) if u.shape[0] == u.shape[1] else Check(False, np.inf)
        if not chk.ok:
            raise NotUnitary(f"constant factor is not unitary (defect {chk.defect:.3e})")
        factors = tuple(self.factors)
        for f in factors:
            if f.n != u.shape[0]:
                raise DimensionMismatch("factor size does not match the unitary")
        u.flags.writeable = False
        object.__setattr__(self, "unitary", u)
        object.__setattr__(self, "factors", factors)

    @property
    def n(self) -> int:
        return self.unitary.shape[0]

    @property
    def degree(self) -> int:
        return degree(self)

    def __call__(self, z: complex) -> np.ndarray:
        return eval_bp_product(self, z)

    def evaluate_many(self, zs) -> np.ndarray:
        zs = np.asarray(zs, dtype=np.complex128).ravel()
        out = np.broadcast_to(self.unitary, (zs.size, self.n, self.n)).copy()
        eye = np.eye(self.n)
        for f in self.factors:
            b = _blaschke_many(f.alpha, zs)
            out = out @ (b[:, None, None] * f.proj[None] + (eye - f.proj)[None])
        return out

    def as_colligation(self) -> Colligation:
        """Unitary colligation with the same transfer function (state dim = degree)."""
        col = Colligation(np.eye(self.n), np.zeros((self.n, 0)), np.zeros((0, self.n)), np.zeros((0, 0)))
        for f in self.factors:
            col = cascade(col, f.as_colligation())
        return left_multiply(self.unitary, col)

    def poles(self) -> np.ndarray:
        alphas = np.array([f.alpha for f in self.factors], dtype=np.complex128)
        nz = alphas[np.abs(alphas) > 0]
        return 1.0 / np.conj(nz)


def eval_bp_product(prod: BlaschkePotapovProduct, z: complex) -> np.ndarray:
    out = prod.unitary.copy()
    for f in prod.factors:
        out = out @ f(z)
    return out


def degree(prod: BlaschkePotapovProduct) -> int:
    """Potapov degree ``sum rank(P_m)`` (the degree of ``det``)."""
    return int(sum(f.rank for f in prod.factors))


def scalar_blaschke_product(alphas: Sequence[complex], unimodular: complex = 1.0) -> BlaschkePotapovProduct:
    return BlaschkePotapovProduct(np.array([[unimodular]]), tuple(BPFactor(a, np.eye(1)) for a in alphas))


class RadialScaled:
    """``z -> f(r z)``."""

    def __init__(self, base: Callable, r: float):
        if not 0 <= r <= 1:
            raise InvalidRadius(f"r must lie in [0, 1], got {r}")
        self.base = base
        self.r = float(r)

    def __call__(self, z: complex) -> np.ndarray:
        return self.base(self.r * z)

    def evaluate_many(self, zs) -> np.ndarray:
        return evaluate_on(self.base, self.r * np.asarray(zs, dtype=np.complex128).ravel())


def radial_scale(f: Callable, r: float) -> RadialScaled:
    return RadialScaled(f, r)


def radial_colligation(col: Colligation, r: float) -> Colligation:
    """Realization of ``F(r z)``: ``[[A, r B], [C, r D]]``."""
    if not 0 <= r <= 1:
        raise InvalidRadius(f"r must lie in [0, 1], got {r}")
    return Colligation(col.a, r * col.b, col.c, r * col.d_block)


def evaluate_avoiding_poles(f: Callable, pts: np.ndarray) -> np.ndarray:
    try:
        return evaluate_on(f, pts)
    except NumericalFailure:
        pass
    vals = []
    for z in pts:
        try:
            vals.append(np.atleast_2d(f(z)))
        except NumericalFailure:
            vals.append(np.atleast_2d(f(z * np.exp(1j * POLE_ROTATION))))
    return np.array(vals, dtype=np.complex128)


def boundary_unitarity_defects(f: Callable, grid: CircleGrid | int = 256) -> np.ndarray:
    """``||f(zeta)^* f(zeta) - I||`` at each grid point (pole points nudged by 1e-9 rad)."""
    if isinstance(grid, int):
        grid = CircleGrid(grid)
    vals = evaluate_avoiding_poles(f, np.asarray(grid.points))
    eye = np.eye(vals.shape[1])
    g1 = np.linalg.norm(adj(vals) @ vals - eye, 2, axis=(1, 2))
    return g1


def is_inner_on_circle(f: Callable, grid: CircleGrid | int = 256, tol: float = 1e-8) -> Check:
    defect = float(boundary_unitarity_defects(f, grid).max())
    return Check(bool(defect <= tol), defect)


def random_projection(n: int, rank: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    q, _ = np.linalg.qr(g)
    return q @ adj(q)


def random_inner(n: int, m_factors: int, seed, alpha_bound: float = 0.8) -> BlaschkePotapovProduct:
    """Seeded product with zeros in ``|alpha| <= alpha_bound`` and random-rank projections."""
    rng = np.random.default_rng(seed)
    u = random_unitary(n, rng)
    factors = []
    for _ in range(m_factors):
        alpha = alpha_bound * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        rank = int(rng.integers(1, n + 1))
        factors.append(BPFactor(alpha, random_projection(n, rank, rng)))
    return BlaschkePotapovProduct(u, tuple(factors))
