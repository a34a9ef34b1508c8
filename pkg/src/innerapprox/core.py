"""Dense complex matrix kernel: colligations, matrix polynomials, grids, norms.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  The containers
below are frozen dataclasses whose arrays are copied and marked read-only, so
they can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .errors import (
    DimensionMismatch,
    NotContractive,
    NotSquare,
    SingularResolvent,
)

RESOLVENT_COND_LIMIT = 1e13
PSD_CLIP_TOL = 1e-12


def as_matrix(m, rows: int | None = None, cols: int | None = None, name: str = "matrix") -> np.ndarray:
    """Return ``m`` as a finite complex 2-D array, optionally checking its shape."""
    a = np.array(m, dtype=np.complex128)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {a.shape}")
    if rows is not None and a.shape[0] != rows:
        raise DimensionMismatch(f"{name} has {a.shape[0]} rows, expected {rows}")
    if cols is not None and a.shape[1] != cols:
        raise DimensionMismatch(f"{name} has {a.shape[1]} cols, expected {cols}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, copy=True)
    a.flags.writeable = False
    return a


def adj(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


# ---------------------------------------------------------------------------
# Containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Colligation:
    """System matrix ``[[A, B], [C, D]]`` on ``C^N (+) C^d``.

    Its transfer function is ``F(z) = A + z B (I - z D)^{-1} C``.
    """

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d_block: np.ndarray

    def __post_init__(self):
        a = as_matrix(self.a, name="A")
        n = a.shape[0]
        if a.shape[1] != n:
            raise NotSquare("A must be square")
        dblk = np.array(self.d_block, dtype=np.complex128)
        if dblk.size == 0:
            dblk = np.zeros((0, 0), dtype=np.complex128)
        d = dblk.shape[0]
        if dblk.ndim != 2 or dblk.shape != (d, d):
            raise NotSquare("D must be square")
        b = np.array(self.b, dtype=np.complex128)
        c = np.array(self.c, dtype=np.complex128)
        if b.size != n * d or c.size != d * n:
            raise DimensionMismatch(f"B and C must be {n}x{d} and {d}x{n}")
        b, c = b.reshape(n, d), c.reshape(d, n)
        for name, m in (("B", b), ("C", c), ("D", dblk)):
            if not np.all(np.isfinite(m)):
                raise ValueError(f"{name} has non-finite entries")
        object.__setattr__(self, "a", _frozen(a))
        object.__setattr__(self, "b", _frozen(b))
        object.__setattr__(self, "c", _frozen(c))
        object.__setattr__(self, "d_block", _frozen(dblk))

    @classmethod
    def from_system_matrix(cls, t, n_out: int) -> "Colligation":
        t = as_matrix(t, name="T")
        if t.shape[0] != t.shape[1]:
            raise NotSquare("system matrix must be square")
        n = n_out
        return cls(t[:n, :n], t[:n, n:], t[n:, :n], t[n:, n:])

    @property
    def n_out(self) -> int:
        return self.a.shape[0]

    @property
    def n_state(self) -> int:
        return self.d_block.shape[0]

    @property
    def degree(self) -> int:
        return self.n_state

    @property
    def system_matrix(self) -> np.ndarray:
        return np.block([[self.a, self.b], [self.c, self.d_block]])

    def __call__(self, z: complex) -> np.ndarray:
        return eval_transfer_disc(self, z)

    def evaluate_many(self, zs) -> np.ndarray:
        return transfer_on_points(self, zs)


@dataclass(frozen=True, eq=False)
class MatrixPolynomial:
    """``sum_k coeffs[k] z^k`` with ``N x N`` coefficients, constant term first."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128)
        if c.ndim == 2:
            c = c[None]
        if c.ndim != 3 or c.shape[1] != c.shape[2] or c.shape[0] == 0:
            raise DimensionMismatch(f"coefficients must have shape (deg+1, N, N), got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("polynomial has non-finite coefficients")
        object.__setattr__(self, "coeffs", _frozen(c))

    @property
    def n(self) -> int:
        return self.coeffs.shape[1]

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    def __call__(self, z: complex) -> np.ndarray:
        return eval_polynomial(self, z)

    def evaluate_many(self, zs) -> np.ndarray:
        zs = np.asarray(zs, dtype=np.complex128).ravel()
        out = np.zeros((zs.size, self.n, self.n), dtype=np.complex128)
        out[:] = self.coeffs[-1]
        for ck in self.coeffs[-2::-1]:
            out = out * zs[:, None, None] + ck
        return out


@dataclass(frozen=True)
class BidiscSplit:
    d1: int
    d2: int

    def __post_init__(self):
        if self.d1 < 0 or self.d2 < 0:
            raise DimensionMismatch("split sizes must be non-negative")

    def check(self, col: Colligation) -> None:
        if self.d1 + self.d2 != col.n_state:
            raise DimensionMismatch(
                f"split {self.d1}+{self.d2} does not match state dimension {col.n_state}"
            )

    def diagonal(self, z1: complex, z2: complex) -> np.ndarray:
        return np.concatenate([np.full(self.d1, z1, dtype=np.complex128),
                               np.full(self.d2, z2, dtype=np.complex128)])


@dataclass(frozen=True, eq=False)
class CircleGrid:
    """``size`` equispaced points ``exp(2 pi i j / size)``, optionally rotated."""

    size: int
    offset: float = 0.0
    points: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("grid size must be positive")
        theta = 2.0 * np.pi * (np.arange(self.size) + self.offset) / self.size
        object.__setattr__(self, "points", _frozen(np.exp(1j * theta)))

    def __len__(self) -> int:
        return self.size


@dataclass(frozen=True, eq=False)
class TorusGrid:
    """Product grid ``CircleGrid(n1) x CircleGrid(n2)`` as an array of pairs."""

    n1: int
    n2: int
    offset: float = 0.0
    points: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        g1 = CircleGrid(self.n1, self.offset).points
        g2 = CircleGrid(self.n2, self.offset).points
        pts = np.stack(np.meshgrid(g1, g2, indexing="ij"), axis=-1).reshape(-1, 2)
        object.__setattr__(self, "points", _frozen(pts))

    @property
    def size(self) -> int:
        return self.n1 * self.n2

    def __len__(self) -> int:
        return self.size


class SupNormEstimate(NamedTuple):
    value: float
    grid_size: int


class Check(NamedTuple):
    ok: bool
    defect: float


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def _resolvent_solve(m: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    if m.shape[0] == 0:
        return rhs
    cond = np.linalg.cond(m)
    if not np.isfinite(cond) or cond > RESOLVENT_COND_LIMIT:
        raise SingularResolvent(f"resolvent condition number {cond:.3e} exceeds {RESOLVENT_COND_LIMIT:.0e}")
    return np.linalg.solve(m, rhs)


def eval_transfer_disc(col: Colligation, z: complex) -> np.ndarray:
    """``A + z B (I - z D)^{-1} C``."""
    d = col.n_state
    if d == 0:
        return col.a.copy()
    x = _resolvent_solve(np.eye(d) - z * col.d_block, col.c)
    return col.a + z * (col.b @ x)


def eval_transfer_bidisc(col: Colligation, split: BidiscSplit, z1: complex, z2: complex) -> np.ndarray:
    """``A + B Z (I - D Z)^{-1} C`` with ``Z = z1 I_{d1} (+) z2 I_{d2}``."""
    split.check(col)
    if col.n_state == 0:
        return col.a.copy()
    zdiag = split.diagonal(z1, z2)
    m = np.eye(col.n_state) - col.d_block * zdiag[None, :]
    x = _resolvent_solve(m, col.c)
    return col.a + (col.b * zdiag[None, :]) @ x


def transfer_on_points(col: Colligation, zs) -> np.ndarray:
    """Vectorised ``eval_transfer_disc`` over a 1-D array of points."""
    zs = np.asarray(zs, dtype=np.complex128).ravel()
    n, d = col.n_out, col.n_state
    if d == 0:
        return np.broadcast_to(col.a, (zs.size, n, n)).copy()
    m = np.eye(d)[None] - zs[:, None, None] * col.d_block[None]
    cond = np.linalg.cond(m)
    if not np.all(np.isfinite(cond)) or np.any(cond > RESOLVENT_COND_LIMIT):
        bad = zs[~(np.isfinite(cond) & (cond <= RESOLVENT_COND_LIMIT))][0]
        raise SingularResolvent(f"resolvent singular near z={bad}")
    x = np.linalg.solve(m, np.broadcast_to(col.c, (zs.size, d, n)))
    return col.a[None] + zs[:, None, None] * (col.b[None] @ x)


def eval_polynomial(p: MatrixPolynomial, z: complex) -> np.ndarray:
    """Horner evaluation."""
    out = p.coeffs[-1].copy()
    for ck in p.coeffs[-2::-1]:
        out = out * z + ck
    return out


def evaluate_on(f: Callable, points) -> np.ndarray:
    """Evaluate a pointwise matrix function on many points, as an ``(n, N, N)`` stack."""
    many = getattr(f, "evaluate_many", None)
    if many is not None:
        return many(points)
    pts = np.asarray(points)
    if pts.ndim == 2 and pts.shape[1] == 2:
        vals = [f(z1, z2) for z1, z2 in pts]
    else:
        vals = [f(z) for z in pts.ravel()]
    return np.array([np.atleast_2d(v) for v in vals], dtype=np.complex128)


# ---------------------------------------------------------------------------
# Norms, defects, checks
# ---------------------------------------------------------------------------


def operator_norm(m) -> float:
    m = np.asarray(m, dtype=np.complex128)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(np.atleast_2d(m), 2))


def psd_sqrt(h: np.ndarray, clip_tol: float = PSD_CLIP_TOL) -> np.ndarray:
    """Square root of a Hermitian PSD matrix; eigenvalues below ``clip_tol`` become 0."""
    h = (h + adj(h)) / 2
    w, v = np.linalg.eigh(h)
    w = np.where(w < clip_tol, 0.0, w)
    return (v * np.sqrt(w)) @ adj(v)


def defect_operators(t) -> tuple[np.ndarray, np.ndarray]:
    """Return ``((I - t*t)^{1/2}, (I - tt*)^{1/2})``."""
    t = as_matrix(t, name="t")
    if t.shape[0] != t.shape[1]:
        raise NotSquare("defect operators need a square matrix")
    nt = operator_norm(t)
    if nt > 1 + 1e-10:
        raise NotContractive(f"norm {nt:.16g} exceeds 1")
    eye = np.eye(t.shape[0])
    return psd_sqrt(eye - adj(t) @ t), psd_sqrt(eye - t @ adj(t))


def sup_norm_estimate(f: Callable, grid) -> SupNormEstimate:
    """Sampled maximum of the operator norm of ``f`` over a circle or torus grid.

    This is a lower estimate of the true supremum; the grid size is reported
    with the value.
    """
    pts = grid.points if hasattr(grid, "points") else np.asarray(grid)
    vals = evaluate_on(f, pts)
    norms = np.linalg.norm(vals, 2, axis=(1, 2))
    return SupNormEstimate(float(norms.max()), len(pts))


def is_contraction(m, tol: float = 1e-12) -> Check:
    s = operator_norm(m)
    return Check(bool(s <= 1 + tol), s - 1.0)


def is_unitary(m, tol: float = 1e-12) -> Check:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise NotSquare("unitarity needs a square matrix")
    eye = np.eye(m.shape[0])
    defect = max(operator_norm(adj(m) @ m - eye), operator_norm(m @ adj(m) - eye))
    return Check(bool(defect <= tol), defect)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the QR of a complex Gaussian matrix."""
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(g)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph[None, :]


def random_contraction(n: int, rng: np.random.Generator, norm: float = 1.0) -> np.ndarray:
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return norm * g / operator_norm(g)


def random_colligation(n_out: int, n_state: int, seed, norm: float = 1.0) -> Colligation:
    """Colligation whose system matrix is a random contraction of the given norm."""
    rng = np.random.default_rng(seed)
    t = random_contraction(n_out + n_state, rng, norm)
    return Colligation.from_system_matrix(t, n_out)


# ---------------------------------------------------------------------------
# Colligation algebra (all operations preserve unitarity of the system matrix)
# ---------------------------------------------------------------------------


def cascade(left: Colligation, right: Colligation) -> Colligation:
    """Realization of the pointwise product ``left(z) @ right(z)``."""
    if left.n_out != right.n_out:
        raise DimensionMismatch("cascade needs equal port sizes")
    a1, b1, c1, d1 = left.a, left.b, left.c, left.d_block
    a2, b2, c2, d2 = right.a, right.b, right.c, right.d_block
    n1, n2 = left.n_state, right.n_state
    a = a1 @ a2
    b = np.hstack([b1, a1 @ b2])
    c = np.vstack([c1 @ a2, c2])
    d = np.block([[d1, c1 @ b2], [np.zeros((n2, n1)), d2]])
    return Colligation(a, b, c, d)


def left_multiply(u, col: Colligation) -> Colligation:
    u = as_matrix(u, col.n_out, col.n_out, name="U")
    return Colligation(u @ col.a, u @ col.b, col.c, col.d_block)


def mobius_compose(col: Colligation, c: complex) -> Colligation:
    """Realization of ``(F + cI)(I + conj(c) F)^{-1}`` for ``|c| < 1``.

    This is ``b_{-c}`` applied to ``F`` through the functional calculus; it is
    the lower fractional transform of ``F`` by the unitary
    ``[[c, s], [s, -conj(c)]]`` with ``s = sqrt(1 - |c|^2)``.
    """
    c = complex(c)
    if abs(c) >= 1:
        raise ValueError("Moebius parameter must lie in the open disc")
    s = np.sqrt(1.0 - abs(c) ** 2)
    n = col.n_out
    xi = np.linalg.inv(np.eye(n) + np.conj(c) * col.a)
    a = c * np.eye(n) + s * s * (col.a @ xi)
    b = s * (col.b - np.conj(c) * (col.a @ xi @ col.b))
    cc = s * (col.c @ xi)
    d = col.d_block - np.conj(c) * (col.c @ xi @ col.b)
    return Colligation(a, b, cc, d)


def scaled(col: Colligation, factor: float) -> Colligation:
    """Realization of ``factor * F`` (contractive when ``|factor| <= 1``)."""
    return Colligation(factor * col.a, factor * col.b, col.c, col.d_block)
