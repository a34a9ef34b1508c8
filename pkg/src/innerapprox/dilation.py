"""Finite unitary dilation of a contractive colligation and its inner approximants.

For a contraction ``T = [[A, B], [C, D]]`` on ``H = C^N (+) C^d`` the depth-``m``
dilation acts on ``m + 1`` copies of ``H``::

    U_m = [[T,   0, ..., 0, D_{T*}],
           [D_T, 0, ..., 0, -T^*  ],
           [0,   I,           0   ],
           [           ...        ],
           [0,   ...,    I,   0   ]]

Splitting off the first ``C^N`` gives ``U_m = [[A, B_m], [C_m, D_m]]`` and the
rational inner function ``F_m(z) = A + z B_m (I - z D_m)^{-1} C_m``, whose
Taylor coefficients agree with those of ``F`` through index ``m - 2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import (
    BidiscSplit,
    Colligation,
    adj,
    defect_operators,
    operator_norm,
    transfer_on_points,
)
from .errors import DepthTooSmall, IndexOutOfRange, InvalidRadius, NotContractive

MIN_DEPTH = 3


@dataclass(frozen=True, eq=False)
class DilatedColligation:
    m: int
    base: Colligation
    unitary: Colligation

    @property
    def n_out(self) -> int:
        return self.base.n_out

    @property
    def base_state(self) -> int:
        return self.base.n_state

    @property
    def a(self) -> np.ndarray:
        return self.unitary.a

    @property
    def b_m(self) -> np.ndarray:
        return self.unitary.b

    @property
    def c_m(self) -> np.ndarray:
        return self.unitary.c

    @property
    def d_m(self) -> np.ndarray:
        return self.unitary.d_block

    @property
    def u_m(self) -> np.ndarray:
        return self.unitary.system_matrix

    @property
    def k_dim(self) -> int:
        n, d = self.n_out, self.base_state
        return d + (self.m - 1) * (n + d) + n + d


@dataclass(frozen=True)
class TailBound:
    rho: float
    m: int
    bound: float


def unitary_dilation(col: Colligation, m: int) -> DilatedColligation:
    if m < MIN_DEPTH:
        raise DepthTooSmall(f"dilation depth must be at least {MIN_DEPTH}, got {m}")
    t = col.system_matrix
    if operator_norm(t) > 1 + 1e-10:
        raise NotContractive(f"system matrix norm {operator_norm(t):.16g} exceeds 1")
    d_t, d_tstar = defect_operators(t)
    h = t.shape[0]
    u = np.zeros(((m + 1) * h, (m + 1) * h), dtype=np.complex128)
    last = slice(m * h, (m + 1) * h)
    u[:h, :h] = t
    u[:h, last] = d_tstar
    u[h:2 * h, :h] = d_t
    u[h:2 * h, last] = -adj(t)
    for j in range(1, m):
        u[(j + 1) * h:(j + 2) * h, j * h:(j + 1) * h] = np.eye(h)
    return DilatedColligation(m=m, base=col, unitary=Colligation.from_system_matrix(u, col.n_out))


def unitarity_defect(dil: DilatedColligation) -> float:
    u = dil.u_m
    eye = np.eye(u.shape[0])
    return max(operator_norm(adj(u) @ u - eye), operator_norm(u @ adj(u) - eye))


def moment(col: Colligation, k: int) -> np.ndarray:
    """``B D^k C``, the Taylor coefficient of ``z^{k+1}``."""
    x = col.c
    for _ in range(k):
        x = col.d_block @ x
    return col.b @ x


def moment_defect(col: Colligation, dil: DilatedColligation, k: int) -> float:
    return operator_norm(moment(dil.unitary, k) - moment(col, k))


def verify_power_dilation(col: Colligation, dil: DilatedColligation, j: int) -> float:
    """``|| P_H U_m^j |_H - T^j ||`` with ``H`` the first ``N + d`` coordinates."""
    if not 1 <= j <= dil.m:
        raise IndexOutOfRange(f"power {j} outside 1..{dil.m}")
    h = col.n_out + col.n_state
    t = col.system_matrix
    u = dil.u_m
    uj = np.linalg.matrix_power(u, j)[:h, :h]
    return operator_norm(uj - np.linalg.matrix_power(t, j))


def inner_approximant_disc(col: Colligation, m: int) -> Colligation:
    """The unitary colligation ``[[A, B_m], [C_m, D_m]]``; call it to evaluate ``F_m``."""
    return unitary_dilation(col, m).unitary


class BidiscTransfer:
    """``(z1, z2) -> A + B Z (I - D Z)^{-1} C`` for a diagonal ``Z`` pattern."""

    def __init__(self, col: Colligation, pattern: np.ndarray):
        self.col = col
        self.pattern = np.asarray(pattern, dtype=int)
        if self.pattern.size != col.n_state:
            raise ValueError("pattern length must equal the state dimension")

    def _zdiag(self, z1, z2):
        return np.where(self.pattern == 1, z1, z2).astype(np.complex128)

    def __call__(self, z1: complex, z2: complex) -> np.ndarray:
        col = self.col
        if col.n_state == 0:
            return col.a.copy()
        zd = self._zdiag(z1, z2)
        m = np.eye(col.n_state) - col.d_block * zd[None, :]
        return col.a + (col.b * zd[None, :]) @ np.linalg.solve(m, col.c)

    def evaluate_many(self, pairs) -> np.ndarray:
        pairs = np.asarray(pairs, dtype=np.complex128).reshape(-1, 2)
        col = self.col
        n, d = col.n_out, col.n_state
        if d == 0:
            return np.broadcast_to(col.a, (len(pairs), n, n)).copy()
        zd = np.where(self.pattern[None, :] == 1, pairs[:, :1], pairs[:, 1:])
        m = np.eye(d)[None] - col.d_block[None] * zd[:, None, :]
        x = np.linalg.solve(m, np.broadcast_to(col.c, (len(pairs), d, n)))
        return col.a[None] + (col.b[None] * zd[:, None, :]) @ x


def bidisc_transfer(col: Colligation, split: BidiscSplit) -> BidiscTransfer:
    split.check(col)
    return BidiscTransfer(col, np.r_[np.ones(split.d1, int), 2 * np.ones(split.d2, int)])


def inner_approximant_bidisc(col: Colligation, split: BidiscSplit, m: int) -> BidiscTransfer:
    """``F_m(z1, z2)`` with ``Z_m = diag(Z, z1 I)``; every extra coordinate carries ``z1``."""
    split.check(col)
    dil = unitary_dilation(col, m)
    extra = dil.k_dim - col.n_state
    pattern = np.r_[np.ones(split.d1, int), 2 * np.ones(split.d2, int), np.ones(extra, int)]
    return BidiscTransfer(dil.unitary, pattern)


def bidisc_moment(col: Colligation, pattern, z1: complex, z2: complex, k: int) -> np.ndarray:
    """``B Z (D Z)^k C`` at a point."""
    zd = np.where(np.asarray(pattern) == 1, z1, z2).astype(np.complex128)
    x = col.c
    for _ in range(k):
        x = col.d_block @ (zd[:, None] * x)
    return (col.b * zd[None, :]) @ x


def tail_bound(rho: float, m: int) -> TailBound:
    """``2 rho^m / (1 - rho)``: bound on ``sup_{|z|<=rho} ||F - F_m||``."""
    if not 0 <= rho < 1:
        raise InvalidRadius(f"rho must lie in [0, 1), got {rho}")
    return TailBound(rho=rho, m=m, bound=2.0 * rho ** m / (1.0 - rho))


def grid_error(f: Callable, g: Callable, rho: float, size: int = 256) -> float:
    """Sampled ``sup_{|z| = rho} ||f(z) - g(z)||`` (the maximum over ``|z| <= rho`` by max modulus)."""
    zs = rho * np.exp(2j * np.pi * np.arange(size) / size)
    fv = f.evaluate_many(zs) if hasattr(f, "evaluate_many") else np.array([f(z) for z in zs])
    gv = g.evaluate_many(zs) if hasattr(g, "evaluate_many") else np.array([g(z) for z in zs])
    return float(np.linalg.norm(fv - gv, 2, axis=(1, 2)).max())


def circle_unitarity_defect(f: Colligation, size: int = 256) -> float:
    zs = np.exp(2j * np.pi * (np.arange(size) + 0.5) / size)
    vals = transfer_on_points(f, zs)
    eye = np.eye(vals.shape[1])
    return float(np.linalg.norm(adj(vals) @ vals - eye, 2, axis=(1, 2)).max())
