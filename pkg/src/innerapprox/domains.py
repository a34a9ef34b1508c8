"""Symmetrized bidisc and tetrablock: membership tests and inner approximation pipelines.

``Gamma`` is described by ``|s| <= 2`` and ``|s - conj(s) p| <= 1 - |p|^2``; the
tetrablock by ``|x1 - conj(x2) x3| + |x2 - conj(x1) x3| <= 1 - |x3|^2``.  A
contractive 2x2 ``F`` yields ``h = (tr F, det F)`` and ``x = (F11, F22, det F)``;
inner approximants ``F_m`` give rational maps sending the circle into the
distinguished boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .core import CircleGrid, Colligation, MatrixPolynomial, evaluate_on
from .dilation import inner_approximant_disc
from .errors import DimensionMismatch
from .potapov import BlaschkePotapovProduct, evaluate_avoiding_poles
from .realization import contractive_polynomial, realize_contractive

MEMBER_TOL = 1e-10
BOUNDARY_TOL = 1e-7


@dataclass(frozen=True)
class GammaPoint:
    s: complex
    p: complex


@dataclass(frozen=True)
class TetraPoint:
    x1: complex
    x2: complex
    x3: complex


def gamma_margins(s, p) -> tuple[np.ndarray, np.ndarray]:
    """``(|s| - 2, |s - conj(s) p| - (1 - |p|^2))``; both non-positive on the closed set."""
    s = np.asarray(s, dtype=np.complex128)
    p = np.asarray(p, dtype=np.complex128)
    return np.abs(s) - 2.0, np.abs(s - np.conj(s) * p) - (1.0 - np.abs(p) ** 2)


def in_gamma(pt: GammaPoint, closed: bool = True, tol: float = MEMBER_TOL) -> bool:
    m1, m2 = gamma_margins(pt.s, pt.p)
    if closed:
        return bool(m1 <= tol and m2 <= tol)
    return bool(m1 < -tol and m2 < -tol)


def on_bgamma(pt: GammaPoint, tol: float = MEMBER_TOL) -> bool:
    s, p = complex(pt.s), complex(pt.p)
    return bool(abs(s) <= 2 + tol and abs(abs(p) - 1) <= tol and abs(s - np.conj(s) * p) <= tol)


def tetra_margin(x1, x2, x3) -> np.ndarray:
    x1, x2, x3 = (np.asarray(v, dtype=np.complex128) for v in (x1, x2, x3))
    lhs = np.abs(x1 - np.conj(x2) * x3) + np.abs(x2 - np.conj(x1) * x3)
    return lhs - (1.0 - np.abs(x3) ** 2)


def in_tetra(pt: TetraPoint, closed: bool = True, tol: float = MEMBER_TOL) -> bool:
    m = tetra_margin(pt.x1, pt.x2, pt.x3)
    return bool(m <= tol) if closed else bool(m < -tol)


def on_btetra(pt: TetraPoint, tol: float = MEMBER_TOL) -> bool:
    x1, x2, x3 = complex(pt.x1), complex(pt.x2), complex(pt.x3)
    return bool(abs(x1 - np.conj(x2) * x3) <= tol and abs(abs(x3) - 1) <= tol and abs(x2) <= 1 + tol)


def gamma_boundary_defect(s, p) -> np.ndarray:
    """Largest violation of the three distinguished-boundary conditions, per point."""
    s = np.asarray(s, dtype=np.complex128)
    p = np.asarray(p, dtype=np.complex128)
    return np.maximum.reduce([np.clip(np.abs(s) - 2, 0, None), np.abs(np.abs(p) - 1), np.abs(s - np.conj(s) * p)])


def tetra_boundary_defect(x1, x2, x3) -> np.ndarray:
    x1, x2, x3 = (np.asarray(v, dtype=np.complex128) for v in (x1, x2, x3))
    return np.maximum.reduce([np.abs(x1 - np.conj(x2) * x3), np.abs(np.abs(x3) - 1), np.clip(np.abs(x2) - 1, 0, None)])


def gamma_coordinates(vals: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``(tr F, det F)`` for a stack of 2x2 values."""
    return np.trace(vals, axis1=1, axis2=2), np.linalg.det(vals)


def tetra_coordinates(vals: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return vals[:, 0, 0], vals[:, 1, 1], np.linalg.det(vals)


class GammaMap:
    """``z -> (tr F(z), det F(z))`` returned as an ``(n, 2)`` array."""

    def __init__(self, f, m: int | None = None):
        self.f, self.m = f, m

    def evaluate_many(self, zs) -> np.ndarray:
        s, p = gamma_coordinates(evaluate_on(self.f, np.asarray(zs, dtype=np.complex128).ravel()))
        return np.stack([s, p], axis=1)

    def __call__(self, z: complex) -> GammaPoint:
        s, p = self.evaluate_many(np.array([z]))[0]
        return GammaPoint(complex(s), complex(p))

    def boundary_defect(self, grid: CircleGrid | int = 256) -> float:
        """Worst distinguished-boundary violation on the circle (removable singularities nudged)."""
        pts = (CircleGrid(grid) if isinstance(grid, int) else grid).points
        s, p = gamma_coordinates(evaluate_avoiding_poles(self.f, pts))
        return float(gamma_boundary_defect(s, p).max())


class TetraMap:
    """``z -> (F11(z), F22(z), det F(z))`` returned as an ``(n, 3)`` array."""

    def __init__(self, f, m: int | None = None):
        self.f, self.m = f, m

    def evaluate_many(self, zs) -> np.ndarray:
        return np.stack(tetra_coordinates(evaluate_on(self.f, np.asarray(zs, dtype=np.complex128).ravel())), axis=1)

    def __call__(self, z: complex) -> TetraPoint:
        x1, x2, x3 = self.evaluate_many(np.array([z]))[0]
        return TetraPoint(complex(x1), complex(x2), complex(x3))

    def boundary_defect(self, grid: CircleGrid | int = 256) -> float:
        """Worst distinguished-boundary violation on the circle (removable singularities nudged)."""
        pts = (CircleGrid(grid) if isinstance(grid, int) else grid).points
        x1, x2, x3 = tetra_coordinates(evaluate_avoiding_poles(self.f, pts))
        return float(tetra_boundary_defect(x1, x2, x3).max())

    def component_degrees(self) -> tuple[int, int, int] | None:
        """State dimension bound for each coordinate when ``F`` is a colligation."""
        if isinstance(self.f, Colligation):
            d = self.f.n_state
            return (d, d, 2 * d)
        return None


def _two_by_two_colligation(f, degree: int) -> Colligation:
    if isinstance(f, Colligation):
        col = f
    elif isinstance(f, BlaschkePotapovProduct):
        col = f.as_colligation()
    elif isinstance(f, MatrixPolynomial):
        col = realize_contractive(f)
    else:
        col = realize_contractive(contractive_polynomial(f, degree))
    if col.n_out != 2:
        raise DimensionMismatch("Gamma and tetrablock pipelines need 2x2 functions")
    return col


def gamma_inner_approximate(f, ms: int | Iterable[int] = 8, degree: int = 12) -> list[GammaMap]:
    """``h_m = (tr F_m, det F_m)`` for the depth-``m`` inner approximants of ``F``."""
    col = _two_by_two_colligation(f, degree)
    ms = [ms] if isinstance(ms, int) else list(ms)
    return [GammaMap(inner_approximant_disc(col, m), m) for m in ms]


def tetra_inner_approximate(f, ms: int | Iterable[int] = 8, degree: int = 12) -> list[TetraMap]:
    """``x_m = ((F_m)_11, (F_m)_22, det F_m)``."""
    col = _two_by_two_colligation(f, degree)
    ms = [ms] if isinstance(ms, int) else list(ms)
    return [TetraMap(inner_approximant_disc(col, m), m) for m in ms]
