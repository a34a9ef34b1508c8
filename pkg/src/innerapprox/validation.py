"""Input validation helpers shared by the estimators and the CLI."""

from __future__ import annotations

import numpy as np

from .errors import DepthTooSmall, DimensionMismatch, InvalidRadius


def check_points(zs, closed: bool = True, allow_pairs: bool = False) -> np.ndarray:
    """Return evaluation points as a complex array inside the (closed) unit disc.

    Single points come back 1-D; with ``allow_pairs`` an ``(n, 2)`` array of
    bidisc points is accepted as well.
    """
    z = np.asarray(zs, dtype=np.complex128)
    if z.ndim == 0:
        z = z.reshape(1)
    if allow_pairs and z.ndim == 2 and z.shape[1] == 2:
        pass
    elif z.ndim != 1:
        z = z.ravel()
    if not np.all(np.isfinite(z)):
        raise ValueError("points must be finite")
    mod = np.abs(z)
    bad = mod > 1 + 1e-12 if closed else mod >= 1
    if np.any(bad):
        raise InvalidRadius(f"point of modulus {mod.max():.6g} outside the {'closed' if closed else 'open'} disc")
    return z


def check_matrix_stack(x, n: int | None = None, square: bool = True) -> np.ndarray:
    """Return ``x`` as an ``(k, N, N)`` complex stack; a single matrix gains a leading axis."""
    a = np.asarray(x, dtype=np.complex128)
    if a.ndim == 2:
        a = a[None]
    if a.ndim != 3:
        raise DimensionMismatch(f"expected a stack of matrices, got shape {a.shape}")
    if square and a.shape[1] != a.shape[2]:
        raise DimensionMismatch(f"matrices must be square, got {a.shape[1:]}")
    if n is not None and a.shape[1] != n:
        raise DimensionMismatch(f"matrices are {a.shape[1]}x{a.shape[2]}, expected {n}x{n}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix stack has non-finite entries")
    return a


def check_depth(m: int, minimum: int = 3) -> int:
    if int(m) != m or m < minimum:
        raise DepthTooSmall(f"depth must be an integer >= {minimum}, got {m}")
    return int(m)


def check_unit_interval(x: float, name: str, open_left: bool = True, open_right: bool = True) -> float:
    x = float(x)
    lo_ok = x > 0 if open_left else x >= 0
    hi_ok = x < 1 if open_right else x <= 1
    if not (lo_ok and hi_ok and np.isfinite(x)):
        raise ValueError(f"{name} must lie in the unit interval, got {x}")
    return x
