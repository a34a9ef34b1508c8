"""JSON encoding of matrices, colligations, polynomials, products and combinations.

A complex scalar is ``[re, im]``; a matrix is ``{"rows", "cols", "data"}`` with
``data`` the row-major list of scalars.  Floats are written with ``repr``
precision so every file round-trips exactly.
"""

from __future__ import annotations

import json
import os
import tempfile
from typing import Any

import numpy as np

from .core import Colligation, MatrixPolynomial
from .dilation import DilatedColligation
from .errors import ParseError
from .hull import ConvexCombination, DiscGrid
from .potapov import BlaschkePotapovProduct, BPFactor


def complex_to_json(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def complex_from_json(v) -> complex:
    if not (isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v)):
        raise ParseError(f"complex scalar must be [re, im], got {v!r}")
    z = complex(float(v[0]), float(v[1]))
    if not np.isfinite(z):
        raise ParseError("non-finite complex scalar")
    return z


def matrix_to_json(m) -> dict:
    m = np.atleast_2d(np.asarray(m, dtype=np.complex128))
    return {"rows": int(m.shape[0]), "cols": int(m.shape[1]), "data": [complex_to_json(z) for z in m.ravel()]}


def matrix_from_json(obj) -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"matrix needs rows, cols and data: {exc}") from exc
    if rows < 0 or cols < 0 or not isinstance(data, list) or len(data) != rows * cols:
        raise ParseError(f"matrix data length {len(data) if isinstance(data, list) else '?'} != {rows}x{cols}")
    return np.array([complex_from_json(v) for v in data], dtype=np.complex128).reshape(rows, cols)


def colligation_to_json(col: Colligation) -> dict:
    return {
        "N": col.n_out,
        "d": col.n_state,
        "A": matrix_to_json(col.a),
        "B": matrix_to_json(col.b),
        "C": matrix_to_json(col.c),
        "D": matrix_to_json(col.d_block),
    }


def colligation_from_json(obj) -> Colligation:
    try:
        n, d = int(obj["N"]), int(obj["d"])
        blocks = [matrix_from_json(obj[k]) for k in "ABCD"]
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"colligation needs N, d, A, B, C, D: {exc}") from exc
    a, b, c, dm = blocks
    # empty blocks may be written as 0x0 or with one zero dimension
    b = b.reshape(n, d) if b.size == 0 else b
    c = c.reshape(d, n) if c.size == 0 else c
    dm = dm.reshape(d, d) if dm.size == 0 else dm
    shapes = [(a.shape, (n, n)), (b.shape, (n, d)), (c.shape, (d, n)), (dm.shape, (d, d))]
    for got, want in shapes:
        if got != want:
            raise ParseError(f"colligation block has shape {got}, expected {want}")
    return Colligation(a, b, c, dm)


def polynomial_to_json(p: MatrixPolynomial) -> dict:
    return {"N": p.n, "coeffs": [matrix_to_json(c) for c in p.coeffs]}


def polynomial_from_json(obj) -> MatrixPolynomial:
    try:
        n = int(obj["N"])
        coeffs = [matrix_from_json(c) for c in obj["coeffs"]]
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"polynomial needs N and coeffs: {exc}") from exc
    if not coeffs or any(c.shape != (n, n) for c in coeffs):
        raise ParseError(f"polynomial coefficients must be non-empty {n}x{n} matrices")
    return MatrixPolynomial(np.stack(coeffs))


def product_to_json(prod: BlaschkePotapovProduct) -> dict:
    return {
        "N": prod.n,
        "U": matrix_to_json(prod.unitary),
        "factors": [{"alpha": complex_to_json(f.alpha), "P": matrix_to_json(f.proj)} for f in prod.factors],
    }


def product_from_json(obj) -> BlaschkePotapovProduct:
    try:
        n = int(obj["N"])
        u = matrix_from_json(obj["U"])
        factors = tuple(BPFactor(complex_from_json(f["alpha"]), matrix_from_json(f["P"])) for f in obj["factors"])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"product needs N, U and factors: {exc}") from exc
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    if u.shape != (n, n):
        raise ParseError(f"U has shape {u.shape}, expected {(n, n)}")
    try:
        return BlaschkePotapovProduct(u, factors)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def dilation_to_json(dil: DilatedColligation) -> dict:
    out = {"m": dil.m}
    out.update(colligation_to_json(dil.unitary))
    out["base"] = colligation_to_json(dil.base)
    return out


def combination_to_json(comb: ConvexCombination) -> dict:
    return {
        "weights": [float(w) for w in comb.weights],
        "atoms": [function_to_json(a) for a in comb.atoms],
        "residual": float(comb.residual),
        "grid": comb.grid.to_dict(),
    }


def combination_from_json(obj) -> ConvexCombination:
    try:
        weights = [float(w) for w in obj["weights"]]
        atoms = [function_from_json(a) for a in obj["atoms"]]
        grid = DiscGrid(int(obj["grid"]["size"]), tuple(float(r) for r in obj["grid"]["radii"]))
        residual = float(obj["residual"])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"combination needs weights, atoms, residual and grid: {exc}") from exc
    return ConvexCombination(np.array(weights), atoms, residual, grid)


def function_to_json(f) -> dict:
    if isinstance(f, Colligation):
        return colligation_to_json(f)
    if isinstance(f, MatrixPolynomial):
        return polynomial_to_json(f)
    if isinstance(f, BlaschkePotapovProduct):
        return product_to_json(f)
    if isinstance(f, ConvexCombination):
        return combination_to_json(f)
    if isinstance(f, DilatedColligation):
        return dilation_to_json(f)
    raise TypeError(f"cannot encode {type(f).__name__}")


def function_from_json(obj) -> Any:
    """Decode any of the function formats, dispatching on its keys."""
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object")
    if "weights" in obj:
        return combination_from_json(obj)
    if "factors" in obj:
        return product_from_json(obj)
    if "coeffs" in obj:
        return polynomial_from_json(obj)
    if "A" in obj:
        return colligation_from_json(obj)
    raise ParseError(f"unrecognised function object with keys {sorted(obj)}")


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=1) + "\n"


def load(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc
    return function_from_json(obj)


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the target directory followed by a rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save(path: str, f) -> None:
    write_atomic(path, dumps(function_to_json(f)))
