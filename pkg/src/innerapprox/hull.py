"""Convex combinations of rational inner functions with sampled sup-norm residuals.

Two constructive sources of atoms are used:

* the averaging identity ``mean_j b_{-s w_j}(g) = (1 - s^2) g + O(s^M)`` for an
  inner ``g`` and the ``M``-th roots of unity ``w_j``;
* feedback atoms of a contractive colligation ``T``: closing the defect port of
  the Julia operator ``[[T, D_{T*}], [D_T, -T^*]]`` with a unimodular ``lam``
  gives a unitary colligation ``T_lam``.  Its transfer function is analytic in
  ``lam`` with value ``F`` at ``lam = 0``, so the average over ``M`` equispaced
  ``lam`` reproduces ``F`` up to terms of order ``lam^M``.

Frank-Wolfe on the sampled least-squares objective refines either seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import nnls

from .core import (
    CircleGrid,
    Colligation,
    MatrixPolynomial,
    adj,
    as_matrix,
    cascade,
    defect_operators,
    evaluate_on,
    is_unitary,
    left_multiply,
    mobius_compose,
    operator_norm,
    random_unitary,
)
from .errors import BudgetExhausted, DimensionMismatch, NotContractive, NotInner, NotUnitary
from .potapov import BlaschkePotapovProduct, is_inner_on_circle, random_inner
from .realization import contractive_realization, polynomial_sup_norm, strictify

INNER_TOL = 1e-8
DEFECT_RANK_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DiscGrid:
    """Boundary circle plus interior rings; residuals are maxima over these points."""

    size: int = 512
    radii: tuple = (0.5, 0.9, 0.99)
    points: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        circle = CircleGrid(self.size).points
        pts = np.concatenate([circle] + [r * circle for r in self.radii])
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    def to_dict(self) -> dict:
        return {"size": self.size, "radii": list(self.radii)}


def atom_degree(atom) -> int:
    if isinstance(atom, BlaschkePotapovProduct):
        return atom.degree
    if isinstance(atom, Colligation):
        return atom.n_state
    return 0


def as_unitary_colligation(g) -> Colligation:
    if isinstance(g, Colligation):
        return g
    if isinstance(g, BlaschkePotapovProduct):
        return g.as_colligation()
    u = as_matrix(g, name="g")
    n = u.shape[0]
    return Colligation(u, np.zeros((n, 0)), np.zeros((0, n)), np.zeros((0, 0)))


def sup_residual(values: np.ndarray, target: np.ndarray) -> float:
    return float(np.linalg.norm(values - target, 2, axis=(1, 2)).max())


@dataclass(frozen=True, eq=False)
class ConvexCombination:
    weights: np.ndarray
    atoms: tuple
    residual: float
    grid: DiscGrid = field(default_factory=DiscGrid)
    target: Callable | None = None
    history: tuple = ()

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).ravel()
        if w.size != len(self.atoms):
            raise DimensionMismatch("one weight per atom required")
        if np.any(w < -1e-15) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must form a probability vector")
        w = np.clip(w, 0.0, None)
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "atoms", tuple(self.atoms))

    @property
    def n(self) -> int:
        return evaluate_on(self.atoms[0], np.zeros(1)).shape[1]

    def __len__(self) -> int:
        return len(self.atoms)

    def evaluate_many(self, zs) -> np.ndarray:
        zs = np.asarray(zs, dtype=np.complex128).ravel()
        out = 0
        for w, a in zip(self.weights, self.atoms):
            out = out + w * evaluate_on(a, zs)
        return out

    def __call__(self, z: complex) -> np.ndarray:
        return self.evaluate_many(np.array([z]))[0]

    def measure(self, target: Callable | None = None) -> float:
        target = target if target is not None else self.target
        if target is None:
            raise ValueError("no target to measure against")
        pts = self.grid.points
        return sup_residual(self.evaluate_many(pts), evaluate_on(target, pts))

    def max_atom_defect(self) -> float:
        return max(is_inner_on_circle(a, CircleGrid(256)).defect for a in self.atoms)


def _check_inner(g, what: str = "g") -> None:
    chk = is_inner_on_circle(g, CircleGrid(256), INNER_TOL)
    if not chk.ok:
        raise NotInner(f"{what} is not inner on the circle (defect {chk.defect:.3e})")


class _Scaled:
    def __init__(self, f, c):
        self.f, self.c = f, c

    def evaluate_many(self, zs):
        return self.c * evaluate_on(self.f, zs)

    def __call__(self, z):
        return self.evaluate_many(np.array([z]))[0]


class _Product:
    def __init__(self, left, right):
        self.left, self.right = left, right

    def evaluate_many(self, zs):
        return evaluate_on(self.left, zs) @ evaluate_on(self.right, zs)

    def __call__(self, z):
        return self.evaluate_many(np.array([z]))[0]


class _LeftUnitary:
    def __init__(self, u, f):
        self.u, self.f = u, f

    def evaluate_many(self, zs):
        return self.u[None] @ evaluate_on(self.f, zs)

    def __call__(self, z):
        return self.evaluate_many(np.array([z]))[0]


def scale_average_bound(s: float, m_atoms: int) -> float:
    return 2.0 * s ** m_atoms / (1.0 - s ** m_atoms)


def scale_average_atoms(g, s: float, m_atoms: int, grid: DiscGrid | None = None) -> ConvexCombination:
    """Equal-weight combination of ``b_{-s w_j}(g)`` approximating ``(1 - s^2) g``."""
    if not 0 < s < 1:
        raise ValueError("s must lie in (0, 1)")
    if m_atoms < 1:
        raise ValueError("need at least one atom")
    col = as_unitary_colligation(g)
    _check_inner(col)
    grid = grid or DiscGrid()
    roots = np.exp(2j * np.pi * np.arange(m_atoms) / m_atoms)
    atoms = [mobius_compose(col, s * w) for w in roots]
    target = _Scaled(col, 1.0 - s * s)
    weights = np.full(m_atoms, 1.0 / m_atoms)
    comb = ConvexCombination(weights, atoms, 0.0, grid, target)
    return ConvexCombination(weights, atoms, comb.measure(), grid, target)


def _multiply_atoms(a, b):
    if isinstance(a, BlaschkePotapovProduct) and isinstance(b, BlaschkePotapovProduct):
        # U1 prod F1 U2 prod F2 = (U1 U2) prod (U2^* F1 U2) prod F2
        u2 = b.unitary
        moved = tuple(type(f)(f.alpha, adj(u2) @ f.proj @ u2) for f in a.factors)
        return BlaschkePotapovProduct(a.unitary @ u2, moved + b.factors)
    return cascade(as_unitary_colligation(a), as_unitary_colligation(b))


def combine_products(left: ConvexCombination, right: ConvexCombination) -> ConvexCombination:
    """Pointwise products ``a_i c_j`` with weights ``lam_i mu_j``."""
    if left.n != right.n:
        raise DimensionMismatch("combinations have different matrix sizes")
    weights = np.outer(left.weights, right.weights).ravel()
    weights = weights / weights.sum()
    atoms = [_multiply_atoms(a, c) for a in left.atoms for c in right.atoms]
    if left.target is not None and right.target is not None:
        target = _Product(left.target, right.target)
        comb = ConvexCombination(weights, atoms, 0.0, left.grid, target)
        return ConvexCombination(weights, atoms, comb.measure(), left.grid, target)
    return ConvexCombination(weights, atoms, left.residual + right.residual, left.grid)


def unitary_left_multiply(u, comb: ConvexCombination) -> ConvexCombination:
    u = as_matrix(u, name="U")
    chk = is_unitary(u, 1e-10) if u.shape[0] == u.shape[1] else None
    if chk is None or not chk.ok:
        raise NotUnitary("left factor must be unitary")
    atoms = []
    for a in comb.atoms:
        if isinstance(a, BlaschkePotapovProduct):
            atoms.append(BlaschkePotapovProduct(u @ a.unitary, a.factors))
        else:
            atoms.append(left_multiply(u, as_unitary_colligation(a)))
    target = _LeftUnitary(u, comb.target) if comb.target is not None else None
    return ConvexCombination(comb.weights, atoms, comb.residual, comb.grid, target, comb.history)


# ---------------------------------------------------------------------------
# Feedback atoms
# ---------------------------------------------------------------------------


def _range_basis(h: np.ndarray, tol: float) -> np.ndarray:
    w, v = np.linalg.eigh(h)
    return v[:, w > tol]


def feedback_atoms(col: Colligation, m_atoms: int, offset: float = 0.0) -> list[Colligation]:
    """Unitary colligations ``T + lam S (I - lam K)^{-1} R`` at ``lam = exp(2 pi i (j + offset) / M)``.

    ``S = D_{T*} Q1``, ``R = Q2^* D_T`` and ``K = -Q2^* T^* Q1`` where ``Q1`` and
    ``Q2`` are orthonormal bases of the ranges of the two defect operators.
    """
    t = col.system_matrix
    d_t, d_ts = defect_operators(t)
    q1 = _range_basis(d_ts, DEFECT_RANK_TOL)
    q2 = _range_basis(d_t, DEFECT_RANK_TOL)
    if q1.shape[1] != q2.shape[1]:
        raise NotContractive("defect ranks differ; system matrix is not square")
    r = q1.shape[1]
    if r == 0:
        return [col]
    s_op = d_ts @ q1
    r_op = adj(q2) @ d_t
    k_op = -adj(q2) @ adj(t) @ q1
    atoms = []
    for j in range(m_atoms):
        lam = np.exp(2j * np.pi * (j + offset) / m_atoms)
        tl = t + lam * s_op @ np.linalg.solve(np.eye(r) - lam * k_op, r_op)
        u, _, vh = np.linalg.svd(tl)
        atoms.append(Colligation.from_system_matrix(u @ vh, col.n_out))
    return atoms


def constant_unitary_atoms(n: int, count: int, seed) -> list[Colligation]:
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        u = np.eye(n) * np.exp(2j * np.pi * k / count) if k < count // 2 else random_unitary(n, rng)
        out.append(as_unitary_colligation(u))
    return out


@dataclass
class AtomPool:
    """Candidate atoms with optional seed weights for a warm start."""

    atoms: list
    seed_weights: np.ndarray | None = None

    def extend(self, more: Sequence) -> None:
        self.atoms.extend(more)

    def __len__(self) -> int:
        return len(self.atoms)


def default_pool(n: int, seed=0, random_count: int = 8, max_degree: int = 3) -> AtomPool:
    """Rotated identity maps, constant unitaries and seeded random products."""
    atoms: list = []
    for k in range(8):
        w = np.exp(2j * np.pi * k / 8)
        atoms.append(as_unitary_colligation(w * np.eye(n)))
        atoms.append(Colligation(np.zeros((n, n)), w * np.eye(n), np.eye(n), np.zeros((n, n))))
    atoms.extend(constant_unitary_atoms(n, 4, seed))
    rng = np.random.default_rng(seed)
    for _ in range(random_count):
        atoms.append(random_inner(n, int(rng.integers(1, max_degree + 1)), int(rng.integers(2**31))))
    return AtomPool(atoms)


# ---------------------------------------------------------------------------
# Frank-Wolfe
# ---------------------------------------------------------------------------


def fw_decompose(
    target,
    pool: AtomPool | Sequence,
    budget: int = 64,
    tau: float = 1e-2,
    grid: DiscGrid | None = None,
    raise_on_budget: bool = True,
    corrective: bool = True,
) -> ConvexCombination:
    """Frank-Wolfe on ``mean ||x(z) - target(z)||_F^2`` over the convex hull of the pool.

    ``target`` is a pointwise function or an array of its values on ``grid``.
    Each step moves toward the pool atom with the smallest linearized
    objective (ties go to the lowest degree, then the lowest index) with an
    exact line search; with ``corrective`` the weights of the active atoms
    are then re-fitted over the simplex by non-negative least squares.  The best sampled sup residual seen so far is returned;
    if it stays above ``tau`` after ``budget`` steps ``BudgetExhausted`` is
    raised carrying that combination.
    """
    grid = grid or DiscGrid()
    pts = grid.points
    pool = pool if isinstance(pool, AtomPool) else AtomPool(list(pool))
    if len(pool) == 0:
        raise ValueError("empty atom pool")
    target_fn = None if isinstance(target, np.ndarray) else target
    tv = np.asarray(target if target_fn is None else evaluate_on(target, pts), dtype=np.complex128)
    if tv.shape[0] != pts.size:
        raise DimensionMismatch("target values do not match the grid")
    if np.linalg.norm(tv, 2, axis=(1, 2)).max() > 1 + 1e-9:
        raise NotContractive("target exceeds norm 1 on the grid")

    vals = np.stack([evaluate_on(a, pts) for a in pool.atoms])
    degrees = np.array([atom_degree(a) for a in pool.atoms])
    flat = vals.reshape(len(pool), -1)
    tflat = tv.ravel()

    if pool.seed_weights is not None:
        weights = np.asarray(pool.seed_weights, dtype=float).copy()
        weights /= weights.sum()
    else:
        sups = np.linalg.norm(vals - tv[None], 2, axis=(2, 3)).max(axis=1)
        start = _tie_break(sups, degrees)
        weights = np.zeros(len(pool))
        weights[start] = 1.0
    x = weights @ flat

    def sup_of(xf):
        return sup_residual(xf.reshape(tv.shape), tv)

    best_w, best_res = weights.copy(), sup_of(x)
    history = [best_res]
    for _ in range(budget):
        if best_res <= tau:
            break
        grad = x - tflat
        scores = np.real(flat.conj() @ grad)
        k = _tie_break(scores, degrees)
        d = flat[k] - x
        dd = np.real(np.vdot(d, d))
        if dd <= 1e-300:
            break
        gamma = float(np.clip(-np.real(np.vdot(d, grad)) / dd, 0.0, 1.0))
        if gamma == 0.0:
            break
        weights *= 1.0 - gamma
        weights[k] += gamma
        if corrective:
            weights = _simplex_refit(flat, tflat, weights)
        x = weights @ flat
        res = sup_of(x)
        if res < best_res:
            best_w, best_res = weights.copy(), res
        history.append(best_res)

    keep = best_w > 0
    w = best_w[keep] / best_w[keep].sum()
    atoms = [a for a, kk in zip(pool.atoms, keep) if kk]
    comb = ConvexCombination(w, atoms, best_res, grid, target_fn, tuple(history))
    if best_res > tau and raise_on_budget:
        raise BudgetExhausted(f"residual {best_res:.3e} above tau={tau:.3e} after {budget} steps", best=comb)
    return comb


def _simplex_refit(flat: np.ndarray, tflat: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Least-squares weights on the active atoms subject to ``w >= 0, sum w = 1``."""
    active = np.flatnonzero(weights > 0)
    a = flat[active].T
    # the sum constraint enters as a heavily weighted extra row
    big = 1e3 * max(1.0, np.abs(a).max()) * np.sqrt(a.shape[0])
    lhs = np.vstack([a.real, a.imag, np.full((1, active.size), big)])
    rhs = np.r_[tflat.real, tflat.imag, big]
    w_act, _ = nnls(lhs, rhs, maxiter=50 * active.size)
    if w_act.sum() <= 0:
        return weights
    out = np.zeros_like(weights)
    out[active] = w_act / w_act.sum()
    return out


def _tie_break(scores: np.ndarray, degrees: np.ndarray, rel: float = 1e-12) -> int:
    lo = scores.min()
    close = np.flatnonzero(scores <= lo + rel * max(1.0, abs(lo)))
    return int(close[np.lexsort((close, degrees[close]))][0])


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------


def contractive_colligation_of(f, eps: float) -> tuple[Colligation, Callable]:
    """A contractive colligation within ``eps / 3`` of ``f`` together with the evaluator of ``f``."""
    if isinstance(f, Colligation):
        if operator_norm(f.system_matrix) > 1 + 1e-10:
            raise NotContractive("system matrix norm exceeds 1")
        return f, f
    if isinstance(f, BlaschkePotapovProduct):
        return f.as_colligation(), f
    if isinstance(f, MatrixPolynomial):
        sup = polynomial_sup_norm(f)
        if sup > 1 + 1e-9:
            raise NotContractive(f"polynomial sup norm {sup:.12g} exceeds 1")
        p = f if sup <= 1 - 1e-6 else strictify(f, min(eps / 6, 1e-2))
        return contractive_realization(p), f
    raise TypeError(f"unsupported function type {type(f).__name__}")


def fisher_pipeline(
    f,
    eps: float,
    budget: int = 256,
    grid: DiscGrid | None = None,
    max_atoms: int = 200,
    seed=0,
) -> ConvexCombination:
    """Convex combination of rational inner functions within ``eps`` of ``f`` on the disc grid.

    Feedback atoms of a contractive realization of ``f`` are averaged with
    ``M = 4, 8, 16, ...`` nodes until the sampled residual drops below ``eps``;
    otherwise Frank-Wolfe continues from the best average with the feedback
    atoms, their averaging atoms and a default pool.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    grid = grid or DiscGrid()
    col, target = contractive_colligation_of(f, eps)
    pts = grid.points
    tv = evaluate_on(target, pts)

    if is_inner_on_circle(col, CircleGrid(256), INNER_TOL).ok:
        res = sup_residual(evaluate_on(col, pts), tv)
        if res <= eps:
            return ConvexCombination(np.ones(1), [col], res, grid, target, (res,))

    best = None
    m_atoms = 4
    while m_atoms <= max_atoms:
        atoms = feedback_atoms(col, m_atoms)
        w = np.full(len(atoms), 1.0 / len(atoms))
        comb = ConvexCombination(w, atoms, 0.0, grid, target)
        res = comb.measure()
        comb = ConvexCombination(w, atoms, res, grid, target, (res,))
        if best is None or res < best.residual:
            best = comb
        if res <= eps:
            return comb
        m_atoms *= 2

    pool = AtomPool(list(best.atoms), seed_weights=best.weights.copy())
    extra = default_pool(col.n_out, seed)
    pool.extend(extra.atoms)
    pool.seed_weights = np.r_[pool.seed_weights, np.zeros(len(extra))]
    return fw_decompose(tv, pool, budget=budget, tau=eps, grid=grid)
