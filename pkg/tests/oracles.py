"""Independent reference computations used to check the library.

Nothing here imports the package's numerical routines; each function uses a
different route (series, brute force, power iteration) to the same quantity.
"""

import numpy as np


def series_transfer(a, b, c, d, z, terms=60):
    """``A + sum_k z^{k+1} B D^k C`` truncated."""
    out = np.array(a, dtype=complex)
    x = np.array(c, dtype=complex)
    zk = z
    for _ in range(terms + 1):
        out = out + zk * (b @ x)
        x = d @ x
        zk = zk * z
    return out


def series_transfer_bidisc(a, b, c, d, zdiag, terms=60):
    """``A + sum_k B Z (D Z)^k C`` truncated, with ``Z = diag(zdiag)``."""
    z = np.diag(zdiag)
    out = np.array(a, dtype=complex)
    x = np.array(c, dtype=complex)
    for _ in range(terms + 1):
        out = out + b @ z @ x
        x = d @ z @ x
    return out


def naive_polynomial(coeffs, z):
    return sum(ck * z ** k for k, ck in enumerate(coeffs))


def power_iteration_norm(m, iters=2000, seed=0):
    g = np.random.default_rng(seed)
    mm = m.conj().T @ m
    v = g.normal(size=mm.shape[0]) + 1j * g.normal(size=mm.shape[0])
    for _ in range(iters):
        v = mm @ v
        v = v / np.linalg.norm(v)
    return float(np.sqrt(np.real(v.conj() @ mm @ v)))


def grid_sup(f, size):
    zs = np.exp(2j * np.pi * np.arange(size) / size)
    return max(np.linalg.norm(np.atleast_2d(f(z)), 2) for z in zs)


def blaschke(alpha, z):
    return (z - alpha) / (1 - np.conj(alpha) * z)


def qr_unitary(n, seed):
    g = np.random.default_rng(seed)
    q, r = np.linalg.qr(g.normal(size=(n, n)) + 1j * g.normal(size=(n, n)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def contraction_2x2(g):
    """A random 2x2 matrix scaled into the closed unit ball."""
    m = g.normal(size=(2, 2)) + 1j * g.normal(size=(2, 2))
    return m / np.linalg.norm(m, 2) * g.uniform() ** 0.25


def pg_direct(f, p, q):
    """Potapov-Ginzburg transform by explicit block formulas."""
    f11, f12, f21, f22 = f[:p, :p], f[:p, p:], f[p:, :p], f[p:, p:]
    f22i = np.linalg.inv(f22)
    top = np.hstack([f11 - f12 @ f22i @ f21, f12 @ f22i])
    bot = np.hstack([-f22i @ f21, f22i])
    return np.vstack([top, bot])
