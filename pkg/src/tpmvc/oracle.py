"""Brute-force reference implementations used to cross-check the fast paths.

Nothing here imports from the modules being checked; each routine works
straight from the definition of the quantity it computes, trading speed
for obviousness.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass
class OracleReport:
    case_id: str
    reference: object
    candidate: object
    max_deviation: float

    def __post_init__(self):
        if not self.max_deviation >= 0:
            raise ValueError("deviation must be non-negative")

    @classmethod
    def compare(cls, case_id, reference, candidate):
        dev = float(np.max(np.abs(np.asarray(reference) - np.asarray(candidate)), initial=0.0))
        return cls(case_id, reference, candidate, dev)


def _gst_objective(d, sigma, tau, p):
    return 0.5 * (d - sigma) ** 2 + tau * d**p


def brute_gst(sigma, tau, p, grid_step=1e-3, tol=1e-8):
    """Minimize ``0.5*(d - sigma)^2 + tau*d^p`` on ``[0, sigma + 3 tau]``.

    A uniform grid picks the winning basin, then golden-section search
    polishes the winner inside its two neighbouring grid cells.
    """
    hi = sigma + 3.0 * tau
    n = int(math.ceil(hi / grid_step)) + 1
    grid = np.linspace(0.0, hi, n)
    vals = _gst_objective(grid, sigma, tau, p)
    i = int(np.argmin(vals))
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, n - 1)]

    def f(d):
        return _gst_objective(d, sigma, tau, p)

    c = b - _GOLDEN * (b - a)
    e = a + _GOLDEN * (b - a)
    fc, fe = f(c), f(e)
    while b - a > tol:
        if fc < fe:
            b, e, fe = e, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, e, fe
            e = a + _GOLDEN * (b - a)
            fe = f(e)
    best = 0.5 * (a + b)
    # the grid point itself (notably d = 0) may still beat the polished value
    return best if f(best) <= vals[i] else float(grid[i])


def brute_simplex(v):
    """Euclidean projection onto the probability simplex by support enumeration.

    For every candidate support set the equality-constrained least-squares
    problem has the closed form ``q_S = v_S + (1 - sum v_S)/|S|``; feasible
    candidates are compared by distance to ``v``.
    """
    v = np.asarray(v, dtype=float)
    n = v.size
    if n == 0 or n > 8:
        raise ValueError("brute_simplex supports 1 <= dim <= 8")
    best, best_dist = None, np.inf
    for r in range(1, n + 1):
        for support in itertools.combinations(range(n), r):
            idx = list(support)
            q = np.zeros(n)
            q[idx] = v[idx] + (1.0 - v[idx].sum()) / r
            if np.any(q < -1e-15):
                continue
            q = np.maximum(q, 0.0)
            dist = float(np.sum((q - v) ** 2))
            if dist < best_dist:
                best, best_dist = q, dist
    return best


def brute_assignment(table):
    """Best total matched count over every one-to-one pairing of rows and columns."""
    table = np.asarray(table)
    r, c = table.shape
    k = max(r, c)
    if k > 7:
        raise ValueError("brute_assignment supports tables up to 7x7")
    padded = np.zeros((k, k), dtype=table.dtype)
    padded[:r, :c] = table
    best = 0
    for perm in itertools.permutations(range(k)):
        score = sum(padded[i, perm[i]] for i in range(k))
        best = max(best, score)
    return best


def brute_dft_fiber(fiber):
    """Direct ``O(L^2)`` evaluation of ``X_k = sum_t x_t exp(-2 pi i k t / L)``."""
    x = [complex(v) for v in fiber]
    n = len(x)
    out = []
    for k in range(n):
        acc = 0j
        for t in range(n):
            acc += x[t] * complex(math.cos(2 * math.pi * k * t / n), -math.sin(2 * math.pi * k * t / n))
        out.append(acc)
    return np.array(out)


def brute_singular_values(mat):
    """Singular values from the eigenvalues of the Hermitian Gram matrix.

    Deliberately avoids an SVD routine so it stays independent of the code it
    checks; accurate to roughly ``sqrt(eps) * ||mat||`` for tiny values.
    """
    mat = np.asarray(mat)
    gram = mat.conj().T @ mat if mat.shape[0] >= mat.shape[1] else mat @ mat.conj().T
    ev = np.linalg.eigvalsh(gram)
    return np.sqrt(np.clip(ev, 0.0, None))[::-1]


def brute_svt_tensor(z, thresh):
    """Nuclear-norm prox of a tensor: DFT by direct summation, per-slice SVT.

    ``thresh`` is applied as-is to every DFT-domain slice (callers include any
    ``n3`` factor themselves).
    """
    z = np.asarray(z, dtype=float)
    n1, n2, n3 = z.shape
    zf = np.empty(z.shape, dtype=complex)
    for i in range(n1):
        for j in range(n2):
            zf[i, j] = brute_dft_fiber(z[i, j])
    xf = np.empty_like(zf)
    for k in range(n3):
        # eigendecomposition of the Gram matrix gives V and sigma; U = A V / sigma
        a = zf[:, :, k]
        ev, vecs = np.linalg.eigh(a.conj().T @ a)
        sig = np.sqrt(np.clip(ev, 0.0, None))
        shrunk = np.maximum(sig - thresh, 0.0)
        keep = shrunk > 0
        u = a @ vecs[:, keep] / sig[keep]
        xf[:, :, k] = (u * shrunk[keep]) @ vecs[:, keep].conj().T
    # direct inverse DFT
    x = np.empty(z.shape)
    for i in range(n1):
        for j in range(n2):
            fib = xf[i, j]
            vals = []
            for t in range(n3):
                acc = 0j
                for k in range(n3):
                    acc += fib[k] * complex(math.cos(2 * math.pi * k * t / n3), math.sin(2 * math.pi * k * t / n3))
                vals.append((acc / n3).real)
            x[i, j] = vals
    return x


def brute_contingency_score(pred, truth):
    """Matched count under the best relabeling, enumerated over permutations."""
    pred = list(pred)
    truth = list(truth)
    pu = sorted(set(pred))
    tu = sorted(set(truth))
    table = np.zeros((len(pu), len(tu)), dtype=int)
    for a, b in zip(pred, truth):
        table[pu.index(a), tu.index(b)] += 1
    return brute_assignment(table)
