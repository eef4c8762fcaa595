"""Augmented-Lagrangian solver for anchor-graph transition-probability clustering.

Given per-view row-stochastic anchor graphs ``S[v]`` (``n x m``), the solver
minimizes

    sum_v ||S[v] H[v] - G[v]||_F^2 / alpha[v]
        + lambda1 * ||G||_Sp^p + lambda2 * ||H||_Sp^p

with ``G[v]^T G[v] = I``, ``G[v] >= 0``, ``H[v]`` row-stochastic and ``alpha`` on
the simplex. ``H[v]`` holds anchor-to-category transition probabilities and
``S[v] H[v]`` the induced sample-to-category probabilities. The constraints
are split off onto auxiliary copies ``F``, ``Q``, ``J``, ``A`` that are tied
back with multipliers ``Y1..Y4`` and growing penalties ``mu``.

Per-view matrices live as lateral slices of 3rd-order arrays: ``G`` has
shape ``(n, V, c)`` and ``G[:, v, :]`` is view ``v``'s ``n x c`` matrix, so
the frontal slices the Schatten norm sees are ``n x V`` and indexed by
cluster.
"""

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from . import tensor_core
from .errors import (
    DegenerateB,
    EmptyVector,
    InvalidP,
    ShapeMismatch,
    SingularSystem,
    TooFewAnchors,
)

log = logging.getLogger(__name__)


@dataclass
class ProblemConfig:
    lambda1: float = 100.0
    lambda2: float = 100.0
    p: float = 0.8
    mu_init: float = 1e-3
    mu_max: float = 1e9
    eta: float = 1.1
    tol: float = 1e-6
    max_iter: int = 200
    seed: int = 0

    def __post_init__(self):
        if not (self.lambda1 > 0 and self.lambda2 > 0):
            raise ValueError("lambda1 and lambda2 must be positive")
        if not 0 < self.p <= 1:
            raise InvalidP(f"p must lie in (0, 1], got {self.p}")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 0:
            raise ValueError("max_iter must be non-negative")


@dataclass
class SolverState:
    G: np.ndarray  # (n, V, c)
    H: np.ndarray  # (m, V, c)
    F: np.ndarray
    Q: np.ndarray
    Y1: np.ndarray
    Y2: np.ndarray
    J: np.ndarray
    Y3: np.ndarray
    A: np.ndarray
    Y4: np.ndarray
    alpha: np.ndarray
    mu: np.ndarray  # (mu1, mu2, mu3, mu4)
    iteration: int = 0

    @property
    def n_views(self):
        return self.alpha.size

    def copy(self):
        return SolverState(
            **{k: (v.copy() if isinstance(v, np.ndarray) else v) for k, v in self.__dict__.items()}
        )


@dataclass
class IterationRecord:
    iteration: int
    residuals: tuple
    objective: float
    alpha: np.ndarray


@dataclass
class ClusteringResult:
    G: np.ndarray
    labels: np.ndarray  # 1-based
    anchor_labels: np.ndarray  # (V, m), 1-based
    trace: list = field(default_factory=list)
    converged: bool = False
    iterations: int = 0
    state: SolverState = None


def _dense(s):
    return s.toarray() if sp.issparse(s) else np.asarray(s, dtype=float)


def _check_graphs(graphs, c):
    if not graphs:
        raise ShapeMismatch("at least one view is required")
    shapes = {g.shape for g in graphs}
    if len(shapes) != 1:
        raise ShapeMismatch(f"anchor graphs disagree in shape: {sorted(shapes)}")
    n, m = graphs[0].shape
    if c < 1:
        raise ValueError("cluster count must be positive")
    if m < c:
        raise TooFewAnchors(f"{m} anchors cannot support {c} clusters")
    return n, m


def init_state(graphs, c, cfg, h_init=None):
    """Zero splits and multipliers, uniform view weights, random row-stochastic ``H``.

    Anchors are shared by all views, so one seeded ``m x c`` draw initialises
    every ``H[v]``; independent draws would start the views with unrelated
    column orders. ``h_init`` (shape ``(m, V, c)``) overrides the draw. ``G``
    starts at zero and is first set by :func:`update_g`.
    """
    n, m = _check_graphs(graphs, c)
    V = len(graphs)
    if h_init is None:
        rng = np.random.default_rng(cfg.seed)
        h = rng.uniform(size=(m, c)) + 1e-3
        h /= h.sum(axis=1, keepdims=True)
        H = np.repeat(h[:, None, :], V, axis=1)
    else:
        H = np.array(h_init, dtype=float)
        if H.shape != (m, V, c):
            raise ShapeMismatch(f"h_init has shape {H.shape}, expected {(m, V, c)}")
    zn = np.zeros((n, V, c))
    zm = np.zeros((m, V, c))
    return SolverState(
        G=zn.copy(),
        H=H,
        F=zn.copy(),
        Q=zm.copy(),
        Y1=zn.copy(),
        Y2=zm.copy(),
        J=zn.copy(),
        Y3=zn.copy(),
        A=zm.copy(),
        Y4=zm.copy(),
        alpha=np.full(V, 1.0 / V),
        mu=np.full(4, float(cfg.mu_init)),
    )


def procrustes(b):
    """Maximizer of ``tr(G^T b)`` over matrices with orthonormal columns."""
    u, s, vt = np.linalg.svd(b, full_matrices=False)
    if s.size and s[-1] <= s[0] * 1e-12:
        warnings.warn("Procrustes target is rank deficient", DegenerateB, stacklevel=3)
    return u @ vt


def g_target(state, graphs, v):
    mu1, _, mu3, _ = state.mu
    sh = graphs[v] @ state.H[:, v, :]
    return (
        (2.0 / state.alpha[v]) * sh
        + mu1 * (state.F[:, v, :] - state.Y1[:, v, :] / mu1)
        + mu3 * (state.J[:, v, :] - state.Y3[:, v, :] / mu3)
    )


def update_g(state, graphs):
    for v in range(state.n_views):
        state.G[:, v, :] = procrustes(g_target(state, graphs, v))
    return state


def h_system(state, graphs, v):
    """The SPD system ``C H = D`` whose solution is the ``H[v]`` update."""
    _, mu2, _, mu4 = state.mu
    s = graphs[v]
    inv_a = 1.0 / state.alpha[v]
    sts = _dense(s.T @ s)
    C = inv_a * sts + 0.5 * (mu2 + mu4) * np.eye(sts.shape[0])
    D = (
        inv_a * np.asarray(s.T @ state.G[:, v, :])
        + 0.5 * mu2 * (state.Q[:, v, :] - state.Y2[:, v, :] / mu2)
        + 0.5 * mu4 * (state.A[:, v, :] - state.Y4[:, v, :] / mu4)
    )
    return C, D


def update_h(state, graphs):
    for v in range(state.n_views):
        C, D = h_system(state, graphs, v)
        try:
            state.H[:, v, :] = scipy.linalg.solve(C, D, assume_a="pos")
        except np.linalg.LinAlgError as exc:
            raise SingularSystem(f"H system for view {v} is not positive definite") from exc
    return state


def update_f(state):
    np.maximum(state.G + state.Y1 / state.mu[0], 0.0, out=state.F)
    return state


def project_simplex(v):
    """Euclidean projection of a vector onto ``{q >= 0, sum(q) = 1}`` (sort-based)."""
    v = np.asarray(v, dtype=float)
    if v.size == 0:
        raise EmptyVector("cannot project an empty vector")
    return project_simplex_rows(v[None, :])[0]


def project_simplex_rows(x):
    """Row-wise simplex projection of a 2-D array."""
    x = np.asarray(x, dtype=float)
    k = x.shape[1]
    u = -np.sort(-x, axis=1)
    css = np.cumsum(u, axis=1) - 1.0
    ind = np.arange(1, k + 1)
    cond = u - css / ind > 0
    rho = k - 1 - np.argmax(cond[:, ::-1], axis=1)
    gamma = -css[np.arange(x.shape[0]), rho] / (rho + 1)
    q = np.maximum(x + gamma[:, None], 0.0)
    # polish the sum against rounding in the cumulative sum
    q /= q.sum(axis=1, keepdims=True)
    return q


def update_q(state):
    mu2 = state.mu[1]
    m, V, c = state.H.shape
    target = (mu2 * state.H + state.Y2) / mu2
    state.Q[:] = project_simplex_rows(target.reshape(m * V, c)).reshape(m, V, c)
    return state


def update_j(state, cfg):
    mu3 = state.mu[2]
    state.J = tensor_core.schatten_prox(state.G + state.Y3 / mu3, cfg.lambda1 / mu3, cfg.p)
    return state


def update_a(state, cfg):
    mu4 = state.mu[3]
    state.A = tensor_core.schatten_prox(state.H + state.Y4 / mu4, cfg.lambda2 / mu4, cfg.p)
    return state


def fit_errors(state, graphs):
    """Per-view squared reconstruction errors ``||S[v] H[v] - G[v]||_F^2``."""
    return np.array(
        [
            float(np.sum((graphs[v] @ state.H[:, v, :] - state.G[:, v, :]) ** 2))
            for v in range(state.n_views)
        ]
    )


def optimal_alpha(t):
    """Minimizer of ``sum_v t[v] / alpha[v]`` on the simplex: ``sqrt(t) / sum(sqrt(t))``."""
    t = np.asarray(t, dtype=float)
    if np.all(t <= 1e-24):
        return np.full(t.size, 1.0 / t.size)
    # keep every weight strictly positive so 1/alpha stays finite downstream
    r = np.maximum(np.sqrt(np.maximum(t, 0.0)), 1e-12 * np.sqrt(t.max()))
    return r / r.sum()


def update_alpha(state, graphs):
    state.alpha = optimal_alpha(fit_errors(state, graphs))
    return state


def update_multipliers(state):
    mu1, mu2, mu3, mu4 = state.mu
    state.Y1 += mu1 * (state.G - state.F)
    state.Y2 += mu2 * (state.H - state.Q)
    state.Y3 += mu3 * (state.G - state.J)
    state.Y4 += mu4 * (state.H - state.A)
    return state


def update_penalties(state, cfg):
    state.mu = np.minimum(state.mu * cfg.eta, cfg.mu_max)
    return state


def residuals(state):
    """Max-abs consensus gaps ``(G-F, H-Q, G-J, H-A)``."""
    return (
        float(np.max(np.abs(state.G - state.F))),
        float(np.max(np.abs(state.H - state.Q))),
        float(np.max(np.abs(state.G - state.J))),
        float(np.max(np.abs(state.H - state.A))),
    )


def objective(state, graphs, cfg):
    fit = float(np.sum(fit_errors(state, graphs) / state.alpha))
    reg_g = tensor_core.schatten_p_norm(state.G, cfg.p) ** cfg.p
    reg_h = tensor_core.schatten_p_norm(state.H, cfg.p) ** cfg.p
    return fit + cfg.lambda1 * reg_g + cfg.lambda2 * reg_h


def fused_indicator(G, alpha):
    """Weighted mean of the per-view ``G[:, v, :]`` with weights ``1/alpha[v]``."""
    w = 1.0 / np.asarray(alpha, dtype=float)
    return np.einsum("nvc,v->nc", G, w) / w.sum()


def fuse_and_label(state):
    G = fused_indicator(state.G, state.alpha)
    # np.argmax returns the first maximum, i.e. the lowest cluster index on ties
    labels = np.argmax(G, axis=1) + 1
    anchor_labels = np.argmax(state.H, axis=2).T + 1
    return ClusteringResult(G=G, labels=labels, anchor_labels=anchor_labels, iterations=state.iteration)


def step(state, graphs, cfg):
    """One full sweep of the block updates in their fixed order."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateB)
        update_g(state, graphs)
    update_h(state, graphs)
    update_f(state)
    update_q(state)
    update_j(state, cfg)
    update_a(state, cfg)
    update_alpha(state, graphs)
    update_multipliers(state)
    update_penalties(state, cfg)
    state.iteration += 1
    return state


def run(graphs, c, cfg, h_init=None, callback=None):
    """Iterate until every consensus residual drops below ``cfg.tol`` or ``max_iter``.

    Not converging is not an error: the result carries ``converged=False``.
    ``callback(state, record)`` is invoked after each iteration if given.
    """
    graphs = [g.tocsr() if sp.issparse(g) else np.asarray(g, dtype=float) for g in graphs]
    state = init_state(graphs, c, cfg, h_init=h_init)
    trace = []
    converged = False
    for _ in range(cfg.max_iter):
        step(state, graphs, cfg)
        res = residuals(state)
        rec = IterationRecord(state.iteration, res, objective(state, graphs, cfg), state.alpha.copy())
        trace.append(rec)
        if callback is not None:
            callback(state, rec)
        log.debug("iter %d residuals %s objective %.6g", state.iteration, res, rec.objective)
        if max(res) < cfg.tol:
            converged = True
            break
    result = fuse_and_label(state)
    result.trace = trace
    result.converged = converged
    result.iterations = state.iteration
    result.state = state
    return result
