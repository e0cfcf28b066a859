"""Alternating-SDP heuristic for the rank-restricted Lovász theta number.

Each restart alternates two convex problems:

1. over theta-feasible ``X``: minimize ``tr((beta*W - I_w) X)``, which rewards
   the theta objective and penalizes weight on the directions held by ``W``;
2. over ``0 <= W <= I, tr W = N - d``: minimize ``<X, W>``, solved in closed
   form by the projector onto the ``N - d`` lowest eigenvectors of ``X``.

Once ``<X, W>`` vanishes (up to ``stop_tol``), ``X`` has rank at most ``d`` and
its diagonal sum is a lower bound on the rank-``d`` theta value. Nothing here
certifies an upper bound.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import HeuristicFailed, InvalidParameter, NotThetaFeasible, RankTooHigh
from .graph import Graph
from .linalg import DEFAULT_RANK_TOL, gram_decompose, lambda_max_of_sum, numerical_rank, sym_eig
from .sdp import SdpProblem, solve_sdp
from .theta import theta_constraints, theta_residual

logger = logging.getLogger(__name__)

FEASIBILITY_TOL = 1e-6


@dataclass(frozen=True)
class HeuristicConfig:
    d: int
    iters: int = 50
    restarts: int = 20
    seed: int = 0
    stop_tol: float = 1e-6
    rank_tol: float = DEFAULT_RANK_TOL
    # experimental: scale of the W term in the first SDP (1 = the plain algorithm)
    penalty: float = 1.0
    # the first W is a box-projected Gaussian shrunk by this factor; at 1 the
    # opening solve lands on a rank-1 stable-set vertex and the loop stalls there
    init_scale: float = 0.01
    sdp_tol: float = 1e-8

    def __post_init__(self):
        if self.d < 1 or self.iters < 1 or self.restarts < 1:
            raise InvalidParameter("d, iters and restarts must all be >= 1")
        if self.stop_tol <= 0 or self.rank_tol <= 0 or self.sdp_tol <= 0:
            raise InvalidParameter("tolerances must be positive")
        if self.penalty <= 0 or self.init_scale <= 0:
            raise InvalidParameter("penalty and init_scale must be positive")


@dataclass
class Realization:
    """Handle state plus one unit vector per vertex (``None`` where p_i = 0)."""

    d: int
    state: np.ndarray
    vectors: list

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([0.0 if v is None else float(abs(np.vdot(self.state, v)) ** 2)
                         for v in self.vectors])

    @property
    def absent(self) -> list[int]:
        return [i for i, v in enumerate(self.vectors) if v is None]

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "vectors": [None if v is None else _complex_pairs(v) for v in self.vectors],
            "state": _complex_pairs(self.state),
        }


def _complex_pairs(v) -> list:
    v = np.asarray(v, dtype=complex)
    return [[float(z.real), float(z.imag)] for z in v]


@dataclass
class HeuristicResult:
    bound: float
    X: Optional[np.ndarray]
    converged: bool
    achieved_rank: int
    realization: Optional[Realization] = None
    trace_log: list = field(default_factory=list)
    restarts_converged: int = 0
    restarts_failed: int = 0

    def trace_jsonl(self) -> str:
        return "\n".join(json.dumps(rec) for rec in self.trace_log)


def min_box_trace(x, d: int) -> tuple[np.ndarray, float]:
    """Minimize ``<x, W>`` over ``0 <= W <= I`` with ``tr W = N - d``.

    The minimizer is the projector onto the eigenvectors of the ``N - d``
    smallest eigenvalues; ties at the cut keep ``sym_eig``'s ordering.
    """
    x = np.asarray(x, dtype=float)
    N = x.shape[0]
    if not isinstance(d, (int, np.integer)) or d < 1 or d > N:
        raise InvalidParameter(f"need 1 <= d <= {N}, got {d!r}")
    w, v = sym_eig(x)
    tail = v[:, d:]
    W = tail @ tail.T
    return 0.5 * (W + W.T), float(np.sum(w[d:]))


def project_box(g: np.ndarray, t: float) -> np.ndarray:
    """Frobenius projection of symmetric ``g`` onto ``{0 <= W <= I, tr W = t}``."""
    w, v = sym_eig(g)
    lo, hi = w.min() - 1.0, w.max()
    # tr(clip(w - tau, 0, 1)) is non-increasing in tau
    for _ in range(200):
        tau = 0.5 * (lo + hi)
        if np.clip(w - tau, 0.0, 1.0).sum() > t:
            lo = tau
        else:
            hi = tau
    lam = np.clip(w - 0.5 * (lo + hi), 0.0, 1.0)
    W = (v * lam) @ v.T
    return 0.5 * (W + W.T)


def extract_realization(x, d: int, rank_tol: float = DEFAULT_RANK_TOL,
                        graph: Optional[Graph] = None) -> Realization:
    """Realization in dimension ``d`` from a theta-feasible matrix of rank <= d.

    The handle is row 0 of a Gram factor; vertex ``i`` gets its normalized
    row, or is marked absent (probability zero) when that row is numerically
    zero, i.e. ``X_ii <= rank_tol``.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[0] - 1
    idx = np.arange(1, n + 1)
    resid = max(abs(x[0, 0] - 1.0), float(np.max(np.abs(x[idx, idx] - x[0, idx]), initial=0.0)))
    if graph is not None:
        resid = max(resid, theta_residual(graph, x))
    if resid > FEASIBILITY_TOL:
        raise NotThetaFeasible(f"theta constraints violated by {resid:.2e}")
    r = numerical_rank(x, rank_tol)
    if r > d:
        raise RankTooHigh(f"numerical rank {r} exceeds d={d}")
    V = gram_decompose(x, rank_tol)
    if V.shape[1] < d:
        V = np.hstack([V, np.zeros((V.shape[0], d - V.shape[1]))])
    state = V[0] / np.linalg.norm(V[0])
    vectors = []
    for i in range(1, n + 1):
        if x[i, i] <= rank_tol:
            vectors.append(None)
        else:
            vectors.append(V[i] / np.linalg.norm(V[i]))
    return Realization(d=d, state=state, vectors=vectors)


def realization_cost(r) -> float:
    """Cost ``lambda_max(sum_i |v_i><v_i|)`` of a realization or orthonormal representation."""
    vecs = [np.asarray(v) for v in r.vectors if v is not None]
    if any(v.shape != (r.d,) for v in vecs):
        raise InvalidParameter("vector dimension does not match d")
    return lambda_max_of_sum(vecs)


def _restart(g: Graph, cfg: HeuristicConfig, restart: int, cons, d_eff: int, log: list):
    N = g.n + 1
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, restart]))
    G = rng.standard_normal((N, N))
    W = cfg.init_scale * project_box(0.5 * (G + G.T), N - d_eff)
    objective = np.diag(np.concatenate([[1.0], g.weight_vector()]))
    weights = np.array(g.weight_vector())
    best = None
    for it in range(1, cfg.iters + 1):
        p = SdpProblem(order=N, objective=cfg.penalty * W - objective, constraints=cons)
        sol = solve_sdp(p, tol=cfg.sdp_tol)
        if not sol.optimal:
            if it == 1:
                return None
            logger.debug("restart %d: SDP-1 status %s at iteration %d", restart, sol.status, it)
            break
        X = sol.X
        W, inner = min_box_trace(X, d_eff)
        obj = float(weights @ np.diag(X)[1:])
        rank = numerical_rank(X, cfg.rank_tol)
        log.append({"restart": restart, "iter": it, "obj": obj,
                    "inner_product": inner, "rank": rank})
        best = (X, inner, obj, rank)
        if inner <= cfg.stop_tol:
            break
    return best


def heuristic_theta_d(g: Graph, cfg: HeuristicConfig) -> HeuristicResult:
    """Lower bound on the rank-``cfg.d`` theta number of ``g`` by alternating SDPs.

    Restart ``r`` draws its starting ``W`` from the stream seeded by
    ``(cfg.seed, r)``. The best converged restart (largest objective) wins;
    if none converges the best iterate is returned with ``converged=False``.
    """
    N = g.n + 1
    d_eff = min(cfg.d, N)
    cons = theta_constraints(g.n, g.edges)
    log: list = []
    conv_best = None
    any_best = None
    n_conv = n_fail = 0
    for r in range(cfg.restarts):
        out = _restart(g, cfg, r, cons, d_eff, log)
        if out is None:
            n_fail += 1
            continue
        X, inner, obj, rank = out
        ok = inner <= cfg.stop_tol and rank <= cfg.d
        if ok:
            n_conv += 1
            if conv_best is None or obj > conv_best[2]:
                conv_best = out
        if any_best is None or obj > any_best[2]:
            any_best = out
    if any_best is None:
        raise HeuristicFailed(f"all {cfg.restarts} restarts failed")
    if conv_best is not None:
        X, inner, obj, rank = conv_best
        real = None
        try:
            real = extract_realization(X, cfg.d, cfg.rank_tol, graph=g)
        except (RankTooHigh, NotThetaFeasible) as exc:
            logger.warning("could not extract realization: %s", exc)
        return HeuristicResult(bound=obj, X=X, converged=True, achieved_rank=rank,
                               realization=real, trace_log=log,
                               restarts_converged=n_conv, restarts_failed=n_fail)
    X, inner, obj, rank = any_best
    return HeuristicResult(bound=obj, X=X, converged=False, achieved_rank=rank,
                           trace_log=log, restarts_converged=0, restarts_failed=n_fail)
