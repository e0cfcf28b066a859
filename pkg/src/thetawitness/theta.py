"""Lovász theta SDP, theta-body membership and the Barvinok rank bound."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidParameter, ThetaFailed
from .graph import Graph
from .sdp import DEFAULT_TOL, SdpProblem, SdpSolution, solve_sdp

MEMBERSHIP_TOL = 1e-7


@dataclass
class ThetaResult:
    value: float
    X: np.ndarray
    m: int
    solution: Optional[SdpSolution] = None


def theta_constraints(n: int, edges) -> list:
    """The linear constraints of the theta SDP on a matrix of order n+1.

    Row/column 0 is the handle. Order: ``X00 = 1``, then ``X_ii - X_0i = 0``
    per vertex, then ``X_ij = 0`` per edge.
    """
    N = n + 1
    cons = []
    a = np.zeros((N, N))
    a[0, 0] = 1.0
    cons.append((a, 1.0))
    for i in range(1, N):
        a = np.zeros((N, N))
        a[i, i] = 1.0
        a[0, i] = a[i, 0] = -0.5
        cons.append((a, 0.0))
    for i, j in sorted(edges):
        a = np.zeros((N, N))
        a[i + 1, j + 1] = a[j + 1, i + 1] = 0.5
        cons.append((a, 0.0))
    return cons


def theta_objective(g: Graph) -> np.ndarray:
    c = np.zeros((g.n + 1, g.n + 1))
    c[np.arange(1, g.n + 1), np.arange(1, g.n + 1)] = g.weight_vector()
    return c


def build_theta_sdp(g: Graph) -> SdpProblem:
    return SdpProblem(order=g.n + 1, objective=theta_objective(g),
                      constraints=theta_constraints(g.n, g.edges), sense="maximize")


def theta_residual(g: Graph, x: np.ndarray) -> float:
    """Largest violation of the linear theta constraints by ``x``."""
    x = np.asarray(x, dtype=float)
    idx = np.arange(1, g.n + 1)
    r = [abs(x[0, 0] - 1.0)]
    r.extend(np.abs(x[idx, idx] - x[0, idx]))
    r.extend(abs(x[i + 1, j + 1]) for i, j in g.edges)
    return float(max(r))


def lovasz_theta(g: Graph, tol: float = DEFAULT_TOL) -> ThetaResult:
    """(Weighted) Lovász theta number of ``g``.

    Raises
    ------
    ThetaFailed
        If the interior-point solve does not reach an optimal status.
    """
    p = build_theta_sdp(g)
    if g.n == 0:
        return ThetaResult(0.0, np.ones((1, 1)), 1)
    sol = solve_sdp(p, tol=tol)
    if not sol.optimal:
        raise ThetaFailed(f"theta SDP ended with status {sol.status!r}, "
                          f"residuals {sol.residuals}")
    w = np.array(g.weight_vector())
    value = float(w @ np.diag(sol.X)[1:])
    return ThetaResult(value=value, X=sol.X, m=p.num_constraints, solution=sol)


def barvinok_bound(g: Graph) -> int:
    """Largest r with r(r+1)/2 <= 1 + n + |E|, an upper bound on the Lovász rank."""
    m = 1 + g.n + g.num_edges
    r = (math.isqrt(8 * m + 1) - 1) // 2
    # isqrt floor keeps this exact; r(r+1)/2 <= m < (r+1)(r+2)/2
    return r


@dataclass
class MembershipResult:
    member: bool
    certificate: Optional[np.ndarray] = None
    residual: float = float("nan")
    reason: str = ""

    def __bool__(self):
        return self.member


def theta_body_membership(g: Graph, p, tol: float = MEMBERSHIP_TOL) -> MembershipResult:
    """Decide whether behaviour ``p`` lies in the theta body TH(g).

    Solves the feasibility SDP ``Y >= 0, Y00 = 1, Y_ii = Y_0i = p_i,
    Y_ij = 0 (i~j)``. On membership the certificate ``Y`` is attached.
    """
    p = np.asarray(p, dtype=float)
    if p.shape != (g.n,):
        raise InvalidParameter(f"behaviour must have length {g.n}")
    if np.any(p < -tol) or np.any(p > 1 + tol):
        return MembershipResult(False, reason="entries outside [0, 1]")
    for i, j in g.edges:
        if p[i] + p[j] > 1 + tol:
            return MembershipResult(False, reason=f"p[{i}] + p[{j}] > 1 on an edge")

    N = g.n + 1
    cons = []
    a = np.zeros((N, N))
    a[0, 0] = 1.0
    cons.append((a, 1.0))
    for i in range(1, N):
        a = np.zeros((N, N))
        a[i, i] = 1.0
        cons.append((a, p[i - 1]))
        a = np.zeros((N, N))
        a[0, i] = a[i, 0] = 0.5
        cons.append((a, p[i - 1]))
    for i, j in g.edges:
        a = np.zeros((N, N))
        a[i + 1, j + 1] = a[j + 1, i + 1] = 0.5
        cons.append((a, 0.0))
    sol = solve_sdp(SdpProblem(order=N, objective=np.zeros((N, N)), constraints=cons),
                    tol=min(tol, 1e-9) * 1e-1, max_iter=200)
    y = sol.X
    if not np.all(np.isfinite(y)):
        return MembershipResult(False, reason=f"solver status {sol.status}")
    resid = max(abs(y[0, 0] - 1.0),
                float(np.max(np.abs(np.diag(y)[1:] - p), initial=0.0)),
                float(np.max(np.abs(y[0, 1:] - p), initial=0.0)),
                max((abs(y[i + 1, j + 1]) for i, j in g.edges), default=0.0))
    lam_min = float(np.linalg.eigvalsh(y)[0])
    if resid <= tol and lam_min >= -tol:
        return MembershipResult(True, certificate=y, residual=resid)
    return MembershipResult(False, residual=resid,
                            reason=f"no PSD certificate within tolerance (status {sol.status})")
