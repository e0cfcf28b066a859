"""Dense primal-dual interior-point solver for standard-form SDPs.

Primal (minimization sense)::

    min <C, X>   s.t.  <A_i, X> = b_i,  X >= 0

Dual::

    max b'y      s.t.  Z = C - sum_i y_i A_i >= 0

The iteration is an infeasible-start path-following scheme using the HKM
search direction with a Mehrotra predictor-corrector step. Everything is
dense; problems here have order below ~40 and a few hundred constraints.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from .errors import InvalidParameter

logger = logging.getLogger(__name__)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
MAX_ITER = "max_iter"

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 200


@dataclass(frozen=True)
class SdpProblem:
    """A standard-form SDP over symmetric matrices of order ``order``.

    ``extra_box`` additionally imposes ``X <= I`` (spectral box).
    """

    order: int
    objective: np.ndarray
    constraints: list = field(default_factory=list)  # [(A_i, b_i), ...]
    sense: str = "minimize"
    extra_box: bool = False

    def __post_init__(self):
        if self.sense not in ("minimize", "maximize"):
            raise InvalidParameter(f"unknown sense {self.sense!r}")
        c = np.asarray(self.objective, dtype=float)
        if c.shape != (self.order, self.order):
            raise InvalidParameter("objective has wrong order")
        for a, _ in self.constraints:
            if np.shape(a) != (self.order, self.order):
                raise InvalidParameter("constraint matrix has wrong order")

    @property
    def num_constraints(self) -> int:
        return len(self.constraints)

    def to_json(self) -> str:
        """Debug dump: ``{"order", "sense", "extra_box", "C", "A": [...], "b": [...]}``."""
        return json.dumps({
            "order": self.order,
            "sense": self.sense,
            "extra_box": self.extra_box,
            "C": np.asarray(self.objective, dtype=float).tolist(),
            "A": [np.asarray(a, dtype=float).tolist() for a, _ in self.constraints],
            "b": [float(b) for _, b in self.constraints],
        })

    @classmethod
    def from_json(cls, text: str) -> "SdpProblem":
        d = json.loads(text)
        cons = [(np.array(a, dtype=float), float(b)) for a, b in zip(d["A"], d["b"])]
        return cls(order=d["order"], objective=np.array(d["C"], dtype=float),
                   constraints=cons, sense=d.get("sense", "minimize"),
                   extra_box=d.get("extra_box", False))


@dataclass
class SdpSolution:
    X: np.ndarray
    y: np.ndarray
    primal_obj: float
    dual_obj: float
    status: str
    residuals: tuple  # (primal_feas, dual_feas, gap)
    iterations: int = 0
    Z: Optional[np.ndarray] = None
    # per iterate: (primal_obj, dual_obj, primal_feas, dual_feas), minimization sense
    history: list = field(default_factory=list)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def _max_step(x: np.ndarray, dx: np.ndarray) -> float:
    """Largest alpha with x + alpha*dx PSD (x assumed positive definite)."""
    try:
        L = np.linalg.cholesky(x)
    except np.linalg.LinAlgError:
        return 0.0
    Linv_dx = scipy.linalg.solve_triangular(L, dx, lower=True)
    m = scipy.linalg.solve_triangular(L, Linv_dx.T, lower=True)
    lam_min = np.linalg.eigvalsh(0.5 * (m + m.T))[0]
    if lam_min >= 0:
        return np.inf
    return -1.0 / lam_min


def _reduce_constraints(A: np.ndarray, b: np.ndarray, tol: float):
    """Drop linearly dependent constraints; detect inconsistent ones.

    Returns ``(A_red, b_red, keep_idx, consistent)``.
    """
    m = A.shape[0]
    if m == 0:
        return A, b, np.arange(0), True
    flat = A.reshape(m, -1)
    _, r, piv = scipy.linalg.qr(flat.T, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    scale = diag[0] if diag.size else 0.0
    rank = int(np.count_nonzero(diag > 1e-10 * max(scale, 1.0)))
    keep = np.sort(piv[:rank])
    # consistency: b must lie in the row space spanned by kept constraints
    coef, *_ = np.linalg.lstsq(flat[keep].T, flat.T, rcond=None)
    b_pred = coef.T @ b[keep]
    consistent = bool(np.linalg.norm(b_pred - b) <= max(tol, 1e-10) * (1 + np.linalg.norm(b)))
    return A[keep], b[keep], keep, consistent


def _box_lift(C: np.ndarray, A: np.ndarray, b: np.ndarray):
    """Rewrite ``{A(X)=b, 0 <= X <= I}`` as a plain SDP of order 2N.

    The lifted variable is ``[[X, *], [*, S]]`` with the linear constraints
    ``X + S = I``; positivity of the diagonal blocks gives both sides of the
    box, and the coupling block does not enter any constraint.
    """
    N = C.shape[0]
    Cb = np.zeros((2 * N, 2 * N))
    Cb[:N, :N] = C
    rows = []
    rhs = []
    for a, bi in zip(A, b):
        ab = np.zeros((2 * N, 2 * N))
        ab[:N, :N] = a
        rows.append(ab)
        rhs.append(bi)
    for i in range(N):
        for j in range(i, N):
            ab = np.zeros((2 * N, 2 * N))
            if i == j:
                ab[i, i] = 1.0
                ab[N + i, N + i] = 1.0
                rhs.append(1.0)
            else:
                ab[i, j] = ab[j, i] = 0.5
                ab[N + i, N + j] = ab[N + j, N + i] = 0.5
                rhs.append(0.0)
            rows.append(ab)
    return Cb, np.array(rows), np.array(rhs)


def solve_sdp(p: SdpProblem, tol: float = DEFAULT_TOL,
              max_iter: int = DEFAULT_MAX_ITER) -> SdpSolution:
    """Solve ``p`` with a primal-dual interior-point method.

    Objective values in the returned solution are in the problem's own
    sense (a maximization problem reports its maximum); ``y`` are the
    multipliers of the minimization form, negated back for maximization.
    """
    N = p.order
    sign = -1.0 if p.sense == "maximize" else 1.0
    C = sign * np.asarray(p.objective, dtype=float)
    C = 0.5 * (C + C.T)
    m0 = p.num_constraints
    if m0:
        A = np.array([0.5 * (np.asarray(a, float) + np.asarray(a, float).T)
                      for a, _ in p.constraints])
        b = np.array([float(bi) for _, bi in p.constraints])
    else:
        A = np.zeros((0, N, N))
        b = np.zeros(0)

    if p.extra_box:
        Cl, Al, bl = _box_lift(C, A, b)
        inner = SdpProblem(order=2 * N, objective=Cl,
                           constraints=list(zip(Al, bl)), sense="minimize")
        sol = solve_sdp(inner, tol=tol, max_iter=max_iter)
        X = sol.X[:N, :N].copy()
        return SdpSolution(X=X, y=sign * sol.y[:m0], primal_obj=sign * sol.primal_obj,
                           dual_obj=sign * sol.dual_obj, status=sol.status,
                           residuals=sol.residuals, iterations=sol.iterations,
                           Z=None if sol.Z is None else sol.Z[:N, :N],
                           history=sol.history)

    Ar, br, keep, consistent = _reduce_constraints(A, b, tol)
    if not consistent:
        nan = float("nan")
        return SdpSolution(X=np.full((N, N), nan), y=np.full(m0, nan),
                           primal_obj=nan, dual_obj=nan, status=INFEASIBLE,
                           residuals=(np.inf, nan, nan))
    if Ar.shape[0] == 0:
        # min <C, X> over the whole PSD cone: 0 at X = 0, or unbounded below
        lam = np.linalg.eigvalsh(C)[0] if N else 0.0
        status = OPTIMAL if lam >= -tol else UNBOUNDED
        return SdpSolution(X=np.zeros((N, N)), y=np.zeros(m0), primal_obj=0.0,
                           dual_obj=0.0, status=status, residuals=(0.0, max(0.0, -lam), 0.0))
    sol = _ipm(C, Ar, br, tol, max_iter)
    y_full = np.zeros(m0)
    y_full[keep] = sol.y
    sol.y = sign * y_full
    sol.primal_obj *= sign
    sol.dual_obj *= sign
    return sol


def _ipm(C, A, b, tol, max_iter) -> SdpSolution:
    N = C.shape[0]
    m = A.shape[0]
    flat = A.reshape(m, N * N)

    def op(X):
        return flat @ X.reshape(-1)

    def adj(y):
        return (y @ flat).reshape(N, N)

    norm_b = np.linalg.norm(b)
    norm_C = np.linalg.norm(C)
    a_norms = np.linalg.norm(flat, axis=1) if m else np.zeros(0)

    # SDPT3-style starting point
    if m:
        xi = max(10.0, np.sqrt(N), N * np.max((1 + np.abs(b)) / (1 + a_norms)))
        eta = max(10.0, np.sqrt(N), np.max(a_norms), norm_C)
    else:
        xi = eta = max(10.0, np.sqrt(N))
    X = xi * np.eye(N)
    Z = eta * np.eye(N)
    y = np.zeros(m)

    best = None
    history = []
    status = MAX_ITER
    it = 0
    for it in range(1, max_iter + 1):
        rp = b - op(X)
        Rd = C - adj(y) - Z
        pobj = float(np.sum(C * X))
        dobj = float(b @ y)
        mu = float(np.sum(X * Z)) / N
        pinf = np.linalg.norm(rp) / (1 + norm_b)
        dinf = np.linalg.norm(Rd) / (1 + norm_C)
        gap = abs(pobj - dobj) / (1 + abs(pobj))
        history.append((pobj, dobj, pinf, dinf))
        if best is None or max(pinf, dinf, gap) < best[0]:
            best = (max(pinf, dinf, gap), X.copy(), y.copy(), Z.copy(), pobj, dobj,
                    (pinf, dinf, gap))
        if pinf <= tol and dinf <= tol and gap <= tol:
            status = OPTIMAL
            break

        # infeasibility / unboundedness certificates (crude, on diverging iterates)
        big = 1e10 * (1 + norm_b + norm_C)
        if dobj > big and dinf < 1e-6 and pinf > 1e-6:
            status = INFEASIBLE
            break
        if pobj < -big and pinf < 1e-6 and dinf > 1e-6:
            status = UNBOUNDED
            break

        try:
            Zinv = np.linalg.inv(Z)
        except np.linalg.LinAlgError:
            break
        Zinv = 0.5 * (Zinv + Zinv.T)

        # Schur complement M_ij = tr(A_i X A_j Zinv)
        G = np.einsum("ab,jbc,cd->jad", X, A, Zinv, optimize=True)
        M = flat @ G.transpose(0, 2, 1).reshape(m, -1).T
        M = 0.5 * (M + M.T)
        try:
            cho = scipy.linalg.cho_factor(M)

            def schur_solve(r):
                return scipy.linalg.cho_solve(cho, r)
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
            def schur_solve(r):
                return np.linalg.lstsq(M, r, rcond=None)[0]

        XRdZinv = X @ Rd @ Zinv
        base = rp + op(X) + op(XRdZinv)
        AZinv = op(Zinv)

        def direction(sigma_mu, corr):
            rhs = base - sigma_mu * AZinv
            if corr is not None:
                rhs = rhs + op(corr)
            dy = schur_solve(rhs)
            dZ = Rd - adj(dy)
            dX = sigma_mu * Zinv - X - X @ dZ @ Zinv
            if corr is not None:
                dX = dX - corr
            dX = 0.5 * (dX + dX.T)
            return dX, dy, dZ

        # predictor
        dXa, dya, dZa = direction(0.0, None)
        ap = min(1.0, _max_step(X, dXa))
        ad = min(1.0, _max_step(Z, dZa))
        mu_aff = float(np.sum((X + ap * dXa) * (Z + ad * dZa))) / N
        sigma = min(1.0, max(0.0, (mu_aff / mu) ** 3)) if mu > 0 else 0.0

        # corrector
        corr = dXa @ dZa @ Zinv
        dX, dy, dZ = direction(sigma * mu, corr)
        gamma = 0.9 + 0.09 * min(ap, ad)
        ap = min(1.0, gamma * _max_step(X, dX))
        ad = min(1.0, gamma * _max_step(Z, dZ))
        if ap < 1e-12 and ad < 1e-12:
            logger.debug("step length collapsed at iteration %d", it)
            break
        X = X + ap * dX
        X = 0.5 * (X + X.T)
        y = y + ad * dy
        Z = Z + ad * dZ
        Z = 0.5 * (Z + Z.T)

    if status == OPTIMAL:
        res = (pinf, dinf, gap)
        return SdpSolution(X=X, y=y, primal_obj=pobj, dual_obj=dobj, status=status,
                           residuals=res, iterations=it, Z=Z, history=history)
    if status in (INFEASIBLE, UNBOUNDED):
        return SdpSolution(X=X, y=y, primal_obj=pobj, dual_obj=dobj, status=status,
                           residuals=(pinf, dinf, gap), iterations=it, Z=Z,
                           history=history)
    _, Xb, yb, Zb, pb, db, res = best
    return SdpSolution(X=Xb, y=yb, primal_obj=pb, dual_obj=db, status=MAX_ITER,
                       residuals=res, iterations=it, Z=Zb, history=history)
