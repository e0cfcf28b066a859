"""Orthonormal representations, behaviours and dimension-witness reports."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import HeuristicFailed, InconsistentRealization, InvalidParameter
from .graph import Graph, generate_mermin, independence_number
from .heuristic import HeuristicConfig, Realization, heuristic_theta_d
from .theta import barvinok_bound, lovasz_theta

SCHEMA_VERSION = 1
HEURISTIC_LABEL = "lower bound (heuristic)"


@dataclass
class OrthonormalRepresentation:
    d: int
    vectors: list

    def to_dict(self) -> dict:
        return {"d": self.d,
                "vectors": [[[float(z.real), float(z.imag)] for z in np.asarray(v, complex)]
                            for v in self.vectors]}


def _parse_vector(raw) -> np.ndarray:
    out = []
    for z in raw:
        if isinstance(z, (list, tuple)):
            if len(z) != 2:
                raise InvalidParameter(f"complex entry must be [re, im], got {z!r}")
            out.append(complex(float(z[0]), float(z[1])))
        else:
            out.append(complex(float(z)))
    v = np.array(out, dtype=complex)
    return v.real.copy() if not np.any(v.imag) else v


def load_vectors(text: str):
    """Parse ``{"d", "vectors", "state"?}``; returns ``(OrthonormalRepresentation, state or None)``.

    Entries may be ``[re, im]`` pairs or bare reals.
    """
    try:
        data = json.loads(text)
        d = int(data["d"])
        vectors = [_parse_vector(v) for v in data["vectors"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidParameter(f"bad orthonormal representation file: {exc}") from exc
    state = data.get("state")
    state = None if state is None else _parse_vector(state)
    return OrthonormalRepresentation(d, vectors), state


def qite_or(k: int) -> OrthonormalRepresentation:
    """Orthonormal representation of the k-Qite graph in dimension k (k >= 3).

    The clique gets the standard basis. Each spoke ``k+i`` is zero at
    coordinate ``i`` with entries of magnitude ``1/sqrt(k-1)`` elsewhere,
    signed so that it is orthogonal to the hub; the first half of the
    sign-balanced positions are positive.
    """
    if not isinstance(k, int) or k < 3:
        raise InvalidParameter(f"closed-form representation needs k >= 3, got {k!r}")
    vecs: list = [None] * (2 * k + 1)
    for i in range(k):
        e = np.zeros(k)
        e[i] = 1.0
        vecs[i] = e
    c = 1.0 / math.sqrt(k - 1)
    if k % 2 == 1:
        vecs[2 * k] = np.ones(k) / math.sqrt(k)
        for i in range(k):
            others = [j for j in range(k) if j != i]
            v = np.zeros(k)
            half = len(others) // 2
            v[others[:half]] = c
            v[others[half:]] = -c
            vecs[k + i] = v
    else:
        hub = np.ones(k)
        hub[0] = 0.0
        vecs[2 * k] = hub / math.sqrt(k - 1)
        special = np.ones(k)
        special[0] = 0.0
        special[-1] = 2.0 - k
        vecs[k] = special / math.sqrt((k - 2) * (k - 1))
        for i in range(1, k):
            others = [j for j in range(1, k) if j != i]
            v = np.zeros(k)
            v[0] = c
            half = len(others) // 2
            v[others[:half]] = c
            v[others[half:]] = -c
            vecs[k + i] = v
    return OrthonormalRepresentation(k, vecs)


def umbrella_c5() -> Realization:
    """The Lovász umbrella for C5: optimal 3-dimensional realization with handle e3."""
    cos2 = 1.0 / math.sqrt(5.0)
    ct, st = math.sqrt(cos2), math.sqrt(1.0 - cos2)
    vectors = []
    for i in range(5):
        ang = 4.0 * math.pi * i / 5.0
        vectors.append(np.array([st * math.cos(ang), st * math.sin(ang), ct]))
    return Realization(d=3, state=np.array([0.0, 0.0, 1.0]), vectors=vectors)


@dataclass
class VerificationReport:
    norm_violations: list = field(default_factory=list)   # [(vertex, |norm - 1|)]
    edge_violations: list = field(default_factory=list)   # [((i, j), |<v_i, v_j>|)]

    @property
    def passed(self) -> bool:
        return not self.norm_violations and not self.edge_violations

    def to_dict(self) -> dict:
        return {
            "pass": self.passed,
            "norm_violations": [{"vertex": v, "deviation": e} for v, e in self.norm_violations],
            "edge_violations": [{"edge": list(ij), "overlap": e} for ij, e in self.edge_violations],
        }


def verify_or(g: Graph, or_: OrthonormalRepresentation, tol: float = 1e-9) -> VerificationReport:
    vecs = [np.asarray(v) for v in or_.vectors]
    if len(vecs) != g.n:
        raise InvalidParameter(f"expected {g.n} vectors, got {len(vecs)}")
    dims = {v.shape for v in vecs}
    if len(dims) > 1 or (vecs and vecs[0].shape != (or_.d,)):
        raise InvalidParameter(f"vectors must all have dimension {or_.d}, got {sorted(dims)}")
    rep = VerificationReport()
    for i, v in enumerate(vecs):
        dev = abs(float(np.linalg.norm(v)) - 1.0)
        if dev > tol:
            rep.norm_violations.append((i, dev))
    for i, j in g.sorted_edges():
        ov = abs(complex(np.vdot(vecs[i], vecs[j])))
        if ov > tol:
            rep.edge_violations.append(((i, j), ov))
    return rep


def behaviour_from_realization(r: Realization, g: Optional[Graph] = None,
                               tol: float = 1e-9) -> np.ndarray:
    """Event probabilities ``p_i = |<state, v_i>|^2`` (zero for absent vertices).

    With a graph, the exclusivity axiom ``p_i + p_j <= 1`` is checked on
    every edge; a violation means the vectors are not orthogonal there.
    """
    p = r.probabilities
    if g is not None:
        if len(p) != g.n:
            raise InvalidParameter(f"realization has {len(p)} vectors, graph has {g.n} vertices")
        for i, j in g.edges:
            if p[i] + p[j] > 1.0 + tol:
                raise InconsistentRealization(
                    f"p[{i}] + p[{j}] = {p[i] + p[j]:.12g} exceeds 1 on an edge")
    return p


# -- reports -------------------------------------------------------------------

def recognize_qite(g: Graph) -> Optional[int]:
    """Return k if ``g`` is isomorphic to the k-Qite graph (k >= 2), else None."""
    if g.n < 5 or g.n % 2 == 0:
        return None
    k = (g.n - 1) // 2
    if g.num_edges != k * (k - 1) // 2 + 2 * k:
        return None
    nbrs = [set() for _ in range(g.n)]
    for i, j in g.edges:
        nbrs[i].add(j)
        nbrs[j].add(i)
    for hub in range(g.n):
        spokes = nbrs[hub]
        if len(spokes) != k or any(len(nbrs[s]) != 2 for s in spokes):
            continue
        if any(g.has_edge(a, b) for a in spokes for b in spokes if a < b):
            continue
        clique = {next(iter(nbrs[s] - {hub})) for s in spokes}
        if len(clique) != k or hub in clique or clique & spokes:
            continue
        if all(g.has_edge(a, b) for a in clique for b in clique if a < b):
            return k
    return None


def _sig6(x: float) -> float:
    return float(f"{x:.6g}")


def _num(x):
    return int(x) if float(x).is_integer() else float(x)


def witness_report(g: Graph, dims, cfg: Optional[HeuristicConfig] = None) -> dict:
    """Assemble the dimension-witness report for ``g`` as a JSON-ready dict.

    Heuristic values appear only as lower bounds. Witness statements are
    emitted only for theorem-backed upper bounds ``B`` with ``theta > B``.
    """
    dims = [int(d) for d in dims]
    if not dims or any(d < 1 for d in dims):
        raise InvalidParameter("dims must be a non-empty list of positive integers")
    cfg = cfg or HeuristicConfig(d=dims[0])

    alpha, stable = independence_number(g)
    theta = lovasz_theta(g).value
    barv = barvinok_bound(g)
    qite_k = recognize_qite(g)
    ortho_rank = None
    if qite_k is not None:
        if qite_k >= 3:
            ortho_rank = {"value": qite_k, "source": "k-Qite orthogonal rank theorem (R_o = k)"}
        else:
            ortho_rank = {"value": 3, "source": "2-Qite is C5; an odd cycle has no 2-dimensional representation"}

    entries = []
    witnesses = []
    for d in dims:
        entry = {"d": d, "label": HEURISTIC_LABEL, "caveats": []}
        run_cfg = HeuristicConfig(**{**cfg.__dict__, "d": d})
        try:
            res = heuristic_theta_d(g, run_cfg)
            entry["heuristic_lower_bound"] = _sig6(res.bound) if res.converged else None
            entry["converged"] = res.converged
            entry["achieved_rank"] = res.achieved_rank
            if not res.converged:
                entry["caveats"].append("not_converged: no rank-d solution found, no value claimed")
            elif res.realization is not None and res.realization.absent:
                entry["caveats"].append(
                    "absent_vertices: realization assigns p_i = 0 to vertices "
                    f"{res.realization.absent}; d may be below the orthogonal rank")
        except HeuristicFailed as exc:
            entry["heuristic_lower_bound"] = None
            entry["converged"] = False
            entry["achieved_rank"] = None
            entry["caveats"].append(f"heuristic_failed: {exc}")
        if ortho_rank is not None and d < ortho_rank["value"]:
            entry["caveats"].append(
                "below_orthogonal_rank: no d-dimensional orthonormal representation exists")

        proven = []
        if d == 2:
            proven.append((float(alpha), "two-dimensional theta equals the independence number"))
        if qite_k is not None and d == qite_k:
            proven.append((float(qite_k), "rank-k theta of the k-Qite graph is at most k"))
        if d >= barv:
            proven.append((theta, "d >= Barvinok rank bound, so the rank constraint is inactive"))
        entry["proven_upper_bound"] = None
        if proven:
            # several rules can give the same bound (2-Qite is C5); report the tightest once
            best = min(b for b, _ in proven)
            source = "; ".join(s for b, s in proven if b == best)
            entry["proven_upper_bound"] = {"value": _sig6(best), "source": source}
            if theta > best + 1e-6:
                witnesses.append({
                    "bound": _num(_sig6(best)),
                    "dimension_cap": d,
                    "min_dimension": d + 1,
                    "source": source,
                    "statement": f"observed sum_i p_i > {_num(_sig6(best))} at dimension cap {d} "
                                 f"=> quantum dimension >= {d + 1}",
                })
        entries.append(entry)

    annotations = []
    if qite_k is not None:
        annotations.append(f"graph is isomorphic to the {qite_k}-Qite graph")
    if g.n == 16 and g.edges == generate_mermin().edges:
        annotations.append("Mermin exclusivity graph: orthogonal rank 4 and Lovász rank <= 7 "
                           "are literature claims, not computed here")

    return {
        "schema": SCHEMA_VERSION,
        "graph": {"n": g.n, "edges": g.num_edges, "weighted": g.weighted},
        "alpha": {"value": _num(float(alpha)) if alpha.denominator == 1 else str(alpha),
                  "stable_set": sorted(stable.members)},
        "theta": _sig6(theta),
        "barvinok_bound": barv,
        "orthogonal_rank": ortho_rank,
        "dimensions": entries,
        "witnesses": witnesses,
        "annotations": annotations,
        "heuristic": {"iters": cfg.iters, "restarts": cfg.restarts, "seed": cfg.seed,
                      "stop_tol": cfg.stop_tol},
    }


def format_report(rep: dict) -> str:
    """Human-readable table for a report dict."""
    g = rep["graph"]
    lines = [
        f"graph: n={g['n']} |E|={g['edges']}{' (weighted)' if g['weighted'] else ''}",
        f"alpha: {rep['alpha']['value']}  stable set {rep['alpha']['stable_set']}",
        f"theta: {rep['theta']}",
        f"Barvinok rank bound: {rep['barvinok_bound']}",
    ]
    if rep["orthogonal_rank"]:
        lines.append(f"orthogonal rank: {rep['orthogonal_rank']['value']}")
    lines.append("")
    lines.append(f"{'d':>3}  {'heuristic lower bound':>22}  {'proven upper bound':>18}  notes")
    for e in rep["dimensions"]:
        lb = "-" if e["heuristic_lower_bound"] is None else f"{e['heuristic_lower_bound']}"
        ub = "-" if e["proven_upper_bound"] is None else f"{e['proven_upper_bound']['value']}"
        notes = "; ".join(c.split(":")[0] for c in e["caveats"])
        lines.append(f"{e['d']:>3}  {lb:>22}  {ub:>18}  {notes}")
    lines.append("")
    if rep["witnesses"]:
        lines.append("witnesses:")
        for w in rep["witnesses"]:
            lines.append(f"  {w['statement']}  [{w['source']}]")
    else:
        lines.append("witnesses: none")
    for a in rep["annotations"]:
        lines.append(f"note: {a}")
    return "\n".join(lines)
