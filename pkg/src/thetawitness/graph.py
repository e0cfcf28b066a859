"""Exclusivity graphs: data model, parsers, generators and exact stable sets."""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .errors import InvalidParameter, MalformedGraph


def _to_fraction(w) -> Fraction:
    if isinstance(w, bool):
        raise MalformedGraph(f"weight {w!r} is not a number")
    if isinstance(w, (int, Fraction)):
        return Fraction(w)
    if isinstance(w, float):
        if not math.isfinite(w):
            raise MalformedGraph(f"weight {w!r} is not finite")
        # decimal literal as written, not the binary expansion
        return Fraction(repr(w))
    if isinstance(w, str):
        try:
            return Fraction(w.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedGraph(f"cannot parse weight {w!r}") from exc
    raise MalformedGraph(f"weight {w!r} is not a number")


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``edges`` holds each edge once as ``(i, j)`` with ``i < j``.
    ``weights`` is ``None`` for the unweighted case, else ``n`` positive
    fractions. ``labels`` is optional display metadata.
    """

    n: int
    edges: frozenset
    weights: Optional[tuple] = None
    labels: Optional[tuple] = None

    def __init__(self, n: int, edges: Iterable = (), weights=None, labels=None):
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise MalformedGraph(f"vertex count must be a non-negative integer, got {n!r}")
        norm = set()
        for e in edges:
            try:
                i, j = (int(v) for v in e)
            except (TypeError, ValueError) as exc:
                raise MalformedGraph(f"bad edge {e!r}") from exc
            if i == j:
                raise MalformedGraph(f"self-loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise MalformedGraph(f"edge {(i, j)} has an endpoint outside [0, {n})")
            norm.add((min(i, j), max(i, j)))
        if weights is not None:
            weights = tuple(_to_fraction(w) for w in weights)
            if len(weights) != n:
                raise MalformedGraph(f"expected {n} weights, got {len(weights)}")
            if any(w <= 0 for w in weights):
                raise MalformedGraph("weights must be positive")
        if labels is not None:
            labels = tuple(str(s) for s in labels)
            if len(labels) != n:
                raise MalformedGraph(f"expected {n} labels, got {len(labels)}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(norm))
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "labels", labels)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def weighted(self) -> bool:
        return self.weights is not None

    def weight(self, v: int) -> Fraction:
        return Fraction(1) if self.weights is None else self.weights[v]

    def weight_vector(self) -> list[float]:
        return [float(self.weight(v)) for v in range(self.n)]

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def adjacency_masks(self) -> list[int]:
        masks = [0] * self.n
        for i, j in self.edges:
            masks[i] |= 1 << j
            masks[j] |= 1 << i
        return masks

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def with_weights(self, weights) -> "Graph":
        return Graph(self.n, self.edges, weights, self.labels)

    def without_edge(self, i: int, j: int) -> "Graph":
        e = (min(i, j), max(i, j))
        return Graph(self.n, self.edges - {e}, self.weights, self.labels)

    def relabel(self, perm) -> "Graph":
        """Vertex ``v`` of ``self`` becomes vertex ``perm[v]``."""
        perm = list(perm)
        if sorted(perm) != list(range(self.n)):
            raise InvalidParameter("perm must be a permutation of range(n)")
        w = None
        if self.weights is not None:
            w = [None] * self.n
            for v, pv in enumerate(perm):
                w[pv] = self.weights[v]
        return Graph(self.n, [(perm[i], perm[j]) for i, j in self.edges], w)

    def to_dict(self) -> dict:
        d = {"n": self.n, "edges": [list(e) for e in self.sorted_edges()]}
        if self.weights is not None:
            d["weights"] = [_fraction_to_json(w) for w in self.weights]
        if self.labels is not None:
            d["labels"] = list(self.labels)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _fraction_to_json(w: Fraction):
    return int(w) if w.denominator == 1 else str(w)


def disjoint_union(g: Graph, h: Graph) -> Graph:
    edges = list(g.edges) + [(i + g.n, j + g.n) for i, j in h.edges]
    weights = None
    if g.weights is not None or h.weights is not None:
        weights = [g.weight(v) for v in range(g.n)] + [h.weight(v) for v in range(h.n)]
    return Graph(g.n + h.n, edges, weights)


@dataclass(frozen=True)
class StableSet:
    members: frozenset
    value: Fraction

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)


# -- parsing -----------------------------------------------------------------

def parse_graph(content: str, format: str = "json") -> Graph:
    """Parse a graph from JSON (``{"n", "edges", "weights"?}``) or DIMACS text."""
    if format == "json":
        return _parse_json(content)
    if format == "dimacs":
        return _parse_dimacs(content)
    raise InvalidParameter(f"unknown graph format {format!r}")


def _parse_json(content: str) -> Graph:
    try:
        data = json.loads(content)
    except json.JSONDecodeError as exc:
        raise MalformedGraph(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict) or "n" not in data:
        raise MalformedGraph('JSON graph must be an object with key "n"')
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise MalformedGraph('"n" must be an integer')
    edges = data.get("edges", [])
    if not isinstance(edges, list) or any(
            not isinstance(e, list) or len(e) != 2
            or not all(isinstance(v, int) and not isinstance(v, bool) for v in e)
            for e in edges):
        raise MalformedGraph('"edges" must be a list of integer pairs')
    weights = data.get("weights")
    if weights is not None and not isinstance(weights, list):
        raise MalformedGraph('"weights" must be a list')
    return Graph(n, [tuple(e) for e in edges], weights, data.get("labels"))


def _parse_dimacs(content: str) -> Graph:
    n = None
    edges = []
    for lineno, raw in enumerate(content.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        tag = parts[0]
        try:
            if tag == "p":
                if len(parts) != 4 or parts[1] not in ("edge", "col"):
                    raise MalformedGraph(f"line {lineno}: expected 'p edge <n> <m>'")
                if n is not None:
                    raise MalformedGraph(f"line {lineno}: duplicate problem line")
                n = int(parts[2])
                int(parts[3])
            elif tag == "e":
                if n is None:
                    raise MalformedGraph(f"line {lineno}: edge before problem line")
                if len(parts) != 3:
                    raise MalformedGraph(f"line {lineno}: expected 'e <i> <j>'")
                i, j = int(parts[1]) - 1, int(parts[2]) - 1
                edges.append((i, j))
            else:
                raise MalformedGraph(f"line {lineno}: unknown record {tag!r}")
        except ValueError as exc:
            raise MalformedGraph(f"line {lineno}: {exc}") from exc
    if n is None:
        raise MalformedGraph("missing 'p edge' line")
    return Graph(n, edges)


def load_graph(path: str) -> Graph:
    """Read a graph file, picking the format from the extension (DIMACS for .col/.dimacs)."""
    with open(path) as fh:
        text = fh.read()
    fmt = "dimacs" if path.endswith((".col", ".dimacs", ".clq")) else "json"
    if fmt == "json" and text.lstrip()[:1] not in ("{", ""):
        fmt = "dimacs"
    return parse_graph(text, fmt)


# -- generators --------------------------------------------------------------

def generate_standard(family: str, n: int) -> Graph:
    if not isinstance(n, int) or n < 1:
        raise InvalidParameter(f"n must be a positive integer, got {n!r}")
    if family == "cycle":
        if n < 3:
            raise InvalidParameter("a cycle needs at least 3 vertices")
        return Graph(n, [(i, (i + 1) % n) for i in range(n)])
    if family == "complete":
        return Graph(n, itertools.combinations(range(n), 2))
    if family == "empty":
        return Graph(n, [])
    raise InvalidParameter(f"unknown family {family!r}")


def generate_qite(k: int) -> Graph:
    """The k-Qite graph: a k-clique ``0..k-1``, spokes ``i ~ i+k`` and a hub ``2k``
    adjacent to every ``k..2k-1``."""
    if not isinstance(k, int) or k < 2:
        raise InvalidParameter(f"k-Qite needs k >= 2, got {k!r}")
    edges = list(itertools.combinations(range(k), 2))
    edges += [(i, i + k) for i in range(k)]
    edges += [(k + i, 2 * k) for i in range(k)]
    return Graph(2 * k + 1, edges)


MERMIN_SETTINGS = ("ZXX", "XZX", "XXZ", "ZZZ")


def mermin_events() -> list[tuple[int, tuple[int, int, int]]]:
    """The 16 events ``(setting index, outcomes)`` in fixed lexicographic order."""
    events = []
    for s, _ in enumerate(MERMIN_SETTINGS):
        parity = -1 if s == 3 else 1
        for a in itertools.product((-1, 1), repeat=3):
            if a[0] * a[1] * a[2] == parity:
                events.append((s, a))
    return events


def generate_mermin() -> Graph:
    """Exclusivity graph of the 16 events in the tripartite Mermin Bell operator.

    Two events are exclusive when some party measures the same Pauli in both
    settings but reports different outcomes.
    """
    events = mermin_events()
    edges = []
    for (u, (s, a)), (v, (t, b)) in itertools.combinations(enumerate(events), 2):
        x, y = MERMIN_SETTINGS[s], MERMIN_SETTINGS[t]
        if any(x[j] == y[j] and a[j] != b[j] for j in range(3)):
            edges.append((u, v))
    labels = [
        MERMIN_SETTINGS[s] + ":" + "".join("+" if o > 0 else "-" for o in a)
        for s, a in events
    ]
    return Graph(len(events), edges, labels=labels)


# -- independence number -----------------------------------------------------

def _integer_weights(g: Graph) -> tuple[list[int], int]:
    if g.weights is None:
        return [1] * g.n, 1
    den = 1
    for w in g.weights:
        den = den * w.denominator // math.gcd(den, w.denominator)
    return [int(w * den) for w in g.weights], den


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def independence_number(g: Graph) -> tuple[Fraction, StableSet]:
    """Exact (weighted) independence number by branch and bound.

    The bound at each node is a greedy clique cover of the remaining
    candidates: a stable set meets each clique at most once, so the sum of
    the heaviest weight per clique bounds what the candidates can add.
    """
    if g.n == 0:
        return Fraction(0), StableSet(frozenset(), Fraction(0))
    w, den = _integer_weights(g)
    adj = g.adjacency_masks()
    order = sorted(range(g.n), key=lambda v: (-w[v], v))

    def cover_bound(cand: int) -> int:
        total = 0
        rest = cand
        while rest:
            # heaviest remaining vertex seeds the clique
            for v in order:
                if rest >> v & 1:
                    break
            clique_ok = adj[v] & rest
            rest &= ~(1 << v)
            total += w[v]
            for u in order:
                if clique_ok >> u & 1:
                    rest &= ~(1 << u)
                    clique_ok &= adj[u]
        return total

    # greedy start so the incumbent is never empty
    best_val = 0
    best_set = 0
    cand = (1 << g.n) - 1
    cur = 0
    while cand:
        v = next(u for u in order if cand >> u & 1)
        cur |= 1 << v
        best_val += w[v]
        cand &= ~(adj[v] | (1 << v))
    best_set = cur

    stack = [((1 << g.n) - 1, 0, 0)]
    while stack:
        cand, chosen, val = stack.pop()
        if not cand:
            if val > best_val:
                best_val, best_set = val, chosen
            continue
        if val + cover_bound(cand) <= best_val:
            continue
        # branch on the candidate with the most candidate neighbours
        v = max(_bits(cand), key=lambda u: (bin(adj[u] & cand).count("1"), w[u], -u))
        # exclusion pushed first so inclusion is explored first
        stack.append((cand & ~(1 << v), chosen, val))
        stack.append((cand & ~(adj[v] | (1 << v)), chosen | (1 << v), val + w[v]))

    members = frozenset(_bits(best_set))
    value = Fraction(best_val, den)
    return value, StableSet(members, value)


def is_stable(g: Graph, vertices: Iterable[int]) -> bool:
    vs = list(vertices)
    return all(not g.has_edge(i, j) for i, j in itertools.combinations(vs, 2))
