"""Graph carriers, the text/JSON graph format, and the named graph families.

Vertices are dense integers ``0..n-1``. A :class:`BipartiteGraph` uses the
same flat numbering with class A first (``0..a-1``) and class B after it
(``a..a+b-1``); ``(side, index)`` addressing goes through :meth:`flat` and
:meth:`unflat`. Edges are kept as sorted ``(u, v)`` pairs with ``u <= v``, in
lexicographic order, which fixes the row order of every matrix built later.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Union

Edge = tuple[int, int]


class GraphError(ValueError):
    pass


class GraphFormatError(GraphError):
    """Base class for parse failures."""


class MalformedHeaderError(GraphFormatError):
    pass


class MalformedLineError(GraphFormatError):
    pass


class VertexRangeError(GraphFormatError):
    pass


class DuplicateEdgeError(GraphFormatError):
    pass


class BipartiteLoopError(GraphFormatError):
    pass


class SameClassEdgeError(GraphFormatError):
    pass


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u <= v else (v, u)


class _GraphBase:
    n: int
    edges: tuple[Edge, ...]

    @cached_property
    def _adj(self) -> tuple[frozenset, ...]:
        nb: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nb[u].add(v)
            nb[v].add(u)
        return tuple(frozenset(s) for s in nb)

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    @property
    def vertices(self) -> range:
        return range(self.n)

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range for n={self.n}")

    def neighbors(self, v: int) -> frozenset:
        """N(v); contains v itself iff v carries a loop."""
        self._check_vertex(v)
        return self._adj[v]

    def degree(self, v: int) -> int:
        # a loop contributes one
        return len(self.neighbors(v))

    def min_degree(self) -> int:
        return min((len(s) for s in self._adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return _norm(u, v) in self.edge_set

    def has_loop(self, v: int) -> bool:
        self._check_vertex(v)
        return v in self._adj[v]

    @property
    def loops(self) -> list[int]:
        return [u for u, v in self.edges if u == v]

    @property
    def non_loop_edges(self) -> list[Edge]:
        return [e for e in self.edges if e[0] != e[1]]

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def components(self, removed: Iterable[int] = ()) -> list[list[int]]:
        """Connected components of G - removed, each sorted, ordered by minimum."""
        gone = set(removed)
        seen = set(gone)
        comps = []
        for s in range(self.n):
            if s in seen:
                continue
            seen.add(s)
            comp = [s]
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in self._adj[x]:
                    if y not in seen:
                        seen.add(y)
                        comp.append(y)
                        queue.append(y)
            comps.append(sorted(comp))
        return comps

    def is_connected(self, removed: Iterable[int] = ()) -> bool:
        return len(self.components(removed)) <= 1

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g


@dataclass(frozen=True)
class SemisimpleGraph(_GraphBase):
    """Loops allowed (at most one per vertex), no parallel edges."""

    n: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise GraphError("vertex count must be non-negative")
        seen = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise VertexRangeError(f"edge ({u}, {v}) out of range for n={self.n}")
            e = _norm(u, v)
            if e in seen:
                raise DuplicateEdgeError(f"duplicate edge {e}")
            seen.add(e)
        object.__setattr__(self, "edges", tuple(sorted(seen)))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> SemisimpleGraph:
        """Build while silently merging repeated pairs."""
        return cls(n, tuple({_norm(int(u), int(v)) for u, v in edges}))

    @property
    def kind(self) -> str:
        return "semisimple"

    @property
    def sizes(self) -> tuple[int, ...]:
        return (self.n,)

    @property
    def is_simple(self) -> bool:
        return all(u != v for u, v in self.edges)

    def add_edge(self, u: int, v: int) -> SemisimpleGraph:
        self._check_vertex(u)
        self._check_vertex(v)
        if self.has_edge(u, v):
            return self
        return SemisimpleGraph(self.n, self.edges + (_norm(u, v),))

    def delete_edge(self, u: int, v: int) -> SemisimpleGraph:
        e = _norm(u, v)
        if e not in self.edge_set:
            raise GraphError(f"edge {e} not present")
        return SemisimpleGraph(self.n, tuple(x for x in self.edges if x != e))

    def with_edges(self, edges: Iterable[Edge]) -> SemisimpleGraph:
        return SemisimpleGraph.from_edges(self.n, list(self.edges) + list(edges))

    def edge_subgraph(self, edges: Iterable[Edge]) -> SemisimpleGraph:
        return SemisimpleGraph(self.n, tuple(edges))

    def induced_subgraph(self, keep: Iterable[int]) -> SemisimpleGraph:
        """G[K], relabelled to 0..|K|-1 in increasing order of the kept vertices."""
        order = sorted(set(keep))
        for v in order:
            self._check_vertex(v)
        index = {v: i for i, v in enumerate(order)}
        return SemisimpleGraph(
            len(order),
            tuple((index[u], index[v]) for u, v in self.edges if u in index and v in index),
        )

    def delete_vertex(self, v: int) -> SemisimpleGraph:
        self._check_vertex(v)
        return self.induced_subgraph(x for x in range(self.n) if x != v)

    def delete_vertices(self, vs: Iterable[int]) -> SemisimpleGraph:
        drop = set(vs)
        return self.induced_subgraph(x for x in range(self.n) if x not in drop)

    def to_semisimple(self) -> SemisimpleGraph:
        return self


@dataclass(frozen=True)
class BipartiteGraph(_GraphBase):
    """Bipartite graph with classes A = 0..a-1 and B = a..a+b-1 (flat indices)."""

    a: int
    b: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise GraphError("class sizes must be non-negative")
        n = self.a + self.b
        seen = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise VertexRangeError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise BipartiteLoopError(f"loop at {u} in a bipartite graph")
            e = _norm(u, v)
            if not (e[0] < self.a <= e[1]):
                raise SameClassEdgeError(f"edge {e} does not cross the bipartition")
            if e in seen:
                raise DuplicateEdgeError(f"duplicate edge {e}")
            seen.add(e)
        object.__setattr__(self, "edges", tuple(sorted(seen)))

    @classmethod
    def from_pairs(cls, a: int, b: int, pairs: Iterable[tuple[int, int]]) -> BipartiteGraph:
        """Build from class-local pairs (i in A, j in B); repeats are merged."""
        return cls(a, b, tuple({(int(i), a + int(j)) for i, j in pairs}))

    @property
    def n(self) -> int:
        return self.a + self.b

    @property
    def kind(self) -> str:
        return "bipartite"

    @property
    def sizes(self) -> tuple[int, ...]:
        return (self.a, self.b)

    @property
    def class_a(self) -> range:
        return range(self.a)

    @property
    def class_b(self) -> range:
        return range(self.a, self.a + self.b)

    def side(self, v: int) -> int:
        self._check_vertex(v)
        return 0 if v < self.a else 1

    def flat(self, side: int, index: int) -> int:
        if side == 0 and 0 <= index < self.a:
            return index
        if side == 1 and 0 <= index < self.b:
            return self.a + index
        raise IndexError(f"({side}, {index}) out of range for classes ({self.a}, {self.b})")

    def unflat(self, v: int) -> tuple[int, int]:
        return (0, v) if self.side(v) == 0 else (1, v - self.a)

    @property
    def is_simple(self) -> bool:
        return True

    def is_complete(self) -> bool:
        return self.num_edges == self.a * self.b

    def add_edge(self, u: int, v: int) -> BipartiteGraph:
        self._check_vertex(u)
        self._check_vertex(v)
        if self.has_edge(u, v):
            return self
        return BipartiteGraph(self.a, self.b, self.edges + (_norm(u, v),))

    def delete_edge(self, u: int, v: int) -> BipartiteGraph:
        e = _norm(u, v)
        if e not in self.edge_set:
            raise GraphError(f"edge {e} not present")
        return BipartiteGraph(self.a, self.b, tuple(x for x in self.edges if x != e))

    def with_edges(self, edges: Iterable[Edge]) -> BipartiteGraph:
        return BipartiteGraph(self.a, self.b,
                              tuple({_norm(u, v) for u, v in list(self.edges) + list(edges)}))

    def edge_subgraph(self, edges: Iterable[Edge]) -> BipartiteGraph:
        return BipartiteGraph(self.a, self.b, tuple(edges))

    def induced_subgraph(self, keep: Iterable[int]) -> BipartiteGraph:
        """G[K] with classes K∩A and K∩B, relabelled in increasing order."""
        order = sorted(set(keep))
        for v in order:
            self._check_vertex(v)
        left = [v for v in order if v < self.a]
        right = [v for v in order if v >= self.a]
        index = {v: i for i, v in enumerate(left + right)}
        return BipartiteGraph(
            len(left), len(right),
            tuple((index[u], index[v]) for u, v in self.edges if u in index and v in index),
        )

    def delete_vertex(self, v: int) -> BipartiteGraph:
        self._check_vertex(v)
        return self.induced_subgraph(x for x in range(self.n) if x != v)

    def delete_vertices(self, vs: Iterable[int]) -> BipartiteGraph:
        drop = set(vs)
        return self.induced_subgraph(x for x in range(self.n) if x not in drop)

    def to_semisimple(self) -> SemisimpleGraph:
        return SemisimpleGraph(self.n, self.edges)


Graph = Union[SemisimpleGraph, BipartiteGraph]


def to_semisimple(g: Graph) -> SemisimpleGraph:
    return g.to_semisimple()


# -- generators --------------------------------------------------------------


def empty_graph(n: int) -> SemisimpleGraph:
    return SemisimpleGraph(n)


def complete_graph(n: int) -> SemisimpleGraph:
    return SemisimpleGraph(n, tuple(itertools.combinations(range(n), 2)))


def complete_semisimple(n: int) -> SemisimpleGraph:
    return SemisimpleGraph(n, tuple(itertools.combinations_with_replacement(range(n), 2)))


def complete_bipartite(m: int, n: int) -> BipartiteGraph:
    return BipartiteGraph(m, n, tuple((i, m + j) for i in range(m) for j in range(n)))


def complete_tripartite(m1: int, m2: int, m3: int) -> SemisimpleGraph:
    if min(m1, m2, m3) < 0:
        raise GraphError("class sizes must be non-negative")
    cls = [0] * m1 + [1] * m2 + [2] * m3
    n = len(cls)
    return SemisimpleGraph(
        n, tuple((u, v) for u, v in itertools.combinations(range(n), 2) if cls[u] != cls[v])
    )


def cycle_graph(n: int) -> SemisimpleGraph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return SemisimpleGraph(n, tuple(_norm(i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> SemisimpleGraph:
    return SemisimpleGraph(n, tuple((i, i + 1) for i in range(max(n - 1, 0))))


def add_loops(g: SemisimpleGraph) -> SemisimpleGraph:
    """G°: one loop at every vertex of a loopless graph."""
    if isinstance(g, BipartiteGraph):
        g = g.to_semisimple()
    if g.loops:
        raise GraphError("add_loops expects a loopless graph")
    return SemisimpleGraph(g.n, g.edges + tuple((v, v) for v in range(g.n)))


def circulant_bipartite(s: int, k: int) -> BipartiteGraph:
    """x_i joined to y_i, ..., y_{i+k-1} (indices mod s); k-regular on s + s vertices."""
    if not 1 <= k <= s:
        raise GraphError(f"need 1 <= k <= s, got s={s}, k={k}")
    return BipartiteGraph.from_pairs(s, s, ((i, (i + j) % s) for i in range(s) for j in range(k)))


def ly_split_family(a: int, b: int, s: int) -> BipartiteGraph:
    """Split construction on circulant_bipartite(s, 2ab - 1).

    Each base vertex v becomes a set A_v of k pendant attachment points (one
    per base edge at v) and a set B_v of k vertices, with A_v x B_v complete.
    Class X holds A_v for v in X0 and B_v for v in Y0; class Y the rest.
    """
    if a < 1 or b < 1:
        raise GraphError("a and b must be positive")
    k = 2 * a * b - 1
    if s % 2 or not s > k >= a * b:
        raise GraphError(f"need s even and s > 2ab-1 >= ab; got a={a}, b={b}, s={s}")
    base = circulant_bipartite(s, k)
    # X-side layout: A_x for base x in X0 (blocks 0..s-1), then B_y for y in Y0.
    # Y-side layout: B_x for x in X0, then A_y for y in Y0.
    def ax(i, t):
        return i * k + t

    def by_(j, t):
        return s * k + j * k + t

    def bx(i, t):
        return i * k + t

    def ay(j, t):
        return s * k + j * k + t

    pairs = []
    port = {v: 0 for v in range(2 * s)}
    for u, v in base.edges:
        i, j = u, v - s
        pairs.append((ax(i, port[u]), ay(j, port[v])))
        port[u] += 1
        port[v] += 1
    for i in range(s):
        pairs.extend((ax(i, t), bx(i, r)) for t in range(k) for r in range(k))
    for j in range(s):
        pairs.extend((by_(j, r), ay(j, t)) for t in range(k) for r in range(k))
    return BipartiteGraph.from_pairs(2 * s * k, 2 * s * k, pairs)


def critical_family(k: int, p: int) -> BipartiteGraph:
    """p copies of K_{k,k} glued along B_i - b_i and along the a_i.

    Class A: shared a (index 0), then the k-1 private vertices of each A_i.
    Class B: the k-1 shared vertices of B_i - b_i, then b_1..b_p.
    """
    if k < 1 or p < 1:
        raise GraphError("k and p must be positive")
    na = 1 + p * (k - 1)
    nb = (k - 1) + p
    pairs = set()
    for i in range(p):
        side_a = [0] + [1 + i * (k - 1) + t for t in range(k - 1)]
        side_b = list(range(k - 1)) + [k - 1 + i]
        pairs.update((x, y) for x in side_a for y in side_b)
    return BipartiteGraph.from_pairs(na, nb, pairs)


FAMILIES = {
    "complete": (complete_graph, ("n",)),
    "complete-semisimple": (complete_semisimple, ("n",)),
    "complete-bipartite": (complete_bipartite, ("m", "n")),
    "complete-tripartite": (complete_tripartite, ("m1", "m2", "m3")),
    "cycle": (cycle_graph, ("n",)),
    "path": (path_graph, ("n",)),
    "circulant-bipartite": (circulant_bipartite, ("s", "k")),
    "ly-split": (ly_split_family, ("a", "b", "s")),
    "critical": (critical_family, ("k", "p")),
}


# -- serialization -----------------------------------------------------------


@dataclass(frozen=True)
class GraphDocument:
    graph: Graph
    name: str | None = None
    parameters: dict = field(default_factory=dict)


def _header(g: Graph) -> str:
    if isinstance(g, BipartiteGraph):
        return f"bipartite {g.a} {g.b}"
    return f"semisimple {g.n}"


def serialize(g: Graph) -> str:
    lines = [_header(g)] + [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def serialize_document(doc: GraphDocument) -> str:
    meta = []
    if doc.name is not None:
        meta.append(f"# name: {doc.name}")
    if doc.parameters:
        meta.append(f"# parameters: {json.dumps(doc.parameters, sort_keys=True)}")
    return "\n".join(meta + [serialize(doc.graph)])


def _parse_int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise MalformedLineError(f"line {lineno}: expected an integer, got {tok!r}") from None


def parse_document(text: str) -> GraphDocument:
    name = None
    params: dict = {}
    header = None
    edges: list[Edge] = []
    seen: set[Edge] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line, _, comment = raw.partition("#")
        comment = comment.strip()
        if header is None and not line.strip():
            if comment.startswith("name:"):
                name = comment[5:].strip()
            elif comment.startswith("parameters:"):
                params = json.loads(comment[11:])
            continue
        toks = line.split()
        if not toks:
            continue
        if header is None:
            if toks[0] == "semisimple" and len(toks) == 2:
                header = ("semisimple", _parse_int(toks[1], lineno))
            elif toks[0] == "bipartite" and len(toks) == 3:
                header = ("bipartite", _parse_int(toks[1], lineno), _parse_int(toks[2], lineno))
            else:
                raise MalformedHeaderError(f"line {lineno}: bad header {line.strip()!r}")
            if min(header[1:]) < 0:
                raise MalformedHeaderError(f"line {lineno}: negative size")
            continue
        if len(toks) != 2:
            raise MalformedLineError(f"line {lineno}: expected 'u v', got {line.strip()!r}")
        u, v = (_parse_int(t, lineno) for t in toks)
        n = header[1] if header[0] == "semisimple" else header[1] + header[2]
        if not (0 <= u < n and 0 <= v < n):
            raise VertexRangeError(f"line {lineno}: vertex out of range in {u} {v}")
        if header[0] == "bipartite" and u == v:
            raise BipartiteLoopError(f"line {lineno}: loop {u} {v} in a bipartite graph")
        e = _norm(u, v)
        if e in seen:
            raise DuplicateEdgeError(f"line {lineno}: duplicate edge {u} {v}")
        seen.add(e)
        edges.append(e)
    if header is None:
        raise MalformedHeaderError("missing header line")
    if header[0] == "semisimple":
        g: Graph = SemisimpleGraph(header[1], tuple(edges))
    else:
        g = BipartiteGraph(header[1], header[2], tuple(edges))
    return GraphDocument(g, name, params)


def parse(text: str) -> Graph:
    return parse_document(text).graph


def to_json(g: Graph, name: str | None = None, parameters: dict | None = None) -> dict:
    doc = {"kind": g.kind, "sizes": list(g.sizes), "edges": [list(e) for e in g.edges]}
    if name is not None:
        doc["name"] = name
    if parameters:
        doc["parameters"] = parameters
    return doc


def from_json(doc: dict) -> Graph:
    kind = doc.get("kind")
    sizes = doc.get("sizes", [])
    edges = tuple(_norm(int(u), int(v)) for u, v in doc.get("edges", []))
    if len(set(edges)) != len(edges):
        raise DuplicateEdgeError("duplicate edge in JSON document")
    if kind == "semisimple" and len(sizes) == 1:
        return SemisimpleGraph(int(sizes[0]), edges)
    if kind == "bipartite" and len(sizes) == 2:
        return BipartiteGraph(int(sizes[0]), int(sizes[1]), edges)
    raise MalformedHeaderError(f"bad kind/sizes: {kind!r} {sizes!r}")


def load(path) -> Graph:
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return from_json(json.loads(text))
    return parse(text)


# -- random graphs (test and sweep plumbing) ---------------------------------


def random_graph(n: int, prob: float, rng, loops: float = 0.0) -> SemisimpleGraph:
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < prob]
    edges += [(v, v) for v in range(n) if loops and rng.random() < loops]
    return SemisimpleGraph(n, tuple(edges))


def random_bipartite(a: int, b: int, prob: float, rng) -> BipartiteGraph:
    return BipartiteGraph.from_pairs(
        a, b, [(i, j) for i in range(a) for j in range(b) if rng.random() < prob]
    )
