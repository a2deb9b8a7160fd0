"""Vertex connectivity, k-biconnectivity, vertex covers, separators, pairings, certificates.

Loops never affect connectivity and are ignored here (except that a looped
vertex must belong to every vertex cover). Local connectivity is computed by
unit-capacity max flow on the vertex-split digraph; every flow accepts a
``limit`` so that "is it at least k" questions stop after k augmentations.
"""

from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from rigidkit.graphs import BipartiteGraph, Graph, GraphError, SemisimpleGraph
from rigidkit.matroids import PropertyViolation


class ConnectivityError(GraphError):
    pass


class SearchLimitError(ConnectivityError):
    """An enumeration would exceed its configured cap."""


class PreconditionError(ConnectivityError):
    pass


class PairingAnomaly(PropertyViolation):
    """The disjoint-path construction did not expose a length-two subpath."""


def _simple_adj(g: Graph) -> list[set[int]]:
    return [set(g.neighbors(v)) - {v} for v in range(g.n)]


# -- max flow on the vertex-split digraph ---------------------------------------

class _SplitFlow:
    """Vertex v becomes in-node 2v and out-node 2v+1 joined by an arc of capacity c(v)."""

    def __init__(self, adj: Sequence[Iterable[int]], s: int, t: int,
                 cuttable=None, removed: Iterable[int] = ()):
        n = len(adj)
        self.inf = n + 1
        self.s, self.t = s, t
        gone = set(removed)
        self.cap: dict[tuple[int, int], int] = {}
        self.out: list[list[int]] = [[] for _ in range(2 * n)]
        for v in range(n):
            if v in gone:
                continue
            unit = v not in (s, t) and (cuttable is None or v in cuttable)
            self._arc(2 * v, 2 * v + 1, 1 if unit else self.inf)
            if v == t:
                continue
            for w in sorted(adj[v]):
                if w != v and w not in gone and w != s:
                    self._arc(2 * v + 1, 2 * w, self.inf)
        self.orig = dict(self.cap)
        self.value = 0
        self.saturated = True

    def _arc(self, a, b, c):
        if (a, b) not in self.cap:
            self.out[a].append(b)
            self.out[b].append(a)
            self.cap.setdefault((b, a), 0)
        self.cap[(a, b)] = self.cap.get((a, b), 0) + c

    def _bfs(self):
        src = 2 * self.s + 1
        parent = {src: None}
        queue = deque([src])
        while queue:
            a = queue.popleft()
            for b in self.out[a]:
                if b not in parent and self.cap[(a, b)] > 0:
                    parent[b] = a
                    queue.append(b)
        return parent

    def run(self, limit: int | None = None) -> int:
        sink = 2 * self.t
        while limit is None or self.value < limit:
            parent = self._bfs()
            if sink not in parent:
                return self.value
            path = []
            b = sink
            while parent[b] is not None:
                path.append((parent[b], b))
                b = parent[b]
            push = min(self.cap[e] for e in path)
            if limit is not None:
                push = min(push, limit - self.value)
            for a, b in path:
                self.cap[(a, b)] -= push
                self.cap[(b, a)] += push
            self.value += push
        self.saturated = False
        return self.value

    def min_cut(self) -> list[int] | None:
        """Cut vertices of a minimum cut (None if the run stopped at its limit)."""
        if not self.saturated or self.value >= self.inf:
            return None
        reach = self._bfs()
        return sorted(v for v in range(len(self.out) // 2)
                      if 2 * v in reach and 2 * v + 1 not in reach)

    def paths(self) -> list[list[int]]:
        """Decompose the flow into vertex paths s -> t (smallest next vertex first)."""
        left = {e: self.orig[e] - self.cap[e] for e in self.orig if self.orig[e] > self.cap[e]}
        out = []
        for _ in range(self.value):
            node, walk = 2 * self.s + 1, [self.s]
            while node != 2 * self.t:
                nxt = min(b for b in self.out[node] if left.get((node, b), 0) > 0)
                left[(node, nxt)] -= 1
                if nxt % 2 == 0:
                    walk.append(nxt // 2)
                node = nxt
            out.append(walk)
        return out


def local_connectivity(g: Graph, u: int, v: int, limit: int | None = None) -> int:
    """κ(u,v;G): the maximum number of internally disjoint u-v paths."""
    g._check_vertex(u)
    g._check_vertex(v)
    if u == v:
        raise ConnectivityError("local connectivity needs two distinct vertices")
    adj = _simple_adj(g)
    direct = 0
    if v in adj[u]:
        adj[u].discard(v)
        adj[v].discard(u)
        direct = 1
        if limit is not None:
            limit -= 1
            if limit <= 0:
                return direct
    return direct + _SplitFlow(adj, u, v).run(limit)


def min_vertex_cut(g: Graph, u: int, v: int) -> list[int]:
    """A minimum set of vertices (other than u, v) separating nonadjacent u and v."""
    if u == v or g.has_edge(u, v):
        raise ConnectivityError("u and v must be distinct and nonadjacent")
    net = _SplitFlow(_simple_adj(g), u, v)
    net.run()
    return net.min_cut()


def vertex_connectivity(g: Graph) -> int:
    """κ(G); complete graphs on n vertices give n - 1."""
    n = g.n
    if n <= 1:
        return 0
    if not g.is_connected():
        return 0
    adj = _simple_adj(g)
    best = n - 1
    for i in range(n):
        if i > best:
            break
        for j in range(n):
            if j == i or j in adj[i]:
                continue
            best = min(best, _SplitFlow(adj, i, j).run(best))
    return best


def is_k_connected(g: Graph, k: int) -> bool:
    return g.n >= k + 1 and vertex_connectivity(g) >= k


def is_critically_k_connected(g: Graph, k: int) -> bool:
    if not is_k_connected(g, k):
        return False
    return all(not is_k_connected(g.delete_vertex(v), k) for v in range(g.n))


# -- k-biconnectivity -----------------------------------------------------------

@dataclass(frozen=True)
class BiconnectivityResult:
    ok: bool
    witness: tuple[int, ...] | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def is_k_biconnected(g: BipartiteGraph, k: int) -> BiconnectivityResult:
    """Exact test; on failure ``witness`` is a disconnecting W with ≤ k-1 vertices per class.

    If κ(G) >= 2k-1 the answer is yes. Otherwise every W_1 ⊆ (smaller class)
    with |W_1| ≤ k-1 is tried, and flows in which only the other class may be
    cut look for a disconnecting W_2 with |W_2| ≤ k-1.
    """
    if not isinstance(g, BipartiteGraph):
        raise GraphError("k-biconnectivity is defined for bipartite graphs")
    if k < 1:
        raise ValueError("k must be positive")
    if g.a < k or g.b < k:
        return BiconnectivityResult(False, None, "a class has fewer than k vertices")
    if vertex_connectivity(g) >= 2 * k - 1:
        return BiconnectivityResult(True, None, "(2k-1)-connected")
    first, second = (g.class_a, g.class_b) if g.a <= g.b else (g.class_b, g.class_a)
    adj = _simple_adj(g)
    cuttable = frozenset(second)
    for size in range(k):
        for w1 in itertools.combinations(first, size):
            gone = set(w1)
            s = next(x for x in first if x not in gone)
            for t in range(g.n):
                if t == s or t in gone or t in adj[s]:
                    continue
                net = _SplitFlow(adj, s, t, cuttable=cuttable, removed=gone)
                if net.run(k) <= k - 1:
                    w = tuple(sorted(gone | set(net.min_cut())))
                    return BiconnectivityResult(False, w, "disconnecting set")
    return BiconnectivityResult(True, None, "exhaustive")


def is_critically_k_biconnected(g: BipartiteGraph, k: int) -> bool:
    if not is_k_biconnected(g, k):
        return False
    return all(not is_k_biconnected(g.delete_vertex(v), k) for v in range(g.n))


# -- matchings and vertex covers ------------------------------------------------

def maximum_matching(g: BipartiteGraph) -> dict[int, int]:
    """Maximum matching (augmenting paths); maps each matched vertex to its partner."""
    mate: dict[int, int] = {}

    def augment(x, seen):
        for y in sorted(g.neighbors(x)):
            if y in seen:
                continue
            seen.add(y)
            if y not in mate or augment(mate[y], seen):
                mate[x], mate[y] = y, x
                return True
        return False

    for x in g.class_a:
        if x not in mate:
            augment(x, set())
    return mate


def konig_cover(g: BipartiteGraph) -> list[int]:
    """Minimum vertex cover from a maximum matching (König's construction)."""
    mate = maximum_matching(g)
    reach = set()
    queue = deque(x for x in g.class_a if x not in mate)
    reach.update(queue)
    while queue:
        x = queue.popleft()
        for y in g.neighbors(x):
            if y in reach or mate.get(x) == y:
                continue
            reach.add(y)
            z = mate.get(y)
            if z is not None and z not in reach:
                reach.add(z)
                queue.append(z)
    return sorted([x for x in g.class_a if x not in reach] + [y for y in g.class_b if y in reach])


def vertex_cover_bnb(g: Graph) -> list[int]:
    """Exact minimum vertex cover by branch and bound (looped vertices are forced)."""
    forced = set(g.loops)
    adj = {v: set(g.neighbors(v)) - {v} - forced for v in range(g.n) if v not in forced}
    adj = {v: s for v, s in adj.items() if s}
    best = [sorted(forced | set(adj))]

    def lower(a):
        # size of a greedy maximal matching
        used, m = set(), 0
        for v in sorted(a):
            if v in used:
                continue
            w = next((w for w in sorted(a[v]) if w not in used), None)
            if w is not None:
                used.update((v, w))
                m += 1
        return m

    def drop(a, vs):
        out = {}
        for v, s in a.items():
            if v in vs:
                continue
            rest = s - vs
            if rest:
                out[v] = rest
        return out

    def search(a, chosen):
        if not a:
            if len(chosen) < len(best[0]):
                best[0] = sorted(chosen)
            return
        if len(chosen) + lower(a) >= len(best[0]):
            return
        v = max(sorted(a), key=lambda x: len(a[x]))
        if len(a[v]) == 1:
            # a leaf-only remainder: take the neighbour of a degree-one vertex
            leaf = min(x for x in a if len(a[x]) == 1)
            w = next(iter(a[leaf]))
            search(drop(a, {w}), chosen | {w})
            return
        search(drop(a, {v}), chosen | {v})
        nb = set(a[v])
        search(drop(a, nb | {v}), chosen | nb)

    search(adj, set(forced))
    return best[0]


def min_vertex_cover(g: Graph) -> list[int]:
    """Exact τ-cover: König for bipartite graphs, branch and bound otherwise."""
    if isinstance(g, BipartiteGraph):
        return konig_cover(g)
    return vertex_cover_bnb(g)


# -- essential separators -------------------------------------------------------

@dataclass(frozen=True)
class SeparatorReport:
    separator: tuple[int, ...]
    side_counts: tuple[int, int] | None
    components: tuple[tuple[int, ...], ...]
    touches_all: tuple[bool, ...]

    @property
    def essential(self) -> bool:
        return len(self.components) >= 2 and all(self.touches_all)

    def to_json(self) -> dict:
        return {"separator": list(self.separator),
                "side_counts": None if self.side_counts is None else list(self.side_counts),
                "components": [list(c) for c in self.components],
                "essential": self.essential}


def separator_report(g: Graph, s: Iterable[int]) -> SeparatorReport:
    s = tuple(sorted(set(s)))
    comps = tuple(tuple(c) for c in g.components(removed=s))
    touches = tuple(all(g.neighbors(x) & set(c) for c in comps) for x in s)
    sides = None
    if isinstance(g, BipartiteGraph):
        na = sum(1 for x in s if x < g.a)
        sides = (na, len(s) - na)
    return SeparatorReport(s, sides, comps, touches)


def _candidates(g: Graph, k: int, mode: str):
    if mode == "general":
        yield from itertools.combinations(range(g.n), k)
        return
    if not isinstance(g, BipartiteGraph):
        raise GraphError("bipartite mode needs a bipartite graph")
    seen = set()
    for big, small in ((g.class_a, g.class_b), (g.class_b, g.class_a)):
        for head in itertools.combinations(big, k):
            for size in range(k):
                for tail in itertools.combinations(small, size):
                    s = tuple(sorted(head + tail))
                    if s not in seen:
                        seen.add(s)
                        yield s


def _candidate_count(g: Graph, k: int, mode: str) -> int:
    if mode == "general":
        return comb(g.n, k)
    return sum(comb(x, k) * sum(comb(y, j) for j in range(k))
               for x, y in ((g.a, g.b), (g.b, g.a)))


def essential_separators(g: Graph, k: int, mode: str = "general",
                         cap: int = 2_000_000) -> list[SeparatorReport]:
    """All essential separators, sorted by vertex tuple.

    ``bipartite``: k vertices in one class and at most k-1 in the other;
    ``general``: exactly k vertices. In both modes every separator vertex
    needs a neighbour in every component of G - S.
    """
    if mode not in ("general", "bipartite"):
        raise ValueError(f"unknown mode {mode!r}")
    total = _candidate_count(g, k, mode)
    if total > cap:
        raise SearchLimitError(f"{total} candidate separators exceed the cap {cap}")
    out = [r for r in (separator_report(g, s) for s in _candidates(g, k, mode)) if r.essential]
    return sorted(out, key=lambda r: r.separator)


# -- pairings -------------------------------------------------------------------

@dataclass
class Pairing:
    """f: X̂ -> V x V with the multigraph G^f_X and its simple support F."""

    k: int
    mode: str
    domain: tuple[int, ...]
    mapping: dict[int, tuple[int, int]]
    separators: dict[int, tuple[int, ...]]
    missing: tuple[int, ...] = ()
    checks: dict = field(default_factory=dict)

    @property
    def multiset(self) -> Counter:
        return Counter((min(u, v), max(u, v)) for u, v in self.mapping.values())

    @property
    def support(self) -> list[tuple[int, int]]:
        return sorted(self.multiset)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "mode": self.mode,
            "domain": list(self.domain),
            "missing": list(self.missing),
            "pairs": {str(x): list(self.mapping[x]) for x in self.domain},
            "separators": {str(x): list(self.separators[x]) for x in self.domain},
            "multiplicities": [[u, v, c] for (u, v), c in sorted(self.multiset.items())],
            "checks": self.checks,
        }


def _assert(cond: bool, what: str) -> None:
    if not cond:
        raise PropertyViolation(what)


def build_pairing_bipartite(g: BipartiteGraph, k: int, xs: Iterable[int],
                            separators: list[SeparatorReport] | None = None,
                            require_full: bool = True) -> Pairing:
    """For each x: the smallest essential S ∋ x and the smallest neighbour pair split by S."""
    xs = sorted(set(xs))
    seps = essential_separators(g, k, "bipartite") if separators is None else separators
    mapping, used, missing = {}, {}, []
    for x in xs:
        rep = next((r for r in seps if x in r.separator), None)
        if rep is None:
            missing.append(x)
            continue
        where = {v: i for i, c in enumerate(rep.components) for v in c}
        nb = sorted(v for v in g.neighbors(x) if v in where)
        pair = min((u, v) for u, v in itertools.combinations(nb, 2) if where[u] != where[v])
        mapping[x], used[x] = pair, rep.separator
    if missing and require_full:
        raise PreconditionError(f"no essential separator contains {missing}")
    pairing = Pairing(k, "bipartite", tuple(sorted(mapping)), mapping, used, tuple(missing))
    mult = pairing.multiset
    pairing.checks = {
        "edge_count": sum(mult.values()),
        "domain_size": len(pairing.domain),
        "disjoint_from_graph": not any(g.has_edge(*e) for e in mult),
        "max_multiplicity": max(mult.values(), default=0),
    }
    _assert(sum(mult.values()) == len(pairing.domain), "G^f_X edge count differs from |X̂|")
    _assert(pairing.checks["disjoint_from_graph"], "a pairing edge is an edge of G")
    _assert(pairing.checks["max_multiplicity"] <= k, "a pairing edge has multiplicity > k")
    return pairing


def _covering_sequence(seps: list[SeparatorReport], xs: set[int]) -> list[SeparatorReport]:
    seq, left = [], set(xs)
    while left:
        best = max(seps, key=lambda r: (len(left & set(r.separator)),
                                        tuple(-v for v in r.separator)))
        if not left & set(best.separator):
            raise PreconditionError(f"no essential separator contains {sorted(left)}")
        seq.append(best)
        left -= set(best.separator)
    # pruning pass: drop separators whose X-vertices are covered by the rest
    i = 0
    while i < len(seq):
        rest = set().union(*(set(r.separator) for j, r in enumerate(seq) if j != i))
        if xs <= rest:
            seq.pop(i)
        else:
            i += 1
    return seq


def build_pairing_general(g: Graph, k: int, xs: Iterable[int],
                          separators: list[SeparatorReport] | None = None) -> Pairing:
    """The sequential disjoint-path pairing for critically k-connected graphs."""
    xs = set(xs)
    if g.n < 3 * k - 1:
        raise PreconditionError(f"need at least 3k-1 = {3 * k - 1} vertices")
    seps = essential_separators(g, k, "general") if separators is None else separators
    seq = _covering_sequence(seps, xs)
    adj = _simple_adj(g)
    mapping, used, done = {}, {}, set()
    for rep in seq:
        s = set(rep.separator)
        fresh = sorted((s & xs) - done)
        comps = sorted(rep.components, key=lambda c: (len(c), c[0]))
        rest_size = g.n - k
        comp = next((c for c in comps if rest_size - len(c) >= k), None)
        if comp is None:
            raise PreconditionError(f"separator {rep.separator} leaves no component with k others")
        side_c = set(comp)
        side_d = set(range(g.n)) - s - side_c
        p = g.n
        ext = [set(a) for a in adj] + [set(sorted(side_d)[:k])]
        for v in ext[p]:
            ext[v].add(p)
        net = _SplitFlow(ext, p, min(comp))
        if net.run() < k:
            raise PreconditionError("fewer than k disjoint paths; graph not k-connected")
        for path in net.paths():
            for i, x in enumerate(path[1:-1], start=1):
                if x not in fresh:
                    continue
                before, after = path[i - 1], path[i + 1]
                if before not in side_d or after not in side_c:
                    raise PairingAnomaly(f"x={x} on path {path} lacks a D-x-C subpath")
                mapping[x], used[x] = (after, before), rep.separator
        done |= s
    missing = sorted(xs - set(mapping))
    if missing:
        raise PairingAnomaly(f"no pair assigned to {missing}")
    pairing = Pairing(k, "general", tuple(sorted(mapping)), mapping, used)
    mult = pairing.multiset
    pairing.checks = {
        "sequence": [list(r.separator) for r in seq],
        "simple": max(mult.values(), default=0) <= 1,
        "disjoint_from_graph": not any(g.has_edge(*e) for e in mult),
        "neighbours": all(u in g.neighbors(x) and v in g.neighbors(x)
                          for x, (u, v) in mapping.items()),
    }
    _assert(pairing.checks["simple"], "G^f_X is not simple")
    _assert(pairing.checks["disjoint_from_graph"], "a pairing edge is an edge of G")
    _assert(pairing.checks["neighbours"], "a pair is not inside N(x)")
    return pairing


# -- sparse local certificates --------------------------------------------------

@dataclass
class SparseCertificate:
    graph: Graph
    k: int
    forests: list[list[tuple[int, int]]]
    checks: dict = field(default_factory=dict)

    @property
    def edge_count(self) -> int:
        return self.graph.num_edges

    def to_json(self) -> dict:
        return {"k": self.k, "n": self.graph.n, "edge_count": self.edge_count,
                "edges": [list(e) for e in self.graph.edges],
                "forest_sizes": [len(f) for f in self.forests], "checks": self.checks}


def forest_partition(g: Graph) -> list[list[tuple[int, int]]]:
    """Scan-first (maximum adjacency) forest partition E_1, E_2, ... of the non-loop edges."""
    adj = _simple_adj(g)
    r = [0] * g.n
    scanned = [False] * g.n
    forests: list[list[tuple[int, int]]] = []
    for _ in range(g.n):
        v = max((x for x in range(g.n) if not scanned[x]), key=lambda x: (r[x], -x))
        scanned[v] = True
        for w in sorted(adj[v]):
            if scanned[w]:
                continue
            r[w] += 1
            while len(forests) < r[w]:
                forests.append([])
            forests[r[w] - 1].append((min(v, w), max(v, w)))
    return forests


def sparse_local_certificate(g: Graph, k: int, verify: bool = True) -> SparseCertificate:
    """H = E_1 ∪ ... ∪ E_k, with the edge bound and local connectivity checked."""
    if k < 1:
        raise ValueError("k must be positive")
    forests = forest_partition(g)[:k]
    edges = sorted(e for f in forests for e in f)
    h = SemisimpleGraph(g.n, tuple(edges))
    cert = SparseCertificate(h, k, forests)
    n = g.n
    cert.checks["edge_bound"] = k * n - comb(k + 1, 2) if n > k else None
    if n > k:
        _assert(len(edges) <= k * n - comb(k + 1, 2), "certificate exceeds kn - C(k+1, 2) edges")
    if verify:
        bad = [(u, v) for u, v in itertools.combinations(range(n), 2)
               if local_connectivity(h, u, v, limit=k) < local_connectivity(g, u, v, limit=k)]
        cert.checks["pairs_checked"] = comb(n, 2)
        cert.checks["local_connectivity_preserved"] = not bad
        _assert(not bad, f"local connectivity drops for pairs {bad[:5]}")
    return cert


# -- the vertex-cover bound pipelines -------------------------------------------

@dataclass
class TauBoundReport:
    mode: str
    k: int
    n: int
    tau: int
    bound: Fraction
    precondition: bool
    branch: str
    inequalities: list[tuple[str, int, int, bool]] = field(default_factory=list)
    pairing: Pairing | None = None
    certificate: SparseCertificate | None = None
    claims: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return all(ok for *_, ok in self.inequalities)

    def to_json(self) -> dict:
        return {
            "mode": self.mode, "k": self.k, "n": self.n, "tau": self.tau,
            "bound": str(self.bound), "precondition": self.precondition, "branch": self.branch,
            "inequalities": [{"name": a, "lhs": b, "rhs": c, "holds": ok}
                             for a, b, c, ok in self.inequalities],
            "claims": self.claims,
            "pairing": None if self.pairing is None else self.pairing.to_json(),
            "certificate": None if self.certificate is None else self.certificate.to_json(),
        }


def _plus_graph(g: Graph, cover: list[int], extra: list[tuple[int, int]]):
    index = {v: i for i, v in enumerate(cover)}
    base = g.induced_subgraph(cover).to_semisimple()
    edges = set(base.non_loop_edges)
    edges |= {(min(index[u], index[v]), max(index[u], index[v])) for u, v in extra}
    return SemisimpleGraph(len(cover), tuple(sorted(edges))), index


def tau_bound_report(g: Graph, k: int, mode: str = "bipartite",
                     check_precondition: bool = True) -> TauBoundReport:
    """Run the cover / pairing / certificate pipeline and assert each inequality.

    ``bipartite``: τ ≥ |V|/(2k²) through |X| ≤ k|F| ≤ k|E⁺| ≤ k(2k-1)|T|;
    ``general``: τ ≥ |V|/(k+1) through |X| ≤ |F| ≤ |E⁺| ≤ k|T|. With
    ``check_precondition=False`` a failed criticality test is recorded
    instead of raised.
    """
    if mode == "bipartite":
        if not isinstance(g, BipartiteGraph):
            raise GraphError("bipartite mode needs a bipartite graph")
        pre = is_critically_k_biconnected(g, k)
        bound = Fraction(g.n, 2 * k * k)
        width = 2 * k - 1
    elif mode == "general":
        pre = is_critically_k_connected(g, k)
        bound = Fraction(g.n, k + 1)
        width = k
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if check_precondition and not pre:
        raise PreconditionError(f"graph is not critically {k}-{'bi' if mode == 'bipartite' else ''}"
                                "connected")
    cover = min_vertex_cover(g)
    tau = len(cover)
    rep = TauBoundReport(mode, k, g.n, tau, bound, pre, "main")

    small = (mode == "bipartite" and min(g.a, g.b) == k) or \
            (mode == "general" and (k < 2 or g.n <= 3 * k - 2))
    if small:
        rep.branch = "min-side" if mode == "bipartite" else "small"
    else:
        xs = sorted(set(range(g.n)) - set(cover))
        if mode == "bipartite":
            pairing = build_pairing_bipartite(g, k, xs)
        else:
            pairing = build_pairing_general(g, k, xs)
        support = pairing.support
        plus, index = _plus_graph(g, cover, support)
        f_local = [(min(index[u], index[v]), max(index[u], index[v])) for u, v in support]
        kappas = {f"{u}-{v}": local_connectivity(plus, a, b)
                  for (u, v), (a, b) in zip(support, f_local)}
        cert = sparse_local_certificate(plus, width)
        in_cert = all(cert.graph.has_edge(*e) for e in f_local)
        rep.pairing, rep.certificate = pairing, cert
        rep.claims = {"kappa_plus": kappas, "kappa_limit": width,
                      "support_in_certificate": in_cert}
        _assert(all(c <= width for c in kappas.values()),
                f"κ(u,v;G⁺) exceeds {width} on a pairing edge")
        _assert(in_cert, "a pairing edge is missing from the certificate")
        nx_, nf, ne = len(xs), len(support), cert.edge_count
        mult = k if mode == "bipartite" else 1
        rep.inequalities += [
            ("|X| <= m|F|", nx_, mult * nf, nx_ <= mult * nf),
            ("m|F| <= m|E+|", mult * nf, mult * ne, nf <= ne),
            ("m|E+| <= m*w*|T|", mult * ne, mult * width * tau, ne <= width * tau),
        ]
    rep.inequalities.append(("tau >= bound", tau, float(bound), tau >= bound))
    for name, lhs, rhs, ok in rep.inequalities:
        _assert(ok, f"{name} fails: {lhs} vs {rhs}")
    return rep
