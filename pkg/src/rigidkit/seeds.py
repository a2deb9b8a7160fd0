"""M-seeds: verification, small-seed construction, cover sampling, deletable pairs.

A vertex set K is a seed of G (for a matroid M and dimension d) when
r(G) = r(G[K]) + d|V - K| and every vertex outside K can be reached by
repeatedly adding a vertex with at least d neighbours in the current set
(a loop at the added vertex counts as one of them). Reachability is tested
via :func:`greedy_closure`, which is order-independent because eligibility
only grows with the current set.

Rank equalities are evaluated with one :class:`RankQueryConfig`; when an
asserted equality fails, it is re-checked once with four times the trials
before a :class:`PropertyViolation` is raised.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from rigidkit import linalg
from rigidkit.graphs import BipartiteGraph, Graph, GraphError
from rigidkit.matroids import (
    DEFAULT_CONFIG,
    MatroidKind,
    PropertyViolation,
    RankQueryConfig,
    best_assignment,
    build_matrix,
    generic_basis,
    generic_rank,
    is_ambient_pair,
    is_linked,
)


class SeedError(GraphError):
    pass


class ChainError(SeedError):
    pass


class CoverError(SeedError):
    """Some vertex has fewer than d candidate neighbours to cover it."""


class HypothesisError(SeedError):
    pass


def _retry(check, config: RankQueryConfig) -> bool:
    return check(config) or check(config.boosted())


def _subrank(g: Graph, kind: MatroidKind, keep: Iterable[int], config: RankQueryConfig) -> int:
    return generic_rank(g.induced_subgraph(keep), kind, config)


def _without(g: Graph, drop: Iterable[int]) -> list[int]:
    gone = set(drop)
    return [x for x in range(g.n) if x not in gone]


# -- greedy closure -----------------------------------------------------------

def _greedy(g: Graph, d: int, start: Iterable[int]):
    """Closure of ``start`` plus the elimination order (smallest eligible first)."""
    current = set(start)
    for v in current:
        g._check_vertex(v)
    count = [len(g.neighbors(x) & current) + (g.has_loop(x) and x not in current)
             for x in range(g.n)]
    heap = [x for x in range(g.n) if x not in current and count[x] >= d]
    heapq.heapify(heap)
    order = []
    while heap:
        x = heapq.heappop(heap)
        if x in current:
            continue
        current.add(x)
        order.append(x)
        for y in g.neighbors(x):
            if y != x and y not in current:
                count[y] += 1
                if count[y] == d:
                    heapq.heappush(heap, y)
    return frozenset(current), order


def greedy_closure(g: Graph, d: int, start: Iterable[int]) -> frozenset:
    """The largest superset of ``start`` reachable by degree-d greedy additions."""
    return _greedy(g, d, start)[0]


def eligible(g: Graph, d: int, current: Iterable[int], x: int) -> bool:
    """|(current + x) ∩ N(x)| >= d."""
    cur = set(current)
    cur.add(x)
    return len(g.neighbors(x) & cur) >= d


# -- certificates -------------------------------------------------------------

@dataclass(frozen=True)
class SeedCertificate:
    """A seed K with a greedy elimination order of V - K and an M-basis of G[K].

    ``witnesses[i]`` lists every neighbour of ``order[i]`` inside
    K ∪ {order[0..i]}; ``basis_edges`` use the labels of G.
    """

    seed: tuple[int, ...]
    order: tuple[int, ...]
    witnesses: tuple[tuple[int, ...], ...]
    basis_edges: tuple[tuple[int, int], ...]
    d: int
    rank: int
    info: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {
            "seed": list(self.seed),
            "order": list(self.order),
            "witnesses": [list(w) for w in self.witnesses],
            "basis_edges": [list(e) for e in self.basis_edges],
            "d": self.d,
            "rank": self.rank,
            "info": self.info,
        }

    @classmethod
    def from_json(cls, doc: dict) -> SeedCertificate:
        return cls(tuple(doc["seed"]), tuple(doc["order"]),
                   tuple(tuple(w) for w in doc["witnesses"]),
                   tuple(tuple(e) for e in doc["basis_edges"]),
                   doc["d"], doc["rank"], dict(doc.get("info", {})))

    def extension_edges(self) -> list[tuple[int, int]]:
        """Edges of the 0-extensions replaying the order (first d witnesses each)."""
        out = []
        for v, wit in zip(self.order, self.witnesses):
            out.extend((min(v, w), max(v, w)) for w in wit[: self.d])
        return out

    def replay(self, g: Graph) -> Graph:
        """The spanning subgraph of ``g`` built from the basis of G[K] by 0-extensions."""
        return g.edge_subgraph(sorted(set(self.basis_edges) | set(self.extension_edges())))


def _certificate(g: Graph, kind: MatroidKind, seed, order, rank, config, info=None):
    d = kind.dim
    placed = set(seed)
    witnesses = []
    for v in order:
        placed.add(v)
        witnesses.append(tuple(sorted(g.neighbors(v) & placed)))
    keep = sorted(seed)
    sub = g.induced_subgraph(keep)
    back = dict(enumerate(keep))  # induced_subgraph relabels in increasing order
    basis = tuple(sorted((min(back[u], back[v]), max(back[u], back[v]))
                         for u, v in generic_basis(sub, kind, config)))
    return SeedCertificate(tuple(keep), tuple(order), tuple(witnesses), basis, d, rank,
                           dict(info or {}))


def is_seed(g: Graph, kind: MatroidKind, seed: Iterable[int],
            config: RankQueryConfig = DEFAULT_CONFIG) -> tuple[bool, SeedCertificate | None]:
    """Check both seed conditions; on success also return a certificate."""
    d = kind.dim
    seed = frozenset(seed)
    closed, order = _greedy(g, d, seed)
    if len(closed) != g.n:
        return False, None
    r = generic_rank(g, kind, config)
    if r != _subrank(g, kind, seed, config) + d * (g.n - len(seed)):
        return False, None
    return True, _certificate(g, kind, seed, order, r, config)


def _verified_seed(g, kind, seed, config, what):
    ok, cert = is_seed(g, kind, seed, config)
    if not ok:
        ok, cert = is_seed(g, kind, seed, config.boosted())
    if not ok:
        raise PropertyViolation(f"{what}: {sorted(seed)} failed the seed check")
    return cert


# -- chains and Lemma-style seed construction ---------------------------------

@dataclass(frozen=True)
class SeedChain:
    """Nested vertex sets X_0 ⊆ X_1 ⊆ ... ⊆ X_t = V."""

    levels: tuple[frozenset, ...]

    @classmethod
    def of(cls, *levels: Iterable[int]) -> SeedChain:
        return cls(tuple(frozenset(x) for x in levels))

    @property
    def t(self) -> int:
        return len(self.levels) - 1

    def validate(self, g: Graph, d: int) -> None:
        if not self.levels:
            raise ChainError("a chain needs at least one level")
        if self.levels[-1] != frozenset(range(g.n)):
            raise ChainError("the last level must be the whole vertex set")
        for i in range(1, len(self.levels)):
            prev, cur = self.levels[i - 1], self.levels[i]
            if not prev <= cur:
                raise ChainError(f"level {i - 1} is not contained in level {i}")
            for v in sorted(cur - prev):
                if len(g.neighbors(v) & prev) < d:
                    raise ChainError(f"vertex {v} of level {i} has fewer than {d} "
                                     f"neighbours in level {i - 1}")

    def to_json(self) -> list:
        return [sorted(x) for x in self.levels]


def layered_chain(g: Graph, d: int, x0: Iterable[int]) -> SeedChain:
    """The chain whose next level adds every vertex with d neighbours in the current one."""
    levels = [frozenset(x0)]
    while len(levels[-1]) < g.n:
        cur = levels[-1]
        grow = {v for v in range(g.n) if v not in cur and len(g.neighbors(v) & cur) >= d}
        if not grow:
            raise ChainError(f"levels stall at {len(cur)} of {g.n} vertices")
        levels.append(cur | grow)
    return SeedChain(tuple(levels))


def seed_size_bound(x0: int, d: int, t: int) -> Fraction:
    """2|X_0| d^(t+1) / (d-1), for d >= 2."""
    return Fraction(2 * x0 * d ** (t + 1), d - 1)


def find_seed(g: Graph, kind: MatroidKind, chain: SeedChain,
              config: RankQueryConfig = DEFAULT_CONFIG) -> SeedCertificate:
    """Build a seed from a chain via back edges, a basis extension and Y-sets."""
    d = kind.dim
    chain.validate(g, d)
    x0 = chain.levels[0]
    level = {}
    for i, lv in enumerate(chain.levels):
        for v in lv:
            level.setdefault(v, i)

    # back edges: each new vertex to its d smallest neighbours one level down
    targets: dict[int, list[int]] = {}
    back_edges = []
    for v in sorted(range(g.n), key=lambda x: (level[x], x)):
        i = level[v]
        if i == 0:
            continue
        targets[v] = sorted(g.neighbors(v) & chain.levels[i - 1])[:d]
        back_edges.extend((min(v, u), max(v, u)) for u in targets[v])

    back_set = set(back_edges)

    def extend(cfg):
        rest = [e for e in g.edges if e not in back_set]
        order = back_edges + rest
        asg, _ = best_assignment(g, kind, cfg)
        keep = linalg.row_basis(build_matrix(g, kind, asg, edges=order)) if order else []
        if sum(1 for i in keep if i < len(back_edges)) != len(back_edges):
            return None
        return [order[i] for i in keep if i >= len(back_edges)]

    extra = extend(config)
    if extra is None:
        extra = extend(config.boosted())
    if extra is None:
        raise PropertyViolation("back-edge subgraph is not independent; rank anomaly")

    ysets: dict[int, frozenset] = {}
    for v in sorted(targets, key=lambda x: (level[x], x)):
        acc = {v}
        for u in targets[v]:
            acc |= ysets.get(u, frozenset())
        ysets[v] = frozenset(acc)

    touched = {x for e in extra for x in e}
    z = touched - x0
    seed = set(x0)
    for v in z:
        seed |= ysets[v]

    info = {"x0": len(x0), "t": chain.t, "extra_edges": len(extra), "z": len(z),
            "seed_size": len(seed)}
    if d >= 2:
        bound = seed_size_bound(len(x0), d, chain.t)
        info["bound"] = float(bound)
        if len(seed) > bound:
            raise PropertyViolation(f"seed of size {len(seed)} exceeds bound {bound}")
    if len(extra) > d * len(x0):
        info["extra_edges_exceed"] = True
    cert = _verified_seed(g, kind, seed, config, "find_seed")
    return SeedCertificate(cert.seed, cert.order, cert.witnesses, cert.basis_edges,
                           cert.d, cert.rank, info)


# -- cover sets -----------------------------------------------------------------

def _patch(g: Graph, d: int, chosen: set, pool, targets) -> set:
    for v in sorted(targets):
        have = g.neighbors(v) & chosen
        if len(have) >= d:
            continue
        spare = sorted((g.neighbors(v) & pool) - chosen)
        need = d - len(have)
        if len(spare) < need:
            raise CoverError(f"vertex {v} has fewer than {d} candidate neighbours")
        chosen.update(spare[:need])
    return chosen


def sample_cover_set(g: Graph, d: int, sample_probability: float, rng,
                     pool: Iterable[int] | None = None,
                     targets: Iterable[int] | None = None) -> frozenset:
    """Random X_0 ⊆ pool with |N(v) ∩ X_0| >= d for every target v.

    Each pool vertex is kept independently with the given probability; every
    target still short of d neighbours then receives the missing ones (smallest
    labels first) from its neighbours in the pool.
    """
    pool = frozenset(range(g.n) if pool is None else pool)
    targets = frozenset(range(g.n) if targets is None else targets)
    if not 0 <= sample_probability <= 1:
        raise ValueError("sample_probability must lie in [0, 1]")
    for v in targets:
        if len(g.neighbors(v) & pool) < d:
            raise CoverError(f"vertex {v} has fewer than {d} candidate neighbours")
    order = sorted(pool)
    draws = rng.random(len(order))
    chosen = {v for v, u in zip(order, draws) if u < sample_probability}
    return frozenset(_patch(g, d, chosen, pool, targets))


def greedy_cover_set(g: Graph, d: int, pool: Iterable[int] | None = None,
                     targets: Iterable[int] | None = None) -> frozenset:
    """Deterministic cover: repeatedly take the pool vertex helping most deficient targets."""
    pool = frozenset(range(g.n) if pool is None else pool)
    targets = frozenset(range(g.n) if targets is None else targets)
    for v in targets:
        if len(g.neighbors(v) & pool) < d:
            raise CoverError(f"vertex {v} has fewer than {d} candidate neighbours")
    chosen: set[int] = set()
    short = {v: d for v in targets}
    while short:
        best = max(sorted(pool - chosen),
                   key=lambda x: sum(1 for y in g.neighbors(x) if y in short))
        chosen.add(best)
        for y in g.neighbors(best):
            if y in short:
                short[y] -= 1
                if short[y] == 0:
                    del short[y]
    return frozenset(chosen)


# -- deletable pairs and linked neighbours --------------------------------------

@dataclass(frozen=True)
class DeletablePair:
    u: int
    v: int
    ranks: tuple[int, int, int, int]  # r(G), r(G-u), r(G-v), r(G-u-v)
    grown_seed: tuple[int, ...]

    def to_json(self) -> dict:
        return {"u": self.u, "v": self.v, "ranks": list(self.ranks),
                "grown_seed": list(self.grown_seed)}


def _uncovered_edge(g: Graph, covered: set) -> bool:
    return any(u not in covered and v not in covered for u, v in g.non_loop_edges)


def deletable_pair(g: Graph, kind: MatroidKind, seed: Iterable[int],
                   config: RankQueryConfig = DEFAULT_CONFIG) -> DeletablePair:
    """An edge uv outside the seed whose ends drop the rank by d each, 2d together."""
    d = kind.dim
    seed = set(seed)
    if g.min_degree() < d + 2:
        raise HypothesisError(f"minimum degree {g.min_degree()} < d + 2 = {d + 2}")
    if not _uncovered_edge(g, seed):
        raise HypothesisError("every non-loop edge meets the seed")
    _verified_seed(g, kind, seed, config, "deletable_pair input")

    grown = set(seed)
    progress = True
    while progress:
        progress = False
        for x in range(g.n):
            if x in grown or not eligible(g, d, grown, x):
                continue
            if _uncovered_edge(g, grown | {x}):
                grown.add(x)
                progress = True
                break
    rest = sorted(set(range(g.n)) - grown)
    if len(rest) != 2 or not g.has_edge(*rest):
        raise PropertyViolation(f"seed growth stopped with complement {rest}")
    u, v = rest

    def chain(cfg):
        r = (generic_rank(g, kind, cfg),
             _subrank(g, kind, _without(g, [u]), cfg),
             _subrank(g, kind, _without(g, [v]), cfg),
             _subrank(g, kind, _without(g, [u, v]), cfg))
        return r, r[0] == r[1] + d == r[2] + d == r[3] + 2 * d

    ranks, ok = chain(config)
    if not ok:
        ranks, ok = chain(config.boosted())
    if not ok:
        raise PropertyViolation(f"rank chain fails for ({u}, {v}): {ranks}")
    return DeletablePair(u, v, ranks, tuple(sorted(grown)))


def linked_neighbour_pairs(g: Graph, kind: MatroidKind, u: int, v: int,
                           config: RankQueryConfig = DEFAULT_CONFIG) -> frozenset:
    """Pairs certified linked by a 2d rank drop at edge uv (or a d drop at looped v if u == v).

    Every certified pair is re-checked with :func:`is_linked`.
    """
    d = kind.dim
    if g.min_degree() < d + 1:
        raise HypothesisError(f"minimum degree {g.min_degree()} < d + 1 = {d + 1}")
    if u != v:
        if not g.has_edge(u, v):
            raise HypothesisError(f"({u}, {v}) is not an edge")
        drop = 2 * d
        gone = [u, v]
        xs = sorted(g.neighbors(u) - {u, v})
        ys = sorted(g.neighbors(v) - {u, v})
        cand = {(min(x, y), max(x, y)) for x in xs for y in ys}
    else:
        if not g.has_loop(v):
            raise HypothesisError(f"vertex {v} carries no loop")
        drop = d
        gone = [v]
        nb = sorted(g.neighbors(v) - {v})
        cand = {(x, y) for i, x in enumerate(nb) for y in nb[i + 1:]}
    cand = sorted(e for e in cand if is_ambient_pair(g, kind, *e))

    def holds(cfg):
        return generic_rank(g, kind, cfg) == _subrank(g, kind, _without(g, gone), cfg) + drop

    if not _retry(holds, config):
        raise HypothesisError(f"rank does not drop by {drop} when deleting {gone}")

    def all_linked(cfg):
        base = generic_rank(g, kind, cfg)
        return [e for e in cand if not is_linked(g, kind, *e, config=cfg, base_rank=base)]

    bad = all_linked(config)
    if bad:
        bad = all_linked(config.boosted())
    if bad:
        raise PropertyViolation(f"certified pairs not linked: {bad}")
    return frozenset(cand)


# -- seeds in biconnected bipartite graphs --------------------------------------

@dataclass(frozen=True)
class BiconnectedSeedResult:
    ok: bool
    certificate: SeedCertificate | None
    reason: str | None
    stats: dict

    def to_json(self) -> dict:
        return {"ok": self.ok, "reason": self.reason, "stats": self.stats,
                "certificate": None if self.certificate is None else self.certificate.to_json()}


def biconnected_seed(g: BipartiteGraph, kind: MatroidKind, k: int,
                     config: RankQueryConfig = DEFAULT_CONFIG, rng=None) -> BiconnectedSeedResult:
    """Seed via a minimum cover A, the low-degree part A', a sampled X_0 ⊆ A and a 3-level chain.

    Failures (impossible cover, broken chain) are reported in the result.
    """
    from rigidkit.connectivity import min_vertex_cover

    if not isinstance(g, BipartiteGraph):
        raise GraphError("biconnected_seed needs a bipartite graph")
    rng = np.random.default_rng(config.rng_seed) if rng is None else rng
    d = kind.dim
    cover = frozenset(min_vertex_cover(g))
    low = frozenset(v for v in cover if len(g.neighbors(v) & cover) <= k - d)
    prob = (d - 1) / (4 * d ** 3)
    tau = len(cover)
    stats = {"tau": tau, "low_cover": len(low), "sample_probability": prob,
             "eta": prob * tau + d * g.n / math.exp(30 * d)}
    targets = frozenset(range(g.n)) - low
    try:
        x0 = sample_cover_set(g, d, prob, rng, pool=cover, targets=targets)
    except CoverError as exc:
        return BiconnectedSeedResult(False, None, f"cover: {exc}", stats)
    stats["x0"] = len(x0)
    chain = SeedChain.of(x0, x0 | targets, range(g.n))
    try:
        chain.validate(g, d)
    except ChainError as exc:
        return BiconnectedSeedResult(False, None, f"chain: {exc}", stats)
    cert = find_seed(g, kind, chain, config)
    stats["seed"] = len(cert.seed)
    stats["seed_below_tau"] = len(cert.seed) < tau
    return BiconnectedSeedResult(True, cert, None, stats)
