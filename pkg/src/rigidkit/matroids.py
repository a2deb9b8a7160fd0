"""Generic matrices of graphs and their rank functions.

Each matroid kind is the row matroid of a matrix whose rows are edges and
whose column blocks are vertices, evaluated at a "generic" point. Generic
points are simulated by uniform points of a large prime field: a rank
observed at a random point never exceeds the generic rank, and falls short
of it with probability at most rank/prime per trial (Schwartz-Zippel).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from math import comb

import numpy as np

from rigidkit import linalg
from rigidkit.graphs import (
    BipartiteGraph,
    Graph,
    GraphError,
    SemisimpleGraph,
    complete_graph,
)
from rigidkit.linalg import DEFAULT_PRIME, DenseMatrix


class KindMismatchError(GraphError):
    """The graph class does not fit the matroid kind."""


class PropertyViolation(AssertionError):
    """A checked property failed even after re-running with more trials."""


@dataclass(frozen=True)
class MatroidKind:
    def __post_init__(self):
        if any(int(x) < 1 for x in self.__dict__.values()):
            raise ValueError(f"matroid dimensions must be positive: {self!r}")

    @property
    def dim(self) -> int:
        return self.d

    @property
    def name(self) -> str:
        return type(self).__name__

    def describe(self) -> dict:
        return {"kind": self.name, **self.__dict__}

    def check_graph(self, g: Graph) -> None:
        raise NotImplementedError


def _check_semisimple(kind, g, allow_loops):
    if not isinstance(g, SemisimpleGraph):
        raise KindMismatchError(f"{kind.name} expects a SemisimpleGraph, got {type(g).__name__}")
    if not allow_loops and g.loops:
        raise KindMismatchError(f"{kind.name} is defined on loopless graphs")


@dataclass(frozen=True)
class SymCompletion(MatroidKind):
    d: int

    def check_graph(self, g):
        _check_semisimple(self, g, allow_loops=True)


@dataclass(frozen=True)
class Hyperconnectivity(MatroidKind):
    d: int

    def check_graph(self, g):
        _check_semisimple(self, g, allow_loops=False)


@dataclass(frozen=True)
class Rigidity(MatroidKind):
    d: int

    def check_graph(self, g):
        _check_semisimple(self, g, allow_loops=False)


@dataclass(frozen=True)
class BirigidityAB(MatroidKind):
    """(a,b)-birigidity; class A of the graph plays X (points in F^a), B plays Y."""

    a: int
    b: int

    @property
    def dim(self) -> int:
        if self.a != self.b:
            raise ValueError(f"{self} has no single extension dimension")
        return self.a

    def check_graph(self, g):
        if not isinstance(g, BipartiteGraph):
            raise KindMismatchError(f"{self.name} expects a BipartiteGraph, got {type(g).__name__}")


@dataclass(frozen=True)
class Birigidity(BirigidityAB):
    """d-birigidity, i.e. (d,d)-birigidity."""

    def __init__(self, d: int):
        object.__setattr__(self, "a", d)
        object.__setattr__(self, "b", d)
        self.__post_init__()

    @property
    def d(self) -> int:
        return self.a

    def describe(self) -> dict:
        return {"kind": self.name, "d": self.d}

    def __repr__(self):
        return f"Birigidity(d={self.d})"


@dataclass(frozen=True)
class RankQueryConfig:
    trials: int = 3
    prime: int = DEFAULT_PRIME
    rng_seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        linalg.check_prime(self.prime)

    def boosted(self, factor: int = 4) -> RankQueryConfig:
        return replace(self, trials=self.trials * factor)


DEFAULT_CONFIG = RankQueryConfig()


@dataclass(frozen=True, eq=False)
class GenericAssignment:
    """Field-valued points: ``p`` row per vertex (or per X vertex), ``q`` per Y vertex."""

    kind: MatroidKind
    p: np.ndarray
    q: np.ndarray | None = None
    prime: int = DEFAULT_PRIME
    rng_seed: int | None = None

    @classmethod
    def draw(cls, g: Graph, kind: MatroidKind, prime: int = DEFAULT_PRIME,
             rng_seed: int = 0, trial: int = 0) -> GenericAssignment:
        rng = np.random.default_rng([int(rng_seed), int(trial)])
        if isinstance(kind, BirigidityAB):
            p = rng.integers(0, prime, size=(g.a, kind.a), dtype=np.uint64)
            q = rng.integers(0, prime, size=(g.b, kind.b), dtype=np.uint64)
            return cls(kind, p, q, prime, rng_seed)
        p = rng.integers(0, prime, size=(g.n, kind.d), dtype=np.uint64)
        return cls(kind, p, None, prime, rng_seed)


def _neg(x: np.ndarray, prime: int) -> np.ndarray:
    return (np.uint64(prime) - x) % np.uint64(prime)


def _sub(x: np.ndarray, y: np.ndarray, prime: int) -> np.ndarray:
    return (x + _neg(y, prime)) % np.uint64(prime)


def build_matrix(g: Graph, kind: MatroidKind, assignment: GenericAssignment,
                 edges=None) -> DenseMatrix:
    """The |E| x (columns) matrix of ``kind`` at ``assignment``.

    ``edges`` restricts (and orders) the rows; by default all edges of ``g``
    in canonical order.
    """
    kind.check_graph(g)
    rows = list(g.edges if edges is None else edges)
    prime = assignment.prime
    if isinstance(kind, BirigidityAB):
        a, b = kind.a, kind.b
        cols = b * g.a + a * g.b
        m = np.zeros((len(rows), cols), dtype=np.uint64)
        for r, (x, y) in enumerate(rows):
            j = y - g.a
            m[r, x * b:(x + 1) * b] = assignment.q[j]
            off = g.a * b + j * a
            m[r, off:off + a] = assignment.p[x]
        return DenseMatrix(m, prime)
    d = kind.d
    p = assignment.p
    m = np.zeros((len(rows), d * g.n), dtype=np.uint64)
    for r, (u, v) in enumerate(rows):
        if u == v:
            if not isinstance(kind, SymCompletion):
                raise KindMismatchError(f"loop {u} not allowed under {kind.name}")
            m[r, u * d:(u + 1) * d] = p[u]
        elif isinstance(kind, SymCompletion):
            m[r, u * d:(u + 1) * d] = p[v]
            m[r, v * d:(v + 1) * d] = p[u]
        elif isinstance(kind, Hyperconnectivity):
            m[r, u * d:(u + 1) * d] = p[v]
            m[r, v * d:(v + 1) * d] = _neg(p[u], prime)
        elif isinstance(kind, Rigidity):
            m[r, u * d:(u + 1) * d] = _sub(p[u], p[v], prime)
            m[r, v * d:(v + 1) * d] = _sub(p[v], p[u], prime)
        else:
            raise KindMismatchError(f"unknown kind {kind!r}")
    return DenseMatrix(m, prime)


def _assignments(g: Graph, kind: MatroidKind, config: RankQueryConfig):
    for t in range(config.trials):
        yield GenericAssignment.draw(g, kind, config.prime, config.rng_seed, t)


def generic_rank(g: Graph, kind: MatroidKind, config: RankQueryConfig = DEFAULT_CONFIG) -> int:
    """Max of the evaluated rank over ``config.trials`` seeded random points."""
    kind.check_graph(g)
    if g.num_edges == 0:
        return 0
    return max(linalg.rank(build_matrix(g, kind, asg)) for asg in _assignments(g, kind, config))


def best_assignment(g: Graph, kind: MatroidKind,
                    config: RankQueryConfig = DEFAULT_CONFIG) -> tuple[GenericAssignment, int]:
    """The first trial point attaining the generic-rank estimate, with that rank."""
    best = None
    for asg in _assignments(g, kind, config):
        r = linalg.rank(build_matrix(g, kind, asg)) if g.num_edges else 0
        if best is None or r > best[1]:
            best = (asg, r)
    return best


def generic_basis(g: Graph, kind: MatroidKind, config: RankQueryConfig = DEFAULT_CONFIG,
                  edge_order=None) -> list:
    """A greedy M-basis of ``g`` (edges, in the given priority order)."""
    order = list(g.edges if edge_order is None else edge_order)
    asg, _ = best_assignment(g, kind, config)
    keep = linalg.row_basis(build_matrix(g, kind, asg, edges=order))
    return [order[i] for i in keep]


def rank_formula(kind: MatroidKind, sizes) -> int:
    """Rank of the complete ambient graph of the given size(s)."""
    if isinstance(kind, BirigidityAB):
        m, n = sizes
        a, b = kind.a, kind.b
        if isinstance(kind, Birigidity):
            d = kind.d
            return d * (m + n) - d * d if min(m, n) >= d else m * n
        return b * m + a * n - a * b if m >= a and n >= b else m * n
    n = sizes[0] if isinstance(sizes, (tuple, list)) else sizes
    d = kind.d
    if isinstance(kind, SymCompletion):
        return d * n - comb(d, 2) if n >= d else comb(n + 1, 2)
    if isinstance(kind, Hyperconnectivity):
        return d * n - comb(d + 1, 2) if n >= d else comb(n, 2)
    raise ValueError(f"no closed-form rank for {kind.name}")


def is_independent(g: Graph, kind: MatroidKind, config: RankQueryConfig = DEFAULT_CONFIG) -> bool:
    return generic_rank(g, kind, config) == g.num_edges


def is_rigid(g: Graph, kind: MatroidKind, config: RankQueryConfig = DEFAULT_CONFIG) -> bool:
    """Whether E(g) spans the matroid of g's ambient complete graph."""
    kind.check_graph(g)
    if isinstance(kind, BirigidityAB) and not isinstance(kind, Birigidity):
        if g.a >= kind.a and g.b >= kind.b:
            return generic_rank(g, kind, config) == rank_formula(kind, g.sizes)
        return g.is_complete()
    if isinstance(kind, Rigidity):
        return generic_rank(g, kind, config) == generic_rank(complete_graph(g.n), kind, config)
    return generic_rank(g, kind, config) == rank_formula(kind, g.sizes)


def is_ambient_pair(g: Graph, kind: MatroidKind, u: int, v: int) -> bool:
    if not (0 <= u < g.n and 0 <= v < g.n):
        return False
    if isinstance(kind, BirigidityAB):
        return g.side(u) != g.side(v)
    if isinstance(kind, SymCompletion):
        return True
    return u != v


def ambient_pairs(g: Graph, kind: MatroidKind):
    for u, v in itertools.combinations_with_replacement(range(g.n), 2):
        if is_ambient_pair(g, kind, u, v):
            yield (u, v)


def is_linked(g: Graph, kind: MatroidKind, u: int, v: int,
              config: RankQueryConfig = DEFAULT_CONFIG, base_rank: int | None = None) -> bool:
    """r(E) == r(E + uv), both estimated with the same config."""
    if not is_ambient_pair(g, kind, u, v):
        raise GraphError(f"({u}, {v}) is not an edge of the ambient graph for {kind.name}")
    if g.has_edge(u, v):
        return True
    r0 = generic_rank(g, kind, config) if base_rank is None else base_rank
    return generic_rank(g.add_edge(u, v), kind, config) == r0


def linked_pairs(g: Graph, kind: MatroidKind, config: RankQueryConfig = DEFAULT_CONFIG) -> list:
    r0 = generic_rank(g, kind, config)
    return [e for e in ambient_pairs(g, kind)
            if not g.has_edge(*e) and is_linked(g, kind, *e, config=config, base_rank=r0)]


def closure(g: Graph, kind: MatroidKind, config: RankQueryConfig = DEFAULT_CONFIG) -> Graph:
    """The M-closure: g plus every linked ambient pair."""
    return g.with_edges(linked_pairs(g, kind, config))


def is_closed(g: Graph, kind: MatroidKind, config: RankQueryConfig = DEFAULT_CONFIG) -> bool:
    return not linked_pairs(g, kind, config)


def cycle_matroid_rank(g: Graph) -> int:
    """n - #components (loops are ignored)."""
    return g.n - len(g.components())


def _bipartite_component(g: Graph, comp: list[int]) -> bool:
    colour = {comp[0]: 0}
    stack = [comp[0]]
    while stack:
        x = stack.pop()
        for y in g.neighbors(x):
            if y == x:
                return False
            if y not in colour:
                colour[y] = 1 - colour[x]
                stack.append(y)
            elif colour[y] == colour[x]:
                return False
    return True


def even_cycle_rank(g: Graph) -> int:
    """Rank in the even cycle matroid: |C| per non-bipartite component, |C|-1 otherwise."""
    return sum(len(c) - (1 if _bipartite_component(g, c) else 0) for c in g.components())


def rigidity_completability_link_check(g: SemisimpleGraph, d: int,
                                       config: RankQueryConfig = DEFAULT_CONFIG) -> bool:
    """d-rigidity of g agrees with (d+1)-completability of g°."""
    from rigidkit.graphs import add_loops

    if g.loops:
        raise GraphError("link check expects a loopless graph")
    rigid = is_rigid(g, Rigidity(d), config)
    completable = is_rigid(add_loops(g), SymCompletion(d + 1), config)
    return rigid == completable


def parse_kind(name: str, d: int | None = None, ab: tuple[int, int] | None = None) -> MatroidKind:
    """Kind from a CLI-style name: sym | hyper | birigid | ab | rigid."""
    key = name.lower().replace("_", "-")
    if key in ("ab", "birigid-ab", "birigidity-ab"):
        if ab is None:
            raise ValueError("(a,b)-birigidity needs a and b")
        return BirigidityAB(*ab)
    if d is None:
        raise ValueError(f"{name} needs a dimension")
    table = {
        "sym": SymCompletion, "symcompletion": SymCompletion, "completion": SymCompletion,
        "hyper": Hyperconnectivity, "hyperconnectivity": Hyperconnectivity,
        "birigid": Birigidity, "birigidity": Birigidity,
        "rigid": Rigidity, "rigidity": Rigidity,
    }
    if key not in table:
        raise ValueError(f"unknown matroid kind {name!r}")
    return table[key](d)
