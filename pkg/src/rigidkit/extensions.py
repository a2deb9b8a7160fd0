"""The d-dimensional 0-extension, double 1-extension and looped 1-extension.

Targets are given as vertex indices of the input graph, plus the sentinels
``NEW`` (the vertex added by a 0-extension or looped 1-extension), ``NEW_U``
and ``NEW_V`` (the two vertices added by a double 1-extension); a sentinel
among a new vertex's own targets means a loop at it.

On a :class:`BipartiteGraph` each new vertex goes to the class opposite its
targets; new A-vertices are appended to class A, which shifts the flat
indices of class B by the number of A-vertices added (see :func:`relabel`).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from rigidkit.graphs import BipartiteGraph, Graph, GraphError, SemisimpleGraph
from rigidkit.matroids import BirigidityAB, Hyperconnectivity, MatroidKind, Rigidity, SymCompletion

NEW = NEW_U = -1
NEW_V = -2


class Variant(str, Enum):
    ZERO = "zero"
    DOUBLE_ONE = "double_one"
    LOOPED_ONE = "looped_one"


class ExtensionError(GraphError):
    pass


class TargetCountError(ExtensionError):
    pass


class TargetNotAllowedError(ExtensionError):
    pass


class MissingEndpointError(ExtensionError):
    """A 1-extension target set omits the endpoint it must contain."""


class EdgeNotPresentError(ExtensionError):
    pass


class LoopEdgeError(ExtensionError):
    """Looped 1-extension on a loop (x = y)."""


class BipartitionError(ExtensionError):
    pass


@dataclass(frozen=True)
class ExtensionStep:
    variant: Variant
    d: int
    targets: tuple[int, ...] = ()
    edge: tuple[int, int] | None = None
    u_targets: tuple[int, ...] = ()
    v_targets: tuple[int, ...] = ()

    @classmethod
    def zero(cls, d, targets):
        return cls(Variant.ZERO, d, tuple(targets))

    @classmethod
    def double_one(cls, d, edge, u_targets, v_targets):
        return cls(Variant.DOUBLE_ONE, d, edge=tuple(edge),
                   u_targets=tuple(u_targets), v_targets=tuple(v_targets))

    @classmethod
    def looped_one(cls, d, edge, targets):
        return cls(Variant.LOOPED_ONE, d, tuple(targets), edge=tuple(edge))

    @property
    def adds_loop(self) -> bool:
        return NEW in self.targets or NEW_U in self.u_targets or NEW_V in self.v_targets \
            or self.variant is Variant.LOOPED_ONE


def _check_targets(targets, d, n, self_token, label):
    if len(targets) != d or len(set(targets)) != d:
        raise TargetCountError(f"{label}: need {d} distinct targets, got {list(targets)}")
    for t in targets:
        if t != self_token and not 0 <= t < n:
            raise TargetNotAllowedError(f"{label}: target {t} is not an old vertex or the new one")


def validate(g: Graph, step: ExtensionStep) -> None:
    """Raise a specific ExtensionError if ``step`` is not applicable to ``g``."""
    d = step.d
    if d < 1:
        raise TargetCountError("dimension must be positive")
    if step.variant is Variant.ZERO:
        _check_targets(step.targets, d, g.n, NEW, "0-extension")
    elif step.variant is Variant.DOUBLE_ONE:
        if step.edge is None or not g.has_edge(*step.edge):
            raise EdgeNotPresentError(f"double 1-extension: {step.edge} is not an edge")
        x, y = step.edge
        _check_targets(step.u_targets, d, g.n, NEW_U, "double 1-extension (u)")
        _check_targets(step.v_targets, d, g.n, NEW_V, "double 1-extension (v)")
        if x not in step.u_targets:
            raise MissingEndpointError(f"u's targets must include x={x}")
        if y not in step.v_targets:
            raise MissingEndpointError(f"v's targets must include y={y}")
    elif step.variant is Variant.LOOPED_ONE:
        if step.edge is None or not g.has_edge(*step.edge):
            raise EdgeNotPresentError(f"looped 1-extension: {step.edge} is not an edge")
        x, y = step.edge
        if x == y:
            raise LoopEdgeError("looped 1-extension needs a non-loop edge")
        if NEW in step.targets:
            raise TargetNotAllowedError("looped 1-extension targets must be old vertices")
        _check_targets(step.targets, d, g.n, None, "looped 1-extension")
        if x not in step.targets or y not in step.targets:
            raise MissingEndpointError(f"targets must include both x={x} and y={y}")
    else:
        raise ExtensionError(f"unknown variant {step.variant!r}")
    if isinstance(g, BipartiteGraph):
        _new_sides(g, step)


def _common_side(g: BipartiteGraph, targets, label) -> int:
    sides = {g.side(t) for t in targets if t >= 0}
    if len(sides) != 1:
        raise BipartitionError(f"{label}: targets span both classes")
    return sides.pop()


def _new_sides(g: BipartiteGraph, step: ExtensionStep) -> dict[int, int]:
    """Class (0 = A, 1 = B) of each new vertex token."""
    if step.adds_loop:
        raise BipartitionError("a bipartite extension cannot add a loop")
    if step.variant is Variant.ZERO:
        return {NEW: 1 - _common_side(g, step.targets, "0-extension")}
    su = 1 - _common_side(g, step.u_targets, "u")
    sv = 1 - _common_side(g, step.v_targets, "v")
    if su == sv:
        raise BipartitionError("double 1-extension: edge uv would not cross the bipartition")
    return {NEW_U: su, NEW_V: sv}


def relabel(g: Graph, step: ExtensionStep) -> dict[int, int]:
    """Map old vertices and new-vertex tokens to indices in ``apply(g, step)``."""
    if isinstance(g, SemisimpleGraph):
        mapping = {v: v for v in range(g.n)}
        if step.variant is Variant.DOUBLE_ONE:
            mapping.update({NEW_U: g.n, NEW_V: g.n + 1})
        else:
            mapping[NEW] = g.n
        return mapping
    sides = _new_sides(g, step)
    new_a = [tok for tok, s in sorted(sides.items(), reverse=True) if s == 0]
    new_b = [tok for tok, s in sorted(sides.items(), reverse=True) if s == 1]
    shift = len(new_a)
    mapping = {v: (v if v < g.a else v + shift) for v in range(g.n)}
    for i, tok in enumerate(new_a):
        mapping[tok] = g.a + i
    for i, tok in enumerate(new_b):
        mapping[tok] = g.n + shift + i
    return mapping


def apply(g: Graph, step: ExtensionStep) -> Graph:
    """The extended graph (a new object; ``g`` is unchanged)."""
    validate(g, step)
    mp = relabel(g, step)
    old = [(mp[u], mp[v]) for u, v in g.edges]
    if step.variant is Variant.ZERO:
        new = [(mp[NEW], mp[t]) for t in step.targets]
    else:
        x, y = step.edge
        old.remove((mp[x], mp[y]) if (mp[x], mp[y]) in old else (mp[y], mp[x]))
        if step.variant is Variant.DOUBLE_ONE:
            new = [(mp[NEW_U], mp[t]) for t in step.u_targets]
            new += [(mp[NEW_V], mp[t]) for t in step.v_targets]
            new.append((mp[NEW_U], mp[NEW_V]))
        else:
            new = [(mp[NEW], mp[t]) for t in step.targets] + [(mp[NEW], mp[NEW])]
    edges = old + [(min(u, v), max(u, v)) for u, v in new]
    if isinstance(g, BipartiteGraph):
        sides = _new_sides(g, step)
        da = sum(1 for s in sides.values() if s == 0)
        return BipartiteGraph(g.a + da, g.b + len(sides) - da, tuple(edges))
    added = 2 if step.variant is Variant.DOUBLE_ONE else 1
    return SemisimpleGraph(g.n + added, tuple(edges))


def simple_variant_allowed(step: ExtensionStep, kind: MatroidKind, g: Graph | None = None) -> bool:
    """Whether the independence-preservation results cover ``step`` for ``kind``.

    All three variants for symmetric completion; loop-free 0- and double
    1-extensions for hyperconnectivity and birigidity (which must also
    respect the bipartition when ``g`` is given).
    """
    if isinstance(kind, SymCompletion):
        return True
    if isinstance(kind, Rigidity):
        return step.variant is Variant.ZERO and not step.adds_loop
    if step.adds_loop or step.variant is Variant.LOOPED_ONE:
        return False
    if isinstance(kind, Hyperconnectivity):
        return True
    if isinstance(kind, BirigidityAB):
        if step.edge is not None and step.edge[0] == step.edge[1]:
            return False
        if g is None:
            return True
        if not isinstance(g, BipartiteGraph):
            return False
        try:
            _new_sides(g, step)
        except BipartitionError:
            return False
        return True
    return False


def random_step(g: Graph, kind: MatroidKind, d: int, variant: Variant, rng) -> ExtensionStep | None:
    """A uniformly drawn step of ``variant`` valid for ``g`` and allowed for ``kind``.

    Returns None when no such step exists.
    """
    variant = Variant(variant)
    looped = isinstance(kind, SymCompletion)
    bip = isinstance(g, BipartiteGraph)

    def pick(pool, count):
        pool = sorted(pool)
        if len(pool) < count:
            return None
        idx = rng.choice(len(pool), size=count, replace=False)
        return [pool[i] for i in sorted(idx)]

    if variant is Variant.ZERO:
        if bip:
            sides = [s for s, cls in enumerate((g.class_a, g.class_b)) if len(cls) >= d]
            if not sides:
                return None
            s = sides[rng.integers(len(sides))]
            return ExtensionStep.zero(d, pick((g.class_a, g.class_b)[s], d))
        pool = list(range(g.n)) + ([NEW] if looped else [])
        t = pick(pool, d)
        return None if t is None else ExtensionStep.zero(d, t)

    if variant is Variant.DOUBLE_ONE:
        edges = [e for e in g.edges if looped or e[0] != e[1]]
        if not edges:
            return None
        x, y = edges[rng.integers(len(edges))]
        if rng.integers(2):
            x, y = y, x
        if bip:
            same_x = g.class_a if g.side(x) == 0 else g.class_b
            same_y = g.class_a if g.side(y) == 0 else g.class_b
            ut = pick(set(same_x) - {x}, d - 1)
            vt = pick(set(same_y) - {y}, d - 1)
        else:
            extra_u = [NEW_U] if looped else []
            extra_v = [NEW_V] if looped else []
            ut = pick((set(range(g.n)) - {x}) | set(extra_u), d - 1)
            vt = pick((set(range(g.n)) - {y}) | set(extra_v), d - 1)
        if ut is None or vt is None:
            return None
        return ExtensionStep.double_one(d, (x, y), sorted(ut + [x]), sorted(vt + [y]))

    if not looped or d < 2:
        return None
    edges = g.non_loop_edges
    if not edges:
        return None
    x, y = edges[rng.integers(len(edges))]
    rest = pick(set(range(g.n)) - {x, y}, d - 2)
    if rest is None:
        return None
    return ExtensionStep.looped_one(d, (x, y), sorted(rest + [x, y]))
