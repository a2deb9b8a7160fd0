"""Command-line interface.

Exit codes: 0 success, 2 property violation, 3 input error, 4 exploratory
sweep finished (nothing asserted). JSON reports use sorted keys, and every
random instance draws from ``default_rng([seed, counter])`` so reruns with the
same ``--seed`` are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from rigidkit import connectivity as conn
from rigidkit import graphs, matroids, seeds
from rigidkit.graphs import BipartiteGraph, GraphError, SemisimpleGraph
from rigidkit.matroids import (
    BirigidityAB,
    Hyperconnectivity,
    PropertyViolation,
    RankQueryConfig,
    SymCompletion,
)

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_EXPLORATORY = 0, 2, 3, 4


class InputError(Exception):
    pass


# -- output -----------------------------------------------------------------------

def _default(o):
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, (set, frozenset)):
        return sorted(o)
    if isinstance(o, np.integer):
        return int(o)
    raise TypeError(f"cannot encode {type(o).__name__}")


def _text(obj, indent=0) -> list[str]:
    pad = "  " * indent
    if isinstance(obj, dict):
        out = []
        for key in sorted(obj):
            val = obj[key]
            if isinstance(val, (dict, list)) and val and any(isinstance(v, (dict, list))
                                                            for v in (val.values() if isinstance(val, dict) else val)):
                out.append(f"{pad}{key}:")
                out.extend(_text(val, indent + 1))
            else:
                out.append(f"{pad}{key}: {json.dumps(val, sort_keys=True, default=_default)}")
        return out
    if isinstance(obj, list):
        out = []
        for item in obj:
            if isinstance(item, dict):
                out.append(f"{pad}-")
                out.extend(_text(item, indent + 1))
            else:
                out.append(f"{pad}- {json.dumps(item, sort_keys=True, default=_default)}")
        return out
    return [f"{pad}{obj}"]


def _emit(args, payload) -> None:
    if args.format == "json":
        text = json.dumps(payload, sort_keys=True, indent=2, default=_default) + "\n"
    else:
        text = "\n".join(_text(payload)) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# -- shared arguments -----------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("-d", "--dim", type=int, default=2, help="dimension d (default 2)")
    p.add_argument("--ab", type=int, nargs=2, metavar=("A", "B"),
                   help="use (a,b)-birigidity with these a, b")
    p.add_argument("--kind", default=None,
                   help="sym | hyper | birigid | ab | rigid (default: hyper, or birigid for "
                        "bipartite input)")
    p.add_argument("--trials", type=int, default=3, help="random evaluations per rank (default 3)")
    p.add_argument("--prime", type=int, default=matroids.DEFAULT_PRIME,
                   help="field modulus (default 2^61-1)")
    p.add_argument("--seed", type=int, default=0, help="master random seed")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    return p


def _config(args) -> RankQueryConfig:
    try:
        return RankQueryConfig(trials=args.trials, prime=args.prime, rng_seed=args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _kind(args, g=None):
    name = args.kind
    if args.ab is not None and name is None:
        name = "ab"
    if name is None:
        name = "birigid" if isinstance(g, BipartiteGraph) else "hyper"
    try:
        kind = matroids.parse_kind(name, args.dim, tuple(args.ab) if args.ab else None)
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from None
    if g is not None:
        try:
            kind.check_graph(g)
        except GraphError as exc:
            raise InputError(str(exc)) from None
    return kind


def _load(path):
    try:
        return graphs.load(path)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    except (GraphError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _rng(seed: int, counter: int):
    return np.random.default_rng([seed, counter])


# -- commands -----------------------------------------------------------------------

def cmd_rank(args):
    cfg = _config(args)
    out = []
    for path in args.graphs:
        g = _load(path)
        kind = _kind(args, g)
        try:
            formula = matroids.rank_formula(kind, g.sizes)
        except ValueError:
            formula = None
        out.append({"file": path, "kind": kind.describe(), "edges": g.num_edges,
                    "rank": matroids.generic_rank(g, kind, cfg), "formula_rank": formula,
                    "is_rigid": matroids.is_rigid(g, kind, cfg)})
    _emit(args, out if len(out) != 1 else out[0])
    return EXIT_OK


def cmd_check(args):
    cfg = _config(args)
    out = []
    for path in args.graphs:
        g = _load(path)
        kind = _kind(args, g)
        out.append({"file": path, "kind": kind.describe(),
                    "independent": matroids.is_independent(g, kind, cfg),
                    "rigid": matroids.is_rigid(g, kind, cfg),
                    "closed": matroids.is_closed(g, kind, cfg)})
    _emit(args, out if len(out) != 1 else out[0])
    return EXIT_OK


def cmd_closure(args):
    cfg = _config(args)
    g = _load(args.graph)
    kind = _kind(args, g)
    closed = matroids.closure(g, kind, cfg)
    if args.format == "json":
        _emit(args, graphs.to_json(closed))
    else:
        text = graphs.serialize(closed)
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
    return EXIT_OK


def cmd_seed(args):
    cfg = _config(args)
    g = _load(args.graph)
    kind = _kind(args, g)
    d = kind.dim
    try:
        if args.strategy == "biconnected":
            if args.k is None:
                raise InputError("--k is required for the biconnected strategy")
            res = seeds.biconnected_seed(g, kind, args.k, cfg, _rng(args.seed, 0))
            _emit(args, res.to_json())
            return EXIT_OK
        if args.x0:
            x0 = frozenset(args.x0)
        elif args.strategy == "sample":
            prob = args.probability if args.probability is not None else 1 / (16 * d)
            x0 = seeds.sample_cover_set(g, d, prob, _rng(args.seed, 0))
        else:
            x0 = seeds.greedy_cover_set(g, d)
        chain = seeds.layered_chain(g, d, x0)
        cert = seeds.find_seed(g, kind, chain, cfg)
    except seeds.SeedError as exc:
        raise InputError(str(exc)) from None
    _emit(args, cert.to_json())
    return EXIT_OK


def cmd_connectivity(args):
    g = _load(args.graph)
    k = args.k
    out = {"kappa": conn.vertex_connectivity(g), "tau": len(conn.min_vertex_cover(g))}
    if k is not None:
        out["k"] = k
        out["k_connected"] = conn.is_k_connected(g, k)
        out["critically_k_connected"] = conn.is_critically_k_connected(g, k)
        if isinstance(g, BipartiteGraph):
            res = conn.is_k_biconnected(g, k)
            out["k_biconnected"] = res.ok
            out["biconnectivity_witness"] = list(res.witness) if res.witness else None
            out["critically_k_biconnected"] = conn.is_critically_k_biconnected(g, k)
    _emit(args, out)
    return EXIT_OK


def cmd_certify(args):
    g = _load(args.graph)
    cert = conn.sparse_local_certificate(g, args.k, verify=not args.no_verify)
    _emit(args, cert.to_json())
    return EXIT_OK


def cmd_family(args):
    fn, names = graphs.FAMILIES[args.name]
    if len(args.params) != len(names):
        raise InputError(f"{args.name} takes parameters {', '.join(names)}")
    params = dict(zip(names, args.params))
    try:
        g = fn(*args.params)
    except (GraphError, ValueError) as exc:
        raise InputError(str(exc)) from None
    if args.format == "json":
        _emit(args, graphs.to_json(g, args.name, params))
        return EXIT_OK
    text = graphs.serialize_document(graphs.GraphDocument(g, args.name, params))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- experiments --------------------------------------------------------------------

def _dense_min_degree(n: int, d: int, rng) -> SemisimpleGraph:
    """Random simple graph with δ >= (n+d-1)/2: start sparse-ish, then top up short vertices."""
    need = -(-(n + d - 1) // 2)
    adj = [set() for _ in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < 0.5:
                adj[u].add(v)
                adj[v].add(u)
    for u in range(n):
        while len(adj[u]) < need:
            cand = [v for v in range(n) if v != u and v not in adj[u]]
            v = cand[rng.integers(len(cand))]
            adj[u].add(v)
            adj[v].add(u)
    return SemisimpleGraph.from_edges(n, [(u, v) for u in range(n) for v in adj[u] if u < v])


def _save_counterexample(args, tag: str, counter: int, g) -> str | None:
    if not args.counterexamples:
        return None
    folder = Path(args.counterexamples)
    folder.mkdir(parents=True, exist_ok=True)
    path = folder / f"{tag}-{counter}.txt"
    path.write_text(graphs.serialize(g))
    return str(path)


def _exp_min_degree(args, cfg):
    d = args.dim
    kind = SymCompletion(d) if args.kind in ("sym", "symcompletion") else Hyperconnectivity(d)
    rows, counter = [], 0
    for n in range(args.n_range[0], args.n_range[1] + 1):
        hits = 0
        for _ in range(args.instances):
            g = _dense_min_degree(n, d, _rng(args.seed, counter))
            if isinstance(kind, SymCompletion):
                rng = _rng(args.seed, counter)
                g = g.with_edges((v, v) for v in range(n) if rng.random() < 0.5)
            hits += matroids.is_rigid(g, kind, cfg)
            counter += 1
        rows.append({"n": n, "instances": args.instances, "rigid": hits,
                     "fraction": hits / args.instances})
    return {"sweep": "min-degree", "kind": kind.describe(), "status": "EXPLORATORY",
            "results": rows}, EXIT_EXPLORATORY


def _exp_biconnectivity(args, cfg):
    d, k = args.dim, args.k or 2 * args.dim
    kind = matroids.Birigidity(d)
    rows, counter = [], 0
    for n in range(args.n_range[0], args.n_range[1] + 1):
        tried = bicon = rigid = 0
        for _ in range(args.instances):
            g = graphs.random_bipartite(n, n, args.probability, _rng(args.seed, counter))
            counter += 1
            tried += 1
            if conn.is_k_biconnected(g, k):
                bicon += 1
                rigid += matroids.is_rigid(g, kind, cfg)
        rows.append({"class_size": n, "instances": tried, "k_biconnected": bicon,
                     "birigid_among_those": rigid})
    return {"sweep": "biconnectivity", "d": d, "k": k, "status": "EXPLORATORY",
            "results": rows}, EXIT_EXPLORATORY


def _exp_tau_bound(args, cfg):
    rows, ok = [], True
    for k in args.k_values:
        for p in args.p_values:
            g = graphs.critical_family(k, p)
            entry = {"k": k, "p": p, "n": g.n}
            try:
                gen = conn.tau_bound_report(g.to_semisimple(), k, "general")
                bip = conn.tau_bound_report(g, k, "bipartite", check_precondition=False)
                tau = gen.tau
                entry.update({
                    "tau": tau,
                    "general_bound": str(gen.bound),
                    "bipartite_bound": str(bip.bound),
                    "critically_k_biconnected": bip.precondition,
                    "tau_at_most_k_plus_p": tau <= k + p,
                    "inequalities_hold": gen.holds and bip.holds,
                })
                ok &= tau <= k + p
            except (PropertyViolation, conn.PreconditionError) as exc:
                entry["violation"] = str(exc)
                ok = False
            rows.append(entry)
    return {"sweep": "tau-bound", "results": rows}, EXIT_OK if ok else EXIT_VIOLATION


def _exp_sym_rank_floor(args, cfg):
    d = args.dim
    k = args.k or d + 1
    rows, counter = [], 0
    target_of = lambda n: d * n - d * d  # noqa: E731
    for n in range(args.n_range[0], args.n_range[1] + 1):
        seen = below = 0
        files = []
        for _ in range(args.instances):
            g = graphs.random_graph(n, args.probability, _rng(args.seed, counter))
            counter += 1
            if not conn.is_k_connected(g, k):
                continue
            seen += 1
            rs = matroids.generic_rank(g, SymCompletion(d), cfg)
            rh = matroids.generic_rank(g, Hyperconnectivity(d), cfg)
            if min(rs, rh) < target_of(n):
                below += 1
                path = _save_counterexample(args, "rank-floor", counter - 1, g)
                if path:
                    files.append(path)
        rows.append({"n": n, "k_connected": seen, "below_dn_minus_d2": below, "files": files})
    return {"sweep": "sym-rank-floor", "d": d, "k": k, "status": "EXPLORATORY",
            "results": rows}, EXIT_EXPLORATORY


def _exp_ab_birigidity(args, cfg):
    a, b = args.ab or (1, 2)
    kind = BirigidityAB(a, b)
    k = 2 * a * b
    rows, counter = [], 0
    for n in range(args.n_range[0], args.n_range[1] + 1):
        seen = failing = 0
        files = []
        for _ in range(args.instances):
            g = graphs.random_bipartite(n, n, args.probability, _rng(args.seed, counter))
            counter += 1
            if not conn.is_k_connected(g, k):
                continue
            seen += 1
            if not matroids.is_rigid(g, kind, cfg):
                failing += 1
                path = _save_counterexample(args, "ab-birigid", counter - 1, g)
                if path:
                    files.append(path)
        rows.append({"class_size": n, "connected_enough": seen, "not_birigid": failing,
                     "files": files})
    return {"sweep": "ab-birigidity", "a": a, "b": b, "k": k, "status": "EXPLORATORY",
            "results": rows}, EXIT_EXPLORATORY


def _exp_tightness(args, cfg):
    rows, ok = [], True
    for d in (2, 3):
        for m in range(3, 6):
            hyper = matroids.is_rigid(graphs.complete_tripartite(m, m, d - 2),
                                      Hyperconnectivity(d), cfg)
            compl = matroids.is_rigid(graphs.complete_tripartite(m, m, d - 1),
                                      SymCompletion(d), cfg)
            rows.append({"d": d, "m": m, "hyperconnected_Kmm(d-2)": hyper,
                         "completable_Kmm(d-1)": compl})
            ok &= not hyper and not compl
    return {"sweep": "tightness", "results": rows}, EXIT_OK if ok else EXIT_VIOLATION


def ly_split_report(a: int, b: int, s: int, cfg: RankQueryConfig) -> dict:
    g = graphs.ly_split_family(a, b, s)
    k = 2 * a * b - 1
    rank = matroids.generic_rank(g, BirigidityAB(a, b), cfg)
    full = a * g.a + b * g.b - a * b
    ceiling = a * g.a + b * g.b - s
    kappa = conn.vertex_connectivity(g)
    return {"a": a, "b": b, "s": s, "k": k, "X": g.a, "Y": g.b, "edges": g.num_edges,
            "kappa": kappa, "k_connected": kappa >= k, "rank": rank,
            "submodular_ceiling": ceiling, "birigid_target": full,
            "birigid": matroids.is_rigid(g, BirigidityAB(a, b), cfg),
            "holds": kappa >= k and rank <= ceiling < full and rank < full}


def _exp_ly_split(args, cfg):
    a, b = args.ab or (1, 2)
    rep = ly_split_report(a, b, args.s, cfg)
    return {"sweep": "ly-split", "result": rep}, EXIT_OK if rep["holds"] else EXIT_VIOLATION


SWEEPS = {
    "min-degree": _exp_min_degree,
    "biconnectivity": _exp_biconnectivity,
    "tau-bound": _exp_tau_bound,
    "sym-rank-floor": _exp_sym_rank_floor,
    "ab-birigidity": _exp_ab_birigidity,
    "tightness": _exp_tightness,
    "ly-split": _exp_ly_split,
}


def cmd_experiment(args):
    if args.instances < 1:
        raise InputError("--instances must be >= 1")
    if args.n_range[0] > args.n_range[1]:
        raise InputError("--n-range must be nondecreasing")
    cfg = _config(args)
    payload, code = SWEEPS[args.sweep](args, cfg)
    payload["seed"] = args.seed
    _emit(args, payload)
    return code


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="rigidkit",
                                     description="Generic matroid ranks and connectivity tools")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rank", parents=[common], help="generic rank of each graph")
    p.add_argument("graphs", nargs="+")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("check", parents=[common], help="independence, rigidity, closedness")
    p.add_argument("graphs", nargs="+")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("closure", parents=[common], help="write the M-closure of a graph")
    p.add_argument("graph")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("seed", parents=[common], help="construct and certify a seed")
    p.add_argument("graph")
    p.add_argument("--strategy", choices=("chain", "sample", "biconnected"), default="chain")
    p.add_argument("--x0", type=int, nargs="+", help="explicit starting set for the chain")
    p.add_argument("--probability", type=float, default=None)
    p.add_argument("-k", "--k", type=int, default=None)
    p.set_defaults(func=cmd_seed)

    p = sub.add_parser("connectivity", parents=[common], help="κ, k-(bi)connectivity, τ")
    p.add_argument("graph")
    p.add_argument("-k", "--k", type=int, default=None)
    p.set_defaults(func=cmd_connectivity)

    p = sub.add_parser("certify", parents=[common], help="sparse local certificate")
    p.add_argument("graph")
    p.add_argument("-k", "--k", type=int, required=True)
    p.add_argument("--no-verify", action="store_true", help="skip the all-pairs flow check")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("family", parents=[common], help="generate a named graph family")
    p.add_argument("name", choices=sorted(graphs.FAMILIES))
    p.add_argument("params", type=int, nargs="*")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("experiment", parents=[common], help="run a parameter sweep")
    p.add_argument("sweep", choices=sorted(SWEEPS))
    p.add_argument("--n-range", type=int, nargs=2, default=(8, 10), metavar=("LO", "HI"))
    p.add_argument("--instances", type=int, default=5)
    p.add_argument("--probability", type=float, default=0.6)
    p.add_argument("-k", "--k", type=int, default=None)
    p.add_argument("--k-values", type=int, nargs="+", default=(2, 3))
    p.add_argument("--p-values", type=int, nargs="+", default=(2, 3, 4))
    p.add_argument("--s", type=int, default=4, help="base size for the ly-split family")
    p.add_argument("--counterexamples", default=None,
                   help="directory for graphs violating an exploratory inequality")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"rigidkit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PropertyViolation as exc:
        print(f"rigidkit: property violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (GraphError, ValueError) as exc:
        print(f"rigidkit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
