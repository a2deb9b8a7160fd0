"""Time the native and pure-Python elimination kernels on generic-rank workloads.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

from rigidkit import graphs, linalg, matroids

WORKLOADS = [
    ("sym d=2, K_20 looped", graphs.complete_semisimple(20), matroids.SymCompletion(2)),
    ("hyper d=3, K_25", graphs.complete_graph(25), matroids.Hyperconnectivity(3)),
    ("birigid d=3, K_20,20", graphs.complete_bipartite(20, 20), matroids.Birigidity(3)),
    ("rigid d=2, K_40", graphs.complete_graph(40), matroids.Rigidity(2)),
]


def bench(repeat: int) -> list[tuple[str, str, float, int]]:
    rows = []
    before = linalg.get_backend()
    try:
        for label, g, kind in WORKLOADS:
            asg = matroids.GenericAssignment.draw(g, kind)
            m = matroids.build_matrix(g, kind, asg)
            for backend in linalg.available_backends():
                linalg.set_backend(backend)
                best = float("inf")
                for _ in range(repeat):
                    t0 = time.perf_counter()
                    r = linalg.rank(m)
                    best = min(best, time.perf_counter() - t0)
                rows.append((label, backend, best, r))
    finally:
        linalg.set_backend(before)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    rows = bench(args.repeat)
    print(f"{'workload':<26} {'backend':<8} {'seconds':>10} {'rank':>6}")
    for label, backend, secs, r in rows:
        print(f"{label:<26} {backend:<8} {secs:>10.4f} {r:>6}")
    by = {}
    for label, backend, secs, _ in rows:
        by.setdefault(label, {})[backend] = secs
    for label, t in by.items():
        if len(t) == 2:
            slow, fast = t.get("python"), t.get("native")
            print(f"speedup {label}: {slow / fast:.1f}x")


if __name__ == "__main__":
    main()
