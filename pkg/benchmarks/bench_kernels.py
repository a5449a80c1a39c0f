"""Compare the compiled and pure-Python graph kernels on random graphs.

    python3 benchmarks/bench_kernels.py [--nodes N] [--degree D] [--repeat R]
"""

from __future__ import annotations

import argparse
import random
import timeit
from array import array

from mptcheck.kernels import _pykernels

try:
    from mptcheck.kernels import _ckernels
except ImportError:
    _ckernels = None


def random_graph(n: int, degree: int, seed: int):
    rng = random.Random(seed)
    offsets = array("i", [0])
    targets = array("i")
    for _ in range(n):
        targets.extend(sorted({rng.randrange(n) for _ in range(degree)}))
        offsets.append(len(targets))
    return offsets, targets


def random_class_graph(n: int, classes: int, seed: int):
    rng = random.Random(seed)
    offsets = array("i", [0])
    targets = array("i")
    for _ in range(n * classes):
        targets.extend(sorted({rng.randrange(n) for _ in range(rng.randrange(3))}))
        offsets.append(len(targets))
    accepting = bytearray(rng.random() < 0.3 for _ in range(n))
    return accepting, offsets, targets


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=20000)
    ap.add_argument("--degree", type=int, default=3)
    ap.add_argument("--sim-nodes", type=int, default=120)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    n = args.nodes
    offsets, targets = random_graph(n, args.degree, 1)
    initial = array("i", [0])
    accepting = bytearray(1 if v % 97 == 5 else 0 for v in range(n))
    m = args.sim_nodes
    sim_acc, sim_off, sim_tgt = random_class_graph(m, 4, 2)
    cases = {
        "scc": lambda k: k.scc(n, offsets, targets),
        "lasso_search": lambda k: k.lasso_search(n, offsets, targets, initial, accepting),
        "direct_simulation": lambda k: k.direct_simulation(m, sim_acc, 4, sim_off, sim_tgt),
    }
    impls = [("python", _pykernels)] + ([("compiled", _ckernels)] if _ckernels else [])
    print(f"{'kernel':<20}" + "".join(f"{name:>12}" for name, _ in impls) + f"{'speedup':>10}")
    for label, fn in cases.items():
        results = [fn(k) for _, k in impls]
        if any(r != results[0] for r in results[1:]):
            raise SystemExit(f"{label}: implementations disagree")
        times = [min(timeit.repeat(lambda k=k: fn(k), number=1, repeat=args.repeat))
                 for _, k in impls]
        speed = f"{times[0] / times[-1]:>9.1f}x" if len(times) > 1 else f"{'-':>10}"
        print(f"{label:<20}" + "".join(f"{t * 1000:>10.2f}ms" for t in times) + speed)
    if _ckernels is None:
        print("compiled kernels are not built; only the pure-Python timings are shown")


if __name__ == "__main__":
    main()
