"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Prints best-of-N wall time per kernel and backend, the speedup, and the
largest difference between the two results.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from coverplace.cost_exact import candidate_thresholds
from coverplace.model import Independent
from coverplace.kernels import implementations


def cases(rng):
    x14 = np.sort(rng.random(14))
    w14 = Independent(0.3).cardinality_weights(14)
    x200 = np.sort(rng.random(200))
    v200 = candidate_thresholds(x200, False)
    x60 = np.sort(rng.random(60))
    v60c = candidate_thresholds(x60, True)
    x16 = np.sort(rng.random(16))
    v16 = candidate_thresholds(x16, False)
    caps = np.arange(1, 40)
    return {
        "enum_cost n=14": lambda k: k.enum_cost(x14, w14, False),
        "enum_subgradient n=14": lambda k: k.enum_subgradient(x14, w14, False),
        "dp_cdf_indep line n=200": lambda k: k.dp_cdf_indep(x200, 0.3, False, v200, -1),
        "dp_cdf_indep circle n=60": lambda k: k.dp_cdf_indep(x60, 0.3, True, v60c, -1),
        "dp_count_cdf line n=16 m=8": lambda k: k.dp_count_cdf(x16, 8, False, v16),
        "run_prob n=1e5": lambda k: k.run_prob(100_000, 0.5, caps, caps, caps),
    }


def best_of(fn, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)

    impls = implementations()
    if "compiled" not in impls:
        print("compiled extension not built; only the numpy fallback is available")
    names = sorted(impls)
    print(f"{'kernel':30s}" + "".join(f"{n:>12s}" for n in names) + f"{'speedup':>10s}{'max diff':>11s}")
    for label, call in cases(np.random.default_rng(args.seed)).items():
        times, outs = {}, {}
        for name in names:
            times[name], outs[name] = best_of(lambda: call(impls[name]), args.repeat)
        row = f"{label:30s}" + "".join(f"{times[n] * 1e3:10.2f}ms" for n in names)
        if len(names) == 2:
            diff = float(np.max(np.abs(np.asarray(outs["compiled"]) - np.asarray(outs["python"]))))
            row += f"{times['python'] / times['compiled']:9.1f}x{diff:11.1e}"
        print(row)


if __name__ == "__main__":
    main()
