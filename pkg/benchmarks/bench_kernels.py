"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--nodes 4097] [--repeat 3]

Reports the best wall time of each kernel per backend and checks that
both produce the same numbers.
"""
import argparse
import time

import numpy as np

from fkinetic import _backend, _kernels_py
from fkinetic.frac_ops import trapezoid_weights


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--nodes", type=int, default=4097, help="grid nodes (2^-11 on [0, 2])")
    parser.add_argument("--ml-evals", type=int, default=20_000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = {"python": _kernels_py}
    if _backend.compiled_available():
        from fkinetic import _kernels

        backends["compiled"] = _kernels
    else:
        print("compiled extension not built; timing the fallback only")

    alpha = 0.5
    interior, endpoint, scale = trapezoid_weights(alpha, args.nodes)
    h = 2.0 / (args.nodes - 1)
    lam = h**alpha * scale
    rng = np.random.default_rng(0)
    f = rng.standard_normal(args.nodes)
    g = np.cos(np.linspace(0, 2, args.nodes))
    seed = np.zeros(args.nodes)
    seed[0] = g[0]
    zs = np.linspace(-3.0, 1.0, args.ml_evals)

    cases = {
        "volterra_march": lambda k: k.volterra_march(g, interior, endpoint, lam, 1, seed),
        "history_sums": lambda k: k.history_sums(f, interior, endpoint),
        "ml_series": lambda k: np.array(
            [k.ml_series(0.9, 1.1, z, 1e-12, 1e-300, 10_000)[0] for z in zs]
        ),
    }

    print(f"{'kernel':<16}{'backend':<10}{'seconds':>10}{'speedup':>10}{'max |diff|':>13}")
    for name, run in cases.items():
        timings = {}
        outputs = {}
        for bname, mod in backends.items():
            timings[bname], outputs[bname] = best_of(lambda: run(mod), args.repeat)
        for bname in backends:
            speed = timings["python"] / timings[bname]
            diff = float(np.abs(outputs[bname] - outputs["python"]).max())
            print(f"{name:<16}{bname:<10}{timings[bname]:>10.4f}{speed:>9.1f}x{diff:>13.2e}")


if __name__ == "__main__":
    main()
