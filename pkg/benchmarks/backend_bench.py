"""Compare the numba kernels against the pure-numpy fallback.

Times the hot paths (closure enumeration, covering relation, the fused
order-scan recursions, Monte Carlo stability) on random contexts of a few
sizes and prints a speedup table.

    python benchmarks/backend_bench.py [--seed N] [--repeats K]
"""

import argparse
import time

import conceptmine as cm
from conceptmine import indices
from conceptmine.backend import HAS_NUMBA


CASES = (
    (40, 15, 0.3),
    (60, 25, 0.2),
    (80, 30, 0.3),
    (80, 50, 0.25),
)


def time_backend(ctx, backend, repeats):
    cm.set_backend(backend)
    timings = {}

    def bench(name, fn):
        best = float("inf")
        for _ in range(repeats):
            t0 = time.perf_counter()
            fn()
            best = min(best, time.perf_counter() - t0)
        timings[name] = best

    lat_holder = {}

    def enumerate_once():
        lat_holder["lat"] = cm.enumerate_concepts(ctx)

    bench("enumerate", enumerate_once)
    lat = lat_holder["lat"]

    def covers():
        lat._lower = None
        lat._upper = None
        lat.lower_neighbors(0)

    bench("covers", covers)

    def order_scan():
        lat._sigma = None
        lat._rob_cache = {}
        lat.robustness_values((0.3, 0.5))

    bench("sigma+robustness", order_scan)

    concept = lat.concept(lat.top_id)
    bench(
        "mc_stability(50k)",
        lambda: indices.stability_montecarlo(ctx, concept, 50_000, seed=1),
    )
    return len(lat), timings


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=11)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if not HAS_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")

    # trigger jit compilation outside the timed region
    warm = cm.generate_random_context(n_objects=12, n_attributes=6, density=0.4, seed=0)
    cm.set_backend("numba")
    lat = cm.enumerate_concepts(warm)
    lat.lower_neighbors(0)
    lat.robustness_values((0.5,))
    indices.stability_montecarlo(warm, lat.concept(0), 100, seed=0)

    header = f"{'context':>14} {'concepts':>9} {'kernel':>18} {'numpy':>10} {'numba':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for n_obj, n_attr, density in CASES:
        ctx = cm.generate_random_context(
            n_objects=n_obj, n_attributes=n_attr, density=density, seed=args.seed
        )
        n_numpy, t_numpy = time_backend(ctx, "numpy", args.repeats)
        n_numba, t_numba = time_backend(ctx, "numba", args.repeats)
        assert n_numpy == n_numba
        label = f"{n_obj}x{n_attr}@{density}"
        for kernel in t_numpy:
            ratio = t_numpy[kernel] / t_numba[kernel] if t_numba[kernel] > 0 else float("inf")
            print(
                f"{label:>14} {n_numpy:>9} {kernel:>18} "
                f"{t_numpy[kernel] * 1e3:>9.1f}ms {t_numba[kernel] * 1e3:>9.1f}ms {ratio:>7.1f}x"
            )
            label = ""


if __name__ == "__main__":
    main()
