"""Time the compiled and pure-Python ramp integrators on the same problems.

    python3 benchmarks/bench_ode.py [--repeat N]
"""
import argparse
import statistics
import time

from sqotto import _ode

CASES = [
    ("wigner tau=1", _ode.WIGNER, [0.5, 0.5, 0.0], 1.0),
    ("wigner tau=100", _ode.WIGNER, [0.5, 0.5, 0.0], 100.0),
    ("fundamental tau=1000", _ode.FUNDAMENTAL, [1.0, 0.0, 0.0, 1.0], 1000.0),
]


def time_case(backend, system, y0, tau, repeat):
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        y, steps, _ = _ode.integrate_linear_ramp(system, y0, tau, 1.0, 25.0, backend=backend)
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples), steps, y


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = _ode.available_backends()
    print(f"backends: {', '.join(backends)} (default {_ode.BACKEND})")
    print(f"{'case':<22}{'backend':<10}{'steps':>8}{'median s':>12}{'speedup':>10}")
    for name, system, y0, tau in CASES:
        results = {b: time_case(b, system, y0, tau, args.repeat) for b in backends}
        base = results["python"][0]
        for b, (sec, steps, y) in results.items():
            print(f"{name:<22}{b:<10}{steps:>8}{sec:>12.5f}{base / sec:>9.1f}x")
        if len(results) > 1:
            diff = max(abs(a - c) for a, c in zip(results["python"][2], results["compiled"][2]))
            print(f"{'':<22}max |python - compiled| = {diff:.2e}")


if __name__ == "__main__":
    main()
