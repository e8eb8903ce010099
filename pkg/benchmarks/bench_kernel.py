#!/usr/bin/env python3
"""Compare the compiled and pure-Python spill-subset sweep kernels.

The sweep is the hot loop behind the exhaustive oracle: every subset of
n variables is tested against every distinct pressure row. Run after
`pip install -e . --no-build-isolation`; without the compiled extension
only the pure timings are reported.
"""

import random
import time

from spillkit import _kernel_py as pure

try:
    from spillkit import _kernel as compiled
except ImportError:
    compiled = None


def tables(rng, n, rows):
    weights = [rng.randint(1, 20) for _ in range(n)]
    live = [rng.getrandbits(n) for _ in range(rows)]
    chad = [live[i] & rng.getrandbits(n) for i in range(rows)]
    return weights, live, chad


def timed(fn, *args, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return result, best


def main():
    rng = random.Random(0)
    print(f"{'n':>3} {'rows':>5} {'pure_s':>10} {'compiled_s':>11} {'speedup':>8}")
    for n in (12, 14, 16, 18, 20):
        rows = 2 * n
        weights, live, chad = tables(rng, n, rows)
        r = n // 3
        want, t_pure = timed(pure.sweep, n, weights, live, chad, r, True)
        if compiled is None:
            print(f"{n:>3} {rows:>5} {t_pure:>10.4f} {'-':>11} {'-':>8}")
            continue
        got, t_comp = timed(compiled.sweep, n, weights, live, chad, r, True)
        assert got == want, "kernel implementations disagree"
        print(f"{n:>3} {rows:>5} {t_pure:>10.4f} {t_comp:>11.4f} "
              f"{t_pure / t_comp:>8.1f}")
    if compiled is None:
        print("compiled kernel unavailable; showing pure timings only")


if __name__ == "__main__":
    main()
