"""Kernel selection: compiled extension when built, pure Python otherwise.

Both implementations expose `sweep` and `sweep_all` with identical
semantics; tests assert parity and `benchmarks/bench_kernel.py` compares
their throughput.
"""

from . import _kernel_py as pure

try:
    from . import _kernel as compiled  # type: ignore[attr-defined]
except ImportError:  # pragma: no cover - depends on build
    compiled = None

active = compiled if compiled is not None else pure

IMPLEMENTATION = active.IMPLEMENTATION
# Scaled costs must stay below this for the compiled path (int64 headroom).
MAX_SAFE_COST = 2**62


def sweep(n, weights, live, chad, r, holes):
    if active is pure or max(weights, default=0) * max(n, 1) >= MAX_SAFE_COST:
        return pure.sweep(n, weights, live, chad, r, holes)
    return active.sweep(n, weights, live, chad, r, holes)


def sweep_all(n, weights, live, chad, r, holes, target_cost, cap):
    if active is pure or max(weights, default=0) * max(n, 1) >= MAX_SAFE_COST:
        return pure.sweep_all(n, weights, live, chad, r, holes, target_cost, cap)
    return active.sweep_all(n, weights, live, chad, r, holes, target_cost, cap)
