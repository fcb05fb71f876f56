"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Both backends are called directly, so the result does not depend on
DEHNFLOER_PURE_PYTHON. Outputs are compared before timings are reported.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from dehnfloer import _kernels_py
from dehnfloer.nocross import CrossingScenario, _compile, build_branches

try:
    from dehnfloer import _kernels
except ImportError:  # extension not built
    _kernels = None


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def rank_cases(rng: np.random.Generator):
    for n in (64, 256, 512):
        yield f"f2_rank {n}x{n}", (rng.integers(0, 2, size=(n, n), dtype=np.uint8),), "f2_rank"


def enumeration_cases():
    for mode, m, n, q in (("product", 1, 1, 3), ("coproduct", 2, 3, 3), ("product", 2, 2, 5)):
        sc = CrossingScenario(mode, m, n, q)
        compiled = [_compile(br)[1] for br in build_branches(sc)]
        yield f"enumerate {mode} ({m},{n}) Q={q}", compiled, "enumerate_linear"


def run_case(module, kind, args):
    if kind == "f2_rank":
        return module.f2_rank(*args)
    out = []
    for arrays in args:
        killed, _, survivors = module.enumerate_linear(*arrays)
        out.append((tuple(int(k) for k in killed), len(survivors)))
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if _kernels is None:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")
    rng = np.random.default_rng(args.seed)
    print(f"{'case':40s} {'python [s]':>11s} {'compiled [s]':>13s} {'speedup':>8s}")
    for name, case_args, kind in [*rank_cases(rng), *enumeration_cases()]:
        if run_case(_kernels_py, kind, case_args) != run_case(_kernels, kind, case_args):
            raise SystemExit(f"{name}: backends disagree")
        slow = best_of(lambda: run_case(_kernels_py, kind, case_args), args.repeat)
        fast = best_of(lambda: run_case(_kernels, kind, case_args), args.repeat)
        print(f"{name:40s} {slow:11.4f} {fast:13.4f} {slow / fast:7.1f}x")


if __name__ == "__main__":
    main()
