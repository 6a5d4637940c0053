"""Compiled kernels against the pure-Python fallback, plus engine timings.

    python benchmarks/bench_kernels.py [--repeat 5] [--number 20] [--seed 3]

The kernel section runs every word kernel on the same random words with
both backends and checks the results agree.  The engine section times each
edge-selection strategy on the shipped fixtures (compiled backend only).
"""

import argparse
import importlib
import random
import sys
import timeit

from wilsonloops import _kernels_py
from wilsonloops.engine import STRATEGIES, compute
from wilsonloops.fixtures import all_fixtures
from wilsonloops.verify import random_corpus


def kernel_inputs(seed, count=200, max_len=60):
    rng = random.Random(seed)
    raw = ["".join(rng.choice("URDL") for _ in range(rng.randint(4, max_len))) for _ in range(count)]
    closed = [l.moves for l in random_corpus(count, max_len, seed, reduced=False)]
    return raw, closed


def bench_kernels(compiled, repeat, number, seed):
    raw, closed = kernel_inputs(seed)
    jobs = {
        "reduce_word": (lambda m: lambda w: m.reduce_word(0, 0, w), closed),
        "least_rotation": (lambda m: m.least_rotation, raw),
        "height_map": (lambda m: lambda w: m.height_map(0, 0, w), closed),
    }
    print(f"{'kernel':<16}{'python (ms)':>14}{'cython (ms)':>14}{'speedup':>10}")
    for name, (bind, data) in jobs.items():
        fp, fc = bind(_kernels_py), bind(compiled)
        if [fp(w) for w in data] != [fc(w) for w in data]:
            print(f"{name}: backends disagree", file=sys.stderr)
            return 2
        tp = min(timeit.repeat(lambda: [fp(w) for w in data], repeat=repeat, number=number)) / number
        tc = min(timeit.repeat(lambda: [fc(w) for w in data], repeat=repeat, number=number)) / number
        print(f"{name:<16}{tp * 1e3:>14.3f}{tc * 1e3:>14.3f}{tp / tc:>9.1f}x")
    return 0


def bench_engine(repeat):
    fixtures = [f for f in all_fixtures() if f.kind != "winding"]
    print(f"\n{'fixture':<36}" + "".join(f"{s:>14}" for s in STRATEGIES) + f"{'calls':>10}")
    for fx in fixtures:
        cells, calls = [], None
        for s in STRATEGIES:
            t = min(timeit.repeat(lambda: compute(fx.loop, s), repeat=repeat, number=1))
            cells.append(f"{t * 1e3:>11.2f} ms")
            if s == "boundary":
                calls = compute(fx.loop, s).stats["recursion_calls"]
        print(f"{fx.name:<36}" + "".join(cells) + f"{calls:>10}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=20)
    ap.add_argument("--seed", type=int, default=3)
    ap.add_argument("--skip-engine", action="store_true")
    args = ap.parse_args(argv)
    try:
        compiled = importlib.import_module("wilsonloops._kernels")
    except ImportError:
        print("compiled kernels are not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1
    code = bench_kernels(compiled, args.repeat, args.number, args.seed)
    if code:
        return code
    if not args.skip_engine:
        bench_engine(args.repeat)
    return 0


if __name__ == "__main__":
    sys.exit(main())
