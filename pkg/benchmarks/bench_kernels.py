"""Compiled vs numpy kernels on representative inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel is called once per backend before timing, so compilation is
not counted.  Results of the two backends are compared on every call.
"""

import argparse
import time

import numpy as np

from carlson import kernels
from carlson.coloring import Coloring, Rule
from carlson.core import Alphabet
from carlson.hj import candidates
from carlson.towsner import _bounds


def cases():
    AB = Alphabet("ab")
    rng = np.random.default_rng(0)

    _, fixed, star = candidates(AB, 6)
    tables = [Coloring.random(AB, 3, 6, rng).table for _ in range(50)]
    allowed = np.ones(3, dtype=np.bool_)
    yield "hj_first  (50 colorings, N=6, c=3)", "hj_first", [(t, fixed, star, 2, allowed) for t in tables]

    _, f2, s2 = candidates(AB, 2)
    yield "hj_scan   (all 3-colorings, N=2)", "hj_scan", [(0, 3**8, 3, 9, 2, f2, s2)]

    n = 6
    words, f6, s6 = candidates(AB, n)
    cmin, cmax = _bounds(AB.letters, n)
    par = Coloring.from_rule(AB, Rule.make("size_mod"), n).table
    rand = [Coloring.random(AB, 2, n, rng).table for _ in range(10)]
    yield "carlson_dfs (m=3, N=6, 11 colorings)", "carlson_dfs", [
        (t, 2, 3, -1, f6, s6, cmin, cmax, n - 1, 0, len(words)) for t in [par] + rand]

    xs = np.cumsum(rng.integers(1, 10, size=200_000)).astype(np.int64)

    def counter_args():
        return [(xs, 40, np.zeros(64, dtype=np.int64), np.full(64, -1, dtype=np.int64),
                 np.zeros(xs.size, dtype=np.int64), 0)]

    yield "lambda_counter (200k stream elements)", "lambda_counter", counter_args


def run(fn, args):
    out = []
    for a in (args() if callable(args) else args):
        r = fn(*a)
        out.append(r.tolist() if isinstance(r, np.ndarray) else r)
    return out


def bench(repeat: int) -> None:
    print(f"backend in use: {kernels.backend()}")
    if not kernels.jit_available():
        print("numba is not installed; only the numpy timings are meaningful")
    print(f"{'kernel':40s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s}")
    for label, name, args in cases():
        times = {}
        results = {}
        for which in ("numpy", "numba"):
            if which == "numba" and not kernels.jit_available():
                continue
            fn = kernels.get(name, which)
            results[which] = run(fn, args)
            best = float("inf")
            for _ in range(repeat):
                t = time.perf_counter()
                run(fn, args)
                best = min(best, time.perf_counter() - t)
            times[which] = best
        if len(results) == 2 and results["numpy"] != results["numba"]:
            raise SystemExit(f"{name}: backends disagree")
        nb = times.get("numba")
        ratio = f"{times['numpy'] / nb:8.1f}" if nb else "       -"
        nb_ms = f"{1e3 * nb:10.2f}" if nb is not None else "         -"
        print(f"{label:40s} {1e3 * times['numpy']:10.2f} {nb_ms} {ratio}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    bench(ap.parse_args().repeat)


if __name__ == "__main__":
    main()
