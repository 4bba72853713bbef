"""Compiled vs pure-Python reduction kernel on a few Groebner basis workloads.

Run with ``python benchmarks/bench_kernels.py [--repeat N]``.  Each case is
computed with both backends; the reduced bases must agree term for term
before any timing is reported.
"""

import argparse
import random
import time

from unproj_lab import families, kernels
from unproj_lab.groebner import compute_gb
from unproj_lab.polyring import PolyRing


def katsura_h(n: int, p: int = 32003):
    """Homogenized Katsura-n system."""
    names = [f"u{i}" for i in range(n + 1)] + ["h"]
    R = PolyRing(names, p)
    u = R.gens()[: n + 1]
    h = R.gens()[-1]

    def U(i):
        i = abs(i)
        return u[i] if i <= n else R.zero()

    polys = [sum((U(j) for j in range(-n, n + 1)), R.zero()) - h]
    for m in range(n):
        polys.append(sum((U(j) * U(m - j) for j in range(-n, n + 1)), R.zero()) - U(m) * h)
    return R, polys


def random_quadrics(nv: int, count: int, seed: int, p: int = 32003):
    rng = random.Random(seed)
    R = PolyRing([f"x{i}" for i in range(nv)], p)
    xs = R.gens()
    polys = []
    for _ in range(count):
        f = R.zero()
        for i in range(nv):
            for j in range(i, nv):
                f = f + rng.randrange(p) * xs[i] * xs[j]
        polys.append(f)
    return R, polys


CASES = {
    "katsura5_h": lambda: katsura_h(5),
    "katsura6_h": lambda: katsura_h(6),
    "random_quadrics_7x5": lambda: random_quadrics(7, 5, seed=3),
    "caviglia_6": lambda: (families.caviglia(6).ring, families.caviglia(6).gens),
    "katsura7_h": lambda: katsura_h(7),
    "random_quadrics_8x6": lambda: random_quadrics(8, 6, seed=5),
}


def run(backend, ring, gens, repeat):
    best = None
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = compute_gb(ring, gens, backend=backend)
        dt = time.perf_counter() - t
        best = dt if best is None else min(best, dt)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--cases", nargs="*", default=list(CASES))
    args = ap.parse_args(argv)
    if not kernels.compiled_available():
        raise SystemExit("compiled kernel not built; run pip install -e . --no-build-isolation")
    print(f"{'case':24s} {'|G|':>5s} {'python s':>10s} {'compiled s':>11s} {'speedup':>8s}")
    for name in args.cases:
        ring, gens = CASES[name]()
        tp, gp = run("python", ring, gens, args.repeat)
        tc, gc = run("compiled", ring, gens, args.repeat)
        if [g.terms() for g in gp] != [g.terms() for g in gc]:
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:24s} {len(gp):5d} {tp:10.3f} {tc:11.3f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
