"""Compare the compiled and pure-Python kernel backends.

Usage::

    python benchmarks/bench_kernels.py [--repeat 3] [--json out.json]

Each workload runs under every available backend; the table reports the
best wall time and the speedup of the compiled core. Results of the two
backends are also compared for equality.
"""
import argparse
import json
import random
import sys
import time

from stabpar import kernels, plants
from stabpar.groebner import groebner_basis
from stabpar.parse import parse_poly
from stabpar.polyring import PolyRing
from stabpar.synthesis import synthesize


def _polys(ring, texts):
    return [parse_poly(t, ring) for t in texts]


def cyclic5():
    v = "abcde"
    R = PolyRing(list(v))
    texts = ["+".join("*".join(v[(i + j) % 5] for j in range(k)) for i in range(5)) for k in range(1, 5)]
    gens = _polys(R, texts + ["a*b*c*d*e-1"])
    return lambda: [str(g) for g in groebner_basis(gens, ring=R).basis]


def katsura3():
    R = PolyRing(["x0", "x1", "x2", "x3"])
    gens = _polys(
        R,
        [
            "x0+2*x1+2*x2+2*x3-1",
            "x0^2+2*x1^2+2*x2^2+2*x3^2-x0",
            "2*x0*x1+2*x1*x2+2*x2*x3-x1",
            "x1^2+2*x0*x2+2*x1*x3-x2",
        ],
    )
    return lambda: [str(g) for g in groebner_basis(gens, ring=R).basis]


def random_products():
    R = PolyRing(["x", "y", "z"])
    rng = random.Random(1)

    def rp():
        terms = [f"{rng.randint(-9, 9)}*x^{rng.randint(0, 6)}*y^{rng.randint(0, 6)}*z^{rng.randint(0, 6)}" for _ in range(25)]
        return parse_poly("+".join(terms), R)

    pairs = [(rp(), rp()) for _ in range(40)]
    return lambda: [str(a * b) for a, b in pairs]


def synthesis_corpus():
    problems = [plants.load(n).to_plant() for n in plants.names() if n != "bivariate_unstabilizable"]
    return lambda: [str(synthesize(P).controller) for P in problems]


WORKLOADS = {
    "groebner_cyclic5": cyclic5,
    "groebner_katsura3": katsura3,
    "poly_products": random_products,
    "synthesis_corpus": synthesis_corpus,
}


def bench(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", metavar="PATH")
    args = ap.parse_args(argv)
    backends = kernels.available_backends()
    if "cython" not in backends:
        print("note: compiled core unavailable; timing the Python backend only", file=sys.stderr)
    prev = kernels.backend_name()
    rows = []
    try:
        for name, make in WORKLOADS.items():
            fn = make()
            row = {"workload": name}
            outputs = {}
            for b in backends:
                kernels.use_backend(b)
                row[b], outputs[b] = bench(fn, args.repeat)
            row["agree"] = len({json.dumps(o) for o in outputs.values()}) == 1
            if "cython" in row:
                row["speedup"] = row["python"] / row["cython"]
            rows.append(row)
    finally:
        kernels.use_backend(prev)
    print(f"{'workload':<20}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}{'agree':>7}")
    for r in rows:
        cells = "".join(f"{r[b]:>11.3f}s" for b in backends)
        sp = f"{r['speedup']:>9.2f}x" if "speedup" in r else f"{'-':>10}"
        print(f"{r['workload']:<20}{cells}{sp}{str(r['agree']):>7}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=2, sort_keys=True)
    return 0 if all(r["agree"] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
