"""Color a seeded corpus and certify each scheme over a range of moduli.

    python3 scripts/run_corpus.py --size 200 --moduli 2-16

Prints per-dimension blow-up statistics and a certified/failed table.
"""
import argparse
import statistics
import time
from collections import Counter, defaultdict

from snc_ramify.coloring import StepAudit, color
from snc_ramify.generate import corpus
from snc_ramify.schemes import Certificate, remark_scheme_3, remark_scheme_4, square_scheme, verify


def parse_range(text):
    lo, _, hi = text.partition("-")
    return range(int(lo), int(hi or lo) + 1)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=200)
    ap.add_argument("--max-vertices", type=int, default=12)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--moduli", type=parse_range, default=parse_range("2-16"))
    args = ap.parse_args()

    complexes = corpus(args.size, max_vertices=args.max_vertices, seed=args.seed)
    audit = StepAudit()
    start = time.perf_counter()
    colored = [color(c, audit) for c in complexes]
    print(f"colored {len(colored)} complexes in {time.perf_counter() - start:.2f}s, "
          f"{len(audit.failures)} invariant violations")

    blowups = defaultdict(list)
    for c, (cc, log) in zip(complexes, colored):
        blowups[c.n].append(len(log))
    print("n  count  mean-blowups  max-blowups")
    for n in sorted(blowups):
        xs = blowups[n]
        print(f"{n}  {len(xs):5d}  {statistics.mean(xs):12.1f}  {max(xs):11d}")
    print("insertion outcomes:", dict(audit.outcomes))

    table = Counter()
    start = time.perf_counter()
    for cc, _ in colored:
        schemes = [square_scheme(cc)]
        if cc.complex.n == 3:
            schemes += [remark_scheme_4(), remark_scheme_3()]
        for scheme in schemes:
            for r in args.moduli:
                ok = isinstance(verify(cc, scheme, r), Certificate)
                table[scheme.name, r, ok] += 1
    print(f"verification took {time.perf_counter() - start:.2f}s")
    names = sorted({k[0] for k in table})
    print("r   " + "  ".join(f"{name:>14}" for name in names))
    for r in args.moduli:
        cells = [f"{table[name, r, True]:>5} ok {table[name, r, False]:>3} x" for name in names]
        print(f"{r:<3} " + "  ".join(cells))


if __name__ == "__main__":
    main()
