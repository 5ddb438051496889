"""Probe every obstruction cell for the given dimensions and write a JSON table.

    python3 scripts/nontriviality_sweep.py --n 2 3 --jet 3 --order 2 --out sweep.json
"""
import argparse
import json
import time

from omegadef.obstruction import nontriviality_report


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--jet", type=int, default=3)
    ap.add_argument("--order", type=int, default=2)
    ap.add_argument("--out")
    args = ap.parse_args()

    table = []
    for n in args.n:
        start = time.perf_counter()
        rep = nontriviality_report(n, args.jet, args.order)
        secs = time.perf_counter() - start
        for c in rep.cells:
            print(f"n={n} {c.target}^{c.k}: {c.verdict:17s} unknowns={c.unknowns:5d} "
                  f"pairs={c.pairs_used:4d} cert={len(c.certificate)} "
                  f"checked={c.certificate_checked}")
        for v in rep.independence:
            print(f"n={n} gamma2^{v.k}, gamma2~^{v.k} independent={v.independent} "
                  f"(rank {v.rank_ansatz} -> {v.rank_augmented})")
        print(f"n={n}: {secs:.1f}s")
        table.append({"n": n, "cells": [c.as_dict() for c in rep.cells],
                      "independence": [v.as_dict() for v in rep.independence]})
    if args.out:
        with open(args.out, "w") as fh:
            json.dump({"jet": args.jet, "order": args.order, "results": table}, fh, indent=2)


if __name__ == "__main__":
    main()
