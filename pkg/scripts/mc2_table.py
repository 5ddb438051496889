"""Second-order defect against the obstruction cocycles, per dimension and seed.

Prints the transfer matrix of each shift (coefficients in terms of the
relations) and whether it agrees across seeds.

    python3 scripts/mc2_table.py --n 2 3 4 --seeds 0 1 2
"""
import argparse

from omegadef.checks import mc2_survey
from omegadef.config import MC2Config


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    ap.add_argument("--pairs", type=int, default=10)
    args = ap.parse_args()

    for n in args.n:
        tables = []
        for seed in args.seeds:
            s = mc2_survey(n, MC2Config(pairs=args.pairs, seed=seed))
            d = s.as_dict()
            tables.append(d["sign_table"])
            print(f"n={n} seed={seed}: pairs={d['pairs_used']} skipped={d['degenerate_skipped']} "
                  f"residual_zero={d['residual_zero']} verdicts={d['shift_verdicts']}")
        same = all(t == tables[0] for t in tables)
        print(f"n={n}: table {tables[0]}  identical across seeds: {same}")


if __name__ == "__main__":
    main()
