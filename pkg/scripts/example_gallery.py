"""Relations and defect for the closed-form integrable families, n = 2..4."""
import argparse

from omegadef.deformation import example_gallery


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--max-degree", type=int, default=3)
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    for v in example_gallery(args.n, args.max_degree, args.trials, args.seed):
        status = "pass" if v.passed else f"FAIL witness={v.witness}"
        print(f"n={v.n} {v.name:10s} relations_zero={v.relations_zero} "
              f"defect_zero={v.defect_zero} pairs={v.pairs_checked} {status}")


if __name__ == "__main__":
    main()
