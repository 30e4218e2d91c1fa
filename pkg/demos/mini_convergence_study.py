"""Small grid-refinement study of the shrinking circle.

Runs the curvature-flow benchmark on a few coarse grids and prints the
error table (time-weighted l1 radius error and measured extinction time per
grid size).  The full five-grid protocol lives in the acceptance tests; this
script is the quick-look version.

Usage: python demos/mini_convergence_study.py [--sizes 16,32,64] [--out DIR]
"""

import argparse

from hmbo.harness import ExperimentConfig, convergence_study


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="16,32,64")
    ap.add_argument("--n-tau", type=int, default=50,
                    help="steps the exact extinction time is divided into")
    ap.add_argument("--out", default=None, help="directory for CSV output")
    args = ap.parse_args()

    sizes = tuple(int(s) for s in args.sizes.split(","))
    cfg = ExperimentConfig(grid_sizes=sizes, n_tau=args.n_tau, out_dir=args.out)
    print(f"tau = {cfg.tau:.6g}, grids {sizes}")

    report = convergence_study(cfg)
    print("N      ns_tau      err")
    prev_err = None
    for row in sorted(report.rows, key=lambda r: r.n):
        note = ""
        if prev_err is not None and row.err < prev_err:
            note = f"  ({prev_err / row.err:.2f}x smaller)"
        print(f"{row.n:<6d} {row.ns_tau:<10.6g} {row.err:.6g}{note}")
        prev_err = row.err
    for n, msg in report.failures:
        print(f"N={n} failed: {msg}")
    if args.out:
        print(f"CSV files in {args.out}")


if __name__ == "__main__":
    main()
