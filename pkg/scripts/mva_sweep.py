"""Closed-network throughput and response time against their bounds.

Solves the interactive model for N = 1..NMAX with exact MVA and prints, per
population, the MVA values next to the asymptotic and balanced bounds. The
output is whitespace separated and can be plotted directly with gnuplot.

    python3 scripts/mva_sweep.py --nmax 30
    python3 scripts/mva_sweep.py --model closed.txt --nmax 50
"""

import argparse

from perfkit import qnsolver

DEFAULT = qnsolver.ClosedModel(1, 8.0, (qnsolver.Station("cpu", 8, 0.03),
                                        qnsolver.Station("disk", 7, 0.1)))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--model", help="closed model file (qnsolver text format)")
    ap.add_argument("--nmax", type=int, default=30)
    a = ap.parse_args()

    model = DEFAULT
    if a.model:
        with open(a.model, encoding="utf-8") as fh:
            model = qnsolver.parse_model(fh.read())
        if not isinstance(model, qnsolver.ClosedModel):
            ap.error("the sweep needs a closed model")
    net = qnsolver.solve_mva(qnsolver.ClosedModel(a.nmax, model.Z, model.stations))
    ab = qnsolver.asymptotic_bounds(model)
    bb = qnsolver.balanced_bounds(model)
    print(f"# D {ab.D:.4f}  D_b {ab.D_b:.4f}  Z {ab.Z:.4f}  N* {ab.N_star}")
    print("# N  X_mva  X_opt  X_bal_lo  X_bal_hi  R_mva  R_opt  R_bal_lo  R_bal_hi")
    violations = 0
    for row in (r for r in net.trace if r.n >= 1):
        n = row.n
        xs = (row.X0, ab.x_opt(n), bb.x_lower(n), bb.x_upper(n))
        rs = (row.R, ab.r_opt(n), bb.r_lower(n), bb.r_upper(n))
        tol = 1e-9 * max(1.0, row.R)
        if not (xs[2] - tol <= xs[0] <= min(xs[1], xs[3]) + tol
                and max(rs[1], rs[2]) - tol <= rs[0] <= rs[3] + tol):
            violations += 1
        print(f"{n:3d} " + " ".join(f"{v:.4f}" for v in xs + rs))
    print(f"# rows outside the bounds: {violations}")


if __name__ == "__main__":
    main()
