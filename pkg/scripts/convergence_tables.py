"""Convergence tables for the smooth tests, one CSV per (test, scheme, order).

    python3 scripts/convergence_tables.py --test euler-smooth --schemes grprec,weno-dk --orders 2,3,4,5
"""
import argparse
import logging
from pathlib import Path

from grprec.harness import convergence_study, emit_csv, get_test_case

MESHES = {"quartic-sine": [16, 32, 64, 128, 256], "euler-smooth": [40, 80, 160, 320, 640]}
# ADER-DG costs (2m+1)/C times more steps; its finest Euler mesh is 320
DG_MESHES = {"quartic-sine": [16, 32, 64, 128, 256], "euler-smooth": [40, 80, 160, 320]}


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--test", required=True, choices=sorted(MESHES))
    ap.add_argument("--schemes", default="grprec")
    ap.add_argument("--orders", default="2,3,4,5")
    ap.add_argument("--meshes", default=None, help="comma separated; default depends on test and scheme")
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    case = get_test_case(args.test)
    for scheme in args.schemes.split(","):
        for order in (int(o) for o in args.orders.split(",")):
            if args.meshes:
                meshes = [int(m) for m in args.meshes.split(",")]
            else:
                meshes = (DG_MESHES if scheme == "dg" else MESHES)[args.test]
            rep = convergence_study(scheme, order, case, meshes)
            path = emit_csv(rep, out / f"convergence_{args.test}_{scheme}_{order}.csv")
            cells = "  ".join(f"{r.M}:{r.l1:.3e}({r.order_l1:.2f})" for r in rep.rows)
            print(f"{args.test} {scheme} {order}  {cells}  cpu {sum(r.cpu for r in rep.rows):.1f}s -> {path}", flush=True)


if __name__ == "__main__":
    main()
