"""CPU time against L1 error, with power-law extrapolation per (scheme, order).

    python3 scripts/efficiency.py --test quartic-sine --schemes grprec,grprecnl,weno-dk,dg
"""
import argparse
from pathlib import Path

from grprec.harness import efficiency_study, emit_csv, get_test_case

MESHES = {"quartic-sine": [16, 32, 64, 128, 256], "euler-smooth": [40, 80, 160, 320]}


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--test", required=True, choices=sorted(MESHES))
    ap.add_argument("--schemes", default="grprec,grprecnl,weno-dk,dg")
    ap.add_argument("--orders", default="2,3,4,5")
    ap.add_argument("--meshes", default=None)
    ap.add_argument("--repeats", type=int, default=1)
    ap.add_argument("--target", type=float, default=1e-16)
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    meshes = [int(m) for m in args.meshes.split(",")] if args.meshes else MESHES[args.test]
    points, fits = efficiency_study(
        args.schemes.split(","), [int(o) for o in args.orders.split(",")],
        get_test_case(args.test), meshes, args.repeats,
    )
    emit_csv(points, out / f"efficiency_{args.test}.csv", test=args.test)
    emit_csv(fits, out / f"efficiency_{args.test}_extrapolated.csv", test=args.test, target_error=args.target)
    for (scheme, order), fit in fits.items():
        print(f"{scheme:9s} o{order}: slope {fit.slope:.3f}, cpu at {args.target:.0e}: {fit.cpu_at(args.target):.3e} s")


if __name__ == "__main__":
    main()
