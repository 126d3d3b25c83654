"""Sod and 123 profiles at M=100, one CSV per (test, scheme, order, C).

    python3 scripts/riemann_profiles.py --tests sod,123 --schemes grprecnl,weno-dk --orders 2,3,4,5
"""
import argparse
from pathlib import Path

from grprec.errors import NumericalFailure
from grprec.harness import emit_csv, profile_l1, riemann_profiles


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--tests", default="sod,123")
    ap.add_argument("--schemes", default="grprecnl,weno-dk")
    ap.add_argument("--orders", default="2,3,4,5")
    ap.add_argument("--cfls", default="0.9,0.7")
    ap.add_argument("--cells", type=int, default=100)
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for test in args.tests.split(","):
        for scheme in args.schemes.split(","):
            for order in (int(o) for o in args.orders.split(",")):
                for cfl in (float(c) for c in args.cfls.split(",")):
                    tag = f"{test} {scheme} o{order} C={cfl}"
                    try:
                        prof = riemann_profiles(test, [scheme], order, args.cells, cfl)[scheme]
                    except NumericalFailure as exc:
                        print(f"{tag}: FAILED {exc}", flush=True)
                        continue
                    path = emit_csv(prof, out / f"profile_{test}_{scheme}_{order}_C{cfl}.csv")
                    print(f"{tag}: density L1 {profile_l1(prof):.3e} -> {path}", flush=True)


if __name__ == "__main__":
    main()
