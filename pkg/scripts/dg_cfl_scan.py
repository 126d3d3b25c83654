"""ADER-DG stability scan: square-wave advection over a range of C.

A run counts as stable when it completes and the final extrema stay within
[-0.5, 1.5].  The time step is dt = C / (2m + 1) * dx / |lambda|.

    python3 scripts/dg_cfl_scan.py --orders 2,3,4,5 --cfls 0.3,0.5,0.7,0.9,1.0
"""
import argparse

from grprec.errors import NumericalFailure
from grprec.harness import diagnostics, get_test_case, make_config, run


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--orders", default="2,3,4,5")
    ap.add_argument("--cfls", default="0.3,0.5,0.7,0.9,1.0")
    ap.add_argument("--cells", type=int, default=50)
    ap.add_argument("--t-end", type=float, default=10.0)
    args = ap.parse_args()
    case = get_test_case("square-wave", t_end=args.t_end)
    for order in (int(o) for o in args.orders.split(",")):
        for cfl in (float(c) for c in args.cfls.split(",")):
            try:
                res = run(make_config("dg", order, case, args.cells, cfl=cfl), case, max_retries=0)
                d = diagnostics(res.state)
                stable = -0.5 <= d["min"] and d["max"] <= 1.5
                detail = f"min {d['min']:.3g} max {d['max']:.3g}"
            except (NumericalFailure, FloatingPointError, OverflowError) as exc:
                stable, detail = False, type(exc).__name__
            print(f"dg o{order} C={cfl}: {'stable' if stable else 'UNSTABLE'} ({detail})", flush=True)


if __name__ == "__main__":
    main()
