"""Long-time advection runs: final TV and extrema for multiwave and square-wave.

    python3 scripts/advection_diagnostics.py --tests multiwave --schemes grprec --orders 2,3,4,5
"""
import argparse
from pathlib import Path

from grprec.errors import NumericalFailure
from grprec.harness import diagnostics, emit_solution_csv, get_test_case, make_config, run


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--tests", default="multiwave,square-wave")
    ap.add_argument("--schemes", default="grprec,grprecnl,weno-dk,dg")
    ap.add_argument("--orders", default="2,3,4,5")
    ap.add_argument("--cells", type=int, default=100)
    ap.add_argument("--t-end", type=float, default=None)
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for test in args.tests.split(","):
        case = get_test_case(test, t_end=args.t_end)
        for scheme in args.schemes.split(","):
            for order in (int(o) for o in args.orders.split(",")):
                config = make_config(scheme, order, case, args.cells)
                tag = f"{test} {scheme} o{order} M={args.cells} C={config.cfl}"
                try:
                    res = run(config, case)
                except NumericalFailure as exc:
                    print(f"{tag}: FAILED {exc}", flush=True)
                    continue
                d = diagnostics(res.state)
                exact = case.exact_averages(config.grid, res.state.t)
                emit_solution_csv(res.state, config.grid, out / f"solution_{test}_{scheme}_{order}.csv", exact)
                print(
                    f"{tag}: tv {d['tv']:.4f} min {d['min']:.4f} max {d['max']:.4f} "
                    f"steps {res.steps} cpu {res.seconds:.1f}s",
                    flush=True,
                )


if __name__ == "__main__":
    main()
