"""Command line driver.

    python3 -m grprec solve --config run.toml
    python3 -m grprec convergence --config study.toml
    python3 -m grprec efficiency --config study.toml
    python3 -m grprec riemann --test sod --schemes grprecnl,weno-dk --order 3

Exit status: 0 success, 2 numerical failure, 1 configuration or I/O error.

Config files are TOML with every key at top level (or under ``[run]``)::

    test = "quartic-sine"     # multiwave | square-wave | quartic-sine | euler-smooth | sod | 123
    scheme = "grprec"         # grprec | grprecnl | weno-dk | dg   (efficiency: schemes = [...])
    order = 5                 # 2..5                               (efficiency: orders = [...])
    mesh = 256                # solve: int; convergence/efficiency: list of ints
    cfl = 0.9                 # optional; default is the test's value, 0.5 for dg
    t_end = 4.0               # optional, defaults to the test's final time
    gamma = 1.4
    bootstrap = "weno-dk"     # weno-dk | central
    repeats = 3               # efficiency only
    output = "out.csv"
"""
from __future__ import annotations

import argparse
import logging
import sys

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import NumericalFailure
from .harness import (
    RIEMANN_DATA,
    convergence_study,
    diagnostics,
    efficiency_study,
    emit_csv,
    emit_solution_csv,
    get_test_case,
    make_config,
    profile_l1,
    riemann_profiles,
    run,
)

log = logging.getLogger("grprec")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2


class ConfigError(ValueError):
    pass


def load_config(path) -> dict:
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    if "run" in data and isinstance(data["run"], dict):
        data = {**{k: v for k, v in data.items() if k != "run"}, **data["run"]}
    return data


def _need(cfg, key):
    if key not in cfg:
        raise ConfigError(f"config is missing required key {key!r}")
    return cfg[key]


def _meshes(cfg):
    mesh = _need(cfg, "mesh")
    if isinstance(mesh, int):
        raise ConfigError("mesh must be a list of cell counts for a study")
    return [int(m) for m in mesh]


def _case(cfg):
    return get_test_case(_need(cfg, "test"), float(cfg.get("gamma", 1.4)), cfg.get("t_end"))


def cmd_solve(cfg):
    case = _case(cfg)
    mesh = _need(cfg, "mesh")
    if not isinstance(mesh, int):
        raise ConfigError("solve needs a single integer mesh")
    config = make_config(
        _need(cfg, "scheme"), int(_need(cfg, "order")), case, mesh, cfg.get("cfl"), cfg.get("bootstrap", "weno-dk")
    )
    res = run(config, case)
    exact = case.exact_averages(config.grid, res.state.t) if case.exact is not None else None
    diag = diagnostics(res.state, config.grid.boundary == "periodic")
    print(
        f"{case.name} {config.scheme} order {config.order} M={mesh}: {res.steps} steps, "
        f"{res.seconds:.3f} s, min {diag['min']:.6g}, max {diag['max']:.6g}, TV {diag['tv']:.6g}"
    )
    if "output" in cfg:
        emit_solution_csv(res.state, config.grid, cfg["output"], exact)


def cmd_convergence(cfg):
    case = _case(cfg)
    report = convergence_study(
        _need(cfg, "scheme"), int(_need(cfg, "order")), case, _meshes(cfg), cfg.get("cfl"),
        bootstrap=cfg.get("bootstrap", "weno-dk"),
    )
    for r in report.rows:
        print(f"M={r.M:5d}  L1={r.l1:.3e}  ord={r.order_l1:5.2f}  Linf={r.linf:.3e}  cpu={r.cpu:.3f}s")
    if "output" in cfg:
        emit_csv(report, cfg["output"])


def cmd_efficiency(cfg):
    case = _case(cfg)
    schemes = cfg.get("schemes") or [_need(cfg, "scheme")]
    orders = cfg.get("orders") or [_need(cfg, "order")]
    points, fits = efficiency_study(
        schemes, [int(o) for o in orders], case, _meshes(cfg), int(cfg.get("repeats", 3)), cfg.get("cfl")
    )
    for p in points:
        print(f"{p.scheme:9s} {p.order} M={p.M:5d} L1={p.l1:.3e} cpu={p.cpu:.4f}s")
    for (s, o), f in fits.items():
        print(f"{s:9s} {o} extrapolated cpu at L1=1e-16: {f.cpu_at(1e-16):.3e} s")
    if "output" in cfg:
        emit_csv(points, cfg["output"], test=case.name)
        emit_csv(fits, _sibling(cfg["output"], "_extrapolation"), test=case.name)


def _sibling(path, suffix):
    path = str(path)
    stem, dot, ext = path.rpartition(".")
    return f"{stem}{suffix}.{ext}" if dot else path + suffix


def cmd_riemann(args):
    schemes = [s.strip() for s in args.schemes.split(",") if s.strip()]
    profiles = riemann_profiles(args.test, schemes, args.order, args.cells, args.cfl, args.gamma)
    for s, prof in profiles.items():
        print(
            f"{args.test} {s} order {args.order} M={args.cells}: density L1 {profile_l1(prof):.4e}, "
            f"rho_min {prof.numerical[:, 0].min():.4e}"
        )
        if args.output:
            path = args.output if len(profiles) == 1 else _sibling(args.output, "_" + s)
            emit_csv(prof, path)


def build_parser():
    parser = argparse.ArgumentParser(prog="grprec", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("solve", "convergence", "efficiency"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
    p = sub.add_parser("riemann")
    p.add_argument("--test", required=True, choices=sorted(RIEMANN_DATA))
    p.add_argument("--schemes", default="grprecnl,weno-dk")
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--cells", type=int, default=100)
    p.add_argument("--cfl", type=float, default=0.9)
    p.add_argument("--gamma", type=float, default=1.4)
    p.add_argument("--output", default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.command == "riemann":
            cmd_riemann(args)
        else:
            cfg = load_config(args.config)
            {"solve": cmd_solve, "convergence": cmd_convergence, "efficiency": cmd_efficiency}[args.command](cfg)
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (OSError, ValueError, KeyError, TypeError, tomllib.TOMLDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
