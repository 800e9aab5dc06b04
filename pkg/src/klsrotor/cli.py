"""Command-line front end.

Exit status: 0 all asserted checks pass, 1 a check failed, 2 usage error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from . import config as cfgmod
from .criterion import integral_Id
from .errors import NumericalError, UsageError
from .rotor import assemble_hamiltonian, build_lattice
from .suites import ORDER, SuiteReport, _clean, environment, rotor_tables, run_suite

log = logging.getLogger("klsrotor")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

# subcommand -> tolerance field a bare ``--tol X`` refers to
PRIMARY_TOL = {"kls": "ineq", "ladder": "ineq", "integral": "integral", "verify": None,
               "diagonalize": "obs", "sweep": "obs"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser, model=True):
    p.add_argument("--config", help="YAML config, or a JSON report to re-run")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--tol", action="append", default=[],
                   help="NAME=VALUE for a named tolerance, or a bare VALUE for the "
                        "subcommand's main one")
    p.add_argument("--out", help="output directory (default: $%s)" % cfgmod.OUT_ENV)
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("-v", "--verbose", action="store_true")
    if model:
        p.add_argument("-d", "--dim", "--d", dest="dim", type=int, help="lattice dimension")
        p.add_argument("--edge", type=int, help="lattice edge 2N")
        p.add_argument("--cutoff", type=int, nargs="+", help="angular-momentum cutoff(s) M")
        p.add_argument("--inertia", type=float)
        p.add_argument("--coupling", type=float)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="klsrotor", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("kls", help="randomized KLS/Schupp inequality suite")
    _common(p, model=False)
    p.add_argument("-d", "--dim", "--d", dest="max_dim", type=int, help="largest matrix size")

    p = sub.add_parser("ladder", help="operator-version truncation ladders")
    _common(p, model=False)

    p = sub.add_parser("integral", help="Brillouin-zone integral I_d")
    _common(p, model=False)
    p.add_argument("-d", "--dim", "--d", dest="dim", type=int, required=True)

    p = sub.add_parser("diagonalize", help="ground state and momentum observables")
    _common(p)
    p.add_argument("--export-coo", help="write the sparse H(0) of the largest cutoff here")

    p = sub.add_parser("verify", help="run verification suites")
    _common(p)
    p.add_argument("--suite", action="append", choices=ORDER + ("all",),
                   help="suite to run (repeatable; default all)")

    p = sub.add_parser("sweep", help="momentum observables across cutoffs")
    _common(p)
    return ap


def _tol_updates(items, command) -> dict:
    out = {}
    names = {f for f in cfgmod.TolConfig.__dataclass_fields__}
    for item in items:
        if "=" in item:
            name, val = item.split("=", 1)
            if name not in names:
                raise UsageError(f"--tol: unknown tolerance {name!r}; known: {', '.join(sorted(names))}")
        else:
            name, val = PRIMARY_TOL.get(command), item
            if name is None:
                raise UsageError("--tol: use NAME=VALUE for this subcommand")
        try:
            out[f"tol.{name}"] = float(val)
        except ValueError:
            raise UsageError(f"--tol: {val!r} is not a number") from None
    return out


def make_config(args) -> cfgmod.RunConfig:
    cfg = cfgmod.load(args.config) if args.config else cfgmod.RunConfig()
    upd = {"random.seed": args.seed, "random.trials": args.trials,
           "output.dir": args.out, "output.format": args.format}
    if hasattr(args, "edge"):
        upd.update({"model.d": args.dim, "model.edge": args.edge, "model.cutoffs": args.cutoff,
                    "model.inertia": args.inertia, "model.coupling": args.coupling})
    if getattr(args, "max_dim", None) is not None:
        upd["random.max_dim"] = args.max_dim
    if args.command == "verify" and args.suite:
        upd["suites"] = list(ORDER) if "all" in args.suite else args.suite
    elif args.command in ("kls", "ladder"):
        upd["suites"] = [args.command]
    upd.update(_tol_updates(args.tol, args.command))
    return cfgmod.override(cfg, upd)


def _write_rows(path: Path, rows: list[dict]):
    if not rows:
        return
    keys = list(rows[0])
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=keys)
        w.writeheader()
        for r in rows:
            w.writerow({k: (json.dumps(_clean(v)) if isinstance(v, (dict, list)) else _clean(v))
                        for k, v in r.items()})


def write_outputs(cfg, payload: dict, tables: dict[str, list[dict]], stem: str) -> list[Path]:
    out = cfg.out_dir()
    if out is None:
        return []
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if cfg.output.format == "json":
        p = out / f"{stem}.json"
        p.write_text(json.dumps(_clean(payload), indent=2, sort_keys=False) + "\n")
        written.append(p)
    else:
        for name, rows in tables.items():
            p = out / f"{stem}_{name}.csv"
            _write_rows(p, rows)
            written.append(p)
    return written


def _check_rows(report: SuiteReport) -> list[dict]:
    return [{"name": c.name, "status": c.status, "inputs_digest": c.digest,
             "values": c.values, "slacks": c.slacks} for c in report.checks]


def cmd_suite(args, cfg) -> int:
    report = run_suite(cfg)
    payload = report.as_dict()
    for c in report.checks:
        if c.status == "fail" or args.verbose:
            print(f"{c.status.upper():4}  {c.name}  {json.dumps(_clean(c.slacks))}")
    s = payload["summary"]
    print(f"{s['pass']} passed, {s['fail']} failed, {s['flag']} flagged (seed {cfg.random.seed})")
    for p in write_outputs(cfg, payload, {"checks": _check_rows(report)}, "report"):
        print(f"wrote {p}")
    if not report.ok:
        print("failing checks: " + ", ".join(c.name for c in report.failed))
        return EXIT_FAIL
    return EXIT_OK


def cmd_integral(args, cfg) -> int:
    tol = cfg.tol.integral
    r = integral_Id(args.dim, tol)
    if r.diverged:
        print(f"I_{args.dim} diverges (midpoint sums keep growing)")
    else:
        print(f"I_{args.dim} = {r.value:.6f}  (error estimate {r.errorEstimate:.1e})")
    payload = {"schema_version": 1, "config": cfg.to_dict(), "seed": cfg.random.seed,
               "result": {"d": args.dim, "value": r.value, "errorEstimate": r.errorEstimate,
                          "diverged": r.diverged, "refinementTrace": r.refinementTrace},
               "environment": environment()}
    rows = [{"cells": n, "value": v} for n, v in r.refinementTrace]
    for p in write_outputs(cfg, payload, {"trace": rows}, f"integral_d{args.dim}"):
        print(f"wrote {p}")
    return EXIT_OK


def _momentum_rows(cfg, cutoffs):
    rows, states = [], []
    for M in cutoffs:
        lat, H, gs, reps = rotor_tables(cfg, M)
        states.append({"M": M, "dim": H.dim, "E0": gs.energy, "gap": gs.gap,
                       "residual": gs.residual, "method": gs.method})
        for r in reps:
            rows.append(dict({"M": M}, **r.as_row()))
    return rows, states


def _print_table(rows):
    cols = ["M", "k1", "g", "chi", "dcomm", "gBound", "chiBound", "schwarz_slack"]
    print("  ".join(f"{c:>12}" for c in cols))
    for r in rows:
        print("  ".join(format(float(r[c]), ">12.6g") for c in cols))


def cmd_rotor(args, cfg) -> int:
    cutoffs = cfg.model.cutoffs if args.command == "sweep" else cfg.model.cutoffs[-1:]
    rows, states = _momentum_rows(cfg, cutoffs)
    for s in states:
        print(f"M={s['M']} dim={s['dim']} E0={s['E0']:.12g} gap={s['gap']:.6g} ({s['method']})")
    _print_table(rows)
    if args.command == "diagonalize" and args.export_coo:
        from .rotor import RotorModel
        m = RotorModel(cfg.model.inertia, cfg.model.coupling, cutoffs[-1])
        H = assemble_hamiltonian(m, build_lattice(cfg.model.d, cfg.N))
        print(f"wrote {H.export_coo(args.export_coo)}")
    payload = {"schema_version": 1, "config": cfg.to_dict(), "seed": cfg.random.seed,
               "ground_states": states, "momenta": rows, "environment": environment()}
    for p in write_outputs(cfg, payload, {"momenta": rows, "ground_states": states}, args.command):
        print(f"wrote {p}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = make_config(args)
        if args.command in ("kls", "ladder", "verify"):
            return cmd_suite(args, cfg)
        if args.command == "integral":
            return cmd_integral(args, cfg)
        return cmd_rotor(args, cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
