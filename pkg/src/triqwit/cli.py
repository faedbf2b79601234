"""Command-line entry point: ``triqwit <command> ...``.

Exit codes: 0 success, 2 input error, 3 no result (no threshold crossing,
numerically inconsistent classification).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .catalog import FAMILIES, SETTINGS, as_density
from .exceptions import ClassificationError, NoThresholdError, TriqwitError
from .formats import (dump_setting, dump_state, parse_params, resolve_setting, resolve_state,
                      setting_to_dict)
from .measurement import estimate_witness, pauli_product, product_for, sample_expectation
from .mixed import WITNESS_IDS, check_witness_id, verdict, witness_value
from .optimize import OptimizerConfig, minimize_witness
from .pure import DEFAULT_TOL as PURE_TOL
from .pure import PureLabel, classify_pure
from .qstate import PureState, is_ppt
from .report import DiscrepancyLedger, find_claim, find_threshold, render
from .scan import parse_grid, scan_witness, to_csv

EXIT_OK, EXIT_INPUT, EXIT_NO_RESULT = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _state_name(token: str) -> str | None:
    name = token.partition(":")[0]
    return name if name in FAMILIES and not token.startswith("@") else None


def _state_params(args) -> dict[str, float]:
    params = parse_params(args.param)
    _, _, inline = args.state.partition(":")
    if inline and _state_name(args.state):
        params.update(parse_params(inline.split(",")))
    return params


def _ledger_rows(ledger: DiscrepancyLedger) -> list[dict]:
    return [{"claim": e.claim, "computed": e.computed, "reported": e.reported,
             "abs_diff": e.abs_diff} for e in ledger.entries]


# ---------------------------------------------------------------------------

def cmd_classify(args, ledger) -> dict:
    state = resolve_state(args.state, parse_params(args.param))
    if not isinstance(state, PureState):
        raise TriqwitError("classify needs a pure state; got a mixed state")
    res = classify_pure(state, args.tol)
    out = {"state": args.state, "g1": res.g_values[0], "g2": res.g_values[1],
           "g3": res.g_values[2], "label": res.label.value}
    if res.label is PureLabel.BISEPARABLE:
        out["party"] = res.party
    out["tol"] = res.tol
    return out


def cmd_witness(args, ledger) -> dict:
    wid = check_witness_id(args.witness)
    rho = as_density(resolve_state(args.state, parse_params(args.param)))
    setting = resolve_setting(args.setting)
    value = witness_value(rho, setting, wid)
    v = verdict(rho, [setting], tol=args.tol)
    out = {"state": args.state, "witness": wid, "setting": args.setting, "value": value,
           "violation": {name: f.triggered for name, f in v.flags.items()}}
    name = _state_name(args.state)
    claim = find_claim("value", name, wid, args.setting) if name else None
    if claim is not None:
        ledger.record(claim, value, _state_params(args))
    return out


def cmd_scan(args, ledger) -> dict | None:
    grid = [parse_grid(g) for g in args.grid]
    setting = resolve_setting(args.setting)
    rows = scan_witness(args.family, grid, check_witness_id(args.witness), setting)
    text = to_csv([name for name, _ in grid], rows)
    if args.out is None:
        sys.stdout.write(text)
        return None
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    values = np.array([v for _, v in rows])
    return {"family": args.family, "witness": args.witness, "setting": args.setting,
            "out": args.out, "points": len(rows), "min_value": float(values.min()),
            "negative_points": int(np.sum(values < 0))}


def cmd_threshold(args, ledger) -> dict:
    wid = check_witness_id(args.witness)
    setting = resolve_setting(args.setting)
    res = find_threshold(args.family, wid, setting, args.target, free=args.free,
                         fixed=parse_params(args.param))
    out = {"family": args.family, "witness": wid, "setting": args.setting,
           "target": args.target, "parameter": res.parameter, "root": res.root,
           "bracket": list(res.bracket), "increasing": res.increasing}
    claim = find_claim("threshold", args.family, wid, args.setting, args.target)
    if claim is not None:
        ledger.record(claim, res.root, {res.parameter: res.root})
    return out


def cmd_optimize(args, ledger) -> dict:
    wid = check_witness_id(args.witness)
    rho = as_density(resolve_state(args.state, parse_params(args.param)))
    cfg = OptimizerConfig(starts=args.starts, max_iterations=args.max_iterations,
                          seed=args.seed)
    res = minimize_witness(rho, wid, cfg)
    out = {"state": args.state, "witness": wid, "best_value": res.best_value,
           "angles": res.best_angles.tolist(), "best_start": res.best_start,
           "evaluations": res.evaluations, "starts": cfg.starts, "seed": cfg.seed}
    if args.setting_out:
        dump_setting(res.best_setting, args.setting_out)
        out["setting_out"] = args.setting_out
    return out


def cmd_sample(args, ledger) -> dict:
    rho = as_density(resolve_state(args.state, parse_params(args.param)))
    setting = resolve_setting(args.setting)
    out = {"state": args.state, "setting": args.setting}
    if args.witness in WITNESS_IDS:
        est = estimate_witness(rho, args.witness, setting, args.shots, args.seed)
        out.update(witness=args.witness, estimate=est.value, error=est.error)
    else:
        # a single product observable: digits select observables of the setting
        s = args.witness.upper()
        prod = pauli_product(s) if args.setting == "pauli" else product_for(setting, s)
        est = sample_expectation(rho, prod, args.shots, args.seed)
        out.update(observable=s, estimate=est.mean, error=est.stderr)
    out.update(shots=args.shots, seed=args.seed)
    return out


def cmd_ppt(args, ledger) -> dict:
    rho = as_density(resolve_state(args.state, parse_params(args.param)))
    rep = is_ppt(rho, args.tol)
    return {"state": args.state, "ppt": rep.all_parties,
            "per_party": {str(p): ok for p, ok in rep.per_party.items()},
            "min_eigenvalue": {str(p): lam for p, lam in rep.min_eigenvalues.items()},
            "tol": args.tol}


def cmd_export(args, ledger) -> dict:
    state = resolve_state(args.state, parse_params(args.param))
    dump_state(state, args.out)
    return {"state": args.state, "kind": "pure" if isinstance(state, PureState) else "mixed",
            "out": args.out}


def cmd_export_setting(args, ledger) -> dict:
    setting = resolve_setting(args.setting)
    dump_setting(setting, args.out)
    return {"setting": args.setting, "out": args.out, **{
        f"{k}.orientation": t.orientation for k, t in zip("ABC", setting.triples)},
        "rotation": setting_to_dict(setting)}


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--machine", action="store_true",
                        help="emit one JSON object instead of key: value lines")
    common.add_argument("--ledger", metavar="PATH",
                        help="append reference-value comparisons to PATH as JSON lines")
    state_opts = argparse.ArgumentParser(add_help=False)
    state_opts.add_argument("--param", action="append", metavar="NAME=VALUE",
                            help="family parameter, repeatable")

    parser = _Parser(prog="triqwit", description="Three-qubit entanglement witnesses.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    state_help = f"named state ({', '.join(FAMILIES)}), name:k=v,... or @file"
    setting_help = f"named setting ({', '.join(SETTINGS)}) or @file"

    p = sub.add_parser("classify", parents=[common, state_opts], help="classify a pure state")
    p.add_argument("state", help=state_help)
    p.add_argument("--tol", type=float, default=PURE_TOL)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("witness", parents=[common, state_opts], help="evaluate one witness")
    p.add_argument("state", help=state_help)
    p.add_argument("witness", help=", ".join(WITNESS_IDS))
    p.add_argument("--setting", default="pauli", help=setting_help)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("scan", parents=[common], help="witness over a family parameter grid")
    p.add_argument("family")
    p.add_argument("witness")
    p.add_argument("--grid", action="append", required=True, metavar="NAME:LO:HI:STEP")
    p.add_argument("--setting", default="pauli", help=setting_help)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("threshold", parents=[common, state_opts],
                       help="parameter where a witness crosses a target value")
    p.add_argument("family")
    p.add_argument("witness")
    p.add_argument("--setting", default="pauli", help=setting_help)
    p.add_argument("--target", type=float, default=0.0)
    p.add_argument("--free", help="free parameter (default: the only unfixed one)")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("optimize", parents=[common, state_opts],
                       help="minimise a witness over local settings")
    p.add_argument("state", help=state_help)
    p.add_argument("witness")
    p.add_argument("--starts", type=int, default=OptimizerConfig.starts)
    p.add_argument("--max-iterations", type=int, default=OptimizerConfig.max_iterations)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--setting-out", metavar="PATH", help="write the best setting here")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("sample", parents=[common, state_opts],
                       help="finite-shot estimate of a witness or product observable")
    p.add_argument("state", help=state_help)
    p.add_argument("witness", help="witness id or a product string such as 333 or I13")
    p.add_argument("--setting", default="pauli", help=setting_help)
    p.add_argument("--shots", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("ppt", parents=[common, state_opts], help="partial-transpose test")
    p.add_argument("state", help=state_help)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_ppt)

    p = sub.add_parser("export", parents=[common, state_opts], help="write a state file")
    p.add_argument("state", help=state_help)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("export-setting", parents=[common], help="write a setting file")
    p.add_argument("setting", help=setting_help)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export_setting)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    ledger = DiscrepancyLedger()
    try:
        report = args.func(args, ledger)
    except NoThresholdError as exc:
        print(f"triqwit: no threshold: {exc}", file=sys.stderr)
        return EXIT_NO_RESULT
    except ClassificationError as exc:
        print(f"triqwit: inconsistent: {exc}", file=sys.stderr)
        return EXIT_NO_RESULT
    except TriqwitError as exc:
        print(f"triqwit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if report is not None:
        if len(ledger):
            report["ledger"] = _ledger_rows(ledger)
        sys.stdout.write(render(report, args.machine))
    if args.ledger and len(ledger):
        with Path(args.ledger).open("a", encoding="utf-8") as fh:
            fh.write(ledger.to_jsonl())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
