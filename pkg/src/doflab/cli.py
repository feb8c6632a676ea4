"""Command-line front end.

Subcommands map one-to-one onto the library surface: exact region
geometry (``region``, ``corners``, ``compare``, ``sweep-alpha``,
``sweep-pairs``), scheduling (``plan``), and Monte Carlo simulation
(``simulate``). Exact quantities are printed as ``p/q`` strings; output
goes to stdout or ``--out``. Exit codes: 0 success, 2 usage, 3 domain
error (printed as ``E:<CODE>:<message>`` on stderr).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

from .errors import (
    AntennaOverflow,
    DegenerateCorner,
    DoflabError,
    InfeasiblePlan,
    InvalidWeight,
    ShapeMismatch,
    SingularCovariance,
    UnboundedRegion,
    WrongCase,
)
from .rational import as_ratio, format_ratio
from .region import (
    SystemConfig,
    delayed_csit_region,
    dof_region,
    is_subset,
    no_csit_region,
    representative_corner,
)
from .scheme import (
    achieved_dof,
    check_decoding_conditions,
    corner_weight,
    order2_payload,
    plan_schedule,
    plan_tdma,
)
from .simulate import SimParams, estimate_rates, rank_check_campaign

_ERROR_CODES = {
    DegenerateCorner: "DEGENERATE_CORNER",
    UnboundedRegion: "UNBOUNDED_REGION",
    WrongCase: "WRONG_CASE",
    InvalidWeight: "INVALID_WEIGHT",
    InfeasiblePlan: "INFEASIBLE_PLAN",
    AntennaOverflow: "ANTENNA_OVERFLOW",
    ShapeMismatch: "SHAPE_MISMATCH",
    SingularCovariance: "SINGULAR_COVARIANCE",
}


class _CliError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def _add_config_args(sub: argparse.ArgumentParser, with_alphas: bool = True):
    sub.add_argument("--M", type=int, required=True, help="transmit antennas")
    sub.add_argument("--N1", type=int, required=True, help="receiver-1 antennas")
    sub.add_argument("--N2", type=int, required=True, help="receiver-2 antennas")
    if with_alphas:
        sub.add_argument("--alpha1", default="1", help="CSIT quality of user 1 in [0,1], e.g. 1/2")
        sub.add_argument("--alpha2", default="1", help="CSIT quality of user 2 in [0,1]")


def _add_output_args(sub: argparse.ArgumentParser, formats=("json",)):
    sub.add_argument("--out", default="-", help="output path, or - for stdout")
    if len(formats) > 1:
        sub.add_argument("--format", choices=formats, default=formats[0])


def _add_seed_arg(sub: argparse.ArgumentParser):
    sub.add_argument(
        "--seed",
        type=int,
        default=None,
        help="RNG seed (default: $DOFLAB_SEED, else 0)",
    )


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("DOFLAB_SEED", "").strip()
    if env:
        try:
            return int(env)
        except ValueError:
            raise _CliError("INVALID_SEED", f"DOFLAB_SEED is not an integer: {env!r}")
    return 0


def _alpha(value: str, name: str):
    try:
        ratio = as_ratio(value)
    except ValueError:
        raise _CliError("INVALID_ALPHA", f"{name} is not a rational: {value!r}")
    if not 0 <= ratio <= 1:
        raise _CliError("INVALID_ALPHA", f"{name} must lie in [0, 1], got {value}")
    return ratio


def _config(args) -> SystemConfig:
    a1 = _alpha(args.alpha1, "alpha1") if hasattr(args, "alpha1") else as_ratio(1)
    a2 = _alpha(args.alpha2, "alpha2") if hasattr(args, "alpha2") else as_ratio(1)
    try:
        return SystemConfig(args.M, args.N1, args.N2, a1, a2)
    except ValueError as exc:
        raise _CliError("INVALID_CONFIG", str(exc))


def _emit(text: str, out: str):
    if out in (None, "-", ""):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _plan_for(cfg: SystemConfig, weight, at_corner: bool):
    if at_corner:
        weight = corner_weight(cfg) if cfg.n2 < cfg.m else as_ratio("1/2")
    else:
        try:
            weight = as_ratio(weight)
        except ValueError:
            raise _CliError("INVALID_WEIGHT", f"weight is not a rational: {weight!r}")
    if cfg.n2 < cfg.m:
        return plan_schedule(cfg, weight), weight
    return plan_tdma(cfg, weight), weight


def cmd_region(args) -> int:
    region = dof_region(_config(args))
    _emit(_json_text(region.to_json_dict()), args.out)
    return 0


def cmd_corners(args) -> int:
    region = dof_region(_config(args))
    verts = region.vertices()
    if getattr(args, "format", "json") == "csv":
        lines = ["d1,d2"]
        lines += [f"{format_ratio(v.d1)},{format_ratio(v.d2)}" for v in verts]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        payload = {"vertices": [[format_ratio(v.d1), format_ratio(v.d2)] for v in verts]}
        _emit(_json_text(payload), args.out)
    return 0


def cmd_compare(args) -> int:
    cfg = _config(args)
    lower = no_csit_region(cfg)
    mid = dof_region(cfg)
    upper = delayed_csit_region(cfg)
    payload = {
        "no_csit": lower.to_json_dict(),
        "configured": mid.to_json_dict(),
        "perfect_delayed": upper.to_json_dict(),
        "nested": {
            "no_csit_within_configured": is_subset(lower, mid),
            "configured_within_perfect_delayed": is_subset(mid, upper),
        },
    }
    _emit(_json_text(payload), args.out)
    return 0


def _plan_payload(cfg: SystemConfig, plan, weight) -> dict:
    check = check_decoding_conditions(plan, cfg)
    payload = order2_payload(plan, cfg)
    dof = achieved_dof(plan, cfg)
    return {
        "weight": format_ratio(weight),
        "tau": [plan.tau1, plan.tau2, plan.tau3],
        "s1_count": plan.s1_count,
        "s2_count": plan.s2_count,
        "integer_scale": plan.integer_scale,
        "decoding": {"ok": check.ok, "slack1": check.slack1, "slack2": check.slack2},
        "payload": {
            "k1_needed": payload.k1_needed,
            "k2_needed": payload.k2_needed,
            "length": payload.length,
            "per_slot_streams": payload.per_slot_streams,
        },
        "dof": [format_ratio(dof.d1), format_ratio(dof.d2)],
    }


def cmd_plan(args) -> int:
    cfg = _config(args)
    plan, weight = _plan_for(cfg, args.weight, args.at_corner)
    _emit(_json_text(_plan_payload(cfg, plan, weight)), args.out)
    return 0


def cmd_simulate(args) -> int:
    cfg = _config(args)
    plan, weight = _plan_for(cfg, args.weight, args.at_corner)
    snrs = []
    snr = args.snr_min
    while snr <= args.snr_max + 1e-9:
        snrs.append(round(snr, 6))
        snr += args.snr_step
    if len(snrs) < 2:
        raise _CliError("INVALID_SNR_GRID", "need at least two SNR points")
    params = SimParams(
        snr_grid_db=tuple(snrs),
        trials=args.trials,
        seed=_resolve_seed(args),
        noise_variance=args.noise_variance,
    )

    if args.fidelity == "rank":
        passes = rank_check_campaign(cfg, plan, params)
        payload = {
            "plan": _plan_payload(cfg, plan, weight),
            "rank_check": {
                "rx1_passes": passes[0],
                "rx2_passes": passes[1],
                "trials": params.trials,
            },
        }
        _emit(_json_text(payload), args.out)
        return 0

    report = estimate_rates(cfg, plan, params)
    if args.fidelity == "both":
        passes = rank_check_campaign(cfg, plan, params)
        report = replace(report, rank_passes=passes, rank_trials=params.trials)

    if args.out in (None, "-", ""):
        if getattr(args, "format", "json") == "csv":
            _emit(report.to_csv_text(), args.out)
        else:
            _emit(_json_text(report.to_json_dict()), args.out)
    else:
        base = Path(args.out)
        base.with_suffix(".csv").write_text(report.to_csv_text())
        base.with_suffix(".json").write_text(_json_text(report.to_json_dict()))
    return 0


def _parse_alpha_list(text: str) -> list:
    items = [piece.strip() for piece in text.split(",") if piece.strip()]
    if not items:
        raise _CliError("INVALID_ALPHA", "empty alpha list")
    return [_alpha(piece, "alpha") for piece in items]


def cmd_sweep_alpha(args) -> int:
    alphas = _parse_alpha_list(args.alphas)
    entries = []
    for alpha in alphas:
        cfg = SystemConfig(args.M, args.N1, args.N2, alpha, alpha)
        region = dof_region(cfg)
        corner = representative_corner(cfg)
        entries.append(
            {
                "alpha": format_ratio(alpha),
                "vertices": [
                    [format_ratio(v.d1), format_ratio(v.d2)] for v in region.vertices()
                ],
                "corner": [format_ratio(corner.d1), format_ratio(corner.d2)],
            }
        )
    if getattr(args, "format", "json") == "csv":
        lines = ["alpha,vertex_index,d1,d2"]
        for entry in entries:
            for vi, (d1, d2) in enumerate(entry["vertices"]):
                lines.append(f"{entry['alpha']},{vi},{d1},{d2}")
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(_json_text({"entries": entries}), args.out)
    return 0


def cmd_sweep_pairs(args) -> int:
    pairs = []
    for piece in args.pairs.split(","):
        piece = piece.strip()
        if not piece:
            continue
        if ":" not in piece:
            raise _CliError("INVALID_ALPHA", f"pair {piece!r} is not alpha1:alpha2")
        left, right = piece.split(":", 1)
        pairs.append((_alpha(left, "alpha1"), _alpha(right, "alpha2")))
    if not pairs:
        raise _CliError("INVALID_ALPHA", "empty pair list")
    entries = []
    for a1, a2 in pairs:
        cfg = SystemConfig(args.M, args.N1, args.N2, a1, a2)
        corner = representative_corner(cfg)
        entries.append(
            {
                "alpha1": format_ratio(a1),
                "alpha2": format_ratio(a2),
                "corner": [format_ratio(corner.d1), format_ratio(corner.d2)],
            }
        )
    if getattr(args, "format", "json") == "csv":
        lines = ["alpha1,alpha2,d1,d2"]
        for entry in entries:
            lines.append(
                f"{entry['alpha1']},{entry['alpha2']},{entry['corner'][0]},{entry['corner'][1]}"
            )
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(_json_text({"entries": entries}), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="doflab",
        description="DoF regions and link simulation for the two-user broadcast "
        "channel with delayed imperfect-quality CSIT",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("region", help="emit the exact region (constraints + vertices)")
    _add_config_args(sub)
    _add_output_args(sub)
    sub.set_defaults(func=cmd_region)

    sub = subs.add_parser("corners", help="emit the region's vertex list")
    _add_config_args(sub)
    _add_output_args(sub, formats=("json", "csv"))
    sub.set_defaults(func=cmd_corners)

    sub = subs.add_parser(
        "compare", help="no-CSIT vs configured vs perfect-delayed regions"
    )
    _add_config_args(sub)
    _add_output_args(sub)
    sub.set_defaults(func=cmd_compare)

    sub = subs.add_parser("plan", help="plan a schedule for a time-sharing weight")
    _add_config_args(sub)
    sub.add_argument("--weight", default="1/2", help="time share of user 1 in [0,1]")
    sub.add_argument(
        "--at-corner",
        action="store_true",
        help="use the weight that lands on the region's off-axis corner",
    )
    _add_output_args(sub)
    sub.set_defaults(func=cmd_plan)

    sub = subs.add_parser("simulate", help="Monte Carlo rank / rate simulation of a plan")
    _add_config_args(sub)
    sub.add_argument("--weight", default="1/2")
    sub.add_argument("--at-corner", action="store_true")
    sub.add_argument("--fidelity", choices=("rank", "rate", "both"), default="both")
    sub.add_argument("--snr-min", type=float, default=30.0)
    sub.add_argument("--snr-max", type=float, default=60.0)
    sub.add_argument("--snr-step", type=float, default=5.0)
    sub.add_argument("--trials", type=int, default=200)
    sub.add_argument("--noise-variance", type=float, default=1.0)
    _add_seed_arg(sub)
    _add_output_args(sub, formats=("json", "csv"))
    sub.set_defaults(func=cmd_simulate)

    sub = subs.add_parser(
        "sweep-alpha", help="regions and corners for a list of symmetric qualities"
    )
    _add_config_args(sub, with_alphas=False)
    sub.add_argument("--alphas", default="0,1/4,1/2,3/4,1", help="comma list of qualities")
    _add_output_args(sub, formats=("json", "csv"))
    sub.set_defaults(func=cmd_sweep_alpha)

    sub = subs.add_parser(
        "sweep-pairs", help="corner points for a list of (alpha1, alpha2) pairs"
    )
    _add_config_args(sub, with_alphas=False)
    sub.add_argument(
        "--pairs",
        default="1:0,1:1/4,1:1/2,1:3/4,1:1",
        help="comma list of alpha1:alpha2 pairs",
    )
    _add_output_args(sub, formats=("json", "csv"))
    sub.set_defaults(func=cmd_sweep_pairs)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"E:{exc.code}:{exc}", file=sys.stderr)
        return 3
    except DoflabError as exc:
        code = _ERROR_CODES.get(type(exc), "DOMAIN_ERROR")
        print(f"E:{code}:{exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"E:INVALID_CONFIG:{exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
