"""Command-line front end.

Subcommands: channel-apply, eb-report, capacity, rho12, probe.
Exit codes: 0 success, 2 input or schema error, 3 numerical invariant
violation. Output files are byte-deterministic for identical configs:
fixed-order reductions, canonical number formatting, no timestamps.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import capacity as cap
from . import channels as ch
from . import jsonio
from . import rotation as rot
from .errors import InvariantViolationError, SchemaError, WindowMismatchError
from .hilbert import StateOperator, min_eigenvalue, tensor, trace_norm_distance

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_INVARIANT = 3


@dataclass
class RunConfig:
    command: str
    half_widths: list
    nodes: int | None = None
    phi: str | None = None
    phi2: str | None = None
    sigma: str = "mixed"
    base: str = "e"
    out: str | None = None
    grid: list = field(default_factory=list)
    tol: float = 1e-9
    state_path: str | None = None
    channel_path: str | None = None
    method: str = "both"
    n_sweep: list = field(default_factory=list)
    candidates: list = field(default_factory=list)
    probe: bool = False
    max_iter: int = 10000


def _parse_int_list(text, flag):
    try:
        values = [int(part) for part in str(text).split(",") if part.strip() != ""]
    except ValueError:
        raise SchemaError(f"{flag} expects a comma-separated integer list, got {text!r}") from None
    if not values:
        raise SchemaError(f"{flag} received an empty list")
    return values


def _parse_candidates(text):
    pairs = []
    for chunk in str(text).split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = [p.strip() for p in chunk.split(",")]
        if len(parts) != 2:
            raise SchemaError(f"candidate {chunk!r} must be 'alpha_profile,beta_profile'")
        pairs.append((parts[0], parts[1]))
    if not pairs:
        raise SchemaError("--candidates received an empty list")
    return pairs


def _resolve_phi(spec, half_width):
    """Profile name, or a path to a pure-vector JSON file."""
    if spec is None:
        raise SchemaError("--phi is required for this command")
    if os.path.exists(spec) or spec.endswith(".json"):
        psi = jsonio.pure_vector_from_json(jsonio.read_json(spec), context=spec)
        if psi.window.k_min != -psi.window.k_max:
            raise SchemaError(f"{spec}: fiducial vector needs a symmetric window")
        return psi
    return rot.phi_profile(spec, half_width)


def _resolve_sigma(spec, window):
    if spec == "mixed":
        return StateOperator.maximally_mixed(window)
    return jsonio.state_from_json(jsonio.read_json(spec), context=spec)


def _check_config(config):
    for half in config.half_widths:
        if half < 1:
            raise SchemaError(f"--k values must be >= 1, got {half}")
    if config.nodes is not None:
        for half in config.half_widths:
            if config.nodes < 4 * half + 1:
                raise SchemaError(
                    f"--nodes {config.nodes} below the exactness floor {4 * half + 1} for K={half}")


def _emit(text, out_path):
    if out_path is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        jsonio.write_text(out_path, text)


def _sibling_path(out_path, suffix):
    stem, _ = os.path.splitext(out_path)
    return f"{stem}.{suffix}"


def cmd_channel_apply(config):
    half = config.half_widths[0]
    phi = _resolve_phi(config.phi, half)
    channel = rot.RotationChannel(phi, config.nodes)
    if config.state_path is None:
        raise SchemaError("channel-apply needs --state <file>")
    rho = jsonio.state_from_json(jsonio.read_json(config.state_path), context=config.state_path)
    if rho.window != channel.window:
        raise WindowMismatchError(
            f"input state window {rho.window} differs from the channel window {channel.window}")
    closed = rot.apply_closed_form(channel, rho) if config.method in ("both", "closed-form") else None
    quad = rot.apply_quadrature(channel, rho) if config.method in ("both", "quadrature") else None
    result = closed if closed is not None else quad
    metadata = {
        "trace": float(result.trace().real),
        "min_eigenvalue": min_eigenvalue(result.entries),
        "method": "closed_form" if closed is not None else "quadrature",
    }
    if closed is not None and quad is not None:
        metadata["agreement_residual"] = float(np.abs(closed.entries - quad.entries).max())
    _emit(jsonio.dumps(jsonio.operator_to_json(result, extra={"metadata": metadata})), config.out)
    return EXIT_OK


def cmd_eb_report(config):
    if config.channel_path is not None:
        raw = jsonio.read_json(config.channel_path)
        if isinstance(raw, dict) and "blocks" in raw:
            channel = jsonio.channel_from_json(raw, context=config.channel_path)
            form = None
        elif isinstance(raw, dict) and "atoms" in raw:
            form = jsonio.holevo_from_json(raw, context=config.channel_path)
            channel = ch.blocks_from_holevo(form)
        else:
            raise SchemaError(f"{config.channel_path}: expected 'blocks' or 'atoms'")
    elif config.phi is not None:
        half = config.half_widths[0]
        channel_obj = rot.RotationChannel(_resolve_phi(config.phi, half), config.nodes)
        channel = rot.channel_blocks(channel_obj)
        form = rot.holevo_form(channel_obj)
    else:
        raise SchemaError("eb-report needs --channel <file> or --phi <profile>")
    sigma = _resolve_sigma(config.sigma, channel.in_window)
    is_cp, min_eig_stacked = ch.cp_check(channel)
    ppt, min_eig_pt = ch.eb_necessary_test(channel, sigma)
    report = {
        "cp": bool(is_cp),
        "min_eig_stacked": float(min_eig_stacked),
        "ppt": bool(ppt),
        "min_eig_pt": float(min_eig_pt),
    }
    if form is not None:
        decomposition = ch.separable_choi_from_holevo(form, sigma)
        extracted = ch.eb_extract(decomposition, channel)
        report["extraction_residual"] = float(
            np.abs(ch.blocks_from_holevo(extracted).blocks - channel.blocks).max())
    _emit(jsonio.dumps(report), config.out)
    return EXIT_OK


def cmd_capacity(config):
    header = ["K", "n", "closed_form_nats", "optimizer_nats", "gap", "iterations", "converged"]
    if config.base == "2":
        header += ["closed_form_bits", "optimizer_bits"]
    grids = config.grid or [2]
    rows = []
    for half in config.half_widths:
        phi = _resolve_phi(config.phi, half)
        channel = rot.RotationChannel(phi, config.nodes)
        for n in grids:
            report = cap.ba_optimize(channel, n, max_iter=config.max_iter, tol=config.tol)
            row = [half, n, report.closed_form, report.optimizer_value, report.gap,
                   report.iterations, report.converged]
            if config.base == "2":
                row += [report.closed_form / math.log(2.0),
                        report.optimizer_value / math.log(2.0)]
            rows.append(row)
    _emit(jsonio.csv_text(header, rows), config.out)
    return EXIT_OK


def cmd_rho12(config):
    half = config.half_widths[0]
    phi1 = _resolve_phi(config.phi, half)
    phi2 = _resolve_phi(config.phi2, half) if config.phi2 else phi1
    state = rot.rho12(phi1, phi2)
    _emit(jsonio.dumps(jsonio.operator_to_json(state)), config.out)
    if config.n_sweep:
        if config.out is None:
            raise SchemaError("--n-sweep needs --out to place the CSV next to the JSON")
        product = StateOperator.from_operator(tensor(phi1.projector(), phi2.projector()))
        rows = []
        for n in config.n_sweep:
            approx = rot.rho12_n(phi1, phi2, n)
            rows.append([n, trace_norm_distance(approx, product)])
        jsonio.write_text(_sibling_path(config.out, "n_sweep.csv"),
                          jsonio.csv_text(["n", "trace_distance_to_product"], rows))
    if config.probe:
        if config.out is None:
            raise SchemaError("--probe needs --out to place the CSV next to the JSON")
        candidates = config.candidates or [("mode(0)", "mode(0)")]
        rows = rot.decomposability_probe_sweep(
            config.phi, config.phi2 or config.phi, config.half_widths, candidates)
        jsonio.write_text(_sibling_path(config.out, "probe.csv"),
                          jsonio.csv_text(["K", "candidate_id", "eps_max"],
                                          [[r.half_width, r.candidate, r.eps_max] for r in rows]))
    return EXIT_OK


def cmd_probe(config):
    candidates = config.candidates or [("mode(0)", "mode(0)")]
    rows = rot.decomposability_probe_sweep(
        config.phi, config.phi2 or config.phi, config.half_widths, candidates)
    _emit(jsonio.csv_text(["K", "candidate_id", "eps_max"],
                          [[r.half_width, r.candidate, r.eps_max] for r in rows]),
          config.out)
    return EXIT_OK


_COMMANDS = {
    "channel-apply": cmd_channel_apply,
    "eb-report": cmd_eb_report,
    "capacity": cmd_capacity,
    "rho12": cmd_rho12,
    "probe": cmd_probe,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="eblab",
        description="Desk-scale numerics for separable states and entanglement-breaking channels.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--k", default="4", help="window half-width K, or comma list for sweeps")
        p.add_argument("--nodes", type=int, default=None, help="quadrature nodes (>= 4K+1)")
        p.add_argument("--phi", default=None, help="fiducial profile name or pure-vector JSON file")
        p.add_argument("--sigma", default="mixed", help="'mixed' or a state JSON file")
        p.add_argument("--base", choices=("e", "2"), default="e", help="entropy display base")
        p.add_argument("--out", default=None, help="output path (stdout when omitted)")
        p.add_argument("--grid", default=None, help="orbit grid size(s), comma list")
        p.add_argument("--tol", type=float, default=1e-9, help="optimizer stopping tolerance")

    p_apply = sub.add_parser("channel-apply", help="apply the rotation channel to a state file")
    add_common(p_apply)
    p_apply.add_argument("--state", required=True, help="input state JSON file")
    p_apply.add_argument("--method", choices=("both", "closed-form", "quadrature"),
                         default="both")

    p_eb = sub.add_parser("eb-report", help="CP / PPT / extraction report for a channel")
    add_common(p_eb)
    p_eb.add_argument("--channel", default=None, help="channel JSON file (blocks or Holevo atoms)")

    p_cap = sub.add_parser("capacity", help="closed-form capacity vs orbit-grid optimizer")
    add_common(p_cap)
    p_cap.add_argument("--max-iter", type=int, default=10000)

    p_rho = sub.add_parser("rho12", help="orbit-averaged product state and its diagnostics")
    add_common(p_rho)
    p_rho.add_argument("--phi2", default=None, help="second-factor profile (defaults to --phi)")
    p_rho.add_argument("--n-sweep", default=None, help="comma list of subinterval counts")
    p_rho.add_argument("--probe", action="store_true", help="also emit the probe sweep CSV")
    p_rho.add_argument("--candidates", default=None,
                       help="semicolon-separated 'alpha,beta' profile pairs")

    p_probe = sub.add_parser("probe", help="pure-product domination sweep over window sizes")
    add_common(p_probe)
    p_probe.add_argument("--phi2", default=None)
    p_probe.add_argument("--candidates", default=None,
                         help="semicolon-separated 'alpha,beta' profile pairs")
    return parser


def _config_from_args(args):
    config = RunConfig(
        command=args.command,
        half_widths=_parse_int_list(args.k, "--k"),
        nodes=args.nodes,
        phi=args.phi,
        sigma=args.sigma,
        base=args.base,
        out=args.out,
        tol=args.tol,
    )
    if args.grid is not None:
        config.grid = _parse_int_list(args.grid, "--grid")
    config.phi2 = getattr(args, "phi2", None)
    config.state_path = getattr(args, "state", None)
    config.channel_path = getattr(args, "channel", None)
    config.method = getattr(args, "method", "both")
    config.max_iter = getattr(args, "max_iter", 10000)
    config.probe = getattr(args, "probe", False)
    if getattr(args, "n_sweep", None):
        config.n_sweep = _parse_int_list(args.n_sweep, "--n-sweep")
    if getattr(args, "candidates", None):
        config.candidates = _parse_candidates(args.candidates)
    return config


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
        _check_config(config)
        return _COMMANDS[config.command](config)
    except (SchemaError, WindowMismatchError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_SCHEMA
    except InvariantViolationError as err:
        print(f"invariant violation: {err}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
