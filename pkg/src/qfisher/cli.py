"""Command-line front end.

Subcommands: state-fisher, channel-fisher, bound, gadc, multi-value,
sdp-export, verify.  All numeric output goes through one significant-digit
formatter so identical inputs produce identical bytes.  Exit codes: 0 ok,
1 verification failure, 2 argument errors.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, gadc, verify as verify_mod
from .bounds import BOUND_KINDS, crb
from .families import ChannelFamily, StateFamily, choi_from_kraus
from .fisher_channel import (
    CONVENTIONS,
    OptimizerConfig,
    rld_fisher_channel,
    rld_value_channel,
    sld_fisher_channel,
)
from .fisher_state import FisherValue, rld_fisher, sld_fisher
from .sdp import BUILD_KINDS, build, export_sdpa, problem_filename

STATE_FAMILIES = ("diag", "pure-rotation")


def format_sig(value: float, digits: int) -> str:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.{digits}g}"


def format_fisher(fv: FisherValue, digits: int) -> str:
    if not fv.finite:
        return f"inf support_residual={format_sig(fv.support_residual, digits)}"
    return format_sig(fv.value, digits)


def _state_family(name: str) -> StateFamily:
    if name == "diag":
        return StateFamily.from_scalar(
            2,
            lambda t: np.diag([t, 1 - t]).astype(complex),
            deriv=lambda t: np.diag([1.0, -1.0]).astype(complex),
            bounds=(np.array([0.0]), np.array([1.0])),
        )
    if name == "pure-rotation":
        def eval_(t: float) -> np.ndarray:
            v = np.array([math.cos(t), math.sin(t)], dtype=complex)
            return np.outer(v, v.conj())

        return StateFamily.from_scalar(2, eval_)
    raise SystemExit(f"unknown state family {name!r}; choose from {STATE_FAMILIES}")


def _read_kraus_file(path: str) -> list[np.ndarray]:
    """Kraus list: complex matrices as `re,im` pairs, row-major, blank-line separated."""
    blocks: list[list[list[complex]]] = [[]]
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line:
            if blocks[-1]:
                blocks.append([])
            continue
        if line.startswith("#"):
            continue
        row = []
        for token in line.replace(";", " ").split():
            re_s, im_s = token.split(",")
            row.append(complex(float(re_s), float(im_s)))
        blocks[-1].append(row)
    mats = [np.array(b, dtype=complex) for b in blocks if b]
    if not mats:
        raise SystemExit(f"no Kraus operators found in {path}")
    return mats


def _gadc_params(args) -> gadc.GadcParams:
    return gadc.GadcParams(args.gamma, args.noise, getattr(args, "phi", None))


def _channel_from_args(args) -> tuple[ChannelFamily, float]:
    """Resolve (family, theta0) from --channel gadc or a Kraus file triple."""
    if args.kraus:
        center = choi_from_kraus(_read_kraus_file(args.kraus))
        d2 = center.shape[0]
        d = int(round(math.sqrt(d2)))
        if args.kraus_plus and args.kraus_minus:
            plus = choi_from_kraus(_read_kraus_file(args.kraus_plus))
            minus = choi_from_kraus(_read_kraus_file(args.kraus_minus))
            h = args.fd_step
            slope = (plus - minus) / (2 * h)

            def choi(t: float) -> np.ndarray:
                return center + t * slope

            chan = ChannelFamily.from_scalar((d, d), choi)
        else:
            chan = ChannelFamily.constant(center, (d, d))
        return chan, 0.0
    if args.channel != "gadc":
        raise SystemExit(f"unknown channel {args.channel!r}; use 'gadc' or --kraus FILE")
    params = _gadc_params(args)
    theta0 = {"loss": params.gamma, "noise": params.noise, "phase": params.phi or 0.0}[args.target]
    return gadc.gadc_channel(params, (args.target,)), theta0


def _parse_weight(text: str, size: int = 2) -> np.ndarray:
    entries = [float(tok) for tok in text.replace(";", ",").split(",") if tok.strip()]
    if len(entries) != size * size:
        raise SystemExit(f"weight needs {size * size} row-major entries, got {len(entries)}")
    return np.array(entries, dtype=float).reshape(size, size)


def _parse_grid(text: str) -> np.ndarray:
    try:
        start_s, stop_s, count_s = text.split(":")
        start, stop, count = float(start_s), float(stop_s), int(count_s)
    except ValueError as exc:
        raise SystemExit(f"grid must be start:stop:count, got {text!r}") from exc
    if count < 1:
        raise SystemExit("grid count must be positive")
    return np.linspace(start, stop, count)


def _add_gadc_point_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gamma", type=float, default=0.5, help="loss parameter in (0,1)")
    p.add_argument("--noise", type=float, default=0.2, help="noise parameter in (0,1)")
    p.add_argument("--phi", type=float, default=None, help="optional phase in radians")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qfisher",
        description="Fisher information of quantum states and channels, "
        "Cramer-Rao bounds, damping-channel reproduction, and SDP export.",
    )
    parser.add_argument("--version", action="version", version=f"qfisher {__version__}")
    parser.add_argument("--precision", type=int, default=12, help="significant digits in output")
    sub = parser.add_subparsers(dest="command", required=True)

    p_state = sub.add_parser("state-fisher", help="Fisher information of a built-in state family")
    p_state.add_argument("--family", choices=STATE_FAMILIES, default="diag")
    p_state.add_argument("--theta", type=float, required=True)
    p_state.add_argument("--kind", choices=("sld", "rld"), default="sld")

    p_chan = sub.add_parser("channel-fisher", help="Fisher information of a channel family")
    p_chan.add_argument("--channel", default="gadc")
    p_chan.add_argument("--target", choices=gadc.TARGETS, default="loss")
    _add_gadc_point_args(p_chan)
    p_chan.add_argument("--kind", choices=("sld", "rld"), default="rld")
    p_chan.add_argument("--convention", choices=CONVENTIONS, default="output")
    p_chan.add_argument("--kraus", help="Kraus file for a custom channel")
    p_chan.add_argument("--kraus-plus", help="Kraus file at theta + fd-step")
    p_chan.add_argument("--kraus-minus", help="Kraus file at theta - fd-step")
    p_chan.add_argument("--fd-step", type=float, default=1e-5)
    p_chan.add_argument("--seed", type=int, default=0)
    p_chan.add_argument("--restarts", type=int, default=4)
    p_chan.add_argument("--iters", type=int, default=120)

    p_bound = sub.add_parser("bound", help="Cramer-Rao bound from a Fisher value")
    p_bound.add_argument("--kind", choices=BOUND_KINDS, required=True)
    p_bound.add_argument("--fisher", type=float, required=True, help="Fisher value (inf allowed)")
    p_bound.add_argument("--n", type=int, default=1)

    p_gadc = sub.add_parser("gadc", help="damping-channel closed forms and bound curves")
    p_gadc.add_argument("--target", choices=gadc.TARGETS + ("two-parameter",), default="loss")
    _add_gadc_point_args(p_gadc)
    p_gadc.add_argument("--convention", choices=CONVENTIONS, default="reference")
    p_gadc.add_argument("--grid", help="sweep grid start:stop:count (curve mode)")
    p_gadc.add_argument("--sweep", choices=gadc.TARGETS, default=None, help="swept parameter")
    p_gadc.add_argument("--n", type=int, default=1)
    p_gadc.add_argument("--weight", help="row-major weight entries for two-parameter curves")
    p_gadc.add_argument("--out", help="CSV output path (default stdout)")
    plot = p_gadc.add_mutually_exclusive_group()
    plot.add_argument("--plot", dest="plot", action="store_true", default=None)
    plot.add_argument("--no-plot", dest="plot", action="store_false")

    p_multi = sub.add_parser("multi-value", help="multiparameter RLD value of the damping channel")
    _add_gadc_point_args(p_multi)
    p_multi.add_argument("--weight", required=True, help="row-major weight entries")
    p_multi.add_argument("--convention", choices=CONVENTIONS, default="output")

    p_sdp = sub.add_parser("sdp-export", help="build and export a program as SDPA sparse text")
    p_sdp.add_argument("--kind", choices=BUILD_KINDS, required=True)
    p_sdp.add_argument("--family", choices=STATE_FAMILIES, default="diag")
    p_sdp.add_argument("--theta", type=float, default=0.25)
    _add_gadc_point_args(p_sdp)
    p_sdp.add_argument("--target", choices=gadc.TARGETS, default="loss")
    p_sdp.add_argument("--weight", default="0.25,0.25,0.25,0.75")
    p_sdp.add_argument("--convention", choices=CONVENTIONS, default="output")
    p_sdp.add_argument("--probe-p", type=float, default=0.5, help="probe weight for rld_value_state")
    p_sdp.add_argument("--outdir", default=".")

    p_verify = sub.add_parser("verify", help="run the property-verification suites")
    p_verify.add_argument("--seed", type=int, default=7)
    p_verify.add_argument("--suite", action="append", help="run only the named suites")
    return parser


def _cmd_state_fisher(args) -> int:
    family = _state_family(args.family)
    fisher = sld_fisher if args.kind == "sld" else rld_fisher
    print(format_fisher(fisher(family, args.theta), args.precision))
    return 0


def _cmd_channel_fisher(args) -> int:
    chan, theta0 = _channel_from_args(args)
    if args.kind == "rld":
        fv = rld_fisher_channel(chan, theta0, conv=args.convention)
        print(format_fisher(fv, args.precision))
    else:
        cfg = OptimizerConfig(restarts=args.restarts, iterations=args.iters, seed=args.seed)
        result = sld_fisher_channel(chan, theta0, cfg)
        print(format_sig(result.value, args.precision))
    return 0


def _cmd_bound(args) -> int:
    report = crb(args.fisher, args.n, args.kind)
    if report.vacuous:
        print("0 vacuous (infinite Fisher, support condition fails)")
    else:
        print(format_sig(report.bound, args.precision))
    return 0


def _cmd_gadc(args) -> int:
    params = _gadc_params(args)
    if args.grid is None:
        if args.target == "two-parameter":
            raise SystemExit("two-parameter mode needs --grid (point mode: use multi-value)")
        chan = gadc.gadc_channel(params, (args.target,))
        theta0 = {"loss": params.gamma, "noise": params.noise, "phase": params.phi or 0.0}[
            args.target
        ]
        fv = rld_fisher_channel(chan, theta0, conv=args.convention)
        print(format_fisher(fv, args.precision))
        return 0
    grid = _parse_grid(args.grid)
    weight = _parse_weight(args.weight) if args.weight else None
    target = "two_parameter" if args.target == "two-parameter" else args.target
    config = gadc.CurveConfig(
        target=target,
        params=params,
        grid=grid,
        sweep=args.sweep,
        convention=args.convention,
        n=args.n,
        weight=weight,
    )
    rows = gadc.gadc_curve(config)
    csv_text = gadc.curve_to_csv(rows, digits=args.precision)
    if args.out:
        Path(args.out).write_text(csv_text)
        print(args.out)
        want_plot = True if args.plot is None else args.plot
        if want_plot:
            from .plotting import render_curve

            fig_path = str(Path(args.out).with_suffix(".png"))
            sweep = config.resolved_sweep()
            fixed = f"gamma={params.gamma}, noise={params.noise}"
            render_curve(rows, fig_path, target, sweep, fixed)
            print(fig_path)
    else:
        sys.stdout.write(csv_text)
        if args.plot:
            raise SystemExit("--plot needs --out to name the figure file")
    return 0


def _cmd_multi_value(args) -> int:
    params = _gadc_params(args)
    chan = gadc.gadc_channel(params, ("loss", "noise"))
    w = _parse_weight(args.weight)
    fv = rld_value_channel(chan, (params.gamma, params.noise), w, conv=args.convention)
    print(format_fisher(fv, args.precision))
    return 0


def _cmd_sdp_export(args) -> int:
    if args.kind in ("sld_state", "sld_state_dual", "rld_state"):
        prob = build(args.kind, family=_state_family(args.family), theta=args.theta)
    elif args.kind == "rld_value_state":
        # two-parameter (loss, noise) output family on the Schmidt-diagonal probe
        params = _gadc_params(args)
        family = gadc.probe_output_family(params, args.probe_p)
        prob = build(
            "rld_value_state",
            family=family,
            thetas=(params.gamma, params.noise),
            w=_parse_weight(args.weight),
        )
    else:
        params = _gadc_params(args)
        if args.kind == "rld_channel":
            chan = gadc.gadc_channel(params, (args.target,))
            theta0 = {"loss": params.gamma, "noise": params.noise, "phase": params.phi or 0.0}[
                args.target
            ]
            prob = build("rld_channel", chan=chan, theta=theta0, conv=args.convention)
        else:
            chan = gadc.gadc_channel(params, ("loss", "noise"))
            prob = build(
                "rld_value_channel",
                chan=chan,
                thetas=(params.gamma, params.noise),
                w=_parse_weight(args.weight),
                conv=args.convention,
            )
    text = export_sdpa(prob)
    path = Path(args.outdir) / problem_filename(prob)
    path.write_text(text)
    print(str(path))
    return 0


def _cmd_verify(args) -> int:
    results = verify_mod.run_all(seed=args.seed, suites=args.suite)
    width = max(len(r.name) for r in results)
    failures = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{r.name:<{width}}  {status}  {r.detail}")
        failures += 0 if r.passed else 1
    print(f"{failures} of {len(results)} suites failed" if failures else f"all {len(results)} suites passed")
    return 1 if failures else 0


_COMMANDS = {
    "state-fisher": _cmd_state_fisher,
    "channel-fisher": _cmd_channel_fisher,
    "bound": _cmd_bound,
    "gadc": _cmd_gadc,
    "multi-value": _cmd_multi_value,
    "sdp-export": _cmd_sdp_export,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
