"""Command-line entry point: ``vqsl sweep | nonmarkov | state-info``.

Exit codes: 0 success, 1 invalid input (bad flags, unreadable or invalid
configuration, out-of-range parameters), 2 computational failure.
"""
import argparse
import sys
from pathlib import Path

from .. import metrics, qmat, states, vchannel
from ..exceptions import (
    EmptyInput, IoError, ParamOutOfRange, ParseError, ValidationError, VQSLError,
)
from .config import STATE_FAMILIES, load_config
from .output import fmt, render_svg, write_csv
from .runner import default_configs, run_sweep

EXIT_OK, EXIT_INVALID, EXIT_FAILED = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _build_parser():
    parser = _Parser(prog="vqsl", description="QSL time and non-Markovianity of V-type atom pairs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sw = sub.add_parser("sweep", help="run a parameter sweep from a config file")
    src = sw.add_mutually_exclusive_group(required=True)
    src.add_argument("config", nargs="?", help="flat key = value sweep configuration")
    src.add_argument("--defaults", metavar="DIR", help="run the built-in reference sweeps into DIR")
    sw.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
    sw.add_argument("--svg", action="store_true", help="also draw charts for --defaults")

    nm = sub.add_parser("nonmarkov", help="BLP non-Markovianity of the single-atom channel")
    nm.add_argument("--gamma", type=float, required=True)
    nm.add_argument("--lambda", dest="lam", type=float, required=True)
    nm.add_argument("--theta", type=float, required=True)
    nm.add_argument("--t-max", type=float, default=None)
    nm.add_argument("--dt", type=float, default=5e-3)
    nm.add_argument("--seed", type=int, default=1234)

    si = sub.add_parser("state-info", help="negativity, purity and region of an initial state")
    si.add_argument("--family", required=True, choices=STATE_FAMILIES)
    si.add_argument("--param", type=float, required=True)
    return parser


def _run_config(cfg, workers, out):
    rows = run_sweep(cfg, workers=workers)
    write_csv(rows, cfg.output_path)
    print(f"wrote {len(rows)} rows to {cfg.output_path}", file=out)
    if cfg.emit_svg:
        svg_path = str(Path(cfg.output_path).with_suffix(".svg"))
        render_svg(rows, svg_path)
        print(f"wrote {svg_path}", file=out)


def _cmd_sweep(args, out):
    if args.workers < 1:
        raise ValidationError("workers", "must be at least 1")
    if args.defaults:
        for cfg in default_configs(args.defaults, emit_svg=args.svg):
            _run_config(cfg, args.workers, out)
    else:
        _run_config(load_config(args.config), args.workers, out)


def _cmd_nonmarkov(args, out):
    p = vchannel.ChannelParams.equal_rates(args.gamma, args.theta, args.lam)
    pairs = metrics.candidate_pairs(seed=args.seed)
    res = metrics.blp_measure(p, t_max=args.t_max, dt=args.dt, pairs=pairs)
    print(f"n_measure = {fmt(res.n_measure)}", file=out)
    desc = ", ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}" for k, v in res.pair_description.items())
    print(f"pair = {desc}", file=out)
    print(f"grid_step = {fmt(res.grid_step)}", file=out)
    print(f"t_max = {fmt(res.t_max)}", file=out)


def _cmd_state_info(args, out):
    region = states.classify_region(args.family, args.param)
    rho = states.family_state(args.family, args.param)
    print(f"family = {args.family}", file=out)
    print(f"param = {fmt(args.param)}", file=out)
    print(f"negativity = {fmt(states.negativity(rho))}", file=out)
    print(f"purity = {fmt(qmat.purity(rho))}", file=out)
    print(f"region = {region.label.value}", file=out)


_COMMANDS = {"sweep": _cmd_sweep, "nonmarkov": _cmd_nonmarkov, "state-info": _cmd_state_info}


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INVALID
    try:
        _COMMANDS[args.command](args, out)
    except (ParseError, ValidationError, ParamOutOfRange, EmptyInput) as exc:
        print(f"vqsl: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except IoError as exc:
        print(f"vqsl: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (VQSLError, ArithmeticError, ValueError) as exc:
        print(f"vqsl: computation failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
