"""Command-line entry point: ``bsverify {price,curve,surface,verify,hedge}``.

Exit codes: 0 success, 1 domain error or failed check, 2 usage error.
CSV output is comma separated with a header row, LF line endings and floats
written with 17 significant digits.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

import numpy as np

from . import closed_form, fd, hedging, transforms, verify
from .core import BSError, MarketParams, OptionKind, OptionSpec, Quote, payoff

PRICE_HEADER = ["method", "kind", "spot", "strike", "rate", "vol", "tenor",
                "value", "d_plus", "d_minus", "delta"]
CURVE_HEADER = ["spot", "value", "payoff"]
SURFACE_HEADER = ["tenor", "spot", "value"]
VERIFY_HEADER = ["suite", "check", "value", "threshold", "passed", "detail"]
HEDGE_HEADER = ["record", "steps", "path", "value"]


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _emit_text(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def _positive_int(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return n


def _add_option_flags(p: argparse.ArgumentParser, *, spot=100.0, rate=0.5, vol=0.3,
                      tenor=1.0) -> None:
    p.add_argument("--kind", choices=[k.value for k in OptionKind], default="call")
    p.add_argument("--spot", type=float, default=spot)
    p.add_argument("--strike", type=float, default=100.0)
    p.add_argument("--rate", type=float, default=rate, help="per year, decimal (0.5 = 50%%)")
    p.add_argument("--vol", type=float, default=vol, help="per sqrt-year, decimal")
    p.add_argument("--tenor", type=float, default=tenor, help="time to expiry T - t in years")


def _add_output_flags(p: argparse.ArgumentParser, formats=("csv",)) -> None:
    p.add_argument("--format", choices=formats, default="csv")
    p.add_argument("--out", default=None, help="destination file; standard output if omitted")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bsverify", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("price", help="price one option")
    _add_option_flags(p)
    p.add_argument("--method", choices=["closed", "heat", "fd"], default="closed")
    _add_output_flags(p)

    for name, help_text in (("curve", "value against spot at fixed tenor"),
                            ("surface", "value over spot and tenor")):
        p = sub.add_parser(name, help=help_text)
        _add_option_flags(p)
        p.add_argument("--samples", type=int, default=201, help="spot samples")
        p.add_argument("--spot-min", type=float, default=0.0)
        p.add_argument("--spot-max", type=float, default=None, help="default 2 x strike")
        if name == "surface":
            p.add_argument("--tenor-samples", type=int, default=21)
        _add_output_flags(p, formats=("csv", "svg"))

    p = sub.add_parser("verify", help="run cross-check suites")
    p.add_argument("--suite", action="append", choices=["all", *verify.SUITES],
                   help="repeatable; default runs every suite")
    p.add_argument("--samples", type=_positive_int, default=None,
                   help="random inputs for the parity and closed-form dominance sweeps")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--paths", type=_positive_int, default=None, help="hedging ensemble size")
    p.add_argument("--vol-pair", type=float, nargs=2, metavar=("SIGMA1", "SIGMA2"),
                   default=(0.4, 0.2), help="volatilities for the dominance contract check")
    _add_output_flags(p)

    p = sub.add_parser("hedge", help="discrete delta-hedging experiment")
    _add_option_flags(p, rate=0.05, vol=0.2)
    p.add_argument("--mu", type=float, default=0.1, help="real-world drift per year")
    p.add_argument("--steps", type=_positive_int, nargs="+", default=[256])
    p.add_argument("--paths", type=_positive_int, default=10_000)
    p.add_argument("--seed", type=int, default=42)
    _add_output_flags(p)
    return parser


def _price_row(args) -> list:
    params = MarketParams(args.rate, args.vol)
    spec = OptionSpec(args.kind, args.strike, args.tenor)
    quote = Quote(args.spot, 0.0)
    exact = closed_form.price(quote, spec, params)
    value, dlt = exact.value, exact.delta
    live = args.spot > 0 and args.tenor > 0
    if live and args.method == "heat":
        value = transforms.price_via_heat_kernel(quote, spec, params)
        bump = 1e-4 * args.spot
        up = transforms.price_via_heat_kernel(Quote(args.spot + bump), spec, params)
        down = transforms.price_via_heat_kernel(Quote(args.spot - bump), spec, params)
        dlt = (up - down) / (2 * bump)
    elif live and args.method == "fd":
        surface = fd.solve(spec, params, fd.GridSpec.for_option(spec, args.spot))
        value = float(surface.at(args.spot))
        dlt = float(surface.delta(args.spot))
    return [args.method, spec.kind.value, args.spot, args.strike, args.rate, args.vol,
            args.tenor, value, exact.d_plus, exact.d_minus, dlt]


def cmd_price(args) -> int:
    _emit_text(_csv_text(PRICE_HEADER, [_price_row(args)]), args.out)
    return 0


def _spot_axis(args, parser) -> np.ndarray:
    spot_max = 2.0 * args.strike if args.spot_max is None else args.spot_max
    if args.samples < 1 or not spot_max > args.spot_min or args.spot_min < 0:
        parser.error("need --samples >= 1 and 0 <= --spot-min < --spot-max")
    return np.linspace(args.spot_min, spot_max, args.samples)


def _sidecar(out: str) -> Path:
    return Path(out).with_suffix(".csv")


def cmd_curve(args, parser) -> int:
    from . import plotting

    spots = _spot_axis(args, parser)
    params = MarketParams(args.rate, args.vol)
    if args.tenor < 0:
        parser.error("--tenor must be non-negative")
    values = closed_form.value_array(args.kind, spots, args.tenor, args.strike, params)
    payoffs = payoff(args.kind, spots, args.strike)
    text = _csv_text(CURVE_HEADER, zip(spots, values, payoffs))
    if args.format == "csv":
        _emit_text(text, args.out)
        return 0
    target = sys.stdout if args.out in (None, "-") else args.out
    plotting.curve_figure(spots, values, payoffs, kind=args.kind, strike=args.strike,
                          tenor=args.tenor, target=target)
    if target is not sys.stdout:
        _emit_text(text, str(_sidecar(args.out)))
    return 0


def cmd_surface(args, parser) -> int:
    from . import plotting

    spots = _spot_axis(args, parser)
    if args.tenor_samples < 2 or not args.tenor > 0:
        parser.error("need --tenor-samples >= 2 and --tenor > 0")
    params = MarketParams(args.rate, args.vol)
    tenors = np.linspace(0.0, args.tenor, args.tenor_samples)
    values = closed_form.value_array(args.kind, spots[None, :], tenors[:, None],
                                     args.strike, params)
    rows = ((tau, s, v) for tau, row in zip(tenors, values) for s, v in zip(spots, row))
    text = _csv_text(SURFACE_HEADER, rows)
    if args.format == "csv":
        _emit_text(text, args.out)
        return 0
    target = sys.stdout if args.out in (None, "-") else args.out
    plotting.surface_figure(spots, tenors, values, payoff(args.kind, spots, args.strike),
                            kind=args.kind, target=target)
    if target is not sys.stdout:
        _emit_text(text, str(_sidecar(args.out)))
    return 0


def cmd_verify(args) -> int:
    checks = verify.run(args.suite, samples=args.samples, seed=args.seed,
                        vol_pair=tuple(args.vol_pair), paths=args.paths)
    rows = [(c.suite, c.name, c.value, c.threshold, c.passed, c.detail) for c in checks]
    _emit_text(_csv_text(VERIFY_HEADER, rows), args.out)
    failed = [f"{c.suite}/{c.name}" for c in checks if not c.passed]
    if failed:
        print("failed checks: " + ", ".join(failed), file=sys.stderr)
        return 1
    return 0


def cmd_hedge(args) -> int:
    params = MarketParams(args.rate, args.vol)
    spec = OptionSpec(args.kind, args.strike, args.tenor)
    rows = []
    previous = None
    for steps in args.steps:
        cfg = hedging.PathConfig(args.spot, args.mu, params, steps, args.tenor, args.seed)
        report = hedging.delta_hedge(cfg, spec, args.paths)
        rows += [("path", steps, p, e) for p, e in enumerate(report.terminal_error)]
        rows += [
            ("premium", steps, "", report.premium),
            ("mean", steps, "", report.mean_error),
            ("std_error", steps, "", report.std_error),
            ("rms", steps, "", report.rms_error),
        ]
        if previous is not None:
            rows.append(("rms_ratio", steps, "", previous / report.rms_error))
        previous = report.rms_error
    _emit_text(_csv_text(HEDGE_HEADER, rows), args.out)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "price":
            return cmd_price(args)
        if args.command == "curve":
            return cmd_curve(args, parser)
        if args.command == "surface":
            return cmd_surface(args, parser)
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_hedge(args)
    except BSError as exc:
        print(f"bsverify: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
