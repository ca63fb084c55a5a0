"""Command-line interface.

Subcommands: list-densities, coeffs, recover, tail-energy, bounds, study.
Exit codes: 0 success, 1 validation error, 2 numerical failure.
Every subcommand taking --out prints the identical content to stdout when
--out is omitted.  COSADMIT_QUAD_TOL overrides the default quadrature
target; COSADMIT_BACKEND selects the kernel backend.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .admissibility import bound_report, bound_report_d, brute_force_B, brute_force_Bd
from .cos_engine import build_expansion, evaluate_grid, expansion_to_csv
from .densities import ProductDensitySpec, catalog, parse_density
from .errors import AccuracyError, CosAdmitError, DomainError, OverflowRangeError
from .study import StudyConfig, run_study, write_report

__all__ = ["main"]


class _CliParser(argparse.ArgumentParser):
    """argparse exits with code 2 on bad flags; the CLI contract wants 1."""

    def error(self, message):
        raise DomainError(message)


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        os.makedirs(os.path.dirname(os.path.abspath(out_path)), exist_ok=True)
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _cmd_list_densities(args) -> int:
    rows = [(f.label, f.p_max, f.tail_exponent, f.sup_bound) for f in catalog()]
    width = max(len(r[0]) for r in rows)
    print(f"{'density':<{width}}  {'p_max':>8}  {'tail_exp':>8}  {'sup_bound':>12}")
    for label, p_max, beta, M in rows:
        pm = f"{p_max:g}" if p_max is not None else "inf"
        be = f"{beta:g}" if beta is not None else "-"
        print(f"{label:<{width}}  {pm:>8}  {be:>8}  {M:>12.10f}")
    return 0


def _cmd_coeffs(args) -> int:
    f = parse_density(args.density)
    e = build_expansion(f, args.L, args.N)
    _emit(expansion_to_csv(e), args.out)
    return 0


def _cmd_recover(args) -> int:
    f = parse_density(args.density)
    e = build_expansion(f, args.L, args.N)
    xs = np.linspace(-args.L, args.L, args.grid)
    approx = evaluate_grid(e, xs)
    exact = f.pdf(xs)
    lines = ["x,f_cos,f_exact,abs_error"]
    for x, a, t in zip(xs, approx, exact):
        lines.append(f"{x:.17g},{a:.17g},{t:.17g},{abs(a - t):.17g}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_tail_energy(args) -> int:
    f = parse_density(args.density)
    res = brute_force_B(f, args.L, args.kmax)
    _emit(res.to_json() + "\n", args.out)
    return 0


def _cmd_bounds(args) -> int:
    if args.dim == 1:
        rep = bound_report(parse_density(args.density), args.L, args.p)
    else:
        fd = ProductDensitySpec(tuple(parse_density(args.density)
                                      for _ in range(args.dim)))
        rep = bound_report_d(fd, args.L, args.p)
    _emit(rep.to_json() + "\n", args.out)
    return 0


def _cmd_tail_energy_d(args) -> int:
    fd = ProductDensitySpec(tuple(parse_density(args.density)
                                  for _ in range(args.dim)))
    res = brute_force_Bd(fd, [args.L] * args.dim, args.kmax)
    _emit(res.to_json() + "\n", args.out)
    return 0


def _cmd_study(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainError(f"config is not valid JSON: {exc}") from exc
    if args.output_path is not None:
        data["output_path"] = args.output_path
    if args.parallelism is not None:
        data["parallelism"] = args.parallelism
    elif "parallelism" not in data:
        data["parallelism"] = os.cpu_count() or 1
    cfg = StudyConfig.from_dict(data).validated()
    report = run_study(cfg)
    if cfg.output_path:
        json_path, csv_path = write_report(report, cfg.output_path)
        print(f"report written: {json_path} and {csv_path}")
    else:
        sys.stdout.write(report.to_json() + "\n")
    n_fail = sum(1 for fl in report.flags if not fl["passed"])
    n_err = sum(1 for c in report.cells if not c.get("ok", False))
    print(f"cells: {len(report.cells)} ({n_err} failed), "
          f"flags: {len(report.flags)} ({n_fail} failed), "
          f"wall: {report.timings['total_seconds']:.2f}s", file=sys.stderr)
    return 0


def _build_parser() -> _CliParser:
    parser = _CliParser(prog="cosadmit",
                        description="Cosine-series density recovery and "
                                    "tail-energy admissibility checks")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list-densities", help="show the density catalog")

    pc = sub.add_parser("coeffs", help="export expansion coefficients as CSV")
    pc.add_argument("--density", required=True)
    pc.add_argument("--L", type=float, required=True)
    pc.add_argument("--N", type=int, required=True)
    pc.add_argument("--out", default=None)

    pr = sub.add_parser("recover", help="evaluate the recovered density on a grid")
    pr.add_argument("--density", required=True)
    pr.add_argument("--L", type=float, required=True)
    pr.add_argument("--N", type=int, required=True)
    pr.add_argument("--grid", type=int, default=401)
    pr.add_argument("--out", default=None)

    pt = sub.add_parser("tail-energy", help="brute-force tail cosine energy B(L)")
    pt.add_argument("--density", required=True)
    pt.add_argument("--L", type=float, required=True)
    pt.add_argument("--kmax", type=int, default=2048)
    pt.add_argument("--dim", type=int, default=1, choices=(1, 2, 3))
    pt.add_argument("--out", default=None)

    pb = sub.add_parser("bounds", help="moment-based admissibility bounds")
    pb.add_argument("--density", required=True)
    pb.add_argument("--L", type=float, required=True)
    pb.add_argument("--p", type=float, required=True)
    pb.add_argument("--dim", type=int, default=1, choices=(1, 2, 3))
    pb.add_argument("--out", default=None)

    ps = sub.add_parser("study", help="run a sweep from a JSON config")
    ps.add_argument("--config", required=True)
    ps.add_argument("--output-path", default=None)
    ps.add_argument("--parallelism", type=int, default=None)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "list-densities":
            return _cmd_list_densities(args)
        if args.command == "coeffs":
            return _cmd_coeffs(args)
        if args.command == "recover":
            return _cmd_recover(args)
        if args.command == "tail-energy":
            if args.dim == 1:
                return _cmd_tail_energy(args)
            return _cmd_tail_energy_d(args)
        if args.command == "bounds":
            return _cmd_bounds(args)
        if args.command == "study":
            return _cmd_study(args)
        raise DomainError(f"unknown command {args.command!r}")
    except (AccuracyError, OverflowRangeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (CosAdmitError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
