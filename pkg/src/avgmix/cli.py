"""Command-line interface: ``avgmix {amm,survey,extremal,counts,gen,converge,check}``.

Exit codes: 0 success, 2 usage or input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass

import numpy as np

from .checks import run_checks
from .errors import AvgMixError, ConvergenceError, ParseError, UnsupportedSize
from .graphs import HamiltonianKind, enumerate_graphs, parse_graph6, write_graph6
from .mixing import (average_mixing_matrix, cesaro_average, cesaro_error_bound,
                     matrix_properties)
from .spectral import spectral_decomposition
from .survey import (SurveyConfig, extremal_trace, flag_counts, rational_string, read_corpus,
                     records_to_csv, records_to_json, survey_corpus)

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3


@dataclass(frozen=True)
class CliConfig:
    hamiltonian: HamiltonianKind = HamiltonianKind.ADJACENCY
    tol_cluster: float = 1e-8
    tol_check: float = 1e-8
    format: str = "pretty"
    strict: bool = False

    def __post_init__(self):
        if not (self.tol_cluster > 0 and self.tol_check > 0):
            raise ValueError("tolerances must be positive")

    @classmethod
    def from_args(cls, args) -> "CliConfig":
        return cls(
            hamiltonian=HamiltonianKind.parse(getattr(args, "hamiltonian", "adjacency")),
            tol_cluster=getattr(args, "tol_cluster", 1e-8),
            tol_check=getattr(args, "tol_check", 1e-8),
            format=getattr(args, "format", "pretty"),
            strict=getattr(args, "strict", False),
        )


class InputError(AvgMixError):
    pass


def _read_source(arg: str):
    if arg == "-":
        return sys.stdin.read().splitlines()
    if not os.path.exists(arg):
        raise InputError(f"no such file: {arg}")
    return read_corpus(arg)


def _read_graph(arg: str):
    """A graph6 string, a file whose first non-blank line is one, or ``-`` for stdin."""
    if arg == "-" or os.path.exists(arg):
        lines = [ln.strip() for ln in _read_source(arg) if ln.strip()]
        if not lines:
            raise InputError(f"no graph found in {arg}")
        text = lines[0]
    else:
        text = arg
    return text, parse_graph6(text)


def _fmt_matrix(m: np.ndarray) -> str:
    cells = [[f"{x:.6g}" for x in row] for row in m]
    width = max(len(c) for row in cells for c in row)
    return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)


def _trace_line(t: float) -> str:
    shown, r = f"{t:.6g}", rational_string(t)
    return f"trace: {shown}" + (f"  (~ {r})" if r and r != shown else "")


# --------------------------------------------------------------------------- commands


def cmd_amm(args) -> int:
    cfg = CliConfig.from_args(args)
    text, g = _read_graph(args.graph)
    d = spectral_decomposition(g, cfg.hamiltonian, cfg.tol_cluster)
    m = average_mixing_matrix(d).matrix
    props = matrix_properties(m, cfg.tol_check)
    trace = float(np.trace(m))
    if cfg.format == "json":
        out = {"graph6": text, "n": g.n, "hamiltonian": cfg.hamiltonian.value, "matrix": m.tolist(),
               "trace": trace, "trace_rational": rational_string(trace), "properties": props.as_dict()}
        print(json.dumps(out, indent=1))
    elif cfg.format == "csv":
        for row in m:
            print(",".join(repr(float(x)) for x in row))
    else:
        print(f"graph {text}  n={g.n}  hamiltonian={cfg.hamiltonian.value}")
        print(_fmt_matrix(m))
        print(_trace_line(trace))
        for k, v in props.as_dict().items():
            print(f"{k}: {v}")
    return EXIT_OK


def _survey(args):
    cfg = CliConfig.from_args(args)
    lines = _read_source(args.file)
    issues = []
    recs = survey_corpus(lines, SurveyConfig(cfg.tol_cluster, cfg.tol_check), workers=args.jobs,
                         strict=cfg.strict, issues=issues)
    for lineno, msg in issues:
        print(f"warning: line {lineno}: {msg}", file=sys.stderr)
    return cfg, recs


def cmd_survey(args) -> int:
    cfg, recs = _survey(args)
    if cfg.format == "json":
        print(records_to_json(recs))
    else:
        sys.stdout.write(records_to_csv(recs))
    return EXIT_OK


def cmd_extremal(args) -> int:
    cfg, recs = _survey(args)
    res = extremal_trace(recs, cfg.hamiltonian, args.dir, connected_only=not args.all_graphs)
    if cfg.format == "json":
        print(json.dumps(res.to_json(), indent=1))
    else:
        r = res.value_rational
        print(f"{res.direction} {res.statistic} = {res.value!r}" + (f"  (~ {r})" if r else ""))
        for w in res.witnesses:
            print(w)
    return EXIT_OK


def cmd_counts(args) -> int:
    cfg, recs = _survey(args)
    c = flag_counts(recs)
    if cfg.format == "json":
        print(json.dumps({"graphs": len(recs), "constdiag_A": c.constdiag_A, "constdiag_L": c.constdiag_L,
                          "walk_regular": c.walk_regular}))
    else:
        print(f"graphs: {len(recs)}")
        print(f"constdiag_A: {c.constdiag_A}")
        print(f"constdiag_L: {c.constdiag_L}")
        print(f"walk_regular: {c.walk_regular}")
    return EXIT_OK


def cmd_gen(args) -> int:
    for g in enumerate_graphs(args.n):
        print(write_graph6(g))
    return EXIT_OK


def cmd_converge(args) -> int:
    cfg = CliConfig.from_args(args)
    if not args.T > 0:
        raise InputError("--T must be positive")
    text, g = _read_graph(args.graph)
    d = spectral_decomposition(g, cfg.hamiltonian, cfg.tol_cluster)
    target = average_mixing_matrix(d).matrix
    rows = []
    for T in (args.T / 100, args.T / 10, args.T):
        err = float(np.max(np.abs(cesaro_average(d, T) - target)))
        rows.append({"T": T, "error": err, "bound": cesaro_error_bound(d, T)})
    if cfg.format == "json":
        print(json.dumps({"graph6": text, "hamiltonian": cfg.hamiltonian.value, "rows": rows}, indent=1))
    else:
        print(f"graph {text}  hamiltonian={cfg.hamiltonian.value}")
        print(f"{'T':>14} {'max error':>14} {'bound':>14}")
        for r in rows:
            print(f"{r['T']:>14.6g} {r['error']:>14.6g} {r['bound']:>14.6g}")
    return EXIT_OK


def cmd_check(args) -> int:
    cfg = CliConfig.from_args(args)
    text, g = _read_graph(args.graph)
    results = run_checks(g, cfg.tol_cluster, cfg.tol_check, corrupt=args.corrupt_for_testing)
    if cfg.format == "json":
        print(json.dumps([r.__dict__ for r in results], indent=1))
    else:
        print(f"graph {text}  n={g.n}")
        for r in results:
            print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<28} residual={r.residual:.3g}  {r.detail}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERIC


# --------------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--hamiltonian", "-H", default="adjacency", choices=["adjacency", "laplacian", "A", "L"],
                        help="walk Hamiltonian (default: adjacency)")
    common.add_argument("--tol-cluster", type=float, default=1e-8)
    common.add_argument("--tol-check", type=float, default=1e-8)
    common.add_argument("--format", choices=["pretty", "csv", "json"], default="pretty")
    corpus = argparse.ArgumentParser(add_help=False)
    corpus.add_argument("file", help="newline-separated graph6 file, or - for stdin")
    corpus.add_argument("--jobs", "-j", type=int, default=1)
    corpus.add_argument("--strict", action="store_true", help="abort on the first unparseable line")

    ap = argparse.ArgumentParser(prog="avgmix", description="Average mixing matrices of continuous quantum walks.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("amm", parents=[common], help="average mixing matrix of one graph")
    p.add_argument("graph", help="graph6 string, file, or - for stdin")
    p.set_defaults(func=cmd_amm)

    p = sub.add_parser("survey", parents=[common, corpus], help="per-graph statistics (CSV or JSON)")
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("extremal", parents=[common, corpus], help="min/max trace with witnesses")
    p.add_argument("--stat", choices=["trace"], default="trace")
    p.add_argument("--dir", choices=["min", "max"], default="max")
    p.add_argument("--all-graphs", action="store_true", help="include disconnected graphs")
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("counts", parents=[common, corpus], help="constant-diagonal and walk-regular counts")
    p.set_defaults(func=cmd_counts)

    p = sub.add_parser("gen", help="all graphs on n <= 6 vertices as graph6")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("converge", parents=[common], help="finite-time averages approaching the limit")
    p.add_argument("graph")
    p.add_argument("--T", type=float, default=1e4)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("check", parents=[common], help="run the validation battery on one graph")
    p.add_argument("graph")
    p.add_argument("--corrupt-for-testing", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_check)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ParseError, UnsupportedSize, InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConvergenceError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
