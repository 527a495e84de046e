"""Command-line front end.

Every command prints (or writes to ``--output``) a JSON document
``{"config": ..., "version": ..., "report": ...}`` or a CSV table preceded by
one ``#`` line carrying the same config and version.  Exit codes: 0 success,
2 configuration error, 3 numerical-tolerance failure, 4 oracle mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from dataclasses import dataclass

from . import __version__, config
from .errors import (InvalidIndexError, OracleMismatchError, SiegelLambertError,
                     UnsupportedWeightError)
from .identity import (TransformPair, asymptotic_limit, asymptotic_sweep, hl_identity,
                       hl_rhs_partials, ik_closed_vs_quadrature, mellin_closure,
                       residue_closure, sweep_deviation_bound, verify_main_identity,
                       zagier_c0)
from .lfunc import (FE_SAMPLES, RESIDUE_OFFSETS, SKInstance, a_series, delta_tau,
                    functional_equation_deviation, residue_deviation, sk_petersson_coeffs)
from .zeta import bracket_zeros, find_zeros

EXIT_OK, EXIT_CONFIG, EXIT_TOLERANCE, EXIT_ORACLE = 0, 2, 3, 4

COMMANDS = ("zeros", "coeffs", "verify", "asymptotic", "hl", "c0", "oracles")
CSV_COMMANDS = {"zeros", "coeffs", "asymptotic", "c0", "hl", "verify"}


class ToleranceFailure(Exception):
    """A computed check missed its acceptance threshold; the report is still emitted."""


class OracleFailure(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    k: int = 10
    alpha: float = 1.0
    zero_count: int = 100
    n_terms: int | None = None
    precision_mode: str = "standard"
    output: str | None = None
    format: str = "json"
    workers: int = 1
    alphas: tuple = (0.1, 0.03, 0.01)
    ys: tuple = (0.05, 0.02, 0.01)
    tol: float = 1e-9

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["alphas"] = list(self.alphas)
        d["ys"] = list(self.ys)
        return d


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be a positive finite number: {text!r}")
    return v


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {text!r}")
    return v


def _nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {text!r}")
    return v


def _positive_list(text: str) -> tuple:
    return tuple(_positive(t) for t in text.split(",") if t.strip())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="siegel-lambert",
                                description="Lambert-series identity for Saito-Kurokawa lifts: "
                                            "evaluators, verifiers and tables.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=int, default=10, help="weight of the lift (10, 12 or 14)")
    common.add_argument("--alpha", type=_positive, default=1.0, help="alpha > 0, beta = 1/alpha")
    common.add_argument("--zeros", "--count", dest="zero_count", type=_nonneg_int, default=100,
                        help="number of zeta zeros")
    common.add_argument("--n-terms", type=_positive_int, default=None,
                        help="series truncation (default: from tail bounds)")
    common.add_argument("--precision", dest="precision_mode", choices=("standard", "extended"),
                        default="standard")
    common.add_argument("--output", "-o", default=None, help="output file (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--workers", type=_positive_int, default=None,
                        help=f"worker threads (default ${config.WORKERS_ENV} or logical cores)")
    common.add_argument("--alphas", type=_positive_list, default=(0.1, 0.03, 0.01),
                        help="comma-separated decreasing alphas for the asymptotic sweep")
    common.add_argument("--y", dest="ys", type=_positive_list, default=(0.05, 0.02, 0.01),
                        help="comma-separated y values for c0")
    common.add_argument("--tol", type=_positive, default=1e-9, help="zero ordinate tolerance")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {
        "zeros": "nontrivial zeta zeros, certified",
        "coeffs": "tau(n), c_n and a(n) for the instance",
        "verify": "both sides of the identity with bracketed zero sums",
        "asymptotic": "alpha^k LHS against its small-alpha limit",
        "hl": "Hardy-Littlewood Moebius identity",
        "c0": "constant Fourier term c0(y) of y^12 |Delta|^2",
        "oracles": "closure checks: Mellin, Whittaker, functional equation, residue",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return p


def parse_config(argv=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    workers = ns.workers if ns.workers is not None else config.default_workers()
    return RunConfig(ns.command, ns.k, ns.alpha, ns.zero_count, ns.n_terms, ns.precision_mode,
                     ns.output, ns.format, workers, ns.alphas, ns.ys, ns.tol)


# ------------------------------------------------------------------ commands
# each returns (report dict, csv header, csv rows)

def _instance(cfg: RunConfig, N: int = 400) -> SKInstance:
    return SKInstance.build(cfg.k, max(N, 400))


def _cmd_zeros(cfg: RunConfig):
    zs = find_zeros(cfg.zero_count, tol=cfg.tol, workers=cfg.workers)
    rep = {"zeros": [z.to_dict() for z in zs]}
    return rep, ["index", "gamma", "tol"], [[z.index, repr(z.gamma), repr(z.tol)] for z in zs]


def _cmd_coeffs(cfg: RunConfig):
    N = cfg.n_terms or 50
    inst = _instance(cfg, N)
    tau = delta_tau(N)
    c = sk_petersson_coeffs(inst, N)
    a = a_series(inst, N)
    rows = [[n, tau[n], c[n], a[n]] for n in range(1, N + 1)]
    rep = {"instance": inst.to_dict(),
           "coefficients": [dict(zip(("n", "tau", "c_n", "a_n"), r)) for r in rows]}
    return rep, ["n", "tau", "c_n", "a_n"], rows


def _cmd_verify(cfg: RunConfig):
    inst = _instance(cfg)
    prec = config.precision(cfg.precision_mode)
    rep = verify_main_identity(inst, TransformPair(cfg.alpha), cfg.zero_count, cfg.n_terms,
                               precision=prec, workers=cfg.workers)
    out = rep.to_dict()
    rows = [[p.bracket, repr(p.cum)] for p in rep.zero_sum_partials]
    if not abs(rep.residual) <= config.IDENTITY_RTOL * abs(rep.lhs):
        raise ToleranceFailure(out, ["bracket", "cum"], rows,
                               f"residual {rep.residual:.3e} exceeds {config.IDENTITY_RTOL:g} |LHS|")
    return out, ["bracket", "cum"], rows


def _cmd_asymptotic(cfg: RunConfig):
    inst = _instance(cfg)
    sweep = asymptotic_sweep(inst, cfg.alphas, config.precision(cfg.precision_mode).series_rtol)
    limit = asymptotic_limit(inst)
    zs = find_zeros(cfg.zero_count, tol=cfg.tol, workers=cfg.workers) if cfg.zero_count else []
    entries = [{"alpha": a, "scaled_lhs": v, "relative_deviation": v / limit - 1,
                "deviation_bound": sweep_deviation_bound(inst, a, zs)} for a, v in sweep]
    rep = {"limit": limit, "sweep": entries}
    rows = [[repr(a), repr(v)] for a, v in sweep]
    last = entries[-1]
    if not abs(last["relative_deviation"]) <= config.SWEEP_RTOL:
        raise ToleranceFailure(rep, ["alpha", "scaled_lhs"], rows,
                               f"alpha^k LHS misses its limit by {last['relative_deviation']:.2%}")
    return rep, ["alpha", "scaled_lhs"], rows


def _cmd_hl(cfg: RunConfig):
    pair = TransformPair(cfg.alpha)
    zs = find_zeros(cfg.zero_count, tol=cfg.tol, workers=cfg.workers) if cfg.zero_count else []
    partials = hl_rhs_partials(pair, zs, bracket_zeros(zs))
    lhs, rhs = hl_identity(pair, zs, cfg.n_terms)
    rep = {"lhs": lhs, "rhs": rhs,
           "rhs_partials": [{"bracket": j, "cum": v} for j, v in enumerate(partials)]}
    return rep, ["bracket", "cum"], [[j, repr(v)] for j, v in enumerate(partials)]


def _cmd_c0(cfg: RunConfig):
    vals = [(y, zagier_c0(y, cfg.n_terms)) for y in cfg.ys]
    rep = {"c0": [{"y": y, "c0": v} for y, v in vals]}
    return rep, ["y", "c0"], [[repr(y), repr(v)] for y, v in vals]


def _cmd_oracles(cfg: RunConfig):
    inst = _instance(cfg)
    pair = TransformPair(cfg.alpha)
    prec = config.precision(cfg.precision_mode)
    mellin = mellin_closure(inst, pair, prec.quad_rtol, cfg.workers)
    ik = []
    for n in (1, 2, 5):
        for beta in (0.5, 1.0, 2.0):
            q, c = ik_closed_vs_quadrature(n, beta, cfg.k)
            ik.append({"n": n, "beta": beta, "quadrature": q, "closed": c,
                       "relative_gap": abs(q - c) / abs(c)})
    fe = [{"s": [s.real, s.imag], "deviation": functional_equation_deviation(inst, s)} for s in FE_SAMPLES]
    res = [{"offset": o, "deviation": residue_deviation(inst, o)} for o in RESIDUE_OFFSETS]
    checks = {
        "mellin": mellin <= config.MELLIN_RTOL,
        "whittaker": all(e["relative_gap"] <= config.IK_RTOL for e in ik),
        "functional_equation": all(e["deviation"] <= config.FE_RTOL for e in fe),
        "residue": all(e["deviation"] <= 1e-6 for e in res),
    }
    rep = {"mellin_relative_gap": mellin, "whittaker": ik, "functional_equation": fe,
           "residue": res, "passed": checks}
    if cfg.zero_count:
        rep["residue_closure"] = residue_closure(inst, pair, cfg.zero_count, workers=cfg.workers)
    if not all(checks.values()):
        failed = ", ".join(k for k, v in checks.items() if not v)
        raise OracleFailure(rep, f"oracle checks failed: {failed}")
    return rep, None, None


_HANDLERS = {"zeros": _cmd_zeros, "coeffs": _cmd_coeffs, "verify": _cmd_verify,
             "asymptotic": _cmd_asymptotic, "hl": _cmd_hl, "c0": _cmd_c0, "oracles": _cmd_oracles}


# ------------------------------------------------------------------ output

def _to_plain(obj):
    """Convert numpy scalars and tuples for json."""
    if isinstance(obj, dict):
        return {k: _to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_plain(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        return obj.item()
    return obj


def render(cfg: RunConfig, report: dict, header, rows) -> str:
    meta = {"config": cfg.to_dict(), "version": __version__}
    if cfg.format == "csv":
        buf = io.StringIO()
        buf.write("# " + json.dumps(meta) + "\n")
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(header)
        wr.writerows(rows)
        return buf.getvalue()
    return json.dumps(_to_plain({**meta, "report": report}), indent=2) + "\n"


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error(kind: str, message: str, code: int) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_code": code}) + "\n")
    return code


def run(cfg: RunConfig) -> int:
    if cfg.format == "csv" and cfg.command not in CSV_COMMANDS:
        return _error("ConfigError", f"command {cfg.command!r} has no CSV form", EXIT_CONFIG)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            try:
                report, header, rows = _HANDLERS[cfg.command](cfg)
            finally:
                for w in caught:
                    sys.stderr.write(json.dumps({"warning": w.category.__name__,
                                                 "message": str(w.message)}) + "\n")
    except ToleranceFailure as e:
        report, header, rows, msg = e.args
        _emit(cfg, render(cfg, report, header, rows))
        return _error("ToleranceFailure", msg, EXIT_TOLERANCE)
    except OracleFailure as e:
        report, msg = e.args
        _emit(cfg, render(cfg, report, None, None))
        return _error("OracleMismatch", msg, EXIT_ORACLE)
    except OracleMismatchError as e:
        return _error(type(e).__name__, str(e), EXIT_ORACLE)
    except (UnsupportedWeightError, InvalidIndexError, ValueError) as e:
        return _error(type(e).__name__, str(e), EXIT_CONFIG)
    except SiegelLambertError as e:
        return _error(type(e).__name__, str(e), EXIT_TOLERANCE)
    _emit(cfg, render(cfg, report, header, rows))
    return EXIT_OK


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 for --help/--version
        return int(e.code or 0)
    except ValueError as e:
        return _error("ConfigError", str(e), EXIT_CONFIG)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
