"""Command-line front end: ``relqng {ng,fig1,envelope,properties}``."""
from __future__ import annotations

import argparse
import csv
from dataclasses import asdict, dataclass, fields
import json
import re
import sys

import numpy as np

from . import family, roof
from .family import NoisyPhotonParams, NotFoundError
from .fock import (
    DensityOperator,
    coherent_state,
    fock_state,
    thermal_state,
    vacuum,
)
from .gaussian import gaussian_reference, non_gaussianity
from .properties import DEFAULT_SEED, PROPERTY_NAMES, run_properties

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VIOLATION = 2
EXIT_NUMERICAL = 3

HULL_SAMPLES = 2000


class ParseError(ValueError):
    def __init__(self, message, line=1, column=1, source="<state>"):
        super().__init__(f"{source}:{line}:{column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class RunConfig:
    truncation: int = 30
    tolerance: float = 1e-9
    grid_points: int = 1000
    output_path: str = "-"
    output_format: str = "csv"

    def __post_init__(self):
        if self.truncation < 8:
            raise ValueError("truncation must be >= 8")
        if self.grid_points < 10:
            raise ValueError("grid_points must be >= 10")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.output_format not in ("csv", "json"):
            raise ValueError("output_format must be csv or json")


_CONFIG_TYPES = {f.name: f.type for f in fields(RunConfig)}
_CASTS = {"int": int, "float": float, "str": str}


def read_config_file(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError("expected 'key = value'", lineno, 1, path)
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in _CONFIG_TYPES:
                raise ParseError(f"unknown key {key!r}", lineno, raw.index(key) + 1, path)
            try:
                values[key] = _CASTS[_CONFIG_TYPES[key]](value)
            except ValueError:
                raise ParseError(f"bad value {value!r} for {key}", lineno,
                                 raw.index(value) + 1, path) from None
    return values


def build_config(args) -> RunConfig:
    values = {}
    if getattr(args, "config", None):
        values.update(read_config_file(args.config))
    for name in _CONFIG_TYPES:
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    return RunConfig(**values)


_NUMBER = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"


def _number(text, offset, kind=float):
    try:
        return kind(text)
    except ValueError:
        raise ParseError(f"invalid number {text!r}", 1, offset + 1) from None


def read_matrix_file(path) -> DensityOperator:
    """First line: dimension. Then ``re im`` pairs in row-major order."""
    with open(path) as fh:
        lines = fh.read().split("\n")
    if not lines or not lines[0].strip():
        raise ParseError("missing dimension line", 1, 1, path)
    try:
        dim = int(lines[0].strip())
    except ValueError:
        raise ParseError(f"bad dimension {lines[0].strip()!r}", 1, 1, path) from None
    if dim < 1:
        raise ParseError("dimension must be positive", 1, 1, path)
    values = []
    for lineno, line in enumerate(lines[1:], 2):
        for match in re.finditer(r"\S+", line):
            try:
                values.append(float(match.group()))
            except ValueError:
                raise ParseError(f"invalid number {match.group()!r}", lineno,
                                 match.start() + 1, path) from None
    if len(values) != 2 * dim * dim:
        raise ParseError(f"expected {2 * dim * dim} numbers, found {len(values)}",
                         len(lines), 1, path)
    arr = np.array(values).reshape(dim, dim, 2)
    return DensityOperator(arr[..., 0] + 1j * arr[..., 1])


def parse_state(spec: str, dim: int) -> DensityOperator:
    """``vacuum``, ``fock:n``, ``coherent:a``, ``thermal:n``,
    ``family:p=..,r=..,theta=..`` or ``file:PATH``."""
    kind, sep, body = spec.partition(":")
    start = len(kind) + len(sep)
    if kind == "vacuum" and not sep:
        return vacuum(dim)
    if not sep:
        raise ParseError(f"unknown state {spec!r}", 1, 1)
    if kind == "fock":
        n = _number(body, start, int)
        if not 0 <= n < dim - 1:
            raise ParseError(f"Fock level {n} does not fit truncation {dim}", 1, start + 1)
        return fock_state(n, dim)
    if kind == "coherent":
        return coherent_state(_number(body.replace("i", "j"), start, complex), dim)
    if kind == "thermal":
        return thermal_state(_number(body, start), dim)
    if kind == "family":
        kwargs = {}
        pos = start
        for item in body.split(","):
            key, eq, value = item.partition("=")
            key = key.strip()
            if not eq or key not in ("p", "r", "theta"):
                raise ParseError(f"expected p=, r= or theta=, got {item!r}", 1, pos + 1)
            if key in kwargs:
                raise ParseError(f"duplicate {key}", 1, pos + 1)
            kwargs[key] = _number(value.strip(), pos + len(key) + 1)
            pos += len(item) + 1
        if "p" not in kwargs:
            raise ParseError("family state needs p=", 1, start + 1)
        try:
            params = NoisyPhotonParams(**kwargs)
        except ValueError as exc:
            raise ParseError(str(exc), 1, start + 1) from None
        return family.density(params, dim)
    if kind == "file":
        rho = read_matrix_file(body)
        return rho.embed(max(rho.dim, dim))
    raise ParseError(f"unknown state kind {kind!r}", 1, 1)


def _fmt(x) -> str:
    return f"{x:.9g}"


def cmd_ng(args, out) -> int:
    config = build_config(args)
    rho = parse_state(args.state, config.truncation)
    ref = gaussian_reference(rho)
    ng = non_gaussianity(rho)
    if config.output_format == "json":
        json.dump({"state": args.state, "ng": ng, "n_th": ref.n_th,
                   "gaussian_entropy": ref.entropy, "mean": list(ref.mean),
                   "cov": np.asarray(ref.cov).tolist()}, out)
        out.write("\n")
        return EXIT_OK
    cov = ref.cov
    out.write(f"ng_nats {_fmt(ng)}\n")
    out.write(f"n_th {_fmt(ref.n_th)}\n")
    out.write(f"gaussian_entropy {_fmt(ref.entropy)}\n")
    out.write(f"mean_q {_fmt(ref.mean[0])}\nmean_p {_fmt(ref.mean[1])}\n")
    out.write(f"cov_qq {_fmt(cov[0, 0])}\ncov_qp {_fmt(cov[0, 1])}\ncov_pp {_fmt(cov[1, 1])}\n")
    return EXIT_OK


def fig1_rows(grid_points: int, env=None):
    """``(p, M, r_opt, QNG)`` for ``p = k / grid_points``, ``k = 0..grid_points``."""
    env = roof.solve_envelope() if env is None else env
    ps = np.arange(grid_points + 1) / grid_points
    m, r_opt = family.minimize_many(ps)
    q = roof.qng_noisy_photon_many(ps, env)
    return np.column_stack([ps, m, r_opt, q])


def write_fig1(rows, config: RunConfig, env, fh) -> None:
    if config.output_format == "csv":
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["p", "M", "r_opt", "QNG"])
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    else:
        doc = {
            "config": asdict(config),
            "rows": [dict(zip(("p", "M", "r_opt", "QNG"), map(float, row))) for row in rows],
            "envelope": {"p1": env.p1, "p2": env.p2, "slope": env.slope},
        }
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def cmd_fig1(args, out) -> int:
    config = build_config(args)
    env = roof.solve_envelope()
    rows = fig1_rows(config.grid_points, env)
    if config.output_path == "-":
        write_fig1(rows, config, env, out)
    else:
        try:
            with open(config.output_path, "w", newline="") as fh:
                write_fig1(rows, config, env, fh)
        except OSError as exc:
            raise OSError(f"cannot write {config.output_path}: {exc.strerror}") from None
    return EXIT_OK


def cmd_envelope(args, out) -> int:
    config = build_config(args)
    lo, hi = args.interval if args.interval else (roof.LEFT_START, roof.RIGHT_END)
    if not 0.0 <= lo < hi <= 1.0:
        raise ParseError("interval must satisfy 0 <= a < b <= 1", 1, 1, "--interval")
    try:
        c_lo, c_hi = family.crossover_bracket((lo, hi))
    except NotFoundError:
        c_lo = c_hi = 0.5 * (lo + hi)
    try:
        env = roof.common_tangent(family.m_of_p, family.m_prime, (lo, c_lo), (c_hi, hi),
                                  tol=config.tolerance)
    except (roof.NoSolutionError, ValueError) as exc:
        out.write(f"no common tangent on [{lo:g}, {hi:g}]: {exc}\n")
        return EXIT_NUMERICAL
    samples = roof.sample_m(HULL_SAMPLES)
    hull = roof.envelope_bruteforce(samples)
    discrepancy = float(np.max(np.abs(hull(samples[:, 0])
                                      - roof.qng_noisy_photon_many(samples[:, 0], env))))
    out.write(f"p1 {_fmt(env.p1)}\np2 {_fmt(env.p2)}\nslope {_fmt(env.slope)}\n")
    out.write(f"M_p1 {_fmt(env.m_p1)}\nM_p2 {_fmt(env.m_p2)}\n")
    out.write(f"tangent_residual {env.residual:.3e}\n")
    out.write(f"slope_mismatch_p1 {family.m_prime(env.p1) - env.slope:.3e}\n")
    out.write(f"slope_mismatch_p2 {family.m_prime(env.p2) - env.slope:.3e}\n")
    out.write(f"hull_vertices {len(hull.vertices)}\n")
    out.write(f"hull_max_discrepancy {discrepancy:.3e}\n")
    return EXIT_OK


def cmd_properties(args, out) -> int:
    only = None
    if args.only:
        only = [name for chunk in args.only for name in chunk.split(",") if name]
        bad = [name for name in only if name not in PROPERTY_NAMES]
        if bad:
            raise ParseError(f"unknown property {bad[0]!r}", 1, 1, "--only")
    reports = run_properties(seed=args.seed, only=only, trials=args.trials)
    out.write(f"seed {args.seed}\n")
    for rep in reports:
        out.write(rep.summary() + "\n")
        for line in rep.violations[:20]:
            out.write(f"  violation: {line}\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VIOLATION


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="plain-text 'key = value' config file")
    common.add_argument("--truncation", type=int, help="Fock cutoff (default 30)")
    common.add_argument("--tolerance", type=float, help="tangent residual tolerance (default 1e-9)")
    common.add_argument("--grid-points", dest="grid_points", type=int,
                        help="p grid intervals for fig1 (default 1000)")
    common.add_argument("--output", "-o", dest="output_path", help="output file ('-' is stdout)")
    common.add_argument("--format", dest="output_format", choices=("csv", "json"))

    parser = _Parser(prog="relqng", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ng", parents=[common], help="NG of a single state")
    p.add_argument("--state", required=True,
                   help="vacuum | fock:n | coherent:a | thermal:n | "
                        "family:p=..,r=..,theta=.. | file:PATH")
    p.set_defaults(func=cmd_ng)

    p = sub.add_parser("fig1", parents=[common], help="emit (p, M, r_opt, QNG) rows")
    p.set_defaults(func=cmd_fig1)

    p = sub.add_parser("envelope", parents=[common], help="solve the common tangent")
    p.add_argument("--interval", nargs=2, type=float, metavar=("A", "B"))
    p.set_defaults(func=cmd_envelope)

    p = sub.add_parser("properties", parents=[common], help="run the N0-N4 harness")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--only", action="append", help=f"subset of {','.join(PROPERTY_NAMES)}")
    p.add_argument("--trials", type=int)
    p.set_defaults(func=cmd_properties)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except (ValueError, OSError) as exc:
        print(f"relqng: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, RuntimeError) as exc:
        print(f"relqng: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
