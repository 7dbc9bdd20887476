"""Command-line front end.

Subcommands:

    point           evaluate one parameter point and print (or write) it
    sweep           lambda sweep to CSV, optional derivative CSV and figure
    thermal-map     lambda x kT grid at fixed gamma to CSV, optional figure
    oracle-compare  finite-chain diagonalization vs the integral route

Options may come from a ``key = value`` config file (``--config``); explicit
flags win over config values.  Exit codes: 0 success, 1 computation or check
failure, 2 usage, 3 output I/O.
"""

import argparse
import math
import os
import sys
from dataclasses import dataclass, field

from .correlators import ChainParams, QuadratureConfig, correlator_set
from .errors import (DomainError, EmptyInputError, UsageError, XYChainError)
from .measures import OptimizerConfig
from .oracle import FiniteChainSpec, thermal_two_site
from .sweep import (DerivativeRecord, SweepGrid, SweepRecord,
                    derivative_lambda, detect_critical_point, evaluate_point,
                    run_sweep, thermal_map)

WORKERS_ENV = "XYCHAIN_WORKERS"

SWEEP_HEADER = ("gamma,lambda,temperature,n,sz,xx,yy,zz,"
                "deficit,theta_opt,phi_opt,c_l1,c_rel")
DERIVATIVE_HEADER = "gamma,temperature,n,lambda,d_deficit,d_c_l1,d_c_rel"


@dataclass
class RunConfig:
    """Fully validated invocation; every field is already typed and checked."""

    subcommand: str
    workers: int = 1
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)
    opt: OptimizerConfig = field(default_factory=OptimizerConfig)
    gamma: float = 0.0
    gammas: tuple = ()
    lam: float = 0.0
    temperature: float = 0.0
    temperatures: tuple = (0.0,)
    lambda_range: tuple = ()
    kt_range: tuple = ()
    kt: float = 0.0
    n: int = 1
    separations: tuple = (1,)
    sizes: tuple = ()
    out: str = ""
    derivatives: str = ""
    plot: str = ""


def _format_real(value):
    """12 significant digits, always with a decimal point in the mantissa."""
    text = format(float(value), ".12g")
    mantissa, sep, exponent = text.partition("e")
    if "." not in mantissa:
        mantissa += ".0"
    return mantissa + sep + exponent


def emit_csv(records, path):
    """Write sweep or derivative records; the record type picks the format."""
    if not records:
        raise EmptyInputError("refusing to write an empty CSV")
    first = records[0]
    if isinstance(first, SweepRecord):
        header = SWEEP_HEADER

        def row(r):
            return ",".join([
                _format_real(r.gamma), _format_real(r.lam),
                _format_real(r.temperature), str(r.n),
                _format_real(r.sz), _format_real(r.xx),
                _format_real(r.yy), _format_real(r.zz),
                _format_real(r.deficit), _format_real(r.theta_opt),
                _format_real(r.phi_opt), _format_real(r.c_l1),
                _format_real(r.c_rel)])
    elif isinstance(first, DerivativeRecord):
        header = DERIVATIVE_HEADER

        def row(r):
            return ",".join([
                _format_real(r.gamma), _format_real(r.temperature), str(r.n),
                _format_real(r.lam), _format_real(r.d_deficit),
                _format_real(r.d_c_l1), _format_real(r.d_c_rel)])
    else:
        raise DomainError(f"cannot serialize records of type {type(first).__name__}")
    with open(path, "w", encoding="ascii", newline="") as handle:
        handle.write(header + "\n")
        for record in records:
            handle.write(row(record) + "\n")


def _add_common(parser):
    parser.add_argument("--config", help="key = value defaults file")
    parser.add_argument("--workers",
                        help=f"worker processes (default ${WORKERS_ENV} or 1)")
    parser.add_argument("--quad-nodes", help="initial quadrature nodes")
    parser.add_argument("--quad-doublings", help="max node doublings")
    parser.add_argument("--quad-tol", help="quadrature absolute tolerance")
    parser.add_argument("--opt-grid", help="deficit search grid points per axis")
    parser.add_argument("--opt-tol", help="deficit refinement tolerance")
    parser.add_argument("--opt-iters", help="deficit refinement iteration cap")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="xychain",
        description="Quantum deficit and coherence measures of the "
                    "transverse-field XY chain")
    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")
    sub.required = True

    p = sub.add_parser("point", help="evaluate a single parameter point")
    p.add_argument("--gamma", help="anisotropy in [0, 1]")
    p.add_argument("--lambda", dest="lam", help="inverse field strength >= 0")
    p.add_argument("--temperature", help="kT >= 0 (0 = exact zero-T limit)")
    p.add_argument("--n", help="spin separation >= 1")
    p.add_argument("--out", help="optional CSV output path")
    _add_common(p)

    p = sub.add_parser("sweep", help="lambda sweep at fixed gamma/kT/n values")
    p.add_argument("--gamma", help="comma-separated anisotropies")
    p.add_argument("--lambda-range", help="start:end:step")
    p.add_argument("--temperature", help="comma-separated kT values (default 0)")
    p.add_argument("--n", help="comma-separated separations (default 1)")
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--derivatives", help="also write d/dlambda CSV here")
    p.add_argument("--plot", help="render the sweep figure to this file")
    _add_common(p)

    p = sub.add_parser("thermal-map", help="lambda x kT grid at fixed gamma")
    p.add_argument("--gamma", help="anisotropy in [0, 1]")
    p.add_argument("--lambda-range", help="start:end:step")
    p.add_argument("--kt-range", help="start:end:step, strictly positive")
    p.add_argument("--n", help="spin separation (default 1)")
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--plot", help="render the map figure to this file")
    _add_common(p)

    p = sub.add_parser("oracle-compare",
                       help="finite-chain diagonalization vs integral route")
    p.add_argument("--gamma", help="anisotropy in [0, 1]")
    p.add_argument("--lambda", dest="lam", help="inverse field strength >= 0")
    p.add_argument("--kt", help="temperature > 0")
    p.add_argument("--n", help="spin separation (default 1)")
    p.add_argument("--sizes", help="comma-separated chain sizes (default 6,8,10)")
    _add_common(p)

    return parser


def _load_config_file(path):
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            for lineno, raw in enumerate(handle, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(
                        f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
                key, _, value = line.partition("=")
                values[key.strip().lower().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    return values


# config keys 'lambda' / 'lambda-range' map onto the argparse dests
_CONFIG_ALIASES = {"lambda": "lam"}


def _apply_config(args, parser_dests):
    config = _load_config_file(args.config)
    unknown = []
    for key, value in config.items():
        dest = _CONFIG_ALIASES.get(key, key)
        if dest not in parser_dests:
            unknown.append(key)
            continue
        if getattr(args, dest) is None:   # explicit flags win
            setattr(args, dest, value)
    if unknown:
        raise UsageError(
            f"unknown config keys for subcommand {args.subcommand!r}: "
            + ", ".join(sorted(unknown)))


class _Violations:
    """Collects every constraint violation so one message reports them all."""

    def __init__(self):
        self.messages = []

    def add(self, message):
        self.messages.append(message)

    def require_float(self, text, name):
        try:
            return float(text)
        except (TypeError, ValueError):
            self.add(f"--{name} expects a real number, got {text!r}")
            return None

    def require_int(self, text, name):
        try:
            return int(text)
        except (TypeError, ValueError):
            self.add(f"--{name} expects an integer, got {text!r}")
            return None

    def require_float_list(self, text, name):
        out = []
        for part in str(text).split(","):
            value = self.require_float(part.strip(), name)
            if value is None:
                return None
            out.append(value)
        return tuple(out)

    def require_int_list(self, text, name):
        out = []
        for part in str(text).split(","):
            value = self.require_int(part.strip(), name)
            if value is None:
                return None
            out.append(value)
        return tuple(out)

    def require_range(self, text, name):
        parts = str(text).split(":")
        if len(parts) != 3:
            self.add(f"--{name} expects start:end:step, got {text!r}")
            return None
        try:
            start, end, step = (float(p) for p in parts)
        except ValueError:
            self.add(f"--{name} expects three real numbers, got {text!r}")
            return None
        if step <= 0.0:
            self.add(f"--{name}: step must be > 0, got {step}")
            return None
        if start >= end:
            self.add(f"--{name}: start must be < end, got {start} >= {end}")
            return None
        return (start, end, step)

    def raise_if_any(self):
        if self.messages:
            raise UsageError("\n".join(self.messages))


def _range_values(rng):
    start, end, step = rng
    count = int(math.floor((end - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


def _validated_workers(args, bad):
    raw = args.workers if args.workers is not None else os.environ.get(WORKERS_ENV)
    if raw is None:
        return 1
    workers = bad.require_int(raw, "workers")
    if workers is not None and workers < 1:
        bad.add(f"--workers must be >= 1, got {workers}")
        return 1
    return workers or 1

def _validated_quad(args, bad):
    kwargs = {}
    if args.quad_nodes is not None:
        kwargs["initial_nodes"] = bad.require_int(args.quad_nodes, "quad-nodes")
    if args.quad_doublings is not None:
        kwargs["max_doublings"] = bad.require_int(args.quad_doublings, "quad-doublings")
    if args.quad_tol is not None:
        kwargs["abs_tol"] = bad.require_float(args.quad_tol, "quad-tol")
    if any(v is None for v in kwargs.values()):
        return QuadratureConfig()
    try:
        return QuadratureConfig(**kwargs)
    except DomainError as exc:
        bad.add(str(exc))
        return QuadratureConfig()


def _validated_opt(args, bad):
    kwargs = {}
    if args.opt_grid is not None:
        kwargs["grid_points"] = bad.require_int(args.opt_grid, "opt-grid")
    if args.opt_tol is not None:
        kwargs["refine_tol"] = bad.require_float(args.opt_tol, "opt-tol")
    if args.opt_iters is not None:
        kwargs["max_refine_iters"] = bad.require_int(args.opt_iters, "opt-iters")
    if any(v is None for v in kwargs.values()):
        return OptimizerConfig()
    try:
        return OptimizerConfig(**kwargs)
    except DomainError as exc:
        bad.add(str(exc))
        return OptimizerConfig()


def _check_gamma(value, bad):
    if value is not None and not 0.0 <= value <= 1.0:
        bad.add(f"--gamma must lie in [0, 1], got {value}")
    return value


def _check_lam(value, bad):
    if value is not None and value < 0.0:
        bad.add(f"--lambda must be >= 0, got {value}")
    return value


def parse_args(argv=None):
    """Parse and fully validate; raises UsageError listing every violation."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    dests = {a for a in vars(args)}
    if args.config:
        _apply_config(args, dests)

    bad = _Violations()
    config = RunConfig(subcommand=args.subcommand)
    config.workers = _validated_workers(args, bad)
    config.quad = _validated_quad(args, bad)
    config.opt = _validated_opt(args, bad)

    def required(attr, flag):
        value = getattr(args, attr)
        if value is None:
            bad.add(f"--{flag} is required for {args.subcommand}")
        return value

    if args.subcommand == "point":
        raw = required("gamma", "gamma")
        if raw is not None:
            config.gamma = _check_gamma(bad.require_float(raw, "gamma"), bad)
        raw = required("lam", "lambda")
        if raw is not None:
            config.lam = _check_lam(bad.require_float(raw, "lambda"), bad)
        if args.temperature is not None:
            value = bad.require_float(args.temperature, "temperature")
            if value is not None:
                if value < 0.0:
                    bad.add(f"--temperature must be >= 0, got {value}")
                config.temperature = value
        if args.n is not None:
            value = bad.require_int(args.n, "n")
            if value is not None:
                if value < 1:
                    bad.add(f"--n must be >= 1, got {value}")
                config.n = value
        config.out = args.out or ""

    elif args.subcommand == "sweep":
        raw = required("gamma", "gamma")
        if raw is not None:
            gammas = bad.require_float_list(raw, "gamma")
            if gammas is not None:
                for g in gammas:
                    _check_gamma(g, bad)
                config.gammas = gammas
        raw = required("lambda_range", "lambda-range")
        if raw is not None:
            rng = bad.require_range(raw, "lambda-range")
            if rng is not None:
                if rng[0] < 0.0:
                    bad.add(f"--lambda-range start must be >= 0, got {rng[0]}")
                config.lambda_range = rng
        temps = (0.0,)
        if args.temperature is not None:
            parsed = bad.require_float_list(args.temperature, "temperature")
            if parsed is not None:
                for t in parsed:
                    if t < 0.0:
                        bad.add(f"--temperature must be >= 0, got {t}")
                temps = parsed
        config.temperatures = temps
        seps = (1,)
        if args.n is not None:
            parsed = bad.require_int_list(args.n, "n")
            if parsed is not None:
                for n in parsed:
                    if n < 1:
                        bad.add(f"--n must be >= 1, got {n}")
                seps = parsed
        config.separations = seps
        config.out = required("out", "out") or ""
        config.derivatives = args.derivatives or ""
        config.plot = args.plot or ""

    elif args.subcommand == "thermal-map":
        raw = required("gamma", "gamma")
        if raw is not None:
            config.gamma = _check_gamma(bad.require_float(raw, "gamma"), bad)
        raw = required("lambda_range", "lambda-range")
        if raw is not None:
            rng = bad.require_range(raw, "lambda-range")
            if rng is not None:
                if rng[0] < 0.0:
                    bad.add(f"--lambda-range start must be >= 0, got {rng[0]}")
                config.lambda_range = rng
        raw = required("kt_range", "kt-range")
        if raw is not None:
            rng = bad.require_range(raw, "kt-range")
            if rng is not None:
                if rng[0] <= 0.0:
                    bad.add(f"--kt-range start must be > 0, got {rng[0]}")
                config.kt_range = rng
        if args.n is not None:
            value = bad.require_int(args.n, "n")
            if value is not None:
                if value < 1:
                    bad.add(f"--n must be >= 1, got {value}")
                config.n = value
        config.out = required("out", "out") or ""
        config.plot = args.plot or ""

    elif args.subcommand == "oracle-compare":
        raw = required("gamma", "gamma")
        if raw is not None:
            config.gamma = _check_gamma(bad.require_float(raw, "gamma"), bad)
        raw = required("lam", "lambda")
        if raw is not None:
            config.lam = _check_lam(bad.require_float(raw, "lambda"), bad)
        raw = required("kt", "kt")
        if raw is not None:
            value = bad.require_float(raw, "kt")
            if value is not None:
                if value <= 0.0:
                    bad.add(f"--kt must be > 0, got {value}")
                config.kt = value
        if args.n is not None:
            value = bad.require_int(args.n, "n")
            if value is not None:
                if value < 1:
                    bad.add(f"--n must be >= 1, got {value}")
                config.n = value
        sizes = (6, 8, 10)
        if args.sizes is not None:
            parsed = bad.require_int_list(args.sizes, "sizes")
            if parsed is not None:
                for sites in parsed:
                    if not 2 <= sites <= 12:
                        bad.add(f"--sizes entries must lie in [2, 12], got {sites}")
                sizes = parsed
        config.sizes = tuple(sorted(sizes))
        if config.sizes and config.n > min(config.sizes) // 2:
            bad.add(f"--n must be <= min(sizes)/2, got n={config.n} "
                    f"with sizes {config.sizes}")

    bad.raise_if_any()
    return config


def _print_point(record):
    names = SWEEP_HEADER.split(",")
    values = [record.gamma, record.lam, record.temperature, record.n,
              record.sz, record.xx, record.yy, record.zz, record.deficit,
              record.theta_opt, record.phi_opt, record.c_l1, record.c_rel]
    for name, value in zip(names, values):
        text = str(value) if name == "n" else _format_real(value)
        print(f"{name:<12} {text}")


def _run_point(config):
    record = evaluate_point(config.gamma, config.lam, config.temperature,
                            config.n, config.quad, config.opt)
    if config.out:
        emit_csv([record], config.out)
    else:
        _print_point(record)
    return 0


def _sweep_groups(records):
    keys = sorted({(r.gamma, r.temperature, r.n) for r in records})
    for key in keys:
        yield key, [r for r in records
                    if (r.gamma, r.temperature, r.n) == key]


def _run_sweep(config):
    grid = SweepGrid(
        lambda_start=config.lambda_range[0],
        lambda_end=config.lambda_range[1],
        lambda_step=config.lambda_range[2],
        gammas=config.gammas,
        temperatures=config.temperatures,
        separations=config.separations)
    records = run_sweep(grid, config.quad, config.opt, config.workers)
    emit_csv(records, config.out)
    derivatives = []
    if config.derivatives:
        for (gamma, kt, n), group in _sweep_groups(records):
            derivs = derivative_lambda(group)
            derivatives.extend(derivs)
            for measure in ("deficit", "c_l1", "c_rel"):
                est = detect_critical_point(derivs, measure)
                print(f"critical point [{measure}] gamma={gamma} kT={kt} n={n}: "
                      f"lambda_c = {est.lambda_c:.6g} +/- {est.uncertainty:.2g} "
                      f"(peak {est.derivative_peak:.6g})")
        emit_csv(derivatives, config.derivatives)
    if config.plot:
        from .plots import sweep_figure
        sweep_figure(records, config.plot, derivatives or None)
    return 0


def _run_thermal_map(config):
    records = thermal_map(
        config.gamma,
        _range_values(config.lambda_range),
        _range_values(config.kt_range),
        config.n, config.quad, config.opt, config.workers)
    emit_csv(records, config.out)
    if config.plot:
        from .plots import thermal_map_figure
        thermal_map_figure(records, config.plot)
    return 0


def _run_oracle_compare(config):
    params = ChainParams(gamma=config.gamma, lam=config.lam,
                         temperature=config.kt)
    integral = correlator_set(params, config.n, config.quad)
    finite = []
    for sites in config.sizes:
        spec = FiniteChainSpec(sites=sites, gamma=config.gamma,
                               lam=config.lam, temperature=config.kt)
        finite.append(thermal_two_site(spec, config.n))

    print(f"oracle-compare: gamma={config.gamma} lambda={config.lam} "
          f"kT={config.kt} n={config.n} sizes={','.join(map(str, config.sizes))}")
    header = f"{'quantity':<10}{'integral':>16}"
    for sites in config.sizes:
        header += f"{f'N={sites}':>16}{'|diff|':>12}"
    print(header)

    rows = [
        ("|sz|", abs(integral.sz), [abs(c.sz) for c in finite]),
        ("xx", integral.xx, [c.xx for c in finite]),
        ("yy", integral.yy, [c.yy for c in finite]),
        ("zz", integral.zz, [c.zz for c in finite]),
    ]
    all_ok = True
    for name, target, values in rows:
        diffs = [abs(v - target) for v in values]
        line = f"{name:<10}{target:>16.9g}"
        for value, diff in zip(values, diffs):
            line += f"{value:>16.9g}{diff:>12.3e}"
        print(line)
        trend_ok = all(diffs[k + 1] <= diffs[k] + 1e-12
                       for k in range(len(diffs) - 1))
        if not trend_ok:
            all_ok = False
            print(f"{'':<10}^ convergence trend violated for {name}")

    if finite:
        sign_note = ("opposite sign convention"
                     if integral.sz * finite[-1].sz < 0 else "same sign")
        print(f"sz sign: integral {'+' if integral.sz >= 0 else '-'}, "
              f"finite chain {'+' if finite[-1].sz >= 0 else '-'} ({sign_note})")
    print(f"convergence trend: {'PASS' if all_ok else 'FAIL'}")
    return 0 if all_ok else 1


def run(config):
    """Execute a validated configuration; returns the process exit code."""
    handlers = {
        "point": _run_point,
        "sweep": _run_sweep,
        "thermal-map": _run_thermal_map,
        "oracle-compare": _run_oracle_compare,
    }
    try:
        return handlers[config.subcommand](config)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except XYChainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main(argv=None):
    try:
        config = parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return run(config)


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
