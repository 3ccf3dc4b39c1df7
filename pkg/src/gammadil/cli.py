"""Command-line entry point: ``gammadil {gen,verify,hardy}``.

Exit codes: 0 all checks pass, 1 a verification check failed, 2 usage, I/O or
parse error. Reports list checks sorted by name and carry raw residuals.
"""

import argparse
import json
import sys
import time
from dataclasses import dataclass, field, fields

from ._config import Tolerances, config_context
from .dilation import (
    build_dilation,
    minimality_span,
    verify_dilation_identity,
    verify_gamma_isometry,
    verify_gamma_unitary,
)
from .exceptions import GammaDilError
from .gamma import (
    check_von_neumann,
    identity_suite,
    point_in_gamma,
    probe_polynomials,
    solve_fundamental,
    solve_fundamental_adjoint,
)
from .hardy import (
    crosscheck_with_generic_solver,
    verify_fundamental_B,
    verify_fundamental_B_minus,
    verify_fundamental_B_plus,
    verify_hardy_unitary,
)
from .instances import symmetrized_instance
from .serialize import dumps, pair_from_json, pair_to_json

__all__ = ["RunConfig", "VerificationReport", "main", "cmd_gen", "cmd_verify", "cmd_hardy"]

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

TOL_NAMES = tuple(f.name for f in fields(Tolerances))


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    size: int = 4
    depth: int = 10
    window: int = 6
    d: int = 6
    torus_grid: int = 64
    theta_grid: int = 256
    tolerances: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise UsageError("seed must be a 64-bit unsigned integer")
        for name in ("size", "depth", "d", "theta_grid"):
            if getattr(self, name) < 1:
                raise UsageError(f"{name} must be positive")
        if self.window < 0 or self.window > self.depth - 2:
            raise UsageError(f"window must lie in 0..depth-2 = {self.depth - 2}")
        if self.torus_grid < 16:
            raise UsageError("torus_grid must be at least 16")

    def tol(self, name):
        return getattr(self.tolerances, name)


@dataclass
class VerificationReport:
    instance: dict
    checks: dict = field(default_factory=dict)
    error: str = None
    timings: dict = None

    def add(self, name, residual, threshold):
        residual = float(residual)
        self.checks[name] = {
            "residual": residual,
            "threshold": float(threshold),
            "pass": bool(residual <= threshold),
        }

    @property
    def passed(self) -> bool:
        return self.error is None and all(c["pass"] for c in self.checks.values())

    def to_json(self) -> dict:
        out = {
            "instance": self.instance,
            "checks": {k: self.checks[k] for k in sorted(self.checks)},
            "pass": self.passed,
        }
        if self.error is not None:
            out["error"] = self.error
        if self.timings is not None:
            out["timings"] = self.timings
        return out

    def human(self) -> str:
        lines = [f"instance: {json.dumps(self.instance, sort_keys=True)}"]
        for name in sorted(self.checks):
            c = self.checks[name]
            mark = "ok  " if c["pass"] else "FAIL"
            lines.append(f"  {mark} {name:<40s} {c['residual']:.3e} <= {c['threshold']:.1e}")
        if self.error:
            lines.append(f"  error: {self.error}")
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines)


class _Timer:
    def __init__(self, enabled):
        self.enabled = enabled
        self.data = {}

    def stage(self, name):
        timer = self

        class _Stage:
            def __enter__(self):
                self.t0 = time.perf_counter()

            def __exit__(self, *exc):
                if timer.enabled:
                    timer.data[name] = time.perf_counter() - self.t0

        return _Stage()

    def result(self):
        return dict(sorted(self.data.items())) if self.enabled else None


# -- commands -----------------------------------------------------------------


def cmd_gen(config: RunConfig) -> dict:
    return pair_to_json(symmetrized_instance(config.seed, config.size))


def _gamma_membership(pair, config):
    """Fast rejection of inputs that cannot be Gamma-contractions."""
    if pair.n == 1:
        s, p = complex(pair.S[0, 0]), complex(pair.P[0, 0])
        if not point_in_gamma(s, p, tol=config.tol("eps_lin")):
            return f"scalar point ({s}, {p}) is not in Gamma"
    problems = pair.violations()
    if problems:
        return "; ".join(problems)
    vn = check_von_neumann(pair, probe_polynomials(), torus_grid=config.torus_grid)
    bad = [i for i, r in enumerate(vn) if not r["pass"]]
    if bad:
        return f"spectral-set inequality fails for probe polynomials {bad}"
    return None


def cmd_verify(pair, config: RunConfig, timings=False) -> VerificationReport:
    report = VerificationReport(
        instance={"n": pair.n, "depth": config.depth, "window": config.window}
    )
    timer = _Timer(timings)
    tol_fund, tol_dil, tol_w = config.tol("tol_fund"), config.tol("tol_dil"), config.tol("tol_w")

    with timer.stage("precheck"):
        problem = _gamma_membership(pair, config)
    if problem is not None:
        report.error = f"Gamma-membership: {problem}"
        report.add("gamma_membership", 1.0, 0.0)
        report.timings = timer.result()
        return report
    report.add("gamma_membership", 0.0, 0.0)

    with timer.stage("solve"):
        F = solve_fundamental(pair, grid=config.theta_grid)
        G = solve_fundamental_adjoint(pair, grid=config.theta_grid)
    report.add("fundamental_F", F.residual, tol_fund)
    report.add("fundamental_G", G.residual, tol_fund)
    report.add("numerical_radius_F", F.numerical_radius, 1.0 + tol_w)
    report.add("numerical_radius_G", G.numerical_radius, 1.0 + tol_w)

    with timer.stage("identities"):
        for name, r in identity_suite(pair, F, G).items():
            report.add(f"identity.{name}", r, tol_fund)

    with timer.stage("dilation"):
        dil = build_dilation(pair, F, G, config.depth)
        w = config.window
        report.add("dilation_identity", verify_dilation_identity(dil, pair, w, w, w), tol_dil)
        for name, r in verify_gamma_isometry(dil, w).items():
            report.add(f"gamma_isometry.{name}", r, tol_dil)
        for name, r in verify_gamma_unitary(dil, w).items():
            if name == "norm_R":
                report.add("gamma_unitary.norm_R", r, 2.0 + tol_dil)
            else:
                report.add(f"gamma_unitary.{name}", r, tol_dil)
        rank, dim = minimality_span(dil)
        report.add("minimality_span_deficit", dim - rank, 0.0)
    report.timings = timer.result()
    return report


def cmd_hardy(config: RunConfig, timings=False) -> VerificationReport:
    d = config.d
    if d < 4:
        raise UsageError(f"grid size d={d} too small for interior windows; need d >= 4")
    report = VerificationReport(instance={"d": d})
    timer = _Timer(timings)
    exact = config.tol("eps_lin")
    with timer.stage("fundamental"):
        report.add("fundamental_B", verify_fundamental_B(d)["interior"], exact)
        report.add("fundamental_B_plus", verify_fundamental_B_plus(d)["interior"], exact)
        report.add("fundamental_B_minus", verify_fundamental_B_minus(d)["interior"], exact)
    with timer.stage("unitary"):
        for sub in ("full", "sym", "anti"):
            for name, r in verify_hardy_unitary(d, subspace=sub).items():
                report.add(f"hardy_unitary.{sub}.{name}", r, exact)
    with timer.stage("crosscheck"):
        for sub in ("full", "sym", "anti"):
            res = crosscheck_with_generic_solver(d, sub, tol_fund=config.tol("tol_fund"))
            report.add(f"crosscheck.{sub}", res["interior"], config.tol("tol_fund"))
    report.timings = timer.result()
    return report


# -- argument handling --------------------------------------------------------


_INT_KEYS = {"seed", "size", "depth", "window", "d", "torus_grid", "theta_grid"}
_ALIASES = {"grid_d": "d"}


def _normalize_key(key):
    key = key.strip().replace("-", "_")
    return _ALIASES.get(key, key)


def _set_value(values, tols, key, raw, origin):
    key = _normalize_key(key)
    try:
        if key in _INT_KEYS:
            values[key] = int(raw, 0)
        elif key in TOL_NAMES:
            tols[key] = float(raw)
        elif key == "format":
            if raw not in ("json", "human"):
                raise ValueError(raw)
            values[key] = raw
        else:
            raise UsageError(f"{origin}: unknown key {key!r}")
    except ValueError:
        raise UsageError(f"{origin}: bad value {raw!r} for {key!r}") from None


def read_config_file(path):
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    values, tols = {}, {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, raw = line.split("=", 1)
        _set_value(values, tols, key, raw.strip(), f"{path}:{lineno}")
    return values, tols


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value config file; flags override it")
    common.add_argument("--seed", type=int)
    common.add_argument("--size", type=int)
    common.add_argument("--depth", type=int)
    common.add_argument("--window", type=int)
    common.add_argument("--grid-d", dest="d", type=int)
    common.add_argument("--torus-grid", dest="torus_grid", type=int)
    common.add_argument("--theta-grid", dest="theta_grid", type=int)
    common.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json")
    fmt.add_argument("--human", dest="format", action="store_const", const="human")
    common.add_argument("--timings", action="store_true", help="add wall-clock timings to reports")

    parser = argparse.ArgumentParser(prog="gammadil", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("gen", parents=[common], help="emit a seeded symmetrized pair as JSON")
    v = sub.add_parser("verify", parents=[common], help="solve, dilate and verify a pair")
    v.add_argument("--input", required=True, help="pair JSON path, or - for stdin")
    sub.add_parser("hardy", parents=[common], help="exact checks of the Hardy-space model")
    return parser


def resolve_config(args):
    values, tols = read_config_file(args.config) if args.config else ({}, {})
    for key in _INT_KEYS:
        if getattr(args, key, None) is not None:
            values[key] = getattr(args, key)
    for item in args.tol:
        if "=" not in item:
            raise UsageError(f"--tol expects NAME=VALUE, got {item!r}")
        key, raw = item.split("=", 1)
        if _normalize_key(key) not in TOL_NAMES:
            raise UsageError(f"unknown tolerance {key!r}; choose from {', '.join(TOL_NAMES)}")
        _set_value(values, tols, key, raw, "--tol")
    if args.format is not None:
        values["format"] = args.format
    fmt = values.pop("format", "json")
    try:
        tolerances = Tolerances(**tols)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return RunConfig(tolerances=tolerances, **values), fmt


def _load_pair(path):
    try:
        if path == "-":
            obj = json.load(sys.stdin)
        else:
            with open(path, encoding="utf-8") as fh:
                obj = json.load(fh)
        return pair_from_json(obj)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot load pair from {path}: {exc}") from None


def _emit(report, fmt):
    if fmt == "human":
        print(report.human())
    else:
        print(dumps(report.to_json()))
        print(report.human(), file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PASS if exc.code == 0 else EXIT_USAGE
    try:
        config, fmt = resolve_config(args)
        tol_kwargs = {f.name: getattr(config.tolerances, f.name) for f in fields(Tolerances)}
        with config_context(**tol_kwargs):
            if args.command == "gen":
                print(dumps(cmd_gen(config)))
                return EXIT_PASS
            if args.command == "verify":
                report = cmd_verify(_load_pair(args.input), config, timings=args.timings)
            else:
                report = cmd_hardy(config, timings=args.timings)
    except UsageError as exc:
        print(f"gammadil: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GammaDilError as exc:
        print(f"gammadil: verification error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(report, fmt)
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
