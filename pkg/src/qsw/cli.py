"""Command-line front end: qsw {meyer-info,build-family,convergence,sample,check-conditions}.

Exit codes: 0 ok, 1 usage or configuration error, 2 construction error,
3 numerical-consistency error.
"""
import argparse
import ast
import math
import operator
import os
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from . import analysis, conditions
from .errors import ConstructionError, NumericalConsistencyError, QSWError
from .meyer import MeyerSystem
from .quasispline import L_CAP_DOUBLE, build, diagnostics, synthesize
from .trigpoly import METHODS, get_method

EXIT_OK, EXIT_USAGE, EXIT_CONSTRUCTION, EXIT_NUMERICAL = 0, 1, 2, 3
WHICH = ("phi_perp", "psi_perp", "meyer_phi", "meyer_psi")


class UsageError(Exception):
    pass


# -- parsing helpers -------------------------------------------------------------

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def parse_real(text):
    """Float, 'inf', or an arithmetic expression in numbers and pi such as 'pi/2.2'."""
    text = str(text).strip()
    try:
        return float(text)
    except ValueError:
        pass

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        raise ValueError(text)

    try:
        return ev(ast.parse(text, mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError):
        raise UsageError(f"cannot parse {text!r} as a number") from None


def parse_int_list(text):
    try:
        return [int(x) for x in str(text).replace(" ", "").split(",") if x]
    except ValueError:
        raise UsageError(f"cannot parse {text!r} as a comma-separated list of integers") from None


def read_config(path):
    """Flat 'key = value' lines; '#' starts a comment; keys use the long option names."""
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    for no, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{no}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


@dataclass
class RunConfig:
    omega0: float = math.pi / 3
    l_min: int = 1
    l_max: int = 8
    l_step: int = 1
    n: list = field(default_factory=list)
    method: str = "vp"
    alpha_budget: float = conditions.Budgets.alpha
    gamma_budget: float = conditions.Budgets.gamma
    n_max: int = 2**14
    grid: int = 4096
    out: str = "-"
    format: str = "csv"
    which: str = "phi_perp"
    domain: str = "frequency"
    l: int = 3
    omega_max: float = 8 * math.pi
    samples: int = 2**16
    meyer_degenerate: bool = False

    def validate(self):
        if not (math.pi / 3 <= self.omega0 < math.pi / 2):
            raise UsageError(f"omega0 must satisfy pi/3 <= omega0 < pi/2 (got {self.omega0:.6g})")
        if self.l_min < 1 or self.l_max < self.l_min or self.l_step < 1:
            raise UsageError("l range must be non-empty with 1 <= l-min <= l-max and l-step >= 1")
        cap_l = max(self.l_max, self.l)
        if cap_l > L_CAP_DOUBLE and os.environ.get("QSW_PRECISION", "double") != "extended":
            raise UsageError(f"l > {L_CAP_DOUBLE} needs QSW_PRECISION=extended")
        if os.environ.get("QSW_PRECISION", "double") not in ("double", "extended"):
            raise UsageError("QSW_PRECISION must be 'double' or 'extended'")
        if self.method not in METHODS:
            raise UsageError(f"unknown method {self.method!r}; choose from {sorted(METHODS)}")
        if self.n and len(self.n) != len(self.ls):
            raise UsageError(f"explicit n list has {len(self.n)} entries for {len(self.ls)} values of l")
        if not (self.alpha_budget > 0 and self.gamma_budget > 0):
            raise UsageError("budgets must be positive")
        if self.grid < 16 or self.samples < 16 or self.samples & (self.samples - 1):
            raise UsageError("grid must be >= 16 and samples a power of two >= 16")
        if self.omega_max <= 0:
            raise UsageError("omega-max must be positive")
        if self.format not in ("csv", "json"):
            raise UsageError("format must be csv or json")
        if self.which not in WHICH:
            raise UsageError(f"which must be one of {WHICH}")
        if self.domain not in ("time", "frequency"):
            raise UsageError("domain must be time or frequency")
        return self

    @property
    def ls(self):
        return list(range(self.l_min, self.l_max + 1, self.l_step))

    @property
    def budgets(self):
        return conditions.Budgets(self.alpha_budget, self.gamma_budget)


_CONVERT = {
    "omega0": parse_real,
    "alpha_budget": parse_real,
    "gamma_budget": parse_real,
    "omega_max": parse_real,
    "n": parse_int_list,
    "meyer_degenerate": lambda v: v if isinstance(v, bool) else str(v).lower() in ("1", "true", "yes"),
}


def _as_int(v):
    try:
        return int(v)
    except (TypeError, ValueError):
        raise UsageError(f"expected an integer, got {v!r}") from None


def make_config(args):
    """Defaults, then the config file, then explicit command-line flags."""
    values = {}
    if args.config:
        values.update(read_config(args.config))
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            values[f.name] = v
    known = {f.name: f for f in fields(RunConfig)}
    kwargs = {}
    for key, v in values.items():
        if key not in known:
            raise UsageError(f"unknown configuration key {key!r}")
        if key in _CONVERT:
            kwargs[key] = _CONVERT[key](v)
        elif isinstance(known[key].default, int) and not isinstance(known[key].default, bool):
            kwargs[key] = _as_int(v)
        else:
            kwargs[key] = str(v)
    return RunConfig(**kwargs).validate()


# -- output ----------------------------------------------------------------------


def emit(cfg, name, rows, **meta):
    text = analysis.rows_to_json(rows, **meta) if cfg.format == "json" else analysis.rows_to_csv(rows)
    if cfg.out == "-":
        sys.stdout.write(text)
        return None
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{name}.{cfg.format}"
    path.write_text(text)
    return path


def _choose_n(cfg, meyer, l, i):
    method = get_method(cfg.method)
    if cfg.n:
        return cfg.n[i]
    return conditions.select_n(meyer, l, method, cfg.budgets, n_max=cfg.n_max)


# -- commands --------------------------------------------------------------------


def cmd_meyer_info(cfg):
    m = MeyerSystem(cfg.omega0)
    phi = analysis.localization(m.phi_hat, m.phi_hat_prime, time_centre=0.0)
    psi = analysis.localization(m.psi_hat, m.psi_hat_prime, time_centre=0.5)
    row = {
        "omega0": cfg.omega0,
        "qmf_residual": m.qmf_residual(cfg.grid),
        "partition_residual": m.partition_residual(cfg.grid),
        "uc_meyer": phi.uc,
        "uc_meyer_wavelet": psi.uc,
        "time_radius2": phi.time_radius2,
        "freq_radius2": phi.freq_radius2,
    }
    emit(cfg, "meyer_info", [row])
    return EXIT_OK


def _condition_rows(cfg, build_systems):
    meyer = MeyerSystem(cfg.omega0)
    method = get_method(cfg.method)
    rows, failures = [], 0
    for i, l in enumerate(cfg.ls):
        try:
            n = _choose_n(cfg, meyer, l, i)
            rep = conditions.measure(meyer, l, n, method)
            status, reason = "ok", ""
            if not rep.con3:
                status, reason = "fail", "con3: summation polynomial vanishes at pi"
            elif build_systems:
                build(meyer, l, n, method)
            row = rep.row()
        except (ConstructionError, ValueError) as exc:
            row = {c: float("nan") for c in conditions.CSV_COLUMNS}
            row["l"] = l
            row["n"] = getattr(getattr(exc, "best", None), "n", 0) or 0
            status, reason = "fail", str(exc)
        failures += status != "ok"
        rows.append({**row, "status": status, "reason": reason})
    return rows, failures


def cmd_build_family(cfg):
    rows, failures = _condition_rows(cfg, build_systems=True)
    emit(cfg, "conditions", rows)
    return EXIT_CONSTRUCTION if failures == len(rows) else EXIT_OK


def cmd_check_conditions(cfg):
    rows, failures = _condition_rows(cfg, build_systems=False)
    emit(cfg, "check_conditions", rows)
    return EXIT_NUMERICAL if failures else EXIT_OK


def cmd_convergence(cfg):
    meyer = MeyerSystem(cfg.omega0)
    method = get_method(cfg.method)
    if cfg.meyer_degenerate:
        study = analysis.uc_gap_table([meyer], meyer)
        emit(cfg, "convergence", study.records(), **{f"reference_{k}": v for k, v in study.reference.items()})
        return EXIT_OK
    family, reports = [], []
    for i, l in enumerate(cfg.ls):
        try:
            n = _choose_n(cfg, meyer, l, i)
            reports.append(conditions.measure(meyer, l, n, method))
            family.append(build(meyer, l, n, method))
        except ConstructionError as exc:
            raise ConstructionError(f"l={l}: {exc}") from exc
    led = conditions.ledger(reports, cfg.omega0)
    study = analysis.uc_gap_table(family, meyer)
    extra = []
    for q, lrow in zip(family, led.rows):
        d = diagnostics(q, cfg.grid)
        extra.append(
            {
                "mask_error": d["mask_error"],
                "big_phi_error": d["big_phi_error"],
                "big_phi_prime_norm": d["big_phi_prime_norm"],
                "mu": lrow["mu"],
                "envelope_exponent": lrow["envelope_exponent"],
                "rate_freq_scaling": lrow["rate_freq_scaling"],
                "rate_time_scaling": lrow["rate_time_scaling"],
                "rate_freq_wavelet": lrow["rate_freq_wavelet"],
                "rate_time_wavelet": lrow["rate_time_wavelet"],
            }
        )
    rows = [{**r, **e} for r, e in zip(study.records(), extra)]
    emit(cfg, "convergence", rows, c=led.c, C0=led.C0, **{f"reference_{k}": v for k, v in study.reference.items()})
    return EXIT_OK


def cmd_sample(cfg):
    meyer = MeyerSystem(cfg.omega0)
    if cfg.which.startswith("meyer"):
        fhat = meyer.phi_hat if cfg.which == "meyer_phi" else meyer.psi_hat
    else:
        n = cfg.n[0] if cfg.n else conditions.select_n(meyer, cfg.l, get_method(cfg.method), cfg.budgets, n_max=cfg.n_max)
        q = build(meyer, cfg.l, n, get_method(cfg.method))
        fhat = q.phi_hat_perp if cfg.which == "phi_perp" else q.psi_hat_perp
    if cfg.domain == "frequency":
        x = np.linspace(-cfg.omega_max, cfg.omega_max, cfg.grid + 1)
        y = np.asarray(fhat(x), dtype=complex)
        key = "omega"
    else:
        x, y = synthesize(fhat, omega_max=cfg.omega_max, samples=cfg.samples)
        key = "t"
    if np.all(np.imag(y) == 0):
        rows = [{key: a, "value": b} for a, b in zip(x, np.real(y))]
    else:
        rows = [{key: a, "real": b.real, "imag": b.imag} for a, b in zip(x, y)]
    emit(cfg, f"sample_{cfg.which}_{cfg.domain}", rows)
    return EXIT_OK


COMMANDS = {
    "meyer-info": cmd_meyer_info,
    "build-family": cmd_build_family,
    "convergence": cmd_convergence,
    "sample": cmd_sample,
    "check-conditions": cmd_check_conditions,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def make_parser():
    p = _Parser(prog="qsw", description="Quasispline wavelets converging to the Meyer system.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("which", nargs="?", help="for sample: " + ", ".join(WHICH))
    p.add_argument("domain", nargs="?", help="for sample: time or frequency")
    p.add_argument("--config", help="flat key = value file; flags override it")
    p.add_argument("--omega0", help="Meyer transition parameter, pi/3 <= omega0 < pi/2 (accepts 'pi/3')")
    p.add_argument("--l-min", dest="l_min")
    p.add_argument("--l-max", dest="l_max")
    p.add_argument("--l-step", dest="l_step")
    p.add_argument("--l", dest="l", help="smoothness level for sample")
    p.add_argument("--n", help="explicit summation degrees, one per l (comma separated)")
    p.add_argument("--method", help="summation method: " + ", ".join(sorted(METHODS)))
    p.add_argument("--alpha-budget", dest="alpha_budget", help="alpha(l) <= budget / l^2 ('inf' disables)")
    p.add_argument("--gamma-budget", dest="gamma_budget", help="gamma(l) <= budget / l^2 ('inf' disables)")
    p.add_argument("--n-max", dest="n_max")
    p.add_argument("--grid", help="grid size for residuals and frequency samples")
    p.add_argument("--omega-max", dest="omega_max", help="frequency cutoff for sample")
    p.add_argument("--samples", help="number of time samples (power of two)")
    p.add_argument("--meyer-degenerate", dest="meyer_degenerate", action="store_const", const=True)
    p.add_argument("--out", help="output directory ('-' for stdout)")
    p.add_argument("--format", choices=("csv", "json"))
    return p


def main(argv=None):
    try:
        args = make_parser().parse_args(argv)
        if args.which is not None:
            if args.command != "sample":
                raise UsageError(f"unexpected argument {args.which!r}")
            args.which = args.which.replace("-", "_")
        cfg = make_config(args)
        return COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"qsw: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalConsistencyError as exc:
        print(f"qsw: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ConstructionError, QSWError) as exc:
        print(f"qsw: construction error: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION


if __name__ == "__main__":
    sys.exit(main())
