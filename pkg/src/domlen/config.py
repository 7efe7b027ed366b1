"""Experiment configuration: a line-based ``key = value`` format with
``#`` comments, plus loaders for the shipped case files.

Validation collects every problem it can find (with line numbers) before
failing, so a config file can be fixed in one pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Optional

from .errors import ConfigError, ExpressionError
from .expressions import Expression, parse_expression
from .inverse import (Functional, Method, OptimizerConfig, ProblemTemplate,
                      System, DEFAULT_FUNCTIONAL)
from .solvers import SolverParams

_SYSTEMS = {s.value: s for s in System}
_MODES = ("forward", "invert", "multistart", "table", "oracle_check", "scan")
_METHODS = {"fdgd": Method.FD_GRADIENT_DESCENT,
            "golden": Method.GOLDEN_SECTION}
_TABLES = ("table1", "table2")

# data keys are expression strings over x (profiles) or t (traces)
_PROFILE_KEYS = ("u0", "theta0", "rho0")


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated contents of one experiment file."""

    system: System
    mode: str
    horizon: float
    eta: Optional[Expression] = None
    lam_or_chi: Optional[Expression] = None
    rhobar: Optional[Expression] = None
    u0: Optional[Expression] = None
    theta0: Optional[Expression] = None
    rho0: Optional[Expression] = None
    desired_length: Optional[float] = None
    lower: Optional[float] = None
    upper: Optional[float] = None
    start: Optional[float] = None
    starts: tuple[float, ...] = ()
    cells: int = 200
    steps: int = 1000
    coupling: float = 1.0
    linear: bool = False
    cfl_guard: bool = True
    noise_percent: float = 0.0
    seed: int = 0
    method: Method = Method.FD_GRADIENT_DESCENT
    tol_step: float = 1e-6
    tol_cost: float = 1e-14
    max_iters: int = 100
    fd_step: float = 1e-4
    scan_lo: Optional[float] = None
    scan_hi: Optional[float] = None
    scan_step: float = 0.05
    table: Optional[str] = None
    oracle_mode: int = 2
    oracle_offset: float = 2.0
    out_dir: str = "out"

    def solver_params(self) -> SolverParams:
        return SolverParams(self.cells, self.steps, self.cfl_guard)

    def functional(self) -> Functional:
        return DEFAULT_FUNCTIONAL[self.system]

    def template(self) -> ProblemTemplate:
        if self.eta is None or self.u0 is None:
            raise ConfigError(["config lacks the data needed for a forward problem"])
        return ProblemTemplate(
            system=self.system,
            horizon=self.horizon,
            eta=self.eta.of_t(),
            u0=self.u0.of_x(),
            lam_or_chi=None if self.lam_or_chi is None else self.lam_or_chi.of_t(),
            theta0=None if self.theta0 is None else self.theta0.of_x(),
            rhobar=None if self.rhobar is None else self.rhobar.of_t(),
            rho0=None if self.rho0 is None else self.rho0.of_x(),
            coupling=self.coupling,
            linear=self.linear)

    def optimizer_config(self, start: Optional[float] = None) -> OptimizerConfig:
        if self.lower is None or self.upper is None:
            raise ConfigError(["config lacks l0/l1 optimization bounds"])
        s = self.start if start is None else start
        if s is None:
            raise ConfigError(["config lacks the start value l_i"])
        return OptimizerConfig(self.lower, self.upper, s, self.method,
                               self.tol_step, self.tol_cost, self.max_iters,
                               self.fd_step)


def _parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def _parse_floats(raw: str) -> tuple[float, ...]:
    return tuple(float(part) for part in raw.split(",") if part.strip())


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate; raises ConfigError carrying every problem found."""
    problems: list[str] = []
    raw: dict[str, tuple[str, int]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            problems.append(f"line {lineno}: expected 'key = value', got {stripped!r}")
            continue
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if key in raw:
            problems.append(f"line {lineno}: duplicate key {key!r}")
            continue
        raw[key] = (value, lineno)

    fields: dict[str, object] = {}
    exprs: dict[str, Expression] = {}

    def take(key):
        return raw.pop(key, None)

    def scalar(key, conv, target=None):
        item = take(key)
        if item is None:
            return
        value, lineno = item
        try:
            fields[target or key] = conv(value)
        except (ValueError, ExpressionError) as exc:
            problems.append(f"line {lineno}: bad value for {key!r}: {exc}")

    def expression(key, must_use=None):
        item = take(key)
        if item is None:
            return
        value, lineno = item
        try:
            ex = parse_expression(value)
        except ExpressionError as exc:
            problems.append(f"line {lineno}: bad expression for {key!r}: {exc}")
            return
        if must_use == "t" and ex.uses_x:
            problems.append(f"line {lineno}: {key!r} is a function of t and "
                            "may not reference x")
            return
        if must_use == "x" and ex.uses_t:
            problems.append(f"line {lineno}: {key!r} is a function of x and "
                            "may not reference t")
            return
        exprs[key] = ex

    item = take("system")
    system = None
    if item is None:
        problems.append("missing required key 'system'")
    else:
        value, lineno = item
        system = _SYSTEMS.get(value.strip())
        if system is None:
            problems.append(f"line {lineno}: unknown system {value!r}; choose "
                            f"from {', '.join(_SYSTEMS)}")

    item = take("mode")
    mode = "invert"
    if item is not None:
        value, lineno = item
        if value.strip() not in _MODES:
            problems.append(f"line {lineno}: unknown mode {value!r}; choose "
                            f"from {', '.join(_MODES)}")
        else:
            mode = value.strip()

    item = take("T")
    horizon = None
    if item is None:
        problems.append("missing required key 'T'")
    else:
        value, lineno = item
        try:
            horizon = float(value)
            if horizon <= 0.0:
                problems.append(f"line {lineno}: T must be positive")
        except ValueError:
            problems.append(f"line {lineno}: bad value for 'T': {value!r}")

    for key in ("eta", "ubar"):
        expression(key, must_use="t")
    for key in ("lambda", "chi", "rhobar"):
        expression(key, must_use="t")
    for key in _PROFILE_KEYS:
        expression(key, must_use="x")

    scalar("L_d", float, "desired_length")
    scalar("l0", float, "lower")
    scalar("l1", float, "upper")
    scalar("l_i", float, "start")
    scalar("starts", _parse_floats)
    scalar("N", int, "cells")
    scalar("M", int, "steps")
    scalar("k", float, "coupling")
    scalar("linear", _parse_bool)
    scalar("cfl_guard", _parse_bool)
    scalar("noise_percent", float)
    scalar("seed", int)
    scalar("tol_step", float)
    scalar("tol_cost", float)
    scalar("max_iters", int)
    scalar("fd_step", float)
    scalar("scan_lo", float)
    scalar("scan_hi", float)
    scalar("scan_step", float)
    scalar("k1", int, "oracle_mode")
    scalar("offset", float, "oracle_offset")

    item = take("optimizer")
    if item is not None:
        value, lineno = item
        method = _METHODS.get(value.strip())
        if method is None:
            problems.append(f"line {lineno}: unknown optimizer {value!r}; "
                            f"choose from {', '.join(_METHODS)}")
        else:
            fields["method"] = method

    item = take("table")
    if item is not None:
        value, lineno = item
        if value.strip() not in _TABLES:
            problems.append(f"line {lineno}: unknown table {value!r}; choose "
                            f"from {', '.join(_TABLES)}")
        else:
            fields["table"] = value.strip()

    item = take("out_dir")
    if item is not None:
        fields["out_dir"] = item[0]

    for key, (_, lineno) in raw.items():
        problems.append(f"line {lineno}: unknown key {key!r}")

    # cross-field checks (only meaningful when the pieces parsed)
    if "eta" in exprs and "ubar" in exprs:
        problems.append("keys 'eta' and 'ubar' both given; they name the "
                        "same velocity datum, use one")
    velocity = exprs.get("eta", exprs.get("ubar"))
    if "lambda" in exprs and "chi" in exprs:
        problems.append("keys 'lambda' and 'chi' both given; the system has "
                        "one temperature datum")
    lam_or_chi = exprs.get("lambda", exprs.get("chi"))

    lower = fields.get("lower")
    upper = fields.get("upper")
    if lower is not None and upper is not None and not lower < upper:
        problems.append(f"bounds out of order: l0 = {lower} must be below "
                        f"l1 = {upper}")
    start = fields.get("start")
    if (start is not None and lower is not None and upper is not None
            and lower < upper and not (lower < start < upper)):
        problems.append(f"start l_i = {start} lies outside (l0, l1) = "
                        f"({lower}, {upper})")

    if system is not None and mode != "oracle_check":
        need = {"eta or ubar": velocity, "u0": exprs.get("u0")}
        if system in (System.BURGERS_HEAT_DD, System.BURGERS_HEAT_DN):
            datum = "lambda" if system is System.BURGERS_HEAT_DD else "chi"
            need[datum] = lam_or_chi
            need["theta0"] = exprs.get("theta0")
        if system is System.VARIABLE_DENSITY:
            need["rhobar"] = exprs.get("rhobar")
            need["rho0"] = exprs.get("rho0")
        for name, value in need.items():
            if value is None:
                problems.append(f"system {system.value!r} requires key {name}")
        if mode in ("forward", "invert", "multistart", "table", "scan"):
            if fields.get("desired_length") is None:
                problems.append(f"mode {mode!r} requires key L_d")
        if mode in ("invert", "multistart", "table"):
            for name, value in (("l0", lower), ("l1", upper)):
                if value is None:
                    problems.append(f"mode {mode!r} requires key {name}")
        if mode in ("invert", "table") and start is None:
            problems.append(f"mode {mode!r} requires key l_i")
        if mode == "multistart" and not fields.get("starts"):
            problems.append("mode 'multistart' requires key starts")
        if mode == "scan":
            if fields.get("scan_lo", lower) is None:
                problems.append("mode 'scan' requires scan_lo or l0")
            if fields.get("scan_hi", upper) is None:
                problems.append("mode 'scan' requires scan_hi or l1")

    if problems:
        raise ConfigError(problems)

    return ExperimentConfig(system=system, mode=mode, horizon=horizon,
                            eta=velocity, lam_or_chi=lam_or_chi,
                            rhobar=exprs.get("rhobar"), u0=exprs.get("u0"),
                            theta0=exprs.get("theta0"), rho0=exprs.get("rho0"),
                            **fields)


def serialize_config(config: ExperimentConfig) -> str:
    """Render a config back to the line format; parse(serialize(c))
    reproduces c."""
    lines = [f"system = {config.system.value}", f"mode = {config.mode}",
             f"T = {config.horizon!r}"]
    if config.eta is not None:
        key = "ubar" if config.system is System.VARIABLE_DENSITY else "eta"
        lines.append(f"{key} = {config.eta.source}")
    if config.lam_or_chi is not None:
        key = "chi" if config.system is System.BURGERS_HEAT_DN else "lambda"
        lines.append(f"{key} = {config.lam_or_chi.source}")
    for key, expr in (("rhobar", config.rhobar), ("u0", config.u0),
                      ("theta0", config.theta0), ("rho0", config.rho0)):
        if expr is not None:
            lines.append(f"{key} = {expr.source}")
    for key, value in (("L_d", config.desired_length), ("l0", config.lower),
                       ("l1", config.upper), ("l_i", config.start)):
        if value is not None:
            lines.append(f"{key} = {value!r}")
    if config.starts:
        lines.append("starts = " + ", ".join(repr(s) for s in config.starts))
    lines.append(f"N = {config.cells}")
    lines.append(f"M = {config.steps}")
    lines.append(f"k = {config.coupling!r}")
    lines.append(f"linear = {str(config.linear).lower()}")
    lines.append(f"cfl_guard = {str(config.cfl_guard).lower()}")
    lines.append(f"noise_percent = {config.noise_percent!r}")
    lines.append(f"seed = {config.seed}")
    method = "fdgd" if config.method is Method.FD_GRADIENT_DESCENT else "golden"
    lines.append(f"optimizer = {method}")
    lines.append(f"tol_step = {config.tol_step!r}")
    lines.append(f"tol_cost = {config.tol_cost!r}")
    lines.append(f"max_iters = {config.max_iters}")
    lines.append(f"fd_step = {config.fd_step!r}")
    if config.scan_lo is not None:
        lines.append(f"scan_lo = {config.scan_lo!r}")
    if config.scan_hi is not None:
        lines.append(f"scan_hi = {config.scan_hi!r}")
    lines.append(f"scan_step = {config.scan_step!r}")
    if config.table is not None:
        lines.append(f"table = {config.table}")
    lines.append(f"k1 = {config.oracle_mode}")
    lines.append(f"offset = {config.oracle_offset!r}")
    lines.append(f"out_dir = {config.out_dir}")
    return "\n".join(lines) + "\n"


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as handle:
        return parse_config(handle.read())


def list_cases() -> list[str]:
    """Names of the experiment files shipped with the package."""
    root = resources.files("domlen") / "cases"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".cfg"))


def load_case(name: str) -> ExperimentConfig:
    root = resources.files("domlen") / "cases"
    path = root / f"{name}.cfg"
    if not path.is_file():
        raise ConfigError([f"unknown case {name!r}; shipped cases: "
                           + ", ".join(list_cases())])
    return parse_config(path.read_text(encoding="utf-8"))


def case_text(name: str) -> str:
    root = resources.files("domlen") / "cases"
    path = root / f"{name}.cfg"
    if not path.is_file():
        raise ConfigError([f"unknown case {name!r}; shipped cases: "
                           + ", ".join(list_cases())])
    return path.read_text(encoding="utf-8")
