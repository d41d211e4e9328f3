"""Run configurations, parameter sweeps and CSV output.

A run configuration is a YAML mapping::

    name: fig3
    solver: qubit_zz            # qubit_zz | qubit_local | qubit_global | resonator_me | negf
    parameters:                 # scalars shared by every point
      T: 1.0
      eps1: 2.0
      ...
    baths:                      # numbers or arithmetic over parameter names
      L: {temperature: T + delta_T, omega: eps1, gamma: gamma_L}
      R: {...}
      C: {...}
    sweep: {name: delta_T, start: 0.0, stop: 1.0, steps: 101}
    series:                     # optional; lists are zipped into curves
      delta_z: [0.1, 0.2, 0.4]
    tolerances: {tol: 1.0e-8, mixing: 0.5, max_iter: 200}
    output: fig3.csv

Bath fields that are omitted default to ``gamma_<label>`` and ``cutoff``.
Every point is built before any solver runs, so an out-of-range value
anywhere in the sweep is reported as a :class:`ConfigError` up front.
"""

from __future__ import annotations

import ast
import csv
import io
import math
import operator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from qfridge.baths import BATH_LABELS, BathSpec, Baths

SOLVERS = ("qubit_zz", "qubit_local", "qubit_global", "resonator_me", "negf")
SWEEP_AXES = ("delta_T", "delta_z", "delta_x", "eps1", "gamma_L", "n1", "n2")
INTEGER_PARAMETERS = ("n1", "n2")
BATH_FIELDS = ("temperature", "gamma", "omega", "cutoff")

_REQUIRED = {
    "qubit_zz": ("eps1", "eps2", "delta_z"),
    "qubit_local": ("eps1", "eps2", "delta_z", "delta_x"),
    "qubit_global": ("eps1", "eps2", "delta_z", "delta_x"),
    "resonator_me": ("eps1", "eps2", "delta_z", "n1", "n2"),
    "negf": ("eps1", "eps2", "delta_z"),
}

_DIAGNOSTICS = {
    "qubit_zz": ("pop_0", "pop_1", "pop_2", "pop_d"),
    "qubit_local": ("pop_0", "pop_1", "pop_2", "pop_d"),
    "qubit_global": ("pop_0", "pop_+", "pop_-", "pop_d"),
    "resonator_me": ("mean_n1", "mean_n2"),
    "negf": ("mean_n1", "mean_n2", "iterations", "residual", "grid_size"),
}

_TOLERANCE_KEYS = {
    "negf": ("tol", "mixing", "max_iter", "points_per_width", "span", "max_doublings"),
}


class ConfigError(ValueError):
    """The run configuration is malformed or out of range."""


# --------------------------------------------------------------------------
# expressions

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNARY = {ast.UAdd: operator.pos, ast.USub: operator.neg}


def evaluate_expression(expr, names: dict) -> float:
    """Evaluate a number or an arithmetic expression over ``names``.

    Only ``+ - * / **``, parentheses, numeric literals and parameter names
    are allowed.

    >>> evaluate_expression("eps1 + delta_z", {"eps1": 2.0, "delta_z": 0.1})
    2.1
    """
    if isinstance(expr, bool):
        raise ConfigError(f"expected a number, got {expr!r}")
    if isinstance(expr, (int, float)):
        return float(expr)
    if not isinstance(expr, str):
        raise ConfigError(f"expected a number or expression, got {expr!r}")
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse expression {expr!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            return float(node.value)
        if isinstance(node, ast.Name):
            if node.id not in names:
                raise ConfigError(f"unknown name {node.id!r} in expression {expr!r}")
            return float(names[node.id])
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        raise ConfigError(f"unsupported syntax in expression {expr!r}")

    try:
        return ev(tree)
    except ZeroDivisionError as exc:
        raise ConfigError(f"division by zero in expression {expr!r}") from exc


# --------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class SweepAxis:
    name: str
    start: float
    stop: float
    steps: int

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


@dataclass
class RunConfig:
    solver: str
    parameters: dict
    baths: dict
    sweep: SweepAxis
    series: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    output: str | None = None
    name: str = "run"
    source: Path | None = None

    @property
    def series_names(self) -> tuple:
        return tuple(self.series)

    @property
    def n_series(self) -> int:
        return len(next(iter(self.series.values()))) if self.series else 1

    def series_values(self, k: int) -> dict:
        return {name: vals[k] for name, vals in self.series.items()}

    def output_path(self, override=None) -> Path:
        """``override`` if given, else ``output``, else ``<name>.csv``."""
        return Path(override or self.output or f"{self.name}.csv")


def _as_number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    return float(value)


def parse_config(data, source=None) -> RunConfig:
    """Build a :class:`RunConfig` from a parsed mapping and validate it."""
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a mapping")
    known = {"name", "solver", "parameters", "baths", "sweep", "series", "tolerances", "output"}
    extra = set(data) - known
    if extra:
        raise ConfigError(f"unknown top-level keys: {sorted(extra)}")

    solver = data.get("solver")
    if solver not in SOLVERS:
        raise ConfigError(f"solver must be one of {SOLVERS}, got {solver!r}")

    params = data.get("parameters") or {}
    if not isinstance(params, dict):
        raise ConfigError("parameters must be a mapping")
    params = {k: _as_number(v, f"parameters.{k}") for k, v in params.items()}

    baths = data.get("baths") or {}
    if not isinstance(baths, dict) or set(baths) != set(BATH_LABELS):
        raise ConfigError(f"baths must define exactly {BATH_LABELS}")
    baths = dict(baths)
    for label, spec in baths.items():
        spec = spec or {}
        if not isinstance(spec, dict):
            raise ConfigError(f"baths.{label} must be a mapping")
        bad = set(spec) - set(BATH_FIELDS)
        if bad:
            raise ConfigError(f"baths.{label}: unknown fields {sorted(bad)}")
        if "temperature" not in spec or "omega" not in spec:
            raise ConfigError(f"baths.{label} needs temperature and omega")
        merged = {"gamma": f"gamma_{label}", "cutoff": "cutoff"}
        merged.update(spec)
        baths[label] = merged

    sw = data.get("sweep")
    if not isinstance(sw, dict):
        raise ConfigError("sweep section is required")
    name = sw.get("name")
    if name not in SWEEP_AXES:
        raise ConfigError(f"sweep.name must be one of {SWEEP_AXES}, got {name!r}")
    steps = sw.get("steps")
    if isinstance(steps, bool) or not isinstance(steps, int) or steps <= 0:
        raise ConfigError(f"sweep.steps must be a positive integer, got {steps!r}")
    axis = SweepAxis(name, _as_number(sw.get("start"), "sweep.start"), _as_number(sw.get("stop"), "sweep.stop"), steps)

    series = data.get("series") or {}
    if not isinstance(series, dict):
        raise ConfigError("series must be a mapping of parameter -> list")
    series = dict(series)
    lengths = set()
    for key, vals in series.items():
        if key == axis.name:
            raise ConfigError(f"series parameter {key!r} is also the sweep axis")
        if not isinstance(vals, list) or not vals:
            raise ConfigError(f"series.{key} must be a non-empty list")
        series[key] = [_as_number(v, f"series.{key}") for v in vals]
        lengths.add(len(vals))
    if len(lengths) > 1:
        raise ConfigError("series lists must all have the same length")

    tolerances = data.get("tolerances") or {}
    if not isinstance(tolerances, dict):
        raise ConfigError("tolerances must be a mapping")
    allowed = _TOLERANCE_KEYS.get(solver, ())
    bad = set(tolerances) - set(allowed)
    if bad:
        raise ConfigError(f"tolerances {sorted(bad)} not used by solver {solver}")

    output = data.get("output")
    if output is not None and not isinstance(output, str):
        raise ConfigError("output must be a path string")

    cfg = RunConfig(
        solver=solver,
        parameters=params,
        baths=baths,
        sweep=axis,
        series=series,
        tolerances=dict(tolerances),
        output=output,
        name=str(data.get("name", "run")),
        source=Path(source) if source is not None else None,
    )
    # builds every point; raises ConfigError on the first bad one
    build_points(cfg)
    return cfg


def load_config(path) -> RunConfig:
    """Read and validate a YAML run configuration.

    ``OSError`` propagates unchanged so callers can tell I/O failures from
    invalid content.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: not valid YAML ({exc})") from exc
    return parse_config(data, source=path)


# --------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class Point:
    """Fully resolved inputs for one row."""

    solver: str
    axis_value: float
    series: tuple  # ((name, value), ...)
    parameters: tuple  # ((name, value), ...)
    baths: Baths
    tolerances: tuple

    def param(self, name):
        return dict(self.parameters)[name]


def _resolve_point(cfg: RunConfig, axis_value: float, series: dict) -> Point:
    params = dict(cfg.parameters)
    params.update(series)
    params[cfg.sweep.name] = float(axis_value)
    for key in _REQUIRED[cfg.solver]:
        if key not in params:
            raise ConfigError(f"solver {cfg.solver} needs parameter {key!r}")
    for key in INTEGER_PARAMETERS:
        if key in params:
            v = params[key]
            if abs(v - round(v)) > 1e-9:
                raise ConfigError(f"{key} must be an integer, got {v!r}")
            params[key] = int(round(v))
    specs = {}
    for label in BATH_LABELS:
        fields = {k: evaluate_expression(v, params) for k, v in cfg.baths[label].items()}
        try:
            specs[label] = BathSpec(label=label, **fields)
        except ValueError as exc:
            raise ConfigError(f"{cfg.sweep.name}={axis_value:g}: {exc}") from exc
    pt = Point(
        cfg.solver,
        float(axis_value),
        tuple(sorted(series.items(), key=lambda kv: list(cfg.series).index(kv[0]))),
        tuple(sorted(params.items())),
        Baths(specs["L"], specs["R"], specs["C"]),
        tuple(sorted(cfg.tolerances.items())),
    )
    try:
        _system(pt)
    except ValueError as exc:
        raise ConfigError(f"{cfg.sweep.name}={axis_value:g}: {exc}") from exc
    return pt


def build_points(cfg: RunConfig) -> list:
    """All points in output order: series-major, then along the axis."""
    points = []
    for k in range(cfg.n_series):
        s = cfg.series_values(k) if cfg.series else {}
        for x in cfg.sweep.values():
            points.append(_resolve_point(cfg, x, s))
    return points


def _system(pt: Point):
    from qfridge.qubit_me import QubitSystem
    from qfridge.resonator_me import ResonatorSystem

    p = dict(pt.parameters)
    if pt.solver == "resonator_me":
        return ResonatorSystem(p["eps1"], p["eps2"], p["delta_z"], p["n1"], p["n2"])
    if pt.solver == "negf":
        if p["delta_z"] < 0:
            raise ValueError("delta_z must be >= 0")
        return None
    return QubitSystem(p["eps1"], p["eps2"], p["delta_z"], p.get("delta_x", 0.0))


def evaluate_point(pt: Point) -> dict:
    """Solve one point; solver failures end up in the ``error`` field."""
    row = {"J_C": None, "error": ""}
    try:
        row.update(_solve(pt))
    except Exception as exc:  # recorded in-row, never silently dropped
        row["J_C"] = None
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def _solve(pt: Point) -> dict:
    from qfridge import qubit_me, resonator_me
    from qfridge.negf import FrequencyGrid, solve_negf

    p = dict(pt.parameters)
    tol = dict(pt.tolerances)
    if pt.solver in ("qubit_zz", "qubit_local", "qubit_global"):
        sys = _system(pt)
        if pt.solver == "qubit_zz":
            if sys.delta_x != 0.0:
                raise ValueError("qubit_zz needs delta_x = 0; use qubit_local or qubit_global")
            sol = qubit_me.solve_zz(sys, pt.baths)
        elif pt.solver == "qubit_local":
            sol = qubit_me.local_me_solve(sys, pt.baths)
        else:
            sol = qubit_me.global_me_solve(sys, pt.baths)
        out = {"J_C": sol.J_C}
        for col, v in zip(_DIAGNOSTICS[pt.solver], sol.populations.values):
            out[col] = float(v)
        return out
    if pt.solver == "resonator_me":
        sol = resonator_me.solve_resonators(_system(pt), pt.baths)
        m1, m2 = sol.mean_occupations()
        return {"J_C": sol.J_C, "mean_n1": m1, "mean_n2": m2}
    grid = FrequencyGrid.for_baths(
        pt.baths,
        points_per_width=int(tol.get("points_per_width", 10)),
        span=float(tol.get("span", 1.5)),
    )
    J, sol = solve_negf(
        p["eps1"],
        p["eps2"],
        p["delta_z"],
        pt.baths,
        grid=grid,
        mixing=float(tol.get("mixing", 0.5)),
        tol=float(tol.get("tol", 1e-8)),
        max_iter=int(tol.get("max_iter", 200)),
        max_doublings=int(tol.get("max_doublings", 4)),
    )
    st = sol.state
    return {
        "J_C": J,
        "mean_n1": st.n1,
        "mean_n2": st.n2,
        "iterations": st.iterations,
        "residual": st.residual,
        "grid_size": sol.grid.size,
    }


# --------------------------------------------------------------------------
# results


@dataclass
class SweepResult:
    axis: str
    series_names: tuple
    diagnostics: tuple
    rows: list  # dicts with axis, series values, J_C, diagnostics, error

    @property
    def columns(self) -> list:
        return [self.axis, "J_C", *self.series_names, *self.diagnostics, "error"]

    @property
    def failures(self) -> list:
        return [r for r in self.rows if r["error"]]

    def curves(self):
        """Yield ``(series_dict, x, J)`` per series with failed rows dropped."""
        groups = {}
        for r in self.rows:
            key = tuple(r[n] for n in self.series_names)
            groups.setdefault(key, []).append(r)
        for key, rows in groups.items():
            ok = [r for r in rows if not r["error"]]
            x = np.array([r[self.axis] for r in ok], dtype=float)
            J = np.array([r["J_C"] for r in ok], dtype=float)
            yield dict(zip(self.series_names, key)), x, J


def run_sweep(cfg: RunConfig, jobs: int = 1) -> SweepResult:
    """Evaluate every point of ``cfg``; rows come back in axis order."""
    points = build_points(cfg)
    if jobs > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            solved = list(pool.map(evaluate_point, points, chunksize=max(1, len(points) // (4 * jobs))))
    else:
        solved = [evaluate_point(pt) for pt in points]
    rows = []
    for pt, res in zip(points, solved):
        row = {cfg.sweep.name: pt.axis_value}
        row.update(dict(pt.series))
        row.update(res)
        rows.append(row)
    return SweepResult(cfg.sweep.name, cfg.series_names, _DIAGNOSTICS[cfg.solver], rows)


def _fmt(value) -> str:
    if value is None or value == "":
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    v = float(value)
    if math.isnan(v):
        return "nan"
    return f"{v:.12g}"


def format_csv(res: SweepResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = res.columns
    w.writerow(cols)
    for r in res.rows:
        w.writerow([_fmt(r.get(c)) for c in cols])
    return buf.getvalue()


def emit_csv(res: SweepResult, path) -> Path:
    """Write ``res`` as UTF-8 CSV with LF line endings; returns the path."""
    path = Path(path)
    text = format_csv(res)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def read_csv(path) -> list:
    """Rows of an emitted CSV as dicts of floats (empty cells -> ``None``)."""
    out = []
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            parsed = {}
            for k, v in row.items():
                if k == "error":
                    parsed[k] = v
                elif v == "":
                    parsed[k] = None
                else:
                    parsed[k] = float(v)
            out.append(parsed)
    return out
