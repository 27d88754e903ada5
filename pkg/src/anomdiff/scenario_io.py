"""Scenario files, snapshot CSV and run metadata.

A scenario is a line-oriented ``key = value`` text with ``#`` comments::

    grid.L = 0
    grid.R = 1
    grid.N = 100
    params.alpha = 1.5
    params.theta = 0
    params.k_alpha = 1
    scheme.sigma = 1
    scheme.dt = auto
    scheme.t_end = 0.3
    ic = pulse:0.5,0.02,1
    bc = constant:0          # or bc.left / bc.right
    snapshots = 0.01, 0.3
    output = out

Initial conditions: ``zero``, ``constant:v``, ``pulse:center,width,mass``
(bare ``pulse``: unit mass, width 2h, domain centre),
``gaussian:center,stddev,mass``, ``table:path`` (x, value rows).  Boundary
data: ``constant:v`` or ``table:path`` ((t, value) rows, linear
interpolation, held constant outside the table).
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .coeffs import FractionalParams, skew_bound
from .errors import ConfigError
from .operator import FieldState, SpatialGrid
from .schemes import BoundaryConditions, InitialCondition, SchemeConfig, SimulationResult, run_simulation

_KEYS = (
    "grid.L",
    "grid.R",
    "grid.N",
    "params.alpha",
    "params.theta",
    "params.k_alpha",
    "scheme.sigma",
    "scheme.dt",
    "scheme.t_end",
    "ic",
    "bc",
    "bc.left",
    "bc.right",
    "snapshots",
    "output",
)
_DEFAULTS = {
    "grid.L": "0",
    "grid.R": "1",
    "params.theta": "0",
    "params.k_alpha": "1",
    "scheme.sigma": "1",
    "scheme.dt": "auto",
    "output": "out",
}
_REQUIRED = ("grid.N", "params.alpha", "scheme.t_end", "ic")


def _read_table(path: Path) -> tuple[np.ndarray, np.ndarray]:
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                rows.append((float(row[0]), float(row[1])))
            except (ValueError, IndexError):
                if rows:  # only a leading header row may be non-numeric
                    raise ValueError(f"bad table row {row!r} in {path}") from None
    if len(rows) < 1:
        raise ValueError(f"table {path} has no data rows")
    arr = np.array(rows)
    if np.any(np.diff(arr[:, 0]) <= 0.0):
        raise ValueError(f"first column of {path} must be strictly increasing")
    return arr[:, 0], arr[:, 1]


def _numbers(args: str, n: int, what: str) -> list[float]:
    parts = [p.strip() for p in args.split(",")]
    if len(parts) != n:
        raise ValueError(f"{what} needs {n} comma-separated numbers, got {args!r}")
    vals = [float(p) for p in parts]
    if not all(math.isfinite(v) for v in vals):
        raise ValueError(f"{what} arguments must be finite")
    return vals


class _Pulse:
    """Rectangle of given width and mass, renormalised on the sampled grid.

    With ``center``/``width`` left as None the pulse sits at the middle of the
    sampled interval with width 2h.
    """

    def __init__(self, center=None, width=None, mass=1.0):
        if width is not None and width <= 0.0:
            raise ValueError("pulse width must be positive")
        self.center, self.width, self.mass = center, width, mass

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        h = x[1] - x[0] if x.size > 1 else 1.0
        center = 0.5 * (x[0] + x[-1]) if self.center is None else self.center
        width = 2.0 * h if self.width is None else self.width
        dist = np.abs(x - center)
        half = 0.5 * width
        edge = np.abs(dist - half) <= 1e-9 * h
        c = np.where(dist < half, 1.0, 0.0)
        c[edge] = 0.5
        if not np.any(c):
            raise ValueError("pulse does not cover any grid node")
        w = np.full(x.size, h)
        w[0] = w[-1] = 0.5 * h
        return c * (self.mass / float(np.sum(w * c)))


def parse_ic(spec: str, base_dir: Path) -> InitialCondition:
    kind, _, args = spec.partition(":")
    kind = kind.strip()
    if kind == "zero" and not args:
        return InitialCondition(lambda x: np.zeros_like(x))
    if kind == "constant":
        (v,) = _numbers(args, 1, "constant")
        return InitialCondition(lambda x: np.full_like(x, v))
    if kind == "pulse" and not args:
        return InitialCondition(_Pulse())
    if kind == "pulse":
        return InitialCondition(_Pulse(*_numbers(args, 3, "pulse")))
    if kind == "gaussian":
        mu, sd, mass = _numbers(args, 3, "gaussian")
        if sd <= 0.0:
            raise ValueError("gaussian stddev must be positive")
        return InitialCondition(lambda x: mass * np.exp(-0.5 * ((x - mu) / sd) ** 2) / (sd * math.sqrt(2.0 * math.pi)))
    if kind == "table":
        xs, vs = _read_table(base_dir / args.strip())
        return InitialCondition(lambda x: np.interp(x, xs, vs))
    raise ValueError(f"unknown initial condition {spec!r}")


def parse_bc(spec: str, base_dir: Path):
    kind, _, args = spec.partition(":")
    kind = kind.strip()
    if kind == "constant":
        (v,) = _numbers(args, 1, "constant")
        return lambda t: v
    if kind == "table":
        ts, vs = _read_table(base_dir / args.strip())
        return lambda t: float(np.interp(t, ts, vs))
    raise ValueError(f"unknown boundary condition {spec!r}")


@dataclass(frozen=True)
class Scenario:
    grid: SpatialGrid
    params: FractionalParams
    scheme: SchemeConfig
    ic: str
    bc_left: str
    bc_right: str
    snapshots: tuple[float, ...] = ()
    output: str = "out"
    base_dir: Path = field(default=Path("."), compare=False)

    @cached_property
    def initial_condition(self) -> InitialCondition:
        return parse_ic(self.ic, self.base_dir)

    @cached_property
    def boundary_conditions(self) -> BoundaryConditions:
        return BoundaryConditions(parse_bc(self.bc_left, self.base_dir), parse_bc(self.bc_right, self.base_dir))


def _float(key, raw, line):
    try:
        v = float(raw)
    except ValueError:
        raise ConfigError(f"expected a number, got {raw!r}", line=line, key=key) from None
    if not math.isfinite(v):
        raise ConfigError(f"expected a finite number, got {raw!r}", line=line, key=key)
    return v


def parse_scenario(text: str, base_dir: str | os.PathLike = ".") -> Scenario:
    """Parse and fully validate a scenario; raise ConfigError on any problem."""
    base_dir = Path(base_dir)
    raw: dict[str, tuple[str, int | None]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        key, eq, value = body.partition("=")
        key, value = key.strip(), value.strip()
        if not eq or not key:
            raise ConfigError("expected 'key = value'", line=lineno)
        if key not in _KEYS:
            raise ConfigError("unknown key", line=lineno, key=key)
        if key in raw:
            raise ConfigError(f"duplicate key (first set on line {raw[key][1]})", line=lineno, key=key)
        if not value:
            raise ConfigError("empty value", line=lineno, key=key)
        raw[key] = (value, lineno)

    for key in _REQUIRED:
        if key not in raw:
            raise ConfigError("required key is missing", key=key)
    if "bc" in raw and ("bc.left" in raw or "bc.right" in raw):
        raise ConfigError("use either 'bc' or 'bc.left'/'bc.right'", line=raw["bc"][1], key="bc")
    if "bc" in raw:
        raw["bc.left"] = raw["bc.right"] = raw.pop("bc")
    for key in ("bc.left", "bc.right"):
        if key not in raw:
            raise ConfigError("required key is missing", key=key)
    for key, value in _DEFAULTS.items():
        raw.setdefault(key, (value, None))

    def get(key):
        return raw[key]

    L = _float("grid.L", *get("grid.L"))
    R = _float("grid.R", *get("grid.R"))
    if R <= L:
        raise ConfigError(f"grid.R must exceed grid.L={L!r}", line=get("grid.R")[1], key="grid.R")
    n_raw, n_line = get("grid.N")
    try:
        N = int(n_raw)
    except ValueError:
        raise ConfigError(f"expected an integer, got {n_raw!r}", line=n_line, key="grid.N") from None
    if N < 3:
        raise ConfigError("grid.N must be an integer >= 3", line=n_line, key="grid.N")

    alpha = _float("params.alpha", *get("params.alpha"))
    if not 1.0 < alpha <= 2.0:
        raise ConfigError(f"alpha={alpha!r} outside the valid interval (1, 2]", line=get("params.alpha")[1], key="params.alpha")
    theta = _float("params.theta", *get("params.theta"))
    if abs(theta) > skew_bound(alpha) + 1e-12:
        raise ConfigError(
            f"|theta| must not exceed min(alpha, 2 - alpha) = {skew_bound(alpha)!r}",
            line=get("params.theta")[1],
            key="params.theta",
        )
    k_alpha = _float("params.k_alpha", *get("params.k_alpha"))
    if k_alpha <= 0.0:
        raise ConfigError("k_alpha must be positive", line=get("params.k_alpha")[1], key="params.k_alpha")

    sigma = _float("scheme.sigma", *get("scheme.sigma"))
    if not 0.0 <= sigma <= 1.0:
        raise ConfigError("sigma must lie in [0, 1]", line=get("scheme.sigma")[1], key="scheme.sigma")
    dt_raw, dt_line = get("scheme.dt")
    dt = None if dt_raw == "auto" else _float("scheme.dt", dt_raw, dt_line)
    if dt is not None and dt <= 0.0:
        raise ConfigError("dt must be positive or 'auto'", line=dt_line, key="scheme.dt")
    t_end = _float("scheme.t_end", *get("scheme.t_end"))
    if t_end < 0.0:
        raise ConfigError("t_end must be non-negative", line=get("scheme.t_end")[1], key="scheme.t_end")

    snaps: tuple[float, ...] = ()
    if "snapshots" in raw:
        s_raw, s_line = get("snapshots")
        snaps = tuple(_float("snapshots", p.strip(), s_line) for p in s_raw.split(","))
        if any(b <= a for a, b in zip(snaps, snaps[1:])):
            raise ConfigError("snapshot times must be strictly increasing", line=s_line, key="snapshots")
        if snaps[0] < 0.0 or snaps[-1] > t_end:
            raise ConfigError(f"snapshot times must lie in [0, t_end={t_end!r}]", line=s_line, key="snapshots")

    grid = SpatialGrid(L, R, N)
    params = FractionalParams(alpha, theta, k_alpha)
    scheme = SchemeConfig(sigma, dt, t_end)
    ic, ic_line = get("ic")
    bcl, bcl_line = get("bc.left")
    bcr, bcr_line = get("bc.right")
    scenario = Scenario(grid, params, scheme, ic, bcl, bcr, snaps, get("output")[0], base_dir)

    # make sure the function specs build and evaluate
    checks = (
        ("ic", ic_line, lambda: scenario.initial_condition.sample(grid)),
        ("bc.left", bcl_line, lambda: scenario.boundary_conditions.gL(0.0)),
        ("bc.right", bcr_line, lambda: scenario.boundary_conditions.gR(0.0)),
    )
    for key, line, check in checks:
        try:
            vals = np.asarray(check(), dtype=float)
        except (ValueError, OSError, TypeError) as exc:
            raise ConfigError(str(exc), line=line, key=key) from None
        if not np.all(np.isfinite(vals)):
            raise ConfigError("function evaluates to non-finite values", line=line, key=key)
    return scenario


def load_scenario(path: str | os.PathLike) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file {str(path)!r}: {exc.strerror}") from None
    return parse_scenario(text, path.parent)


def serialize_scenario(s: Scenario) -> str:
    """Canonical text form; parses back to an equal Scenario."""
    lines = [
        f"grid.L = {s.grid.L!r}",
        f"grid.R = {s.grid.R!r}",
        f"grid.N = {s.grid.N}",
        f"params.alpha = {s.params.alpha!r}",
        f"params.theta = {s.params.theta!r}",
        f"params.k_alpha = {s.params.k_alpha!r}",
        f"scheme.sigma = {s.scheme.sigma!r}",
        f"scheme.dt = {'auto' if s.scheme.dt is None else repr(s.scheme.dt)}",
        f"scheme.t_end = {s.scheme.t_end!r}",
        f"ic = {s.ic}",
        f"bc.left = {s.bc_left}",
        f"bc.right = {s.bc_right}",
    ]
    if s.snapshots:
        lines.append("snapshots = " + ", ".join(repr(t) for t in s.snapshots))
    lines.append(f"output = {s.output}")
    return "\n".join(lines) + "\n"


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_snapshot_csv(state: FieldState, grid: SpatialGrid, path: str | os.PathLike) -> None:
    """Long-format ``t,x,C`` CSV, one row per node, 17 significant digits."""
    state.check_grid(grid)
    t = _fmt(state.time)
    rows = [f"{t},{_fmt(x)},{_fmt(c)}" for x, c in zip(grid.x, state.values)]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t,x,C\n")
        fh.write("\n".join(rows))
        fh.write("\n")


def read_snapshot_csv(path: str | os.PathLike) -> tuple[float, np.ndarray, np.ndarray]:
    """Inverse of ``write_snapshot_csv``: (t, x, C)."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return float(data[0, 0]), data[:, 1], data[:, 2]


def write_run_metadata(run: SimulationResult, path: str | os.PathLike, scenario: Scenario | None = None) -> None:
    meta = run.metadata()
    if scenario is not None:
        meta["scenario"] = {"ic": scenario.ic, "bc.left": scenario.bc_left, "bc.right": scenario.bc_right}
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def snapshot_filename(index: int) -> str:
    return f"snapshot_{index:04d}.csv"


def run_scenario(scenario: Scenario, out_dir: str | os.PathLike | None = None) -> tuple[SimulationResult, Path]:
    """Run and write one CSV per snapshot plus ``metadata.json``."""
    out = Path(out_dir) if out_dir is not None else scenario.base_dir / scenario.output
    result = run_simulation(scenario)
    out.mkdir(parents=True, exist_ok=True)
    for i, state in enumerate(result.snapshots):
        write_snapshot_csv(state, scenario.grid, out / snapshot_filename(i))
    write_run_metadata(result, out / "metadata.json", scenario)
    return result, out


__all__ = [
    "Scenario",
    "load_scenario",
    "parse_scenario",
    "read_snapshot_csv",
    "run_scenario",
    "serialize_scenario",
    "write_run_metadata",
    "write_snapshot_csv",
]
