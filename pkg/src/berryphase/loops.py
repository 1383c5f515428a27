"""Closed loops, surface patches and phase values on parameter charts.

A Loop maps t in [0, 1] to chart coordinates and must return to its start:
closure is validated at construction (modulo each coordinate's period, so a
full phi turn 0 -> 2*pi counts as closed) and never assumed. Loops come from
three constructors: constant-coordinate circles, constant points, and CSV
sample lists (piecewise-linear, first row repeated last).

Phases are physical modulo 2*pi; PhaseValue keeps the raw accumulated value
next to its canonical (-pi, pi] representative.
"""

from __future__ import annotations

import csv
import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ClosureError, ConfigError, DimensionError
from .families import TAU, ParameterChart, _point_coords

DEFAULT_CLOSURE_TOL = 1e-12


def canonical_angle(x: float) -> float:
    """Representative of an angle in (-pi, pi]."""
    y = math.remainder(float(x), TAU)  # lands in [-pi, pi]
    return math.pi if y == -math.pi else y


@dataclass(frozen=True)
class PhaseValue:
    """A phase in radians: raw accumulated value plus its (-pi, pi] representative."""

    raw: float
    canonical: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "raw", float(self.raw))
        object.__setattr__(self, "canonical", canonical_angle(self.raw))


class Loop:
    """A closed curve t in [0, 1] -> chart coordinates.

    ``sampler`` is preferably vectorized ((n,) t-values -> (n, m) coordinates);
    scalar samplers are accepted and looped over. Construction fails with
    ClosureError when the endpoints differ by more than ``closure_tol`` after
    reduction modulo the chart's coordinate periods.
    """

    def __init__(self, chart: ParameterChart, sampler: Callable,
                 closure_tol: float = DEFAULT_CLOSURE_TOL, description: str = "loop"):
        if closure_tol <= 0:
            raise ValueError(f"closure tolerance must be positive, got {closure_tol}")
        self.chart = chart
        self.sampler = sampler
        self.closure_tol = float(closure_tol)
        self.description = description
        gap = chart.wrap_difference(self.at(1.0) - self.at(0.0))
        worst = float(np.max(np.abs(gap)))
        if worst > self.closure_tol:
            raise ClosureError(f"{description}: endpoints differ by {worst:.3e} "
                               f"(tolerance {self.closure_tol:.1e})")

    def at(self, t: float) -> np.ndarray:
        coords = np.asarray(self.sampler(float(t)), dtype=float).reshape(-1)
        if coords.size != self.chart.dim:
            raise DimensionError(f"sampler returned {coords.size} coordinates, "
                                 f"chart has {self.chart.dim}")
        return coords

    def sample(self, ts) -> np.ndarray:
        """Coordinates at many t values; shape (len(ts), chart.dim)."""
        ts = np.asarray(ts, dtype=float).reshape(-1)
        try:
            out = np.asarray(self.sampler(ts), dtype=float)
            if out.shape == (ts.size, self.chart.dim):
                return out
        except Exception:
            pass
        return np.stack([self.at(t) for t in ts])

    def reversed(self) -> "Loop":
        fwd = self.sampler
        return Loop(self.chart, lambda t: fwd(1.0 - np.asarray(t, dtype=float)),
                    self.closure_tol, f"reversed({self.description})")

    def reparameterized(self, warp: Callable, description: str | None = None) -> "Loop":
        """Same curve traversed as t -> sampler(warp(t)); warp must fix 0 and 1."""
        fwd = self.sampler
        return Loop(self.chart, lambda t: fwd(warp(np.asarray(t, dtype=float))),
                    self.closure_tol,
                    description or f"reparameterized({self.description})")


def circle_loop(chart: ParameterChart, sweep: str, start: float = 0.0, stop: float = TAU,
                fixed: Mapping[str, float] | None = None,
                closure_tol: float = DEFAULT_CLOSURE_TOL) -> Loop:
    """Constant-coordinate circle: ``sweep`` runs linearly start -> stop, the rest fixed.

    Closure requires the swept interval to be a whole number of the
    coordinate's period (or zero).
    """
    fixed = {k: float(v) for k, v in (fixed or {}).items()}
    idx = chart.index(sweep)
    if sweep in fixed:
        raise ConfigError(f"swept coordinate {sweep!r} also given a fixed value")
    missing = set(chart.names) - {sweep} - set(fixed)
    extra = set(fixed) - set(chart.names)
    if missing or extra:
        raise ConfigError(f"fixed values must cover exactly the non-swept coordinates; "
                          f"missing {sorted(missing)}, extra {sorted(extra)}")
    base = np.array([fixed.get(name, 0.0) for name in chart.names], dtype=float)
    start, stop = float(start), float(stop)

    def sampler(t):
        t = np.asarray(t, dtype=float)
        out = np.broadcast_to(base, t.shape + base.shape).copy()
        out[..., idx] = start + (stop - start) * t
        return out

    fixed_desc = ",".join(f"{n}={fixed[n]:.10g}" for n in chart.names if n in fixed)
    description = f"circle[{sweep}:{start:.10g}..{stop:.10g};{fixed_desc}]"
    return Loop(chart, sampler, closure_tol, description)


def constant_loop(chart: ParameterChart, point,
                  closure_tol: float = DEFAULT_CLOSURE_TOL) -> Loop:
    """Degenerate loop that never leaves one point (useful as a null case)."""
    coords = _point_coords(point, chart)

    def sampler(t):
        t = np.asarray(t, dtype=float)
        return np.broadcast_to(coords, t.shape + coords.shape).copy()

    desc = "point[" + ",".join(f"{n}={c:.10g}" for n, c in zip(chart.names, coords)) + "]"
    return Loop(chart, sampler, closure_tol, desc)


def loop_from_samples(chart: ParameterChart, rows: np.ndarray,
                      closure_tol: float = DEFAULT_CLOSURE_TOL,
                      description: str = "samples") -> Loop:
    """Piecewise-linear loop through explicit coordinate rows (first == last)."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    if rows.shape[0] < 2 or rows.shape[1] != chart.dim:
        raise ConfigError(f"need at least 2 rows of {chart.dim} coordinates, "
                          f"got shape {rows.shape}")
    if not np.all(np.isfinite(rows)):
        raise ConfigError("sample rows contain non-finite values")
    nodes = np.linspace(0.0, 1.0, rows.shape[0])

    def sampler(t):
        t = np.asarray(t, dtype=float)
        out = np.empty(t.shape + (chart.dim,), dtype=float)
        for k in range(chart.dim):
            out[..., k] = np.interp(t, nodes, rows[:, k])
        return out

    return Loop(chart, sampler, closure_tol, description)


def loop_from_csv(path, chart: ParameterChart,
                  closure_tol: float = DEFAULT_CLOSURE_TOL) -> Loop:
    """Read a loop sample list from CSV.

    The header row names the chart coordinates (any order, all required); each
    following row is one sample; the first row is repeated last to mark
    closure. Values are plain numbers in radians.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ConfigError(f"{path}: empty loop file") from None
        if sorted(header) != sorted(chart.names):
            raise ConfigError(f"{path}: header {header} does not name the chart "
                              f"coordinates {list(chart.names)}")
        try:
            rows = np.array([[float(cell) for cell in row] for row in reader if row],
                            dtype=float)
        except ValueError as exc:
            raise ConfigError(f"{path}: non-numeric cell ({exc})") from None
    if rows.ndim != 2 or rows.shape[0] < 2 or rows.shape[1] != len(header):
        raise ConfigError(f"{path}: need >= 2 complete sample rows")
    order = [header.index(name) for name in chart.names]
    return loop_from_samples(chart, rows[:, order], closure_tol, description=f"csv[{path}]")


@dataclass(frozen=True)
class SurfacePatch:
    """Axis-aligned rectangle in two chart coordinates, the rest held fixed.

    The counterclockwise traversal of the rectangle in the ordered coordinate
    pair is the associated boundary loop.
    """

    chart: ParameterChart
    coord_pair: tuple[str, str]
    rect: tuple[float, float, float, float]  # (a1, b1, a2, b2)
    fixed: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        c1, c2 = self.coord_pair
        if c1 == c2:
            raise ConfigError("surface patch needs two distinct coordinates")
        self.chart.index(c1)
        self.chart.index(c2)
        a1, b1, a2, b2 = (float(v) for v in self.rect)
        if not (b1 > a1 and b2 > a2):
            raise ConfigError(f"degenerate rectangle {self.rect}")
        object.__setattr__(self, "rect", (a1, b1, a2, b2))
        fixed = {k: float(v) for k, v in self.fixed.items()}
        missing = set(self.chart.names) - set(self.coord_pair) - set(fixed)
        extra = (set(fixed) - set(self.chart.names)) | (set(fixed) & set(self.coord_pair))
        if missing or extra:
            raise ConfigError(f"fixed values must cover exactly the non-patch coordinates; "
                              f"missing {sorted(missing)}, bad {sorted(extra)}")
        object.__setattr__(self, "fixed", fixed)

    def base_coords(self) -> np.ndarray:
        """Chart coordinates with fixed values filled in and the pair at the rect origin."""
        a1, _, a2, _ = self.rect
        vals = dict(self.fixed)
        vals[self.coord_pair[0]] = a1
        vals[self.coord_pair[1]] = a2
        return np.array([vals[name] for name in self.chart.names], dtype=float)

    def midpoint_grid(self, n1: int, n2: int) -> tuple[np.ndarray, float, float]:
        """Cell midpoints as (n1*n2, m) rows plus the cell sides (d1, d2)."""
        a1, b1, a2, b2 = self.rect
        d1 = (b1 - a1) / n1
        d2 = (b2 - a2) / n2
        x1 = a1 + d1 * (np.arange(n1) + 0.5)
        x2 = a2 + d2 * (np.arange(n2) + 0.5)
        g1, g2 = np.meshgrid(x1, x2, indexing="ij")
        coords = np.broadcast_to(self.base_coords(),
                                 (n1 * n2, self.chart.dim)).copy()
        coords[:, self.chart.index(self.coord_pair[0])] = g1.ravel()
        coords[:, self.chart.index(self.coord_pair[1])] = g2.ravel()
        return coords, d1, d2

    def boundary_loop(self, closure_tol: float = DEFAULT_CLOSURE_TOL) -> Loop:
        """Counterclockwise rectangle boundary in the ordered coordinate pair."""
        a1, b1, a2, b2 = self.rect
        corners = np.array([[a1, a2], [b1, a2], [b1, b2], [a1, b2], [a1, a2]])
        base = self.base_coords()
        i1 = self.chart.index(self.coord_pair[0])
        i2 = self.chart.index(self.coord_pair[1])
        nodes = np.linspace(0.0, 1.0, 5)

        def sampler(t):
            t = np.asarray(t, dtype=float)
            out = np.broadcast_to(base, t.shape + base.shape).copy()
            out[..., i1] = np.interp(t, nodes, corners[:, 0])
            out[..., i2] = np.interp(t, nodes, corners[:, 1])
            return out

        desc = (f"boundary[{self.coord_pair[0]}:{a1:.10g}..{b1:.10g},"
                f"{self.coord_pair[1]}:{a2:.10g}..{b2:.10g}]")
        return Loop(self.chart, sampler, closure_tol, desc)
