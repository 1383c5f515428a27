"""Parameterized coherent-state families and their charts.

Built-in families (selected by string id, e.g. on the command line):

* ``su2-spin-half`` — 2 components on the (theta, phi) sphere,
  ``(cos(theta/2) e^{-i phi}, sin(theta/2))``.
* ``su2-spin-1``    — 3 components,
  ``(e^{i phi} sin^2(theta/2), sin(theta)/sqrt(2), e^{-i phi} cos^2(theta/2))``.
* ``su3-spin-1``    — 3 components on (theta, phi, g, gamma); at g = gamma = 0
  it coincides with ``su2-spin-1`` component by component.

Each family maps chart coordinates to a unit state vector and, for the
built-ins, also carries the closed-form Berry connection used to cross-check
the finite-difference machinery:

* spin-1/2:  A_theta = 0,  A_phi = cos^2(theta/2)
* spin-1:    A_theta = 0,  A_phi = cos(theta)
* su3:       A_theta = A_g = 0,  A_phi = cos(theta) cos(2g),  A_gamma = cos(2g)

Evaluators must be pure functions of the coordinates; family objects are
immutable and safe to call concurrently.
"""

from __future__ import annotations

import math
import warnings
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, EvaluationError, UnsupportedFamilyError

TAU = 2.0 * math.pi
_SQRT2 = math.sqrt(2.0)


class ChartBoundsWarning(UserWarning):
    """Coordinates outside the chart's nominal bounds (formulas stay valid)."""


@dataclass(frozen=True)
class ParameterChart:
    """Named coordinates with nominal bounds and optional periods.

    ``periods[k]`` is the identification period of coordinate ``k`` (2*pi for
    full-turn angles) or None for aperiodic coordinates. Periods are what make
    the closure of full-circle loops checkable.
    """

    names: tuple[str, ...]
    bounds: tuple[tuple[float, float], ...]
    periods: tuple[float | None, ...] | None = None

    def __post_init__(self):
        if len(self.names) != len(set(self.names)) or not self.names:
            raise DimensionError(f"chart names must be unique and non-empty: {self.names}")
        if len(self.bounds) != len(self.names):
            raise DimensionError("one bounds interval per coordinate required")
        for name, (lo, hi) in zip(self.names, self.bounds):
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise DimensionError(f"bad bounds for {name!r}: ({lo}, {hi})")
        if self.periods is None:
            object.__setattr__(self, "periods", (None,) * len(self.names))
        elif len(self.periods) != len(self.names):
            raise DimensionError("one period entry per coordinate required")

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise DimensionError(f"chart has no coordinate {name!r}; has {self.names}") from None

    def point(self, *coords: float, **named: float) -> "ParameterPoint":
        """Build a point from positional coordinates or name=value pairs."""
        if coords and named:
            raise DimensionError("give coordinates positionally or by name, not both")
        if named:
            missing = set(self.names) - set(named)
            extra = set(named) - set(self.names)
            if missing or extra:
                raise DimensionError(f"coordinates must be exactly {self.names}; "
                                     f"missing {sorted(missing)}, extra {sorted(extra)}")
            coords = tuple(float(named[n]) for n in self.names)
        return ParameterPoint(self, tuple(float(c) for c in coords))

    def wrap_difference(self, diff: np.ndarray) -> np.ndarray:
        """Reduce coordinate differences modulo each coordinate's period."""
        out = np.array(diff, dtype=float)
        for k, period in enumerate(self.periods):
            if period is not None:
                out[..., k] -= period * np.round(out[..., k] / period)
        return out


@dataclass(frozen=True)
class ParameterPoint:
    """A point of a chart. Out-of-bounds coordinates are allowed with a warning."""

    chart: ParameterChart
    coords: tuple[float, ...]

    def __post_init__(self):
        if len(self.coords) != self.chart.dim:
            raise DimensionError(f"expected {self.chart.dim} coordinates, got {len(self.coords)}")
        for name, (lo, hi), c in zip(self.chart.names, self.chart.bounds, self.coords):
            if not math.isfinite(c):
                raise EvaluationError(f"non-finite coordinate {name}={c}")
            if c < lo or c > hi:
                warnings.warn(f"{name}={c:g} outside nominal bounds [{lo:g}, {hi:g}]",
                              ChartBoundsWarning, stacklevel=3)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=float)

    def __getitem__(self, name: str) -> float:
        return self.coords[self.chart.index(name)]


def _point_coords(point, chart: ParameterChart) -> np.ndarray:
    if isinstance(point, ParameterPoint):
        if point.chart.names != chart.names:
            raise DimensionError(f"point on chart {point.chart.names} used with {chart.names}")
        return point.array
    coords = np.asarray(point, dtype=float).reshape(-1)
    if coords.size != chart.dim:
        raise DimensionError(f"expected {chart.dim} coordinates, got {coords.size}")
    return coords


@dataclass(frozen=True)
class StateFamily:
    """A smooth map from chart coordinates to unit state vectors.

    ``_states`` is the vectorized evaluator: (n, m) coordinates -> (n, N)
    complex amplitudes. ``_connection`` (optional) is the closed-form Berry
    connection, same batching convention. ``cap_pairs`` maps a swept loop
    coordinate to the coordinate that caps it for Stokes surface patches.
    """

    family_id: str
    dim: int
    chart: ParameterChart
    _states: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    _connection: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)
    cap_pairs: Mapping[str, str] = field(default_factory=dict)

    def states(self, coords) -> np.ndarray:
        """Evaluate on a batch of coordinate rows; returns (n, N) amplitudes."""
        coords = np.atleast_2d(np.asarray(coords, dtype=float))
        if coords.shape[1] != self.chart.dim:
            raise DimensionError(f"{self.family_id}: expected {self.chart.dim} coordinates, "
                                 f"got {coords.shape[1]}")
        out = np.asarray(self._states(coords), dtype=np.complex128)
        if out.shape != (coords.shape[0], self.dim):
            raise EvaluationError(f"{self.family_id}: evaluator returned shape {out.shape}, "
                                  f"expected {(coords.shape[0], self.dim)}")
        if not np.all(np.isfinite(out)):
            raise EvaluationError(f"{self.family_id}: non-finite amplitudes")
        return out

    def state(self, point) -> np.ndarray:
        """Evaluate at one point; returns an immutable length-N vector."""
        vec = self.states(_point_coords(point, self.chart)[None, :])[0]
        vec.setflags(write=False)
        return vec

    @property
    def has_analytic_connection(self) -> bool:
        return self._connection is not None

    def connection_components(self, coords) -> np.ndarray:
        """Closed-form connection on a batch of rows; (n, m) real components."""
        if self._connection is None:
            raise UnsupportedFamilyError(
                f"{self.family_id} has no closed-form connection; use the finite-difference one")
        coords = np.atleast_2d(np.asarray(coords, dtype=float))
        return np.asarray(self._connection(coords), dtype=float)

    @classmethod
    def from_pointwise(cls, family_id: str, dim: int, chart: ParameterChart,
                       func: Callable[[ParameterPoint], Sequence[complex]],
                       connection=None, cap_pairs: Mapping[str, str] | None = None,
                       ) -> "StateFamily":
        """Wrap a per-point evaluator (slower: batches fall back to a Python loop)."""

        def batch(coords: np.ndarray) -> np.ndarray:
            out = np.empty((coords.shape[0], dim), dtype=np.complex128)
            for i, row in enumerate(coords):
                out[i] = np.asarray(func(ParameterPoint(chart, tuple(row))),
                                    dtype=np.complex128).reshape(-1)
            return out

        return cls(family_id, dim, chart, batch, connection, dict(cap_pairs or {}))


# ---------------------------------------------------------------------------
# built-in charts and families

SU2_CHART = ParameterChart(
    names=("theta", "phi"),
    bounds=((0.0, math.pi), (0.0, TAU)),
    periods=(None, TAU),
)

SU3_CHART = ParameterChart(
    names=("theta", "phi", "g", "gamma"),
    bounds=((0.0, math.pi), (0.0, TAU), (0.0, math.pi / 2), (0.0, TAU)),
    periods=(None, TAU, None, TAU),
)


def _su2_spin_half_states(coords: np.ndarray) -> np.ndarray:
    th, ph = coords[:, 0], coords[:, 1]
    out = np.empty((coords.shape[0], 2), dtype=np.complex128)
    out[:, 0] = np.cos(th / 2) * np.exp(-1j * ph)
    out[:, 1] = np.sin(th / 2)
    return out


def _su2_spin_half_connection(coords: np.ndarray) -> np.ndarray:
    th = coords[:, 0]
    out = np.zeros((coords.shape[0], 2), dtype=float)
    out[:, 1] = np.cos(th / 2) ** 2
    return out


def _su2_spin1_states(coords: np.ndarray) -> np.ndarray:
    th, ph = coords[:, 0], coords[:, 1]
    eip = np.exp(1j * ph)
    out = np.empty((coords.shape[0], 3), dtype=np.complex128)
    out[:, 0] = eip * np.sin(th / 2) ** 2
    out[:, 1] = np.sin(th) / _SQRT2
    out[:, 2] = np.conj(eip) * np.cos(th / 2) ** 2
    return out


def _su2_spin1_connection(coords: np.ndarray) -> np.ndarray:
    th = coords[:, 0]
    out = np.zeros((coords.shape[0], 2), dtype=float)
    out[:, 1] = np.cos(th)
    return out


def _su3_spin1_states(coords: np.ndarray) -> np.ndarray:
    th, ph, g, ga = coords[:, 0], coords[:, 1], coords[:, 2], coords[:, 3]
    # u, v are the two interfering weights; at g = gamma = 0 they reduce to 1, 0
    # and the amplitudes below become exactly the su2-spin-1 expressions.
    u = np.exp(-1j * ga) * np.cos(g)
    v = np.exp(1j * ga) * np.sin(g)
    a = np.sin(th / 2) ** 2
    b = np.cos(th / 2) ** 2
    eip = np.exp(1j * ph)
    out = np.empty((coords.shape[0], 3), dtype=np.complex128)
    out[:, 0] = eip * (a * u - b * v)
    out[:, 1] = (np.sin(th) / _SQRT2) * (u + v)
    out[:, 2] = np.conj(eip) * (b * u - a * v)
    return out


def _su3_spin1_connection(coords: np.ndarray) -> np.ndarray:
    th, g = coords[:, 0], coords[:, 2]
    out = np.zeros((coords.shape[0], 4), dtype=float)
    cos2g = np.cos(2 * g)
    out[:, 1] = np.cos(th) * cos2g
    out[:, 3] = cos2g
    return out


SU2_SPIN_HALF = StateFamily("su2-spin-half", 2, SU2_CHART,
                            _su2_spin_half_states, _su2_spin_half_connection,
                            cap_pairs={"phi": "theta"})
SU2_SPIN_1 = StateFamily("su2-spin-1", 3, SU2_CHART,
                         _su2_spin1_states, _su2_spin1_connection,
                         cap_pairs={"phi": "theta"})
SU3_SPIN_1 = StateFamily("su3-spin-1", 3, SU3_CHART,
                         _su3_spin1_states, _su3_spin1_connection,
                         cap_pairs={"gamma": "g"})

FAMILIES: dict[str, StateFamily] = {
    f.family_id: f for f in (SU2_SPIN_HALF, SU2_SPIN_1, SU3_SPIN_1)
}

FAMILY_IDS = tuple(FAMILIES)


def get_family(family_id: str) -> StateFamily:
    try:
        return FAMILIES[family_id]
    except KeyError:
        raise UnsupportedFamilyError(
            f"unknown family {family_id!r}; known: {', '.join(FAMILY_IDS)}") from None


def su2_spin_half_state(point) -> np.ndarray:
    """Spin-1/2 state (cos(theta/2) e^{-i phi}, sin(theta/2))."""
    return SU2_SPIN_HALF.state(point)


def su2_spin1_state(point) -> np.ndarray:
    """Spin-1 state (e^{i phi} sin^2(theta/2), sin(theta)/sqrt2, e^{-i phi} cos^2(theta/2))."""
    return SU2_SPIN_1.state(point)


def su3_spin1_state(point) -> np.ndarray:
    """Three-component state on (theta, phi, g, gamma); su2-spin-1 at g = gamma = 0."""
    return SU3_SPIN_1.state(point)


def analytic_connection(family: StateFamily, point):
    """Closed-form Berry connection of a built-in family at one point.

    Raises UnsupportedFamilyError for families without a closed form.
    """
    from .geometry import ConnectionCovector  # local import: geometry owns the type

    coords = _point_coords(point, family.chart)
    comps = family.connection_components(coords[None, :])[0]
    return ConnectionCovector(family.chart, comps, np.zeros_like(comps))
