"""Numerical Berry connection and curvature for any state family.

The connection components are A_k = Re[ i <phi | d_k phi> ], evaluated with
central differences. For a normalized family the bracket is purely imaginary,
so taking the real part is exact; the imaginary residue is kept as a
diagnostic instead of being discarded silently. The curvature is the curl
F_kl = d_k A_l - d_l A_k, obtained by differencing the connection once more,
and is stored antisymmetrically (only k < l entries exist).

Batch variants operate on (n, m) coordinate arrays and are what the
integrators and the CLI tabulators call; the point-wise functions wrap them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .families import ParameterChart, StateFamily, _point_coords

CONNECTION_STEP = 1e-5   # central differences are O(h^2); trig formulas are smooth
CURVATURE_STEP = 1e-4    # second-level differencing: balance truncation vs rounding


@dataclass(frozen=True)
class ConnectionCovector:
    """Real connection components at one parameter point, plus Im diagnostics."""

    chart: ParameterChart
    components: np.ndarray
    imag_residues: np.ndarray

    def __post_init__(self):
        comps = np.asarray(self.components, dtype=float)
        resid = np.asarray(self.imag_residues, dtype=float)
        if comps.shape != (self.chart.dim,) or resid.shape != comps.shape:
            from .errors import DimensionError
            raise DimensionError(f"expected {self.chart.dim} components, got {comps.shape}")
        comps.setflags(write=False)
        resid.setflags(write=False)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "imag_residues", resid)

    def component(self, name: str) -> float:
        return float(self.components[self.chart.index(name)])

    @property
    def reality_defect(self) -> float:
        return float(np.max(np.abs(self.imag_residues)))


def _pair_index(m: int, k: int, l: int) -> int:
    # packed row-major index of the (k, l), k < l entry
    return k * (2 * m - k - 1) // 2 + (l - k - 1)


@dataclass(frozen=True)
class CurvatureForm:
    """Antisymmetric curvature at one point; only k < l components are stored."""

    chart: ParameterChart
    packed: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = self.chart.dim
        packed = np.asarray(self.packed, dtype=float)
        if packed.shape != (m * (m - 1) // 2,):
            from .errors import DimensionError
            raise DimensionError(f"expected {m * (m - 1) // 2} packed entries, got {packed.shape}")
        packed.setflags(write=False)
        object.__setattr__(self, "packed", packed)

    def component(self, k_name: str, l_name: str) -> float:
        k, l = self.chart.index(k_name), self.chart.index(l_name)
        if k == l:
            return 0.0
        if k < l:
            return float(self.packed[_pair_index(self.chart.dim, k, l)])
        return -float(self.packed[_pair_index(self.chart.dim, l, k)])

    def pairs(self):
        """Yield ((k_name, l_name), F_kl) over the stored k < l entries."""
        names = self.chart.names
        for k in range(self.chart.dim):
            for l in range(k + 1, self.chart.dim):
                yield (names[k], names[l]), float(self.packed[_pair_index(self.chart.dim, k, l)])


# ---------------------------------------------------------------------------
# batch layer

def connection_batch(family: StateFamily, coords, h: float = CONNECTION_STEP
                     ) -> tuple[np.ndarray, np.ndarray]:
    """All connection components on coordinate rows.

    Returns (A, residues): A[i, k] = Re[i <phi | d_k phi>] at row i by central
    differences with step h; residues[i, k] is the imaginary remainder of the
    same bracket (vanishes for normalized families).
    """
    if h <= 0:
        raise ValueError(f"step h must be positive, got {h}")
    coords = np.atleast_2d(np.asarray(coords, dtype=float))
    base = family.states(coords)
    m = family.chart.dim
    comps = np.empty((coords.shape[0], m), dtype=float)
    resid = np.empty_like(comps)
    for k in range(m):
        shift = np.zeros(m)
        shift[k] = h
        dphi = (family.states(coords + shift) - family.states(coords - shift)) / (2.0 * h)
        bracket = np.sum(np.conj(base) * dphi, axis=1)  # <phi | d_k phi>
        comps[:, k] = -bracket.imag                     # Re(i z) = -Im z
        resid[:, k] = bracket.real                      # Im(i z) =  Re z
    return comps, resid


def connection_component_batch(family: StateFamily, coords, k: int,
                               h: float = CONNECTION_STEP) -> np.ndarray:
    """Single connection component A_k on coordinate rows (used for curvature)."""
    if h <= 0:
        raise ValueError(f"step h must be positive, got {h}")
    coords = np.atleast_2d(np.asarray(coords, dtype=float))
    shift = np.zeros(family.chart.dim)
    shift[k] = h
    base = family.states(coords)
    dphi = (family.states(coords + shift) - family.states(coords - shift)) / (2.0 * h)
    return -np.sum(np.conj(base) * dphi, axis=1).imag


def curvature_component_batch(family: StateFamily, coords, k: int, l: int,
                              h: float = CURVATURE_STEP,
                              h_connection: float = CONNECTION_STEP) -> np.ndarray:
    """F_kl = d_k A_l - d_l A_k on coordinate rows, by differencing the FD connection."""
    if h <= 0:
        raise ValueError(f"step h must be positive, got {h}")
    coords = np.atleast_2d(np.asarray(coords, dtype=float))
    m = family.chart.dim
    ek = np.zeros(m)
    ek[k] = h
    el = np.zeros(m)
    el[l] = h
    dAl = (connection_component_batch(family, coords + ek, l, h_connection)
           - connection_component_batch(family, coords - ek, l, h_connection)) / (2.0 * h)
    dAk = (connection_component_batch(family, coords + el, k, h_connection)
           - connection_component_batch(family, coords - el, k, h_connection)) / (2.0 * h)
    return dAl - dAk


# ---------------------------------------------------------------------------
# point-wise operations

def berry_connection_fd(family: StateFamily, point, h: float = CONNECTION_STEP
                        ) -> ConnectionCovector:
    """Finite-difference Berry connection at one parameter point."""
    coords = _point_coords(point, family.chart)
    comps, resid = connection_batch(family, coords[None, :], h)
    return ConnectionCovector(family.chart, comps[0], resid[0])


def connection_reality_defect(family: StateFamily, point, h: float = CONNECTION_STEP) -> float:
    """max_k |Im(i <phi|d_k phi>)|; zero for exactly normalized families."""
    coords = _point_coords(point, family.chart)
    _, resid = connection_batch(family, coords[None, :], h)
    return float(np.max(np.abs(resid[0])))


def berry_curvature_fd(family: StateFamily, point, h: float = CURVATURE_STEP,
                       h_connection: float = CONNECTION_STEP) -> CurvatureForm:
    """Finite-difference Berry curvature (all k < l components) at one point."""
    coords = _point_coords(point, family.chart)[None, :]
    m = family.chart.dim
    packed = np.empty(m * (m - 1) // 2, dtype=float)
    for k in range(m):
        for l in range(k + 1, m):
            packed[_pair_index(m, k, l)] = curvature_component_batch(
                family, coords, k, l, h, h_connection)[0]
    return CurvatureForm(family.chart, packed)
