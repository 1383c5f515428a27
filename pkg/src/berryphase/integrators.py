"""Loop and surface Berry-phase integrators.

Three independent routes to the same physical phase:

* ``line_integral_phase``    — trapezoid accumulation of A . dlambda around
  the loop, using the closed-form connection when the family has one, the
  finite-difference connection otherwise;
* ``overlap_product_phase``  — Pancharatnam product of successive state
  overlaps, gauge-invariant by construction (any per-sample phase
  redefinition cancels telescopically);
* ``surface_integral_phase`` — midpoint accumulation of the curvature over a
  rectangle patch (Stokes route).

Raw values of different routes may differ by whole turns (the section can
wind around the loop); compare with ``phases_equal_mod_2pi``. Accumulation
order is fixed (ascending sample index) so repeated runs are bit-reproducible.
"""

from __future__ import annotations

import cmath

import numpy as np

from .errors import PathTooCoarseError
from .families import StateFamily
from .geometry import (CONNECTION_STEP, CURVATURE_STEP, connection_batch,
                       curvature_component_batch)
from .loops import Loop, PhaseValue, SurfacePatch

DEFAULT_LOOP_SAMPLES = 2048
DEFAULT_GRID_STEPS = 256
MIN_LOOP_SAMPLES = 16
MIN_GRID_STEPS = 8
OVERLAP_FLOOR = 1e-10


def _as_radians(x) -> float:
    return x.raw if isinstance(x, PhaseValue) else float(x)


def mod_2pi_deviation(a, b) -> float:
    """|e^{i(a-b)} - 1|: the phase-factor distance of two angles."""
    return abs(cmath.exp(1j * (_as_radians(a) - _as_radians(b))) - 1.0)


def phases_equal_mod_2pi(a, b, tol: float) -> bool:
    """True iff a and b agree as phase factors: |e^{i(a-b)} - 1| <= tol."""
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    return mod_2pi_deviation(a, b) <= tol


def line_integral_phase(family: StateFamily, loop: Loop,
                        n_samples: int = DEFAULT_LOOP_SAMPLES,
                        connection: str = "auto",
                        h: float = CONNECTION_STEP) -> PhaseValue:
    """Loop integral of the Berry connection, A . dlambda, by trapezoid sums.

    ``connection`` selects the integrand source: "analytic" (closed form,
    errors if the family has none), "fd" (finite differences), or "auto"
    (closed form when available).
    """
    if n_samples < MIN_LOOP_SAMPLES:
        raise ValueError(f"n_samples must be >= {MIN_LOOP_SAMPLES}, got {n_samples}")
    if connection not in ("auto", "analytic", "fd"):
        raise ValueError(f"connection must be auto/analytic/fd, got {connection!r}")
    ts = np.linspace(0.0, 1.0, n_samples + 1)
    coords = loop.sample(ts)
    if connection == "analytic" or (connection == "auto" and family.has_analytic_connection):
        comps = family.connection_components(coords)
    else:
        comps, _ = connection_batch(family, coords, h)
    dlam = np.diff(coords, axis=0)
    segments = np.sum(0.5 * (comps[:-1] + comps[1:]) * dlam, axis=1)
    return PhaseValue(float(np.sum(segments)))


def overlap_product_phase(family: StateFamily, loop: Loop,
                          n_samples: int = DEFAULT_LOOP_SAMPLES) -> PhaseValue:
    """Discrete gauge-invariant phase -arg prod_j <phi_j | phi_{j+1}> (wrapped).

    The raw value accumulates the per-link angles, so it also tracks the
    total winding; its canonical representative equals -arg of the product.
    """
    if n_samples < MIN_LOOP_SAMPLES:
        raise ValueError(f"n_samples must be >= {MIN_LOOP_SAMPLES}, got {n_samples}")
    ts = np.arange(n_samples) / n_samples
    states = family.states(loop.sample(ts))
    nxt = np.roll(states, -1, axis=0)            # t_n wraps to t_0
    overlaps = np.sum(np.conj(states) * nxt, axis=1)
    smallest = float(np.min(np.abs(overlaps)))
    if smallest < OVERLAP_FLOOR:
        raise PathTooCoarseError(f"{loop.description}: consecutive overlap magnitude "
                                 f"{smallest:.2e} < {OVERLAP_FLOOR:.0e}; raise n_samples")
    return PhaseValue(-float(np.sum(np.angle(overlaps))))


def surface_integral_phase(family: StateFamily, patch: SurfacePatch,
                           n1: int = DEFAULT_GRID_STEPS, n2: int = DEFAULT_GRID_STEPS,
                           h: float = CURVATURE_STEP) -> PhaseValue:
    """Midpoint-rule integral of F over the patch's rectangle (Stokes route)."""
    if n1 < MIN_GRID_STEPS or n2 < MIN_GRID_STEPS:
        raise ValueError(f"grid sizes must be >= {MIN_GRID_STEPS}, got {n1}x{n2}")
    coords, d1, d2 = patch.midpoint_grid(n1, n2)
    k = family.chart.index(patch.coord_pair[0])
    l = family.chart.index(patch.coord_pair[1])
    f_vals = curvature_component_batch(family, coords, k, l, h)
    return PhaseValue(float(np.sum(f_vals)) * d1 * d2)


def solid_angle(loop: Loop, n_samples: int = DEFAULT_LOOP_SAMPLES) -> float:
    """Solid angle swept by a (theta, phi) loop: integral of (1 - cos theta) dphi."""
    i_th = loop.chart.index("theta")
    i_ph = loop.chart.index("phi")
    ts = np.linspace(0.0, 1.0, n_samples + 1)
    coords = loop.sample(ts)
    f = 1.0 - np.cos(coords[:, i_th])
    dphi = np.diff(coords[:, i_ph])
    return float(np.sum(0.5 * (f[:-1] + f[1:]) * dphi))
