"""Berry phases of spin coherent states.

Four independent routes to the geometric phase of a loop in parameter space:
the connection line integral, the curvature surface integral (Stokes), the
gauge-invariant Pancharatnam overlap product, and direct Schrödinger
evolution of a projector Hamiltonian around the loop. Built-in families:
``su2-spin-half``, ``su2-spin-1``, ``su3-spin-1``.
"""

from .errors import (AdiabaticityLostError, BerryPhaseError, ClosureError,
                     ConfigError, DimensionError, EvaluationError,
                     PathTooCoarseError, StepSizeError, UnsupportedFamilyError)
from .families import (FAMILIES, FAMILY_IDS, SU2_CHART, SU2_SPIN_1,
                       SU2_SPIN_HALF, SU3_CHART, SU3_SPIN_1,
                       ChartBoundsWarning, ParameterChart, ParameterPoint,
                       StateFamily, analytic_connection, get_family,
                       su2_spin1_state, su2_spin_half_state, su3_spin1_state)
from .geometry import (CONNECTION_STEP, CURVATURE_STEP, ConnectionCovector,
                       CurvatureForm, berry_connection_fd, berry_curvature_fd,
                       connection_batch, connection_reality_defect,
                       curvature_component_batch)
from .integrators import (DEFAULT_GRID_STEPS, DEFAULT_LOOP_SAMPLES,
                          line_integral_phase, mod_2pi_deviation,
                          overlap_product_phase, phases_equal_mod_2pi,
                          solid_angle, surface_integral_phase)
from .loops import (Loop, PhaseValue, SurfacePatch, canonical_angle,
                    circle_loop, constant_loop, loop_from_csv,
                    loop_from_samples)
from .oracle import (HamiltonianFamily, PhaseReport, Schedule,
                     adiabatic_phase_report, default_steps, evolve,
                     extract_phases, projector_hamiltonian)
from .states import inner_product, is_normalized, norm, state_vector

__version__ = "0.1.0"

__all__ = [
    "AdiabaticityLostError", "BerryPhaseError", "ClosureError", "ConfigError",
    "DimensionError", "EvaluationError", "PathTooCoarseError", "StepSizeError",
    "UnsupportedFamilyError",
    "FAMILIES", "FAMILY_IDS", "SU2_CHART", "SU2_SPIN_1", "SU2_SPIN_HALF",
    "SU3_CHART", "SU3_SPIN_1", "ChartBoundsWarning", "ParameterChart",
    "ParameterPoint", "StateFamily", "analytic_connection", "get_family",
    "su2_spin1_state", "su2_spin_half_state", "su3_spin1_state",
    "CONNECTION_STEP", "CURVATURE_STEP", "ConnectionCovector", "CurvatureForm",
    "berry_connection_fd", "berry_curvature_fd", "connection_batch",
    "connection_reality_defect", "curvature_component_batch",
    "DEFAULT_GRID_STEPS", "DEFAULT_LOOP_SAMPLES", "line_integral_phase",
    "mod_2pi_deviation", "overlap_product_phase", "phases_equal_mod_2pi",
    "solid_angle", "surface_integral_phase",
    "Loop", "PhaseValue", "SurfacePatch", "canonical_angle", "circle_loop",
    "constant_loop", "loop_from_csv", "loop_from_samples",
    "HamiltonianFamily", "PhaseReport", "Schedule", "adiabatic_phase_report",
    "default_steps", "evolve", "extract_phases", "projector_hamiltonian",
    "inner_product", "is_normalized", "norm", "state_vector",
    "__version__",
]
