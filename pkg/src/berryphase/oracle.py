"""Dynamical cross-check: Schrödinger evolution around a slowly traversed loop.

The equation integrated is i dpsi/dt = H(lambda(t/T)) psi (hbar = 1) with
classical fixed-step RK4 and per-step renormalization. For the rank-1
projector Hamiltonian H = -|phi><phi| every built-in coherent state is an
exact eigenstate with eigenvalue -1 and spectral gap 1, so for large total
time T the evolved state acquires

    total phase  =  geometric loop phase  +  (-E T)   (mod 2*pi)

and ``extract_phases`` splits the two parts. The adiabatic error decays like
1/T; T = 2000 with the default step density (|H| dt <= 1e-3) reproduces the
geometric methods to a few times 1e-3.

The RK4 recursion itself is numba-jitted (it is the only hot loop in the
package); Hamiltonian matrices are evaluated in vectorized chunks ahead of
each kernel call.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import (AdiabaticityLostError, DimensionError, EvaluationError,
                     StepSizeError)
from .families import StateFamily
from .loops import Loop, canonical_angle
from .states import inner_product, norm

HERMITICITY_TOL = 1e-12
DRIFT_LIMIT = 1e-6
MIN_STEPS = 1000
_CHUNK_STEPS = 32768


@dataclass(frozen=True)
class HamiltonianFamily:
    """Chart coordinates -> N x N Hermitian matrix, with one tracked eigenvalue.

    ``energy`` is the tracked (nondegenerate) eigenvalue, constant along the
    loops used here. ``_matrices`` is the vectorized evaluator: (n, m)
    coordinate rows -> (n, N, N) matrices.
    """

    dim: int
    energy: float
    _matrices: Callable[[np.ndarray], np.ndarray] = field(repr=False)

    def matrices(self, coords) -> np.ndarray:
        coords = np.atleast_2d(np.asarray(coords, dtype=float))
        out = np.asarray(self._matrices(coords), dtype=np.complex128)
        if out.shape != (coords.shape[0], self.dim, self.dim):
            raise EvaluationError(f"Hamiltonian evaluator returned shape {out.shape}, "
                                  f"expected {(coords.shape[0], self.dim, self.dim)}")
        if not np.all(np.isfinite(out)):
            raise EvaluationError("Hamiltonian contains non-finite entries")
        defect = float(np.max(np.abs(out - np.conj(np.swapaxes(out, 1, 2)))))
        if defect > HERMITICITY_TOL:
            raise EvaluationError(f"Hamiltonian not Hermitian: defect {defect:.2e}")
        return out

    def matrix(self, coords) -> np.ndarray:
        return self.matrices(np.asarray(coords, dtype=float).reshape(1, -1))[0]

    @classmethod
    def constant(cls, matrix, energy: float) -> "HamiltonianFamily":
        mat = np.asarray(matrix, dtype=np.complex128)

        def batch(coords: np.ndarray) -> np.ndarray:
            return np.broadcast_to(mat, (coords.shape[0],) + mat.shape).copy()

        return cls(mat.shape[0], float(energy), batch)


def projector_hamiltonian(family: StateFamily) -> HamiltonianFamily:
    """H(lambda) = -|phi(lambda)><phi(lambda)|: tracked eigenvalue -1, gap 1.

    The remaining eigenvalue 0 is (N-1)-fold degenerate, which is harmless:
    only the tracked level needs to be nondegenerate.
    """

    def batch(coords: np.ndarray) -> np.ndarray:
        phi = family.states(coords)
        return -np.einsum("ni,nj->nij", phi, np.conj(phi))

    return HamiltonianFamily(family.dim, -1.0, batch)


@dataclass(frozen=True)
class Schedule:
    """One traversal of ``loop`` in physical time T: lambda(t) = loop(t / T)."""

    loop: Loop
    total_time: float
    steps: int

    def __post_init__(self):
        if not (self.total_time > 0):
            raise ValueError(f"total time must be positive, got {self.total_time}")
        if self.steps < MIN_STEPS:
            raise ValueError(f"steps must be >= {MIN_STEPS}, got {self.steps}")


def default_steps(total_time: float) -> int:
    """Step count keeping |H| dt <= 1e-3 for the unit-gap projector Hamiltonian."""
    return max(MIN_STEPS, int(math.ceil(1000.0 * total_time)))


@dataclass(frozen=True)
class PhaseReport:
    """Total/dynamical/geometric split of the phase gathered around one loop."""

    total_phase: float
    dynamical_phase: float
    geometric_phase: float
    residual_overlap_deficit: float


@numba.njit(cache=True)
def _rk4_chunk(hams, psi, dt, renormalize):  # pragma: no cover - jitted
    # hams holds H at the 2*s+1 half-step grid points of this chunk.
    nsteps = (hams.shape[0] - 1) // 2
    n = psi.shape[0]
    k1 = np.empty(n, np.complex128)
    k2 = np.empty(n, np.complex128)
    k3 = np.empty(n, np.complex128)
    k4 = np.empty(n, np.complex128)
    tmp = np.empty(n, np.complex128)
    out = psi.copy()
    drift_max = 0.0
    prev = 1.0 if renormalize else np.sqrt((out.real ** 2 + out.imag ** 2).sum())
    for j in range(nsteps):
        h1 = hams[2 * j]
        h2 = hams[2 * j + 1]
        h3 = hams[2 * j + 2]
        for a in range(n):
            acc = 0.0 + 0.0j
            for b in range(n):
                acc += h1[a, b] * out[b]
            k1[a] = -1j * acc
        for a in range(n):
            tmp[a] = out[a] + 0.5 * dt * k1[a]
        for a in range(n):
            acc = 0.0 + 0.0j
            for b in range(n):
                acc += h2[a, b] * tmp[b]
            k2[a] = -1j * acc
        for a in range(n):
            tmp[a] = out[a] + 0.5 * dt * k2[a]
        for a in range(n):
            acc = 0.0 + 0.0j
            for b in range(n):
                acc += h2[a, b] * tmp[b]
            k3[a] = -1j * acc
        for a in range(n):
            tmp[a] = out[a] + dt * k3[a]
        for a in range(n):
            acc = 0.0 + 0.0j
            for b in range(n):
                acc += h3[a, b] * tmp[b]
            k4[a] = -1j * acc
        nrm2 = 0.0
        for a in range(n):
            out[a] = out[a] + (dt / 6.0) * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a])
            nrm2 += out[a].real ** 2 + out[a].imag ** 2
        nrm = np.sqrt(nrm2)
        drift = abs(nrm - prev)
        if drift > drift_max:
            drift_max = drift
        if renormalize:
            for a in range(n):
                out[a] = out[a] / nrm
        else:
            prev = nrm
    return out, drift_max


def evolve(hamiltonian: HamiltonianFamily, schedule: Schedule, psi0,
           renormalize: bool = True, drift_limit: float = DRIFT_LIMIT) -> np.ndarray:
    """Integrate i dpsi/dt = H(lambda(t/T)) psi from psi0 over one traversal.

    Fixed-step RK4 with step T/steps; the state is renormalized after every
    step (pass renormalize=False to watch the raw norm drift). If the norm
    moves by more than ``drift_limit`` within a single step the step size is
    too coarse and StepSizeError asks for more steps.
    """
    psi = np.array(psi0, dtype=np.complex128).reshape(-1)
    if psi.size != hamiltonian.dim:
        raise DimensionError(f"psi0 has {psi.size} components, "
                             f"Hamiltonian dimension is {hamiltonian.dim}")
    if abs(norm(psi) - 1.0) > 1e-9:
        raise ValueError("psi0 must be normalized")
    steps = schedule.steps
    dt = schedule.total_time / steps
    done = 0
    while done < steps:
        todo = min(_CHUNK_STEPS, steps - done)
        # half-step grid s = t/T of this chunk, endpoints shared between chunks
        s = (np.arange(2 * todo + 1) + 2 * done) / (2.0 * steps)
        hams = hamiltonian.matrices(schedule.loop.sample(s))
        psi, drift = _rk4_chunk(hams, psi, dt, renormalize)
        if drift > drift_limit:
            raise StepSizeError(f"norm drift {drift:.2e} per step exceeds {drift_limit:.0e}; "
                                f"raise steps above {steps}")
        done += todo
    psi.setflags(write=False)
    return psi


def extract_phases(psi_final, phi_ref, energy: float, total_time: float,
                   min_overlap: float = 0.5) -> PhaseReport:
    """Split arg<phi_ref|psi(T)> into dynamical (-E T) and geometric parts."""
    overlap = inner_product(phi_ref, psi_final)
    magnitude = abs(overlap)
    if magnitude <= min_overlap:
        raise AdiabaticityLostError(f"|<phi_ref|psi(T)>| = {magnitude:.3f} <= {min_overlap}; "
                                    f"evolution left the tracked eigenstate")
    total = math.atan2(overlap.imag, overlap.real)
    dynamical = canonical_angle(-energy * total_time)
    geometric = canonical_angle(total - dynamical)
    return PhaseReport(total, dynamical, geometric, max(0.0, 1.0 - magnitude))


def adiabatic_phase_report(family: StateFamily, loop: Loop, total_time: float,
                           steps: int | None = None) -> PhaseReport:
    """Evolve the projector Hamiltonian around ``loop`` and split the phase."""
    hamiltonian = projector_hamiltonian(family)
    schedule = Schedule(loop, total_time, steps or default_steps(total_time))
    psi0 = family.state(loop.at(0.0))
    psi_final = evolve(hamiltonian, schedule, psi0)
    return extract_phases(psi_final, psi0, hamiltonian.energy, total_time)
