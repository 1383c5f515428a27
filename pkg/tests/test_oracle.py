import math

import numpy as np
import pytest

from berryphase import (AdiabaticityLostError, DimensionError, EvaluationError,
                        HamiltonianFamily, Schedule, StepSizeError,
                        adiabatic_phase_report, circle_loop, constant_loop,
                        default_steps, evolve, extract_phases, get_family,
                        line_integral_phase, mod_2pi_deviation, norm,
                        projector_hamiltonian)
from berryphase.families import SU2_CHART
from conftest import sample_coords


@pytest.fixture(scope="module")
def spin_half_sweep():
    """Shared T-sweep of the spin-1/2 equator loop (the expensive fixture)."""
    family = get_family("su2-spin-half")
    loop = circle_loop(SU2_CHART, "phi", fixed={"theta": math.pi / 2})
    target = line_integral_phase(family, loop)
    reports = {t: adiabatic_phase_report(family, loop, t) for t in (500.0, 1000.0, 2000.0)}
    return loop, target, reports


# ---------------------------------------------------------------------------
# projector Hamiltonian

def test_projector_at_north_pole_is_diagonal():
    family = get_family("su2-spin-half")
    ham = projector_hamiltonian(family)
    np.testing.assert_allclose(ham.matrix([0.0, 0.0]), np.diag([-1.0, 0.0]), atol=1e-15)
    assert ham.energy == -1.0


def test_projector_eigen_relation():
    for family_id in ("su2-spin-half", "su2-spin-1", "su3-spin-1"):
        family = get_family(family_id)
        ham = projector_hamiltonian(family)
        coords = sample_coords(family.chart, 1000, seed=43)
        phi = family.states(coords)
        h_phi = np.einsum("nij,nj->ni", ham.matrices(coords), phi)
        assert np.max(np.abs(h_phi - ham.energy * phi)) <= 1e-12


def test_projector_trace_is_minus_one():
    family = get_family("su2-spin-1")
    ham = projector_hamiltonian(family)
    mats = ham.matrices(sample_coords(family.chart, 50, seed=47))
    np.testing.assert_allclose(np.trace(mats, axis1=1, axis2=2), -1.0, atol=1e-12)


def test_hamiltonian_rejects_non_hermitian():
    bad = HamiltonianFamily.constant(np.array([[0.0, 1.0], [0.0, 0.0]]), energy=0.0)
    with pytest.raises(EvaluationError):
        bad.matrices(np.zeros((1, 2)))


# ---------------------------------------------------------------------------
# evolution basics

def test_stationary_state_picks_up_pure_dynamical_phase():
    ham = HamiltonianFamily.constant(np.diag([-1.0, 0.0]), energy=-1.0)
    schedule = Schedule(constant_loop(SU2_CHART, (0.0, 0.0)), math.pi, 2000)
    psi = evolve(ham, schedule, np.array([1.0, 0.0]))
    np.testing.assert_allclose(psi, [-1.0, 0.0], atol=1e-10)


def test_zero_hamiltonian_leaves_state_alone():
    ham = HamiltonianFamily.constant(np.zeros((2, 2)), energy=0.0)
    schedule = Schedule(constant_loop(SU2_CHART, (0.3, 0.4)), 5.0, 5000)
    psi0 = np.array([1.0, 0.0], dtype=complex)
    psi = evolve(ham, schedule, psi0)
    assert np.array_equal(psi, psi0)


def test_unitarity_without_renormalization():
    family = get_family("su2-spin-half")
    loop = circle_loop(SU2_CHART, "phi", fixed={"theta": math.pi / 2})
    schedule = Schedule(loop, 200.0, default_steps(200.0))
    psi = evolve(projector_hamiltonian(family), schedule, family.state(loop.at(0.0)),
                 renormalize=False)
    assert abs(norm(psi) - 1.0) <= 1e-8


def test_step_size_error_on_coarse_grid():
    family = get_family("su2-spin-half")
    loop = circle_loop(SU2_CHART, "phi", fixed={"theta": math.pi / 2})
    schedule = Schedule(loop, 300.0, 1000)  # dt = 0.3: per-step drift > 1e-6
    with pytest.raises(StepSizeError):
        evolve(projector_hamiltonian(family), schedule, family.state(loop.at(0.0)))


def test_evolve_input_validation():
    ham = HamiltonianFamily.constant(np.diag([-1.0, 0.0]), energy=-1.0)
    schedule = Schedule(constant_loop(SU2_CHART, (0.0, 0.0)), 1.0, 1000)
    with pytest.raises(DimensionError):
        evolve(ham, schedule, np.array([1.0, 0.0, 0.0]))
    with pytest.raises(ValueError):
        evolve(ham, schedule, np.array([1.0, 1.0]))  # not normalized


def test_schedule_validation():
    loop = constant_loop(SU2_CHART, (0.0, 0.0))
    with pytest.raises(ValueError):
        Schedule(loop, -1.0, 2000)
    with pytest.raises(ValueError):
        Schedule(loop, 1.0, 999)
    assert default_steps(2000.0) == 2_000_000
    assert default_steps(0.5) == 1000


# ---------------------------------------------------------------------------
# phase extraction

def test_extract_phases_stationary_case():
    ham = HamiltonianFamily.constant(np.diag([-1.0, 0.0]), energy=-1.0)
    schedule = Schedule(constant_loop(SU2_CHART, (0.0, 0.0)), 7.0, 7000)
    psi0 = np.array([1.0, 0.0], dtype=complex)
    psi = evolve(ham, schedule, psi0)
    report = extract_phases(psi, psi0, energy=-1.0, total_time=7.0)
    assert abs(report.geometric_phase) <= 1e-9
    assert report.residual_overlap_deficit <= 1e-12


def test_extract_phases_requires_overlap():
    with pytest.raises(AdiabaticityLostError):
        extract_phases(np.array([0.3, math.sqrt(1 - 0.09) * 1j]), np.array([1.0, 0.0]),
                       energy=-1.0, total_time=1.0)


def test_phase_report_split_is_consistent(spin_half_sweep):
    _, _, reports = spin_half_sweep
    report = reports[2000.0]
    gap = mod_2pi_deviation(report.geometric_phase,
                            report.total_phase - report.dynamical_phase)
    assert gap <= 1e-12


# ---------------------------------------------------------------------------
# adiabatic limit

def test_spin_half_oracle_reproduces_geometric_phase(spin_half_sweep):
    _, target, reports = spin_half_sweep
    mismatches = [mod_2pi_deviation(reports[t].geometric_phase, target.raw)
                  for t in (500.0, 1000.0, 2000.0)]
    assert mismatches[0] > mismatches[1] > mismatches[2]
    assert mismatches[2] <= 2e-2
    assert phases_close_to_minus_pi(reports[2000.0].geometric_phase)


def phases_close_to_minus_pi(angle):
    return mod_2pi_deviation(angle, -math.pi) <= 2e-2


def test_spin_half_oracle_stays_adiabatic(spin_half_sweep):
    _, _, reports = spin_half_sweep
    assert reports[2000.0].residual_overlap_deficit <= 1e-3


def test_spin1_oracle_matches_line_integral():
    family = get_family("su2-spin-1")
    loop = circle_loop(SU2_CHART, "phi", fixed={"theta": math.pi / 3})
    target = line_integral_phase(family, loop)
    report = adiabatic_phase_report(family, loop, 2000.0)
    assert mod_2pi_deviation(report.geometric_phase, target.raw) <= 2e-2
    assert mod_2pi_deviation(report.geometric_phase, -math.pi) <= 2e-2


def test_su3_oracle_matches_line_integral():
    family = get_family("su3-spin-1")
    loop = circle_loop(family.chart, "gamma",
                       fixed={"theta": 1.1, "phi": 0.7, "g": math.pi / 6})
    target = line_integral_phase(family, loop)
    report = adiabatic_phase_report(family, loop, 2000.0)
    assert mod_2pi_deviation(report.geometric_phase, target.raw) <= 2e-2
