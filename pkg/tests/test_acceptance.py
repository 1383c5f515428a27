"""Acceptance suite: every criterion at its stated tolerance, one line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the PASS/FAIL lines.
"""

import math
import time

import numpy as np
import pytest

from berryphase import (StateFamily, SurfacePatch, circle_loop,
                        adiabatic_phase_report, connection_batch,
                        connection_reality_defect, curvature_component_batch,
                        get_family, line_integral_phase, mod_2pi_deviation,
                        overlap_product_phase, solid_angle,
                        surface_integral_phase)
from berryphase.families import SU2_CHART, SU3_CHART
from conftest import sample_coords

TAU = 2 * math.pi
THETA_SET = (math.pi / 6, math.pi / 4, math.pi / 3, math.pi / 2, 2 * math.pi / 3)
G_SET = (math.pi / 8, math.pi / 6, math.pi / 4)
SEED = 20260811


class Criterion:
    """Collects named checks, prints one PASS/FAIL line, then asserts."""

    def __init__(self, number, label, runtime_bound):
        self.number = number
        self.label = label
        self.runtime_bound = runtime_bound
        self.checks = []
        self.began = time.perf_counter()

    def check(self, description, value, bound):
        self.checks.append((description, float(value), float(bound), value <= bound))

    def check_that(self, description, ok):
        self.checks.append((description, None, None, bool(ok)))

    def conclude(self):
        elapsed = time.perf_counter() - self.began
        in_time = elapsed < self.runtime_bound
        ok = all(c[3] for c in self.checks) and in_time
        details = "; ".join(
            f"{desc} = {value:.3e} (tol {bound:g})" if value is not None else desc
            for desc, value, bound, _ in self.checks)
        print(f"{'PASS' if ok else 'FAIL'} criterion {self.number} ({self.label}): "
              f"{details} [{elapsed:.2f}s < {self.runtime_bound:g}s]")
        for desc, value, bound, good in self.checks:
            assert good, f"criterion {self.number}: {desc} value={value} bound={bound}"
        assert in_time, f"criterion {self.number}: took {elapsed:.1f}s"


def phi_circle(chart, theta):
    return circle_loop(chart, "phi", fixed={"theta": theta})


def test_criterion_1_spin_half_connection():
    crit = Criterion(1, "spin-1/2 connection", 1.0)
    family = get_family("su2-spin-half")
    pts = sample_coords(family.chart, 20, SEED)
    comps, _ = connection_batch(family, pts, h=1e-5)
    crit.check("max |A_phi - cos^2(theta/2)|",
               np.max(np.abs(comps[:, 1] - np.cos(pts[:, 0] / 2) ** 2)), 5e-9)
    crit.check("max |A_theta|", np.max(np.abs(comps[:, 0])), 5e-9)
    crit.conclude()


def test_criterion_2_spin_half_curvature():
    crit = Criterion(2, "spin-1/2 curvature", 1.0)
    family = get_family("su2-spin-half")
    pts = sample_coords(family.chart, 20, SEED)
    f_vals = curvature_component_batch(family, pts, 0, 1, h=1e-4)
    crit.check("max |F_theta_phi + sin(theta)/2|",
               np.max(np.abs(f_vals + 0.5 * np.sin(pts[:, 0]))), 1e-6)
    crit.conclude()


def test_criterion_3_spin_half_loop_phases():
    crit = Criterion(3, "spin-1/2 loop phase = -Omega/2", 10.0)
    family = get_family("su2-spin-half")
    for theta in THETA_SET:
        loop = phi_circle(SU2_CHART, theta)
        expected = -math.pi * (1 - math.cos(theta))
        cap = SurfacePatch(SU2_CHART, ("theta", "phi"), (0.0, theta, 0.0, TAU), {})
        for name, phase in (("line", line_integral_phase(family, loop)),
                            ("overlap", overlap_product_phase(family, loop)),
                            ("surface", surface_integral_phase(family, cap))):
            crit.check(f"{name}@theta={theta:.3f}",
                       mod_2pi_deviation(phase.raw, expected), 1e-4)
    crit.conclude()


def test_criterion_4_spin1_connection_curvature_phases():
    crit = Criterion(4, "spin-1 A, F, loop phase = -Omega", 10.0)
    family = get_family("su2-spin-1")
    pts = sample_coords(family.chart, 20, SEED)
    comps, _ = connection_batch(family, pts, h=1e-5)
    crit.check("max |A_phi - cos(theta)|",
               np.max(np.abs(comps[:, 1] - np.cos(pts[:, 0]))), 5e-9)
    crit.check("max |A_theta|", np.max(np.abs(comps[:, 0])), 5e-9)
    f_vals = curvature_component_batch(family, pts, 0, 1, h=1e-4)
    crit.check("max |F_theta_phi + sin(theta)|",
               np.max(np.abs(f_vals + np.sin(pts[:, 0]))), 1e-6)
    for theta in THETA_SET:
        loop = phi_circle(SU2_CHART, theta)
        expected = -TAU * (1 - math.cos(theta))
        cap = SurfacePatch(SU2_CHART, ("theta", "phi"), (0.0, theta, 0.0, TAU), {})
        for name, phase in (("line", line_integral_phase(family, loop)),
                            ("overlap", overlap_product_phase(family, loop)),
                            ("surface", surface_integral_phase(family, cap))):
            crit.check(f"{name}@theta={theta:.3f}",
                       mod_2pi_deviation(phase.raw, expected), 1e-4)
    crit.conclude()


def test_criterion_5_su3():
    crit = Criterion(5, "su3 normalization, connection, gamma loops", 20.0)
    family = get_family("su3-spin-1")
    norms = np.linalg.norm(family.states(sample_coords(family.chart, 10_000, SEED,
                                                       margin=0.0)), axis=1)
    crit.check("max |norm - 1| (10^4 points)", np.max(np.abs(norms - 1.0)), 1e-12)
    pts = sample_coords(family.chart, 20, SEED)
    comps, _ = connection_batch(family, pts, h=1e-5)
    crit.check("max |A_phi - cos(theta)cos(2g)|",
               np.max(np.abs(comps[:, 1] - np.cos(pts[:, 0]) * np.cos(2 * pts[:, 2]))), 5e-9)
    crit.check("max |A_gamma - cos(2g)|",
               np.max(np.abs(comps[:, 3] - np.cos(2 * pts[:, 2]))), 5e-9)
    fixed = {"theta": 1.1, "phi": 0.7}
    for g0 in G_SET:
        loop = circle_loop(SU3_CHART, "gamma", fixed={**fixed, "g": g0})
        phase = line_integral_phase(family, loop)
        crit.check(f"gamma-loop@g={g0:.3f} vs 2*pi*cos(2g)",
                   mod_2pi_deviation(phase.raw, TAU * math.cos(2 * g0)), 1e-4)
        patch = SurfacePatch(SU3_CHART, ("g", "gamma"), (0.0, g0, 0.0, TAU), fixed)
        sphase = surface_integral_phase(family, patch)
        crit.check(f"(g,gamma)-patch@g0={g0:.3f} vs -2*pi*(1-cos(2g0))",
                   mod_2pi_deviation(sphase.raw, -TAU * (1 - math.cos(2 * g0))), 1e-4)
    crit.conclude()


def test_criterion_6_su3_reduction():
    crit = Criterion(6, "su3 -> su2 reduction at g=gamma=0", 2.0)
    su3 = get_family("su3-spin-1")
    spin1 = get_family("su2-spin-1")
    thetas = np.linspace(0.0, math.pi, 50)
    phis = np.linspace(0.0, TAU, 50)
    mesh = np.stack([m.ravel() for m in np.meshgrid(thetas, phis, indexing="ij")], axis=1)
    su3_rows = np.column_stack([mesh, np.zeros((len(mesh), 2))])
    crit.check("max amplitude gap on 50x50 grid",
               np.max(np.abs(su3.states(su3_rows) - spin1.states(mesh))), 1e-15)
    for theta in THETA_SET:
        su3_loop = circle_loop(SU3_CHART, "phi",
                               fixed={"theta": theta, "g": 0.0, "gamma": 0.0})
        su2_loop = phi_circle(SU2_CHART, theta)
        gap_line = abs(line_integral_phase(su3, su3_loop, connection="fd").raw
                       - line_integral_phase(spin1, su2_loop, connection="fd").raw)
        crit.check(f"line-phase gap@theta={theta:.3f}", gap_line, 1e-9)
        gap_ovl = abs(overlap_product_phase(su3, su3_loop).raw
                      - overlap_product_phase(spin1, su2_loop).raw)
        crit.check(f"overlap-phase gap@theta={theta:.3f}", gap_ovl, 1e-9)
    crit.conclude()


def test_criterion_7_dynamical_oracle():
    crit = Criterion(7, "Schrödinger oracle vs line integral", 300.0)
    cases = (("su2-spin-half", math.pi / 2), ("su2-spin-1", math.pi / 3))
    for family_id, theta in cases:
        family = get_family(family_id)
        loop = phi_circle(SU2_CHART, theta)
        target = line_integral_phase(family, loop)
        mism = []
        for total_time in (500.0, 1000.0, 2000.0):
            report = adiabatic_phase_report(family, loop, total_time)
            mism.append(mod_2pi_deviation(report.geometric_phase, target.raw))
        crit.check(f"{family_id}: mismatch at T=2000", mism[2], 2e-2)
        crit.check_that(
            f"{family_id}: strictly decreasing "
            + "/".join(f"{m:.2e}" for m in mism),
            mism[0] > mism[1] > mism[2])
    crit.conclude()


def test_criterion_8_property_suite():
    crit = Criterion(8, "property suite", 30.0)

    # reality of the connection for every built-in family
    worst = 0.0
    for family_id in ("su2-spin-half", "su2-spin-1", "su3-spin-1"):
        family = get_family(family_id)
        for row in sample_coords(family.chart, 20, SEED):
            worst = max(worst, connection_reality_defect(family, row))
    crit.check("max reality defect", worst, 1e-9)

    # gauge-shift covariance of the connection, invariance of the curvature
    base = get_family("su2-spin-half")

    def shifted_batch(coords):
        return base.states(coords) * np.exp(1j * (0.3 * coords[:, 0]
                                                  + 0.7 * coords[:, 1]))[:, None]

    shifted = StateFamily("half-shifted", 2, SU2_CHART, shifted_batch)
    pts = sample_coords(SU2_CHART, 10, SEED)
    a_base, _ = connection_batch(base, pts)
    a_shift, _ = connection_batch(shifted, pts)
    crit.check("max |connection shift - (-0.3, -0.7)|",
               np.max(np.abs((a_shift - a_base) - np.array([-0.3, -0.7]))), 1e-8)
    crit.check("max curvature change under gauge shift",
               np.max(np.abs(curvature_component_batch(shifted, pts, 0, 1)
                             - curvature_component_batch(base, pts, 0, 1))), 1e-6)

    # loop phase is gauge-invariant mod 2*pi under a winding section change
    def winded_batch(coords):
        return base.states(coords) * np.exp(2j * coords[:, 1])[:, None]

    winded = StateFamily("half-winded", 2, SU2_CHART, winded_batch)
    loop = phi_circle(SU2_CHART, math.pi / 3)
    plain_line = line_integral_phase(base, loop, connection="fd")
    winded_line = line_integral_phase(winded, loop, connection="fd")
    crit.check("line-integral winding shift vs -2 turns",
               abs((winded_line.raw - plain_line.raw) + 2 * TAU), 1e-8)
    crit.check("line-integral mod-2pi gauge invariance",
               mod_2pi_deviation(winded_line.raw, plain_line.raw), 1e-9)

    # overlap product ignores per-sample phase randomization entirely
    def injected_batch(coords):
        rng = np.random.default_rng(SEED)
        return base.states(coords) * np.exp(1j * rng.uniform(0, TAU,
                                                             coords.shape[0]))[:, None]

    injected = StateFamily("half-injected", 2, SU2_CHART, injected_batch)
    crit.check("overlap invariance under phase injection",
               mod_2pi_deviation(overlap_product_phase(injected, loop).canonical,
                                 overlap_product_phase(base, loop).canonical), 1e-12)

    # orientation reversal negates phases mod 2*pi
    crit.check("line orientation reversal",
               mod_2pi_deviation(line_integral_phase(base, loop.reversed()).raw,
                                 -line_integral_phase(base, loop).raw), 1e-9)
    crit.check("overlap orientation reversal",
               mod_2pi_deviation(overlap_product_phase(base, loop.reversed()).canonical,
                                 -overlap_product_phase(base, loop).canonical), 1e-12)

    # time reparameterization t -> t^2 leaves phases unchanged
    def wavy_sampler(t):
        t = np.asarray(t, dtype=float)
        out = np.empty(t.shape + (2,))
        out[..., 0] = 0.9 + 0.2 * np.sin(TAU * t)
        out[..., 1] = TAU * t
        return out

    from berryphase import Loop
    wavy = Loop(SU2_CHART, wavy_sampler, description="wavy")
    warped = wavy.reparameterized(lambda t: t * t)
    crit.check("line reparameterization stability",
               abs(line_integral_phase(base, wavy, 4096).raw
                   - line_integral_phase(base, warped, 4096).raw), 1e-6)
    crit.check("overlap reparameterization stability",
               abs(overlap_product_phase(base, wavy, 4096).raw
                   - overlap_product_phase(base, warped, 4096).raw), 1e-6)
    crit.conclude()
