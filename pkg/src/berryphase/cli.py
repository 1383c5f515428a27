"""Command-line front end.

Subcommands
-----------
phase       One experiment: a family, a loop, one method (or ``all`` four).
sweep       Repeat an experiment while stepping one held-fixed coordinate.
connection  Tabulate the finite-difference Berry connection over a grid.
curvature   Tabulate the finite-difference Berry curvature over a grid.
validate    Re-derive the built-in closed-form results and print PASS/FAIL.

Angle-valued arguments accept expressions such as ``pi/2`` or ``-3*pi/4``.
Loops are given as ``--loop "theta=pi/2,phi=0..2*pi"`` (exactly one swept
coordinate, the rest fixed) or as a path to a CSV sample list. Output is CSV
or a YAML record stream; identical configurations produce byte-identical
output (wall-clock timings go to the console only).

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 adiabaticity lost.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import yaml

from .angles import parse_angle
from .errors import (AdiabaticityLostError, BerryPhaseError, ConfigError,
                     UnsupportedFamilyError)
from .families import FAMILY_IDS, ParameterChart, StateFamily, get_family
from .geometry import connection_batch, curvature_component_batch
from .integrators import (DEFAULT_GRID_STEPS, DEFAULT_LOOP_SAMPLES,
                          line_integral_phase, mod_2pi_deviation,
                          overlap_product_phase, solid_angle,
                          surface_integral_phase)
from .loops import Loop, PhaseValue, SurfacePatch, circle_loop, loop_from_csv
from .oracle import adiabatic_phase_report, default_steps

METHODS = ("line", "overlap", "surface", "schrodinger", "all")
GEOMETRIC_METHODS = ("line", "overlap", "surface")
FORMATS = ("csv", "record")
DEFAULT_SEED = 20260811
DEFAULT_TOTAL_TIME = 2000.0

CSV_COLUMNS = ("experiment_id", "family", "method", "loop", "samples", "grid",
               "T", "steps", "seed", "raw_phase", "canonical_phase",
               "reference_phase", "deviation", "config")


# ---------------------------------------------------------------------------
# loop specifications

@dataclass(frozen=True)
class LoopSpec:
    """Parsed --loop value: either a CSV path or a constant-coordinate circle."""

    text: str
    csv_path: str | None = None
    sweep: str | None = None
    start: float = 0.0
    stop: float = 0.0
    fixed: dict[str, float] = field(default_factory=dict)

    def build(self, chart: ParameterChart) -> Loop:
        if self.csv_path is not None:
            return loop_from_csv(self.csv_path, chart)
        return circle_loop(chart, self.sweep, self.start, self.stop, self.fixed)

    def with_fixed(self, name: str, value: float) -> "LoopSpec":
        fixed = dict(self.fixed)
        fixed[name] = float(value)
        return replace(self, fixed=fixed)


def parse_loop_spec(text: str, chart: ParameterChart) -> LoopSpec:
    spec = text.strip()
    if not spec:
        raise ConfigError("empty loop specification")
    if spec.lower().endswith(".csv"):
        return LoopSpec(text=spec, csv_path=spec)
    sweep = None
    start = stop = 0.0
    fixed: dict[str, float] = {}
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise ConfigError(f"loop item {item!r} is not name=value or name=a..b")
        name, value = (part.strip() for part in item.split("=", 1))
        if name not in chart.names:
            raise ConfigError(f"loop names coordinate {name!r}; chart has {chart.names}")
        if ".." in value:
            if sweep is not None:
                raise ConfigError(f"loop has two swept coordinates: {sweep!r} and {name!r}")
            lo_text, hi_text = value.split("..", 1)
            sweep, start, stop = name, parse_angle(lo_text), parse_angle(hi_text)
        else:
            if name in fixed:
                raise ConfigError(f"coordinate {name!r} fixed twice")
            fixed[name] = parse_angle(value)
    if sweep is None:
        raise ConfigError(f"loop {spec!r} needs exactly one swept coordinate (name=a..b)")
    missing = set(chart.names) - {sweep} - set(fixed)
    if missing:
        raise ConfigError(f"loop {spec!r} leaves {sorted(missing)} unspecified")
    return LoopSpec(text=spec, sweep=sweep, start=start, stop=stop, fixed=fixed)


def cap_patch(family: StateFamily, spec: LoopSpec) -> SurfacePatch:
    """Surface patch bounded by a circle loop, via the family's cap pairing."""
    if spec.csv_path is not None:
        raise ConfigError("surface method needs a circle loop spec, not a CSV sample list")
    partner = family.cap_pairs.get(spec.sweep)
    if partner is None:
        raise ConfigError(f"{family.family_id} has no curvature cap for swept coordinate "
                          f"{spec.sweep!r} (available: {dict(family.cap_pairs)})")
    if not spec.stop > spec.start:
        raise ConfigError("surface method needs an increasing swept interval")
    lo = family.chart.bounds[family.chart.index(partner)][0]
    top = spec.fixed[partner]
    if not top > lo:
        raise ConfigError(f"cap coordinate {partner}={top:g} must exceed its lower bound {lo:g}")
    others = {k: v for k, v in spec.fixed.items() if k != partner}
    return SurfacePatch(family.chart, (partner, spec.sweep),
                        (lo, top, spec.start, spec.stop), others)


# ---------------------------------------------------------------------------
# experiment configuration and records

@dataclass(frozen=True)
class ExperimentConfig:
    family: str
    method: str
    loop: str
    samples: int = DEFAULT_LOOP_SAMPLES
    grid: tuple[int, int] = (DEFAULT_GRID_STEPS, DEFAULT_GRID_STEPS)
    total_time: float = DEFAULT_TOTAL_TIME
    steps: int | None = None
    seed: int = DEFAULT_SEED
    fmt: str = "csv"

    def validated(self) -> "ExperimentConfig":
        if self.family not in FAMILY_IDS:
            raise ConfigError(f"unknown family {self.family!r}; known: {', '.join(FAMILY_IDS)}")
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}; known: {', '.join(METHODS)}")
        if self.fmt not in FORMATS:
            raise ConfigError(f"unknown format {self.fmt!r}; known: {', '.join(FORMATS)}")
        if self.samples < 16:
            raise ConfigError(f"--samples must be >= 16, got {self.samples}")
        if self.grid[0] < 8 or self.grid[1] < 8:
            raise ConfigError(f"--grid sizes must be >= 8, got {self.grid}")
        if not self.total_time > 0:
            raise ConfigError(f"--T must be positive, got {self.total_time}")
        if self.steps is not None and self.steps < 1000:
            raise ConfigError(f"--steps must be >= 1000, got {self.steps}")
        parse_loop_spec(self.loop, get_family(self.family).chart)
        return self

    def config_dict(self) -> dict:
        return {
            "family": self.family,
            "method": self.method,
            "loop": self.loop,
            "samples": self.samples,
            "grid": f"{self.grid[0]}x{self.grid[1]}",
            "T": self.total_time,
            "steps": self.steps,
            "seed": self.seed,
            "format": self.fmt,
        }

    def config_json(self) -> str:
        return json.dumps(self.config_dict(), sort_keys=True, separators=(",", ":"))

    def experiment_id(self) -> str:
        return hashlib.sha1(self.config_json().encode()).hexdigest()[:12]


@dataclass(frozen=True)
class ResultRecord:
    experiment_id: str
    family: str
    method: str
    loop: str
    samples: int
    grid: str
    total_time: float
    steps: int
    seed: int
    raw_phase: float | None
    canonical_phase: float | None
    reference_phase: float | None
    deviation: float | None
    config_json: str
    wall_time_s: float  # console reporting only; excluded from file payloads

    def payload(self) -> dict:
        return {
            "experiment_id": self.experiment_id,
            "family": self.family,
            "method": self.method,
            "loop": self.loop,
            "samples": self.samples,
            "grid": self.grid,
            "T": self.total_time,
            "steps": self.steps,
            "seed": self.seed,
            "raw_phase": self.raw_phase,
            "canonical_phase": self.canonical_phase,
            "reference_phase": self.reference_phase,
            "deviation": self.deviation,
            "config": json.loads(self.config_json),
        }


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def reference_phase(family: StateFamily, spec: LoopSpec) -> float | None:
    """Closed-form loop phase for a circle on a family with an analytic connection."""
    if spec.csv_path is not None or not family.has_analytic_connection:
        return None
    chart = family.chart
    coords = np.array([[spec.fixed.get(name, spec.start) for name in chart.names]])
    comps = family.connection_components(coords)[0]
    return float(comps[chart.index(spec.sweep)] * (spec.stop - spec.start))


def run_experiment(config: ExperimentConfig) -> list[ResultRecord]:
    """Execute the configured method(s); with ``all``, append pairwise deviations."""
    config = config.validated()
    family = get_family(config.family)
    spec = parse_loop_spec(config.loop, family.chart)
    loop = spec.build(family.chart)
    steps = config.steps if config.steps is not None else default_steps(config.total_time)
    reference = reference_phase(family, spec)
    methods = GEOMETRIC_METHODS + ("schrodinger",) if config.method == "all" \
        else (config.method,)

    def make_record(method: str, phase: PhaseValue | None, deviation: float | None,
                    wall: float) -> ResultRecord:
        return ResultRecord(
            experiment_id=config.experiment_id(), family=config.family, method=method,
            loop=loop.description, samples=config.samples,
            grid=f"{config.grid[0]}x{config.grid[1]}", total_time=config.total_time,
            steps=steps, seed=config.seed,
            raw_phase=None if phase is None else phase.raw,
            canonical_phase=None if phase is None else phase.canonical,
            reference_phase=reference if phase is not None else None,
            deviation=deviation, config_json=config.config_json(), wall_time_s=wall)

    records = []
    phases: dict[str, PhaseValue] = {}
    for method in methods:
        began = time.perf_counter()
        try:
            if method == "line":
                phase = line_integral_phase(family, loop, config.samples)
            elif method == "overlap":
                phase = overlap_product_phase(family, loop, config.samples)
            elif method == "surface":
                phase = surface_integral_phase(family, cap_patch(family, spec),
                                               config.grid[0], config.grid[1])
            else:
                report = adiabatic_phase_report(family, loop, config.total_time, steps)
                phase = PhaseValue(report.geometric_phase)
        except BerryPhaseError as exc:
            exc.args = (f"[experiment {config.experiment_id()}/{method}] {exc}",)
            raise
        wall = time.perf_counter() - began
        deviation = None if reference is None else mod_2pi_deviation(phase.raw, reference)
        phases[method] = phase
        records.append(make_record(method, phase, deviation, wall))
    if config.method == "all":
        names = list(phases)
        for i, a in enumerate(names):
            for b in names[i + 1:]:
                records.append(make_record(
                    f"delta:{a}-{b}", None,
                    mod_2pi_deviation(phases[a].raw, phases[b].raw), 0.0))
    return records


def sweep(config: ExperimentConfig, coordinate: str, values: list[float]
          ) -> list[ResultRecord]:
    """One record per value of a coordinate held fixed by the loop spec."""
    config = config.validated()
    if config.method == "all":
        raise ConfigError("sweep needs a single method, not 'all'")
    family = get_family(config.family)
    spec = parse_loop_spec(config.loop, family.chart)
    if coordinate == spec.sweep:
        raise ConfigError(f"coordinate {coordinate!r} is already swept by the loop itself")
    if coordinate not in spec.fixed:
        raise ConfigError(f"coordinate {coordinate!r} is not held fixed by the loop spec")
    records = []
    for value in values:
        moved = spec.with_fixed(coordinate, value)
        sub = replace(config, loop=",".join(
            [f"{moved.sweep}={moved.start:.17g}..{moved.stop:.17g}"]
            + [f"{n}={moved.fixed[n]:.17g}" for n in family.chart.names if n in moved.fixed]))
        records.extend(run_experiment(sub))
    return records


# ---------------------------------------------------------------------------
# grid tabulation

def parse_grid_spec(text: str, chart: ParameterChart) -> tuple[list[str], np.ndarray]:
    """Parse ``name=a:b:n`` (gridded) / ``name=expr`` (fixed) items into mesh rows."""
    gridded: list[tuple[str, np.ndarray]] = []
    fixed: dict[str, float] = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise ConfigError(f"grid item {item!r} is not name=a:b:n or name=value")
        name, value = (part.strip() for part in item.split("=", 1))
        if name not in chart.names:
            raise ConfigError(f"grid names coordinate {name!r}; chart has {chart.names}")
        parts = value.split(":")
        if len(parts) == 3:
            lo, hi = parse_angle(parts[0]), parse_angle(parts[1])
            try:
                count = int(parts[2])
            except ValueError:
                raise ConfigError(f"grid count in {item!r} must be an integer") from None
            if count < 2:
                raise ConfigError(f"grid count in {item!r} must be >= 2")
            gridded.append((name, np.linspace(lo, hi, count)))
        elif len(parts) == 1:
            fixed[name] = parse_angle(value)
        else:
            raise ConfigError(f"grid item {item!r} is not name=a:b:n or name=value")
    named = {n for n, _ in gridded} | set(fixed)
    if named != set(chart.names):
        raise ConfigError(f"grid must name every coordinate {chart.names}, got {sorted(named)}")
    if not gridded:
        raise ConfigError("grid needs at least one gridded coordinate (name=a:b:n)")
    axes = [axis for _, axis in gridded]
    mesh = np.meshgrid(*axes, indexing="ij")
    rows = np.empty((mesh[0].size, chart.dim), dtype=float)
    for name, value in fixed.items():
        rows[:, chart.index(name)] = value
    for (name, _), grid_vals in zip(gridded, mesh):
        rows[:, chart.index(name)] = grid_vals.ravel()
    return [n for n, _ in gridded], rows


def connection_table(family: StateFamily, rows: np.ndarray) -> tuple[list[str], list[list]]:
    comps, resid = connection_batch(family, rows)
    header = list(family.chart.names) + [f"A_{n}" for n in family.chart.names] \
        + ["reality_defect"]
    table = [list(rows[i]) + list(comps[i]) + [float(np.max(np.abs(resid[i])))]
             for i in range(rows.shape[0])]
    return header, table


def curvature_table(family: StateFamily, rows: np.ndarray) -> tuple[list[str], list[list]]:
    chart = family.chart
    pairs = [(k, l) for k in range(chart.dim) for l in range(k + 1, chart.dim)]
    columns = [curvature_component_batch(family, rows, k, l) for k, l in pairs]
    header = list(chart.names) + [f"F_{chart.names[k]}_{chart.names[l]}" for k, l in pairs]
    table = [list(rows[i]) + [col[i] for col in columns] for i in range(rows.shape[0])]
    return header, table


# ---------------------------------------------------------------------------
# output

def render_csv(header, table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in table:
        writer.writerow([_fmt(cell) for cell in row])
    return buf.getvalue()


def render_records(records: list[ResultRecord], fmt: str) -> str:
    if fmt == "csv":
        table = [[r.experiment_id, r.family, r.method, r.loop, r.samples, r.grid,
                  r.total_time, r.steps, r.seed, r.raw_phase, r.canonical_phase,
                  r.reference_phase, r.deviation, r.config_json] for r in records]
        return render_csv(CSV_COLUMNS, table)
    return yaml.safe_dump([r.payload() for r in records],
                          sort_keys=True, default_flow_style=False)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
        print(f"wrote {out}", file=sys.stderr)
    else:
        sys.stdout.write(text)


def _summarize(records: list[ResultRecord]) -> None:
    for r in records:
        bits = [f"[{r.method}]"]
        if r.canonical_phase is not None:
            bits.append(f"phase={r.canonical_phase:+.9f} rad (raw {r.raw_phase:+.9f})")
        if r.reference_phase is not None:
            bits.append(f"ref={r.reference_phase:+.9f}")
        if r.deviation is not None:
            bits.append(f"|e^(i d)-1|={r.deviation:.3e}")
        bits.append(f"({r.wall_time_s:.3f}s)")
        print(" ".join(bits), file=sys.stderr)


# ---------------------------------------------------------------------------
# validate: built-in reproduction suite

THETA_SET = (math.pi / 6, math.pi / 4, math.pi / 3, math.pi / 2, 2 * math.pi / 3)
G_SET = (math.pi / 8, math.pi / 6, math.pi / 4)


def _sample_coords(chart: ParameterChart, n: int, rng: np.random.Generator,
                   margin: float = 1e-3) -> np.ndarray:
    lo = np.array([b[0] for b in chart.bounds])
    hi = np.array([b[1] for b in chart.bounds])
    pad = margin * (hi - lo)
    return lo + pad + (hi - lo - 2 * pad) * rng.random((n, chart.dim))


def _curvature_closed_forms(family_id: str):
    # d(closed-form A)/d(coords), pair-indexed (k_name, l_name) -> F_kl
    if family_id == "su2-spin-half":
        return {("theta", "phi"): lambda c: -0.5 * np.sin(c[:, 0])}
    if family_id == "su2-spin-1":
        return {("theta", "phi"): lambda c: -np.sin(c[:, 0])}
    return {
        ("theta", "phi"): lambda c: -np.sin(c[:, 0]) * np.cos(2 * c[:, 2]),
        ("theta", "g"): lambda c: np.zeros(len(c)),
        ("theta", "gamma"): lambda c: np.zeros(len(c)),
        ("phi", "g"): lambda c: 2 * np.sin(2 * c[:, 2]) * np.cos(c[:, 0]),
        ("phi", "gamma"): lambda c: np.zeros(len(c)),
        ("g", "gamma"): lambda c: -2 * np.sin(2 * c[:, 2]),
    }


def _validation_checks(samples: int, grid: int, total_time: float,
                       steps: int | None, seed: int):
    """Yield (name, ok, detail) for the built-in reproduction suite."""
    rng = np.random.default_rng(seed)

    for family_id in FAMILY_IDS:
        family = get_family(family_id)
        pts = _sample_coords(family.chart, 20, rng)
        fd, resid = connection_batch(family, pts)
        gap = float(np.max(np.abs(fd - family.connection_components(pts))))
        yield (f"connection/{family_id}", gap <= 5e-9,
               f"max |A_fd - A_closed| = {gap:.3e} (tol 5e-9)")
        defect = float(np.max(np.abs(resid)))
        yield (f"reality/{family_id}", defect <= 1e-9,
               f"max |Im i<phi|d phi>| = {defect:.3e} (tol 1e-9)")
        worst = 0.0
        for (k_name, l_name), closed in _curvature_closed_forms(family_id).items():
            vals = curvature_component_batch(family, pts, family.chart.index(k_name),
                                             family.chart.index(l_name))
            worst = max(worst, float(np.max(np.abs(vals - closed(pts)))))
        yield (f"curvature/{family_id}", worst <= 1e-6,
               f"max |F_fd - F_closed| = {worst:.3e} (tol 1e-6)")

    for family_id, factor in (("su2-spin-half", 0.5), ("su2-spin-1", 1.0)):
        family = get_family(family_id)
        worst = 0.0
        for theta in THETA_SET:
            loop = circle_loop(family.chart, "phi", fixed={"theta": theta})
            expected = -factor * solid_angle(loop, samples)
            cap = SurfacePatch(family.chart, ("theta", "phi"),
                               (0.0, theta, 0.0, 2 * math.pi), {})
            for phase in (line_integral_phase(family, loop, samples),
                          overlap_product_phase(family, loop, samples),
                          surface_integral_phase(family, cap, grid, grid)):
                worst = max(worst, mod_2pi_deviation(phase.raw, expected))
        yield (f"loop-phase/{family_id}", worst <= 1e-4,
               f"max deviation from -{factor:g}*solid-angle over theta set = "
               f"{worst:.3e} (tol 1e-4)")

    su3 = get_family("su3-spin-1")
    norms = np.linalg.norm(su3.states(_sample_coords(su3.chart, 10_000, rng, margin=0.0)),
                           axis=1)
    gap = float(np.max(np.abs(norms - 1.0)))
    yield ("normalization/su3-spin-1", gap <= 1e-12,
           f"max |norm - 1| over 10^4 points = {gap:.3e} (tol 1e-12)")
    worst_line = worst_patch = 0.0
    for g0 in G_SET:
        fixed = {"theta": 1.1, "phi": 0.7, "g": g0}
        loop = circle_loop(su3.chart, "gamma", fixed=fixed)
        phase = line_integral_phase(su3, loop, samples)
        worst_line = max(worst_line, mod_2pi_deviation(phase.raw, 2 * math.pi * math.cos(2 * g0)))
        patch = SurfacePatch(su3.chart, ("g", "gamma"), (0.0, g0, 0.0, 2 * math.pi),
                             {"theta": 1.1, "phi": 0.7})
        sphase = surface_integral_phase(su3, patch, grid, grid)
        worst_patch = max(worst_patch,
                          mod_2pi_deviation(sphase.raw, -2 * math.pi * (1 - math.cos(2 * g0))))
    yield ("loop-phase/su3-gamma", worst_line <= 1e-4,
           f"max deviation from 2*pi*cos(2g) = {worst_line:.3e} (tol 1e-4)")
    yield ("cap-phase/su3-g-gamma", worst_patch <= 1e-4,
           f"max deviation from -2*pi*(1-cos(2g)) = {worst_patch:.3e} (tol 1e-4)")

    spin1 = get_family("su2-spin-1")
    thetas = np.linspace(0.0, math.pi, 50)
    phis = np.linspace(0.0, 2 * math.pi, 50)
    mesh = np.stack([m.ravel() for m in np.meshgrid(thetas, phis, indexing="ij")], axis=1)
    su3_rows = np.column_stack([mesh[:, 0], mesh[:, 1],
                                np.zeros(len(mesh)), np.zeros(len(mesh))])
    gap = float(np.max(np.abs(su3.states(su3_rows) - spin1.states(mesh))))
    yield ("reduction/su3-to-su2", gap <= 1e-15,
           f"max amplitude gap on 50x50 grid at g=gamma=0 = {gap:.3e} (tol 1e-15)")

    for family_id, theta in (("su2-spin-half", math.pi / 2), ("su2-spin-1", math.pi / 3)):
        family = get_family(family_id)
        loop = circle_loop(family.chart, "phi", fixed={"theta": theta})
        target = line_integral_phase(family, loop, samples)
        horizon = [total_time / 4, total_time / 2, total_time]
        mism = [mod_2pi_deviation(
            adiabatic_phase_report(family, loop, t,
                                   steps if steps is not None else None).geometric_phase,
            target.raw) for t in horizon]
        ok = mism[0] > mism[1] > mism[2] and mism[2] <= 2e-2
        yield (f"schrodinger/{family_id}", ok,
               f"mismatch at T={horizon[0]:g}/{horizon[1]:g}/{horizon[2]:g}: "
               + "/".join(f"{m:.2e}" for m in mism) + " (decreasing, final tol 2e-2)")


def cmd_validate(args) -> int:
    lines = [f"# berryphase validate: seed={args.seed} samples={args.samples} "
             f"grid={args.grid[0]}x{args.grid[1]} T={args.T:g} steps={args.steps}"]
    failures = 0
    for name, ok, detail in _validation_checks(args.samples, args.grid[0], args.T,
                                               args.steps, args.seed):
        lines.append(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        failures += 0 if ok else 1
    lines.append(f"# {failures} failure(s)")
    text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    if args.out:
        sys.stderr.write(text)
    return 0 if failures == 0 else 3


# ---------------------------------------------------------------------------
# argument handling

def _parse_values(text: str) -> list[float]:
    text = text.strip()
    if not text:
        return []
    if text.count(":") == 2 and "," not in text:
        lo_text, hi_text, count_text = text.split(":")
        return list(np.linspace(parse_angle(lo_text), parse_angle(hi_text),
                                int(count_text)))
    return [parse_angle(part) for part in text.split(",") if part.strip()]


def _parse_grid_arg(text: str) -> tuple[int, int]:
    try:
        if "x" in text:
            n1_text, n2_text = text.split("x", 1)
            return int(n1_text), int(n2_text)
        n = int(text)
        return n, n
    except ValueError:
        raise ConfigError(f"--grid must be N or N1xN2, got {text!r}") from None


def _load_config_file(path: str) -> dict:
    try:
        data = yaml.safe_load(Path(path).read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a mapping")
    return data


_CONFIG_KEYS = ("family", "method", "loop", "samples", "grid", "T", "steps",
                "seed", "format", "out", "coordinate", "values")


def _merge_config(args) -> None:
    """Fill argparse blanks from --config file values (flags win)."""
    if not getattr(args, "config", None):
        return
    data = _load_config_file(args.config)
    unknown = set(data) - set(_CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}; "
                          f"allowed: {list(_CONFIG_KEYS)}")
    for key in _CONFIG_KEYS:
        if data.get(key) is None:
            continue
        attr = "fmt" if key == "format" else key
        value = data[key]
        if key == "T":
            value = parse_angle(value) if isinstance(value, str) else float(value)
        elif key in ("samples", "steps", "seed"):
            value = int(value)
        elif key == "grid":
            if hasattr(args, "gridspec"):  # connection/curvature take grid spec strings
                attr = "gridspec"
                value = str(value)
            else:
                value = _parse_grid_arg(str(value))
        elif key == "values" and isinstance(value, list):
            value = ",".join(str(v) for v in value)
        if getattr(args, attr, None) is not None:
            continue  # explicit flag wins
        setattr(args, attr, value)


def _apply_defaults(args) -> None:
    defaults = {"method": "line", "samples": DEFAULT_LOOP_SAMPLES,
                "grid": (DEFAULT_GRID_STEPS, DEFAULT_GRID_STEPS),
                "T": DEFAULT_TOTAL_TIME, "seed": DEFAULT_SEED, "fmt": "csv"}
    for attr, value in defaults.items():
        if getattr(args, attr, None) is None:
            setattr(args, attr, value)


def _experiment_config(args) -> ExperimentConfig:
    if not args.family:
        raise ConfigError("--family is required")
    if not args.loop:
        raise ConfigError("--loop is required")
    return ExperimentConfig(
        family=args.family, method=args.method, loop=args.loop, samples=args.samples,
        grid=args.grid, total_time=args.T, steps=args.steps, seed=args.seed,
        fmt=args.fmt).validated()


def cmd_phase(args) -> int:
    records = run_experiment(_experiment_config(args))
    _emit(render_records(records, args.fmt), args.out)
    _summarize(records)
    return 0


def cmd_sweep(args) -> int:
    if not args.coordinate:
        raise ConfigError("--coordinate is required for sweep")
    if args.values is None:
        raise ConfigError("--values is required for sweep")
    records = sweep(_experiment_config(args), args.coordinate, _parse_values(args.values))
    _emit(render_records(records, args.fmt), args.out)
    _summarize(records)
    return 0


def _cmd_table(args, build_table) -> int:
    if not args.family:
        raise ConfigError("--family is required")
    if not args.gridspec:
        raise ConfigError("--grid is required (name=a:b:n items)")
    family = get_family(args.family)
    _, rows = parse_grid_spec(args.gridspec, family.chart)
    header, table = build_table(family, rows)
    _emit(render_csv(header, table), args.out)
    print(f"{len(table)} grid rows", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="berryphase",
        description="Berry phases of spin coherent states by four independent methods.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, loop_flags=True):
        p.add_argument("--config", help="YAML config file; explicit flags override it")
        p.add_argument("--family", choices=FAMILY_IDS, help="state family id")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", dest="fmt", choices=FORMATS,
                       help="output format (default csv)")
        p.add_argument("--seed", type=int, help="seed recorded in output")
        if loop_flags:
            p.add_argument("--method", choices=METHODS, help="method (default line)")
            p.add_argument("--loop",
                           help='e.g. "theta=pi/2,phi=0..2*pi" or a CSV sample list')
            p.add_argument("--samples", type=int, help="loop samples (default 2048)")
            p.add_argument("--grid", type=_parse_grid_arg,
                           help="surface grid N or N1xN2 (default 256x256)")
            p.add_argument("--T", type=parse_angle,
                           help="traversal time for schrodinger (default 2000)")
            p.add_argument("--steps", type=int,
                           help="RK4 steps (default 1000 per unit time)")

    p_phase = sub.add_parser("phase", help="run one experiment")
    common(p_phase)
    p_phase.set_defaults(func=cmd_phase)

    p_sweep = sub.add_parser("sweep", help="repeat an experiment over coordinate values")
    common(p_sweep)
    p_sweep.add_argument("--coordinate", help="fixed coordinate to step")
    p_sweep.add_argument("--values", help='comma list of angles, or "a:b:n" linspace')
    p_sweep.set_defaults(func=cmd_sweep)

    p_conn = sub.add_parser("connection", help="tabulate the Berry connection")
    common(p_conn, loop_flags=False)
    p_conn.add_argument("--grid", dest="gridspec",
                        help='e.g. "theta=0.1:3:25,phi=0:2*pi:25" (+ name=value fixers)')
    p_conn.set_defaults(func=lambda a: _cmd_table(a, connection_table))

    p_curv = sub.add_parser("curvature", help="tabulate the Berry curvature")
    common(p_curv, loop_flags=False)
    p_curv.add_argument("--grid", dest="gridspec", help="same syntax as connection")
    p_curv.set_defaults(func=lambda a: _cmd_table(a, curvature_table))

    p_val = sub.add_parser("validate", help="run the built-in reproduction suite")
    common(p_val)
    p_val.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _merge_config(args)
        _apply_defaults(args)
        return args.func(args)
    except SystemExit as exc:  # argparse already printed the message
        return int(exc.code or 0)
    except (ConfigError, UnsupportedFamilyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except AdiabaticityLostError as exc:
        print(f"adiabaticity lost: {exc}", file=sys.stderr)
        return 4
    except (BerryPhaseError, ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
