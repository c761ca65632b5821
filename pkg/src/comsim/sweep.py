"""1-D/2-D parameter sweeps, stability masking, and optimum traces.

Grid points are independent work items executed (optionally) on a
thread pool and always emitted in row-major grid order, so an identical
spec yields a bit-identical table regardless of scheduling.  Unstable
points are kept as rows with null outputs rather than dropped, which
preserves rectangular output for contour plotting of the truncated
(unstable) parameter regions.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ComsimError, NoStablePoint
from .linalg import stability
from .metrics import (
    Covariance,
    duan_sum,
    log_negativity,
    phonon_occupation,
    reduce_modes,
    steady_covariance,
)
from .model import (
    SystemParams,
    Topology,
    build_model,
    pump_power_for_coupling,
)
from .spectra import cooling_rates, stokes_response
from .units import angular_from_thz, thz_from_angular

#: Environment variable capping sweep parallelism.
THREADS_ENV = "COMSIM_THREADS"

# axis name -> (SystemParams field, config-unit -> internal-unit converter)
AXIS_PARAMS: dict[str, tuple[str, object]] = {
    "j": ("j", angular_from_thz),
    "j1": ("j", angular_from_thz),
    "j2": ("j2", angular_from_thz),
    "g": ("g_eff", angular_from_thz),
    "delta_a": ("delta_a", angular_from_thz),
    "delta_a1": ("delta_a", angular_from_thz),
    "delta_a2": ("delta_a2", angular_from_thz),
    "delta_c": ("delta_c", angular_from_thz),
    "kappa_a": ("kappa_a", angular_from_thz),
    "p": ("power", lambda mw: mw * 1e-3),
}


@dataclass(frozen=True)
class SweepAxis:
    """One swept parameter (or several moved in lockstep) with its grid.

    Values are in configuration units: value/2pi THz for frequencies,
    mW for pump power.
    """

    names: tuple[str, ...]
    start: float
    stop: float
    count: int
    scale: str = "linear"

    def __post_init__(self) -> None:
        if not self.names:
            raise ValueError("axis needs at least one parameter name")
        for name in self.names:
            if name not in AXIS_PARAMS:
                raise ValueError(
                    f"unknown axis parameter {name!r}; choose from {sorted(AXIS_PARAMS)}"
                )
        if not self.start < self.stop:
            raise ValueError(f"axis requires start < stop, got [{self.start}, {self.stop}]")
        if self.count < 2:
            raise ValueError(f"axis needs at least 2 points, got {self.count}")
        if self.scale not in ("linear", "log"):
            raise ValueError(f"axis scale must be 'linear' or 'log', got {self.scale!r}")
        if self.scale == "log" and self.start <= 0.0:
            raise ValueError("log axis requires positive bounds")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)

    @property
    def label(self) -> str:
        return "+".join(self.names)


@dataclass(frozen=True)
class SweepSpec:
    """Grid definition: base parameters, topology, axes, requested outputs."""

    base: SystemParams
    topology: Topology
    axes: tuple[SweepAxis, ...]
    outputs: tuple[str, ...]

    def __post_init__(self) -> None:
        if not 1 <= len(self.axes) <= 2:
            raise ValueError(f"sweeps support 1 or 2 axes, got {len(self.axes)}")
        seen: set[str] = set()
        for axis in self.axes:
            for name in axis.names:
                fld = AXIS_PARAMS[name][0]
                if fld in seen:
                    raise ValueError(f"parameter {name!r} appears on more than one axis")
                seen.add(fld)
        registry = output_registry(self.topology)
        for out in self.outputs:
            if out == "stability":
                continue  # always carried on the record
            if out not in registry:
                raise ValueError(
                    f"unknown output {out!r} for topology {self.topology.value}; "
                    f"choose from {list(registry)}"
                )


@dataclass(frozen=True)
class SweepRecord:
    """One grid point: axis values, stability flag, outputs (null on error)."""

    axis_values: tuple[float, ...]
    stable: bool
    outputs: dict[str, float | None] = field(default_factory=dict)
    error: str | None = None


def _error_code(exc: Exception) -> str:
    name = type(exc).__name__
    out = [name[0].lower()]
    for ch in name[1:]:
        out.append("_" + ch.lower() if ch.isupper() else ch)
    return "".join(out)


def bipartition_order(topology: Topology) -> tuple[tuple[str, str], ...]:
    """Canonical bipartition ordering used for output columns."""
    if topology is Topology.SINGLE_WGM:
        return (("a", "b"), ("c", "b"), ("a", "c"))
    return (
        ("a1", "b"),
        ("c", "b"),
        ("a1", "c"),
        ("a1", "a2"),
        ("a2", "b"),
        ("a2", "c"),
    )


def output_registry(topology: Topology) -> dict[str, object]:
    """Output name -> evaluator(params, cov); fixed registry order."""
    registry: dict[str, object] = {}
    pairs = bipartition_order(topology)
    for m, n in pairs:
        registry[f"en_{m}{n}"] = (
            lambda params, cov, _m=m, _n=n: log_negativity(reduce_modes(cov, (_m, _n)))
        )
    registry["nb_cm"] = lambda params, cov: phonon_occupation(cov)
    registry["nb_pert_point"] = lambda params, cov: cooling_rates(params, "point").n_b
    registry["nb_pert_lorentzian"] = (
        lambda params, cov: cooling_rates(params, "lorentzian").n_b
    )
    for m, n in pairs:
        registry[f"duan_{m}{n}"] = (
            lambda params, cov, _m=m, _n=n: duan_sum(cov, (_m, _n))
        )
    registry["r_ac_abs"] = lambda params, cov: abs(stokes_response(params).ratio)
    return registry


def apply_axis_values(
    base: SystemParams, axes: tuple[SweepAxis, ...], values: tuple[float, ...]
) -> SystemParams:
    """Override the base parameters with one grid point's axis values."""
    changes: dict[str, object] = {}
    for axis, value in zip(axes, values):
        for name in axis.names:
            fld, convert = AXIS_PARAMS[name]
            changes[fld] = convert(value)
    return base.with_(**changes)


def _evaluate_point(spec: SweepSpec, values: tuple[float, ...]) -> SweepRecord:
    outputs: dict[str, float | None] = {name: None for name in spec.outputs if name != "stability"}
    errors: list[str] = []
    try:
        params = apply_axis_values(spec.base, spec.axes, values)
        model = build_model(params, spec.topology)
    except (ComsimError, ValueError) as exc:
        return SweepRecord(values, stable=False, outputs=outputs, error=_error_code(exc))
    report = stability(model.drift)
    if not report.is_stable:
        return SweepRecord(values, stable=False, outputs=outputs, error=None)
    try:
        cov = steady_covariance(model)
    except ComsimError as exc:
        return SweepRecord(values, stable=True, outputs=outputs, error=_error_code(exc))
    registry = output_registry(spec.topology)
    for name in outputs:
        try:
            outputs[name] = float(registry[name](params, cov))
        except ComsimError as exc:
            errors.append(f"{name}:{_error_code(exc)}")
    return SweepRecord(
        values,
        stable=True,
        outputs=outputs,
        error=";".join(errors) if errors else None,
    )


def _max_workers() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    try:
        workers = int(raw)
    except ValueError:
        warnings.warn(f"ignoring non-integer {THREADS_ENV}={raw!r}", stacklevel=2)
        return os.cpu_count() or 1
    return max(1, workers)


def grid_points(spec: SweepSpec) -> list[tuple[float, ...]]:
    """Row-major list of axis-value tuples."""
    grids = [axis.values() for axis in spec.axes]
    if len(grids) == 1:
        return [(float(v),) for v in grids[0]]
    return [(float(u), float(v)) for u in grids[0] for v in grids[1]]


def run_sweep(spec: SweepSpec, max_workers: int | None = None) -> list[SweepRecord]:
    """Evaluate every grid point; deterministic row-major output order."""
    points = grid_points(spec)
    workers = _max_workers() if max_workers is None else max(1, max_workers)
    if workers == 1 or len(points) < 4:
        return [_evaluate_point(spec, values) for values in points]
    results: list[SweepRecord | None] = [None] * len(points)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {
            pool.submit(_evaluate_point, spec, values): k
            for k, values in enumerate(points)
        }
        for future, k in futures.items():
            results[k] = future.result()
    return results  # type: ignore[return-value]


@dataclass(frozen=True)
class TraceRecord:
    """Local maximum of the target output along the tuned axis."""

    scanned_value: float
    tuned_value: float
    max_value: float
    n_b: float | None
    refined: bool


def _point_value(
    spec: SweepSpec, scanned: SweepAxis, tuned: SweepAxis, sv: float, tv: float, target: str
) -> tuple[float | None, float | None]:
    """(target output, nb_cm) at one (scanned, tuned) pair; None if masked."""
    probe = SweepSpec(
        base=spec.base,
        topology=spec.topology,
        axes=(scanned, tuned),
        outputs=(target, "nb_cm"),
    )
    rec = _evaluate_point(probe, (sv, tv))
    if not rec.stable:
        return None, None
    return rec.outputs.get(target), rec.outputs.get("nb_cm")


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def trace_local_max(
    spec: SweepSpec,
    scanned: SweepAxis,
    tuned: SweepAxis,
    target: str | None = None,
) -> list[TraceRecord]:
    """Maximize the target output over the tuned axis at each scanned value.

    Coarse grid first, then golden-section refinement inside the
    bracketing cell (assuming a unimodal curve within the stable
    window); if no interior bracket exists the record falls back to a
    fine-grid argmax and is flagged ``refined=False``.  The tuned-axis
    tolerance is 1e-3 of its span.
    """
    if target is None:
        target = "en_ab" if spec.topology is Topology.SINGLE_WGM else "en_a1b"
    span = tuned.stop - tuned.start
    tol = 1e-3 * span
    records: list[TraceRecord] = []
    tuned_grid = [float(t) for t in tuned.values()]

    for sv in (float(s) for s in scanned.values()):
        values = [
            _point_value(spec, scanned, tuned, sv, tv, target)[0] for tv in tuned_grid
        ]
        stable_idx = [k for k, v in enumerate(values) if v is not None]
        if not stable_idx:
            raise NoStablePoint(
                f"no stable point on the tuned axis at {scanned.label}={sv:g}"
            )
        best = max(stable_idx, key=lambda k: values[k])
        refined = True
        lo_ok = best - 1 in stable_idx
        hi_ok = best + 1 in stable_idx
        if lo_ok and hi_ok:
            lo, hi = tuned_grid[best - 1], tuned_grid[best + 1]
            x1 = hi - _GOLDEN * (hi - lo)
            x2 = lo + _GOLDEN * (hi - lo)
            f1 = _point_value(spec, scanned, tuned, sv, x1, target)[0]
            f2 = _point_value(spec, scanned, tuned, sv, x2, target)[0]
            while hi - lo > tol:
                if f1 is None or f2 is None:
                    refined = False
                    break
                if f1 < f2:
                    lo, x1, f1 = x1, x2, f2
                    x2 = lo + _GOLDEN * (hi - lo)
                    f2 = _point_value(spec, scanned, tuned, sv, x2, target)[0]
                else:
                    hi, x2, f2 = x2, x1, f1
                    x1 = hi - _GOLDEN * (hi - lo)
                    f1 = _point_value(spec, scanned, tuned, sv, x1, target)[0]
            best_t = 0.5 * (lo + hi)
        else:
            refined = False
            best_t = tuned_grid[best]
        if not refined:
            # fine-grid fallback within one coarse cell of the best point
            cell = tuned_grid[1] - tuned_grid[0] if len(tuned_grid) > 1 else span
            lo = max(tuned.start, tuned_grid[best] - cell)
            hi = min(tuned.stop, tuned_grid[best] + cell)
            fine = np.linspace(lo, hi, 41)
            fine_vals = [
                _point_value(spec, scanned, tuned, sv, float(t), target)[0] for t in fine
            ]
            cand = [(v, float(t)) for v, t in zip(fine_vals, fine) if v is not None]
            best_v, best_t = max(cand) if cand else (values[best], tuned_grid[best])
        value, n_b = _point_value(spec, scanned, tuned, sv, best_t, target)
        if value is None:
            # golden midpoint drifted onto a masked point; keep the grid best
            best_t = tuned_grid[best]
            value, n_b = _point_value(spec, scanned, tuned, sv, best_t, target)
            refined = False
        records.append(
            TraceRecord(
                scanned_value=sv,
                tuned_value=best_t,
                max_value=float(value),
                n_b=n_b,
                refined=refined,
            )
        )
    return records


@dataclass(frozen=True)
class TwoWgmOptimum:
    """Best symmetric-coupling operating point of the two-resonator protocol."""

    j: float
    g: float
    e_n: float
    duan: float
    power_mw: float


def two_wgm_optimum(spec: SweepSpec) -> TwoWgmOptimum:
    """Grid-plus-refine maximization of the resonator-pair entanglement.

    The first axis must sweep the (symmetric) plasmon coupling; an
    optional second axis sweeps the effective coupling.  The pump power
    required to reach the optimal effective coupling is back-computed
    from the classical steady state.
    """
    if spec.topology is not Topology.TWO_WGM:
        raise ValueError("two_wgm_optimum requires the two-WGM topology")
    j_axis = spec.axes[0]
    g_axis = spec.axes[1] if len(spec.axes) > 1 else None

    def e_at(jv: float, gv: float | None) -> float | None:
        values = (jv,) if g_axis is None else (jv, gv)
        probe = SweepSpec(spec.base, spec.topology, spec.axes, ("en_a1a2",))
        rec = _evaluate_point(probe, values)
        return rec.outputs.get("en_a1a2") if rec.stable else None

    g_grid: list[float | None] = [None] if g_axis is None else [float(g) for g in g_axis.values()]
    best: tuple[float, float, float | None] | None = None
    for gv in g_grid:
        for jv in (float(j) for j in j_axis.values()):
            val = e_at(jv, gv)
            if val is not None and (best is None or val > best[0]):
                best = (val, jv, gv)
    if best is None:
        raise NoStablePoint("no stable point on the optimization grid")
    _, best_j, best_g = best

    # golden refinement over J at the best G
    step = (j_axis.stop - j_axis.start) / (j_axis.count - 1)
    lo = max(j_axis.start, best_j - step)
    hi = min(j_axis.stop, best_j + step)
    tol = 1e-3 * (j_axis.stop - j_axis.start)
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = e_at(x1, best_g), e_at(x2, best_g)
    while hi - lo > tol and f1 is not None and f2 is not None:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = e_at(x2, best_g)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = e_at(x1, best_g)
    best_j = 0.5 * (lo + hi)

    values = (best_j,) if g_axis is None else (best_j, best_g)
    params = apply_axis_values(spec.base, spec.axes, values)
    model = build_model(params, spec.topology)
    cov = steady_covariance(model)
    e_n = log_negativity(reduce_modes(cov, ("a1", "a2")))
    duan = duan_sum(cov, ("a1", "a2"))
    power = pump_power_for_coupling(params, model.g_effective, spec.topology)
    return TwoWgmOptimum(
        j=best_j,
        g=thz_from_angular(model.g_effective),
        e_n=e_n,
        duan=duan,
        power_mw=power * 1e3,
    )
