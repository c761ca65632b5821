"""Command-line front end: config parsing, dispatch, tabular output.

Configurations come in two equivalent forms: a flat sectioned key-value
text format (hand-editable) and JSON (machine-generable); ``--dump-config``
emits the canonical JSON form, which re-parses to an identical run.
Frequencies are quoted as value/2pi in THz (key suffix
``_thz_over_2pi``), pump power in mW (``_mw``), temperature in K (``_k``).

Exit codes: 0 success, 1 configuration error, 2 unstable single-point
model, 3 internal numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from dataclasses import dataclass
from typing import Any, Iterable, Sequence, TextIO

from .errors import ComsimError, ConfigError, UnresolvedCoupling
from .figures import BUNDLES
from .linalg import stability
from .metrics import steady_covariance
from .model import SystemParams, Topology, build_model, steady_state
from .sweep import (
    AXIS_PARAMS,
    SweepAxis,
    SweepSpec,
    output_registry,
    run_sweep,
    trace_local_max,
    two_wgm_optimum,
)
from .units import thz_from_angular

SECTIONS = ("topology", "params", "sweep", "output")

#: config key -> SystemParams.from_thz keyword
PARAM_KEYS = {
    "omega_b_thz_over_2pi": "omega_b",
    "kappa_a_thz_over_2pi": "kappa_a",
    "kappa_c_thz_over_2pi": "kappa_c",
    "gamma_thz_over_2pi": "gamma",
    "delta_a_thz_over_2pi": "delta_a",
    "delta_a2_thz_over_2pi": "delta_a2",
    "delta_c_thz_over_2pi": "delta_c",
    "j_thz_over_2pi": "j",
    "j2_thz_over_2pi": "j2",
    "g_thz_over_2pi": "g_eff",
    "g_c_thz_over_2pi": "g_c",
    "p_mw": "power_mw",
    "n_bar": "n_bar",
    "temperature_k": "temperature_k",
    "omega_a_thz_over_2pi": "omega_a",
    "omega_c_thz_over_2pi": "omega_c",
}
EXTRA_PARAM_KEYS = ("steady_method",)
REQUIRED_PARAM_KEYS = (
    "omega_b_thz_over_2pi",
    "kappa_a_thz_over_2pi",
    "kappa_c_thz_over_2pi",
    "gamma_thz_over_2pi",
    "delta_a_thz_over_2pi",
    "delta_c_thz_over_2pi",
)
SWEEP_KEYS = ("axis1", "axis2", "outputs", "mode", "trace_target")
OUTPUT_KEYS = ("format", "path", "precision")
SWEEP_MODES = ("grid", "trace", "trace_both", "two_wgm_optimum", "compare_topologies")

#: SystemParams field -> config key (for axis/override collision checks)
_FIELD_TO_KEY = {v: k for k, v in PARAM_KEYS.items()}


@dataclass(frozen=True)
class RunConfig:
    """Validated run description (canonical dict retained for dumping)."""

    topology: Topology
    params: SystemParams
    steady_method: str
    sweep: SweepSpec | None
    sweep_mode: str
    trace_target: str | None
    out_format: str
    out_path: str | None
    precision: int
    canonical: dict[str, Any]


def _parse_scalar(text: str) -> Any:
    low = text.strip()
    if low.lower() in ("true", "false"):
        return low.lower() == "true"
    try:
        return int(low)
    except ValueError:
        pass
    try:
        return float(low)
    except ValueError:
        return low


def parse_flat(text: str) -> dict[str, dict[str, Any]]:
    """Parse the sectioned key-value format into a raw config dict."""
    raw: dict[str, dict[str, Any]] = {}
    section: str | None = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("[") and stripped.endswith("]"):
            section = stripped[1:-1].strip().lower()
            if section not in SECTIONS:
                raise ConfigError(f"line {lineno}: unknown section [{section}]")
            raw.setdefault(section, {})
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {stripped!r}")
        if section is None:
            raise ConfigError(f"line {lineno}: key outside of any [section]")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key in raw[section]:
            raise ConfigError(f"line {lineno}: duplicate key {key!r} in [{section}]")
        raw[section][key] = _parse_scalar(value)
    return raw


def parse_config_text(text: str) -> dict[str, dict[str, Any]]:
    """Accept either the flat format or the JSON equivalent."""
    head = text.lstrip()
    if head.startswith("{"):
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON configuration: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("JSON configuration must be an object of sections")
        for section in raw:
            if section not in SECTIONS:
                raise ConfigError(f"unknown section {section!r}")
            if not isinstance(raw[section], dict):
                raise ConfigError(f"section {section!r} must be an object")
        return raw
    return parse_flat(text)


def load_config(path: str) -> dict[str, dict[str, Any]]:
    try:
        with open(path, encoding="utf-8") as handle:
            return parse_config_text(handle.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def apply_overrides(
    raw: dict[str, dict[str, Any]], sets: Iterable[str]
) -> dict[str, dict[str, Any]]:
    """Apply ``--set section.key=value`` overrides to a raw config."""
    out = {section: dict(block) for section, block in raw.items()}
    for item in sets:
        if "=" not in item:
            raise ConfigError(f"--set expects section.key=value, got {item!r}")
        target, value = item.split("=", 1)
        if "." not in target:
            raise ConfigError(f"--set key must be section.key, got {target!r}")
        section, key = target.split(".", 1)
        section = section.strip().lower()
        if section not in SECTIONS:
            raise ConfigError(f"--set references unknown section {section!r}")
        out.setdefault(section, {})[key.strip()] = _parse_scalar(value)
    return out


def _parse_axis(text: str, key: str) -> SweepAxis:
    parts = [p.strip() for p in str(text).split(":")]
    if len(parts) not in (4, 5):
        raise ConfigError(
            f"[sweep] {key}: expected 'names : start : stop : count [: scale]', got {text!r}"
        )
    names = tuple(n.strip() for n in parts[0].split("+") if n.strip())
    try:
        start, stop = float(parts[1]), float(parts[2])
        count = int(parts[3])
    except ValueError as exc:
        raise ConfigError(f"[sweep] {key}: non-numeric bounds in {text!r}") from exc
    scale = parts[4] if len(parts) == 5 else "linear"
    try:
        return SweepAxis(names=names, start=start, stop=stop, count=count, scale=scale)
    except ValueError as exc:
        raise ConfigError(f"[sweep] {key}: {exc}") from exc


def _axis_canonical(axis: SweepAxis) -> str:
    return f"{axis.label} : {axis.start:g} : {axis.stop:g} : {axis.count} : {axis.scale}"


def validate_config(raw: dict[str, dict[str, Any]], need_sweep: bool = False) -> RunConfig:
    """Check keys, units, and coherence; build the typed RunConfig."""
    for section in raw:
        if section not in SECTIONS:
            raise ConfigError(f"unknown section {section!r}")

    topo_block = raw.get("topology", {})
    for key in topo_block:
        if key != "variant":
            raise ConfigError(f"[topology] unknown key {key!r}")
    variant = topo_block.get("variant", "single_wgm")
    try:
        topology = Topology(str(variant))
    except ValueError:
        raise ConfigError(
            f"[topology] variant must be one of {[t.value for t in Topology]}, got {variant!r}"
        ) from None

    sweep_block = raw.get("sweep", {})
    for key in sweep_block:
        if key not in SWEEP_KEYS:
            raise ConfigError(f"[sweep] unknown key {key!r}")
    mode = str(sweep_block.get("mode", "grid"))
    if mode not in SWEEP_MODES:
        raise ConfigError(f"[sweep] mode must be one of {SWEEP_MODES}, got {mode!r}")
    trace_target = sweep_block.get("trace_target")
    axes: list[SweepAxis] = []
    if sweep_block.get("axis1") is not None:
        axes.append(_parse_axis(sweep_block["axis1"], "axis1"))
        if sweep_block.get("axis2") is not None:
            axes.append(_parse_axis(sweep_block["axis2"], "axis2"))
    # (field, placeholder) for parameters supplied by an axis rather than [params]
    axis_fields: dict[str, float] = {}
    for axis in axes:
        for name in axis.names:
            axis_fields[AXIS_PARAMS[name][0]] = axis.start

    params_block = raw.get("params", {})
    kwargs: dict[str, Any] = {}
    steady_method = "approx"
    for key, value in params_block.items():
        if key in EXTRA_PARAM_KEYS:
            if key == "steady_method":
                if value not in ("approx", "self_consistent"):
                    raise ConfigError(
                        f"[params] steady_method must be approx|self_consistent, got {value!r}"
                    )
                steady_method = str(value)
            continue
        if key not in PARAM_KEYS:
            raise ConfigError(f"[params] unknown key {key!r}")
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigError(f"[params] {key} must be a number, got {value!r}")
        kwargs[PARAM_KEYS[key]] = float(value)
    required = list(REQUIRED_PARAM_KEYS)
    if topology is Topology.TWO_WGM:
        required.append("delta_a2_thz_over_2pi")
    missing = []
    for key in required:
        kwarg = PARAM_KEYS[key]
        if kwarg in kwargs:
            continue
        # an axis sweeping the field satisfies the requirement; seed the
        # base value with the axis start (overridden per grid point)
        if kwarg in axis_fields:
            kwargs[kwarg] = axis_fields[kwarg]
            continue
        missing.append(key)
    if missing:
        raise ConfigError(f"[params] missing required key(s): {', '.join(missing)}")
    try:
        params = SystemParams.from_thz(**kwargs)
    except (ValueError, ComsimError) as exc:
        raise ConfigError(f"[params] {exc}") from exc

    spec: SweepSpec | None = None
    if axes:
        outputs_raw = sweep_block.get("outputs", "")
        if isinstance(outputs_raw, str):
            outputs = tuple(o.strip() for o in outputs_raw.split(",") if o.strip())
        elif isinstance(outputs_raw, list):
            outputs = tuple(str(o) for o in outputs_raw)
        else:
            raise ConfigError("[sweep] outputs must be a comma list or JSON array")
        if mode == "grid" and not outputs:
            raise ConfigError("[sweep] grid sweeps need at least one requested output")
        for axis in axes:
            for name in axis.names:
                fld = AXIS_PARAMS[name][0]
                key = _FIELD_TO_KEY.get(fld)
                if key is not None and key in params_block:
                    raise ConfigError(
                        f"[sweep] axis parameter {name!r} is also fixed by [params] {key}"
                    )
        if not outputs:
            # trace/optimum/compare modes fix their own targets
            outputs = ("en_ab",) if topology is Topology.SINGLE_WGM else ("en_a1b",)
        try:
            spec = SweepSpec(
                base=params,
                topology=topology,
                axes=tuple(axes),
                outputs=outputs,
            )
        except ValueError as exc:
            raise ConfigError(f"[sweep] {exc}") from exc
    elif sweep_block and any(sweep_block.get(k) is not None for k in ("axis2", "outputs")):
        raise ConfigError("[sweep] no axes defined (axis1 is required)")
    if need_sweep and spec is None:
        raise ConfigError("[sweep] no axes defined")
    if mode in ("trace", "trace_both") and spec is not None and len(spec.axes) != 2:
        raise ConfigError(f"[sweep] mode {mode} needs axis1 (scanned) and axis2 (tuned)")

    output_block = raw.get("output", {})
    for key in output_block:
        if key not in OUTPUT_KEYS:
            raise ConfigError(f"[output] unknown key {key!r}")
    out_format = str(output_block.get("format", "csv"))
    if out_format not in ("csv", "json"):
        raise ConfigError(f"[output] format must be csv|json, got {out_format!r}")
    precision = output_block.get("precision", 12)
    if not isinstance(precision, int) or precision < 1 or isinstance(precision, bool):
        raise ConfigError(f"[output] precision must be a positive integer, got {precision!r}")
    out_path = output_block.get("path")
    if out_path is not None and not isinstance(out_path, str):
        raise ConfigError("[output] path must be a string")

    canonical: dict[str, Any] = {
        "topology": {"variant": topology.value},
        "params": {k: params_block[k] for k in sorted(params_block)},
        "output": {"format": out_format, "precision": precision},
    }
    if out_path is not None:
        canonical["output"]["path"] = out_path
    if spec is not None:
        canonical["sweep"] = {"mode": mode, "axis1": _axis_canonical(spec.axes[0])}
        if len(spec.axes) > 1:
            canonical["sweep"]["axis2"] = _axis_canonical(spec.axes[1])
        if spec.outputs:
            canonical["sweep"]["outputs"] = list(spec.outputs)
        if trace_target is not None:
            canonical["sweep"]["trace_target"] = trace_target

    return RunConfig(
        topology=topology,
        params=params,
        steady_method=steady_method,
        sweep=spec,
        sweep_mode=mode,
        trace_target=trace_target,
        out_format=out_format,
        out_path=out_path,
        precision=precision,
        canonical=canonical,
    )


# ---------------------------------------------------------------- output


def _fmt(value: Any, precision: int) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, f".{precision}g")
    return str(value)


def write_table(
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    fmt: str,
    precision: int,
    stream: TextIO,
) -> None:
    if fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v, precision) for v in row])
    else:
        payload = [dict(zip(header, row)) for row in rows]
        json.dump(payload, stream, indent=2, allow_nan=False)
        stream.write("\n")


def _open_out(path: str | None):
    if path is None:
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _axis_column(axis: SweepAxis) -> str:
    suffix = "_mw" if axis.names == ("p",) else "_thz_over_2pi"
    return f"{axis.label}{suffix}"


def _emit(cfg: RunConfig, header: list[str], rows: list[list[Any]], out_path: str | None) -> None:
    stream, close = _open_out(out_path)
    try:
        write_table(header, rows, cfg.out_format, cfg.precision, stream)
    finally:
        if close:
            stream.close()


# -------------------------------------------------------------- commands


def cmd_steady(cfg: RunConfig, as_json: bool) -> int:
    amp = steady_state(cfg.params, cfg.steady_method, cfg.topology)
    g_eff = cfg.params.g_eff if cfg.params.g_eff is not None else amp.g_eff
    model = build_model(cfg.params.with_(g_eff=g_eff, power=None), cfg.topology)
    report = stability(model.drift)
    result: dict[str, Any] = {
        "abs_a_s": abs(amp.a_s),
        "abs_b_s": abs(amp.b_s),
        "abs_c_s": abs(amp.c_s),
        "g_eff_thz_over_2pi": thz_from_angular(g_eff),
        "delta_s_thz_over_2pi": thz_from_angular(amp.delta_s),
        "stable": bool(report.is_stable),
    }
    if amp.a2_s is not None:
        result["abs_a2_s"] = abs(amp.a2_s)
    if as_json:
        print(json.dumps(result, indent=2))
    else:
        for key, value in result.items():
            print(f"{key} = {_fmt(value, cfg.precision)}")
    return 0 if report.is_stable else 2


def cmd_entangle(cfg: RunConfig, as_json: bool) -> int:
    model = build_model(cfg.params, cfg.topology)
    report = stability(model.drift)
    if not report.is_stable:
        message = {"stable": False, "margin": report.margin}
        print(json.dumps(message) if as_json else f"stable = false  (margin {report.margin:g})")
        return 2
    cov = steady_covariance(model)
    result: dict[str, Any] = {"stable": True}
    errors: dict[str, str] = {}
    for name, evaluate in output_registry(cfg.topology).items():
        try:
            result[name] = float(evaluate(model.params.with_(g_eff=model.g_effective, power=None), cov))
        except ComsimError as exc:
            result[name] = None
            errors[name] = type(exc).__name__
    if as_json:
        print(json.dumps({**result, "errors": errors or None}, indent=2))
    else:
        for key, value in result.items():
            note = f"  ({errors[key]})" if key in errors else ""
            print(f"{key} = {_fmt(value, cfg.precision)}{note}")
    return 0


def _grid_table(cfg: RunConfig, spec: SweepSpec) -> tuple[list[str], list[list[Any]]]:
    records = run_sweep(spec)
    axis_cols = [_axis_column(axis) for axis in spec.axes]
    out_names = [n for n in output_registry(spec.topology) if n in spec.outputs]
    header = axis_cols + out_names + ["stable", "error"]
    rows = [
        list(rec.axis_values)
        + [rec.outputs.get(name) for name in out_names]
        + [rec.stable, rec.error]
        for rec in records
    ]
    return header, rows


def _trace_table(
    cfg: RunConfig, both: bool
) -> tuple[list[str], list[list[Any]]]:
    spec = cfg.sweep
    assert spec is not None
    scanned, tuned = spec.axes
    target = cfg.trace_target or (
        "en_ab" if spec.topology is Topology.SINGLE_WGM else "en_a1b"
    )
    header = [
        "scanned_axis",
        "scanned_value",
        "argmax_value",
        f"max_{target}",
        "nb_cm",
        "refined",
    ]
    rows: list[list[Any]] = []
    directions = [(scanned, tuned)]
    if both:
        directions.append((tuned, scanned))
    for scan_axis, tune_axis in directions:
        for rec in trace_local_max(spec, scan_axis, tune_axis, target):
            rows.append(
                [
                    _axis_column(scan_axis),
                    rec.scanned_value,
                    rec.tuned_value,
                    rec.max_value,
                    rec.n_b,
                    rec.refined,
                ]
            )
    return header, rows


def _compare_table(cfg: RunConfig) -> tuple[list[str], list[list[Any]]]:
    spec = cfg.sweep
    assert spec is not None
    header = [
        "topology",
        *[_axis_column(axis) for axis in spec.axes],
        "en_wgm_b",
        "stable",
        "error",
    ]
    rows: list[list[Any]] = []
    for topology, column in (
        (Topology.SINGLE_WGM, "en_ab"),
        (Topology.DEGENERATE_WGM_PAIR, "en_a1b"),
    ):
        sub = SweepSpec(spec.base, topology, spec.axes, (column,))
        for rec in run_sweep(sub):
            rows.append(
                [topology.value, *rec.axis_values, rec.outputs.get(column), rec.stable, rec.error]
            )
    return header, rows


def _optimum_table(cfg: RunConfig) -> tuple[list[str], list[list[Any]]]:
    spec = cfg.sweep
    assert spec is not None
    best = two_wgm_optimum(spec)
    header = ["j_thz_over_2pi", "g_thz_over_2pi", "en_a1a2", "duan_a1a2", "p_mw"]
    return header, [[best.j, best.g, best.e_n, best.duan, best.power_mw]]


def cmd_sweep(cfg: RunConfig, out_path: str | None) -> int:
    spec = cfg.sweep
    if spec is None:
        raise ConfigError("[sweep] no axes defined")
    if cfg.sweep_mode == "grid":
        header, rows = _grid_table(cfg, spec)
    elif cfg.sweep_mode in ("trace", "trace_both"):
        header, rows = _trace_table(cfg, both=cfg.sweep_mode == "trace_both")
    elif cfg.sweep_mode == "compare_topologies":
        header, rows = _compare_table(cfg)
    elif cfg.sweep_mode == "two_wgm_optimum":
        header, rows = _optimum_table(cfg)
    else:  # pragma: no cover - guarded by validate_config
        raise ConfigError(f"unhandled sweep mode {cfg.sweep_mode}")
    _emit(cfg, header, rows, out_path)
    return 0


# ------------------------------------------------------------------ main


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="comsim",
        description="Steady-state simulator for the driven resonator-plasmon-vibration network",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, fmt_choices: tuple[str, ...], fmt_default: str | None) -> None:
        p.add_argument("--config", help="configuration file (flat or JSON)")
        p.add_argument(
            "--set",
            dest="sets",
            action="append",
            default=[],
            metavar="SECTION.KEY=VALUE",
            help="override one configuration value",
        )
        p.add_argument("--format", choices=fmt_choices, default=fmt_default)
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument(
            "--dump-config",
            action="store_true",
            help="print the canonical JSON configuration and exit",
        )

    for name, helptext in (
        ("steady", "classical steady-state amplitudes and stability"),
        ("entangle", "single-point entanglement and phonon-number report"),
    ):
        p = sub.add_parser(name, help=helptext)
        add_common(p, ("text", "json"), "text")

    p = sub.add_parser("sweep", help="run the configured parameter sweep")
    add_common(p, ("csv", "json"), None)

    p = sub.add_parser("reproduce", help="run a bundled figure-reproduction config")
    p.add_argument("name", nargs="?", help="bundle name (see --list)")
    p.add_argument("--list", action="store_true", help="list available bundles")
    add_common(p, ("csv", "json"), None)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "reproduce":
            if args.list or args.name is None:
                for name in BUNDLES:
                    print(name)
                return 0 if args.list else 1
            if args.name not in BUNDLES:
                raise ConfigError(
                    f"unknown bundle {args.name!r}; available: {', '.join(BUNDLES)}"
                )
            raw = {sec: dict(block) for sec, block in BUNDLES[args.name].items()}
        elif args.config is not None:
            raw = load_config(args.config)
        else:
            raise ConfigError("--config is required")
        raw = apply_overrides(raw, args.sets)
        need_sweep = args.command in ("sweep", "reproduce")
        cfg = validate_config(raw, need_sweep=need_sweep)
        if args.format is not None and args.command in ("sweep", "reproduce"):
            cfg = dataclasses.replace(cfg, out_format=args.format)
        if args.dump_config:
            print(json.dumps(cfg.canonical, indent=2))
            return 0
        if args.command == "steady":
            return cmd_steady(cfg, as_json=args.format == "json")
        if args.command == "entangle":
            return cmd_entangle(cfg, as_json=args.format == "json")
        out_path = args.out if args.out is not None else cfg.out_path
        return cmd_sweep(cfg, out_path)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except UnresolvedCoupling as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ComsimError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


def run() -> None:  # pragma: no cover - console entry point
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
