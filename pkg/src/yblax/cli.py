"""Configuration-driven command line runner.

Four subcommands: verify (randomized property suites for one map id),
evaluate (single map application), lattice (transfer evolution with CSV
trajectory and drift JSON), and surface-scan (discriminant-surface samples
as CSV). Config is one JSON document; --seed, --samples, and --out override
the corresponding top-level fields. Reports are deterministic given the
config and seed, apart from a timestamp. Unless figures are disabled, each
report-producing command also renders a matplotlib figure next to its
output files.

Exit codes: 0 pass, 1 verification failure, 2 config error, 3 numerical
degeneracy.
"""

import argparse
import json
import sys

from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import maps_2x2 as _maps_2x2  # noqa: F401  (registers map ids)
from . import maps_3x3 as _maps_3x3  # noqa: F401
from .checks import DEFAULT_TOLERANCES, verify_map
from .errors import ConfigError, PoleEncountered, ToleranceExceeded, YBLaxError
from .lattice import StaircaseState, transfer_evolve, write_trajectory_csv
from .maps_3x3 import LeafPoint3, discriminant_surface_residual, leaf_lax_3x3
from .matrix_core import char_poly_coeffs
from .registry import get_map, map_ids

EXIT_PASS = 0
EXIT_VERIFY_FAIL = 1
EXIT_CONFIG = 2
EXIT_DEGENERATE = 3


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat()


def parse_complex(value):
    """Accept a number, [re, im], or {"re": .., "im": ..}."""
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, dict) and set(value) == {"re", "im"}:
        return complex(float(value["re"]), float(value["im"]))
    raise ConfigError(f"cannot parse complex value from {value!r}")


def complex_to_json(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _load_config(args) -> dict:
    if args.config is None:
        raise ConfigError("--config is required")
    try:
        with open(args.config) as handle:
            config = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(config, dict):
        raise ConfigError("config must be a JSON object")
    if args.seed is not None:
        config["seed"] = args.seed
    if args.samples is not None:
        config["samples"] = args.samples
    if args.out is not None:
        config["out"] = args.out
    if args.no_figures:
        config["figures"] = False
    return config


def _config_int(config, key, default, minimum=None):
    value = config.get(key, default)
    if not isinstance(value, int) or isinstance(value, bool):
        raise ConfigError(f"{key!r} must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{key!r} must be >= {minimum}, got {value}")
    return value


def _config_map_id(config) -> str:
    map_id = config.get("map")
    if not isinstance(map_id, str):
        raise ConfigError("config field 'map' (string) is required")
    get_map(map_id)
    return map_id


def _config_tolerances(config) -> dict:
    tol = config.get("tolerances", {})
    if not isinstance(tol, dict):
        raise ConfigError("'tolerances' must be an object")
    for key, value in tol.items():
        if key not in DEFAULT_TOLERANCES:
            raise ConfigError(f"unknown tolerance {key!r}")
        if not isinstance(value, (int, float)) or value <= 0:
            raise ConfigError(f"tolerance {key!r} must be positive")
    return tol


def _figures_enabled(config) -> bool:
    return bool(config.get("figures", True))


def _write_json(path, payload) -> None:
    with open(path, "w") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def _figure_path(out_path) -> Path:
    out_path = Path(out_path)
    return out_path.with_suffix(".png")


def _render_verify_figure(report, path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    checks = {
        name: c for name, c in report["checks"].items() if not c["skipped"]
    }
    names = list(checks)
    residuals = [max(checks[n]["max_residual"], 1e-18) for n in names]
    tolerances = [checks[n]["tolerance"] for n in names]
    fig, ax = plt.subplots(figsize=(7, 4))
    positions = range(len(names))
    ax.bar(positions, residuals, color="#4878d0", label="max residual")
    ax.scatter(positions, tolerances, color="#d65f5f", marker="_", s=400, label="tolerance")
    ax.set_yscale("log")
    ax.set_xticks(list(positions))
    ax.set_xticklabels(names, rotation=20)
    ax.set_ylabel("residual")
    ax.set_title(f"verify {report['map']} (samples={report['samples']}, seed={report['seed']})")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def cmd_verify(config) -> int:
    map_id = _config_map_id(config)
    samples = _config_int(config, "samples", 1000, minimum=1)
    seed = _config_int(config, "seed", 0)
    tolerances = _config_tolerances(config)
    out = config.get("out", f"verify_{map_id}.json")
    fragment = verify_map(map_id, samples=samples, seed=seed, tolerances=tolerances)
    report = {
        "schema": "1",
        "command": "verify",
        "timestamp": _timestamp(),
        **fragment,
    }
    _write_json(out, report)
    for name, check in report["checks"].items():
        if check["skipped"]:
            print(f"{name}: skipped (not defined for this map)")
        else:
            status = "PASS" if check["passed"] else "FAIL"
            print(
                f"{name}: max={check['max_residual']:.3e} "
                f"tol={check['tolerance']:.1e} {status}"
            )
    if _figures_enabled(config):
        _render_verify_figure(report, _figure_path(out))
    print(f"report written to {out}")
    return EXIT_PASS if report["passed"] else EXIT_VERIFY_FAIL


def _parse_point(config, key, desc):
    block = config.get(key)
    if not isinstance(block, dict) or "coords" not in block or "params" not in block:
        raise ConfigError(f"config field {key!r} must be {{coords, params}}")
    coords = tuple(parse_complex(c) for c in block["coords"])
    params = tuple(parse_complex(a) for a in block["params"])
    if len(coords) != desc.coord_len or len(params) != desc.param_len:
        raise ConfigError(
            f"{key!r} must have {desc.coord_len} coords and {desc.param_len} params "
            f"for map {desc.name!r}"
        )
    return coords, params


def cmd_evaluate(config) -> int:
    map_id = _config_map_id(config)
    desc = get_map(map_id)
    (xc, xp) = _parse_point(config, "x", desc)
    (yc, yp) = _parse_point(config, "y", desc)
    out = config.get("out")
    try:
        u, v = desc.apply(xc, xp, yc, yp)
    except YBLaxError as exc:
        payload = {
            "schema": "1",
            "command": "evaluate",
            "map": map_id,
            "error": {"type": type(exc).__name__, "message": str(exc)},
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
        if out:
            _write_json(out, payload)
        return EXIT_DEGENERATE
    payload = {
        "schema": "1",
        "command": "evaluate",
        "map": map_id,
        "u": {"coords": [complex_to_json(c) for c in u], "params": [complex_to_json(a) for a in xp]},
        "v": {"coords": [complex_to_json(c) for c in v], "params": [complex_to_json(a) for a in yp]},
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    if out:
        _write_json(out, payload)
    return EXIT_PASS


def _render_drift_figure(report, path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4))
    steps = range(1, len(report.coeff_drift_series) + 1)
    floor = 1e-18
    ax.plot(steps, [max(v, floor) for v in report.coeff_drift_series], label="monodromy coeff drift")
    if report.j1_drift_series is not None:
        ax.plot(steps, [max(v, floor) for v in report.j1_drift_series], label="J1 drift")
        ax.plot(steps, [max(v, floor) for v in report.j2_drift_series], label="J2 drift")
    ax.set_yscale("log")
    ax.set_xlabel("step")
    ax.set_ylabel("relative drift")
    ax.set_title(f"transfer drift ({report.map_id}, {report.steps} steps)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def cmd_lattice(config) -> int:
    map_id = _config_map_id(config)
    desc = get_map(map_id)
    sites_block = config.get("sites")
    if not isinstance(sites_block, list) or not sites_block:
        raise ConfigError("config field 'sites' (nonempty list) is required")
    sites = []
    for k, block in enumerate(sites_block):
        if not isinstance(block, dict) or "coords" not in block or "params" not in block:
            raise ConfigError(f"site {k} must be {{coords, params}}")
        coords = tuple(parse_complex(c) for c in block["coords"])
        params = tuple(parse_complex(a) for a in block["params"])
        if len(coords) != desc.coord_len or len(params) != desc.param_len:
            raise ConfigError(f"site {k} has the wrong shape for map {map_id!r}")
        sites.append((coords, params))
    steps = _config_int(config, "steps", 100, minimum=0)
    try:
        state = StaircaseState(map_id, tuple(sites))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    prefix = Path(config.get("out", f"lattice_{map_id}"))
    try:
        report = transfer_evolve(state, steps)
    except PoleEncountered as exc:
        payload = {
            "schema": "1",
            "command": "lattice",
            "map": map_id,
            "error": {"type": "PoleEncountered", "step": exc.step, "message": str(exc)},
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
        return EXIT_DEGENERATE
    csv_path = prefix.with_suffix(".csv")
    json_path = Path(str(prefix) + "_drift.json")
    write_trajectory_csv(report, csv_path)
    drift = {"schema": "1", **report.drift_summary()}
    _write_json(json_path, drift)
    print(f"trajectory written to {csv_path}")
    print(f"drift report written to {json_path}")
    print(json.dumps(drift, indent=2, sort_keys=True))
    if _figures_enabled(config) and steps > 0:
        _render_drift_figure(report, Path(str(prefix) + "_drift.png"))
    return EXIT_PASS


def _render_surface_figure(rows, path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig = plt.figure(figsize=(10, 4.5))
    views = ((30, -60), (15, 45))
    for k, (elev, azim) in enumerate(views, start=1):
        ax = fig.add_subplot(1, 2, k, projection="3d")
        if rows:
            a0 = [r[0] for r in rows]
            a1 = [r[1] for r in rows]
            a2 = [r[2] for r in rows]
            ax.scatter(a0, a1, a2, s=8, c=[r[3] for r in rows], cmap="viridis")
        ax.view_init(elev=elev, azim=azim)
        ax.set_xlabel("f0")
        ax.set_ylabel("f1")
        ax.set_zlabel("f2")
    fig.suptitle("constrained Casimir levels on the discriminant surface")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


_CURVE_PARAMS = {
    "boussinesq": lambda a: (a, 0.0),
    "gv": lambda a: (a / 3.0, 2.0 * a / 3.0),
}


def _leaf_levels(c1, c2, coords) -> tuple:
    pencil = leaf_lax_3x3(LeafPoint3(coords, (c1, c2)))
    f = char_poly_coeffs(pencil)
    return f[0], f[1], f[2]


def cmd_surface_scan(config) -> int:
    leaf_samples = _config_int(config, "leaf_samples", 200, minimum=0)
    seed = _config_int(config, "seed", 0)
    tolerance = config.get("tolerance", 1e-9)
    if not isinstance(tolerance, (int, float)) or tolerance <= 0:
        raise ConfigError("'tolerance' must be positive")
    curves = config.get("curves", [])
    if not isinstance(curves, list):
        raise ConfigError("'curves' must be a list")
    out = Path(config.get("out", "surface_scan.csv"))
    rng = np.random.default_rng(seed)

    def sample_coords():
        def away():
            while True:
                value = rng.uniform(-1.5, 1.5)
                if abs(value) >= 0.25:
                    return value

        return (rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), away(), away())

    rows = []
    for _ in range(leaf_samples):
        c1, c2 = rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)
        f0, f1, f2 = _leaf_levels(c1, c2, sample_coords())
        rows.append(
            (f0.real, f1.real, f2.real, discriminant_surface_residual(f0, f1, f2))
        )
    for block in curves:
        if not isinstance(block, dict) or "family" not in block or "values" not in block:
            raise ConfigError("each curve must be {family, values}")
        family = block["family"]
        if family not in _CURVE_PARAMS:
            raise ConfigError(
                f"unknown curve family {family!r}; known: {sorted(_CURVE_PARAMS)}"
            )
        for value in block["values"]:
            c1, c2 = _CURVE_PARAMS[family](float(value))
            f0, f1, f2 = _leaf_levels(c1, c2, sample_coords())
            rows.append(
                (f0.real, f1.real, f2.real, discriminant_surface_residual(f0, f1, f2))
            )

    with open(out, "w") as handle:
        handle.write("alpha0,alpha1,alpha2,residual\n")
        for row in rows:
            handle.write(",".join(repr(v) for v in row) + "\n")
    print(f"{len(rows)} rows written to {out}")
    if _figures_enabled(config):
        _render_surface_figure(rows, _figure_path(out))
    worst = max((row[3] for row in rows), default=0.0)
    print(f"worst residual: {worst:.3e} (tolerance {tolerance:.1e})")
    return EXIT_PASS if worst <= tolerance else EXIT_VERIFY_FAIL


_COMMANDS = {
    "verify": cmd_verify,
    "evaluate": cmd_evaluate,
    "lattice": cmd_lattice,
    "surface-scan": cmd_surface_scan,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="yb",
        description="Construct and verify parametric Yang-Baxter maps "
        "built from binomial Lax pencils.",
    )
    parser.add_argument(
        "command",
        choices=sorted(_COMMANDS),
        help="what to run",
    )
    parser.add_argument("--config", help="path to the JSON config document")
    parser.add_argument("--seed", type=int, help="override config seed")
    parser.add_argument("--samples", type=int, help="override config sample count")
    parser.add_argument("--out", help="override config output path")
    parser.add_argument(
        "--no-figures", action="store_true", help="skip matplotlib figure output"
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _load_config(args)
        return _COMMANDS[args.command](config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ToleranceExceeded as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAIL
    except YBLaxError as exc:
        print(f"numerical degeneracy: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    raise SystemExit(main())
