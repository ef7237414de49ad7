"""Command-line driver: ``mixbie <command> [flags]``.

Commands
--------
table            refinement sweep for one geometry and wavenumber
laplace-compare  regularized vs split formulation for Laplace on the star
profile          density magnitude against distance to the junctions
resonance        smallest singular values on the unit circle over a band
mesh-dump        node table of one mesh

Every command writes UTF-8 CSV to ``--out`` and a JSON manifest next to it
(``<out>.manifest.json``).  Exit status: 0 success, 1 numerical failure,
2 usage error.
"""

import argparse
from importlib import metadata
import json
import sys
import time

import numpy as np

from mixbie import harness
from mixbie.geometry import CURVES, build_mesh, make_curve
from mixbie.linsolve import SingularMatrixError, deterministic
from mixbie.specfun import j0_zero

EXIT_OK, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2
MAX_LEVEL = 6


class UsageError(Exception):
    """Bad arguments detected after parsing."""


def parse_levels(text):
    """``"0..5"``, ``"1,3,4"`` or ``"2"`` to a sorted tuple of ints."""
    try:
        if isinstance(text, (list, tuple)):
            vals = [int(v) for v in text]
        elif ".." in str(text):
            lo, hi = str(text).split("..", 1)
            vals = list(range(int(lo), int(hi) + 1))
        else:
            vals = [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"cannot parse levels {text!r}") from None
    if not vals:
        raise UsageError("levels must not be empty")
    if any(v < 0 or v > MAX_LEVEL for v in vals):
        raise UsageError(f"levels must lie in 0..{MAX_LEVEL}")
    return tuple(sorted(set(vals)))


def _version():
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


def write_manifest(out_path, command, config, outputs, flag, elapsed):
    manifest = {
        "command": command,
        "config": config,
        "outputs": list(outputs),
        "version": _version(),
        "deterministic": bool(flag),
        "elapsed": elapsed,
    }
    path = f"{out_path}.manifest.json"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _merge(args, keys):
    """Config-file values overridden by explicitly given flags."""
    merged = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                merged.update(json.load(fh))
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
    for key in keys:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    return merged


def _experiment(args, **fixed):
    keys = ("geometry", "omega", "levels", "problem", "panels", "grading", "q",
            "deterministic")
    data = _merge(args, keys)
    data.update(fixed)
    if "levels" in data:
        data["levels"] = parse_levels(data["levels"])
    data["deterministic"] = bool(data.get("deterministic", False))
    try:
        return harness.ExperimentConfig.from_dict(data)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from None


def _report_failures(rows):
    bad = [r for r in rows if (r.get("error") if isinstance(r, dict) else r.error)]
    for r in bad:
        l = r["l"] if isinstance(r, dict) else r.l
        msg = r["error"] if isinstance(r, dict) else r.error
        print(f"level {l} failed: {msg}", file=sys.stderr)
    return EXIT_NUMERIC if bad else EXIT_OK


def cmd_table(args):
    cfg = _experiment(args)
    start = time.perf_counter()
    rows = harness.run_sweep(cfg)
    harness.write_table_csv(rows, args.out)
    write_manifest(args.out, "table", cfg.to_dict(), [args.out], cfg.deterministic,
                   {"total": time.perf_counter() - start,
                    "rows": [r.elapsed for r in rows]})
    return _report_failures(rows)


def cmd_laplace_compare(args):
    data = _merge(args, ("levels", "panels", "grading", "q", "deterministic"))
    levels = parse_levels(data.get("levels", "0..5"))
    start = time.perf_counter()
    try:
        rows = harness.laplace_compare(levels, data.get("panels"),
                                       data.get("grading", 0.5), data.get("q", 16),
                                       deterministic_flag=bool(data.get("deterministic")))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    harness.write_table_csv(rows, args.out, harness.LAPLACE_COLUMNS)
    echo = dict(data, levels=list(levels))
    write_manifest(args.out, "laplace-compare", echo, [args.out],
                   echo.get("deterministic", False),
                   {"total": time.perf_counter() - start})
    return _report_failures(rows)


def _single_level(cfg):
    if len(cfg.levels) != 1:
        raise UsageError("this command takes exactly one level")
    return cfg.levels[0]


def cmd_profile(args):
    cfg = _experiment(args, problem="unknown", kappa="none")
    level = _single_level(cfg)
    start = time.perf_counter()
    with deterministic(cfg.deterministic):
        sol, _ = harness.solve_level(cfg, level, with_kappa=False)
    profile = harness.density_profile(sol.mesh, sol.sigma_unknown)
    harness.write_profile_csv(profile, args.out)
    write_manifest(args.out, "profile", cfg.to_dict(), [args.out], cfg.deterministic,
                   {"total": time.perf_counter() - start})
    return EXIT_OK


def resonance_grid(omega_min, omega_max, steps, include_root=True):
    """Uniform grid, plus the first zero of ``J0`` when it lies inside."""
    if steps < 1:
        raise UsageError("steps must be at least 1")
    if not omega_min < omega_max:
        raise UsageError("omega-min must be smaller than omega-max")
    if omega_min <= 0:
        raise UsageError("omega-min must be positive")
    if steps == 1:
        return np.array([omega_min])
    grid = np.linspace(omega_min, omega_max, steps)
    root = j0_zero()
    if include_root and omega_min < root < omega_max and not np.any(np.isclose(grid, root)):
        grid = np.sort(np.append(grid, root))
    return grid


def cmd_resonance(args):
    data = _merge(args, ("omega_min", "omega_max", "steps", "panels", "q", "deterministic"))
    grid = resonance_grid(float(data.get("omega_min", 2.2)), float(data.get("omega_max", 2.6)),
                          int(data.get("steps", 41)))
    start = time.perf_counter()
    with deterministic(bool(data.get("deterministic"))):
        rows = harness.resonance_sweep(grid, int(data.get("panels") or 18),
                                       int(data.get("q") or 16))
    harness.write_table_csv(rows, args.out, harness.RESONANCE_COLUMNS)
    write_manifest(args.out, "resonance", data, [args.out], bool(data.get("deterministic")),
                   {"total": time.perf_counter() - start})
    return EXIT_OK


def cmd_mesh_dump(args):
    cfg = _experiment(args, kappa="none")
    level = _single_level(cfg)
    mesh = build_mesh(make_curve(cfg.geometry), cfg.panels, level, q=cfg.q,
                      grading=cfg.grading)
    mesh.to_csv(args.out)
    write_manifest(args.out, "mesh-dump", cfg.to_dict(), [args.out], cfg.deterministic,
                   {"total": 0.0})
    return EXIT_OK


def _add_common(p):
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--config", help="JSON file of settings; flags override it")
    p.add_argument("--panels", type=int, help="smooth panels per curve")
    p.add_argument("--grading", type=float, help="junction grading ratio in (0, 1)")
    p.add_argument("--q", type=int, help="Gauss nodes per panel")
    p.add_argument("--deterministic", action="store_true", default=None,
                   help="pin BLAS to one thread for bitwise-reproducible output")


def build_parser():
    parser = argparse.ArgumentParser(prog="mixbie", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="refinement sweep")
    p.add_argument("--geometry", choices=CURVES)
    p.add_argument("--omega", type=float)
    p.add_argument("--levels", help="e.g. 0..5 or 1,3,4")
    p.add_argument("--problem", choices=harness.PROBLEMS)
    _add_common(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("laplace-compare", help="Laplace formulation comparison on the star")
    p.add_argument("--levels", help="e.g. 0..5")
    _add_common(p)
    p.set_defaults(func=cmd_laplace_compare)

    p = sub.add_parser("profile", help="density profile near the junctions")
    p.add_argument("--geometry", choices=CURVES)
    p.add_argument("--omega", type=float)
    p.add_argument("--levels", help="a single level")
    _add_common(p)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("resonance", help="smallest singular values on the unit circle")
    p.add_argument("--omega-min", dest="omega_min", type=float)
    p.add_argument("--omega-max", dest="omega_max", type=float)
    p.add_argument("--steps", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_resonance)

    p = sub.add_parser("mesh-dump", help="write the node table of a mesh")
    p.add_argument("--geometry", choices=CURVES)
    p.add_argument("--omega", type=float)
    p.add_argument("--levels", help="a single level")
    _add_common(p)
    p.set_defaults(func=cmd_mesh_dump)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"mixbie: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SingularMatrixError, np.linalg.LinAlgError, RuntimeError) as exc:
        print(f"mixbie: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
