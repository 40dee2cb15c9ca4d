"""Command-line front end.

Subcommands wrap the library one-to-one and print deterministic JSON (or CSV
for scans), so every headline numeric claim can be reproduced from a shell.
Exit codes: 0 success, 1 a numeric check failed, 2 usage or input error.

A config file (INI-style sections [potential], [run], [optimizer]) supplies
defaults; command-line flags override it.  Unknown keys are rejected by
name.
"""

from __future__ import annotations

import argparse
import configparser
import re
import sys

import numpy as np

from . import analysis, optimize, serialize, spatial, spectral
from .errors import UnsupportedOperationError
from .geometry import equispaced, random_configuration
from .potentials import TabulatedPotential, make_potential

_RUN_KEYS = {"n", "r", "m", "radius", "g", "j", "seed", "starts", "n_list", "out"}
_OPT_KEYS = {"max_iters", "grad_tol", "initial_step", "backtrack_factor", "armijo_c"}

_POTENTIAL_RE = re.compile(r"^([a-z_]+)(?:\{(.*)\})?$")


def parse_potential_spec(spec: str):
    """'paley_wiener{m=4,beta=6.28}' -> Potential instance."""
    m = _POTENTIAL_RE.match(spec.strip())
    if not m:
        raise ValueError(f"bad potential spec: {spec!r}")
    name, argstr = m.group(1), m.group(2)
    params: dict = {}
    if argstr:
        for item in argstr.split(","):
            if not item.strip():
                continue
            if "=" not in item:
                raise ValueError(f"bad potential parameter {item!r} (expected key=value)")
            key, val = item.split("=", 1)
            params[key.strip()] = val.strip()
    if name == "tabulated":
        path = params.pop("file", None)
        if path is None:
            raise ValueError("tabulated potential needs file=<csv path>")
        tail = float(params.pop("tail", 0.0))
        if params:
            raise ValueError(f"unknown potential parameter: {next(iter(params))!r}")
        return _load_tabulated(path, tail)
    return make_potential(name, **params)


def _load_tabulated(path: str, tail: float) -> TabulatedPotential:
    coeffs = {}
    with open(path, "r", encoding="utf-8") as fh:
        for idx, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ValueError(f"{path}: line {idx}: expected 'n,khat' pairs")
            try:
                n, v = int(parts[0]), float(parts[1])
            except ValueError as exc:
                raise ValueError(f"{path}: line {idx}: {exc}") from exc
            coeffs[n] = v
    if not coeffs or sorted(coeffs) != list(range(1, len(coeffs) + 1)):
        raise ValueError(f"{path}: coefficient rows must cover n = 1..M without gaps")
    table = [coeffs[n] for n in range(1, len(coeffs) + 1)]
    return TabulatedPotential(table, tail)


def _read_config_file(path: str) -> dict:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ValueError(f"cannot read config file {path!r}")
    known_sections = {"potential", "run", "optimizer"}
    merged: dict = {"potential": {}, "run": {}, "optimizer": {}}
    for section in parser.sections():
        if section not in known_sections:
            raise ValueError(f"unknown config section: {section!r}")
        for key, val in parser.items(section):
            if section == "run" and key not in _RUN_KEYS:
                raise ValueError(f"unknown config key: {key!r} in [run]")
            if section == "optimizer" and key not in _OPT_KEYS:
                raise ValueError(f"unknown config key: {key!r} in [optimizer]")
            merged[section][key] = val
    return merged


def _build_potential(args, filecfg: dict):
    if args.potential is not None:
        return parse_potential_spec(args.potential)
    pot_cfg = dict(filecfg.get("potential", {}))
    if not pot_cfg:
        raise ValueError("no potential given (use --potential or a [potential] section)")
    name = pot_cfg.pop("name", None)
    if name is None:
        raise ValueError("[potential] section needs a 'name' key")
    if name == "tabulated":
        path = pot_cfg.pop("file", None)
        if path is None:
            raise ValueError("tabulated potential needs file=<csv path>")
        tail = float(pot_cfg.pop("tail", 0.0))
        if pot_cfg:
            raise ValueError(f"unknown potential parameter: {next(iter(pot_cfg))!r}")
        return _load_tabulated(path, tail)
    return make_potential(name, **pot_cfg)


def _run_value(args, filecfg, key, cast, default):
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    section = filecfg.get("run", {})
    if key in section:
        return cast(section[key])
    return default


def _optimizer_params(args, filecfg, cutoff) -> optimize.OptimizerParams:
    section = dict(filecfg.get("optimizer", {}))
    kwargs = {
        "max_iters": int(section.get("max_iters", 100_000)),
        "grad_tol": float(section.get("grad_tol", 1e-10)),
        "initial_step": float(section.get("initial_step", 0.1)),
        "backtrack_factor": float(section.get("backtrack_factor", 0.5)),
        "armijo_c": float(section.get("armijo_c", 1e-4)),
    }
    return optimize.OptimizerParams(cutoff=cutoff, **kwargs)


def _load_points(args, filecfg) -> Configuration:
    if getattr(args, "points", None):
        return serialize.load_config(args.points)
    if getattr(args, "equispaced", None):
        return equispaced(args.equispaced)
    n = _run_value(args, filecfg, "n", int, None)
    if n is None:
        raise ValueError("no input points: give --points, --equispaced, or --n")
    r = _run_value(args, filecfg, "r", int, 1)
    seed = _run_value(args, filecfg, "seed", int, 0)
    return random_configuration(n, r, seed)


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_energy(args, filecfg) -> int:
    potential = _build_potential(args, filecfg)
    config = _load_points(args, filecfg)
    if config.r == 1:
        m_cut = _run_value(args, filecfg, "m", int, 40)
        report = spectral.energy_1d(config, potential, m_cut)
    else:
        radius = _run_value(args, filecfg, "radius", float, 8.0)
        report = spectral.energy_rd(config, potential, radius)
    _emit(serialize.dumps(report.to_dict()) + "\n", args.out)
    return 0


def cmd_equispaced(args, filecfg) -> int:
    potential = _build_potential(args, filecfg)
    n = _run_value(args, filecfg, "n", int, None)
    if n is None:
        raise ValueError("equispaced needs --n")
    j_cut = _run_value(args, filecfg, "j", int, 100)
    report = spectral.equispaced_energy(n, potential, j_cut)
    payload = report.to_dict()
    payload["mean_energy_bound"] = spectral.mean_energy_bound(
        n, potential, max(n * 2, _run_value(args, filecfg, "m", int, 40))
    )
    _emit(serialize.dumps(payload) + "\n", args.out)
    return 0


def cmd_minimize(args, filecfg) -> int:
    potential = _build_potential(args, filecfg)
    r = _run_value(args, filecfg, "r", int, 1)
    cutoff = (
        _run_value(args, filecfg, "m", int, 30)
        if r == 1
        else _run_value(args, filecfg, "radius", float, 8.0)
    )
    params = _optimizer_params(args, filecfg, cutoff)
    n = _run_value(args, filecfg, "n", int, None)
    if n is None:
        raise ValueError("minimize needs --n")
    starts = _run_value(args, filecfg, "starts", int, 8)
    seed = _run_value(args, filecfg, "seed", int, 0)
    cfg, report = optimize.multistart_global(n, r, potential, starts, seed, params)
    if args.trace:
        trace = optimize.minimize(cfg, potential, params)
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(serialize.trace_to_jsonl(trace))
    payload = {
        "points": [[float(v) for v in row] for row in cfg.coords],
        "energy": report.to_dict(),
        "n_starts": starts,
        "seed": seed,
    }
    _emit(serialize.dumps(payload) + "\n", args.out)
    return 0


def cmd_scan(args, filecfg) -> int:
    potential = _build_potential(args, filecfg)
    raw = args.n_list or filecfg.get("run", {}).get("n_list")
    if not raw:
        raise ValueError("scan needs --n-list (e.g. 2,4,8)")
    n_list = [int(tok) for tok in str(raw).replace(" ", "").split(",") if tok]
    cutoff = _run_value(args, filecfg, "m", int, 30)
    params = _optimizer_params(args, filecfg, cutoff)
    starts = _run_value(args, filecfg, "starts", int, 8)
    seed = _run_value(args, filecfg, "seed", int, 0)
    j_cut = _run_value(args, filecfg, "j", int, 1000)
    rows = analysis.equidistribution_scan(
        potential, n_list, params, n_starts=starts, seed=seed, j_cut=j_cut
    )
    lines = ["N,min_energy,min_energy_bound_mean,equispaced_energy,verdict,star_discrepancy"]
    for row in rows:
        lines.append(
            ",".join(
                [
                    str(row["N"]),
                    format(row["min_energy"], ".17g"),
                    format(row["min_energy_bound_mean"], ".17g"),
                    format(row["equispaced_energy"], ".17g"),
                    row["verdict"],
                    format(row["star_discrepancy"], ".17g"),
                ]
            )
        )
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_certify(args, filecfg) -> int:
    potential = _build_potential(args, filecfg)
    n = _run_value(args, filecfg, "n", int, None)
    if n is None:
        raise ValueError("certify needs --n")
    m_cut = _run_value(args, filecfg, "m", int, 1000)
    verdict = analysis.equispaced_verdict(potential, n, m_cut)
    _emit(serialize.dumps(verdict.to_dict()) + "\n", args.out)
    return 0


def cmd_poisson_check(args, filecfg) -> int:
    potential = _build_potential(args, filecfg)
    config = _load_points(args, filecfg)
    g_cut = _run_value(args, filecfg, "g", int, 10)
    if config.r == 1:
        m_cut = _run_value(args, filecfg, "m", int, 40)
        result = spatial.poisson_check(config, potential, m_cut, g_cut)
    else:
        radius = _run_value(args, filecfg, "radius", float, 6.0)
        result = spatial.poisson_check_rd(config, potential, radius, g_cut)
    ok = result.pop("ok")
    _emit(serialize.dumps(result) + "\n", args.out)
    return 0 if ok else 1


def cmd_demo_counterexample(args, filecfg) -> int:
    n0 = _run_value(args, filecfg, "n", int, 10)
    potential = make_potential("bump_perturbed", n0=n0)
    m_cut = max(2 * n0, 20)
    equi = spectral.equispaced_energy(n0, potential, 5)
    mean = spectral.mean_energy_bound(n0, potential, m_cut)
    verdict = analysis.equispaced_verdict(potential, n0, m_cut)
    params = _optimizer_params(args, filecfg, m_cut)
    starts = _run_value(args, filecfg, "starts", int, 8)
    seed = _run_value(args, filecfg, "seed", int, 0)
    cfg, report = optimize.multistart_global(n0, 1, potential, starts, seed, params)
    payload = {
        "n0": n0,
        "equispaced_energy": equi.to_dict(),
        "mean_energy_bound": mean,
        "verdict": verdict.to_dict(),
        "multistart_energy": report.to_dict(),
        "multistart_points": [[float(v) for v in row] for row in cfg.coords],
    }
    _emit(serialize.dumps(payload) + "\n", args.out)
    ok = verdict.kind == analysis.NOT_MINIMIZING and report.value < equi.value
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", help="INI config file with [potential]/[run]/[optimizer]")
    sp.add_argument("--potential", help="potential spec, e.g. paley_wiener{m=4,beta=1}")
    sp.add_argument("--n", type=int, help="number of points N")
    sp.add_argument("--r", type=int, help="torus dimension (default 1)")
    sp.add_argument("--m", type=int, help="1-D mode cutoff M")
    sp.add_argument("--radius", type=float, help="lattice-ball radius R (r >= 2)")
    sp.add_argument("--g", type=int, help="image cutoff G for spatial sums")
    sp.add_argument("--j", type=int, help="term cutoff J for equispaced energy")
    sp.add_argument("--seed", type=int, help="RNG seed")
    sp.add_argument("--starts", type=int, help="number of multistart runs")
    sp.add_argument("--out", help="write output to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torusenergy",
        description="Point energies, equilibria, and certificates on flat tori.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("energy", help="spectral energy of a configuration")
    _add_common(sp)
    sp.add_argument("--points", help="configuration file (CSV or JSON)")
    sp.add_argument("--equispaced", type=int, help="use N equispaced points")
    sp.set_defaults(func=cmd_energy)

    sp = sub.add_parser("equispaced", help="closed-form equispaced energy")
    _add_common(sp)
    sp.set_defaults(func=cmd_equispaced)

    sp = sub.add_parser("minimize", help="multistart equilibrium search")
    _add_common(sp)
    sp.add_argument("--trace", help="write the polish run's iterates as JSON lines")
    sp.set_defaults(func=cmd_minimize)

    sp = sub.add_parser("scan", help="equidistribution scan over N values (CSV)")
    _add_common(sp)
    sp.add_argument("--n-list", help="comma-separated N values, e.g. 2,4,8")
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("certify", help="equispaced-minimality verdict")
    _add_common(sp)
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("poisson-check", help="spectral vs image-sum energy")
    _add_common(sp)
    sp.add_argument("--points", help="configuration file (CSV or JSON)")
    sp.set_defaults(func=cmd_poisson_check)

    sp = sub.add_parser(
        "demo-counterexample",
        help="bump-perturbed potential where equispaced points fail to minimize",
    )
    _add_common(sp)
    sp.set_defaults(func=cmd_demo_counterexample)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        filecfg = _read_config_file(args.config) if args.config else {}
        return args.func(args, filecfg)
    except (ValueError, UnsupportedOperationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
