"""Command-line harness: simulate, converge, fbm, pvar.

Configs are flat JSON files; outputs are CSV with ``#`` metadata lines and
17-significant-digit floats, so a trajectory re-ingested as a driver
reproduces the original values bit for bit.  Exit codes: 0 success, 2
configuration/validation error, 3 runtime failure (infeasible start, failed
factorization, or non-convergence under ``--strict``).
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
import tempfile
from typing import Callable

import numpy as np

from . import diagnostics
from .convex import Ball, Box, MovingConvexSet, Polytope
from .errors import NoConvergence, RoughSweepError
from .fbm import RNG_NAME, FbmSpec, build_time_space_signal, sample_fbm
from .paths import Grid, SamplePath, p_variation_dissection
from .rough import VectorField, lift_piecewise_linear
from .solvers import (
    FIXED_POINT_TOL,
    MAX_PICARD_ITER,
    SweepingRun,
    catching_up,
    euler_catching_up,
    picard_rough,
    picard_young,
    skorokhod_decompose,
)

PROJ_TOL_ENV = "SWEEP_PROJ_TOL"
_VERSION_TAG = "roughsweep v0.1.0"

SCHEMES = ("catching_up", "skorokhod", "euler", "picard_young", "picard_rough")


class ConfigError(Exception):
    """Malformed or inconsistent configuration (CLI exit 2)."""


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _require(cfg: dict, key: str, where: str = "config"):
    if key not in cfg:
        raise ConfigError(f"missing key {key!r} in {where}")
    return cfg[key]


# ---------------------------------------------------------------------------
# CSV with metadata


def write_csv(path: str, metadata: list[tuple[str, str]], header: list[str], rows: np.ndarray):
    """Atomic CSV write: metadata as '# key: value' lines, then header, then rows."""
    rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
    out = []
    for key, value in metadata:
        out.append(f"# {key}: {value}")
    out.append(",".join(header))
    for row in rows:
        out.append(",".join(_fmt(v) for v in row))
    body = "\n".join(out) + "\n"
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(body)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_csv(path: str) -> tuple[dict, list[str], np.ndarray]:
    """Read a metadata-bearing CSV back into (metadata, header, rows)."""
    meta: dict[str, str] = {}
    header: list[str] | None = None
    data: list[list[float]] = []
    with open(path, "r") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                stripped = line.lstrip("#").strip()
                if ":" in stripped:
                    key, _, value = stripped.partition(":")
                    meta[key.strip()] = value.strip()
                continue
            if header is None:
                header = [c.strip() for c in line.split(",")]
                continue
            data.append([float(c) for c in line.split(",")])
    if header is None:
        raise ConfigError(f"no header row in {path}")
    return meta, header, np.asarray(data, dtype=np.float64)


# ---------------------------------------------------------------------------
# catalog: sets


def _vec(x, what: str) -> np.ndarray:
    try:
        v = np.asarray(x, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{what} is not numeric") from exc
    return np.atleast_1d(v)


def build_moving_set(spec: dict) -> MovingConvexSet:
    family = _require(spec, "family", "set")
    try:
        if family == "ball":
            base = Ball(_vec(_require(spec, "center", "set"), "center"),
                        float(_require(spec, "radius", "set")))
        elif family == "box":
            base = Box(_vec(_require(spec, "lower", "set"), "lower"),
                       _vec(_require(spec, "upper", "set"), "upper"))
        elif family == "polytope":
            base = Polytope(np.asarray(_require(spec, "normals", "set"), dtype=np.float64),
                            _vec(_require(spec, "offsets", "set"), "offsets"))
        else:
            raise ConfigError(f"unknown set family {family!r}")
        gamma0 = _vec(_require(spec, "gamma", "set"), "gamma")
        r = float(_require(spec, "r", "set"))
        if "velocity" in spec and np.any(_vec(spec["velocity"], "velocity") != 0.0):
            return MovingConvexSet.translating(base, _vec(spec["velocity"], "velocity"), gamma0, r)
        return MovingConvexSet.static(base, gamma0, r)
    except ValueError as exc:
        raise ConfigError(f"invalid set specification: {exc}") from exc


# ---------------------------------------------------------------------------
# catalog: vector fields and drifts


def _linear_tensor(spec: dict, e: int, d: int) -> tuple[np.ndarray, np.ndarray]:
    offset = np.zeros((e, d))
    if spec.get("offset") is not None:
        offset = np.asarray(spec["offset"], dtype=np.float64).reshape(e, d)
    tensor = np.zeros((e, d, e))
    if spec.get("tensor") is not None:
        tensor = np.asarray(spec["tensor"], dtype=np.float64).reshape(e, d, e)
    return offset, tensor


def build_field(spec: dict, e: int, d: int) -> VectorField:
    """Builtin integrand catalog: zero, constant, linear, scalar_trig."""
    name = _require(spec, "name", "field")
    if name == "zero":
        return VectorField(
            value=lambda x: np.zeros((e, d)),
            jacobian=lambda x: np.zeros((e, d, e)),
            bounds=(0.0, 0.0, 0.0),
            state_dim=e,
        )
    if name == "constant":
        mat = np.asarray(_require(spec, "matrix", "field"), dtype=np.float64).reshape(e, d)
        return VectorField(
            value=lambda x: mat,
            jacobian=lambda x: np.zeros((e, d, e)),
            bounds=(float(np.linalg.norm(mat)), 0.0, 0.0),
            state_dim=e,
        )
    if name == "linear":
        offset, tensor = _linear_tensor(spec, e, d)
        tnorm = float(np.linalg.norm(tensor.reshape(-1)))
        return VectorField(
            value=lambda x: offset + np.tensordot(tensor, x, axes=([-1], [0])),
            jacobian=lambda x: tensor,
            bounds=(float(np.linalg.norm(offset)) + 10.0 * tnorm, tnorm, 0.0),
            state_dim=e,
        )
    if name == "scalar_trig":
        if e != 1 or d != 1:
            raise ConfigError("scalar_trig requires a one-dimensional state and driver")
        amp = float(spec.get("amplitude", 1.0))
        freq = float(spec.get("frequency", 1.0))
        return VectorField(
            value=lambda x: np.array([[amp * np.cos(freq * x[0])]]),
            jacobian=lambda x: np.array([[[-amp * freq * np.sin(freq * x[0])]]]),
            bounds=(abs(amp), abs(amp * freq), abs(amp * freq * freq)),
            state_dim=1,
        )
    raise ConfigError(f"unknown field name {name!r}")


def build_drift(spec: dict, e: int) -> Callable[[np.ndarray], np.ndarray]:
    """Builtin drift catalog for the Euler scheme (state-to-state maps)."""
    name = _require(spec, "name", "field")
    if name == "zero":
        return lambda x: np.zeros(e)
    if name == "constant":
        vec = np.asarray(_require(spec, "vector", "field"), dtype=np.float64).reshape(e)
        return lambda x: vec
    if name == "linear":
        mat = np.asarray(_require(spec, "matrix", "field"), dtype=np.float64).reshape(e, e)
        off = np.zeros(e)
        if spec.get("offset") is not None:
            off = np.asarray(spec["offset"], dtype=np.float64).reshape(e)
        return lambda x: mat @ x + off
    if name == "scalar_trig":
        if e != 1:
            raise ConfigError("scalar_trig requires a one-dimensional state")
        amp = float(spec.get("amplitude", 1.0))
        freq = float(spec.get("frequency", 1.0))
        return lambda x: np.array([amp * np.cos(freq * x[0])])
    raise ConfigError(f"unknown field name {name!r}")


# ---------------------------------------------------------------------------
# catalog: drivers


def build_driver(spec: dict, n: int | None, horizon: float | None, seed: int) -> SamplePath:
    """Driver catalog: sampled fBm, analytic paths, or a re-ingested CSV."""
    kind = _require(spec, "kind", "driver")
    if kind == "csv":
        path = _require(spec, "path", "driver")
        try:
            _, header, rows = read_csv(path)
        except OSError as exc:
            raise ConfigError(f"cannot read driver csv {path!r}: {exc}") from exc
        if header[0] != "t":
            raise ConfigError("driver csv must have a leading 't' column")
        columns = spec.get("columns")
        if columns is None:
            idx = list(range(1, len(header)))
        else:
            try:
                idx = [header.index(c) for c in columns]
            except ValueError as exc:
                raise ConfigError(f"driver csv is missing a requested column: {exc}") from exc
        try:
            grid = Grid(rows[:, 0])
        except ValueError as exc:
            raise ConfigError(f"driver csv time column is not a grid: {exc}") from exc
        return SamplePath(grid, rows[:, idx])
    if n is None or horizon is None:
        raise ConfigError("non-csv drivers need 'n' and 'horizon' in the config")
    grid = Grid.uniform(n, horizon)
    t = grid.times
    if kind == "fbm":
        try:
            fspec = FbmSpec(
                hurst=float(_require(spec, "hurst", "driver")),
                horizon=horizon,
                n=n,
                dims=int(spec.get("dims", 1)),
                seed=seed,
            )
        except ValueError as exc:
            raise ConfigError(f"invalid fbm driver: {exc}") from exc
        noise = sample_fbm(fspec, method=spec.get("method", "hosking"))
        if spec.get("time_space", False):
            return build_time_space_signal(noise)
        return noise
    if kind == "analytic":
        name = _require(spec, "name", "driver")
        if name == "time":
            return SamplePath(grid, t[:, None])
        if name == "sine":
            amp = float(spec.get("amplitude", 1.0))
            freq = float(spec.get("frequency", 2.0 * np.pi))
            slope = float(spec.get("slope", 0.0))
            return SamplePath(grid, (amp * np.sin(freq * t) + slope * t)[:, None])
        if name == "circle":
            radius = float(spec.get("radius", 1.0))
            freq = float(spec.get("frequency", 2.0 * np.pi))
            vals = np.column_stack(
                [radius * (np.cos(freq * t) - 1.0), radius * np.sin(freq * t)]
            )
            return SamplePath(grid, vals)
        raise ConfigError(f"unknown analytic driver {name!r}")
    raise ConfigError(f"unknown driver kind {kind!r}")


# ---------------------------------------------------------------------------
# config handling


def load_config(path: str) -> dict:
    try:
        with open(path, "r") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg


def resolve_proj_tol(cfg: dict) -> float:
    env = os.environ.get(PROJ_TOL_ENV)
    if env is not None:
        try:
            value = float(env)
        except ValueError as exc:
            raise ConfigError(f"{PROJ_TOL_ENV} is not a number: {env!r}") from exc
    else:
        value = float(cfg.get("proj_tol", 1e-10))
    if value <= 0.0:
        raise ConfigError("proj_tol must be positive")
    return value


def _config_echo(cfg: dict) -> str:
    return json.dumps(cfg, sort_keys=True, separators=(",", ":"))


def _dispatch_scheme(cfg: dict, proj_tol: float) -> tuple[SweepingRun, MovingConvexSet]:
    scheme = _require(cfg, "scheme")
    if scheme not in SCHEMES:
        raise ConfigError(f"unknown scheme {scheme!r}; choose one of {', '.join(SCHEMES)}")
    m = build_moving_set(_require(cfg, "set"))
    a = _vec(_require(cfg, "a"), "a")
    seed = int(cfg.get("seed", 0))
    tol = float(cfg.get("tol", FIXED_POINT_TOL))
    max_iter = int(cfg.get("max_iter", MAX_PICARD_ITER))
    n = int(cfg["n"]) if "n" in cfg else None
    horizon = float(cfg["horizon"]) if "horizon" in cfg else None

    if scheme == "catching_up":
        if n is None or horizon is None:
            raise ConfigError("catching_up needs 'n' and 'horizon'")
        return catching_up(m, a, Grid.uniform(n, horizon), proj_tol=proj_tol), m

    driver = build_driver(_require(cfg, "driver"), n, horizon, seed)
    if scheme == "skorokhod":
        return skorokhod_decompose(m, a, driver, proj_tol=proj_tol), m
    if scheme == "euler":
        drift = build_drift(_require(cfg, "field"), a.size)
        return euler_catching_up(m, a, drift, driver, proj_tol=proj_tol), m
    d = driver.values.shape[1] if driver.values.ndim == 2 else 1
    field = build_field(_require(cfg, "field"), a.size, d)
    if scheme == "picard_young":
        run = picard_young(m, a, field, driver, tol=tol, max_iter=max_iter, proj_tol=proj_tol)
    else:
        lift = lift_piecewise_linear(driver)
        run = picard_rough(m, a, field, lift, tol=tol, max_iter=max_iter, proj_tol=proj_tol)
    return run, m


# ---------------------------------------------------------------------------
# subcommands


def run_simulate(cfg: dict, out: str, repro: bool, strict: bool) -> None:
    proj_tol = resolve_proj_tol(cfg)
    run, m = _dispatch_scheme(cfg, proj_tol)
    if strict and not run.converged:
        raise NoConvergence(
            f"{run.scheme} did not converge within {run.iterations} iterations"
        )
    feas = diagnostics.feasibility_report(run, m, proj_tol=proj_tol)
    y_var = diagnostics.p_variation(run.y, 1.0)
    e = run.state_dim
    header = (
        ["t"]
        + [f"X_{i+1}" for i in range(e)]
        + [f"H_{i+1}" for i in range(e)]
        + [f"Y_{i+1}" for i in range(e)]
    )
    xv, hv, yv = run.x.values, run.h.values, run.y.values
    rows = np.column_stack([run.grid.times, xv, hv, yv])
    meta = [
        ("generator", f"{_VERSION_TAG} simulate"),
        ("config", _config_echo(cfg)),
        ("rng", RNG_NAME),
        ("seed", str(int(cfg.get("seed", 0)))),
        ("proj_tol", _fmt(proj_tol)),
        ("scheme", run.scheme),
        ("iterations", str(run.iterations)),
        ("converged", "true" if run.converged else "false"),
        ("feasibility_max", _fmt(feas.max_violation)),
        ("y_1var", _fmt(y_var)),
    ]
    if not repro:
        meta.append(("created", datetime.datetime.now().isoformat()))
    write_csv(out, meta, header, rows)


def run_converge(cfg: dict, out: str, repro: bool, strict: bool) -> None:
    proj_tol = resolve_proj_tol(cfg)
    n_list = [int(v) for v in _require(cfg, "n_list")]
    if not n_list:
        raise ConfigError("n_list cannot be empty")
    horizon = float(_require(cfg, "horizon"))
    fine_cfg = dict(cfg)
    fine_cfg["n"] = n_list[-1]
    driver_spec = cfg.get("driver")
    fine_driver = (
        build_driver(driver_spec, n_list[-1], horizon, int(cfg.get("seed", 0)))
        if driver_spec is not None
        else None
    )
    runs: list[SweepingRun] = []

    def factory(grid: Grid, driver: SamplePath | None) -> SweepingRun:
        sub = dict(fine_cfg)
        sub["n"] = grid.n_segments
        run, _ = _dispatch_scheme_with_driver(sub, proj_tol, driver)
        runs.append(run)
        return run

    try:
        report = diagnostics.convergence_study(
            factory, n_list, horizon, fine_driver=fine_driver,
            theory_order=_theory_order(cfg),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if strict and not all(r.converged for r in runs):
        raise NoConvergence("a ladder run did not converge")
    rows = [
        [float(n), gap, report.ratios[i - 1] if i >= 1 else float("nan")]
        for i, (n, gap) in enumerate(zip(report.grid_sizes, report.sup_gaps))
    ]
    meta = [
        ("generator", f"{_VERSION_TAG} converge"),
        ("config", _config_echo(cfg)),
        ("rng", RNG_NAME),
        ("seed", str(int(cfg.get("seed", 0)))),
        ("empirical_order", _fmt(report.empirical_order)),
        ("theory_order", _fmt(report.theory_order)),
    ]
    if not repro:
        meta.append(("created", datetime.datetime.now().isoformat()))
    write_csv(out, meta, ["n", "sup_gap", "ratio"], np.asarray(rows).reshape(-1, 3))


def _dispatch_scheme_with_driver(cfg: dict, proj_tol: float, driver: SamplePath | None):
    """Like _dispatch_scheme, but with a pre-built (restricted) driver."""
    if driver is None:
        return _dispatch_scheme(cfg, proj_tol)
    scheme = _require(cfg, "scheme")
    if scheme not in SCHEMES:
        raise ConfigError(f"unknown scheme {scheme!r}")
    m = build_moving_set(_require(cfg, "set"))
    a = _vec(_require(cfg, "a"), "a")
    tol = float(cfg.get("tol", FIXED_POINT_TOL))
    max_iter = int(cfg.get("max_iter", MAX_PICARD_ITER))
    if scheme == "catching_up":
        return catching_up(m, a, driver.grid, proj_tol=proj_tol), m
    if scheme == "skorokhod":
        return skorokhod_decompose(m, a, driver, proj_tol=proj_tol), m
    if scheme == "euler":
        drift = build_drift(_require(cfg, "field"), a.size)
        return euler_catching_up(m, a, drift, driver, proj_tol=proj_tol), m
    d = driver.values.shape[1] if driver.values.ndim == 2 else 1
    field = build_field(_require(cfg, "field"), a.size, d)
    if scheme == "picard_young":
        run = picard_young(m, a, field, driver, tol=tol, max_iter=max_iter, proj_tol=proj_tol)
    else:
        run = picard_rough(
            m, a, field, lift_piecewise_linear(driver), tol=tol, max_iter=max_iter,
            proj_tol=proj_tol,
        )
    return run, m


def _theory_order(cfg: dict) -> float:
    if "theory_order" in cfg:
        return float(cfg["theory_order"])
    set_spec = cfg.get("set", {})
    alpha = 1.0
    if "velocity" in set_spec:
        alpha = 1.0  # translation tubes are Lipschitz in time
    driver_spec = cfg.get("driver") or {}
    inv_q = 1.0
    if driver_spec.get("kind") == "fbm":
        inv_q = float(driver_spec.get("hurst", 1.0))
    return min(alpha, inv_q)


def run_fbm(cfg: dict, out: str, repro: bool) -> None:
    try:
        spec = FbmSpec(
            hurst=float(_require(cfg, "hurst")),
            horizon=float(_require(cfg, "horizon")),
            n=int(_require(cfg, "n")),
            dims=int(cfg.get("dims", 1)),
            seed=int(cfg.get("seed", 0)),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid fbm config: {exc}") from exc
    method = cfg.get("method", "hosking")
    try:
        path = sample_fbm(spec, method=method)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    header = ["t"] + [f"B{k+1}" for k in range(spec.dims)]
    rows = np.column_stack([path.grid.times, path.values])
    meta = [
        ("generator", f"{_VERSION_TAG} fbm"),
        ("config", _config_echo(cfg)),
        ("rng", RNG_NAME),
        ("seed", str(spec.seed)),
        ("hurst", _fmt(spec.hurst)),
        ("method", method),
    ]
    if not repro:
        meta.append(("created", datetime.datetime.now().isoformat()))
    write_csv(out, meta, header, rows)


def run_pvar(path: str, p: float) -> None:
    try:
        _, header, rows = read_csv(path)
    except OSError as exc:
        raise ConfigError(f"cannot read {path!r}: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"{path!r} is not a numeric CSV: {exc}") from exc
    if not header or header[0] != "t" or rows.ndim != 2 or rows.shape[1] < 2:
        raise ConfigError("pvar input must have a 't' column and at least one value column")
    try:
        grid = Grid(rows[:, 0])
        sample = SamplePath(grid, rows[:, 1:])
        value, dissection = p_variation_dissection(sample, p)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    print(f"p_variation {_fmt(value)}")
    print("dissection " + " ".join(str(i) for i in dissection))


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="roughsweep",
        description="Sweeping processes driven by Young and rough signals.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, text in (
        ("simulate", "run one scheme from a config and write the trajectory CSV"),
        ("converge", "run a grid-refinement ladder and write the gap table"),
        ("fbm", "sample fractional Brownian motion and write it as CSV"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument("--out", required=True, help="output CSV path")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--repro", action="store_true", help="omit timestamps for byte-stable output")
        if name != "fbm":
            p.add_argument("--strict", action="store_true", help="exit 3 when a run fails to converge")

    p = sub.add_parser("pvar", help="p-variation of a CSV path with the optimizing dissection")
    p.add_argument("--path", required=True, help="input CSV (leading column t)")
    p.add_argument("--p", type=float, required=True, help="variation exponent, >= 1")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "pvar":
            run_pvar(args.path, args.p)
            return 0
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg["seed"] = int(args.seed)
        if args.command == "simulate":
            run_simulate(cfg, args.out, repro=args.repro, strict=args.strict)
        elif args.command == "converge":
            run_converge(cfg, args.out, repro=args.repro, strict=args.strict)
        elif args.command == "fbm":
            run_fbm(cfg, args.out, repro=args.repro)
        return 0
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RoughSweepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
