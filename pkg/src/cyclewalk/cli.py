"""
Command line entry point.

    cyclewalk eigen     --config cfg.json --out eigen.csv
    cyclewalk evolve    --n 200 --a 0.7071067811865476 --p0 0.7071067811865476 \
                        --phi 1.5707963267948966 --t-max 150 --stride 50 --out p.csv
    cyclewalk limiting  --config cfg.json --with-oracle --out pi.csv
    cyclewalk symmetry  --config cfg.json --t-max 10000 --out results/
    cyclewalk sweep     --grid grid.json --out sweep.csv

Every run writes a JSON manifest next to its output. CSV bodies depend only
on the resolved inputs, so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from . import __version__
from .evolution import probability_trace
from .kernels import BACKEND
from .limiting import (
    ORACLE_MAX_N,
    OracleScaleExceeded,
    limiting_distribution,
    limiting_projector_oracle,
)
from .model import ConstraintViolation, DistanceDistribution, WalkConfig, validate_config
from .spectral import eigen_system
from .symmetry import (
    InsufficientSamples,
    envelope_slope,
    log_grid,
    mixing_profile,
    solve_symmetric_phase,
    symmetry_residual,
    variation_trace,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_ORACLE = 4

DEFAULT_EPSILONS = log_grid(0.5, 0.005, 9)
DEFAULT_SLOPE_WINDOW = (100, 10_000)


class ConfigError(ValueError):
    pass


class IoError(OSError):
    pass


def fmt(x: float) -> str:
    """Shortest round-trip decimal form of a double."""
    return repr(float(x))


# ---------------------------------------------------------------- config


def _read_json(path: str | os.PathLike) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc


def _flatten(doc: Any) -> dict[str, Any]:
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    coin = doc.get("coin", {}) or {}
    init = doc.get("init", {}) or {}
    if not isinstance(coin, dict) or not isinstance(init, dict):
        raise ConfigError("'coin' and 'init' must be objects")
    raw = {"n": doc.get("n")}
    raw.update({k: coin.get(k) for k in ("a", "b")})
    raw.update({k: init.get(k) for k in ("x0", "p0", "q0", "phi")})
    return raw


def resolve_config(args: argparse.Namespace) -> WalkConfig:
    """JSON file first, then command-line overrides."""
    raw: dict[str, Any] = {k: None for k in ("n", "a", "b", "x0", "p0", "q0", "phi")}
    if getattr(args, "config", None):
        raw.update(_flatten(_read_json(args.config)))
    # an overridden amplitude drops its file partner so it is re-completed to unit norm
    if args.a is not None:
        raw["a"], raw["b"] = args.a, None
    if args.p0 is not None:
        raw["p0"], raw["q0"] = args.p0, None
    for key in ("n", "x0", "phi"):
        if getattr(args, key) is not None:
            raw[key] = getattr(args, key)
    missing = [k for k in ("n", "a", "p0") if raw[k] is None]
    if missing:
        raise ConfigError(f"missing config values: {', '.join(missing)}")
    if raw["x0"] is None:
        raw["x0"] = 0
    if raw["phi"] is None:
        raw["phi"] = 0.0
    try:
        return validate_config(raw)
    except (ConstraintViolation, TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


# ---------------------------------------------------------------- output


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _write(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror}") from exc


def _write_manifest(path: Path, command: str, configs: list[WalkConfig],
                    outputs: list[Path], started: float, extra: dict | None = None) -> None:
    manifest = {
        "command": command,
        "configs": [c.to_dict() for c in configs],
        "outputs": [str(p) for p in outputs],
        "version": __version__,
        "backend": BACKEND,
        "duration_s": time.perf_counter() - started,
    }
    if extra:
        manifest.update(extra)
    _write(path, json.dumps(manifest, indent=2) + "\n")


def _manifest_path(out: Path) -> Path:
    return out.with_name(out.name + ".manifest.json")


def _signed_rows(dist: DistanceDistribution) -> list[tuple[int, float]]:
    d, p = dist.signed()
    return list(zip(d.tolist(), p.tolist()))


# ---------------------------------------------------------------- commands


def eigen_csv(config: WalkConfig) -> str:
    rows = (
        (p.j, p.label, fmt(p.theta), fmt(p.u.real), fmt(p.u.imag), fmt(p.z), fmt(p.m))
        for p in eigen_system(config.coin, config.n)
    )
    return csv_text(("j", "sign", "theta", "re_u", "im_u", "z", "m"), rows)


def evolve_csv(config: WalkConfig, t_max: int, stride: int) -> str:
    trace = probability_trace(config, t_max, stride)
    rows = (
        (t, d, fmt(p))
        for t, dist in zip(trace.times, trace.dists)
        for d, p in _signed_rows(dist)
    )
    return csv_text(("t", "d", "p"), rows)


def limiting_csv(config: WalkConfig, with_oracle: bool) -> str:
    if with_oracle and config.n > ORACLE_MAX_N:
        raise OracleScaleExceeded(f"--with-oracle limited to n <= {ORACLE_MAX_N}")
    br = limiting_distribution(config)
    d, pi = br.pi.signed()
    s2 = br.s2[d % config.n]
    header = ["d", "pi", "s2"]
    cols = [d.tolist(), [fmt(x) for x in pi], [fmt(x) for x in s2]]
    if with_oracle:
        oracle = limiting_projector_oracle(config).probs[d % config.n]
        header += ["pi_oracle", "abs_err"]
        cols += [[fmt(x) for x in oracle], [fmt(x) for x in np.abs(pi - oracle)]]
    return csv_text(header, zip(*cols))


def symmetry_outputs(config: WalkConfig, t_max: int, epsilons: Sequence[float],
                     window: tuple[int, int] = DEFAULT_SLOPE_WINDOW) -> tuple[str, str, str]:
    """(variation CSV, mixing CSV, report JSON) for one config."""
    trace = variation_trace(config, t_max)
    v_csv = csv_text(("t", "V"), zip(trace.times.tolist(), (fmt(v) for v in trace.v)))
    reports = mixing_profile(trace, epsilons)
    m_csv = csv_text(
        ("epsilon", "M_epsilon"),
        ((fmt(r.epsilon), r.m_epsilon if r.converged else "not_converged") for r in reports),
    )
    lo, hi = window[0], min(window[1], t_max)
    try:
        slope = envelope_slope(trace, lo, hi)
    except (InsufficientSamples, ValueError):
        slope = None
    report = {
        "residual": symmetry_residual(config.coin, config.init),
        "symmetric_phases": list(solve_symmetric_phase(config.coin, config.init.p0)),
        "envelope_slope": slope,
        "slope_window": [lo, hi],
        "t_max": t_max,
    }
    return v_csv, m_csv, json.dumps(report, indent=2) + "\n"


SWEEP_HEADER = ("n", "a", "b", "p0", "q0", "phi", "x0", "residual", "max_asymmetry")
SWEEP_DYNAMIC = ("v_final", "v_tail_max", "m_epsilon")


def _grid_configs(spec: Any) -> tuple[list[WalkConfig], dict[str, Any]]:
    if not isinstance(spec, dict):
        raise ConfigError("grid spec must be a JSON object")
    try:
        if "points" in spec:
            raws = [dict(pt) for pt in spec["points"]]
            for raw in raws:
                raw.setdefault("x0", spec.get("x0", 0))
        else:
            axes = [list(spec.get(k, [])) for k in ("n", "a", "p0", "phi")]
            raws = [
                {"n": n, "a": a, "p0": p0, "phi": phi, "x0": spec.get("x0", 0)}
                for n, a, p0, phi in itertools.product(*axes)
            ]
        configs = [validate_config(raw) for raw in raws]
    except (ConstraintViolation, TypeError, ValueError, KeyError) as exc:
        raise ConfigError(f"bad grid spec: {exc}") from exc
    dynamic = {k: spec[k] for k in ("t_max", "epsilon") if k in spec}
    return configs, dynamic


def _sweep_row(config: WalkConfig, dynamic: dict[str, Any]) -> list[Any]:
    pi = limiting_distribution(config).pi
    c, i = config.coin, config.init
    row: list[Any] = [config.n, fmt(c.a), fmt(c.b), fmt(i.p0), fmt(i.q0), fmt(i.phi), i.x0,
                      fmt(symmetry_residual(c, i)), fmt(pi.max_asymmetry())]
    if "t_max" in dynamic:
        trace = variation_trace(config, int(dynamic["t_max"]))
        tail = trace.v[int(0.9 * len(trace)):]
        row += [fmt(trace.v[-1]), fmt(tail.max())]
        if "epsilon" in dynamic:
            rep = mixing_profile(trace, [float(dynamic["epsilon"])])[0]
            row.append(rep.m_epsilon if rep.converged else "not_converged")
        else:
            row.append("")
    return row


def sweep_threads() -> int:
    env = os.environ.get("CYCLEWALK_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"CYCLEWALK_THREADS must be an integer (got {env!r})") from None
    return os.cpu_count() or 1


def sweep_csv(configs: list[WalkConfig], dynamic: dict[str, Any]) -> str:
    header = list(SWEEP_HEADER) + (list(SWEEP_DYNAMIC) if "t_max" in dynamic else [])
    with ThreadPoolExecutor(max_workers=sweep_threads()) as pool:
        rows = list(pool.map(lambda cfg: _sweep_row(cfg, dynamic), configs))
    return csv_text(header, rows)


# ---------------------------------------------------------------- argparse


def _parse_epsilons(text: str) -> list[float]:
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --epsilon-grid: {exc}") from exc
    if not values or any(not math.isfinite(v) or v <= 0 for v in values):
        raise ConfigError("--epsilon-grid needs positive values")
    if any(b >= a for a, b in zip(values, values[1:])):
        raise ConfigError("--epsilon-grid must be strictly descending")
    return values


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--n", type=int, help="cycle size")
    p.add_argument("--a", type=float, help="coin parameter a (b = sqrt(1 - a^2))")
    p.add_argument("--p0", type=float, help="L amplitude of the initial coin (q0 = sqrt(1 - p0^2))")
    p.add_argument("--phi", type=float, help="relative phase of the R amplitude")
    p.add_argument("--x0", type=int, help="starting node")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cyclewalk", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eigen", help="closed-form eigen table")
    _add_config_flags(p)
    p.add_argument("--out", required=True)

    p = sub.add_parser("evolve", help="P(d, t) trace")
    _add_config_flags(p)
    p.add_argument("--t-max", type=int, required=True)
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--out", required=True)

    p = sub.add_parser("limiting", help="exact limiting distribution")
    _add_config_flags(p)
    p.add_argument("--with-oracle", action="store_true",
                   help=f"add the eigenprojector oracle column (n <= {ORACLE_MAX_N})")
    p.add_argument("--out", required=True)

    p = sub.add_parser("symmetry", help="V(t), mixing times and symmetry report")
    _add_config_flags(p)
    p.add_argument("--t-max", type=int, required=True)
    p.add_argument("--epsilon-grid", help="comma separated, descending")
    p.add_argument("--slope-window", help="t_lo,t_hi for the envelope fit")
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("sweep", help="batch over a parameter grid")
    p.add_argument("--grid", "--config", dest="grid", required=True, help="JSON grid spec")
    p.add_argument("--out", required=True)
    return parser


def _run(args: argparse.Namespace) -> None:
    started = time.perf_counter()
    out = Path(args.out)
    if args.command == "sweep":
        configs, dynamic = _grid_configs(_read_json(args.grid))
        _write(out, sweep_csv(configs, dynamic))
        _write_manifest(_manifest_path(out), "sweep", configs, [out], started,
                        {"grid": str(args.grid), "dynamic": dynamic,
                         "threads": sweep_threads()})
        return

    config = resolve_config(args)
    if args.command == "eigen":
        _write(out, eigen_csv(config))
    elif args.command == "evolve":
        if args.t_max < 0 or args.stride < 1:
            raise ConfigError("need --t-max >= 0 and --stride >= 1")
        _write(out, evolve_csv(config, args.t_max, args.stride))
    elif args.command == "limiting":
        _write(out, limiting_csv(config, args.with_oracle))
    elif args.command == "symmetry":
        if args.t_max < 1:
            raise ConfigError("need --t-max >= 1")
        eps = _parse_epsilons(args.epsilon_grid) if args.epsilon_grid else DEFAULT_EPSILONS
        window = DEFAULT_SLOPE_WINDOW
        if args.slope_window:
            try:
                lo, hi = (int(x) for x in args.slope_window.split(","))
            except ValueError:
                raise ConfigError("--slope-window must be 't_lo,t_hi'") from None
            window = (lo, hi)
        texts = symmetry_outputs(config, args.t_max, eps, window)
        paths = [out / "variation.csv", out / "mixing.csv", out / "report.json"]
        for path, text in zip(paths, texts):
            _write(path, text)
        _write_manifest(out / "manifest.json", "symmetry", [config], paths, started,
                        {"t_max": args.t_max, "epsilon_grid": list(eps)})
        return
    _write_manifest(_manifest_path(out), args.command, [config], [out], started,
                    {k: getattr(args, k) for k in ("t_max", "stride", "with_oracle")
                     if hasattr(args, k)})


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OracleScaleExceeded as exc:
        print(f"oracle scale exceeded: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except IoError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
