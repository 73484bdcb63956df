"""Command-line front end for the holonomy experiments.

Subcommands:

  sweep      P/P'/P_d over an (alpha, beta) grid against the reference loop
  linecut    the same quantities along beta at a single alpha
  adiabatic  full Schrodinger run of a composite sequence + summary JSON
  nmr        spin-3/2 quadrupole gauge-structure report (JSON)
  holonomy   single-loop holonomy debug dump (JSON)

Every command takes --out, --steps and --config.  A config file holds
``key = value`` lines ('#' starts a comment); command-line flags win over
file values.  CSV output is deterministic for a fixed config: 12
significant digits, LF endings, and a '#' comment header that echoes the
full configuration.  Wall-clock time appears only in JSON summaries.

Exit codes: 0 success, 2 bad configuration, 3 convergence failure,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from ._version import __version__
from .dynamics import (
    ORDER_NORMAL,
    ORDER_REVERSED,
    CompositeSchedule,
    StepSizeError,
    adiabatic_fidelity,
    evolve,
)
from .nqr import (
    NQRPoint,
    latitude_loop,
    nqr_frame,
    nqr_gauge_potential,
    nqr_hamiltonian,
    nqr_noncommutativity_demo,
    sector_potential,
    tycko_fixed_theta_holonomy,
)
from .transport import (
    ConvergenceError,
    commutator_norm,
    loop_holonomy,
    numeric_gauge_potential,
    population_difference,
    transport,
)
from .tripod import LoopSpec

__all__ = ["ConfigError", "main"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONVERGENCE = 3
EXIT_IO = 4

_ORDER_NAMES = {"normal": ORDER_NORMAL, "reversed": ORDER_REVERSED}


class ConfigError(Exception):
    """Bad flag value, bad config file, or inconsistent ranges."""


def _fmt(x) -> str:
    return "%.12g" % float(x)


def _read_config_file(path: str) -> dict:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, value = line.split("=", 1)
            values[key.strip()] = value.strip()
    return values


def _coerce(key: str, text: str, kind):
    try:
        if kind is bool:
            lowered = text.lower()
            if lowered in ("1", "true", "yes", "on"):
                return True
            if lowered in ("0", "false", "no", "off"):
                return False
            raise ValueError(text)
        return kind(text)
    except ValueError as exc:
        raise ConfigError(f"config key {key!r}: cannot parse {text!r}") from exc


def _resolve(args: argparse.Namespace, schema: dict) -> dict:
    """Merge defaults, config-file values, and flags (flags win)."""
    file_values = {}
    if args.config is not None:
        file_values = _read_config_file(args.config)
        unknown = set(file_values) - set(schema)
        if unknown:
            raise ConfigError(
                f"unknown config keys: {', '.join(sorted(unknown))} "
                f"(valid: {', '.join(sorted(schema))})"
            )
    resolved = {}
    for key, (kind, default) in schema.items():
        flag_value = getattr(args, key)
        if flag_value is not None:
            resolved[key] = flag_value
        elif key in file_values:
            resolved[key] = _coerce(key, file_values[key], kind)
        else:
            resolved[key] = default
    return resolved


def _echo_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return _fmt(v)
    return str(v)


def _header_lines(command: str, cfg: dict) -> list:
    lines = [f"# iongauge {__version__}", f"# command = {command}"]
    for key in sorted(cfg):
        if key in ("out", "config"):
            continue
        value = cfg[key]
        if value is None:
            continue
        lines.append(f"# {key} = {_echo_value(value)}")
    return lines


def _write_csv(path: str, header: list, columns: list, rows: list) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in header:
            fh.write(line + "\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def _write_json(path: str, record: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(record, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _config_echo(cfg: dict) -> dict:
    return {
        k: v for k, v in cfg.items() if k not in ("out", "config") and v is not None
    }


def _grid(lo: float, hi: float, count: int, label: str) -> np.ndarray:
    if count < 1:
        raise ConfigError(f"{label} count must be >= 1")
    if lo > hi:
        raise ConfigError(f"{label} range has min > max")
    return np.linspace(lo, hi, count)


def _require_steps(steps: int, minimum: int = 1000) -> int:
    if steps < minimum:
        raise ConfigError(f"steps must be >= {minimum}")
    return steps


# ---------------------------------------------------------------- commands


def _cmd_sweep(cfg: dict) -> int:
    steps = _require_steps(cfg["steps"])
    alphas = _grid(cfg["alpha_min"], cfg["alpha_max"], cfg["alpha_count"], "alpha")
    betas = _grid(cfg["beta_min"], cfg["beta_max"], cfg["beta_count"], "beta")
    u1 = loop_holonomy(LoopSpec.reference(), steps=steps, label="reference")
    rows = []
    for alpha in alphas:
        for beta in betas:
            u2 = loop_holonomy(
                LoopSpec(alpha=float(alpha), beta=float(beta)), steps=steps
            )
            pops = population_difference(u1, u2)
            rows.append(
                (
                    alpha,
                    beta,
                    pops["P"],
                    pops["P_prime"],
                    pops["P_d"],
                    u1.unitarity_defect,
                    u2.unitarity_defect,
                    int(u1.converged and u2.converged),
                )
            )
    _write_csv(
        cfg["out"],
        _header_lines("sweep", cfg),
        ["alpha", "beta", "P", "P_prime", "P_d", "u1_defect", "u2_defect", "converged"],
        rows,
    )
    return EXIT_OK


def _cmd_linecut(cfg: dict) -> int:
    steps = _require_steps(cfg["steps"])
    betas = _grid(cfg["beta_min"], cfg["beta_max"], cfg["beta_count"], "beta")
    if cfg["order"] not in _ORDER_NAMES:
        raise ConfigError("order must be 'normal' or 'reversed'")
    swap = cfg["order"] == "reversed"
    u1 = loop_holonomy(LoopSpec.reference(), steps=steps, label="reference")
    rows = []
    for beta in betas:
        u2 = loop_holonomy(LoopSpec(alpha=cfg["alpha"], beta=float(beta)), steps=steps)
        pops = population_difference(u1, u2)
        p, p_prime = pops["P"], pops["P_prime"]
        if swap:
            p, p_prime = p_prime, p
        rows.append((beta, p, p_prime, p_prime - p))
    _write_csv(
        cfg["out"],
        _header_lines("linecut", cfg),
        ["beta", "P", "P_prime", "P_d"],
        rows,
    )
    return EXIT_OK


def _cmd_adiabatic(cfg: dict) -> int:
    if cfg["order"] not in _ORDER_NAMES:
        raise ConfigError("order must be 'normal' or 'reversed'")
    if cfg["steps"] < 3:
        raise ConfigError("steps must be >= 3")
    started = time.perf_counter()
    first = LoopSpec.reference(omega0=cfg["omega0"], tau=cfg["tau"])
    second = LoopSpec(
        omega0=cfg["omega0"], tau=cfg["tau"], alpha=cfg["alpha"], beta=cfg["beta"]
    )
    schedule = CompositeSchedule(first, second, order=_ORDER_NAMES[cfg["order"]])
    psi0 = np.array([0.0, 1.0, 0.0, 0.0], dtype=complex)
    trajectory = evolve(schedule, psi0, dt=cfg["dt"])
    rows = [
        (
            trajectory.times[i],
            trajectory.populations["P_D1"][i],
            trajectory.populations["P_D2"][i],
            trajectory.populations["P_B1"][i],
            trajectory.populations["P_B2"][i],
            trajectory.norms[i],
        )
        for i in range(len(trajectory.times))
    ]
    _write_csv(
        cfg["out"],
        _header_lines("adiabatic", cfg),
        ["t", "P_D1", "P_D2", "P_B1", "P_B2", "norm"],
        rows,
    )
    pred = adiabatic_fidelity(schedule, steps=cfg["steps"], trajectory=trajectory)
    p_bright = trajectory.populations["P_B1"] + trajectory.populations["P_B2"]
    psi_final = trajectory.states[-1]
    summary = {
        "version": __version__,
        "config": _config_echo(cfg),
        "P_B_max": float(np.max(p_bright)),
        "fidelity": pred["fidelity"],
        "P_full": pred["P_full"],
        "P_holonomy": pred["P_holonomy"],
        "final_populations": {
            "p0": float(abs(psi_final[0]) ** 2),
            "p1": float(abs(psi_final[1]) ** 2),
            "p2": float(abs(psi_final[2]) ** 2),
            "p3": float(abs(psi_final[3]) ** 2),
        },
        "norm_drift": trajectory.norm_drift,
        "dt": trajectory.dt,
        "integration_steps": trajectory.steps,
        "holonomy_steps": cfg["steps"],
        "wall_time_s": time.perf_counter() - started,
    }
    _write_json(_json_path(cfg["out"]), summary)
    return EXIT_OK


def _json_path(csv_path: str) -> str:
    if csv_path.endswith(".csv"):
        return csv_path[:-4] + ".json"
    return csv_path + ".json"


def _cmd_nmr(cfg: dict) -> int:
    if cfg["steps"] < 3:
        raise ConfigError("steps must be >= 3")
    started = time.perf_counter()
    b = cfg["b"]
    if b <= 0:
        raise ConfigError("b must be positive")
    steps = cfg["steps"]

    # analytic sector blocks vs finite differences over the rotated frame
    rng = np.random.default_rng(20250211)
    fd_residual = 0.0
    block_residual = 0.0
    sx = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    sz = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
    for _ in range(12):
        theta = rng.uniform(0.2, np.pi - 0.2)
        varphi = rng.uniform(0.0, 2.0 * np.pi)

        def frame(th, ph, vp):
            return nqr_frame(NQRPoint(b=b, theta=th, varphi=vp))[:, [1, 2]]

        fd = numeric_gauge_potential(frame, (theta, 0.0, varphi))
        a_theta, a_varphi = nqr_gauge_potential(theta, "m12")
        fd_residual = max(
            fd_residual,
            float(np.linalg.norm(fd[0] - a_theta)),
            float(np.linalg.norm(fd[2] - a_varphi)),
        )
        two_level = -1j * (np.cos(theta) * sz / 2.0 - np.sin(theta) * sx)
        block_residual = max(
            block_residual, float(np.linalg.norm(a_varphi - two_level))
        )

    theta0 = float(np.arccos(1.0 / np.sqrt(3.0)))
    potential = sector_potential("m12")
    u_once = transport(latitude_loop(theta0, winding=1, steps=steps), potential)
    u_twice = transport(latitude_loop(theta0, winding=2, steps=steps), potential)
    fixed_theta_comm = commutator_norm(u_once, u_twice)
    closed_form = tycko_fixed_theta_holonomy(np.cos(theta0), 2.0 * np.pi)
    transport_residual = float(np.linalg.norm(u_once.matrix - closed_form))

    demo = nqr_noncommutativity_demo(steps=steps)

    eigs = np.sort(np.linalg.eigvalsh(nqr_hamiltonian(NQRPoint(b=b, theta=0.7, varphi=1.1))))
    low, high = eigs[:2], eigs[2:]
    summary = {
        "version": __version__,
        "config": _config_echo(cfg),
        "connection_fd_residual": fd_residual,
        "connection_block_residual": block_residual,
        "fixed_theta_commutator": fixed_theta_comm,
        "fixed_theta_transport_residual": transport_residual,
        "varying_loops_commutator": demo["commutator_norm"],
        "degeneracy": {
            "low": float(np.mean(low)),
            "low_spread": float(np.ptp(low)),
            "low_multiplicity": int(low.size),
            "high": float(np.mean(high)),
            "high_spread": float(np.ptp(high)),
            "high_multiplicity": int(high.size),
        },
        "wall_time_s": time.perf_counter() - started,
    }
    _write_json(cfg["out"], summary)
    return EXIT_OK


def _cmd_holonomy(cfg: dict) -> int:
    if cfg["steps"] < 3:
        raise ConfigError("steps must be >= 3")
    started = time.perf_counter()
    spec = LoopSpec(alpha=cfg["alpha"], beta=cfg["beta"])
    result = loop_holonomy(
        spec,
        steps=cfg["steps"],
        traceless=cfg["traceless"],
        refine=cfg["refine"],
    )
    summary = {
        "version": __version__,
        "config": _config_echo(cfg),
        "label": result.loop_label,
        "steps": result.steps,
        "unitarity_defect": result.unitarity_defect,
        "converged": result.converged,
        "wall_time_s": time.perf_counter() - started,
    }
    for i in range(2):
        for j in range(2):
            summary[f"u_{i}{j}_re"] = float(result.matrix[i, j].real)
            summary[f"u_{i}{j}_im"] = float(result.matrix[i, j].imag)
    _write_json(cfg["out"], summary)
    return EXIT_OK


# ------------------------------------------------------------------ driver

_SCHEMAS = {
    "sweep": {
        "alpha_min": (float, 1.0),
        "alpha_max": (float, 10.0),
        "alpha_count": (int, 25),
        "beta_min": (float, 0.0),
        "beta_max": (float, 1.0),
        "beta_count": (int, 25),
        "steps": (int, 20001),
        "out": (str, "sweep.csv"),
    },
    "linecut": {
        "alpha": (float, 7.0),
        "beta_min": (float, 0.0),
        "beta_max": (float, 1.0),
        "beta_count": (int, 25),
        "steps": (int, 20001),
        "order": (str, "normal"),
        "out": (str, "linecut.csv"),
    },
    "adiabatic": {
        "omega0": (float, 100.0),
        "tau": (float, 2.0),
        "alpha": (float, 7.0),
        "beta": (float, 0.5),
        "dt": (float, None),
        "order": (str, "normal"),
        "steps": (int, 20001),
        "out": (str, "adiabatic.csv"),
    },
    "nmr": {
        "b": (float, 1.0),
        "steps": (int, 20001),
        "out": (str, "nmr.json"),
    },
    "holonomy": {
        "alpha": (float, 1.0),
        "beta": (float, 0.0),
        "traceless": (bool, False),
        "refine": (bool, False),
        "steps": (int, 20001),
        "out": (str, "holonomy.json"),
    },
}

_RUNNERS = {
    "sweep": _cmd_sweep,
    "linecut": _cmd_linecut,
    "adiabatic": _cmd_adiabatic,
    "nmr": _cmd_nmr,
    "holonomy": _cmd_holonomy,
}

_HELP = {
    "sweep": "population difference over an (alpha, beta) grid",
    "linecut": "P, P' and P_d along beta at fixed alpha",
    "adiabatic": "integrate a composite sequence; CSV series + JSON summary",
    "nmr": "spin-3/2 quadrupole gauge-structure report",
    "holonomy": "single-loop holonomy debug dump",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iongauge",
        description="holonomy experiments for a four-level tripod system",
    )
    parser.add_argument("--version", action="version", version=f"iongauge {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, schema in _SCHEMAS.items():
        sp = sub.add_parser(name, help=_HELP[name])
        sp.add_argument("--config", default=None, help="key = value config file")
        for key, (kind, default) in schema.items():
            flag = "--" + key.replace("_", "-")
            if kind is bool:
                sp.add_argument(
                    flag, dest=key, action="store_const", const=True, default=None,
                    help=f"default: {default}",
                )
            else:
                sp.add_argument(
                    flag, dest=key, type=kind, default=None,
                    help=f"default: {default}",
                )
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _resolve(args, _SCHEMAS[args.command])
        return _RUNNERS[args.command](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, StepSizeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
