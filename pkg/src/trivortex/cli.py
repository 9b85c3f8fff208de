"""Command-line interface.

Subcommands: simulate, simulate-reduced, compare, portrait, verify,
transforms, equilibria.  Numeric inputs are comma-separated decimals;
alternatively every option of a subcommand can come from a JSON file passed
as --config (explicit flags win).  Exit codes: 0 success, 2 validation
error, 3 numerical failure.

CSV-producing commands also render a matplotlib figure next to the output
file (same stem, .png) unless --no-fig is given.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import figures
from .core import VortexConfig, shape_map, validate_strengths
from .errors import NumericalError, ValidationError
from .full_dynamics import (
    IntegratorOptions,
    Termination,
    integrate_full,
    write_trajectory_csv,
)
from .portrait import (
    Chart,
    default_levels,
    sample_portrait,
    write_grid_csv,
    write_portrait_svg,
)
from .reduced_dynamics import (
    ReducedState,
    compare_flows,
    find_relative_equilibria,
    integrate_reduced,
    reduced_hamiltonian,
    write_reduced_csv,
)
from .shape_algebra import (
    PauliCoords,
    make_pauli,
    special_form_residual,
    to_pauli_coords,
    verify_pauli,
)
from .full_dynamics import canonical_bracket, oriented_area_field, squared_side_field
from .shape_algebra import Covector, bracket_V
from .transforms import check_symplectic, mixed_to_pauli, t1_forward, t2_forward, t3_forward


def _float_list(text, name: str) -> list[float]:
    try:
        if isinstance(text, str):
            return [float(part) for part in text.split(",")]
        return [float(v) for v in text]
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"could not parse {name}: {text!r}") from exc


def _floats(text, n: int, name: str) -> list[float]:
    vals = _float_list(text, name)
    if len(vals) != n:
        raise ValidationError(f"{name} needs {n} comma-separated values, got {len(vals)}")
    return vals


def _require(args: argparse.Namespace, *names: str) -> None:
    for name in names:
        if getattr(args, name.replace("-", "_")) is None:
            raise ValidationError(f"missing required option --{name}")


def _merge_config(args: argparse.Namespace) -> None:
    if getattr(args, "config", None) is None:
        return
    try:
        data = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"could not read config {args.config}: {exc}") from exc
    if not isinstance(data, dict):
        raise ValidationError("config file must hold a JSON object")
    for key, value in data.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr) and getattr(args, attr) is None:
            if isinstance(value, list):
                value = ",".join(str(v) for v in value)
            setattr(args, attr, value)


def _strengths(args: argparse.Namespace):
    _require(args, "gammas")
    return validate_strengths(*_floats(args.gammas, 3, "--gammas"))


def _config(args: argparse.Namespace) -> VortexConfig:
    _require(args, "z")
    vals = _floats(args.z, 6, "--z")
    return VortexConfig(np.array(vals[0::2]) + 1j * np.array(vals[1::2]))


def _options(args: argparse.Namespace) -> IntegratorOptions:
    kwargs = {}
    if getattr(args, "rtol", None) is not None:
        kwargs["rel_tol"] = float(args.rtol)
    if getattr(args, "atol", None) is not None:
        kwargs["abs_tol"] = float(args.atol)
    try:
        return IntegratorOptions(**kwargs)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc


def _maybe_figure(args: argparse.Namespace, out: Path, render) -> None:
    if getattr(args, "no_fig", False):
        return
    render(out.with_suffix(".png"))


def _check_termination(termination: Termination) -> None:
    if termination is Termination.STEP_FAILURE:
        raise NumericalError("integration failed: step size underflow")


def cmd_simulate(args: argparse.Namespace) -> int:
    s = _strengths(args)
    cfg = _config(args)
    _require(args, "t-end", "out")
    traj = integrate_full(cfg, s, float(args.t_end), _options(args))
    _check_termination(traj.termination)
    out = Path(args.out)
    write_trajectory_csv(traj, str(out))
    _maybe_figure(args, out, lambda p: figures.render_trajectory_figure(traj, str(p)))
    drift = traj.drift_summary()
    print(
        json.dumps(
            {
                "samples": len(traj.times),
                "termination": traj.termination.value,
                "energy_drift": drift["h"],
                "theta0_drift": drift["theta0"],
            }
        )
    )
    return 0


def cmd_simulate_reduced(args: argparse.Namespace) -> int:
    s = _strengths(args)
    _require(args, "a", "t-end", "out")
    a = PauliCoords(np.array(_floats(args.a, 4, "--a")))
    pb = make_pauli(s, _parse_x(args))
    try:
        st0 = ReducedState.from_coords(a)
        rt = integrate_reduced(st0, pb, float(args.t_end), _options(args))
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    _check_termination(rt.termination)
    out = Path(args.out)
    write_reduced_csv(rt, str(out))
    _maybe_figure(args, out, lambda p: figures.render_reduced_figure(rt, str(p)))
    print(
        json.dumps(
            {
                "samples": len(rt.times),
                "termination": rt.termination.value,
                "casimir_drift": float(rt.casimir_drift.max()),
                "energy_drift": rt.energy_drift(),
            }
        )
    )
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    s = _strengths(args)
    cfg = _config(args)
    _require(args, "t-end")
    opts = _options(args)
    pb = make_pauli(s, _parse_x(args))
    t_end = float(args.t_end)
    full = integrate_full(cfg, s, t_end, opts)
    _check_termination(full.termination)
    a0 = to_pauli_coords(shape_map(cfg), pb)
    reduced = integrate_reduced(ReducedState.from_coords(a0), pb, t_end, opts)
    _check_termination(reduced.termination)
    print(
        json.dumps(
            {
                "sup_deviation": compare_flows(full, pb, reduced),
                "casimir_drift": float(reduced.casimir_drift.max()),
                "energy_drift": reduced.energy_drift(),
            }
        )
    )
    return 0


def cmd_portrait(args: argparse.Namespace) -> int:
    s = _strengths(args)
    _require(args, "mu", "out")
    pb = make_pauli(s, _parse_x(args))
    try:
        chart = Chart(args.chart or "alpha")
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    try:
        grid = sample_portrait(
            float(args.mu), pb, chart, int(args.nu or 96), int(args.nv or 192)
        )
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    levels = (
        np.array(_float_list(args.levels, "--levels"))
        if args.levels is not None
        else default_levels(grid)
    )
    out = Path(args.out)
    if out.suffix.lower() == ".svg":
        write_portrait_svg(grid, levels, str(out))
    elif out.suffix.lower() == ".csv":
        write_grid_csv(grid, str(out))
        _maybe_figure(
            args, out, lambda p: figures.render_portrait_figure(grid, levels, str(p))
        )
    else:
        raise ValidationError(f"--out must end in .csv or .svg, got {out.name}")
    print(
        json.dumps(
            {
                "grid": [grid.nu, grid.nv],
                "levels": [float(v) for v in levels],
                "collision_points": [
                    {"u": cp.u, "v": cp.v} for cp in grid.collision_points
                ],
            }
        )
    )
    return 0


def _parse_x(args: argparse.Namespace):
    if getattr(args, "x", None) is None:
        return None
    return np.array(_floats(args.x, 3, "--x"))


def cmd_verify(args: argparse.Namespace) -> int:
    s = _strengths(args)
    pb = make_pauli(s, _parse_x(args))
    report = verify_pauli(pb)
    n = int(args.samples) if args.samples is not None else 100
    rng = np.random.default_rng(int(args.seed) if args.seed is not None else 0)

    fields = [squared_side_field(1), squared_side_field(2), squared_side_field(3),
              oriented_area_field()]
    basis = [Covector.from_vec(np.eye(4)[k]) for k in range(4)]
    worst = 0.0
    for _ in range(n):
        z = rng.normal(size=3) + 1j * rng.normal(size=3)
        cfg = VortexConfig(z)
        point = shape_map(cfg)
        for i in range(4):
            for j in range(i + 1, 4):
                lhs = canonical_bracket(fields[i], fields[j], cfg, s)
                rhs = bracket_V(basis[i], basis[j], s)(point)
                worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs)))

    payload = report.as_dict()
    payload["poisson_map_residual"] = worst
    payload["special_form_residual"] = special_form_residual(s)
    print(json.dumps(payload))
    return 0


def cmd_transforms(args: argparse.Namespace) -> int:
    s = _strengths(args)
    cfg = _config(args)
    jbh = t1_forward(cfg, s)
    aa = t2_forward(jbh, s)
    mixed = t3_forward(aa)
    a = mixed_to_pauli(mixed)
    payload = {
        "jbh": {"z0": [jbh.z0.real, jbh.z0.imag], "r": [jbh.r.real, jbh.r.imag],
                 "s": [jbh.s.real, jbh.s.imag]},
        "action_angle": {
            "kx": aa.kx, "ky": aa.ky, "j1": aa.j1, "j2": aa.j2,
            "theta1": aa.theta1, "theta2": aa.theta2,
        },
        "mixed": {
            "kx": mixed.kx, "ky": mixed.ky, "i1": mixed.i1, "i2": mixed.i2,
            "phi1": mixed.phi1, "phi2": mixed.phi2,
        },
        "pauli_coords": a.a.tolist(),
        "symplectic_residuals": {
            name: check_symplectic(name, at, s)
            for name, at in (("T1", cfg), ("T2", jbh), ("T3", aa), ("composite", cfg))
        },
    }
    print(json.dumps(payload))
    return 0


def cmd_equilibria(args: argparse.Namespace) -> int:
    s = _strengths(args)
    _require(args, "mu")
    pb = make_pauli(s, _parse_x(args))
    points = find_relative_equilibria(float(args.mu), pb, int(args.grid_n or 16))
    payload = [
        {"a": st.a.a.tolist(), "h": reduced_hamiltonian(st.a, pb)} for st in points
    ]
    print(json.dumps(payload))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trivortex",
        description="Three-point-vortex dynamics and its shape-sphere reduction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler, **flags):
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON file supplying any of the options")
        for flag, kwargs in flags.items():
            p.add_argument(f"--{flag}", **kwargs)
        p.set_defaults(handler=handler)
        return p

    common_sim = {
        "gammas": {"help": "g1,g2,g3"},
        "rtol": {"help": "relative tolerance (default 1e-10)"},
        "atol": {"help": "absolute tolerance (default 1e-12)"},
        "no-fig": {"action": "store_true", "help": "skip the companion figure"},
    }
    add(
        "simulate",
        cmd_simulate,
        **common_sim,
        z={"help": "x1,y1,x2,y2,x3,y3"},
        **{"t-end": {"dest": "t_end", "help": "integration time"}},
        out={"help": "output CSV path"},
    )
    add(
        "simulate-reduced",
        cmd_simulate_reduced,
        **common_sim,
        a={"help": "a0,a1,a2,a3 on-sphere start"},
        x={"help": "family parameter x1,x2,x3 (default: distinguished choice)"},
        **{"t-end": {"dest": "t_end", "help": "integration time"}},
        out={"help": "output CSV path"},
    )
    add(
        "compare",
        cmd_compare,
        **common_sim,
        z={"help": "x1,y1,x2,y2,x3,y3"},
        x={"help": "family parameter (default: distinguished choice)"},
        **{"t-end": {"dest": "t_end", "help": "integration time"}},
    )
    add(
        "portrait",
        cmd_portrait,
        gammas={"help": "g1,g2,g3"},
        mu={"help": "leaf radius"},
        chart={"choices": ["phi", "alpha"], "help": "chart (default alpha)"},
        nu={"help": "grid rows (default 96)"},
        nv={"help": "grid columns (default 192)"},
        levels={"help": "comma-separated energy levels (default: automatic)"},
        x={"help": "family parameter (default: distinguished choice)"},
        out={"help": "output path, .csv or .svg"},
        **{"no-fig": {"action": "store_true", "help": "skip the companion figure"}},
    )
    add(
        "verify",
        cmd_verify,
        gammas={"help": "g1,g2,g3"},
        x={"help": "family parameter (default: distinguished choice)"},
        samples={"help": "random configurations for the map check (default 100)"},
        seed={"help": "RNG seed (default 0)"},
    )
    add(
        "transforms",
        cmd_transforms,
        gammas={"help": "g1,g2,g3"},
        z={"help": "x1,y1,x2,y2,x3,y3"},
    )
    add(
        "equilibria",
        cmd_equilibria,
        gammas={"help": "g1,g2,g3"},
        mu={"help": "leaf radius"},
        x={"help": "family parameter (default: distinguished choice)"},
        **{"grid-n": {"dest": "grid_n", "help": "scan resolution (default 16)"}},
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _merge_config(args)
        return args.handler(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
