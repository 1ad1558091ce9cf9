"""Command-line front end.

Subcommands:

    endpoints      solve and print the admissible GHZ endpoints
    synthesize     write a pulse-schedule CSV for one endpoint
    propagate      integrate a schedule CSV and report fidelities
    validate-full  check the effective model against the full one
    check          run the structural invariant suite

Every command accepts ``--config FILE`` (a JSON object whose keys match
the long flag names with dashes replaced by underscores); explicit flags
override config values.  Output payloads (CSV, JSON) are deterministic:
identical inputs give bit-identical files, and progress messages with
timings go to stderr only.

Exit codes: 0 success, 2 usage or validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import algebra, dynamics, synthesis, unitary
from .fullmodel import (
    HierarchyViolation,
    compare_factors,
    params_for_factor,
    validate_reduction,
)
from .propagate import (
    ConvergenceFailure,
    DEFAULT_STEPS,
    normalize_to_area,
    propagate,
    squared_area,
)
from .synthesis import (
    DEFAULT_SIGN_ORDER,
    PulseProfile,
    PulseSchedule,
    build_curve,
    enumerate_endpoints,
    plateau_amplitudes,
    rabi_schedule,
    reverse_schedule,
    solve_endpoints,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3

SCHEDULE_HEADER = "t,omega1,omega2,omega3"

# Published 5-significant-figure reference angles for the eight endpoint
# branches, in the canonical sign order; used by the `check` suite.
REFERENCE_ENDPOINT_TABLE = (
    (1.92423, 0.906373, 4.33454, 2.47062),
    (1.92423, 0.906373, 1.94864, 3.81256),
    (1.92423, 0.906373, 1.19295, 5.61221),
    (1.92423, 0.906373, 5.09024, 0.670972),
    (0.906373, 1.92423, 2.47062, 4.33454),
    (0.906373, 1.92423, 3.81256, 1.94864),
    (0.906373, 1.92423, 5.61221, 1.19295),
    (0.906373, 1.92423, 0.670972, 5.09024),
)


@dataclass
class RunConfig:
    """Merged command parameters from config file and flags."""

    q1: int | None = None
    q2: int | None = None
    q3: int | None = None
    branch: str = "auto"
    pole: int = 1
    profile: str = "constant"
    tau: float = 1.0 / 3.0
    duration: float | None = None
    target_area: float | None = None
    samples: int = 1000
    schedule: str | None = None
    initial: str = "w"
    reverse: bool = False
    steps: int = DEFAULT_STEPS
    factor: float = 10.0
    compare_factor: float | None = 30.0
    min_factor: float = 10.0
    force: bool = False
    steps_per_cycle: int = 50
    out: str | None = None
    trace_csv: str | None = None
    physical_units: bool = False
    omega_ref: float | None = None
    normalize_area: float | None = None
    reference_schedule: str | None = None
    pin_theta_left: float | None = None
    pin_theta_right: float | None = None
    pin_phi_left: float | None = None
    pin_phi_right: float | None = None
    pin_tol: float = 1e-4

    def validate_common(self) -> None:
        if self.samples < 2:
            raise ValueError("sample count must be at least 2")
        if not (0.0 <= self.tau < 0.5):
            raise ValueError("tau must lie in [0, 1/2)")
        if self.pole not in (1, -1):
            raise ValueError("pole must be +1 or -1")
        for name in ("q1", "q2", "q3"):
            value = getattr(self, name)
            if value is not None and value not in (1, -1):
                raise ValueError(f"{name} must be +1 or -1")
        if self.physical_units and self.omega_ref is None:
            raise ValueError("--physical-units requires --omega-ref")
        if self.omega_ref is not None and not self.omega_ref > 0:
            raise ValueError("omega_ref must be positive")


_PATH_KEYS = ("schedule", "out", "trace_csv", "reference_schedule")


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    file = Path(path)
    raw = json.loads(file.read_text())
    if not isinstance(raw, dict):
        raise ValueError("config file must contain a JSON object")
    known = {f.name for f in fields(RunConfig)}
    for key in raw:
        if key not in known:
            raise ValueError(f"unknown config key {key!r}")
    for key in _PATH_KEYS:
        value = raw.get(key)
        if isinstance(value, str) and not Path(value).is_absolute():
            raw[key] = str(file.parent / value)
    return raw


def merge_config(args: argparse.Namespace) -> RunConfig:
    merged = load_config(getattr(args, "config", None))
    for f in fields(RunConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            merged[f.name] = value
    cfg = RunConfig(**merged)
    cfg.validate_common()
    return cfg


def _fmt(x: float) -> str:
    return repr(float(x))


def _info(message: str) -> None:
    print(message, file=sys.stderr)


def write_schedule_csv(schedule: PulseSchedule, out: str | None, omega_ref: float | None) -> None:
    """Write the schedule as CSV; omega_ref converts to physical units."""
    scale_t = 1.0 if omega_ref is None else 1.0 / omega_ref
    scale_o = 1.0 if omega_ref is None else omega_ref
    lines = [SCHEDULE_HEADER]
    for t, (o1, o2, o3) in zip(schedule.times, schedule.values):
        lines.append(
            f"{_fmt(t * scale_t)},{_fmt(o1 * scale_o)},{_fmt(o2 * scale_o)},{_fmt(o3 * scale_o)}"
        )
    text = "\n".join(lines) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def read_schedule_csv(path: str) -> PulseSchedule:
    file = Path(path)
    if not file.exists():
        raise ValueError(f"schedule file {path!r} does not exist")
    lines = file.read_text().strip().splitlines()
    if not lines or lines[0].strip() != SCHEDULE_HEADER:
        raise ValueError(f"schedule CSV must start with header {SCHEDULE_HEADER!r}")
    times = []
    values = []
    for ln, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 4:
            raise ValueError(f"line {ln}: expected 4 comma-separated fields")
        try:
            row = [float(p) for p in parts]
        except ValueError as exc:
            raise ValueError(f"line {ln}: {exc}") from None
        times.append(row[0])
        values.append(row[1:])
    try:
        return PulseSchedule(times=np.array(times), values=np.array(values))
    except ValueError as exc:
        raise ValueError(f"invalid schedule in {path!r}: {exc}") from None


def write_json(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _endpoint_payload(solution) -> dict:
    d = solution.as_dict()
    return {key: (int(v) if isinstance(v, int) else float(v)) for key, v in d.items()}


# ---------------------------------------------------------------------------
# subcommands


def cmd_endpoints(cfg: RunConfig) -> int:
    start = time.perf_counter()
    rows = []
    for signs in DEFAULT_SIGN_ORDER:
        if cfg.q1 is not None and signs[0] != cfg.q1:
            continue
        if cfg.q2 is not None and signs[1] != cfg.q2:
            continue
        if cfg.q3 is not None and signs[2] != cfg.q3:
            continue
        rows.append(solve_endpoints(signs, branch=cfg.branch))

    pins = {
        "theta_left_final": cfg.pin_theta_left,
        "theta_right_final": cfg.pin_theta_right,
        "phi_left": cfg.pin_phi_left,
        "phi_right": cfg.pin_phi_right,
    }
    active_pins = {k: v for k, v in pins.items() if v is not None}
    if active_pins:
        best = None
        for sol in rows:
            residual = max(abs(getattr(sol, k) - v) for k, v in active_pins.items())
            if best is None or residual < best[0]:
                best = (residual, sol)
        if best is None or best[0] > cfg.pin_tol:
            _info("no endpoint matches the pinned angles; nearest residuals:")
            for sol in rows:
                residual = max(abs(getattr(sol, k) - v) for k, v in active_pins.items())
                _info(
                    f"  ({sol.q1:+d},{sol.q2:+d},{sol.q3:+d}) max |pinned - value| = {residual:.6e}"
                )
            return EXIT_USAGE
        rows = [best[1]]

    header = (
        f"{'q1':>3} {'q2':>3} {'q3':>3} {'theta_left_T':>13} {'theta_right_T':>14} "
        f"{'phi_left_0':>11} {'phi_right_0':>12} {'ghz_phase':>10}"
    )
    print(header)
    for sol in rows:
        print(
            f"{sol.q1:+3d} {sol.q2:+3d} {sol.q3:+3d} {sol.theta_left_final:13.6f} "
            f"{sol.theta_right_final:14.6f} {sol.phi_left:11.6f} {sol.phi_right:12.6f} "
            f"{sol.ghz_phase:10.6f}"
        )
    if cfg.out is not None:
        write_json({"endpoints": [_endpoint_payload(s) for s in rows]}, cfg.out)
    _info(f"solved {len(rows)} endpoint(s) in {time.perf_counter() - start:.3f}s")
    return EXIT_OK


def _synthesize_schedule(cfg: RunConfig) -> PulseSchedule:
    signs = (cfg.q1 if cfg.q1 is not None else 1,
             cfg.q2 if cfg.q2 is not None else -1,
             cfg.q3 if cfg.q3 is not None else 1)
    endpoint = solve_endpoints(signs, branch=cfg.branch)
    if (cfg.duration is None) == (cfg.target_area is None):
        raise ValueError("give exactly one of duration or target_area")
    duration = cfg.duration if cfg.duration is not None else 1.0
    profile = PulseProfile(
        kind=cfg.profile,
        duration=duration,
        theta_final=endpoint.theta_left_final,
        tau=cfg.tau,
    )
    schedule = rabi_schedule(build_curve(endpoint, profile, initial_pole=cfg.pole), cfg.samples)
    if cfg.target_area is not None:
        schedule = normalize_to_area(schedule, cfg.target_area)
    return schedule


def cmd_synthesize(cfg: RunConfig) -> int:
    schedule = _synthesize_schedule(cfg)
    write_schedule_csv(schedule, cfg.out, cfg.omega_ref if cfg.physical_units else None)
    area = squared_area(schedule)
    peak_rate = float(np.max(np.abs(schedule.profile.rate(schedule.times))))
    plateau = [float(a) * cfg.pole for a in plateau_amplitudes(schedule.endpoint, theta_rate=peak_rate)]
    _info(
        f"squared area A = {area!r}; plateau amplitudes "
        f"({plateau[0]!r}, {plateau[1]!r}, {plateau[2]!r})"
    )
    return EXIT_OK


def _initial_state(name: str) -> np.ndarray:
    if name == "w":
        return algebra.w_state()
    if name == "ggg":
        return algebra.ggg_state()
    if name.startswith("ghz:"):
        return algebra.ghz_state(float(name.split(":", 1)[1]))
    raise ValueError(f"unknown initial state {name!r} (use w, ggg, or ghz:PHASE)")


def cmd_propagate(cfg: RunConfig) -> int:
    if cfg.schedule is None:
        raise ValueError("propagate needs --schedule FILE")
    schedule = read_schedule_csv(cfg.schedule)

    reference_area = None
    if cfg.reference_schedule is not None:
        reference_area = squared_area(read_schedule_csv(cfg.reference_schedule))
    if cfg.normalize_area is not None:
        reference_area = cfg.normalize_area
    if reference_area is not None:
        schedule = normalize_to_area(schedule, reference_area)

    start = time.perf_counter()
    forward = propagate(schedule, initial=_initial_state(cfg.initial), steps=cfg.steps)
    result = forward
    forward_phase = forward.ghz_phase
    if cfg.reverse:
        result = propagate(
            reverse_schedule(schedule),
            initial=forward.states[-1],
            steps=cfg.steps,
            target="w",
        )
    _info(f"propagated {result.steps} steps in {time.perf_counter() - start:.3f}s")

    payload = {
        "times": [float(t) for t in result.times],
        "fidelity_trace": [float(f) for f in result.fidelity_trace],
        "final_fidelity": float(result.final_fidelity),
        "ghz_phase": None if result.ghz_phase is None else float(result.ghz_phase),
        "area": float(result.area),
        "endpoint": None if schedule.endpoint is None else _endpoint_payload(schedule.endpoint),
        "profile": None if schedule.profile is None else schedule.profile.as_dict(),
        "target": result.target,
        "steps": int(result.steps),
        "certification_delta": float(result.certification_delta),
        "reference_area": None if reference_area is None else float(reference_area),
    }
    if cfg.reverse:
        payload["forward_ghz_phase"] = None if forward_phase is None else float(forward_phase)
    write_json(payload, cfg.out)

    if cfg.trace_csv is not None:
        lines = ["t,fidelity"]
        lines += [
            f"{_fmt(t)},{_fmt(f)}" for t, f in zip(result.times, result.fidelity_trace)
        ]
        Path(cfg.trace_csv).write_text("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_validate_full(cfg: RunConfig) -> int:
    if cfg.schedule is None:
        raise ValueError("validate-full needs --schedule FILE")
    schedule = read_schedule_csv(cfg.schedule)

    start = time.perf_counter()
    params = params_for_factor(schedule, cfg.factor, cfg.steps_per_cycle)
    primary = validate_reduction(params, required_factor=cfg.min_factor, force=cfg.force)
    payload = primary.as_dict()

    if cfg.compare_factor is not None and cfg.compare_factor > 0:
        comparison = validate_reduction(
            params_for_factor(schedule, cfg.compare_factor, cfg.steps_per_cycle),
            required_factor=cfg.min_factor,
            force=cfg.force,
        )
        infid_improved = (
            comparison.effective_vs_full_infidelity < primary.effective_vs_full_infidelity
        )
        payload["comparison"] = {
            **comparison.as_dict(),
            "infidelity_decreased": infid_improved,
            "leakage_decreased": comparison.leakage_max < primary.leakage_max,
            "monotone_improvement": infid_improved,
        }
    else:
        payload["comparison"] = None
    _info(f"validated in {time.perf_counter() - start:.1f}s")
    write_json(payload, cfg.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# invariant suite


def _eig_unitary(vec: np.ndarray, triple: np.ndarray) -> np.ndarray:
    """Independent route to one rotation factor via eigendecomposition."""
    herm = vec[0] * triple[0] + vec[1] * triple[1] + vec[2] * triple[2]
    evals, evecs = np.linalg.eigh(herm)
    return (evecs * np.exp(-1j * evals)) @ evecs.conj().T


def _check_brackets(gens) -> tuple[bool, str]:
    eye = np.eye(4)
    eps = np.zeros((3, 3, 3))
    eps[0, 1, 2] = eps[1, 2, 0] = eps[2, 0, 1] = 1.0
    eps[0, 2, 1] = eps[2, 1, 0] = eps[1, 0, 2] = -1.0
    worst = 0.0
    for fam in (gens.left, gens.right):
        for i in range(3):
            for j in range(3):
                comm = fam[i] @ fam[j] - fam[j] @ fam[i]
                expected = 1j * sum(eps[i, j, k] * fam[k] for k in range(3))
                worst = max(worst, float(np.max(np.abs(comm - expected))))
                prod = (2 * fam[i]) @ (2 * fam[j])
                expected_p = 1j * sum(eps[i, j, k] * 2 * fam[k] for k in range(3)) + (i == j) * eye
                worst = max(worst, float(np.max(np.abs(prod - expected_p))))
    for i in range(3):
        for j in range(3):
            cross = gens.left[i] @ gens.right[j] - gens.right[j] @ gens.left[i]
            worst = max(worst, float(np.max(np.abs(cross))))
    return worst <= 1e-14, f"max residual {worst:.2e}"


def _check_casimirs(gens) -> tuple[bool, str]:
    total, diff = algebra.casimirs(gens)
    ok = abs(total - 1.5) <= 1e-13 and abs(diff) <= 1e-13
    return ok, f"I = {total!r}, J = {diff!r}"


def _check_exp_map(gens) -> tuple[bool, str]:
    rng = np.random.default_rng(20260814)
    worst = 0.0
    for _ in range(100):
        pair = unitary.RotationPair(rng.uniform(-8, 8, 3), rng.uniform(-8, 8, 3))
        closed = unitary.exp_map(pair, gens)
        reference = _eig_unitary(pair.left, gens.left) @ _eig_unitary(pair.right, gens.right)
        worst = max(worst, float(np.max(np.abs(closed - reference))))
    return worst <= 1e-10, f"max deviation {worst:.2e} over 100 random pairs"


def _check_constraint_residuals() -> tuple[bool, str]:
    worst = 0.0
    for signs in DEFAULT_SIGN_ORDER:
        endpoint = solve_endpoints(signs)
        for kind in ("constant", "trapezoid"):
            profile = PulseProfile(
                kind=kind, duration=1.0, theta_final=endpoint.theta_left_final
            )
            curve = build_curve(endpoint, profile)
            for t in np.linspace(0.0, 1.0, 250):
                rates = dynamics.vectorial_rabi(curve.sample(float(t)))
                report = dynamics.check_constraints(rates)
                worst = max(worst, report.max_residual)
    return worst <= 1e-9, f"max residual {worst:.2e}"


def _check_endpoint_table() -> tuple[bool, str]:
    worst = 0.0
    for signs, expected in zip(DEFAULT_SIGN_ORDER, REFERENCE_ENDPOINT_TABLE):
        sol = solve_endpoints(signs)
        got = (sol.theta_left_final, sol.theta_right_final, sol.phi_left, sol.phi_right)
        for g, e in zip(got, expected):
            worst = max(worst, abs(g - e) / abs(e))
    return worst <= 1e-5, f"max relative deviation {worst:.2e}"


def cmd_check(cfg: RunConfig) -> int:
    gens = algebra.build_generators()
    checks = [
        ("generator brackets and products", lambda: _check_brackets(gens)),
        ("quadratic invariants", lambda: _check_casimirs(gens)),
        ("closed form vs eigendecomposition", lambda: _check_exp_map(gens)),
        ("curve constraint residuals", _check_constraint_residuals),
        ("endpoint table reproduction", _check_endpoint_table),
    ]
    failures = 0
    for name, fn in checks:
        ok, detail = fn()
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        failures += 0 if ok else 1
    print(f"{len(checks) - failures}/{len(checks)} checks passed")
    return EXIT_OK if failures == 0 else EXIT_NUMERIC


# ---------------------------------------------------------------------------
# argument parsing


def _add_sign_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q1", type=int, choices=(1, -1), default=None)
    p.add_argument("--q2", type=int, choices=(1, -1), default=None)
    p.add_argument("--q3", type=int, choices=(1, -1), default=None)
    p.add_argument("--branch", choices=("auto", "negative", "positive"), default=None)
    p.add_argument("--pole", type=int, choices=(1, -1), default=None,
                   help="initial-point sign of the curve (+1 default, -1 mirrored)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ghz-forge", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("endpoints", help="solve and print admissible endpoints")
    p.add_argument("--config")
    _add_sign_args(p)
    p.add_argument("--pin-theta-left", type=float, dest="pin_theta_left", default=None)
    p.add_argument("--pin-theta-right", type=float, dest="pin_theta_right", default=None)
    p.add_argument("--pin-phi-left", type=float, dest="pin_phi_left", default=None)
    p.add_argument("--pin-phi-right", type=float, dest="pin_phi_right", default=None)
    p.add_argument("--pin-tol", type=float, dest="pin_tol", default=None)
    p.add_argument("--out", help="also write the table as JSON")

    p = sub.add_parser("synthesize", help="write a pulse-schedule CSV")
    p.add_argument("--config")
    _add_sign_args(p)
    p.add_argument("--profile", choices=("constant", "trapezoid"), default=None)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--duration", type=float, default=None)
    p.add_argument("--target-area", type=float, dest="target_area", default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--physical-units", action="store_true", dest="physical_units", default=None)
    p.add_argument("--omega-ref", type=float, dest="omega_ref", default=None,
                   help="reference Rabi frequency in MHz for --physical-units")
    p.add_argument("--out", help="CSV path (stdout when omitted)")

    p = sub.add_parser("propagate", help="integrate a schedule CSV")
    p.add_argument("--config")
    p.add_argument("--schedule")
    p.add_argument("--initial", default=None, help="w, ggg, or ghz:PHASE")
    p.add_argument("--reverse", action="store_true", default=None,
                   help="run forward, then the reversed schedule from the reached state")
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--normalize-area", type=float, dest="normalize_area", default=None)
    p.add_argument("--reference-schedule", dest="reference_schedule", default=None,
                   help="normalize to the squared area of this schedule CSV")
    p.add_argument("--trace-csv", dest="trace_csv", default=None)
    p.add_argument("--out", help="result JSON path (stdout when omitted)")

    p = sub.add_parser("validate-full", help="full-model reduction check")
    p.add_argument("--config")
    p.add_argument("--schedule")
    p.add_argument("--factor", type=float, default=None)
    p.add_argument("--compare-factor", type=float, dest="compare_factor", default=None,
                   help="second hierarchy factor for the trend flags (0 disables)")
    p.add_argument("--min-factor", type=float, dest="min_factor", default=None,
                   help="smallest acceptable scale separation (default 10)")
    p.add_argument("--force", action="store_true", default=None)
    p.add_argument("--steps-per-cycle", type=int, dest="steps_per_cycle", default=None)
    p.add_argument("--out", help="report JSON path (stdout when omitted)")

    p = sub.add_parser("check", help="run the structural invariant suite")
    p.add_argument("--config")

    return parser


_COMMANDS = {
    "endpoints": cmd_endpoints,
    "synthesize": cmd_synthesize,
    "propagate": cmd_propagate,
    "validate-full": cmd_validate_full,
    "check": cmd_check,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = merge_config(args)
        return _COMMANDS[args.command](cfg)
    except ConvergenceFailure as exc:
        _info(f"numerical failure: {exc}")
        return EXIT_NUMERIC
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        _info(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
