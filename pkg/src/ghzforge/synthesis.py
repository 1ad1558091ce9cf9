"""Constraint-satisfying curves, GHZ endpoints, and laser schedules.

Both rotation vectors are kept on the sphere of radius pi with constant
azimuths, which turns the realizability constraints into a single linear
slaving of the right polar angle to the left one.  What remains is a
boundary problem: the polar/azimuth values at the final time must both
satisfy the GHZ endpoint conditions and be compatible with the slaving
ratio integrated from the common starting point at the north pole.  That
reduces to one scalar root per sign branch, found by bracketed search.

Two pulse families are provided for the polar angle: a constant rate and
a trapezoidal rate that switches on and off continuously.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .algebra import w_state
from .dynamics import CurveSample
from .unitary import RotationPair, exp_map

__all__ = [
    "NoSolution",
    "ProfileMismatch",
    "TanSingularity",
    "EndpointSolution",
    "PulseProfile",
    "SphericalCurve",
    "PulseSchedule",
    "DEFAULT_SIGN_ORDER",
    "RADIUS",
    "solve_endpoints",
    "enumerate_endpoints",
    "build_curve",
    "rabi_schedule",
    "plateau_amplitudes",
    "reverse_schedule",
]

RADIUS = math.pi

# Sign triples in the canonical emission order.  The first four share the
# negative-root branch, the last four the positive one; every admissible
# endpoint appears exactly once.
DEFAULT_SIGN_ORDER = (
    (+1, -1, +1),
    (+1, +1, +1),
    (-1, +1, +1),
    (-1, -1, +1),
    (-1, +1, -1),
    (-1, -1, -1),
    (+1, -1, -1),
    (+1, +1, -1),
)

_ROOT_EPS = 1e-12
_ENDPOINT_TOL = 1e-9


class NoSolution(ValueError):
    """No admissible endpoint root in the requested branch."""


class ProfileMismatch(ValueError):
    """A pulse profile does not integrate to the endpoint's final angle."""


class TanSingularity(ValueError):
    """The schedule formulas diverge because cos(phi_right) vanishes."""


@dataclass(frozen=True)
class EndpointSolution:
    """A GHZ-compatible final configuration of the two rotation vectors.

    Angles follow the usual spherical convention (polar theta in [0, pi],
    azimuth phi in [0, 2 pi)); the azimuths are constant along the curve,
    so the values here apply at every time.  q1, q2, q3 are the sign
    choices distinguishing the eight admissible branches, and ghz_phase
    is the relative phase of the GHZ state this endpoint produces from
    the single-excitation initial state.
    """

    theta_left_final: float
    theta_right_final: float
    phi_left: float
    phi_right: float
    q1: int
    q2: int
    q3: int
    ghz_phase: float

    @property
    def curve_slope(self) -> float:
        """Ratio theta_right(t)/theta_left(t) forced by the constraints."""
        return math.cos(self.phi_left) / math.cos(self.phi_right)

    def left_vector(self) -> np.ndarray:
        return _spherical(self.theta_left_final, self.phi_left)

    def right_vector(self) -> np.ndarray:
        return _spherical(self.theta_right_final, self.phi_right)

    def endpoint_residuals(self) -> np.ndarray:
        """Residuals of the four GHZ endpoint conditions (all should be 0)."""
        a = self.left_vector()
        b = self.right_vector()
        target = RADIUS**2 / math.sqrt(2.0)
        return np.array(
            [
                abs(a[2] * b[1] + a[1] * b[2]) - target,
                a[0] * b[0] + a[1] * b[1] - a[2] * b[2],
                a[0] * b[2] + a[2] * b[0],
                abs(a[1] * b[0] - a[0] * b[1]) - target,
            ]
        )

    def sphere_residual(self) -> float:
        """cos^2 theta_left + cos^2 theta_right - 1/2 (identically zero)."""
        return (
            math.cos(self.theta_left_final) ** 2
            + math.cos(self.theta_right_final) ** 2
            - 0.5
        )

    def as_dict(self) -> dict:
        return {
            "theta_left_final": self.theta_left_final,
            "theta_right_final": self.theta_right_final,
            "phi_left": self.phi_left,
            "phi_right": self.phi_right,
            "q1": self.q1,
            "q2": self.q2,
            "q3": self.q3,
            "ghz_phase": self.ghz_phase,
        }


def _spherical(theta: float, phi: float, pole: int = 1) -> np.ndarray:
    return RADIUS * np.array(
        [
            math.sin(theta) * math.cos(phi),
            math.sin(theta) * math.sin(phi),
            pole * math.cos(theta),
        ]
    )


def _boundary_mismatch(a3: float, q3: int) -> float:
    """Scalar function whose root fixes the endpoint for a sign branch.

    a3 is the cosine of the final left polar angle.  The first term is
    the right polar angle actually required by the GHZ conditions; the
    second is the value the slaving ratio delivers when the left angle
    reaches its own target.  Admissible endpoints make the two agree.
    """
    theta_left = math.acos(a3)
    cos_right = q3 * math.sqrt(max(0.0, 0.5 - a3 * a3))
    theta_right = math.acos(cos_right)
    slope = (math.cos(theta_left) / math.sin(theta_left)) * (
        math.sin(theta_right) / math.cos(theta_right)
    )
    return theta_right + slope * theta_left


def solve_endpoints(signs: tuple[int, int, int], branch: str = "auto") -> EndpointSolution:
    """Solve the endpoint problem for one sign triple.

    ``branch`` selects the half-interval searched for the scalar root:
    "negative" and "positive" refer to the sign of cos(theta_left_final),
    and "auto" picks the half that admits a root for the given q3.
    Raises NoSolution when the forced branch has no sign change.
    """
    q1, q2, q3 = (int(s) for s in signs)
    for q in (q1, q2, q3):
        if q not in (-1, 1):
            raise ValueError("sign entries must be +1 or -1")
    if branch == "auto":
        branch = "negative" if q3 > 0 else "positive"
    if branch == "negative":
        lo, hi = -1.0 / math.sqrt(2.0) + _ROOT_EPS, -_ROOT_EPS
    elif branch == "positive":
        lo, hi = _ROOT_EPS, 1.0 / math.sqrt(2.0) - _ROOT_EPS
    else:
        raise ValueError(f"unknown branch selector {branch!r}")

    if _boundary_mismatch(lo, q3) * _boundary_mismatch(hi, q3) > 0:
        raise NoSolution(
            f"signs ({q1:+d}, {q2:+d}, {q3:+d}) admit no endpoint root in the "
            f"{branch} branch"
        )
    a3 = brentq(_boundary_mismatch, lo, hi, args=(q3,), xtol=1e-15, rtol=8.9e-16)

    theta_left = math.acos(a3)
    theta_right = math.acos(q3 * math.sqrt(max(0.0, 0.5 - a3 * a3)))

    cos_pl = q1 * math.cos(theta_left) / math.sin(theta_left)
    sin_pl = q2 * math.sqrt(max(0.0, 1.0 - cos_pl * cos_pl))
    phi_left = math.atan2(sin_pl, cos_pl) % (2.0 * math.pi)

    cos_pr = -q1 * math.cos(theta_right) / math.sin(theta_right)
    sin_pr = math.sqrt(2.0) * q2 * q3 * a3 / math.sin(theta_right)
    phi_right = math.atan2(sin_pr, cos_pr) % (2.0 * math.pi)

    solution = EndpointSolution(
        theta_left_final=theta_left,
        theta_right_final=theta_right,
        phi_left=phi_left,
        phi_right=phi_right,
        q1=q1,
        q2=q2,
        q3=q3,
        ghz_phase=0.0,
    )
    if np.max(np.abs(solution.endpoint_residuals())) > _ENDPOINT_TOL:
        raise NoSolution(
            f"root for signs ({q1:+d}, {q2:+d}, {q3:+d}) fails the endpoint "
            f"conditions, residuals {solution.endpoint_residuals()}"
        )

    phase = _reached_ghz_phase(solution)
    return EndpointSolution(
        theta_left_final=theta_left,
        theta_right_final=theta_right,
        phi_left=phi_left,
        phi_right=phi_right,
        q1=q1,
        q2=q2,
        q3=q3,
        ghz_phase=phase,
    )


def _reached_ghz_phase(solution: EndpointSolution) -> float:
    """Phase of the GHZ state produced by the endpoint's exact unitary."""
    unitary = exp_map(RotationPair(solution.left_vector(), solution.right_vector()))
    psi = unitary @ w_state()
    weight = abs(psi[0]) ** 2 + abs(psi[3]) ** 2
    if weight < 1.0 - _ENDPOINT_TOL:
        raise NoSolution(
            "endpoint unitary does not send the initial state onto the "
            f"ggg/rrr plane (weight {weight:.12f})"
        )
    return float((np.angle(psi[3]) - np.angle(psi[0])) % (2.0 * math.pi))


def enumerate_endpoints(sign_order=DEFAULT_SIGN_ORDER) -> list[EndpointSolution]:
    """All admissible endpoints, one per sign triple, in a fixed order."""
    return [solve_endpoints(signs) for signs in sign_order]


@dataclass(frozen=True)
class PulseProfile:
    """Time course of the left polar angle.

    kind "constant" sweeps at fixed rate; kind "trapezoid" ramps the
    rate linearly up over a fraction tau of the duration, holds, and
    ramps back down, so the schedule switches on and off continuously.
    """

    kind: str
    duration: float
    theta_final: float
    tau: float = 1.0 / 3.0

    def __post_init__(self):
        if self.kind not in ("constant", "trapezoid"):
            raise ValueError(f"unknown profile kind {self.kind!r}")
        if not (self.duration > 0 and math.isfinite(self.duration)):
            raise ValueError("profile duration must be positive and finite")
        if not math.isfinite(self.theta_final):
            raise ValueError("profile target angle must be finite")
        if not (0.0 <= self.tau < 0.5):
            raise ValueError("ramp fraction tau must lie in [0, 1/2)")

    def rate(self, times: np.ndarray) -> np.ndarray:
        """d theta / dt at the given times (array in, array out)."""
        t = np.asarray(times, dtype=float)
        if self.kind == "constant":
            return np.full_like(t, self.theta_final / self.duration)
        ramp = self.tau * self.duration
        plateau = self.theta_final / (self.duration * (1.0 - self.tau))
        if ramp == 0.0:
            return np.full_like(t, plateau)
        shape = np.minimum(np.minimum(t / ramp, (self.duration - t) / ramp), 1.0)
        return plateau * np.clip(shape, 0.0, None)

    def angle(self, times: np.ndarray) -> np.ndarray:
        """theta(t), the running integral of rate()."""
        t = np.clip(np.asarray(times, dtype=float), 0.0, self.duration)
        if self.kind == "constant":
            return t * (self.theta_final / self.duration)
        ramp = self.tau * self.duration
        plateau = self.theta_final / (self.duration * (1.0 - self.tau))
        if ramp == 0.0:
            return plateau * t
        up = 0.5 * plateau * t**2 / ramp
        mid = plateau * (t - 0.5 * ramp)
        down = self.theta_final - 0.5 * plateau * (self.duration - t) ** 2 / ramp
        return np.where(t <= ramp, up, np.where(t <= self.duration - ramp, mid, down))

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "duration": self.duration,
            "theta_final": self.theta_final,
            "tau": self.tau if self.kind == "trapezoid" else None,
        }


@dataclass(frozen=True)
class SphericalCurve:
    """Fixed-azimuth curve of both rotation vectors on the radius-pi sphere.

    ``pole`` selects which pole the curve starts from: +1 for the vector
    (0, 0, +pi), -1 for the mirrored start at (0, 0, -pi).  The mirrored
    branch negates every Rabi amplitude but is otherwise equivalent.
    """

    endpoint: EndpointSolution
    profile: PulseProfile
    pole: int = 1

    @property
    def duration(self) -> float:
        return self.profile.duration

    def theta_left(self, times) -> np.ndarray:
        return self.profile.angle(times)

    def theta_right(self, times) -> np.ndarray:
        return self.endpoint.curve_slope * self.profile.angle(times)

    def vectors_at(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        th_l = float(self.profile.angle(t))
        th_r = self.endpoint.curve_slope * th_l
        return (
            _spherical(th_l, self.endpoint.phi_left, self.pole),
            _spherical(th_r, self.endpoint.phi_right, self.pole),
        )

    def velocities_at(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        rate_l = float(self.profile.rate(t))
        rate_r = self.endpoint.curve_slope * rate_l
        th_l = float(self.profile.angle(t))
        th_r = self.endpoint.curve_slope * th_l
        return (
            _spherical_tangent(th_l, self.endpoint.phi_left, self.pole) * rate_l,
            _spherical_tangent(th_r, self.endpoint.phi_right, self.pole) * rate_r,
        )

    def sample(self, t: float) -> CurveSample:
        left, right = self.vectors_at(t)
        left_dot, right_dot = self.velocities_at(t)
        return CurveSample(t=t, left=left, right=right, left_dot=left_dot, right_dot=right_dot)


def _spherical_tangent(theta: float, phi: float, pole: int) -> np.ndarray:
    # derivative of _spherical with respect to theta
    return RADIUS * np.array(
        [
            math.cos(theta) * math.cos(phi),
            math.cos(theta) * math.sin(phi),
            -pole * math.sin(theta),
        ]
    )


def build_curve(
    endpoint: EndpointSolution, profile: PulseProfile, initial_pole: int = 1
) -> SphericalCurve:
    """Attach a pulse profile to an endpoint, checking compatibility."""
    if initial_pole not in (1, -1):
        raise ValueError("initial_pole must be +1 or -1")
    target = endpoint.theta_left_final
    if abs(profile.theta_final - target) > 1e-12 * max(1.0, abs(target)):
        raise ProfileMismatch(
            f"profile integrates to {profile.theta_final!r}, endpoint needs {target!r}"
        )
    return SphericalCurve(endpoint=endpoint, profile=profile, pole=initial_pole)


@dataclass(frozen=True)
class PulseSchedule:
    """Sampled real Rabi amplitudes over [0, T].

    Consumers interpolate linearly between samples, which is exact for
    the trapezoid family on grids aligned with its corners.
    """

    times: np.ndarray
    values: np.ndarray
    endpoint: EndpointSolution | None = None
    profile: PulseProfile | None = None

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.ndim != 1 or times.size < 2:
            raise ValueError("schedule needs at least two time samples")
        if values.shape != (times.size, 3):
            raise ValueError("schedule values must have shape (len(times), 3)")
        if times[0] != 0.0:
            raise ValueError("schedule must start at t = 0")
        if np.any(np.diff(times) <= 0.0):
            raise ValueError("schedule times must be strictly increasing")
        times.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    @property
    def duration(self) -> float:
        return float(self.times[-1])

    def values_at(self, ts: np.ndarray) -> np.ndarray:
        """Piecewise-linear amplitudes at arbitrary times, shape (..., 3)."""
        ts = np.asarray(ts, dtype=float)
        cols = [np.interp(ts, self.times, self.values[:, k]) for k in range(3)]
        return np.stack(cols, axis=-1)


def rabi_schedule(curve: SphericalCurve, samples: int = 1000) -> PulseSchedule:
    """Sample the Rabi amplitudes realizing a spherical curve.

    With fixed azimuths and both vectors on the radius-pi sphere, the
    three amplitudes are the polar rate times constant coefficients.
    """
    if samples < 2:
        raise ValueError("a schedule needs at least 2 samples")
    times = np.linspace(0.0, curve.duration, samples)
    rate = curve.profile.rate(times)
    coeffs = plateau_amplitudes(curve.endpoint)
    values = float(curve.pole) * rate[:, None] * coeffs[None, :]
    return PulseSchedule(
        times=times, values=values, endpoint=curve.endpoint, profile=curve.profile
    )


def plateau_amplitudes(endpoint: EndpointSolution, theta_rate: float = 1.0) -> np.ndarray:
    """Rabi amplitudes per unit polar rate for an endpoint's azimuths."""
    sin_l = math.sin(endpoint.phi_left)
    cos_l = math.cos(endpoint.phi_left)
    cos_r = math.cos(endpoint.phi_right)
    if abs(cos_r) < 1e-9:
        raise TanSingularity(
            "cos(phi_right) is numerically zero, schedule amplitudes diverge"
        )
    tan_r = math.sin(endpoint.phi_right) / cos_r
    return theta_rate * np.array(
        [
            -(sin_l + cos_l * tan_r),
            2.0 * cos_l,
            -(sin_l - cos_l * tan_r),
        ]
    )


def reverse_schedule(schedule: PulseSchedule) -> PulseSchedule:
    """Time-reverse a schedule and flip every amplitude sign.

    Running the result from the reached state undoes the original
    evolution exactly; applying it twice returns the original schedule.
    """
    return PulseSchedule(
        times=schedule.times[-1] - schedule.times[::-1],
        values=-schedule.values[::-1],
        endpoint=schedule.endpoint,
        profile=schedule.profile,
    )
