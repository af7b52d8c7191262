"""Pulse envelopes and control angles for the STIRAP and STAP drive schedules.

All amplitudes are angular frequencies in rad/us, all times in us.  The
protocol timeline has two disjoint stages: a Q stage [0, t_split] that
prepares the chirality-signed superposition, and a P/S stage [t_split, t_f]
that performs the Raman transfer.  Gaussians are evaluated exactly on their
stage window and are identically zero outside it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, SingularScheduleError

ALPHA1_PROFILES = ("gauss_match", "sin2")


@dataclass(frozen=True)
class GaussianPulse:
    """amplitude * exp(-((t - center) / width)^2)."""

    amplitude: float  # rad/us, >= 0
    center: float     # us
    width: float      # us, > 0

    def __post_init__(self):
        if self.amplitude < 0:
            raise ValueError(f"amplitude must be >= 0, got {self.amplitude}")
        if self.width <= 0:
            raise ValueError(f"width must be > 0, got {self.width}")

    def __call__(self, t):
        u = (np.asarray(t, dtype=float) - self.center) / self.width
        return self.amplitude * np.exp(-u * u)

    def area(self, a: float, b: float) -> float:
        """Exact integral over [a, b] via the error function."""
        ua = (a - self.center) / self.width
        ub = (b - self.center) / self.width
        return 0.5 * math.sqrt(math.pi) * self.amplitude * self.width * (
            math.erf(ub) - math.erf(ua)
        )


@dataclass(frozen=True)
class Handedness:
    """Enantiomer tag: sign +1 (L) or -1 (R); the Q-drive phase is sign*pi/2."""

    sign: int

    def __post_init__(self):
        if self.sign not in (+1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")

    @property
    def phi_q(self) -> float:
        return self.sign * math.pi / 2.0

    @property
    def label(self) -> str:
        return "L" if self.sign > 0 else "R"

    @classmethod
    def from_label(cls, label: str) -> "Handedness":
        try:
            return cls({"L": +1, "R": -1}[label.upper()])
        except KeyError:
            raise ValueError(f"handedness must be 'L' or 'R', got {label!r}") from None


LEFT = Handedness(+1)
RIGHT = Handedness(-1)


@dataclass(frozen=True)
class StirapSchedule:
    """Q-stage Gaussian plus double-Gaussian pump / single-Gaussian Stokes.

    The pump is the sum of p_first and p_second (p_second delayed by tau);
    p_first coincides with the Stokes Gaussian so the mixing angle starts at
    pi/4, matching the superposition the Q stage prepares, and ends near
    pi/2 when the delayed pump component dominates.
    """

    q: GaussianPulse
    p_first: GaussianPulse
    p_second: GaussianPulse
    s: GaussianPulse
    tau: float
    t1: float
    t_f: float
    phi_p: float = 0.0
    phi_s: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.t1 < self.t_f:
            raise ValueError(f"need 0 <= t1 < t_f, got t1={self.t1}, t_f={self.t_f}")
        if self.tau < 0:
            raise ValueError(f"tau must be >= 0, got {self.tau}")

    @property
    def duration(self) -> float:
        return self.t_f

    @property
    def t_split(self) -> float:
        return self.t1


@dataclass(frozen=True)
class StapAnglePath:
    """Control angles for the counteradiabatic stage on [t_i, t_f].

    alpha1 ramps pi/4 -> pi/2 (monotone, flat at both ends); alpha2 is a
    Gaussian bump of height alpha_m and width t_alpha2, zero at both ends to
    within alpha_m * e^-9.
    """

    alpha_m: float
    t_i: float
    t_f: float
    t_alpha2: float | None = None
    alpha1_profile: str = "gauss_match"

    def __post_init__(self):
        if self.t_f <= self.t_i:
            raise ValueError(f"need t_f > t_i, got t_i={self.t_i}, t_f={self.t_f}")
        if not 0.0 < self.alpha_m < math.pi / 2:
            raise ValueError(f"alpha_m must be in (0, pi/2), got {self.alpha_m}")
        if self.alpha1_profile not in ALPHA1_PROFILES:
            raise ValueError(
                f"unknown alpha1 profile {self.alpha1_profile!r}; "
                f"choices: {ALPHA1_PROFILES}"
            )
        if self.t_alpha2 is None:
            object.__setattr__(self, "t_alpha2", (self.t_f - self.t_i) / 6.0)
        elif self.t_alpha2 <= 0:
            raise ValueError(f"t_alpha2 must be > 0, got {self.t_alpha2}")

    @property
    def center(self) -> float:
        return 0.5 * (self.t_i + self.t_f)


@dataclass(frozen=True)
class StapSchedule:
    """Full STAP protocol: Q-stage Gaussian on [0, path.t_i], then the
    counteradiabatically corrected P/S drive on [path.t_i, path.t_f]."""

    q: GaussianPulse
    path: StapAnglePath
    phi_p: float = 0.0
    phi_s: float = 0.0

    @property
    def duration(self) -> float:
        return self.path.t_f

    @property
    def t_split(self) -> float:
        return self.path.t_i


@dataclass(frozen=True)
class DiscretizedSchedule:
    """Per-slice frozen amplitudes: k Q slices followed by m - k P/S slices."""

    delta_t: float
    omega_q: np.ndarray   # shape (m,), zero beyond slice k-1
    omega_p: np.ndarray   # shape (m,), zero before slice k
    omega_s: np.ndarray
    k: int
    mode: str = "area_preserving"

    @property
    def m(self) -> int:
        return self.omega_q.shape[0]

    def slice_window(self, i: int) -> tuple[float, float]:
        return i * self.delta_t, (i + 1) * self.delta_t


def eval_q(schedule: StirapSchedule | StapSchedule, t: float) -> float:
    """Q-pulse amplitude at time t; zero once the P/S stage has begun."""
    t_split = schedule.t_split
    if t < 0.0 or t > schedule.duration:
        raise DomainError(
            f"t={t} outside schedule domain [0, {schedule.duration}]"
        )
    if t > t_split:
        return 0.0
    return float(schedule.q(t))


def eval_ps(schedule: StirapSchedule, t: float) -> tuple[float, float]:
    """(Omega_P, Omega_S) of the STIRAP schedule at time t.

    Times before t1 return (0, 0); times beyond t_f are a domain error.
    """
    if t > schedule.t_f:
        raise DomainError(f"t={t} beyond schedule end t_f={schedule.t_f}")
    if t < schedule.t1:
        return 0.0, 0.0
    omega_p = float(schedule.p_first(t)) + float(schedule.p_second(t))
    omega_s = float(schedule.s(t))
    return omega_p, omega_s


def eval_ps_rates(schedule: StirapSchedule, t: float) -> tuple[float, float]:
    """Analytic time derivatives (dOmega_P/dt, dOmega_S/dt) on the P/S stage."""
    if t < schedule.t1 or t > schedule.t_f:
        return 0.0, 0.0

    def _dg(g: GaussianPulse) -> float:
        return float(g(t)) * (-2.0 * (t - g.center) / g.width**2)

    return _dg(schedule.p_first) + _dg(schedule.p_second), _dg(schedule.s)


def total_rabi(omega_p: float, omega_s: float) -> float:
    return math.hypot(omega_p, omega_s)


def mixing_angle(omega_p: float, omega_s: float) -> float:
    """alpha1 = atan(Omega_P / Omega_S), in [0, pi/2]."""
    if omega_p == 0.0 and omega_s == 0.0:
        raise ValueError("mixing angle undefined when both amplitudes vanish")
    return math.atan2(omega_p, omega_s)


def mixing_angle_rate(schedule: StirapSchedule, t: float) -> float:
    """Analytic d(alpha1)/dt of the STIRAP schedule."""
    omega_p, omega_s = eval_ps(schedule, t)
    if omega_p == 0.0 and omega_s == 0.0:
        return 0.0
    dp, ds = eval_ps_rates(schedule, t)
    return (dp * omega_s - omega_p * ds) / (omega_p**2 + omega_s**2)


def adiabaticity_ratio(schedule: StirapSchedule, t: float) -> float:
    """|d(alpha1)/dt| / Omega(t); infinity when Omega(t) = 0.

    The derivative is a central finite difference with step 1e-4 * duration,
    clipped to the P/S stage.
    """
    omega = total_rabi(*eval_ps(schedule, t))
    if omega == 0.0:
        return math.inf
    h = 1e-4 * schedule.duration
    ta = max(schedule.t1, t - h)
    tb = min(schedule.t_f, t + h)
    a1a = mixing_angle(*eval_ps(schedule, ta))
    a1b = mixing_angle(*eval_ps(schedule, tb))
    return abs(a1b - a1a) / (tb - ta) / omega


# -- STAP control angles -----------------------------------------------------

def _u_edge(path: StapAnglePath) -> float:
    return 0.5 * (path.t_f - path.t_i) / path.t_alpha2


def stap_alpha1(path: StapAnglePath, t: float) -> float:
    """Mixing-angle ramp pi/4 -> pi/2 over [t_i, t_f]."""
    span = path.t_f - path.t_i
    if path.alpha1_profile == "sin2":
        s = (t - path.t_i) / span
        return math.pi / 4 + (math.pi / 4) * math.sin(math.pi * s / 2) ** 2
    # "gauss_match": alpha1_dot proportional to the alpha2 Gaussian, so the
    # ratio alpha1_dot / alpha2 stays bounded by its endpoint value and the
    # corrected drives remain modest everywhere (see stap_corrected_pulses).
    ue = _u_edge(path)
    u = min(max((t - path.center) / path.t_alpha2, -ue), ue)
    return math.pi / 4 + (math.pi / 8) * (math.erf(u) + math.erf(ue)) / math.erf(ue)


def stap_alpha1_dot(path: StapAnglePath, t: float) -> float:
    span = path.t_f - path.t_i
    if path.alpha1_profile == "sin2":
        s = (t - path.t_i) / span
        return (math.pi**2 / (8.0 * span)) * math.sin(math.pi * s)
    ue = _u_edge(path)
    u = (t - path.center) / path.t_alpha2
    if abs(u) > ue:
        return 0.0
    return (math.pi / 4) / (math.sqrt(math.pi) * path.t_alpha2 * math.erf(ue)) * math.exp(-u * u)


def stap_alpha2(path: StapAnglePath, t: float) -> float:
    """Gaussian counteradiabatic angle; alpha_m * e^-9 at both endpoints when
    t_alpha2 keeps its default (t_f - t_i)/6."""
    u = (t - path.center) / path.t_alpha2
    return path.alpha_m * math.exp(-u * u)


def stap_alpha2_dot(path: StapAnglePath, t: float) -> float:
    u = (t - path.center) / path.t_alpha2
    return stap_alpha2(path, t) * (-2.0 * u / path.t_alpha2)


_COT_OVERFLOW = 1e9


def stap_corrected_pulses(
    path: StapAnglePath, t: float, base_rabi: float = 0.0
) -> tuple[float, float]:
    """Effective drive amplitudes (Omega_P + Omega_P', Omega_S + Omega_S').

    Solving for a vanishing dressed-frame coupling (lambda_pm = 0) under the
    global Omega/2 matrix convention gives, for the path angles alpha1 and
    alpha2,

        P_eff = -2 [ alpha1_dot sin(alpha1) cot(alpha2) + alpha2_dot cos(alpha1) ]
        S_eff = -2 [ alpha1_dot cos(alpha1) cot(alpha2) - alpha2_dot sin(alpha1) ]

    independent of how the total is split into a bare pulse plus correction
    (base_rabi is accepted for interface symmetry but does not enter the
    total).  Amplitudes may be negative: a sign flip is a pi phase flip of
    the drive.
    """
    a1 = stap_alpha1(path, t)
    a2 = stap_alpha2(path, t)
    da1 = stap_alpha1_dot(path, t)
    da2 = stap_alpha2_dot(path, t)
    cot = math.cos(a2) / math.sin(a2)  # alpha2 > 0 on the closed window
    core = da1 * cot
    if abs(core) > _COT_OVERFLOW:
        raise SingularScheduleError(t, abs(core))
    p_eff = -2.0 * (core * math.sin(a1) + da2 * math.cos(a1))
    s_eff = -2.0 * (core * math.cos(a1) - da2 * math.sin(a1))
    return p_eff, s_eff


def stap_dressed_splitting(path: StapAnglePath, t: float) -> float:
    """Energy splitting Upsilon(t) between the two excited dressed states.

    The dressed-frame generator is diag(+Upsilon/2, 0, -Upsilon/2) once the
    corrected pulses cancel the off-diagonal couplings; the splitting
    includes the geometric (frame-derivative) contribution and reduces to
    -2 alpha1_dot / sin(alpha2) for the designed pulses.
    """
    a1 = stap_alpha1(path, t)
    a2 = stap_alpha2(path, t)
    da1 = stap_alpha1_dot(path, t)
    p_eff, s_eff = stap_corrected_pulses(path, t)
    return (p_eff * math.sin(a1) + s_eff * math.cos(a1)) * math.cos(a2) - 2.0 * math.sin(a2) * da1


# -- discretization ----------------------------------------------------------

def q_stage_pulse(amplitude_area: float, t_end: float, width: float | None = None) -> GaussianPulse:
    """Gaussian centered on [0, t_end] whose windowed area equals amplitude_area."""
    if width is None:
        width = t_end / 6.0
    probe = GaussianPulse(1.0, t_end / 2.0, width)
    return GaussianPulse(amplitude_area / probe.area(0.0, t_end), t_end / 2.0, width)


def _ps_values(schedule, t: float) -> tuple[float, float]:
    if isinstance(schedule, StirapSchedule):
        return eval_ps(schedule, t)
    return stap_corrected_pulses(schedule.path, t)


def discretize(
    schedule: StirapSchedule | StapSchedule,
    n_steps: int,
    mode: str = "area_preserving",
) -> DiscretizedSchedule:
    """Split [0, duration] into n_steps equal slices of frozen amplitudes.

    Slices before the stage boundary carry only the Q amplitude, the rest
    only P/S.  In area_preserving mode each slice amplitude is the pulse
    integral over the slice divided by delta_t, so the total discrete area
    matches the continuous one; midpoint mode samples the pulse at the slice
    center.
    """
    if n_steps < 2:
        raise ValueError(f"n_steps must be >= 2, got {n_steps}")
    if mode not in ("area_preserving", "midpoint"):
        raise ValueError(f"unknown discretization mode {mode!r}")

    duration = schedule.duration
    t_split = schedule.t_split
    dt = duration / n_steps
    k = max(1, min(n_steps - 1, round(n_steps * t_split / duration)))

    omega_q = np.zeros(n_steps)
    omega_p = np.zeros(n_steps)
    omega_s = np.zeros(n_steps)
    for i in range(n_steps):
        a, b = i * dt, (i + 1) * dt
        if i < k:
            lo, hi = a, min(b, t_split)
            if mode == "midpoint":
                tm = 0.5 * (lo + hi)
                omega_q[i] = schedule.q(tm) if tm <= t_split else 0.0
            else:
                omega_q[i] = schedule.q.area(lo, hi) / dt
        else:
            lo, hi = max(a, t_split), b
            if hi <= lo:
                continue
            if mode == "midpoint":
                tm = 0.5 * (lo + hi)
                omega_p[i], omega_s[i] = _ps_values(schedule, tm)
            else:
                omega_p[i] = _window_area(lambda t: _ps_values(schedule, t)[0], lo, hi) / dt
                omega_s[i] = _window_area(lambda t: _ps_values(schedule, t)[1], lo, hi) / dt
    return DiscretizedSchedule(dt, omega_q, omega_p, omega_s, k, mode)


def _window_area(f, lo: float, hi: float) -> float:
    val, _ = quad(f, lo, hi, epsabs=1e-12, epsrel=1e-12, limit=200)
    return val


# -- shipped default schedules ----------------------------------------------

DEFAULT_STIRAP = dict(t1=2.53, t_f=10.0, ps_amplitude=2.0, tau=None, ps_width=None, q_width=None)
DEFAULT_STAP = dict(t_split=1.24, t_f=2.5, alpha_m=0.35, t_alpha2=None,
                    alpha1_profile="gauss_match", q_width=None)


def default_stirap_schedule(
    t1: float = 2.53,
    t_f: float = 10.0,
    ps_amplitude: float = 2.0,
    tau: float | None = None,
    ps_width: float | None = None,
    q_width: float | None = None,
    phi_p: float = 0.0,
    phi_s: float = 0.0,
) -> StirapSchedule:
    """STIRAP defaults: Q stage [0, t1] with area pi/2, Stokes-before-pump
    P/S stage on [t1, t_f]."""
    span = t_f - t1
    if ps_width is None:
        ps_width = span / 3.0
    if tau is None:
        tau = ps_width
    c_first = t1 + 0.5 * (span - tau)
    c_second = t1 + 0.5 * (span + tau)
    q = q_stage_pulse(math.pi / 2.0, t1, q_width)
    shared = GaussianPulse(ps_amplitude, c_first, ps_width)
    return StirapSchedule(
        q=q,
        p_first=shared,
        p_second=GaussianPulse(ps_amplitude, c_second, ps_width),
        s=shared,
        tau=tau,
        t1=t1,
        t_f=t_f,
        phi_p=phi_p,
        phi_s=phi_s,
    )


def default_stap_schedule(
    t_split: float = 1.24,
    t_f: float = 2.5,
    alpha_m: float = 0.35,
    t_alpha2: float | None = None,
    alpha1_profile: str = "gauss_match",
    q_width: float | None = None,
    phi_p: float = 0.0,
    phi_s: float = 0.0,
) -> StapSchedule:
    """STAP defaults: Q stage [0, t_split] with area pi/2, counteradiabatic
    P/S stage on [t_split, t_f]."""
    path = StapAnglePath(alpha_m=alpha_m, t_i=t_split, t_f=t_f,
                         t_alpha2=t_alpha2, alpha1_profile=alpha1_profile)
    return StapSchedule(q=q_stage_pulse(math.pi / 2.0, t_split, q_width),
                        path=path, phi_p=phi_p, phi_s=phi_s)
