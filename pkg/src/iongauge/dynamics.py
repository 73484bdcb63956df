"""Time-dependent Schrodinger integration of composite pulse sequences.

Two loops are run back to back: the first occupies t in [-tau, tau], the
second t in [tau, 3*tau] with its own clock t' = t - 2*tau.  A fixed-step
RK4 integrator propagates the bare four-level amplitudes with no
renormalization, so the accumulated norm drift is an honest error meter
for the step size.  Populations are reported in the instantaneous
dark/bright eigenframe, which is where adiabaticity (or its failure) is
visible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .transport import loop_holonomy
from .tripod import (
    LoopSpec,
    OutOfWindowError,
    ParamPoint,
    PulseTriple,
    angles,
    bright_states,
    dark_states,
    pulses,
)

__all__ = [
    "ORDER_NORMAL",
    "ORDER_REVERSED",
    "CompositeSchedule",
    "ConstantSchedule",
    "StepSizeError",
    "Trajectory",
    "adiabatic_fidelity",
    "default_dt",
    "evolve",
    "project_populations",
]

ORDER_NORMAL = "first-then-second"
ORDER_REVERSED = "second-then-first"

# norm drift beyond this means the step size was too coarse for the run
NORM_DRIFT_LIMIT = 1e-6

_WINDOW_RTOL = 1e-9


class StepSizeError(RuntimeError):
    """Norm drift exceeded the trust limit for the chosen step size."""


@dataclass(frozen=True)
class CompositeSchedule:
    """Two pulse loops played back to back over t in [-tau, 3*tau].

    order selects which loop occupies the early window: ORDER_NORMAL
    plays `first` then `second`, ORDER_REVERSED swaps them.  Both loops
    must share the same tau so the windows tile the composite interval.
    """

    first: LoopSpec
    second: LoopSpec
    order: str = ORDER_NORMAL

    def __post_init__(self) -> None:
        if self.order not in (ORDER_NORMAL, ORDER_REVERSED):
            raise ValueError(f"unknown order {self.order!r}")
        if abs(self.first.tau - self.second.tau) > 1e-12 * self.first.tau:
            raise ValueError("composite loops must share the same tau")

    @property
    def tau(self) -> float:
        return self.first.tau

    @property
    def t_start(self) -> float:
        return -self.tau

    @property
    def t_end(self) -> float:
        return 3.0 * self.tau

    @property
    def omega0(self) -> float:
        return max(self.first.omega0, self.second.omega0)

    # the drive amplitude is discontinuous at the loop junction (the
    # Gaussian envelopes differ there unless beta matches); integrators
    # must put a grid node on it, i.e. use a step count divisible by 2
    grid_divisor = 2

    @property
    def windows(self) -> tuple[LoopSpec, LoopSpec]:
        """(early loop, late loop) after applying the order."""
        if self.order == ORDER_NORMAL:
            return self.first, self.second
        return self.second, self.first

    def pulses(self, t) -> PulseTriple:
        """Pulse amplitudes at composite time(s) t."""
        t = np.asarray(t, dtype=float)
        tol = _WINDOW_RTOL * self.tau
        if np.any(t < self.t_start - tol) or np.any(t > self.t_end + tol):
            raise OutOfWindowError(
                f"t outside composite window [{self.t_start:g}, {self.t_end:g}]"
            )
        t = np.clip(t, self.t_start, self.t_end)
        early, late = self.windows
        in_early = t <= self.tau
        t_local = np.where(in_early, t, t - 2.0 * self.tau)
        t_local = np.clip(t_local, -self.tau, self.tau)
        pe = pulses(early, t_local)
        pl = pulses(late, t_local)
        return PulseTriple(
            np.where(in_early, pe.omega1, pl.omega1),
            np.where(in_early, pe.omega2, pl.omega2),
            np.where(in_early, pe.omega3, pl.omega3),
        )

    def frame_point(self, t: float) -> ParamPoint:
        """Instantaneous eigenframe angles at scalar composite time t."""
        early, late = self.windows
        if t <= self.tau:
            spec, t_local = early, t
        else:
            spec, t_local = late, t - 2.0 * self.tau
        t_local = min(max(t_local, -self.tau), self.tau)
        return angles(pulses(spec, t_local))


@dataclass(frozen=True)
class ConstantSchedule:
    """A frozen pulse triple held for a fixed duration (t in [0, duration]).

    Useful as an exactly solvable integrator check: eigenstates of the
    static Hamiltonian only pick up phases e^{-i E t}.
    """

    pulse: PulseTriple
    duration: float

    @property
    def t_start(self) -> float:
        return 0.0

    @property
    def t_end(self) -> float:
        return self.duration

    @property
    def omega0(self) -> float:
        p = self.pulse
        return float(
            np.sqrt(abs(p.omega1) ** 2 + abs(p.omega2) ** 2 + abs(p.omega3) ** 2)
        )

    def pulses(self, t) -> PulseTriple:
        t = np.asarray(t, dtype=float)
        shape = t.shape
        return PulseTriple(
            np.broadcast_to(np.asarray(self.pulse.omega1, complex), shape).copy(),
            np.broadcast_to(np.asarray(self.pulse.omega2, complex), shape).copy(),
            np.broadcast_to(np.asarray(self.pulse.omega3, complex), shape).copy(),
        )

    def frame_point(self, t: float) -> ParamPoint:
        return angles(self.pulse)


def default_dt(schedule, samples: int = 8192) -> float:
    """Step size small enough for both the sweep rate and the fastest phase.

    Three ceilings: the parameter sweep must be finely sliced
    (tau/20000), and the RK4 local error per step must stay small against
    the carrier set by the base amplitude (0.05/omega0) and by the actual
    peak total Rabi frequency along the run (0.025/peak) -- the peak can
    sit well above omega0 when the pulse weights are unbalanced.
    """
    t = np.linspace(schedule.t_start, schedule.t_end, samples)
    o1, o2, o3 = schedule.pulses(t)
    rabi = np.sqrt(np.abs(o1) ** 2 + np.abs(o2) ** 2 + np.abs(o3) ** 2)
    peak = float(np.max(rabi))
    if peak <= 0.0:
        raise ValueError("schedule has no drive; cannot pick a step size")
    tau_scale = getattr(schedule, "tau", None)
    if tau_scale is None:
        tau_scale = (schedule.t_end - schedule.t_start) / 4.0
    omega0 = getattr(schedule, "omega0", peak)
    return min(tau_scale / 20000.0, 0.05 / omega0, 0.025 / peak)


@dataclass(frozen=True)
class Trajectory:
    """Sampled output of one integration run.

    states holds the bare-basis amplitudes at the sampled times (the
    first and last integrator points are always included); populations
    maps P_D1/P_D2/P_B1/P_B2 to arrays over the same samples.  norm_drift
    is the maximum deviation of the norm from 1 seen at *every* internal
    step, not just the sampled ones.
    """

    times: np.ndarray
    states: np.ndarray
    norms: np.ndarray
    populations: dict
    dt: float
    steps: int
    norm_drift: float


def project_populations(psi: np.ndarray, point: ParamPoint) -> dict:
    """Populations of psi in the dark/bright eigenframe at one point."""
    psi = np.asarray(psi, dtype=complex)
    d1, d2 = dark_states(point)
    b1, b2 = bright_states(point)
    return {
        "P_D1": float(abs(np.vdot(d1, psi)) ** 2),
        "P_D2": float(abs(np.vdot(d2, psi)) ** 2),
        "P_B1": float(abs(np.vdot(b1, psi)) ** 2),
        "P_B2": float(abs(np.vdot(b2, psi)) ** 2),
    }


def evolve(schedule, psi0, dt: float | None = None, max_samples: int = 4001) -> Trajectory:
    """Fixed-step RK4 propagation of the bare amplitudes.

    The state is never renormalized; if the worst norm deviation exceeds
    NORM_DRIFT_LIMIT the run is rejected with StepSizeError.  dt is
    nudged down so the grid lands exactly on the end of the window.
    """
    psi = np.asarray(psi0, dtype=complex).copy()
    if psi.shape != (4,):
        raise ValueError("psi0 must be a 4-component state vector")
    norm0 = float(np.linalg.norm(psi))
    if abs(norm0 - 1.0) > 1e-9:
        raise ValueError(f"psi0 must be normalized (|psi0| = {norm0:.3e})")
    if dt is None:
        dt = default_dt(schedule)
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    t0 = schedule.t_start
    span = schedule.t_end - t0
    divisor = int(getattr(schedule, "grid_divisor", 1))
    n = max(1, int(np.ceil(span / dt - 1e-12)))
    n = divisor * -(-n // divisor)
    dt = span / n

    # Stage amplitudes per step.  The left/right samples are biased a
    # hair into the step's interior so that a schedule discontinuity
    # sitting exactly on a grid node is sampled as the correct one-sided
    # limit on both sides; without this the step entering the second
    # loop picks up the first loop's amplitude and the integrator drops
    # to first order at the junction.
    nudge = 1e-9 * dt
    k_idx = np.arange(n)
    lefts = t0 + dt * k_idx + nudge
    mids = t0 + dt * (k_idx + 0.5)
    rights = t0 + dt * (k_idx + 1.0) - nudge
    om_l = tuple(np.asarray(a, dtype=complex) for a in schedule.pulses(lefts))
    om_m = tuple(np.asarray(a, dtype=complex) for a in schedule.pulses(mids))
    om_r = tuple(np.asarray(a, dtype=complex) for a in schedule.pulses(rights))

    stride = max(1, int(np.ceil(n / max(1, max_samples - 1))))
    times = [t0]
    states = [psi.copy()]
    drift = abs(norm0 - 1.0)

    def rhs(o1, o2, o3, v):
        return np.array(
            [
                1j * (o1 * v[1] + o2 * v[2] + o3 * v[3]),
                1j * np.conj(o1) * v[0],
                1j * np.conj(o2) * v[0],
                1j * np.conj(o3) * v[0],
            ]
        )

    sixth = dt / 6.0
    half = 0.5 * dt
    for k in range(n):
        k1 = rhs(om_l[0][k], om_l[1][k], om_l[2][k], psi)
        k2 = rhs(om_m[0][k], om_m[1][k], om_m[2][k], psi + half * k1)
        k3 = rhs(om_m[0][k], om_m[1][k], om_m[2][k], psi + half * k2)
        k4 = rhs(om_r[0][k], om_r[1][k], om_r[2][k], psi + dt * k3)
        psi = psi + sixth * (k1 + 2.0 * (k2 + k3) + k4)
        dev = abs(np.sqrt((psi.real**2 + psi.imag**2).sum()) - 1.0)
        if dev > drift:
            drift = dev
        if (k + 1) % stride == 0 or k + 1 == n:
            times.append(t0 + (k + 1) * dt)
            states.append(psi.copy())

    if drift > NORM_DRIFT_LIMIT:
        raise StepSizeError(
            f"norm drift {drift:.3e} exceeds {NORM_DRIFT_LIMIT:g} at dt={dt:.3e}; "
            "rerun with a smaller dt"
        )

    times_arr = np.array(times)
    states_arr = np.array(states)
    norms = np.linalg.norm(states_arr, axis=1)
    pops = {key: np.empty(len(times)) for key in ("P_D1", "P_D2", "P_B1", "P_B2")}
    for i, t in enumerate(times_arr):
        point = schedule.frame_point(float(t))
        for key, val in project_populations(states_arr[i], point).items():
            pops[key][i] = val
    return Trajectory(
        times=times_arr,
        states=states_arr,
        norms=norms,
        populations=pops,
        dt=dt,
        steps=n,
        norm_drift=drift,
    )


def adiabatic_fidelity(
    schedule: CompositeSchedule,
    steps: int = 20001,
    dt: float | None = None,
    trajectory: Trajectory | None = None,
) -> dict:
    """Compare the full integration against the geometric prediction.

    Starting from the bare state |1> (the second dark state at the
    initial point, up to sign), the prediction after both loops is built
    from U = U_late @ U_early: the final state should be
    U_22 |1> - U_12 |2>.  Returns the squared overlap of that prediction
    with the integrated state plus the two |1>-population readings.

    A trajectory already computed for this schedule can be passed to skip
    the integration.
    """
    if trajectory is None:
        psi0 = np.array([0.0, 1.0, 0.0, 0.0], dtype=complex)
        trajectory = evolve(schedule, psi0, dt=dt)
    early, late = schedule.windows
    u_early = loop_holonomy(early, steps=steps)
    u_late = loop_holonomy(late, steps=steps)
    u = u_late.matrix @ u_early.matrix
    psi_pred = np.array([0.0, u[1, 1], -u[0, 1], 0.0])
    psi_final = trajectory.states[-1]
    return {
        "fidelity": float(abs(np.vdot(psi_pred, psi_final)) ** 2),
        "P_full": float(abs(psi_final[1]) ** 2),
        "P_holonomy": float(abs(u[1, 1]) ** 2),
    }
