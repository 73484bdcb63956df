"""Four-level tripod atom driven by three resonant lasers.

Three ground states |1>, |2>, |3> couple to one excited state |0> with
complex Rabi frequencies Omega_1..3 (hbar = 1):

    H = -(Omega_1 |0><1| + Omega_2 |0><2| + Omega_3 |0><3|) + h.c.

The basis order is (|0>, |1>, |2>, |3>) everywhere.  The spectrum is
{0, 0, +Omega, -Omega} with Omega = sqrt(sum |Omega_i|^2); the doubly
degenerate zero eigenspace ("dark" states) carries the holonomy.

Pulse amplitudes are parameterized on the sphere:

    Omega_1 = Omega sin(theta) cos(phi) e^{i varphi1}
    Omega_2 = Omega sin(theta) sin(phi) e^{i varphi2}
    Omega_3 = Omega cos(theta)          e^{i varphi3}

with varphi = varphi3 - varphi1 = varphi3 - varphi2 the only phase that
matters.  The loop schedules below keep Omega_1, Omega_2 real positive
and put e^{i varphi} on Omega_3.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "DegeneratePointError",
    "LoopSpec",
    "OutOfWindowError",
    "ParamPoint",
    "PulseTriple",
    "angles",
    "bright_frame",
    "bright_states",
    "dark_frame",
    "dark_states",
    "frame_matrix",
    "gauge_potential",
    "hamiltonian",
    "pulses",
]


class OutOfWindowError(ValueError):
    """A loop schedule was evaluated outside its [-tau, tau] window."""


class DegeneratePointError(ValueError):
    """All three Rabi frequencies vanish: no bright gap, angles undefined."""


@dataclass(frozen=True)
class LoopSpec:
    """One closed pulse loop.

    The baseline loop is alpha=1, beta=0:

        Omega_1 = Omega0 f(t),   f(t) = cos(pi t / 2 tau) on [-tau, tau]
        Omega_2 = alpha Omega0 f(t)^2
        Omega_3 = Omega0 exp(-(t - beta tau)^2 / tau^2) e^{i pi t / tau}

    alpha rescales Omega_2 and beta delays the Omega_3 envelope (in units
    of tau); both deform the swept parameter-space path while keeping its
    endpoints fixed, so holonomies of different (alpha, beta) loops need
    not commute.
    """

    omega0: float = 1.0
    tau: float = 1.0
    alpha: float = 1.0
    beta: float = 0.0

    def __post_init__(self) -> None:
        if not (self.omega0 > 0):
            raise ValueError(f"omega0 must be > 0, got {self.omega0}")
        if not (self.tau > 0):
            raise ValueError(f"tau must be > 0, got {self.tau}")
        if not (self.alpha > 0):
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if self.beta < 0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")

    @classmethod
    def reference(cls, omega0: float = 1.0, tau: float = 1.0) -> "LoopSpec":
        """The baseline (alpha=1, beta=0) loop."""
        return cls(omega0=omega0, tau=tau, alpha=1.0, beta=0.0)


class PulseTriple(NamedTuple):
    """Instantaneous Rabi frequencies; entries may be scalars or arrays."""

    omega1: complex | np.ndarray
    omega2: complex | np.ndarray
    omega3: complex | np.ndarray


@dataclass(frozen=True)
class ParamPoint:
    """Spherical pulse parameters at one instant.

    theta, phi in [0, pi/2] (all amplitudes non-negative); varphi is kept
    unwrapped -- the connection integral needs d(varphi), so it is never
    reduced mod 2 pi along a path.  omega is the total Rabi frequency.
    """

    theta: float
    phi: float
    varphi: float
    omega: float = 1.0


# window tolerance: composite schedules land on +-tau up to accumulated
# rounding of t0 + k*dt, so allow a hair of slack and clamp.
_WINDOW_RTOL = 1e-9


def pulses(spec: LoopSpec, t: float | np.ndarray) -> PulseTriple:
    """Rabi frequencies of a loop at proper time t in [-tau, tau].

    Accepts scalar or array t.  Raises OutOfWindowError outside the
    window; composite schedules must shift to loop proper time first.
    """
    t = np.asarray(t, dtype=float)
    tau = spec.tau
    slack = _WINDOW_RTOL * tau
    if np.any(t < -tau - slack) or np.any(t > tau + slack):
        raise OutOfWindowError(
            f"t={t!r} outside loop window [{-tau}, {tau}]"
        )
    t = np.clip(t, -tau, tau)
    f = np.cos(np.pi * t / (2.0 * tau))
    o1 = spec.omega0 * f + 0.0j
    o2 = spec.alpha * spec.omega0 * f**2 + 0.0j
    o3 = (
        spec.omega0
        * np.exp(-((t - spec.beta * tau) ** 2) / tau**2)
        * np.exp(1j * np.pi * t / tau)
    )
    if t.ndim == 0:
        return PulseTriple(complex(o1), complex(o2), complex(o3))
    return PulseTriple(o1, o2, o3)


def angles(p: PulseTriple) -> ParamPoint:
    """Spherical parameters (theta, phi, varphi, omega) of a pulse triple.

    phi = atan2(|O2|, |O1|), theta = atan2(sqrt(|O1|^2+|O2|^2), |O3|),
    varphi = arg(O3) (principal value; path sampling unwraps it), omega
    the total Rabi frequency.  When |O1| = |O2| = 0 both atan2 calls
    return the schedule-limit values (theta = phi = 0) since atan2(0, x>0)
    is 0; only the fully degenerate all-zero triple is rejected.
    """
    a1 = np.abs(p.omega1)
    a2 = np.abs(p.omega2)
    a3 = np.abs(p.omega3)
    omega = np.sqrt(a1**2 + a2**2 + a3**2)
    if np.any(omega == 0.0):
        raise DegeneratePointError("all three Rabi frequencies vanish")
    phi = np.arctan2(a2, a1)
    theta = np.arctan2(np.hypot(a1, a2), a3)
    varphi = np.angle(p.omega3)
    if np.ndim(omega) == 0:
        return ParamPoint(float(theta), float(phi), float(varphi), float(omega))
    return ParamPoint(theta, phi, varphi, omega)


def hamiltonian(p: PulseTriple) -> np.ndarray:
    """4x4 Hamiltonian in the (|0>, |1>, |2>, |3>) basis, hbar = 1."""
    h = np.zeros((4, 4), dtype=complex)
    h[0, 1] = -p.omega1
    h[0, 2] = -p.omega2
    h[0, 3] = -p.omega3
    h[1, 0] = -np.conj(p.omega1)
    h[2, 0] = -np.conj(p.omega2)
    h[3, 0] = -np.conj(p.omega3)
    return h


def dark_states(p: ParamPoint) -> tuple[np.ndarray, np.ndarray]:
    """The two zero-eigenvalue states (|D1>, |D2>) at a parameter point.

        |D1> = sin(phi) e^{i varphi} |1> - cos(phi) e^{i varphi} |2>
        |D2> = cos(theta) cos(phi) e^{i varphi} |1>
               + cos(theta) sin(phi) e^{i varphi} |2> - sin(theta) |3>

    Orthonormal, annihilated by the Hamiltonian, no |0> component.
    """
    e = np.exp(1j * p.varphi)
    d1 = np.array([0.0, np.sin(p.phi) * e, -np.cos(p.phi) * e, 0.0], dtype=complex)
    d2 = np.array(
        [
            0.0,
            np.cos(p.theta) * np.cos(p.phi) * e,
            np.cos(p.theta) * np.sin(p.phi) * e,
            -np.sin(p.theta),
        ],
        dtype=complex,
    )
    return d1, d2


def bright_states(p: ParamPoint) -> tuple[np.ndarray, np.ndarray]:
    """The gapped eigenstates (|B1>, |B2>), eigenvalues -Omega and +Omega.

    |B1,2> = [sin(theta)cos(phi) e^{i varphi}|1> + sin(theta)sin(phi)
    e^{i varphi}|2> + cos(theta)|3> +- e^{i varphi}|0>] / sqrt(2).
    Under the overall minus sign of the Hamiltonian, the "+" combination
    |B1> pairs with eigenvalue -Omega and |B2> with +Omega (the pairing
    is asserted in the tests).
    """
    e = np.exp(1j * p.varphi)
    core = np.array(
        [
            0.0,
            np.sin(p.theta) * np.cos(p.phi) * e,
            np.sin(p.theta) * np.sin(p.phi) * e,
            np.cos(p.theta),
        ],
        dtype=complex,
    )
    excited = np.array([e, 0.0, 0.0, 0.0], dtype=complex)
    b1 = (core + excited) / np.sqrt(2.0)
    b2 = (core - excited) / np.sqrt(2.0)
    return b1, b2


def dark_frame(p: ParamPoint) -> np.ndarray:
    """Dark states as columns of a 4x2 matrix (the transported frame)."""
    d1, d2 = dark_states(p)
    return np.column_stack([d1, d2])


def bright_frame(p: ParamPoint) -> np.ndarray:
    """Bright states as columns of a 4x2 matrix."""
    b1, b2 = bright_states(p)
    return np.column_stack([b1, b2])


def frame_matrix(p: ParamPoint) -> np.ndarray:
    """All four eigenvectors as columns (D1, D2, B1, B2); unitary 4x4."""
    return np.column_stack([dark_frame(p), bright_frame(p)])


def gauge_potential(
    theta: float | np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Analytic dark-subspace connection components (A_theta, A_phi, A_varphi).

    In the (|D1>, |D2>) ordering, A_{ab mu} = <D_a | d/d chi_mu D_b>:

        A_theta  = 0
        A_phi    = [[0, -cos(theta)], [cos(theta), 0]]
        A_varphi = diag(i, i cos(theta)^2)

    All components depend on theta only and are antihermitian.  theta may
    be an array of shape (K,), in which case each component has shape
    (K, 2, 2) -- this is what the transport integrator consumes.
    """
    theta = np.asarray(theta, dtype=float)
    c = np.cos(theta)
    shape = theta.shape + (2, 2)
    a_theta = np.zeros(shape, dtype=complex)
    a_phi = np.zeros(shape, dtype=complex)
    a_phi[..., 0, 1] = -c
    a_phi[..., 1, 0] = c
    a_varphi = np.zeros(shape, dtype=complex)
    a_varphi[..., 0, 0] = 1j
    a_varphi[..., 1, 1] = 1j * c**2
    return a_theta, a_phi, a_varphi
