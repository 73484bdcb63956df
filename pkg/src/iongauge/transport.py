"""Path-ordered transport of a matrix-valued connection along loops.

Given a connection A(chi) over parameters chi = (theta, phi, varphi) and
a sampled path, the holonomy is

    U = P exp( - integral A_mu d chi^mu )

evaluated as an ordered product of step exponentials: for each segment
the generator is -(A_theta d theta + A_phi d phi + A_varphi d varphi)
with the connection evaluated at the segment midpoint (second-order
accurate), and later segments multiply on the LEFT.  The engine is
generic over the subspace dimension: the tripod dark pair and both
spin-3/2 quadrupole sectors all ride through the same code.

A connection is any callable ``potential(theta, phi, varphi)`` accepting
equal-shape arrays and returning the three component matrices with
shapes broadcastable to (K, d, d).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .linalg import mat_exp, pauli_exp_batch, unitarity_defect
from .tripod import LoopSpec, angles, gauge_potential, pulses

__all__ = [
    "ConvergenceError",
    "GaugeJumpError",
    "Holonomy",
    "ParamPath",
    "commutator_norm",
    "loop_holonomy",
    "loop_path",
    "numeric_gauge_potential",
    "population_difference",
    "transport",
    "tripod_potential",
]

DEFAULT_STEPS = 20001

# a holonomy whose U^dag U deviates more than this is flagged unconverged
UNITARITY_TOLERANCE = 1e-8


class ConvergenceError(RuntimeError):
    """Step-doubling refinement failed to converge.

    Carries the refinement diagnostics so callers (and the CLI) can
    report how far the integration got.
    """

    def __init__(self, message: str, steps_tried: list[int], last_delta: float):
        super().__init__(message)
        self.steps_tried = steps_tried
        self.last_delta = last_delta


class GaugeJumpError(RuntimeError):
    """The eigenframe handed to the finite-difference builder is not
    smooth at the requested point (overlap matrix far from identity)."""


@dataclass(frozen=True)
class ParamPath:
    """A sampled path in (theta, phi, varphi) space.

    s is the traversal parameter, strictly increasing from 0 to 1; the
    angle arrays share its length.  closed=True asserts the endpoints
    coincide in (theta, phi) with varphi differing by a whole number of
    2 pi turns.  A generator callable may be attached so the path can be
    resampled at a different resolution (used by the convergence
    refinement).
    """

    s: np.ndarray
    theta: np.ndarray
    phi: np.ndarray
    varphi: np.ndarray
    closed: bool = False
    generator: Callable[[np.ndarray], tuple] | None = field(
        default=None, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        s = np.asarray(self.s, dtype=float)
        n = s.shape[0]
        if n < 2:
            raise ValueError("a path needs at least two samples")
        for name in ("theta", "phi", "varphi"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (n,):
                raise ValueError(f"{name} has shape {arr.shape}, expected ({n},)")
            object.__setattr__(self, name, arr)
        if np.any(np.diff(s) <= 0) or abs(s[0]) > 1e-12 or abs(s[-1] - 1.0) > 1e-12:
            raise ValueError("s must increase strictly from 0 to 1")
        object.__setattr__(self, "s", s)
        if self.closed:
            dth = abs(self.theta[-1] - self.theta[0])
            dph = abs(self.phi[-1] - self.phi[0])
            turns = (self.varphi[-1] - self.varphi[0]) / (2.0 * np.pi)
            if dth > 1e-9 or dph > 1e-9 or abs(turns - round(turns)) > 1e-9:
                raise ValueError(
                    "closed path endpoints disagree: "
                    f"dtheta={dth:.3g}, dphi={dph:.3g}, varphi turns={turns:.6f}"
                )

    def __len__(self) -> int:
        return self.s.shape[0]

    @classmethod
    def from_function(
        cls,
        fn: Callable[[np.ndarray], tuple],
        steps: int,
        closed: bool = False,
    ) -> "ParamPath":
        """Sample fn(s) -> (theta, phi, varphi) on a uniform s grid."""
        s = np.linspace(0.0, 1.0, steps)
        theta, phi, varphi = fn(s)
        theta, phi, varphi = np.broadcast_arrays(theta, phi, varphi, s)[:3]
        return cls(s=s, theta=theta, phi=phi, varphi=varphi, closed=closed, generator=fn)

    def resample(self, steps: int) -> "ParamPath":
        if self.generator is None:
            raise ValueError("path has no generator; cannot resample")
        return ParamPath.from_function(self.generator, steps, closed=self.closed)

    def reversed(self) -> "ParamPath":
        """The same geometric path traversed backwards."""
        gen = self.generator
        return ParamPath(
            s=1.0 - self.s[::-1],
            theta=self.theta[::-1],
            phi=self.phi[::-1],
            varphi=self.varphi[::-1],
            closed=self.closed,
            generator=(None if gen is None else (lambda s: gen(1.0 - s))),
        )


@dataclass(frozen=True)
class Holonomy:
    """Result of transporting a connection around a path."""

    matrix: np.ndarray
    steps: int
    unitarity_defect: float
    loop_label: str = ""

    @property
    def converged(self) -> bool:
        return self.unitarity_defect <= UNITARITY_TOLERANCE


def _ordered_product(mats: np.ndarray) -> np.ndarray:
    """mats[-1] @ ... @ mats[0] by pairwise tree reduction.

    The tree halves the Python-loop depth to log2(K) while preserving the
    factor order exactly: adjacent pairs are combined as M[2j+1] @ M[2j]
    and an odd leftover (the leftmost factor) is appended unchanged.
    """
    m = mats
    while m.shape[0] > 1:
        k = m.shape[0]
        half = k // 2
        paired = m[1 : 2 * half : 2] @ m[0 : 2 * half : 2]
        if k % 2:
            m = np.concatenate([paired, m[-1:]], axis=0)
        else:
            m = paired
    return m[0]


def transport(
    path: ParamPath,
    potential: Callable[[np.ndarray, np.ndarray, np.ndarray], tuple],
    steps: int | None = None,
    label: str = "",
) -> Holonomy:
    """Path-ordered exponential of -A along the sampled path.

    potential(theta, phi, varphi) must return (A_theta, A_phi, A_varphi)
    broadcastable to (K, d, d) for (K,) inputs.  Midpoint evaluation of
    the connection with the exact parameter increments gives second-order
    convergence in the sample count.
    """
    if steps is not None and steps != len(path):
        path = path.resample(steps)
    th_mid = 0.5 * (path.theta[1:] + path.theta[:-1])
    ph_mid = 0.5 * (path.phi[1:] + path.phi[:-1])
    vp_mid = 0.5 * (path.varphi[1:] + path.varphi[:-1])
    d_th = np.diff(path.theta)
    d_ph = np.diff(path.phi)
    d_vp = np.diff(path.varphi)
    a_th, a_ph, a_vp = potential(th_mid, ph_mid, vp_mid)
    k = th_mid.shape[0]
    gen = -(
        np.broadcast_to(a_th, (k,) + np.shape(a_th)[-2:]) * d_th[:, None, None]
        + np.broadcast_to(a_ph, (k,) + np.shape(a_ph)[-2:]) * d_ph[:, None, None]
        + np.broadcast_to(a_vp, (k,) + np.shape(a_vp)[-2:]) * d_vp[:, None, None]
    )
    dim = gen.shape[-1]
    if dim == 2:
        factors = pauli_exp_batch(gen)
    else:
        factors = np.stack([mat_exp(g) for g in gen])
    u = _ordered_product(factors)
    return Holonomy(
        matrix=u,
        steps=len(path),
        unitarity_defect=unitarity_defect(u),
        loop_label=label,
    )


def tripod_potential(traceless: bool = False) -> Callable:
    """The analytic tripod dark-pair connection as a transport potential.

    traceless=True removes the trace (pure-phase) part of A_varphi; the
    holonomy then differs by a global phase only, which drops out of all
    populations -- exposed so that claim is directly testable.
    """

    def potential(theta, phi, varphi):
        a_th, a_ph, a_vp = gauge_potential(theta)
        if traceless:
            tr = 0.5 * (a_vp[..., 0, 0] + a_vp[..., 1, 1])
            a_vp = a_vp.copy()
            a_vp[..., 0, 0] -= tr
            a_vp[..., 1, 1] -= tr
        return a_th, a_ph, a_vp

    return potential


def loop_path(spec: LoopSpec, steps: int = DEFAULT_STEPS) -> ParamPath:
    """Sample a pulse loop's swept (theta, phi, varphi) path.

    Uniform grid in loop time over [-tau, tau]; varphi is unwrapped so
    the path carries the full -pi -> pi winding.
    """

    def gen(s: np.ndarray):
        t = spec.tau * (2.0 * np.asarray(s) - 1.0)
        point = angles(pulses(spec, t))
        return point.theta, point.phi, np.unwrap(np.atleast_1d(point.varphi))

    return ParamPath.from_function(gen, steps, closed=True)


def loop_holonomy(
    spec: LoopSpec,
    steps: int = DEFAULT_STEPS,
    label: str = "",
    traceless: bool = False,
    refine: bool = False,
    refine_tol: float = 1e-9,
    max_refinements: int = 4,
) -> Holonomy:
    """Holonomy of one pulse loop with the analytic connection.

    The result depends only on the swept path geometry -- recomputing
    with a different (omega0, tau) changes nothing beyond rounding noise.
    With refine=True the step count is doubled until successive
    holonomies differ by less than refine_tol in Frobenius norm (at most
    max_refinements doublings), raising ConvergenceError otherwise.
    """
    if not label:
        label = f"loop(alpha={spec.alpha:g}, beta={spec.beta:g})"
    potential = tripod_potential(traceless=traceless)
    result = transport(loop_path(spec, steps), potential, label=label)
    if not refine:
        return result
    tried = [steps]
    for _ in range(max_refinements):
        steps = 2 * (steps - 1) + 1
        finer = transport(loop_path(spec, steps), potential, label=label)
        delta = float(np.linalg.norm(finer.matrix - result.matrix))
        tried.append(steps)
        result = finer
        if delta < refine_tol:
            return result
    raise ConvergenceError(
        f"holonomy for {label} not converged to {refine_tol:g} "
        f"after {max_refinements} refinements (last delta {delta:.3e})",
        steps_tried=tried,
        last_delta=delta,
    )


def _as_matrix(u) -> np.ndarray:
    return u.matrix if isinstance(u, Holonomy) else np.asarray(u, dtype=complex)


def population_difference(u1, u2) -> dict:
    """Order-dependence observable of two loop holonomies.

    For the composite run first-loop-then-second, U = U2 @ U1 and the
    final population of the bare state |1> (= the second dark state at
    the endpoints) is P = |U_22|^2; the reversed order gives U' = U1 @ U2
    and P' = |U'_22|^2.  P_d = P' - P is nonzero only if the two
    holonomies fail to commute.
    """
    m1 = _as_matrix(u1)
    m2 = _as_matrix(u2)
    p = abs((m2 @ m1)[1, 1]) ** 2
    p_prime = abs((m1 @ m2)[1, 1]) ** 2
    return {"P": p, "P_prime": p_prime, "P_d": p_prime - p}


def commutator_norm(u1, u2) -> float:
    """Frobenius norm of U2 U1 - U1 U2; zero iff the pair commutes."""
    m1 = _as_matrix(u1)
    m2 = _as_matrix(u2)
    return float(np.linalg.norm(m2 @ m1 - m1 @ m2))


def numeric_gauge_potential(
    frame: Callable[[float, float, float], np.ndarray],
    chi: tuple[float, float, float],
    h: float = 1e-5,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Central-difference connection over an explicit eigenframe.

    frame(theta, phi, varphi) must return the frame vectors as the
    columns of an (n, k) matrix, smoothly gauged near chi.  Returns one
    k x k matrix per parameter direction:

        A_mu[a, b] = <eta_a(chi) | (eta_b(chi + h e_mu) - eta_b(chi - h e_mu)) / 2h>

    This is the independent oracle for the analytic connections; the
    antihermitian part dominates (hermitian residual is O(h^2)).  A frame
    whose overlap between neighboring points is far from the identity is
    not smoothly gauged and raises GaugeJumpError.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    chi = np.asarray(chi, dtype=float)
    f0 = np.asarray(frame(*chi), dtype=complex)
    k = f0.shape[1]
    out = []
    for mu in range(3):
        offset = np.zeros(3)
        offset[mu] = h
        f_plus = np.asarray(frame(*(chi + offset)), dtype=complex)
        f_minus = np.asarray(frame(*(chi - offset)), dtype=complex)
        for neighbor in (f_plus, f_minus):
            overlap = f0.conj().T @ neighbor
            if np.linalg.norm(overlap - np.eye(k)) > 0.5:
                raise GaugeJumpError(
                    f"frame is discontinuous along direction {mu} at chi={chi}"
                )
        out.append(f0.conj().T @ (f_plus - f_minus) / (2.0 * h))
    return tuple(out)
