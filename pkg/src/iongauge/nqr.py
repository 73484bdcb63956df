"""Spin-3/2 quadrupole system with a squared Zeeman-like coupling.

H = B^2 (S . n)^2 for a unit direction n(theta, varphi) has the twofold
degenerate eigenvalues B^2/4 and 9 B^2/4 at every field direction, so
each degenerate pair carries its own matrix-valued connection.  The
|m| = 1/2 pair is genuinely non-Abelian when both angles vary; the
|m| = 3/2 pair, and any loop run at fixed theta, reduce to commuting
(effectively Abelian) holonomies.  This module builds the operators, the
rotated eigenframe, the per-sector connections, and small loop factories
for feeding the transport engine.

Basis order everywhere: (|3/2>, |1/2>, |-1/2>, |-3/2>).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import mat_exp, pauli_exp
from .transport import ParamPath, commutator_norm, transport

__all__ = [
    "M_VALUES",
    "NQRPoint",
    "SpinOperators",
    "latitude_loop",
    "nqr_frame",
    "nqr_gauge_potential",
    "nqr_hamiltonian",
    "nqr_hamiltonian_direct",
    "nqr_noncommutativity_demo",
    "rectangle_loop",
    "sector_indices",
    "sector_potential",
    "spin_operators",
    "tycko_fixed_theta_holonomy",
]

SPIN = 1.5

# S_z eigenvalues in basis order
M_VALUES = (1.5, 0.5, -0.5, -1.5)

# row indices of the two degenerate pairs
_SECTORS = {"m12": (1, 2), "m32": (0, 3)}


@dataclass(frozen=True, eq=False)
class SpinOperators:
    """The spin-3/2 angular momentum matrices in the S_z eigenbasis."""

    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray


def spin_operators() -> SpinOperators:
    """Build S_x, S_y, S_z for S = 3/2 from the ladder operators."""
    m = np.array(M_VALUES)
    s_plus = np.zeros((4, 4))
    for col in range(1, 4):
        s_plus[col - 1, col] = np.sqrt(SPIN * (SPIN + 1) - m[col] * (m[col] + 1))
    s_minus = s_plus.T
    sx = 0.5 * (s_plus + s_minus) + 0j
    sy = -0.5j * (s_plus - s_minus)
    sz = np.diag(m) + 0j
    return SpinOperators(sx=sx, sy=sy, sz=sz)


_OPS = spin_operators()


@dataclass(frozen=True)
class NQRPoint:
    """Field magnitude and direction for the quadrupole Hamiltonian."""

    b: float
    theta: float
    varphi: float

    def __post_init__(self) -> None:
        if self.b <= 0:
            raise ValueError("b must be positive")
        if not 0.0 <= self.theta <= np.pi:
            raise ValueError("theta must lie in [0, pi]")


def nqr_frame(p: NQRPoint) -> np.ndarray:
    """Rotated eigenframe e^{-i varphi S_z} e^{-i theta S_y} as columns.

    Column a is the eigenvector continuously connected to |m_a>; the
    frame is smooth in both angles, which is what the finite-difference
    connection oracle requires.
    """
    phase = np.diag(np.exp(-1j * p.varphi * np.array(M_VALUES)))
    return phase @ mat_exp(-1j * p.theta * _OPS.sy)


def nqr_hamiltonian(p: NQRPoint) -> np.ndarray:
    """B^2 R S_z^2 R^dag with R the rotated frame."""
    r = nqr_frame(p)
    return p.b**2 * (r @ np.diag(np.array(M_VALUES) ** 2) @ r.conj().T)


def nqr_hamiltonian_direct(p: NQRPoint) -> np.ndarray:
    """B^2 (S . n)^2 assembled directly from the direction vector.

    Kept alongside the rotation construction as a cross-check: the two
    must agree to rounding.
    """
    n_dot_s = (
        np.sin(p.theta) * np.cos(p.varphi) * _OPS.sx
        + np.sin(p.theta) * np.sin(p.varphi) * _OPS.sy
        + np.cos(p.theta) * _OPS.sz
    )
    return p.b**2 * (n_dot_s @ n_dot_s)


def sector_indices(sector: str) -> tuple[int, int]:
    if sector not in _SECTORS:
        raise ValueError(f"sector must be one of {sorted(_SECTORS)}, got {sector!r}")
    return _SECTORS[sector]


def _block(op: np.ndarray, idx: tuple[int, int]) -> np.ndarray:
    rows = np.array(idx)
    return op[np.ix_(rows, rows)]


def nqr_gauge_potential(theta, sector: str) -> tuple[np.ndarray, np.ndarray]:
    """Connection blocks (A_theta, A_varphi) of one degenerate pair.

    In the rotated frame the full connection is A_theta = -i S_y and
    A_varphi = -i (cos(theta) S_z - sin(theta) S_x); the sector blocks
    restrict those to the requested pair.  theta may be an array, in
    which case A_varphi gains matching leading axes (A_theta is
    theta-independent and is broadcast to the same shape).

    For the |m|=1/2 pair this reproduces the two-level form
    -i(cos(theta) sigma_z / 2 - sin(theta) sigma_x) for A_varphi with an
    off-diagonal weight S + 1/2 = 2 over 2; the |m|=3/2 pair has no
    off-diagonal part at any theta, so that sector is Abelian.
    """
    idx = sector_indices(sector)
    theta = np.asarray(theta, dtype=float)
    a_theta_flat = -1j * _block(_OPS.sy, idx)
    sz_block = _block(_OPS.sz, idx)
    sx_block = _block(_OPS.sx, idx)
    cos = np.cos(theta)[..., None, None]
    sin = np.sin(theta)[..., None, None]
    a_varphi = -1j * (cos * sz_block - sin * sx_block)
    a_theta = np.broadcast_to(a_theta_flat, theta.shape + (2, 2)).copy()
    if theta.ndim == 0:
        return a_theta_flat.copy(), a_varphi.reshape(2, 2)
    return a_theta, a_varphi


def sector_potential(sector: str):
    """Adapter exposing a sector's connection to the transport engine.

    The returned callable takes (theta, phi, varphi) like any transport
    potential; the middle coordinate is unused because the field
    direction only has two angles.
    """
    idx = sector_indices(sector)
    a_theta_flat = -1j * _block(_OPS.sy, idx)
    sz_block = _block(_OPS.sz, idx)
    sx_block = _block(_OPS.sx, idx)

    def potential(theta, phi, varphi):
        theta = np.asarray(theta, dtype=float)
        cos = np.cos(theta)[..., None, None]
        sin = np.sin(theta)[..., None, None]
        a_varphi = -1j * (cos * sz_block - sin * sx_block)
        a_theta = np.broadcast_to(a_theta_flat, theta.shape + (2, 2))
        return a_theta, np.zeros_like(a_varphi), a_varphi

    return potential


def tycko_fixed_theta_holonomy(cos_theta: float, delta_varphi: float) -> np.ndarray:
    """Closed-form |m|=1/2 holonomy of a fixed-theta varphi rotation.

    With theta constant, A_varphi is a single fixed matrix and the
    path-ordered exponential collapses to exp(-delta_varphi * A_varphi).
    All such holonomies at one theta share a generator, so they commute
    with each other regardless of sweep details -- the Abelian special
    case that a fast fixed-axis rotation realizes.
    """
    if not -1.0 <= cos_theta <= 1.0:
        raise ValueError("cos_theta must lie in [-1, 1]")
    sin_theta = np.sqrt(1.0 - cos_theta**2)
    # pauli components of -delta_varphi * A_varphi, with
    # A_varphi = -i (cos(theta) sigma_z / 2 - sin(theta) sigma_x)
    v = np.array(
        [
            -1j * delta_varphi * sin_theta,
            0.0,
            0.5j * delta_varphi * cos_theta,
        ]
    )
    return pauli_exp(0.0, v)


def latitude_loop(theta0: float, winding: int = 1, steps: int = 20001) -> ParamPath:
    """Circle at fixed theta: varphi sweeps 0 -> 2*pi*winding."""

    def gen(s):
        s = np.asarray(s, dtype=float)
        return (
            np.full_like(s, theta0),
            np.zeros_like(s),
            2.0 * np.pi * winding * s,
        )

    return ParamPath.from_function(gen, steps, closed=True)


def rectangle_loop(
    theta_lo: float,
    theta_hi: float,
    varphi_span: float,
    steps: int = 20001,
) -> ParamPath:
    """Closed rectangle in the (theta, varphi) plane, both angles varying.

    Perimeter: up in theta, across in varphi, back down, and return.
    Piecewise-linear legs keyed to quarter points of s.
    """
    if not theta_lo < theta_hi:
        raise ValueError("need theta_lo < theta_hi")
    breaks = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
    theta_key = np.array([theta_lo, theta_hi, theta_hi, theta_lo, theta_lo])
    varphi_key = np.array([0.0, 0.0, varphi_span, varphi_span, 0.0])

    def gen(s):
        s = np.asarray(s, dtype=float)
        return (
            np.interp(s, breaks, theta_key),
            np.zeros_like(s),
            np.interp(s, breaks, varphi_key),
        )

    return ParamPath.from_function(gen, steps, closed=True)


def nqr_noncommutativity_demo(
    loop_a: ParamPath | None = None,
    loop_b: ParamPath | None = None,
    steps: int = 20001,
) -> dict:
    """Transport two loops in the |m|=1/2 sector and compare orderings.

    Defaults: a latitude circle at cos(theta) = 1/sqrt(3) against a
    rectangle where theta and varphi both vary.  Fixed-theta pairs give a
    zero commutator; the default pair does not, which is the whole point
    of driving both angles.
    """
    if loop_a is None:
        loop_a = latitude_loop(np.arccos(1.0 / np.sqrt(3.0)), steps=steps)
    if loop_b is None:
        loop_b = rectangle_loop(np.pi / 6.0, np.pi / 3.0, np.pi, steps=steps)
    potential = sector_potential("m12")
    u_a = transport(loop_a, potential, steps=steps, label="loop_a")
    u_b = transport(loop_b, potential, steps=steps, label="loop_b")
    return {
        "commutator_norm": commutator_norm(u_a, u_b),
        "holonomies": (u_a, u_b),
    }
