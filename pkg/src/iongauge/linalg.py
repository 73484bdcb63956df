"""Small dense complex linear algebra used by the holonomy engine.

Everything here operates on plain numpy arrays.  Matrices are small
(2x2 and 4x4 dominate; nothing above 8x8), so the exponential is a
scaling-and-squaring truncated series rather than a scipy dependency,
and the 2x2 case gets a closed form through the Pauli decomposition --
the transport loop exponentiates hundreds of thousands of 2x2
generators per run and the closed form vectorizes over the whole batch.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "frobenius_norm",
    "mat_exp",
    "pauli_decompose",
    "pauli_exp",
    "pauli_exp_batch",
    "unitarity_defect",
]

# Taylor order for the scaled series.  With the norm scaled below 1/2 the
# order-18 remainder is ~0.5**19/19! ~ 1.6e-23, i.e. rounding-dominated.
_EXP_SERIES_ORDER = 18


def frobenius_norm(m: np.ndarray) -> float:
    """Frobenius norm of a matrix (or batch of matrices)."""
    return float(np.linalg.norm(m))


def mat_exp(m: np.ndarray) -> np.ndarray:
    """Matrix exponential of a small square complex matrix.

    Scaling-and-squaring with a fixed-order Taylor series.  Intended for
    dims <= 8; raises ValueError for non-square input.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"mat_exp needs a square matrix, got shape {m.shape}")
    norm = np.linalg.norm(m)
    # Scale so the series argument has norm <= 0.5.
    squarings = max(0, int(np.ceil(np.log2(norm / 0.5)))) if norm > 0.5 else 0
    a = m / (2**squarings)
    n = m.shape[0]
    result = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, _EXP_SERIES_ORDER + 1):
        term = term @ a / k
        result = result + term
    for _ in range(squarings):
        result = result @ result
    return result


def pauli_decompose(m: np.ndarray) -> tuple[complex, np.ndarray]:
    """Write a 2x2 matrix as c0*I + v . sigma; returns (c0, v)."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    c0 = 0.5 * (m[0, 0] + m[1, 1])
    v = np.array(
        [
            0.5 * (m[0, 1] + m[1, 0]),
            0.5j * (m[0, 1] - m[1, 0]),
            0.5 * (m[0, 0] - m[1, 1]),
        ],
        dtype=complex,
    )
    return complex(c0), v


def pauli_exp(c0: complex, v: np.ndarray) -> np.ndarray:
    """exp(c0*I + v . sigma) in closed form.

    Uses exp(c0) * (cosh(r) I + sinh(r)/r * v.sigma) with r = sqrt(v.v);
    the complex square root branch is irrelevant because cosh and
    sinh(r)/r are even functions of r.
    """
    v = np.asarray(v, dtype=complex)
    m = np.empty((2, 2), dtype=complex)
    r2 = v[0] ** 2 + v[1] ** 2 + v[2] ** 2
    r = np.sqrt(r2)
    if abs(r) < 1e-6:
        # series for sinh(r)/r, accurate to ~1e-38 here
        shc = 1.0 + r2 / 6.0 + r2 * r2 / 120.0
        ch = 1.0 + r2 / 2.0 + r2 * r2 / 24.0
    else:
        shc = np.sinh(r) / r
        ch = np.cosh(r)
    m[0, 0] = ch + shc * v[2]
    m[1, 1] = ch - shc * v[2]
    m[0, 1] = shc * (v[0] - 1j * v[1])
    m[1, 0] = shc * (v[0] + 1j * v[1])
    return np.exp(c0) * m


def pauli_exp_batch(g: np.ndarray) -> np.ndarray:
    """exp(g[k]) for a batch of 2x2 matrices, shape (..., 2, 2).

    Same closed form as pauli_exp but vectorized over the leading axes;
    this is the hot path of the transport integrator.
    """
    g = np.asarray(g, dtype=complex)
    c0 = 0.5 * (g[..., 0, 0] + g[..., 1, 1])
    vx = 0.5 * (g[..., 0, 1] + g[..., 1, 0])
    vy = 0.5j * (g[..., 0, 1] - g[..., 1, 0])
    vz = 0.5 * (g[..., 0, 0] - g[..., 1, 1])
    r2 = vx**2 + vy**2 + vz**2
    r = np.sqrt(r2)
    small = np.abs(r) < 1e-6
    r_safe = np.where(small, 1.0, r)
    shc = np.where(small, 1.0 + r2 / 6.0 + r2 * r2 / 120.0, np.sinh(r_safe) / r_safe)
    ch = np.where(small, 1.0 + r2 / 2.0 + r2 * r2 / 24.0, np.cosh(r_safe))
    out = np.empty(g.shape, dtype=complex)
    out[..., 0, 0] = ch + shc * vz
    out[..., 1, 1] = ch - shc * vz
    out[..., 0, 1] = shc * (vx - 1j * vy)
    out[..., 1, 0] = shc * (vx + 1j * vy)
    out *= np.exp(c0)[..., None, None]
    return out


def unitarity_defect(u: np.ndarray) -> float:
    """Frobenius norm of (U^dagger U - I); 0 for exactly unitary U."""
    u = np.asarray(u, dtype=complex)
    n = u.shape[-1]
    return float(np.linalg.norm(np.conjugate(np.swapaxes(u, -1, -2)) @ u - np.eye(n)))
