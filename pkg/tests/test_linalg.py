"""Matrix-exponential kernels against slow-but-sure references."""

from __future__ import annotations

import numpy as np
import pytest

from iongauge.linalg import (
    frobenius_norm,
    mat_exp,
    pauli_decompose,
    pauli_exp,
    pauli_exp_batch,
    unitarity_defect,
)


def taylor_reference(a: np.ndarray, terms: int = 60) -> np.ndarray:
    """Plain truncated series; accurate for ||a|| ~ 1, no scaling tricks."""
    out = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ a / k
        out = out + term
    return out


def random_antihermitian(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    m = 0.5 * (m - m.conj().T)
    return scale * m / max(frobenius_norm(m), 1e-30)


def test_mat_exp_matches_series_for_small_norm():
    rng = np.random.default_rng(101)
    for _ in range(20):
        a = random_antihermitian(rng, 4, scale=rng.uniform(0.05, 1.0))
        assert frobenius_norm(mat_exp(a) - taylor_reference(a)) < 1e-12


def test_mat_exp_large_norm_uses_scaling():
    rng = np.random.default_rng(102)
    a = random_antihermitian(rng, 4, scale=50.0)
    u = mat_exp(a)
    # antihermitian generator -> unitary exponential, at any norm
    assert unitarity_defect(u) < 1e-10
    # exp(-a) is the exact inverse
    assert frobenius_norm(u @ mat_exp(-a) - np.eye(4)) < 1e-10


def test_mat_exp_determinant_identity():
    rng = np.random.default_rng(103)
    for _ in range(10):
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        a *= 0.7
        assert abs(np.linalg.det(mat_exp(a)) - np.exp(np.trace(a))) < 1e-10


def test_mat_exp_zero_and_identity():
    assert np.allclose(mat_exp(np.zeros((5, 5))), np.eye(5))
    e = mat_exp(np.eye(2, dtype=complex))
    assert np.allclose(e, np.e * np.eye(2), atol=1e-14)


def test_mat_exp_rejects_non_square():
    with pytest.raises(ValueError):
        mat_exp(np.zeros((2, 3)))


def test_pauli_roundtrip():
    rng = np.random.default_rng(104)
    for _ in range(20):
        c0 = complex(rng.normal(), rng.normal())
        v = rng.normal(size=3) + 1j * rng.normal(size=3)
        m = c0 * np.eye(2) + (
            v[0] * np.array([[0, 1], [1, 0]])
            + v[1] * np.array([[0, -1j], [1j, 0]])
            + v[2] * np.array([[1, 0], [0, -1]])
        )
        c0_back, v_back = pauli_decompose(m)
        assert abs(c0_back - c0) < 1e-13
        assert np.allclose(v_back, v, atol=1e-13)


def test_pauli_exp_matches_mat_exp():
    rng = np.random.default_rng(105)
    for _ in range(30):
        c0 = complex(rng.normal(), rng.normal()) * 0.5
        v = (rng.normal(size=3) + 1j * rng.normal(size=3)) * 0.8
        m = c0 * np.eye(2) + (
            v[0] * np.array([[0, 1], [1, 0]])
            + v[1] * np.array([[0, -1j], [1j, 0]])
            + v[2] * np.array([[1, 0], [0, -1]])
        )
        assert frobenius_norm(pauli_exp(c0, v) - mat_exp(m)) < 1e-12


def test_pauli_exp_small_rotation_limit():
    # r -> 0 must fall back to the series branch smoothly
    u = pauli_exp(0.0, np.array([1e-9j, 0.0, 0.0]))
    assert frobenius_norm(u - np.eye(2)) < 1e-8
    assert unitarity_defect(u) < 1e-14


def test_pauli_exp_batch_matches_scalar():
    rng = np.random.default_rng(106)
    gens = rng.normal(size=(17, 2, 2)) + 1j * rng.normal(size=(17, 2, 2))
    gens = 0.3 * (gens - np.conj(np.transpose(gens, (0, 2, 1))))
    batch = pauli_exp_batch(gens)
    for i in range(gens.shape[0]):
        c0, v = pauli_decompose(gens[i])
        assert frobenius_norm(batch[i] - pauli_exp(c0, v)) < 1e-13


def test_unitarity_defect_detects_nonunitary():
    rng = np.random.default_rng(107)
    q, _ = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
    assert unitarity_defect(q) < 1e-13
    assert unitarity_defect(1.1 * q) > 0.1
