"""Pulse loops, eigenstructure, and the analytic dark-pair connection."""

from __future__ import annotations

import numpy as np
import pytest

from iongauge.tripod import (
    DegeneratePointError,
    LoopSpec,
    OutOfWindowError,
    ParamPoint,
    PulseTriple,
    angles,
    bright_states,
    dark_states,
    frame_matrix,
    gauge_potential,
    hamiltonian,
    pulses,
)

C1 = LoopSpec.reference()
C2 = LoopSpec(alpha=7.0, beta=0.5)


def test_spec_validation():
    with pytest.raises(ValueError):
        LoopSpec(omega0=0.0)
    with pytest.raises(ValueError):
        LoopSpec(tau=-1.0)
    with pytest.raises(ValueError):
        LoopSpec(alpha=0.0)
    with pytest.raises(ValueError):
        LoopSpec(beta=-0.1)


def test_reference_pulse_values_at_loop_center():
    p = pulses(C1, 0.0)
    assert p.omega1 == pytest.approx(1.0)
    assert p.omega2 == pytest.approx(1.0)
    assert p.omega3 == pytest.approx(1.0)


def test_reference_pulse_values_at_loop_edge():
    p = pulses(C1, C1.tau)
    assert abs(p.omega1) < 1e-12
    assert abs(p.omega2) < 1e-12
    # Gaussian at distance tau, phase pi
    assert p.omega3 == pytest.approx(-np.exp(-1.0), abs=1e-12)


def test_scaled_pulse_values():
    spec = LoopSpec(omega0=3.0, tau=2.0, alpha=7.0, beta=0.5)
    p = pulses(spec, 0.0)
    assert p.omega1 == pytest.approx(3.0)
    assert p.omega2 == pytest.approx(21.0)
    assert p.omega3 == pytest.approx(3.0 * np.exp(-0.25))


def test_pulses_outside_window_raise():
    with pytest.raises(OutOfWindowError):
        pulses(C1, 1.5)
    with pytest.raises(OutOfWindowError):
        pulses(C1, np.array([0.0, -1.2]))
    # a hair beyond the edge from time-grid rounding is clamped, not fatal
    p = pulses(C1, 1.0 + 1e-13)
    assert abs(p.omega1) < 1e-12


def test_pulses_vectorized_shape():
    t = np.linspace(-1.0, 1.0, 7)
    p = pulses(C2, t)
    assert p.omega1.shape == (7,)
    assert np.iscomplexobj(p.omega3)


def test_angles_at_symmetric_point():
    a = angles(PulseTriple(1.0, 1.0, 1.0))
    assert a.phi == pytest.approx(np.pi / 4)
    assert a.theta == pytest.approx(np.arctan(np.sqrt(2.0)))
    assert a.varphi == pytest.approx(0.0)
    assert a.omega == pytest.approx(np.sqrt(3.0))


def test_angles_weighting():
    a = angles(pulses(C2, 0.0))
    assert np.tan(a.phi) == pytest.approx(7.0)


def test_angles_at_loop_endpoints():
    for spec in (C1, C2, LoopSpec(alpha=3.0, beta=1.0)):
        start = angles(pulses(spec, -spec.tau))
        end = angles(pulses(spec, spec.tau))
        assert abs(start.theta) < 1e-10
        assert abs(start.phi) < 1e-10
        assert start.varphi == pytest.approx(-np.pi, abs=1e-12)
        assert abs(end.theta) < 1e-10
        assert abs(end.phi) < 1e-10
        assert end.varphi == pytest.approx(np.pi, abs=1e-12)


def test_angles_match_quoted_parameterization():
    # tan(phi) = alpha f(t), tan(theta) = f sqrt(1 + alpha^2 f^2) / g(t)
    for spec in (C1, C2):
        t = np.linspace(-spec.tau, spec.tau, 1001)
        a = angles(pulses(spec, t))
        f = np.cos(np.pi * t / (2 * spec.tau))
        g = np.exp(-((t - spec.beta * spec.tau) ** 2) / spec.tau**2)
        assert np.allclose(np.tan(a.phi), spec.alpha * f, atol=1e-12)
        assert np.allclose(
            np.tan(a.theta), f * np.sqrt(1 + spec.alpha**2 * f**2) / g, atol=1e-9
        )
        assert np.allclose(np.unwrap(a.varphi), np.pi * t / spec.tau, atol=1e-9)


def test_angles_reject_fully_degenerate_point():
    with pytest.raises(DegeneratePointError):
        angles(PulseTriple(0.0, 0.0, 0.0))


def test_hamiltonian_spectrum():
    rng = np.random.default_rng(211)
    for _ in range(20):
        trip = PulseTriple(
            complex(rng.normal(), rng.normal()),
            complex(rng.normal(), rng.normal()),
            complex(rng.normal(), rng.normal()),
        )
        a = angles(trip)
        h = hamiltonian(trip)
        eigs = np.sort(np.linalg.eigvalsh(h))
        assert np.allclose(eigs, [-a.omega, 0.0, 0.0, a.omega], atol=1e-12)


def representable_triple(rng):
    """Random pulses in the family the angle map inverts exactly:
    nonnegative real amplitudes on legs 1 and 2, free phase on leg 3."""
    return PulseTriple(
        abs(rng.normal()) + 0.05,
        abs(rng.normal()) + 0.05,
        (abs(rng.normal()) + 0.05) * np.exp(1j * rng.uniform(-np.pi, np.pi)),
    )


def test_dark_states_are_dark():
    rng = np.random.default_rng(212)
    for _ in range(100):
        trip = representable_triple(rng)
        a = angles(trip)
        h = hamiltonian(trip)
        for d in dark_states(a):
            assert np.linalg.norm(h @ d) <= 1e-12 * a.omega
            assert abs(d[0]) == 0.0  # no excited-state component


def test_bright_states_pair_with_gap():
    rng = np.random.default_rng(213)
    for _ in range(50):
        trip = representable_triple(rng)
        a = angles(trip)
        h = hamiltonian(trip)
        b1, b2 = bright_states(a)
        assert np.linalg.norm(h @ b1 + a.omega * b1) <= 1e-12 * a.omega
        assert np.linalg.norm(h @ b2 - a.omega * b2) <= 1e-12 * a.omega


def test_frame_is_unitary():
    rng = np.random.default_rng(214)
    for _ in range(20):
        a = angles(
            PulseTriple(
                complex(rng.normal(), rng.normal()),
                complex(rng.normal(), rng.normal()),
                complex(rng.normal(), rng.normal()),
            )
        )
        f = frame_matrix(a)
        assert np.linalg.norm(f.conj().T @ f - np.eye(4)) < 1e-12


def test_gauge_potential_at_pole():
    a_th, a_ph, a_vp = gauge_potential(0.0)
    assert np.allclose(a_th, np.zeros((2, 2)))
    assert np.allclose(a_ph, np.array([[0.0, -1.0], [1.0, 0.0]]))
    assert np.allclose(a_vp, np.diag([1j, 1j]))


def test_gauge_potential_at_equator():
    a_th, a_ph, a_vp = gauge_potential(np.pi / 2)
    assert np.allclose(a_ph, np.zeros((2, 2)), atol=1e-15)
    assert np.allclose(a_vp, np.diag([1j, 0.0]), atol=1e-15)


def test_gauge_potential_antihermitian_and_vectorized():
    theta = np.linspace(0.0, np.pi / 2, 11)
    a_th, a_ph, a_vp = gauge_potential(theta)
    assert a_ph.shape == (11, 2, 2)
    assert a_vp.shape == (11, 2, 2)
    for block in (a_ph, a_vp):
        assert np.allclose(block + np.conj(np.transpose(block, (0, 2, 1))), 0.0)


def test_gauge_potential_matches_scalar_calls():
    theta = np.linspace(0.1, 1.4, 9)
    _, a_ph_vec, a_vp_vec = gauge_potential(theta)
    for i, th in enumerate(theta):
        _, a_ph, a_vp = gauge_potential(float(th))
        assert np.allclose(a_ph_vec[i], a_ph)
        assert np.allclose(a_vp_vec[i], a_vp)
