import math

import numpy as np
import pytest

from beq import (
    LineConfiguration,
    ProtonSystem,
    SignedAtomicMeasure,
    critical_points,
    energy_V,
    energy_V_nu,
    energy_V_with_infinity,
    energy_W,
    energy_W_mu,
    exceptional_report,
    imaginary_directional_derivative,
    line_gradient,
    radial_derivative,
    restricted_energy,
    tangential_gradient,
    tangential_hessian,
)
from beq.errors import ExceptionalConfiguration, InfinityPresent, MeasureError, SymmetryViolation

ZETA = np.array([0.3 + 0.2j, -0.4 + 0.1j])
TAUS = np.array([0.2, 2.1, 4.0])


def test_proton_system_validation():
    p = ProtonSystem([0.1, 0.5j])
    assert np.allclose(p.outer, [10, 2j])
    for bad in ([0.0], [1.2], [0.1, 0.1]):
        with pytest.raises(ValueError):
            ProtonSystem(bad)


def test_line_configuration_infinity():
    lc = LineConfiguration([0.0, math.inf, 2.0])
    assert lc.infinite_index == 1
    with pytest.raises(ValueError):
        LineConfiguration([math.inf, -math.inf])


def test_exceptional_report_tags():
    w = np.exp(1j * np.array([0.0, 0.0, 1.0]))
    assert [r.kind for r in exceptional_report(w).reasons] == ["electron-electron"]
    z = 0.5
    hits = exceptional_report(np.array([0.5, 2.0, 1j]), [z])
    assert sorted(r.kind for r in hits.reasons) == ["electron-proton", "electron-reflected-proton"]
    assert exceptional_report(np.array([1.0]), [0.0]).reasons[0].kind == "proton-at-origin"
    assert not exceptional_report(np.exp(1j * TAUS), ZETA)


def test_energy_w_equals_measure_form():
    w = np.exp(1j * TAUS)
    mu = SignedAtomicMeasure.from_protons(ZETA)
    assert energy_W(w, ZETA) == pytest.approx(energy_W_mu(w, mu), abs=1e-12)
    assert restricted_energy(TAUS, ZETA) == pytest.approx(energy_W(w, ZETA))


def test_energy_w_needs_n_minus_one_protons():
    with pytest.raises(ValueError):
        energy_W(np.exp(1j * TAUS), ZETA[:1])


def test_collisions_raise_with_report():
    with pytest.raises(ExceptionalConfiguration) as info:
        energy_W(np.exp(1j * np.array([0.2, 0.2, 3.0])), ZETA)
    assert info.value.report.reasons[0].kind == "electron-electron"


def test_batched_restricted_energy():
    batch = np.stack([TAUS, TAUS + 0.1, TAUS - 0.3])
    got = restricted_energy(batch, ZETA)
    assert np.allclose(got, [restricted_energy(row, ZETA) for row in batch])


def test_tangential_gradient_against_finite_difference():
    h = 1e-6
    grad = tangential_gradient(TAUS, ZETA)
    for j in range(3):
        e = np.zeros(3)
        e[j] = h
        fd = (restricted_energy(TAUS + e, ZETA) - restricted_energy(TAUS - e, ZETA)) / (2 * h)
        assert grad[j] == pytest.approx(fd, abs=1e-7)


def test_hessian_is_symmetric_and_matches_second_difference():
    H = tangential_hessian(TAUS, ZETA)
    assert np.allclose(H, H.T, atol=1e-7)
    h = 1e-4
    e = np.array([h, 0, 0])
    second = (restricted_energy(TAUS + e, ZETA) - 2 * restricted_energy(TAUS, ZETA)
              + restricted_energy(TAUS - e, ZETA)) / h ** 2
    assert H[0, 0] == pytest.approx(second, rel=1e-5)


def test_line_gradient_against_finite_difference():
    t = np.array([-1.0, 0.3, 2.0])
    xi = np.array([0.5 + 1j, -0.2 + 0.4j])
    h = 1e-6
    grad = line_gradient(t, xi)
    for j in range(3):
        e = np.zeros(3)
        e[j] = h
        fd = (energy_V(t + e, xi) - energy_V(t - e, xi)) / (2 * h)
        assert grad[j] == pytest.approx(fd, abs=1e-7)


def test_energy_v_guards():
    with pytest.raises(InfinityPresent):
        energy_V(LineConfiguration([0.0, math.inf]), [1j])
    with pytest.raises(InfinityPresent):
        energy_V_nu(LineConfiguration([0.0, math.inf]), SignedAtomicMeasure([1j], [1.0]))
    with pytest.raises(ExceptionalConfiguration):
        energy_V(np.array([0.0, 0.0]), [1j])


def test_energy_v_with_infinity_drops_the_point():
    nu = SignedAtomicMeasure([1j, -1j + 2], [0.5, 0.5])
    finite = LineConfiguration([-1.0, 0.5])
    with_inf = LineConfiguration([-1.0, math.inf, 0.5])
    assert energy_V_with_infinity(with_inf, nu) == pytest.approx(energy_V_nu(finite, nu))


def test_radial_derivative_vanishes_only_at_mass_n_minus_one():
    w = np.exp(1j * TAUS)
    mu = SignedAtomicMeasure.from_protons(ZETA)
    assert abs(radial_derivative(w, mu, 1)) < 1e-7
    # a symmetric measure of mass zero: the radial derivative equals 0 - (n - 1)
    pair = np.array([0.3 + 0.2j, -0.5j])
    zero_mass = SignedAtomicMeasure(np.concatenate([pair, 1 / np.conj(pair)]), [0.5, -0.5, 0.5, -0.5])
    with pytest.raises(MeasureError):
        radial_derivative(w, zero_mass, 0)
    # for n = 1 a mass-zero symmetric measure is admissible
    assert abs(radial_derivative(w[:1], zero_mass, 0)) < 1e-7
    with pytest.raises(SymmetryViolation):
        radial_derivative(w, SignedAtomicMeasure([0.3, 0.1j], [1.0, 1.0]), 0)


def test_imaginary_derivative_vanishes_for_conjugate_pairs():
    t = np.array([-1.0, 0.3, 2.0])
    nu = SignedAtomicMeasure([0.5 + 1j, 0.5 - 1j, -2 + 0.3j, -2 - 0.3j], [0.6, 0.6, 0.4, 0.4])
    for j in range(3):
        assert abs(imaginary_directional_derivative(t, nu, j)) < 1e-7
    with pytest.raises(SymmetryViolation):
        imaginary_directional_derivative(t, SignedAtomicMeasure([1j], [2.0]), 0)


def test_figure2_electrons_are_critical(fig2):
    from beq import solve_level

    protons = ProtonSystem(critical_points(fig2).inside)
    config = solve_level(fig2, 0.0)
    assert np.linalg.norm(tangential_gradient(config, protons)) < 1e-10
