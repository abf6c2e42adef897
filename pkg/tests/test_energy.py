"""Energy functionals: conservation, spectral identity, two-sided bounds."""

import math

import numpy as np
import pytest

from moving_string import (
    derive_constants,
    energy_at,
    energy_report,
    initial_energies,
    spectral_energy,
)
from moving_string.energy import _energy_integrals

from conftest import get_solution


class TestInitialEnergies:
    @pytest.mark.parametrize("v", [0.0, 0.3, 0.7, 0.9])
    def test_sine_case_is_pi_over_400(self, v):
        # with phi1 = 0 the material term contributes v^2 phi_x^2 and the
        # elastic term (1-v^2) phi_x^2: together just phi_x^2, independent
        # of v, so calE(0) = 1/2 int_0^pi cos^2(x)/100 dx = pi/400
        sol = get_solution(v)
        calE0, E0 = initial_energies(sol.data, sol.consts, sol.cfg.quadrature)
        assert calE0 == pytest.approx(math.pi / 400, abs=1e-12)
        assert E0 == pytest.approx(math.pi / 400, abs=1e-12)

    def test_zero_data(self):
        sol = get_solution(0.3, preset="zero")
        calE0, E0 = initial_energies(sol.data, sol.consts, sol.cfg.quadrature)
        assert calE0 == 0.0 and E0 == 0.0

    @pytest.mark.parametrize("v,sign", [(0.3, 1), (0.7, 1), (0.3, -1)])
    def test_equality_case(self, v, sign):
        # phi1 = sign * phi0_x makes E(0) = calE(0)/(1 + sign*v) exactly
        sol = get_solution(v, preset="traveling_sine",
                           amplitude=0.1, mode=1, sign=sign)
        calE0, E0 = initial_energies(sol.data, sol.consts, sol.cfg.quadrature)
        assert E0 == pytest.approx(calE0 / (1 + sign * v), rel=1e-12)


class TestSpectralIdentity:
    def test_v0_value(self, sine_v0):
        # 2 pi^2 / pi * (1/800) = pi/400
        assert spectral_energy(sine_v0) == pytest.approx(math.pi / 400, rel=1e-12)

    def test_zero_data(self):
        assert spectral_energy(get_solution(0.3, preset="zero")) == 0.0

    @pytest.mark.parametrize("v", [0.3, 0.7])
    def test_matches_quadrature_energy_at_t0(self, v):
        sol = get_solution(v)
        calE, _ = energy_at(sol, 0.0)
        assert calE == pytest.approx(spectral_energy(sol), rel=1e-6)


class TestConservation:
    @pytest.mark.parametrize("v", [0.3, 0.7])
    def test_calE_constant_over_two_periods(self, v):
        sol = get_solution(v)
        times = np.linspace(0.0, 2 * sol.consts.T_v, 64)
        rep = energy_report(sol, times)
        assert rep.residual_conservation < 1e-6
        assert not rep.vacuous

    def test_v0_energies_coincide(self, sine_v0):
        for t in (0.0, 1.3, 4.1):
            calE, E = energy_at(sine_v0, t)
            assert E == pytest.approx(calE, rel=1e-10)
            assert calE == pytest.approx(math.pi / 400, rel=1e-10)

    def test_time_derivative_vanishes(self, sine_v03):
        # centered differences of calE(t), h = T_v/1024
        h = sine_v03.consts.T_v / 1024
        for t in (0.5, 2.0, 5.0):
            fwd, _ = energy_at(sine_v03, t + h)
            bwd, _ = energy_at(sine_v03, t - h)
            assert abs(fwd - bwd) / (2 * h) < 1e-5


class TestBounds:
    @pytest.mark.parametrize("v", [0.3, 0.7])
    def test_no_violations_over_sweep(self, v):
        sol = get_solution(v)
        times = np.linspace(0.0, 2 * sol.consts.T_v, 64)
        rep = energy_report(sol, times)
        assert rep.bound_violations == 0

    def test_sandwich_is_nontrivial_for_moving_string(self, sine_v07):
        # E genuinely oscillates between the two bounds for v > 0
        times = np.linspace(0.0, sine_v07.consts.T_v, 32)
        rep = energy_report(sine_v07, times)
        assert rep.E.max() / rep.E.min() > 1.5

    def test_report_requires_valid_times(self, sine_v03):
        with pytest.raises(ValueError):
            energy_report(sine_v03, [])
        with pytest.raises(ValueError):
            energy_report(sine_v03, [-1.0])

    def test_zero_data_vacuous(self):
        sol = get_solution(0.3, preset="zero")
        rep = energy_report(sol, np.linspace(0, 1, 5))
        assert rep.vacuous
        assert rep.bound_violations == 0
        assert rep.residual_conservation == 0.0


class TestMixedTermIdentity:
    @pytest.mark.parametrize("v", [0.3, 0.7])
    def test_E_plus_v_cross_equals_calE(self, v):
        sol = get_solution(v)
        for t in (0.0, 1.0, 3.7):
            calE, E, cross = _energy_integrals(sol, t)
            assert E + v * cross == pytest.approx(calE, rel=1e-10)


class TestPeriodicityOfE:
    def test_E_returns_after_one_period(self, sine_v03):
        c = sine_v03.consts
        scale = spectral_energy(sine_v03)
        for t in (0.0, 0.7, 2.2):
            _, E0 = energy_at(sine_v03, t)
            _, E1 = energy_at(sine_v03, t + c.T_v)
            assert abs(E1 - E0) < 1e-6 * scale


class TestNearCriticalGrowth:
    def test_layer_regime_energy_excursion(self):
        # at v=0.9 the usual energy goes on a large, bounded excursion:
        # visibly above 2x, capped by gamma_v = 19
        sol = get_solution(0.9)
        g = derive_constants(L=math.pi, v=0.9).gamma_v
        times = np.linspace(0.0, sol.consts.T_v, 64)
        rep = energy_report(sol, times)
        ratio = rep.E.max() / rep.E.min()
        assert 2.0 <= ratio <= g * (1 + 1e-9)
        assert rep.bound_violations == 0
