import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pixetendue.core import RadiometricScenario, SensorGeometry
from pixetendue.errors import UsageError, ValidationError
from pixetendue.etendue import EtendueResult, ParaxialWarning, paraxial_etendue, reduced_scene_factor, reduced_sensor_factor
from pixetendue.photon import (
    CoherencePolicy,
    bose_einstein_occupancy,
    effective_modes,
    mode_count,
    oscillator_energy,
    photon_number,
    shot_noise_sigma,
    snr_compact,
    snr_scene,
    snr_sensor,
)

from oracles import GROUND_ENERGY_10UM, OCCUPANCY

H, C = 6.62607015e-34, 2.99792458e8
F_TABLE = paraxial_etendue(2.27e-6, 1e-4)  # full = 2.27e-10 m^2 sr
LWIR = SensorGeometry(17e-6, 1.0)


class TestOscillator:
    def test_ground_state(self):
        lvl = oscillator_energy(0, 10e-6)
        assert lvl.energy == pytest.approx(GROUND_ENERGY_10UM, rel=1e-12)
        assert lvl.energy == pytest.approx(9.93e-21, rel=1e-3)

    @given(st.integers(min_value=0, max_value=10_000), st.floats(min_value=1e-8, max_value=1e-2))
    def test_equal_spacing(self, n, lam):
        e0 = oscillator_energy(0, lam).energy
        assert oscillator_energy(1, lam).energy / e0 == pytest.approx(3.0, rel=1e-12)
        gap = oscillator_energy(n + 1, lam).energy - oscillator_energy(n, lam).energy
        assert gap == pytest.approx(H * C / lam, rel=1e-9)

    def test_invalid(self):
        with pytest.raises(ValidationError):
            oscillator_energy(-1, 10e-6)
        with pytest.raises(ValidationError):
            oscillator_energy(0, 0.0)
        with pytest.raises(ValidationError):
            oscillator_energy(1.5, 10e-6)


class TestModeCount:
    @pytest.mark.parametrize(
        "lam, expected",
        [(1e-6, 227.0), (3e-6, 25.2), (5e-6, 9.08), (10e-6, 2.27), (14e-6, 1.16)],
    )
    def test_table_rows_raw_policy(self, lam, expected):
        b = mode_count(F_TABLE, lam, policy=CoherencePolicy.RAW_LAMBDA)
        assert b.n_osc == pytest.approx(expected, rel=5e-3)
        assert b.lambda_used == lam
        assert b.n_modes_eff is None

    def test_max_rule_fractional(self):
        b = mode_count(F_TABLE, 10e-6, LWIR, CoherencePolicy.MAX_RULE)
        assert b.lambda_used == 17e-6
        assert b.n_osc == pytest.approx(2.27e-10 / (17e-6) ** 2, rel=1e-12)
        assert b.n_osc == pytest.approx(0.785, rel=1e-3)
        assert b.fractional

    def test_max_rule_needs_geometry(self):
        with pytest.raises(ValidationError):
            mode_count(F_TABLE, 10e-6)


class TestOccupancy:
    @pytest.mark.parametrize("key", sorted(OCCUPANCY))
    def test_against_high_precision(self, key):
        x, n_bar = OCCUPANCY[key]
        occ = bose_einstein_occupancy(*key)
        assert occ.x == pytest.approx(x, rel=1e-13)
        assert occ.n_bar == pytest.approx(n_bar, rel=1e-12)
        assert not occ.underflow

    def test_worked_value(self):
        occ = bose_einstein_occupancy(10e-6, 300.0)
        assert occ.x == pytest.approx(4.7956, rel=1e-4)
        assert occ.n_bar == pytest.approx(8.33e-3, rel=1e-3)

    def test_cold_limit_underflows_quietly(self):
        for T in (1.0, 1e-3, 1e-300):
            occ = bose_einstein_occupancy(10e-6, T)
            assert occ.n_bar == 0.0 and occ.underflow

    def test_rayleigh_jeans(self):
        occ = bose_einstein_occupancy(10e-6, 1e6)
        assert abs(occ.n_bar - (1 / occ.x - 0.5)) <= occ.x / 12 + 1e-12

    def test_invalid(self):
        with pytest.raises(ValidationError) as err:
            bose_einstein_occupancy(10e-6, 0.0)
        assert err.value.field == "temperature"
        with pytest.raises(ValidationError):
            bose_einstein_occupancy(-1e-6, 300.0)

    def test_finite_up_to_x_700(self):
        T = (H * C / 1.380649e-23) / 10e-6 / np.linspace(1e-3, 700.0, 2000)
        n = [bose_einstein_occupancy(10e-6, t).n_bar for t in T]
        assert all(math.isfinite(v) and v > 0 for v in n)
        assert all(a > b for a, b in zip(n, n[1:]))

    @given(st.floats(min_value=1e-7, max_value=1e-3), st.floats(min_value=1.0, max_value=1e4),
           st.floats(min_value=1.001, max_value=2.0))
    def test_monotone(self, lam, T, k):
        base = bose_einstein_occupancy(lam, T)
        if base.underflow:
            return
        assert bose_einstein_occupancy(lam, T * k).n_bar > base.n_bar
        assert bose_einstein_occupancy(lam * k, T).n_bar > base.n_bar


class TestChain:
    def test_effective_modes(self):
        b = mode_count(F_TABLE, 10e-6, policy=CoherencePolicy.RAW_LAMBDA)
        unit = effective_modes(b, RadiometricScenario(10e-6, 300.0))
        assert unit.n_modes_eff == b.n_osc and unit.dnu_tau == 1.0
        dark = effective_modes(b, RadiometricScenario(10e-6, 300.0, eta_sys=0.0))
        assert dark.n_modes_eff == 0.0
        half = effective_modes(b, RadiometricScenario(10e-6, 300.0, eta_sys=0.5, n_pol=2))
        assert half.n_modes_eff == pytest.approx(2.27, rel=1e-12)
        long = effective_modes(b, RadiometricScenario(10e-6, 300.0, bandwidth=1e3, integration_time=1e-2))
        assert long.dnu_tau == pytest.approx(10.0) and long.n_modes_eff == pytest.approx(22.7, rel=1e-12)

    def test_photon_number_and_sigma(self):
        b = effective_modes(
            mode_count(F_TABLE, 10e-6, policy=CoherencePolicy.RAW_LAMBDA), RadiometricScenario(10e-6, 300.0)
        )
        occ = bose_einstein_occupancy(10e-6, 300.0)
        n_ph = photon_number(b, occ)
        assert n_ph == pytest.approx(2.27 * occ.n_bar, rel=1e-12)
        assert n_ph == pytest.approx(1.89e-2, rel=5e-3)
        assert shot_noise_sigma(n_ph) == pytest.approx(0.1375, rel=1e-3)
        assert shot_noise_sigma(0.0) == 0.0
        assert shot_noise_sigma(1.0) == 1.0
        with pytest.raises(ValidationError):
            shot_noise_sigma(-1.0)

    def test_photon_number_requires_effective_modes(self):
        b = mode_count(F_TABLE, 10e-6, policy=CoherencePolicy.RAW_LAMBDA)
        with pytest.raises(UsageError):
            photon_number(b, bose_einstein_occupancy(10e-6, 300.0))

    def test_compact_worked_value(self):
        occ = bose_einstein_occupancy(10e-6, 300.0)
        s = snr_compact(F_TABLE, 10e-6, occ)
        assert s.snr_fund == pytest.approx(0.1375, rel=1e-3)
        assert s.sigma_n == s.snr_fund and s.n_ph == pytest.approx(s.snr_fund**2, rel=1e-15)
        assert not s.fractional_mode_flag
        four = EtendueResult(4 * F_TABLE.reduced, 4 * F_TABLE.full, F_TABLE.convention, F_TABLE.source)
        assert snr_compact(four, 10e-6, occ).snr_fund == pytest.approx(2 * s.snr_fund, rel=1e-14)
        cold = bose_einstein_occupancy(10e-6, 1.0)
        assert snr_compact(F_TABLE, 10e-6, cold).snr_fund == 0.0

    def test_sensor_and_scene_worked_values(self):
        occ = bose_einstein_occupancy(10e-6, 300.0)
        assert snr_sensor(17e-6, 1.0, 10e-6, occ).snr_fund == pytest.approx(0.1375, rel=1e-3)
        assert snr_scene(17e-3, 1e-3, 10e-6, occ).snr_fund == pytest.approx(0.1375, rel=1e-3)
        assert snr_sensor(34e-6, 1.0, 10e-6, occ).snr_fund == pytest.approx(
            2 * snr_sensor(17e-6, 1.0, 10e-6, occ).snr_fund, rel=1e-15
        )
        assert snr_scene(34e-3, 1e-3, 10e-6, occ).snr_fund == pytest.approx(
            2 * snr_scene(17e-3, 1e-3, 10e-6, occ).snr_fund, rel=1e-15
        )
        assert snr_sensor(17e-6, 1e12, 10e-6, occ).snr_fund < 1e-12
        with pytest.warns(RuntimeWarning):
            assert snr_scene(17e-3, 0.0, 10e-6, occ).snr_fund == 0.0


positive = dict(allow_nan=False, allow_infinity=False)


@given(
    a=st.floats(min_value=1e-6, max_value=1e-4),
    fn=st.floats(min_value=0.7, max_value=16.0),
    f=st.floats(min_value=1e-3, max_value=1.0),
    lam=st.floats(min_value=1e-6, max_value=20e-6),
    T=st.floats(min_value=50.0, max_value=3000.0),
)
def test_three_snr_forms_and_pipeline_agree(a, fn, f, lam, T):
    geom = SensorGeometry(a, fn, focal_length=f)
    occ = bose_einstein_occupancy(lam, T)
    lam_pix = mode_count(reduced_sensor_factor(a, fn), lam, geom).lambda_used
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ParaxialWarning)
        scene_et = reduced_scene_factor(geom.entrance_pupil, geom.pixel_ifov)
    compact = snr_compact(reduced_sensor_factor(a, fn), lam_pix, occ).snr_fund
    compact_scene = snr_compact(scene_et, lam_pix, occ).snr_fund
    sensor = snr_sensor(a, fn, lam_pix, occ).snr_fund
    scene = snr_scene(geom.entrance_pupil, geom.pixel_ifov, lam_pix, occ).snr_fund
    budget = effective_modes(mode_count(reduced_sensor_factor(a, fn), lam, geom), RadiometricScenario(lam, T))
    n_ph = photon_number(budget, occ)
    pipeline = n_ph / shot_noise_sigma(n_ph) if n_ph > 0 else 0.0
    for v in (compact_scene, sensor, scene, pipeline):
        assert v == pytest.approx(compact, rel=1e-12, abs=0.0) or (v == compact == 0.0)


def test_snr_strictly_increasing_in_wavelength():
    lams = np.linspace(2e-6, 20e-6, 60)
    snr = [snr_compact(F_TABLE, 17e-6, bose_einstein_occupancy(l, 300.0)).snr_fund for l in lams]
    assert all(b > a for a, b in zip(snr, snr[1:]))
