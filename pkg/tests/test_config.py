import pytest

from pixetendue.config import ConfigError, EtendueSource, parse_config, with_value
from pixetendue.mc import Fock, Thermal
from pixetendue.photon import CoherencePolicy

MINIMAL = b"""\
sensor:
  pixel_pitch: 17e-6
  f_number: 1.0
scenario:
  lambda_meas: 10e-6
  temperature: 300
"""


def test_minimal_config_defaults():
    cfg = parse_config(MINIMAL)
    assert cfg.sensor.pixel_pitch == 17e-6 and cfg.sensor.f_number == 1.0
    s = cfg.scenario
    assert (s.eta_sys, s.n_pol, s.dnu_tau) == (1.0, 1, 1.0)
    assert cfg.coherence_policy is CoherencePolicy.MAX_RULE
    assert cfg.etendue_source is EtendueSource.SENSOR
    assert cfg.mc is None and cfg.sweep is None


def test_str_input_accepted():
    assert parse_config(MINIMAL.decode()).scenario.temperature == 300.0


def _expect_error(text, key_path, line=None):
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    assert err.value.key_path == key_path
    assert key_path in str(err.value)
    if line is not None:
        assert err.value.line == line
    return err.value


def test_negative_f_number_names_key():
    _expect_error(MINIMAL.replace(b"f_number: 1.0", b"f_number: -1"), "sensor.f_number", line=3)


def test_unknown_key():
    _expect_error(MINIMAL + b"  colour: blue\n", "scenario.colour", line=7)
    _expect_error(MINIMAL + b"extra: 1\n", "extra", line=7)


def test_missing_required_key():
    _expect_error(MINIMAL.replace(b"  temperature: 300\n", b""), "scenario.temperature")
    _expect_error(b"scenario:\n  lambda_meas: 1e-5\n  temperature: 300\n", "sensor")


def test_out_of_range_values():
    _expect_error(MINIMAL + b"  eta_sys: 1.5\n", "scenario.eta_sys", line=7)
    _expect_error(MINIMAL + b"  n_pol: 3\n", "scenario.n_pol", line=7)
    _expect_error(MINIMAL.replace(b"temperature: 300", b"temperature: 0"), "scenario.temperature", line=6)
    _expect_error(MINIMAL.replace(b"temperature: 300", b"temperature: warm"), "scenario.temperature")


def test_scene_and_sensor_conflict():
    text = MINIMAL + b"etendue:\n  sensor: {}\n  scene: {pupil_diameter: 0.017, ifov: 1.0e-3}\n"
    err = _expect_error(text, "etendue.scene")
    assert "conflict" in str(err)


def test_scene_source_defaults_from_sensor():
    text = MINIMAL.replace(b"  f_number: 1.0\n", b"  f_number: 1.0\n  focal_length: 0.017\n")
    cfg = parse_config(text + b"etendue:\n  scene:\n")
    assert cfg.etendue_source is EtendueSource.SCENE
    assert cfg.etendue_params == pytest.approx((0.017, 1e-3))
    _expect_error(MINIMAL + b"etendue:\n  scene: {}\n", "etendue.scene.pupil_diameter")


def test_quadrature_block():
    text = MINIMAL + b"""\
etendue:
  quadrature:
    patch: {shape: disc, radius: 1.0e-3, distance: 1.0}
    pupil: {diameter: 0.01}
    rule: midpoint
    n_area: 4
    n_angle: 8
"""
    cfg = parse_config(text)
    patch, pupil, spec = cfg.etendue_params
    assert patch.width == 1e-3 and pupil.diameter == 0.01
    assert spec.rule.n_area == 4
    bad = text.replace(b"radius: 1.0e-3", b"radius: -1.0")
    _expect_error(bad, "etendue.quadrature.patch.radius", line=9)


def test_mc_block():
    cfg = parse_config(MINIMAL + b"mc:\n  distribution: fock\n  n: 2\n  trials: 10\n  seed: 18446744073709551615\n")
    assert cfg.mc.distribution == Fock(2) and cfg.mc.seed == 2**64 - 1
    cfg = parse_config(MINIMAL + b"mc:\n")
    assert cfg.mc.kind == "thermal" and cfg.mc.distribution is None and cfg.mc.trials == 100_000
    _expect_error(MINIMAL + b"mc:\n  distribution: fock\n", "mc.n")
    _expect_error(MINIMAL + b"mc:\n  trials: 0\n", "mc.trials", line=8)


def test_sweep_block():
    cfg = parse_config(MINIMAL + b"sweep:\n  variable: scenario.temperature\n  start: 100\n  stop: 300\n  count: 3\n")
    assert cfg.sweep.values == (100.0, 200.0, 300.0)
    cfg = parse_config(MINIMAL + b"sweep:\n  variable: scenario.lambda_meas\n  start: 1e-6\n  stop: 1e-4\n  count: 3\n  spacing: log\n")
    assert cfg.sweep.values == pytest.approx((1e-6, 1e-5, 1e-4), rel=1e-12)
    cfg = parse_config(MINIMAL + b"sweep:\n  variable: sensor.f_number\n  values: [1, 2]\n")
    assert cfg.sweep.values == (1.0, 2.0)
    _expect_error(MINIMAL + b"sweep:\n  variable: sensor\n  values: [1]\n", "sweep.variable")
    _expect_error(MINIMAL + b"sweep:\n  variable: scenario.n_pol\n  values: [1]\n", "sweep.variable")
    _expect_error(MINIMAL + b"sweep:\n  variable: etendue\n  values: [1]\n", "sweep.variable")


def test_with_value_revalidates():
    cfg = parse_config(MINIMAL)
    assert with_value(cfg, "scenario.temperature", 500.0).scenario.temperature == 500.0
    assert cfg.scenario.temperature == 300.0
    with pytest.raises(ConfigError):
        with_value(cfg, "sensor.f_number", -2.0)


def test_malformed_yaml():
    err = _expect_error(b"sensor: [1, 2\n", "<file>")
    assert err.line is not None
    _expect_error(b"- 1\n- 2\n", "<file>")
    _expect_error(b"\xff\xfe", "<file>")
