"""Scenario evaluation, sweeps and CSV/JSON/Markdown rendering."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, fields
from typing import Iterable, Mapping, Optional, Sequence

from .config import EtendueSource, ScenarioConfig, with_value
from .core import effective_coherence_scale
from .errors import UsageError
from .etendue import (
    paraxial_etendue,
    pixel_flux,
    quadrature_etendue,
    reduced_scene_factor,
    reduced_sensor_factor,
)
from .mc import Coherent, SamplingSpec, Thermal, shot_limit_gap, simulate_pixel
from .photon import (
    CoherencePolicy,
    bose_einstein_occupancy,
    effective_modes,
    mode_count,
    photon_number,
    summarize,
)

TABLE1_ETENDUE = 2.27e-10  # m^2 sr
TABLE1_WAVELENGTHS = (1e-6, 3e-6, 5e-6, 10e-6, 14e-6)
SIGNIFICANT_DIGITS = 6


@dataclass(frozen=True)
class ReportRow:
    """One evaluated scenario.  Field order is the report column order;
    the ``mc_*`` columns always come last."""

    pixel_pitch: float
    f_number: float
    focal_length: Optional[float]
    pupil_diameter: Optional[float]
    ifov: Optional[float]
    lambda_meas: float
    temperature: float
    bandwidth: float
    integration_time: float
    eta_sys: float
    n_pol: int
    radiance: Optional[float]
    etendue_source: str
    coherence_policy: str
    F_reduced: float
    F_full: float
    lambda_pix: float
    lambda_used: float
    regime: str
    N_osc: float
    fractional_mode: bool
    N_modes_eff: float
    x: float
    n_bar: float
    occupancy_underflow: bool
    N_ph: float
    sigma_N: float
    SNR_fund: float
    pixel_flux: Optional[float]
    quadrature_rel_error: Optional[float]
    mc_distribution: Optional[str] = None
    mc_n_modes: Optional[int] = None
    mc_trials: Optional[int] = None
    mc_seed: Optional[int] = None
    mc_mean: Optional[float] = None
    mc_variance: Optional[float] = None
    mc_snr: Optional[float] = None
    mc_se_mean: Optional[float] = None
    mc_se_snr: Optional[float] = None
    mc_fano: Optional[float] = None
    mc_se_fano: Optional[float] = None
    mc_theory_mean: Optional[float] = None
    mc_theory_variance: Optional[float] = None
    mc_shot_gap: Optional[float] = None

    def as_dict(self) -> dict:
        return asdict(self)

    @property
    def has_mc(self) -> bool:
        return self.mc_distribution is not None


ALL_COLUMNS = tuple(f.name for f in fields(ReportRow))
MC_COLUMNS = tuple(c for c in ALL_COLUMNS if c.startswith("mc_"))
BASE_COLUMNS = tuple(c for c in ALL_COLUMNS if not c.startswith("mc_"))


def _etendue(config: ScenarioConfig):
    src, params = config.etendue_source, config.etendue_params
    if src is EtendueSource.SENSOR:
        return reduced_sensor_factor(config.sensor.pixel_pitch, config.sensor.f_number)
    if src is EtendueSource.SCENE:
        return reduced_scene_factor(*params)
    if src is EtendueSource.PARAXIAL:
        return paraxial_etendue(*params)
    return quadrature_etendue(*params)


def _mc_fields(config: ScenarioConfig, n_bar: float, n_modes_eff: float) -> dict:
    mc = config.mc
    dist = mc.distribution
    if dist is None:
        dist = Thermal(n_bar) if mc.kind == "thermal" else Coherent(n_bar)
    # fractional mode counts have no sampling meaning: round half up, at least one mode
    n_modes = mc.n_modes if mc.n_modes is not None else max(1, int(math.floor(n_modes_eff + 0.5)))
    spec = SamplingSpec(dist, n_modes=n_modes, trials=mc.trials, seed=mc.seed)
    summary = simulate_pixel(spec, workers=mc.workers)
    try:
        gap = shot_limit_gap(summary)
    except ValueError:
        gap = None
    return dict(
        mc_distribution=summary.distribution,
        mc_n_modes=n_modes,
        mc_trials=mc.trials,
        mc_seed=mc.seed,
        mc_mean=summary.empirical_mean,
        mc_variance=summary.empirical_variance,
        mc_snr=summary.empirical_snr,
        mc_se_mean=summary.standard_error_mean,
        mc_se_snr=summary.standard_error_snr,
        mc_fano=summary.fano,
        mc_se_fano=summary.standard_error_fano,
        mc_theory_mean=summary.theory_mean,
        mc_theory_variance=summary.theory_variance,
        mc_shot_gap=gap,
    )


def run_scenario(config: ScenarioConfig, with_mc: Optional[bool] = None) -> ReportRow:
    """Evaluate the full chain etendue -> modes -> occupancy -> photon number -> SNR.

    The Monte Carlo columns are filled when the config has an ``mc`` block
    (or ``with_mc`` forces it).
    """
    sensor, scen = config.sensor, config.scenario
    et = _etendue(config)
    coh = effective_coherence_scale(scen.lambda_meas, sensor)
    budget = effective_modes(mode_count(et, scen.lambda_meas, sensor, config.coherence_policy), scen)
    occ = bose_einstein_occupancy(scen.lambda_meas, scen.temperature)
    n_ph = photon_number(budget, occ)
    stats = summarize(n_ph, budget.n_osc)

    values = dict(
        pixel_pitch=sensor.pixel_pitch,
        f_number=sensor.f_number,
        focal_length=sensor.focal_length,
        pupil_diameter=sensor.pupil_diameter,
        ifov=sensor.ifov,
        lambda_meas=scen.lambda_meas,
        temperature=scen.temperature,
        bandwidth=scen.bandwidth,
        integration_time=scen.integration_time,
        eta_sys=scen.eta_sys,
        n_pol=scen.n_pol,
        radiance=scen.radiance,
        etendue_source=config.etendue_source.value,
        coherence_policy=config.coherence_policy.value,
        F_reduced=et.reduced,
        F_full=et.full,
        lambda_pix=coh.lambda_pix,
        lambda_used=budget.lambda_used,
        regime=coh.regime.value,
        N_osc=budget.n_osc,
        fractional_mode=stats.fractional_mode_flag,
        N_modes_eff=budget.n_modes_eff,
        x=occ.x,
        n_bar=occ.n_bar,
        occupancy_underflow=occ.underflow,
        N_ph=stats.n_ph,
        sigma_N=stats.sigma_n,
        SNR_fund=stats.snr_fund,
        pixel_flux=pixel_flux(scen.radiance, et) if scen.radiance is not None else None,
        quadrature_rel_error=et.rel_error_estimate,
    )
    if with_mc is None:
        with_mc = config.mc is not None
    if with_mc:
        if config.mc is None:
            raise UsageError("Monte Carlo requested but the config has no mc block")
        values.update(_mc_fields(config, occ.n_bar, budget.n_modes_eff))
    return ReportRow(**values)


def run_sweep(config: ScenarioConfig) -> list[ReportRow]:
    """One row per sweep point, in axis order."""
    if config.sweep is None:
        raise UsageError("config has no sweep block")
    axis = config.sweep
    return [run_scenario(with_value(config, axis.variable, v)) for v in axis.values]


def reproduce_table1() -> list[dict]:
    """Mode count per pixel for F = 2.27e-10 m^2 sr at the five tabulated
    wavelengths, dividing by the raw measurement wavelength squared."""
    from .etendue import EtendueResult, Convention, Source

    et = EtendueResult(
        reduced=TABLE1_ETENDUE / math.pi,
        full=TABLE1_ETENDUE,
        convention=Convention.FULL_PI,
        source=Source.PARAXIAL,
    )
    rows = []
    for lam in TABLE1_WAVELENGTHS:
        budget = mode_count(et, lam, policy=CoherencePolicy.RAW_LAMBDA)
        rows.append({"lambda_um": lam * 1e6, "lambda_sq_m2": lam * lam, "N_osc": budget.n_osc})
    return rows


# --- rendering ---------------------------------------------------------------


def _columns(rows: Sequence) -> tuple[str, ...]:
    if isinstance(rows[0], ReportRow):
        return ALL_COLUMNS if any(r.has_mc for r in rows) else BASE_COLUMNS
    return tuple(rows[0].keys())


def _as_mapping(row) -> Mapping:
    return row.as_dict() if isinstance(row, ReportRow) else row


def _text(value, digits: int) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, f".{digits}g")
    return str(value)


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def render(rows: Iterable, fmt: str = "csv", digits: int = SIGNIFICANT_DIGITS) -> bytes:
    """Serialise rows as CSV, JSON or a Markdown pipe table.

    CSV and Markdown use ``digits`` significant figures; JSON keeps full
    double precision.  Non-finite numbers become ``null`` in JSON.
    """
    rows = list(rows)
    if not rows:
        raise UsageError("nothing to render: empty row set")
    cols = _columns(rows)
    maps = [_as_mapping(r) for r in rows]

    if fmt == "json":
        payload = [{c: _json_value(m.get(c)) for c in cols} for m in maps]
        return (json.dumps(payload, indent=2, allow_nan=False) + "\n").encode("utf-8")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        for m in maps:
            writer.writerow([_text(m.get(c), digits) for c in cols])
        return buf.getvalue().encode("utf-8")
    if fmt in ("md", "markdown"):
        lines = ["| " + " | ".join(cols) + " |", "|" + "|".join("---" for _ in cols) + "|"]
        for m in maps:
            cells = [_text(m.get(c), digits).replace("|", "\\|") for c in cols]
            lines.append("| " + " | ".join(cells) + " |")
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise UsageError(f"unknown format {fmt!r}")
