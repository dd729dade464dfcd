"""Oscillator energies, pixel mode counts, Bose-Einstein occupancy and the
shot-noise-limited pixel SNR."""
from __future__ import annotations

import enum
import math
import numbers
import warnings
from dataclasses import dataclass, field, replace
from typing import Optional

from . import units as u
from .core import CONSTANTS, RadiometricScenario, SensorGeometry, effective_coherence_scale
from .errors import UsageError, ValidationError
from .etendue import EtendueResult

# expm1 overflows just above this argument
_EXP_LIMIT = 709.78

COMPACT_ASSUMPTIONS = (
    "narrowband, uniform scene",
    "shot-noise limit",
    "negligible technical noise",
    "eta_sys = 1, N_pol = 1, dnu*tau = 1",
)


class CoherencePolicy(str, enum.Enum):
    MAX_RULE = "max-rule"
    RAW_LAMBDA = "raw-lambda"


def _positive(value: float, name: str) -> None:
    if not (value > 0.0) or math.isinf(value):
        raise ValidationError(name, f"must be positive and finite, got {value!r}")


def _nonnegative(value: float, name: str) -> None:
    if not (value >= 0.0) or math.isinf(value):
        raise ValidationError(name, f"must be >= 0 and finite, got {value!r}")


@dataclass(frozen=True)
class OscillatorLevel:
    n: int
    lambda_osc: float
    energy: float


def oscillator_energy(n: int, lambda_osc) -> OscillatorLevel:
    """Energy of level ``n`` of the field oscillator at wavelength ``lambda_osc``."""
    lam = u.magnitude(lambda_osc, u.LENGTH, "lambda_osc")
    _positive(lam, "lambda_osc")
    if isinstance(n, bool) or not isinstance(n, numbers.Integral) or n < 0:
        raise ValidationError("n", f"must be a non-negative integer, got {n!r}")
    omega = 2.0 * math.pi * CONSTANTS.c / lam
    return OscillatorLevel(n=int(n), lambda_osc=lam, energy=CONSTANTS.hbar * omega * (n + 0.5))


@dataclass(frozen=True)
class ModeBudget:
    """Geometric and effective mode count of one pixel.

    ``n_modes_eff`` and ``dnu_tau`` stay ``None`` until
    :func:`effective_modes` fills them in.
    """

    n_osc: float
    coherence_policy: CoherencePolicy
    lambda_used: float
    n_modes_eff: Optional[float] = None
    dnu_tau: Optional[float] = None

    @property
    def fractional(self) -> bool:
        return self.n_osc < 1.0


def mode_count(
    etendue: EtendueResult,
    lambda_meas,
    geometry: Optional[SensorGeometry] = None,
    policy: CoherencePolicy = CoherencePolicy.MAX_RULE,
) -> ModeBudget:
    """Number of phase-space cells admitted by the pixel: ``F_full / lambda**2``.

    With ``MAX_RULE`` the cell is the pixel coherence scale from
    :func:`~pixetendue.core.effective_coherence_scale`; with ``RAW_LAMBDA``
    it is the measurement wavelength itself and ``geometry`` may be omitted.
    """
    lam = u.magnitude(lambda_meas, u.LENGTH, "lambda_meas")
    _positive(lam, "lambda_meas")
    policy = CoherencePolicy(policy)
    if policy is CoherencePolicy.MAX_RULE:
        if geometry is None:
            raise ValidationError("geometry", "required for the max-rule coherence policy")
        lam = effective_coherence_scale(lam, geometry).lambda_pix
    _nonnegative(etendue.full, "etendue")
    return ModeBudget(n_osc=etendue.full / (lam * lam), coherence_policy=policy, lambda_used=lam)


@dataclass(frozen=True)
class OccupancyResult:
    n_bar: float
    x: float
    underflow: bool = False


def bose_einstein_occupancy(lambda_meas, temperature) -> OccupancyResult:
    """Mean thermal photon number per mode, ``1 / expm1(h c / (lambda k T))``.

    Arguments beyond the range of ``expm1`` give ``n_bar = 0`` with
    ``underflow`` set instead of raising.
    """
    lam = u.magnitude(lambda_meas, u.LENGTH, "lambda_meas")
    T = u.magnitude(temperature, u.TEMPERATURE, "temperature")
    _positive(lam, "lambda_meas")
    _positive(T, "temperature")
    # h c / (lam k T), grouped so that huge x saturates to inf rather than overflowing early
    x = (CONSTANTS.h * CONSTANTS.c / CONSTANTS.k_B) / lam / T
    if x > _EXP_LIMIT:
        return OccupancyResult(n_bar=0.0, x=x, underflow=True)
    return OccupancyResult(n_bar=1.0 / math.expm1(x), x=x)


def effective_modes(budget: ModeBudget, scenario: RadiometricScenario) -> ModeBudget:
    dnu_tau = scenario.dnu_tau
    n_eff = scenario.eta_sys * scenario.n_pol * budget.n_osc * dnu_tau
    return replace(budget, n_modes_eff=n_eff, dnu_tau=dnu_tau)


def photon_number(budget: ModeBudget, occ: OccupancyResult) -> float:
    if budget.n_modes_eff is None:
        raise UsageError("mode budget has no effective mode count; call effective_modes first")
    return budget.n_modes_eff * occ.n_bar


def shot_noise_sigma(n_ph: float) -> float:
    _nonnegative(n_ph, "n_ph")
    return math.sqrt(n_ph)


@dataclass(frozen=True)
class PhotonStatisticsSummary:
    """Shot-noise photon budget of one pixel.

    The shot-noise value is an upper bound: any real detector has
    ``SNR_real < snr_fund``.
    """

    n_ph: float
    sigma_n: float
    snr_fund: float
    fractional_mode_flag: bool
    n_osc: Optional[float] = None
    assumptions: tuple[str, ...] = field(default=COMPACT_ASSUMPTIONS)


def _from_snr(snr: float, n_osc: Optional[float]) -> PhotonStatisticsSummary:
    n_ph = snr * snr
    return PhotonStatisticsSummary(
        n_ph=n_ph,
        sigma_n=snr,
        snr_fund=snr,
        fractional_mode_flag=n_osc is not None and n_osc < 1.0,
        n_osc=n_osc,
    )


def summarize(n_ph: float, n_osc: Optional[float] = None, assumptions=()) -> PhotonStatisticsSummary:
    """Summary for an arbitrary photon number from the step-by-step chain."""
    sigma = shot_noise_sigma(n_ph)
    snr = n_ph / sigma if sigma > 0.0 else 0.0
    return PhotonStatisticsSummary(
        n_ph=n_ph,
        sigma_n=sigma,
        snr_fund=snr,
        fractional_mode_flag=n_osc is not None and n_osc < 1.0,
        n_osc=n_osc,
        assumptions=tuple(assumptions),
    )


def snr_compact(etendue: EtendueResult, lambda_pix, occ: OccupancyResult) -> PhotonStatisticsSummary:
    """``sqrt(F_full / lambda_pix**2 * n_bar)`` with all system factors at 1."""
    lam = u.magnitude(lambda_pix, u.LENGTH, "lambda_pix")
    _positive(lam, "lambda_pix")
    _nonnegative(etendue.full, "etendue")
    n_osc = etendue.full / (lam * lam)
    n_ph = n_osc * occ.n_bar
    snr = math.sqrt(n_ph)
    return PhotonStatisticsSummary(
        n_ph=n_ph, sigma_n=snr, snr_fund=snr, fractional_mode_flag=n_osc < 1.0, n_osc=n_osc
    )


def snr_scene(D, phi_ifov, lambda_pix, occ: OccupancyResult) -> PhotonStatisticsSummary:
    """Scene-side closed form ``(D phi / 2) sqrt(pi n_bar / lambda_pix**2)``."""
    d = u.magnitude(D, u.LENGTH, "D")
    phi = u.magnitude(phi_ifov, u.ANGLE, "phi_ifov")
    lam = u.magnitude(lambda_pix, u.LENGTH, "lambda_pix")
    _positive(d, "D")
    _nonnegative(phi, "phi_ifov")
    _positive(lam, "lambda_pix")
    if phi == 0.0:
        warnings.warn("zero iFOV gives a degenerate pixel", RuntimeWarning, stacklevel=2)
    snr = (d * phi / 2.0) * math.sqrt(math.pi / (lam * lam) * occ.n_bar)
    n_osc = math.pi * (d * phi) ** 2 / 4.0 / (lam * lam)
    return _from_snr(snr, n_osc)


def snr_sensor(a_pix, f_number, lambda_pix, occ: OccupancyResult) -> PhotonStatisticsSummary:
    """Sensor-side closed form ``(a / (2 f#)) sqrt(pi n_bar / lambda_pix**2)``."""
    a = u.magnitude(a_pix, u.LENGTH, "a_pix")
    fn = u.magnitude(f_number, u.DIMENSIONLESS, "f_number")
    lam = u.magnitude(lambda_pix, u.LENGTH, "lambda_pix")
    _positive(a, "a_pix")
    _positive(fn, "f_number")
    _positive(lam, "lambda_pix")
    snr = (a / (2.0 * fn)) * math.sqrt(math.pi / (lam * lam) * occ.n_bar)
    n_osc = math.pi * (a / fn) ** 2 / 4.0 / (lam * lam)
    return _from_snr(snr, n_osc)
