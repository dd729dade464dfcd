"""Physical constants, sensor/scenario records and the pixel coherence scale."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, fields
from typing import Optional

from . import units as u
from .errors import ValidationError

# Airy-disc coefficient, fixed as a literal
DIFFRACTION_COEFF = 1.22


@dataclass(frozen=True)
class PhysicalConstants:
    """Exact SI defining constants (2019 redefinition)."""

    h: float = 6.62607015e-34
    c: float = 2.99792458e8
    k_B: float = 1.380649e-23

    @property
    def hbar(self) -> float:
        return self.h / (2.0 * math.pi)

    def as_dict(self) -> dict[str, float]:
        return {"h": self.h, "hbar": self.hbar, "c": self.c, "k_B": self.k_B}


CONSTANTS = PhysicalConstants()


def _positive(value: float, name: str) -> None:
    if not (value > 0.0) or math.isinf(value):
        raise ValidationError(name, f"must be positive and finite, got {value!r}")


def _set(obj, name, value):
    object.__setattr__(obj, name, value)


@dataclass(frozen=True)
class SensorGeometry:
    """Sensor-side description of the optical train.

    Redundant fields (focal length, pupil diameter, iFOV) are checked for
    consistency with ``pixel_pitch`` and ``f_number`` rather than being
    recomputed.
    """

    pixel_pitch: float
    f_number: float
    focal_length: Optional[float] = None
    pupil_diameter: Optional[float] = None
    ifov: Optional[float] = None

    def __post_init__(self):
        _set(self, "pixel_pitch", u.magnitude(self.pixel_pitch, u.LENGTH, "pixel_pitch"))
        _set(self, "f_number", u.magnitude(self.f_number, u.DIMENSIONLESS, "f_number"))
        _positive(self.pixel_pitch, "pixel_pitch")
        _positive(self.f_number, "f_number")
        for name, dim in (("focal_length", u.LENGTH), ("pupil_diameter", u.LENGTH), ("ifov", u.ANGLE)):
            value = getattr(self, name)
            if value is not None:
                value = u.magnitude(value, dim, name)
                _positive(value, name)
                _set(self, name, value)

        f, d = self.focal_length, self.pupil_diameter
        if f is not None and d is not None:
            if abs(f / d - self.f_number) > 1e-9 * self.f_number:
                raise ValidationError(
                    "f_number", f"{self.f_number!r} inconsistent with focal_length/pupil_diameter = {f / d!r}"
                )
        if self.ifov is not None and f is not None:
            expected = self.pixel_pitch / f
            if abs(self.ifov - expected) > 1e-6 * expected:
                raise ValidationError(
                    "ifov", f"{self.ifov!r} inconsistent with pixel_pitch/focal_length = {expected!r}"
                )

    @property
    def entrance_pupil(self) -> Optional[float]:
        """Pupil diameter, given directly or as focal_length / f_number."""
        if self.pupil_diameter is not None:
            return self.pupil_diameter
        if self.focal_length is not None:
            return self.focal_length / self.f_number
        return None

    @property
    def pixel_ifov(self) -> Optional[float]:
        if self.ifov is not None:
            return self.ifov
        if self.focal_length is not None:
            return self.pixel_pitch / self.focal_length
        return None


@dataclass(frozen=True)
class RadiometricScenario:
    """Source and integration parameters for the photon-number chain."""

    lambda_meas: float
    temperature: float
    bandwidth: float = 1.0
    integration_time: float = 1.0
    eta_sys: float = 1.0
    n_pol: int = 1
    radiance: Optional[float] = None

    def __post_init__(self):
        _set(self, "lambda_meas", u.magnitude(self.lambda_meas, u.LENGTH, "lambda_meas"))
        _set(self, "temperature", u.magnitude(self.temperature, u.TEMPERATURE, "temperature"))
        _set(self, "bandwidth", u.magnitude(self.bandwidth, u.FREQUENCY, "bandwidth"))
        _set(self, "integration_time", u.magnitude(self.integration_time, u.TIME, "integration_time"))
        _set(self, "eta_sys", u.magnitude(self.eta_sys, u.DIMENSIONLESS, "eta_sys"))
        _positive(self.lambda_meas, "lambda_meas")
        _positive(self.temperature, "temperature")
        for name in ("bandwidth", "integration_time"):
            value = getattr(self, name)
            if not (0.0 <= value < math.inf):
                raise ValidationError(name, f"must be >= 0 and finite, got {value!r}")
        if not (0.0 <= self.eta_sys <= 1.0):
            raise ValidationError("eta_sys", f"must lie in [0, 1], got {self.eta_sys!r}")
        if isinstance(self.n_pol, bool) or self.n_pol not in (1, 2):
            raise ValidationError("n_pol", f"must be 1 or 2, got {self.n_pol!r}")
        if self.radiance is not None:
            radiance = u.magnitude(self.radiance, u.RADIANCE, "radiance")
            if not (0.0 <= radiance < math.inf):
                raise ValidationError("radiance", f"must be >= 0 and finite, got {radiance!r}")
            _set(self, "radiance", radiance)

    @property
    def dnu_tau(self) -> float:
        return self.bandwidth * self.integration_time

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


class Regime(str, enum.Enum):
    DIFFRACTION_LIMITED = "DiffractionLimited"
    GEOMETRY_LIMITED = "GeometryLimited"
    BOUNDARY = "Boundary"


@dataclass(frozen=True)
class CoherenceScaleResult:
    lambda_pix: float
    regime: Regime
    diffraction_scale: float


def effective_coherence_scale(lambda_meas, geometry: SensorGeometry) -> CoherenceScaleResult:
    """Phase-space cell size at the detector: the larger of the Airy spot
    ``1.22 * lambda * f#`` and the pixel pitch."""
    lam = u.magnitude(lambda_meas, u.LENGTH, "lambda_meas")
    _positive(lam, "lambda_meas")
    if not isinstance(geometry, SensorGeometry):
        raise TypeError("geometry must be a SensorGeometry")
    blur = DIFFRACTION_COEFF * lam * geometry.f_number
    a = geometry.pixel_pitch
    if blur > a:
        regime = Regime.DIFFRACTION_LIMITED
    elif a > blur:
        regime = Regime.GEOMETRY_LIMITED
    else:
        regime = Regime.BOUNDARY
    return CoherenceScaleResult(lambda_pix=max(blur, a), regime=regime, diffraction_scale=blur)


def classify_regime(lambda_meas, geometry: SensorGeometry) -> Regime:
    return effective_coherence_scale(lambda_meas, geometry).regime
