"""Pixel etendue (optogeometric factor): closed forms and quadrature.

Two conventions are carried side by side.  The *reduced* value is the
compact closed form ``(a/f#)**2 / 4`` or ``D**2 phi**2 / 4``; the *full*
value is ``pi`` times that and is what an honest area-solid-angle integral
returns.  Everything downstream (mode count, SNR) consumes ``full``.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import kernels
from . import units as u
from .errors import ConvergenceError, ValidationError

PARAXIAL_HALF_ANGLE_LIMIT = 0.1  # rad
MAX_REFINEMENTS = 4


class ParaxialWarning(UserWarning):
    """A closed form is being used outside the small-angle regime."""


class Convention(str, enum.Enum):
    REDUCED_TILDE = "ReducedTilde"
    FULL_PI = "FullPi"


class Source(str, enum.Enum):
    CLOSED_FORM_SCENE = "ClosedFormScene"
    CLOSED_FORM_SENSOR = "ClosedFormSensor"
    PARAXIAL = "Paraxial"
    QUADRATURE = "Quadrature"


@dataclass(frozen=True)
class EtendueResult:
    """Pixel etendue in both conventions, in m^2 sr.

    ``convention`` says which of the two numbers was computed directly; the
    other is obtained through the factor pi.
    """

    reduced: float
    full: float
    convention: Convention
    source: Source
    error_estimate: Optional[float] = None
    rel_error_estimate: Optional[float] = None
    order: Optional[int] = None

    def quantity(self) -> u.Quantity:
        return u.Quantity(self.full, u.ETENDUE)


def _positive(value: float, name: str) -> None:
    if not (value > 0.0) or math.isinf(value):
        raise ValidationError(name, f"must be positive and finite, got {value!r}")


def _closed_form(reduced: float, source: Source) -> EtendueResult:
    return EtendueResult(
        reduced=reduced, full=full_etendue(reduced), convention=Convention.REDUCED_TILDE, source=source
    )


def full_etendue(reduced) -> float:
    """Map the reduced (tilde) value onto the full etendue: ``pi * reduced``."""
    value = u.magnitude(reduced, u.ETENDUE, "reduced")
    if not (value >= 0.0):
        raise ValidationError("reduced", f"must be >= 0, got {value!r}")
    return math.pi * value


def reduced_scene_factor(D, phi_ifov) -> EtendueResult:
    """Scene-side form ``D**2 * phi**2 / 4`` from pupil diameter and pixel iFOV."""
    d = u.magnitude(D, u.LENGTH, "D")
    phi = u.magnitude(phi_ifov, u.ANGLE, "phi_ifov")
    _positive(d, "D")
    _positive(phi, "phi_ifov")
    if phi > PARAXIAL_HALF_ANGLE_LIMIT:
        warnings.warn(f"iFOV {phi:.3g} rad exceeds the paraxial limit", ParaxialWarning, stacklevel=2)
    return _closed_form(d * d * phi * phi / 4.0, Source.CLOSED_FORM_SCENE)


def reduced_sensor_factor(a_pix, f_number) -> EtendueResult:
    """Sensor-side form ``(a / f#)**2 / 4``."""
    a = u.magnitude(a_pix, u.LENGTH, "a_pix")
    fn = u.magnitude(f_number, u.DIMENSIONLESS, "f_number")
    _positive(a, "a_pix")
    _positive(fn, "f_number")
    ratio = a / fn
    return _closed_form(ratio * ratio / 4.0, Source.CLOSED_FORM_SENSOR)


def paraxial_etendue(projected_footprint_area, pixel_solid_angle) -> EtendueResult:
    """Product of projected footprint area and (constant) pixel solid angle.

    The product is already a full etendue; ``reduced`` is back-filled as
    ``full / pi``.
    """
    area = u.magnitude(projected_footprint_area, u.AREA, "projected_footprint_area")
    omega = u.magnitude(pixel_solid_angle, u.SOLID_ANGLE, "pixel_solid_angle")
    _positive(area, "projected_footprint_area")
    _positive(omega, "pixel_solid_angle")
    if math.sqrt(omega / math.pi) > PARAXIAL_HALF_ANGLE_LIMIT:
        warnings.warn(
            f"solid angle {omega:.3g} sr exceeds the paraxial limit", ParaxialWarning, stacklevel=2
        )
    full = area * omega
    return EtendueResult(
        reduced=full / math.pi, full=full, convention=Convention.FULL_PI, source=Source.PARAXIAL
    )


def pixel_flux(radiance, etendue: EtendueResult) -> float:
    """Radiant power on the pixel in W for a uniform scene radiance."""
    L = u.magnitude(radiance, u.RADIANCE, "radiance")
    if not (L >= 0.0):
        raise ValidationError("radiance", f"must be >= 0, got {L!r}")
    return L * etendue.full


def projected_solid_angle_of_disc(disc_radius, distance) -> float:
    """Exact on-axis projected solid angle ``pi sin^2(atan(r/R))`` of a disc."""
    r = u.magnitude(disc_radius, u.LENGTH, "disc_radius")
    R = u.magnitude(distance, u.LENGTH, "distance")
    _positive(r, "disc_radius")
    _positive(R, "distance")
    return math.pi * r * r / (r * r + R * R)


# --- quadrature ------------------------------------------------------------


class PatchShape(str, enum.Enum):
    RECTANGLE = "rectangle"
    DISC = "disc"


@dataclass(frozen=True)
class FootprintPatch:
    """Scene footprint centred on the optical axis at ``distance`` from the pupil.

    ``tilt`` rotates the patch normal away from the line of sight about the
    y axis.  For a disc only ``width`` is used, as the radius.
    """

    shape: PatchShape
    width: float
    distance: float
    height: Optional[float] = None
    tilt: float = 0.0

    @classmethod
    def rectangle(cls, width, height, distance, tilt=0.0) -> "FootprintPatch":
        return cls(PatchShape.RECTANGLE, width, distance, height, tilt)

    @classmethod
    def disc(cls, radius, distance, tilt=0.0) -> "FootprintPatch":
        return cls(PatchShape.DISC, radius, distance, None, tilt)

    def __post_init__(self):
        object.__setattr__(self, "shape", PatchShape(self.shape))
        for name, dim in (("width", u.LENGTH), ("distance", u.LENGTH), ("height", u.LENGTH), ("tilt", u.ANGLE)):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, u.magnitude(value, dim, name))
        _positive(self.width, "width")
        _positive(self.distance, "distance")
        if self.shape is PatchShape.RECTANGLE:
            if self.height is None:
                raise ValidationError("height", "required for a rectangle patch")
            _positive(self.height, "height")
        if not (0.0 <= self.tilt < math.pi / 2):
            raise ValidationError("tilt", f"must lie in [0, pi/2), got {self.tilt!r}")

    @property
    def area(self) -> float:
        if self.shape is PatchShape.RECTANGLE:
            return self.width * self.height
        return math.pi * self.width**2

    @property
    def normal(self) -> tuple[float, float, float]:
        return (math.sin(self.tilt), 0.0, math.cos(self.tilt))


@dataclass(frozen=True)
class PupilDisc:
    diameter: float
    offset_x: float = 0.0
    offset_y: float = 0.0

    def __post_init__(self):
        for name in ("diameter", "offset_x", "offset_y"):
            object.__setattr__(self, name, u.magnitude(getattr(self, name), u.LENGTH, name))
        _positive(self.diameter, "diameter")
        for name in ("offset_x", "offset_y"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(name, "must be finite")


@dataclass(frozen=True)
class GaussLegendreTensor:
    order: int = 8


@dataclass(frozen=True)
class MidpointGrid:
    n_area: int = 8
    n_angle: int = 16


@dataclass(frozen=True)
class QuadratureSpec:
    rule: Union[GaussLegendreTensor, MidpointGrid] = GaussLegendreTensor()
    target_rel_tol: float = 1e-8

    def __post_init__(self):
        if isinstance(self.rule, GaussLegendreTensor):
            if self.rule.order < 2:
                raise ValidationError("order", f"must be >= 2, got {self.rule.order}")
        elif isinstance(self.rule, MidpointGrid):
            if self.rule.n_area < 1 or self.rule.n_angle < 1:
                raise ValidationError("n_area", "midpoint grid sizes must be >= 1")
        else:
            raise TypeError("rule must be GaussLegendreTensor or MidpointGrid")
        if not (self.target_rel_tol > 0.0):
            raise ValidationError("target_rel_tol", f"must be > 0, got {self.target_rel_tol!r}")


def _nodes_1d(kind: str, n: int, lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    if kind == "gl":
        x, w = np.polynomial.legendre.leggauss(n)
    else:
        x = (np.arange(n) + 0.5) * (2.0 / n) - 1.0
        w = np.full(n, 2.0 / n)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def _polar_nodes(kind: str, n_r: int, n_phi: int, radius: float):
    r, wr = _nodes_1d(kind, n_r, 0.0, radius)
    phi, wphi = _nodes_1d(kind, n_phi, 0.0, 2.0 * math.pi)
    rr, pp = np.meshgrid(r, phi, indexing="ij")
    ww = np.outer(wr * r, wphi)
    return (rr * np.cos(pp)).ravel(), (rr * np.sin(pp)).ravel(), ww.ravel()


def _patch_nodes(patch: FootprintPatch, kind: str, n: int):
    if patch.shape is PatchShape.RECTANGLE:
        su, wu = _nodes_1d(kind, n, -patch.width / 2, patch.width / 2)
        sv, wv = _nodes_1d(kind, n, -patch.height / 2, patch.height / 2)
        uu, vv = np.meshgrid(su, sv, indexing="ij")
        lu, lv, w = uu.ravel(), vv.ravel(), np.outer(wu, wv).ravel()
    else:
        lu, lv, w = _polar_nodes(kind, n, n, patch.width)
    t = patch.tilt
    # local axes: e_u = (cos t, 0, -sin t), e_v = (0, 1, 0)
    return lu * math.cos(t), lv.copy(), -lu * math.sin(t), w


def _check_geometry(patch: FootprintPatch, pupil: PupilDisc) -> None:
    nx, _, nz = patch.normal
    r = pupil.diameter / 2
    # lowest point of the pupil disc measured along the patch normal
    clearance = nz * patch.distance + nx * pupil.offset_x - abs(nx) * r
    if clearance <= 0.0:
        raise ValidationError("tilt", "pupil intersects or lies behind the patch plane")
    reach = patch.width if patch.shape is PatchShape.DISC else patch.width / 2
    if reach * math.sin(patch.tilt) >= patch.distance:
        raise ValidationError("distance", "tilted patch reaches the pupil plane")


def _evaluate(patch: FootprintPatch, pupil: PupilDisc, kind: str, n_area: int, n_angle: int) -> float:
    px, py, pz, pw = _patch_nodes(patch, kind, n_area)
    qx, qy, qw = _polar_nodes(kind, n_angle, n_angle, pupil.diameter / 2)
    qx = qx + pupil.offset_x
    qy = qy + pupil.offset_y
    nx, ny, nz = patch.normal
    return kernels.etendue_sum(
        np.ascontiguousarray(px), np.ascontiguousarray(py), np.ascontiguousarray(pz),
        np.ascontiguousarray(pw), nx, ny, nz,
        np.ascontiguousarray(qx), np.ascontiguousarray(qy), float(patch.distance),
        np.ascontiguousarray(qw),
    )


def quadrature_etendue(
    patch: FootprintPatch, pupil: PupilDisc, spec: QuadratureSpec = QuadratureSpec()
) -> EtendueResult:
    """Integrate ``cos(theta) dOmega dA`` over the footprint and pupil cone.

    For every footprint node the projected solid angle of the pupil disc is
    integrated in polar coordinates; the rule is doubled until two
    successive levels agree to ``spec.target_rel_tol``.
    """
    _check_geometry(patch, pupil)
    rule = spec.rule
    if isinstance(rule, GaussLegendreTensor):
        kind, n_area, n_angle = "gl", rule.order, rule.order
    else:
        kind, n_area, n_angle = "mid", rule.n_area, rule.n_angle

    coarse = _evaluate(patch, pupil, kind, n_area, n_angle)
    rel = math.inf
    for _ in range(MAX_REFINEMENTS):
        n_area, n_angle = 2 * n_area, 2 * n_angle
        fine = _evaluate(patch, pupil, kind, n_area, n_angle)
        err = abs(fine - coarse)
        rel = err / abs(fine) if fine != 0.0 else math.inf
        if rel <= spec.target_rel_tol:
            return EtendueResult(
                reduced=fine / math.pi,
                full=fine,
                convention=Convention.FULL_PI,
                source=Source.QUADRATURE,
                error_estimate=err,
                rel_error_estimate=rel,
                order=n_area,
            )
        coarse = fine
    raise ConvergenceError("quadrature did not converge", coarse, rel)


def quadrature_error_estimate(
    patch: FootprintPatch, pupil: PupilDisc, order: int
) -> float:
    """Relative difference between Gauss-Legendre orders ``order`` and ``2*order``."""
    _check_geometry(patch, pupil)
    a = _evaluate(patch, pupil, "gl", order, order)
    b = _evaluate(patch, pupil, "gl", 2 * order, 2 * order)
    return abs(b - a) / abs(b)
