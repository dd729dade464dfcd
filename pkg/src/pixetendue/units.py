"""Minimal dimensioned quantities for the pixel formula chain.

Only the dimensions the chain actually touches are tracked: length, mass,
time, temperature and plane angle.  The steradian is ``rad**2``, so an
area times a squared angle is an etendue and a length cannot be added to a
solid angle.

Everything is stored in base SI.  Unit objects below exist so that inputs
can be written as ``17 * um`` and still be checked at the API boundary.
"""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass

# exponents of (m, kg, s, K, rad)
Dim = tuple[int, int, int, int, int]

DIMENSIONLESS: Dim = (0, 0, 0, 0, 0)
LENGTH: Dim = (1, 0, 0, 0, 0)
AREA: Dim = (2, 0, 0, 0, 0)
TIME: Dim = (0, 0, 1, 0, 0)
FREQUENCY: Dim = (0, 0, -1, 0, 0)
TEMPERATURE: Dim = (0, 0, 0, 1, 0)
ANGLE: Dim = (0, 0, 0, 0, 1)
SOLID_ANGLE: Dim = (0, 0, 0, 0, 2)
ETENDUE: Dim = (2, 0, 0, 0, 2)
ENERGY: Dim = (2, 1, -2, 0, 0)
POWER: Dim = (2, 1, -3, 0, 0)
RADIANCE: Dim = (0, 1, -3, 0, -2)

_NAMES = {
    DIMENSIONLESS: "1",
    LENGTH: "m",
    AREA: "m^2",
    TIME: "s",
    FREQUENCY: "Hz",
    TEMPERATURE: "K",
    ANGLE: "rad",
    SOLID_ANGLE: "sr",
    ETENDUE: "m^2 sr",
    ENERGY: "J",
    POWER: "W",
    RADIANCE: "W m^-2 sr^-1",
}
_SYMBOLS = ("m", "kg", "s", "K", "rad")


class DimensionError(TypeError):
    """Raised when quantities of incompatible dimension are combined."""


def dim_name(dim: Dim) -> str:
    if dim in _NAMES:
        return _NAMES[dim]
    parts = [f"{s}^{e}" if e != 1 else s for s, e in zip(_SYMBOLS, dim) if e]
    return " ".join(parts)


@dataclass(frozen=True)
class Quantity:
    """A float in base SI together with its dimension exponents."""

    value: float
    dim: Dim = DIMENSIONLESS

    def __post_init__(self):
        if not isinstance(self.value, numbers.Real):
            raise TypeError(f"quantity value must be real, got {type(self.value).__name__}")
        object.__setattr__(self, "value", float(self.value))

    def _coerce(self, other) -> "Quantity":
        if isinstance(other, Quantity):
            return other
        if isinstance(other, numbers.Real):
            return Quantity(float(other))
        return NotImplemented

    def _same_dim(self, other: "Quantity", op: str) -> None:
        if self.dim != other.dim:
            raise DimensionError(
                f"cannot {op} [{dim_name(self.dim)}] and [{dim_name(other.dim)}]"
            )

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        self._same_dim(other, "add")
        return Quantity(self.value + other.value, self.dim)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        self._same_dim(other, "subtract")
        return Quantity(self.value - other.value, self.dim)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other.__sub__(self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        dim = tuple(a + b for a, b in zip(self.dim, other.dim))
        return Quantity(self.value * other.value, dim)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        dim = tuple(a - b for a, b in zip(self.dim, other.dim))
        return Quantity(self.value / other.value, dim)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other.__truediv__(self)

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            raise DimensionError("only integer powers keep dimensions integral")
        return Quantity(self.value**exponent, tuple(e * exponent for e in self.dim))

    def __neg__(self):
        return Quantity(-self.value, self.dim)

    def _compare(self, other, op):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        self._same_dim(other, "compare")
        return op(self.value, other.value)

    def __lt__(self, other):
        return self._compare(other, float.__lt__)

    def __le__(self, other):
        return self._compare(other, float.__le__)

    def __gt__(self, other):
        return self._compare(other, float.__gt__)

    def __ge__(self, other):
        return self._compare(other, float.__ge__)

    def __float__(self) -> float:
        if self.dim != DIMENSIONLESS:
            raise DimensionError(f"[{dim_name(self.dim)}] is not dimensionless")
        return self.value

    def to(self, unit: "Quantity") -> float:
        """Numeric value expressed in ``unit``."""
        self._same_dim(unit, "convert")
        return self.value / unit.value

    def sqrt(self) -> "Quantity":
        if any(e % 2 for e in self.dim):
            raise DimensionError(f"sqrt of [{dim_name(self.dim)}] has fractional exponents")
        return Quantity(math.sqrt(self.value), tuple(e // 2 for e in self.dim))

    def __repr__(self) -> str:
        return f"Quantity({self.value!r}, [{dim_name(self.dim)}])"


def magnitude(x, dim: Dim, name: str) -> float:
    """Strip ``x`` to a float in base SI, checking its dimension.

    Plain numbers are taken to already be in base SI.
    """
    if isinstance(x, Quantity):
        if x.dim != dim:
            raise DimensionError(
                f"{name}: expected [{dim_name(dim)}], got [{dim_name(x.dim)}]"
            )
        return x.value
    if isinstance(x, bool) or not isinstance(x, numbers.Real):
        raise TypeError(f"{name}: expected a number or Quantity, got {type(x).__name__}")
    return float(x)


# unit objects
m = Quantity(1.0, LENGTH)
mm = Quantity(1e-3, LENGTH)
um = Quantity(1e-6, LENGTH)
nm = Quantity(1e-9, LENGTH)
s = Quantity(1.0, TIME)
ms = Quantity(1e-3, TIME)
Hz = Quantity(1.0, FREQUENCY)
K = Quantity(1.0, TEMPERATURE)
rad = Quantity(1.0, ANGLE)
mrad = Quantity(1e-3, ANGLE)
sr = Quantity(1.0, SOLID_ANGLE)
J = Quantity(1.0, ENERGY)
W = Quantity(1.0, POWER)
