"""Exact statistics-phase arithmetic.

Every phase handled here has the form ``exp(i*pi*t)`` with ``t`` rational, so
it is stored as the fraction ``t`` reduced mod 2.  Products are fraction sums
and equality is exact; no floating point is involved anywhere in this module.

Conventions
-----------
``sigma``   single-particle spin, an element of (1/2)Z.
``lam``     the offset in ``j = ell + lam`` (rational in 2D, integer in 3D).
``R``       the involution ``exp(i*pi*ell)`` (2D), a sign.
``s``       the scalar in ``R_z = s * P_z`` (3D), a sign.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import NamedTuple, Union

import cmath
import math

RationalLike = Union[int, Fraction, str]


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions, rational strings ("3/4") and wrapper types."""
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (Rational, str)):
        return Fraction(x)
    if hasattr(x, "value") and isinstance(x.value, Fraction):
        return x.value
    if isinstance(x, float):
        f = Fraction(x)
        if f.denominator > 2**20:
            raise TypeError(f"float {x!r} is not an exact short rational; pass a Fraction")
        return f
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def is_integer(x: Fraction) -> bool:
    return x.denominator == 1


# ---------------------------------------------------------------------------
# value types


@dataclass(frozen=True, init=False)
class ExactPhase:
    """The unit complex number ``exp(i*pi*numerator/denominator)``.

    The exponent is kept in lowest terms and in the half-open range [0, 2).
    """

    numerator: int
    denominator: int

    def __init__(self, numerator: RationalLike = 0, denominator: int = 1):
        t = as_fraction(numerator) / as_fraction(denominator)
        t = t - 2 * math.floor(t / 2)
        object.__setattr__(self, "numerator", t.numerator)
        object.__setattr__(self, "denominator", t.denominator)

    @classmethod
    def from_exponent(cls, t) -> "ExactPhase":
        """Phase ``exp(i*pi*t)``."""
        return cls(as_fraction(t))

    @classmethod
    def from_sign(cls, sign: int) -> "ExactPhase":
        if sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {sign!r}")
        return cls(0 if sign == 1 else 1)

    @property
    def exponent(self) -> Fraction:
        """``t`` in ``exp(i*pi*t)``, in [0, 2)."""
        return Fraction(self.numerator, self.denominator)

    def __mul__(self, other: "ExactPhase") -> "ExactPhase":
        if isinstance(other, ExactPhase):
            return ExactPhase(self.exponent + other.exponent)
        if isinstance(other, int) and other in (1, -1):
            return self * ExactPhase.from_sign(other)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self) -> "ExactPhase":
        return ExactPhase(self.exponent + 1)

    def __pow__(self, n: int) -> "ExactPhase":
        if not isinstance(n, int):
            raise TypeError("phases are raised to integer powers only")
        return ExactPhase(self.exponent * n)

    def conjugate(self) -> "ExactPhase":
        return ExactPhase(-self.exponent)

    def is_one(self) -> bool:
        return self.numerator == 0

    def is_real(self) -> bool:
        return self.denominator == 1

    def to_complex(self) -> complex:
        if self.denominator == 1:
            return complex(1 - 2 * self.numerator)
        return cmath.exp(1j * math.pi * self.numerator / self.denominator)

    def __complex__(self) -> complex:
        return self.to_complex()

    def __str__(self) -> str:
        if self.numerator == 0:
            return "1"
        if self.exponent == 1:
            return "-1"
        return f"exp(i*pi*{self.exponent})"

    def to_json(self) -> str:
        return str(self.exponent)


ONE = ExactPhase(0)
MINUS_ONE = ExactPhase(1)


@dataclass(frozen=True, init=False)
class SpinLabel:
    """Spin ``sigma = twice_spin / 2``."""

    twice_spin: int

    def __init__(self, sigma: RationalLike):
        two = 2 * as_fraction(sigma)
        if not is_integer(two):
            raise ValueError(f"spin must lie in (1/2)Z, got {sigma!r}")
        object.__setattr__(self, "twice_spin", int(two))

    @classmethod
    def from_twice(cls, twice_spin: int) -> "SpinLabel":
        return cls(Fraction(twice_spin, 2))

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice_spin, 2)

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class OffsetLambda:
    """Additive constant in the two-particle total angular momentum."""

    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", as_fraction(self.value))

    @classmethod
    def for_3d(cls, value: RationalLike) -> "OffsetLambda":
        v = as_fraction(value)
        if not is_integer(v):
            raise ValueError(f"in three dimensions lambda must be an integer, got {v}")
        return cls(v)


class InvolutionSign(enum.IntEnum):
    """Value of ``R`` in 2D, or the scalar ``s`` in ``R_z = s P_z`` in 3D."""

    PLUS = 1
    MINUS = -1

    @classmethod
    def coerce(cls, x) -> "InvolutionSign":
        if isinstance(x, str):
            x = {"+": 1, "-": -1, "+1": 1, "-1": -1}.get(x.strip(), x)
        try:
            return cls(int(x))
        except (ValueError, TypeError):
            raise ValueError(f"involution sign must be +1 or -1, got {x!r}") from None


class SectorLabel(enum.IntEnum):
    """P_z eigenvalue selecting the even (+) or odd (-) z-parity sector."""

    PLUS = 1
    MINUS = -1

    @classmethod
    def coerce(cls, x) -> "SectorLabel":
        if isinstance(x, str):
            x = {"+": 1, "-": -1, "+1": 1, "-1": -1}.get(x.strip(), x)
        try:
            return cls(int(x))
        except (ValueError, TypeError):
            raise ValueError(f"sector must be + or -, got {x!r}") from None

    @property
    def symbol(self) -> str:
        return "+" if self is SectorLabel.PLUS else "-"


class Conditions(NamedTuple):
    c1: bool
    c2: bool
    c3: bool


def _spin(sigma) -> Fraction:
    if isinstance(sigma, SpinLabel):
        return sigma.value
    return SpinLabel(sigma).value


def _lambda_3d(lam) -> Fraction:
    v = as_fraction(lam)
    if not is_integer(v):
        raise ValueError(f"in three dimensions lambda must be an integer, got {v}")
    return v


# ---------------------------------------------------------------------------
# operations


def spin_phase(sigma) -> ExactPhase:
    """``exp(2*pi*i*sigma)``, i.e. +1 for bosons and -1 for fermions."""
    return ExactPhase(2 * _spin(sigma))


def statistics_phase_2d(lam, R) -> ExactPhase:
    """kappa = R * exp(i*pi*lam)."""
    return ExactPhase(as_fraction(lam)) * int(InvolutionSign.coerce(R))


def statistics_phase_3d(lam, s) -> ExactPhase:
    """kappa = s * exp(i*pi*lam) for integer lam; always +1 or -1."""
    return ExactPhase(_lambda_3d(lam)) * int(InvolutionSign.coerce(s))


def ssc_holds(sigma, kappa: ExactPhase) -> bool:
    """Pauli's relation exp(2*pi*i*sigma) == kappa, decided exactly."""
    return spin_phase(sigma) == kappa


def _even_shift(lam: Fraction, sigma: Fraction, odd: bool = False) -> bool:
    d = lam - 2 * sigma - (1 if odd else 0)
    return is_integer(d) and d.numerator % 2 == 0


def lemma3_conditions(lam, sigma, R) -> Conditions:
    """(exp(i*pi*j) == exp(2*pi*i*sigma), lam in 2*sigma + 2Z, R == 1)."""
    lam_f, sig = as_fraction(lam), _spin(sigma)
    R = InvolutionSign.coerce(R)
    return Conditions(
        ssc_holds(sig, statistics_phase_2d(lam_f, R)),
        _even_shift(lam_f, sig),
        R is InvolutionSign.PLUS,
    )


def lemma6_conditions(lam, sigma, s, sector) -> Conditions:
    """Condition triple of the 3D three-conditions lemma on one parity sector.

    Sector +: kappa == exp(2*pi*i*sigma), lam in 2*sigma + 2Z, R_z|H+ == P_z|H+ == 1.
    Sector -: kappa == -exp(2*pi*i*sigma), lam in 2*sigma + 1 + 2Z,
    R_z|H- == P_z|H- == -1.

    With ``R_z = s P_z`` the third condition reads ``s == +1`` on both
    sectors: restricted to H-, ``R_z`` acts as ``-s``.
    """
    lam_f, sig = _lambda_3d(lam), _spin(sigma)
    s = InvolutionSign.coerce(s)
    sector = SectorLabel.coerce(sector)
    kappa = statistics_phase_3d(lam_f, s)
    target = spin_phase(sig) * int(sector)
    restricted_R = int(s) * int(sector)
    return Conditions(
        kappa == target,
        _even_shift(lam_f, sig, odd=sector is SectorLabel.MINUS),
        restricted_R == int(sector),
    )


def two_imply_third(conditions) -> bool:
    """A triple obeys "any two imply the third" iff exactly two are never true."""
    return sum(bool(c) for c in conditions) != 2


def braid_phases(n: int, kappa: ExactPhase) -> tuple[ExactPhase, ExactPhase, ExactPhase]:
    """(relative, centre-of-mass, total) statistics phases of n particles.

    A rotation of the n-particle system about its centre of mass carries
    kappa**(n*(n-1)); the centre-of-mass motion carries kappa**n and the
    whole system kappa**(n**2).
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    return kappa ** (n * (n - 1)), kappa**n, kappa ** (n * n)


def theorem1_arithmetic_criterion(lam, sigma, R) -> bool:
    """lam - 2*sigma is an integer nu with (-1)**nu * R == 1."""
    d = as_fraction(lam) - 2 * _spin(sigma)
    if not is_integer(d):
        return False
    parity = 1 if d.numerator % 2 == 0 else -1
    return parity == int(InvolutionSign.coerce(R))
