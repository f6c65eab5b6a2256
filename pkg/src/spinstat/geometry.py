"""Configuration spaces of two indistinguishable particles.

The relative coordinate of an unordered pair is a nonzero vector ``v`` taken
up to ``v ~ -v``.  It is represented in a chart:

* 2D: the half plane ``phi in (-pi/2, pi/2]`` (polar angle of ``v``), the rays
  ``phi = +-pi/2`` being glued together;
* 3D: the half space ``x >= 0`` with ``(0, y, z) ~ (0, -y, -z)``.

Chart points keep the folded Cartesian vector so that rational inputs
survive a split / reconstruct round trip without rounding.

Exchange paths are sampled loops of the 2D relative vector.  Their winding
is counted in half-turns, counterclockwise positive, so a single exchange
of the two particles has winding +1 or -1.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .phasecalc import ExactPhase


class CoincidentPoints(ValueError):
    def __init__(self, i: int, j: int):
        super().__init__(f"points {i} and {j} coincide")
        self.pair = (i, j)


class ZeroVector(ValueError):
    pass


class AmbiguousWinding(ValueError):
    pass


class PathNotClosed(ValueError):
    pass


@dataclass(frozen=True)
class DistinguishableConfig:
    points: tuple[tuple, ...]
    dim: int

    @property
    def n(self) -> int:
        return len(self.points)


def validate_config(points: Sequence[Sequence], s: int) -> DistinguishableConfig:
    """Check that ``points`` is an element of Y(n, s)."""
    if s not in (2, 3):
        raise ValueError(f"spatial dimension must be 2 or 3, got {s}")
    pts = tuple(tuple(p) for p in points)
    if not pts:
        raise ValueError("need at least one point")
    for k, p in enumerate(pts):
        if len(p) != s:
            raise ValueError(f"point {k} has {len(p)} coordinates, expected {s}")
    for i, j in combinations(range(len(pts)), 2):
        if pts[i] == pts[j]:
            raise CoincidentPoints(i, j)
    return DistinguishableConfig(pts, s)


# ---------------------------------------------------------------------------
# charts


@dataclass(frozen=True)
class ConePoint2D:
    """Point of the 2D relative cone, stored as its folded vector (x, y)."""

    vector: tuple

    @property
    def r(self) -> float:
        return math.hypot(*map(float, self.vector))

    @property
    def phi(self) -> float:
        x, y = map(float, self.vector)
        return math.atan2(y, x)

    @classmethod
    def from_polar(cls, r: float, phi: float) -> "ConePoint2D":
        if r <= 0:
            raise ValueError("cone points need r > 0")
        if not -math.pi / 2 <= phi <= math.pi / 2:
            raise ValueError("chart angle must lie in [-pi/2, pi/2]")
        return chart_fold((r * math.cos(phi), r * math.sin(phi)))


@dataclass(frozen=True)
class HalfSpacePoint3D:
    """Point of the 3D chart {x >= 0}, stored as its folded vector (x, y, z)."""

    vector: tuple

    @property
    def rho(self) -> float:
        x, y, _ = map(float, self.vector)
        return math.hypot(x, y)

    @property
    def phi(self) -> float:
        x, y, _ = map(float, self.vector)
        if x == 0 and y == 0:
            return math.pi / 2
        return math.atan2(y, x)

    @property
    def z(self) -> float:
        return float(self.vector[2])

    @classmethod
    def from_cylinder(cls, rho: float, phi: float, z: float) -> "HalfSpacePoint3D":
        if not -math.pi / 2 <= phi <= math.pi / 2:
            raise ValueError("chart angle must lie in [-pi/2, pi/2]")
        return chart_fold((rho * math.cos(phi), rho * math.sin(phi), z))


def _fold(v: tuple) -> tuple:
    # first nonzero coordinate decides the representative
    for c in v:
        if c > 0:
            return v
        if c < 0:
            return tuple(-c for c in v)
    raise ZeroVector("the relative coordinate of two particles cannot vanish")


def chart_fold(vector) -> ConePoint2D | HalfSpacePoint3D:
    """Canonical chart representative of the class {v, -v}.

    In 2D the result has polar angle in (-pi/2, pi/2]; in 3D it has x >= 0,
    and on the gluing plane x = 0 the representative with y > 0 (or, on the
    z axis, z > 0) is chosen.
    """
    if isinstance(vector, (ConePoint2D, HalfSpacePoint3D)):
        vector = vector.vector
    v = tuple(vector)
    if len(v) == 2:
        return ConePoint2D(_fold(v))
    if len(v) == 3:
        return HalfSpacePoint3D(_fold(v))
    raise ValueError(f"expected a 2- or 3-vector, got {len(v)} components")


def _half(x):
    return x / 2 if isinstance(x, (int, Fraction)) and not isinstance(x, bool) else 0.5 * x


def _exact(x):
    return Fraction(x) if isinstance(x, int) and not isinstance(x, bool) else x


def com_split(config: DistinguishableConfig):
    """Split a two-particle configuration into centre of mass and chart point."""
    if config.n != 2:
        raise ValueError("centre-of-mass splitting is defined for n = 2")
    (a, b) = config.points
    a = tuple(_exact(c) for c in a)
    b = tuple(_exact(c) for c in b)
    com = tuple(_half(p + q) for p, q in zip(a, b))
    rel = chart_fold(tuple(p - q for p, q in zip(a, b)))
    return com, rel


def reconstruct_pair(com, relative) -> frozenset:
    """Unordered pair {com + v/2, com - v/2} for a chart point ``v``."""
    v = relative.vector
    half = tuple(_half(c) for c in v)
    return frozenset(
        {
            tuple(c + h for c, h in zip(com, half)),
            tuple(c - h for c, h in zip(com, half)),
        }
    )


def format_chart_point(p) -> str:
    """Tuple text with 17 significant digits per coordinate."""
    if isinstance(p, ConePoint2D):
        vals = (p.r, p.phi)
    else:
        vals = (p.rho, p.phi, p.z)
    return "(" + ", ".join(format(v, ".17g") for v in vals) + ")"


# ---------------------------------------------------------------------------
# exchange paths


@dataclass(frozen=True)
class ExchangePath:
    """Sampled loop of the 2D relative vector, closed in X(2, 2)."""

    samples: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2 or len(arr) < 1:
            raise ValueError("exchange paths are (k, 2) arrays of relative vectors")
        object.__setattr__(self, "samples", arr)

    def reversed(self) -> "ExchangePath":
        return ExchangePath(self.samples[::-1])

    def then(self, other: "ExchangePath") -> "ExchangePath":
        """Concatenate; ``other`` must start at this path's end up to sign."""
        b = other.samples
        if np.allclose(b[0], -self.samples[-1]):
            b = -b
        return ExchangePath(np.vstack([self.samples, b[1:]]))


def circle_path(half_turns: int, samples_per_half_turn: int = 256, radius: float = 1.0,
                start_angle: float = 0.0) -> ExchangePath:
    """Relative vector moving along a circle through ``half_turns`` * pi."""
    k = max(abs(half_turns) * samples_per_half_turn, 1)
    t = start_angle + np.linspace(0.0, math.pi * half_turns, k + 1)
    return ExchangePath(radius * np.column_stack([np.cos(t), np.sin(t)]))


def read_path_csv(path) -> ExchangePath:
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    return ExchangePath(np.array([[float(c) for c in r] for r in rows]))


def exchange_winding(path: ExchangePath) -> int:
    """Number of counterclockwise half-turns of the relative vector."""
    v = path.samples
    radii = np.hypot(v[:, 0], v[:, 1])
    rmin = radii.min()
    if rmin == 0:
        raise AmbiguousWinding("path passes through the excluded coincidence point")
    scale = radii.max()
    if not (np.allclose(v[-1], v[0], atol=1e-9 * scale) or np.allclose(v[-1], -v[0], atol=1e-9 * scale)):
        raise PathNotClosed("endpoints differ by neither the identity nor the exchange")
    if len(v) == 1:
        return 0
    steps = np.hypot(*np.diff(v, axis=0).T)
    if steps.max() >= rmin:
        raise AmbiguousWinding(
            f"step {steps.max():.3g} is not below the minimum distance {rmin:.3g} to the origin"
        )
    a, b = v[:-1], v[1:]
    cross = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
    dot = (a * b).sum(axis=1)
    total = np.arctan2(cross, dot).sum() / math.pi
    w = round(total)
    if abs(total - w) > 1e-6:
        raise AmbiguousWinding(f"accumulated angle {total}*pi is not a whole number of half-turns")
    return int(w)


def holonomy_phase(w: int, kappa: ExactPhase) -> ExactPhase:
    """Phase kappa**w picked up along a loop of ``w`` half-turns."""
    return kappa**w
