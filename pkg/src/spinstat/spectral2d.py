"""Angular momentum on the plane and on the two-particle relative cone.

Plane functions live on the slit-plane angle ``phi~ in (-pi, pi)`` and are
expanded in ``exp(i m phi~) / sqrt(2 pi)`` with eigenvalue ``m`` of ``L``.

Cone functions live on the chart angle ``phi in (-pi/2, pi/2)``.  The
self-adjoint extensions of ``-i d/dphi`` there are labelled by ``theta``,
the boundary condition being ``psi(pi/2) = exp(i theta) psi(-pi/2)``; the
eigenfunctions are ``exp(i mu_k phi) / sqrt(pi)`` with
``mu_k = theta/pi + 2k``.  Equivalently a function in the domain extends
quasi-periodically, ``psi(phi + pi) = exp(i theta) psi(phi)``, which is what
the transport implementation of the rotation flow uses.

Sample grids are midpoint grids.  Index ``j`` of an ``N``-point plane grid
sits at exactly twice the angle of index ``j`` of an ``N``-point cone grid.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from .phasecalc import ExactPhase, as_fraction

PLANE = "plane"
CONE = "cone"


class NotInvolutive(ValueError):
    """The extension's rotation by pi does not square to the identity."""


class NotInvolutiveWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ExtensionBC:
    """Boundary phase ``theta = pi * theta_over_pi``, normalised to [0, 2pi)."""

    theta_over_pi: Fraction = Fraction(0)

    def __post_init__(self):
        t = as_fraction(self.theta_over_pi)
        object.__setattr__(self, "theta_over_pi", t - 2 * math.floor(t / 2))

    @classmethod
    def from_radians(cls, theta: float, max_denominator: int = 1000) -> "ExtensionBC":
        t = Fraction(theta / math.pi).limit_denominator(max_denominator)
        if abs(float(t) * math.pi - theta) > 1e-12 * max(1.0, abs(theta)):
            raise ValueError(f"theta={theta!r} is not a short rational multiple of pi")
        return cls(t)

    @classmethod
    def from_sign(cls, R: int) -> "ExtensionBC":
        return cls(Fraction(0) if int(R) == 1 else Fraction(1))

    @property
    def theta(self) -> float:
        return math.pi * float(self.theta_over_pi)

    @property
    def involutive(self) -> bool:
        return self.theta_over_pi in (0, 1)

    @property
    def phase(self) -> ExactPhase:
        return ExactPhase(self.theta_over_pi)


@dataclass(frozen=True)
class SpectrumWindow:
    """Eigenvalues of an angular operator for mode indices ``window[0]..window[1]``."""

    eigenvalues: tuple
    window: tuple[int, int]
    operator: str = ""

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", tuple(sorted(self.eigenvalues)))

    def __len__(self):
        return len(self.eigenvalues)

    @property
    def exact(self) -> bool:
        return all(isinstance(e, (int, Fraction)) for e in self.eigenvalues)

    def shift(self, c, operator: Optional[str] = None) -> "SpectrumWindow":
        c = _num(c)
        return SpectrumWindow(tuple(e + c for e in self.eigenvalues), self.window,
                              operator or f"({self.operator})+{c}")

    def scale(self, c, operator: Optional[str] = None) -> "SpectrumWindow":
        c = _num(c)
        return SpectrumWindow(tuple(e * c for e in self.eigenvalues), self.window,
                              operator or f"{c}*({self.operator})")

    def union(self, other: "SpectrumWindow", operator: str = "") -> "SpectrumWindow":
        return SpectrumWindow(self.eigenvalues + other.eigenvalues,
                              (min(self.window[0], other.window[0]), max(self.window[1], other.window[1])),
                              operator or f"{self.operator} (+) {other.operator}")

    def as_array(self) -> np.ndarray:
        return np.array([float(e) for e in self.eigenvalues])

    def to_json(self) -> dict:
        return {
            "operator": self.operator,
            "window": list(self.window),
            "eigenvalues": [str(e) if isinstance(e, Fraction) else e for e in self.eigenvalues],
        }


def _num(c):
    if isinstance(c, float):
        return c
    return as_fraction(c)


class Involution(NamedTuple):
    phase: ExactPhase
    involutive: bool


# ---------------------------------------------------------------------------
# spectra


def plane_spectrum(M: int) -> SpectrumWindow:
    if M < 0:
        raise ValueError("truncation order must be nonnegative")
    return SpectrumWindow(tuple(Fraction(m) for m in range(-M, M + 1)), (-M, M), "L")


def cone_eigenvalue(bc: ExtensionBC, k: int) -> Fraction:
    return bc.theta_over_pi + 2 * k


def cone_spectrum(bc: ExtensionBC, M: int) -> SpectrumWindow:
    if M < 0:
        raise ValueError("truncation order must be nonnegative")
    return SpectrumWindow(
        tuple(cone_eigenvalue(bc, k) for k in range(-M, M + 1)),
        (-M, M),
        f"ell(theta={bc.theta_over_pi}pi)",
    )


def involution_R(bc: ExtensionBC) -> Involution:
    """R = exp(i pi ell(theta)) acts as the scalar exp(i theta)."""
    if not bc.involutive:
        warnings.warn(
            f"extension theta={bc.theta_over_pi}pi gives R = {bc.phase} with R**2 != 1",
            NotInvolutiveWarning,
            stacklevel=2,
        )
    return Involution(bc.phase, bc.involutive)


def total_j_spectrum(bc: ExtensionBC, lam, M: int) -> SpectrumWindow:
    lam = as_fraction(lam)
    return cone_spectrum(bc, M).shift(lam, operator=f"ell(theta={bc.theta_over_pi}pi)+{lam}")


def full_rotation_phase(bc: ExtensionBC) -> ExactPhase:
    """exp(2 pi i ell(theta)) = exp(2 i theta) times the identity."""
    return bc.phase**2


# ---------------------------------------------------------------------------
# wave functions


@dataclass(frozen=True)
class AngularWaveFunction:
    """Coefficients over mode indices ``-M..M`` of the domain's eigenbasis."""

    domain: str
    coefficients: np.ndarray
    bc: Optional[ExtensionBC] = None

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=complex)
        if c.ndim != 1 or len(c) % 2 != 1:
            raise ValueError("coefficient vectors have odd length 2M+1")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        if self.domain not in (PLANE, CONE):
            raise ValueError(f"unknown domain {self.domain!r}")
        if self.domain == CONE and self.bc is None:
            object.__setattr__(self, "bc", ExtensionBC())
        object.__setattr__(self, "coefficients", c)

    @property
    def M(self) -> int:
        return (len(self.coefficients) - 1) // 2

    @property
    def modes(self) -> np.ndarray:
        return np.arange(-self.M, self.M + 1)

    @property
    def eigenvalues(self) -> np.ndarray:
        if self.domain == PLANE:
            return self.modes.astype(float)
        return float(self.bc.theta_over_pi) + 2.0 * self.modes

    def norm(self) -> float:
        return float(np.linalg.norm(self.coefficients))

    def evaluate(self, angles) -> np.ndarray:
        angles = np.asarray(angles, dtype=float)
        width = 2 * math.pi if self.domain == PLANE else math.pi
        basis = np.exp(1j * np.multiply.outer(angles, self.eigenvalues)) / math.sqrt(width)
        return basis @ self.coefficients

    def sample(self, N: int) -> "SampledWaveFunction":
        if N < 2 * self.M + 2:
            raise ValueError(f"grid of {N} points aliases order-{self.M} modes")
        grid = chart_grid(self.domain, N)
        return SampledWaveFunction(self.domain, self.evaluate(grid), bc=self.bc)


def chart_width(domain: str) -> float:
    return 2 * math.pi if domain == PLANE else math.pi


def chart_grid(domain: str, N: int) -> np.ndarray:
    w = chart_width(domain)
    return -w / 2 + (np.arange(N) + 0.5) * (w / N)


@dataclass(frozen=True)
class SampledWaveFunction:
    """Samples on a midpoint angular grid; the angle is the last axis.

    Optional leading axes: a radial axis first (``radial_weights`` holds the
    quadrature weights including the Jacobian r), and a z axis directly
    before the angle (``z`` holds the symmetric grid).
    """

    domain: str
    values: np.ndarray
    bc: Optional[ExtensionBC] = None
    radial_weights: Optional[np.ndarray] = None
    z: Optional[np.ndarray] = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim < 1 or v.shape[-1] < 2:
            raise ValueError("need at least two angular samples")
        if self.domain not in (PLANE, CONE):
            raise ValueError(f"unknown domain {self.domain!r}")
        object.__setattr__(self, "values", v)
        if self.z is not None:
            z = np.asarray(self.z, dtype=float)
            if v.ndim < 2 or v.shape[-2] != len(z):
                raise ValueError("z grid does not match the values' z axis")
            object.__setattr__(self, "z", z)
        if self.radial_weights is not None:
            rw = np.asarray(self.radial_weights, dtype=float)
            if v.shape[0] != len(rw):
                raise ValueError("radial weights do not match the values' radial axis")
            object.__setattr__(self, "radial_weights", rw)

    @property
    def N(self) -> int:
        return self.values.shape[-1]

    @property
    def grid(self) -> np.ndarray:
        return chart_grid(self.domain, self.N)

    def replace(self, values, domain: Optional[str] = None, bc=None) -> "SampledWaveFunction":
        return SampledWaveFunction(domain or self.domain, values, bc if bc is not None else self.bc,
                                   self.radial_weights, self.z)

    def norm_squared(self, measure_factor: float = 1.0) -> float:
        """Midpoint quadrature of |psi|^2 with the given constant density factor."""
        dens = np.abs(self.values) ** 2
        total = dens.sum(axis=-1) * (chart_width(self.domain) / self.N)
        if self.z is not None:
            dz = self.z[1] - self.z[0] if len(self.z) > 1 else 1.0
            total = total.sum(axis=-1) * dz
        if self.radial_weights is not None:
            total = np.tensordot(self.radial_weights, total, axes=(0, 0))
        return float(measure_factor * np.sum(total))


def to_coefficients(psi: SampledWaveFunction, M: int) -> AngularWaveFunction:
    """Project 1D samples onto the eigenmodes ``-M..M`` (exact when band-limited)."""
    if psi.values.ndim != 1:
        raise ValueError("coefficient projection handles purely angular samples")
    if psi.N < 2 * M + 2:
        raise ValueError(f"grid of {psi.N} points aliases order-{M} modes")
    tmpl = AngularWaveFunction(psi.domain, np.zeros(2 * M + 1), psi.bc)
    w = chart_width(psi.domain)
    basis = np.exp(-1j * np.multiply.outer(tmpl.eigenvalues, psi.grid)) / math.sqrt(w)
    return AngularWaveFunction(psi.domain, basis @ psi.values * (w / psi.N), tmpl.bc)


def random_band_limited(domain: str, M: int, rng: np.random.Generator,
                        bc: Optional[ExtensionBC] = None) -> AngularWaveFunction:
    """Unit-norm state with i.i.d. complex Gaussian coefficients."""
    c = rng.standard_normal(2 * M + 1) + 1j * rng.standard_normal(2 * M + 1)
    return AngularWaveFunction(domain, c / np.linalg.norm(c), bc)


# ---------------------------------------------------------------------------
# rotation flows


def rotate_spectral(psi: AngularWaveFunction, angle: float) -> AngularWaveFunction:
    """exp(-i angle A) with A the domain's angular momentum, applied mode-wise."""
    phases = np.exp(-1j * angle * psi.eigenvalues)
    return AngularWaveFunction(psi.domain, psi.coefficients * phases, psi.bc)


def _dirichlet(t: np.ndarray, N: int, width: float) -> np.ndarray:
    # band-limited interpolation kernel for |frequency| <= N/2 - 1 (N even)
    K = N // 2 - 1 if N % 2 == 0 else (N - 1) // 2
    x = math.pi * t / width
    s = np.sin(x)
    small = np.abs(s) < 1e-14
    out = np.empty_like(x)
    out[~small] = np.sin((2 * K + 1) * x[~small]) / (N * s[~small])
    # at multiples of pi the kernel tends to (2K+1)/N * (+-1)**((2K)m)
    out[small] = (2 * K + 1) / N
    return out


def _wrap_phase(n: np.ndarray, turns: float) -> np.ndarray:
    # exp(i pi turns n), exact for turns in {0, 1}
    if turns == 0:
        return np.ones(n.shape, dtype=complex)
    if turns == 1:
        return np.where(n % 2 == 0, 1.0, -1.0).astype(complex)
    return np.exp(1j * math.pi * turns * n)


def shift_along_chart(values: np.ndarray, angle: float, domain: str,
                      boundary_turns: float = 0.0, flip_z: bool = False,
                      twist: float = 0.0) -> np.ndarray:
    """Evaluate ``psi(phi - angle)`` on the grid by transporting samples.

    Crossing the chart boundary once (in the direction of increasing angle)
    multiplies by ``exp(i pi boundary_turns)`` and, if ``flip_z``, reflects the z axis
    (axis -2).  Angles that are whole multiples of the grid step are pure
    index shifts; other angles use band-limited interpolation of the
    untwisted function ``exp(-i twist phi) psi(phi)``, for which ``twist``
    must make that function periodic across the chart.
    """
    values = np.asarray(values, dtype=complex)
    N = values.shape[-1]
    width = chart_width(domain)
    h = width / N
    steps = angle / h
    nearest = round(steps)

    if abs(steps - nearest) < 1e-9:
        src = np.arange(N) - nearest
        n = np.floor_divide(src, N)
        idx = src - n * N
        out = values[..., idx] * _wrap_phase(n, boundary_turns)
        if flip_z:
            odd = (n % 2) != 0
            out[..., odd] = out[..., ::-1, :][..., odd]
        return out

    if flip_z:
        raise ValueError("off-grid transport with a z reflection needs a parity decomposition")
    grid = chart_grid(domain, N)
    target = grid - angle
    n = np.floor((target + width / 2) / width).astype(int)
    local = target - n * width
    untwisted = values * np.exp(-1j * twist * grid)
    kern = _dirichlet(np.subtract.outer(local, grid), N, width)
    interp = untwisted @ kern.T
    return interp * np.exp(1j * twist * local) * _wrap_phase(n, boundary_turns)


def rotate_transport(psi: SampledWaveFunction, angle: float,
                     bc: Optional[ExtensionBC] = None) -> SampledWaveFunction:
    """exp(-i angle A) evaluated pointwise, ``psi(phi) -> psi(phi - angle)``.

    On the cone the boundary condition supplies the phase picked up at each
    crossing of the glued chart edge.  On the plane the flow is the ordinary
    2 pi-periodic shift.
    """
    if psi.domain == PLANE:
        out = shift_along_chart(psi.values, angle, PLANE)
        return psi.replace(out)
    bc = bc or psi.bc or ExtensionBC()
    if not bc.involutive:
        raise NotInvolutive(f"theta={bc.theta_over_pi}pi: exp(2 pi i ell) != 1")
    t = float(bc.theta_over_pi)
    out = shift_along_chart(psi.values, angle, CONE, boundary_turns=t, twist=t)
    return psi.replace(out, bc=bc)
