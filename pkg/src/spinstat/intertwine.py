"""The doubling unitaries and the two-dimensional equivalence verdict.

``U_nu`` takes a plane function to a cone function,

    (U_nu Psi)(r, phi) = exp(-i nu phi) Psi(r, 2 phi),

and with the cone measure ``2 d^2r`` it is unitary.  It intertwines twice
the plane angular momentum with ``ell(theta) + nu`` whenever
``(-1)**nu * exp(i theta) == 1``; this is checked through the rotation flows
they generate, evaluated pointwise by transport.

Unitary equivalence of the angular operators themselves (pure point, every
eigenvalue of multiplicity one) is decided by comparing eigenvalue sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from . import phasecalc as pc
from .spectral2d import (
    CONE,
    PLANE,
    ExtensionBC,
    NotInvolutive,
    SampledWaveFunction,
    SpectrumWindow,
    chart_grid,
    plane_spectrum,
    random_band_limited,
    rotate_transport,
    total_j_spectrum,
)

SPECTRAL_TOL = 1e-9
FLOW_TOL = 1e-9
UNITARITY_TOL = 1e-12
INADMISSIBLE_FLOOR = 0.1

# cone measure 2 d^2 r relative to the plane's d^2 r
CONE_DENSITY = 2.0


class GridMismatch(ValueError):
    pass


class EmptyOverlap(ValueError):
    pass


@dataclass(frozen=True)
class IntertwinerSpec:
    nu: int
    dimension: int = 2

    def __post_init__(self):
        if self.dimension not in (2, 3):
            raise ValueError("intertwiners exist for dimension 2 or 3")
        if int(self.nu) != self.nu:
            raise ValueError("nu must be an integer")
        object.__setattr__(self, "nu", int(self.nu))

    def admissible(self, bc: ExtensionBC) -> bool:
        """(-1)**nu * exp(i theta) == 1."""
        return (pc.ExactPhase(self.nu) * bc.phase).is_one()

    @property
    def natural_bc(self) -> ExtensionBC:
        return ExtensionBC(Fraction(self.nu % 2))


@dataclass
class VerificationReport:
    """Named verdicts together with the evidence that produced them.

    ``required`` lists the verdicts that must hold for the item to pass.
    """

    kind: str
    parameters: dict
    verdicts: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    spectra: Optional[dict] = None
    details: dict = field(default_factory=dict)
    required: tuple = ()
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(self.verdicts.get(k, False) for k in self.required)

    def to_json(self) -> dict:
        def enc(x):
            if isinstance(x, Fraction):
                return str(x)
            if isinstance(x, (pc.ExactPhase,)):
                return x.to_json()
            if isinstance(x, SpectrumWindow):
                return x.to_json()
            if isinstance(x, (np.floating,)):
                return float(x)
            if isinstance(x, (np.bool_,)):
                return bool(x)
            if isinstance(x, dict):
                return {k: enc(v) for k, v in x.items()}
            if isinstance(x, (list, tuple)):
                return [enc(v) for v in x]
            return x

        return {
            "kind": self.kind,
            "parameters": enc(self.parameters),
            "verdicts": enc(self.verdicts),
            "residuals": enc(self.residuals),
            "spectra": enc(self.spectra),
            "details": enc(self.details),
            "required": list(self.required),
            "passed": self.passed,
            "error": self.error,
        }


# ---------------------------------------------------------------------------
# the unitary


def apply_U(spec: IntertwinerSpec, psi: SampledWaveFunction) -> SampledWaveFunction:
    """Pointwise ``exp(-i nu phi) Psi(2 phi)`` on the index-aligned cone grid.

    Leading axes (radius, and z in the cylinder variant) pass through.
    """
    if psi.domain != PLANE:
        raise GridMismatch("U acts on functions sampled on the plane chart")
    if spec.dimension == 3 and psi.z is None:
        raise GridMismatch("the cylinder variant needs a z grid")
    phi = chart_grid(CONE, psi.N)
    out = psi.values * np.exp(-1j * spec.nu * phi)
    return SampledWaveFunction(CONE, out, spec.natural_bc, psi.radial_weights, psi.z)


def apply_U_adjoint(spec: IntertwinerSpec, phi_fn: SampledWaveFunction) -> SampledWaveFunction:
    if phi_fn.domain != CONE:
        raise GridMismatch("U* acts on functions sampled on the cone chart")
    phi = chart_grid(CONE, phi_fn.N)
    out = phi_fn.values * np.exp(1j * spec.nu * phi)
    return SampledWaveFunction(PLANE, out, None, phi_fn.radial_weights, phi_fn.z)


def mode_image(m: int, nu: int) -> int:
    """Cone eigenvalue carried by the image of plane mode m: 2m - nu."""
    return 2 * m - nu


def unitarity_residual(spec: IntertwinerSpec, testset: Iterable[SampledWaveFunction]) -> float:
    """max |‖U Psi‖²_{2 d²r} - ‖Psi‖²_{d²r}| / ‖Psi‖² over the test set."""
    worst = 0.0
    for psi in testset:
        n0 = psi.norm_squared()
        if n0 == 0:
            continue
        n1 = apply_U(spec, psi).norm_squared(CONE_DENSITY)
        worst = max(worst, abs(n1 - n0) / n0)
    return worst


@dataclass(frozen=True)
class IntertwiningResult:
    residual: float
    admissible: bool
    per_function: tuple

    @property
    def admissibility_violated(self) -> bool:
        return not self.admissible


def intertwining_residual(spec: IntertwinerSpec, bc: ExtensionBC,
                          testset: Sequence[SampledWaveFunction],
                          angles: Iterable[float]) -> IntertwiningResult:
    """sup-norm of exp(-i t 2L) Psi - U* exp(-i t (ell + nu)) U Psi.

    Both flows are evaluated by transport: the plane one as a 2 pi-periodic
    shift by 2t, the cone one as a shift by t with the boundary phase of
    ``bc`` applied at every crossing of the glued edge.
    """
    if spec.dimension != 2:
        raise ValueError("use spectral3d.sector_intertwining_residual for the cylinder variant")
    if not bc.involutive:
        raise NotInvolutive(f"theta={bc.theta_over_pi}pi is not an involutive extension")
    angles = list(angles)
    per = []
    for psi in testset:
        u_psi = apply_U(spec, psi)
        worst = 0.0
        for t in angles:
            lhs = rotate_transport(psi, 2 * t).values
            moved = rotate_transport(u_psi, t, bc)
            rhs = apply_U_adjoint(spec, moved.replace(moved.values * np.exp(-1j * t * spec.nu))).values
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        per.append(worst)
    return IntertwiningResult(max(per, default=0.0), spec.admissible(bc), tuple(per))


# ---------------------------------------------------------------------------
# spectral equivalence


def spectral_equivalence(a: SpectrumWindow, b: SpectrumWindow, tol: float = SPECTRAL_TOL) -> bool:
    """Do two truncated pure-point spectra come from the same operator class?

    Both windows are cut to the interval where they overlap and the
    remaining eigenvalues are compared one by one, exactly if both windows
    are exact, else within ``tol``.  Cutting both to the same interval makes
    the comparison blind to where each truncation happened to stop.
    """
    ea, eb = a.eigenvalues, b.eigenvalues
    if not ea or not eb:
        raise EmptyOverlap("empty spectrum window")
    exact = a.exact and b.exact
    slack = 0 if exact else tol
    lo = max(ea[0], eb[0])
    hi = min(ea[-1], eb[-1])
    if lo > hi + slack:
        raise EmptyOverlap(f"windows [{ea[0]}, {ea[-1]}] and [{eb[0]}, {eb[-1]}] are disjoint")
    ca = [e for e in ea if lo - slack <= e <= hi + slack]
    cb = [e for e in eb if lo - slack <= e <= hi + slack]
    if len(ca) != len(cb):
        return False
    if exact:
        return ca == cb
    return all(abs(float(x) - float(y)) <= tol for x, y in zip(ca, cb))


def doubled_plane_spectrum(sigma, M: int) -> SpectrumWindow:
    """Spectrum of 2 (L + sigma) on the window -M..M."""
    sig = pc.SpinLabel(sigma).value
    return plane_spectrum(M).shift(sig).scale(2, operator=f"2(L+{sig})")


# ---------------------------------------------------------------------------
# test functions


def bump(center: float, halfwidth: float):
    """Smooth bump of compact support, as a function of the plane angle."""

    def f(angle):
        x = (np.asarray(angle) - center) / halfwidth
        out = np.zeros_like(x, dtype=complex)
        inside = np.abs(x) < 1
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - x[inside] ** 2))
        return out

    return f


def plane_testset(M: int, N: int, count: int, seed: int = 0, bumps: int = 1) -> list[SampledWaveFunction]:
    """Random band-limited plane states, plus ``bumps`` compactly supported bumps.

    Bumps are only band-limited approximately; they are meant for grid-step
    rotation angles where transport is exact.
    """
    rng = np.random.default_rng(seed)
    out = [random_band_limited(PLANE, M, rng).sample(N) for _ in range(count)]
    grid = chart_grid(PLANE, N)
    for b in range(bumps):
        center = -1.5 + 3.0 * (b + 0.5) / bumps
        out.append(SampledWaveFunction(PLANE, bump(center, 1.2)(grid)))
    return out


def rotation_angles(count: int = 64, span: float = 4 * math.pi) -> np.ndarray:
    return span * np.arange(count) / count


# ---------------------------------------------------------------------------
# verdict


def theorem1_verdict(sigma, lam, bc: ExtensionBC, M: int = 16, seed: int = 0,
                     grid: int = 128, n_random: int = 2, n_angles: int = 16,
                     spectral_tol: float = SPECTRAL_TOL, flow_tol: float = FLOW_TOL,
                     witness: bool = True) -> VerificationReport:
    """Compare the statistics criterion with the spectral criterion in 2D.

    When the spectra agree, the shift ``nu = lam - 2 sigma`` is an integer and
    the explicit ``U_nu`` is checked as a witness through its intertwining
    residual.
    """
    sig = pc.SpinLabel(sigma).value
    lam_f = pc.as_fraction(lam)
    if not bc.involutive:
        raise NotInvolutive(f"theta={bc.theta_over_pi}pi is excluded from theorem verdicts")
    R = int(bc.phase.to_complex().real)
    kappa = pc.statistics_phase_2d(lam_f, R)
    ssc = pc.ssc_holds(sig, kappa)
    spec_j = total_j_spectrum(bc, lam_f, M)
    spec_2l = doubled_plane_spectrum(sig, M)
    equiv = spectral_equivalence(spec_j, spec_2l, spectral_tol)
    report = VerificationReport(
        kind="theorem1",
        parameters={"sigma": sig, "lambda": lam_f, "theta_over_pi": bc.theta_over_pi, "M": M, "seed": seed},
        verdicts={"ssc": ssc, "equiv": equiv, "agreement": ssc == equiv,
                  "arithmetic": pc.theorem1_arithmetic_criterion(lam_f, sig, R)},
        spectra={"j": spec_j, "2(L+sigma)": spec_2l},
        details={"kappa": kappa, "R": R},
        required=("agreement",),
    )
    if equiv and witness:
        nu = lam_f - 2 * sig
        spec = IntertwinerSpec(int(nu))
        tests = plane_testset(M=min(M, grid // 2 - 2 - abs(spec.nu)), N=grid, count=n_random, seed=seed)
        res = intertwining_residual(spec, bc, tests, rotation_angles(n_angles))
        report.details["nu"] = spec.nu
        report.residuals["intertwining"] = res.residual
        report.verdicts["admissible"] = res.admissible
        report.verdicts["witness"] = res.admissible and res.residual <= flow_tol
        report.required = ("agreement", "witness")
    return report
