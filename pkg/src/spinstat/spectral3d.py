"""The three-dimensional relative space and its z-parity sectors.

Relative wave functions live on the half-space chart in cylinder
coordinates ``(rho, phi, z)``, ``phi in (-pi/2, pi/2)``.  The chart edges are
glued with a z reflection, so a function in the domain of ``ell_z`` obeys

    psi(rho, phi + pi, z) = exp(i theta3) psi(rho, phi, -z),

and ``R_z = exp(i pi ell_z) = exp(i theta3) P_z``; the sign ``s = exp(i theta3)``
is the scalar in ``R_z = s P_z``.  On a sector ``P_z = +-1`` the reflection
becomes a number and the gluing collapses to the 2D boundary condition
with phase ``s * (+-1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

from . import phasecalc as pc
from .intertwine import (
    FLOW_TOL,
    SPECTRAL_TOL,
    IntertwinerSpec,
    VerificationReport,
    apply_U,
    apply_U_adjoint,
    doubled_plane_spectrum,
    rotation_angles,
    spectral_equivalence,
)
from .phasecalc import InvolutionSign, SectorLabel
from .spectral2d import (
    CONE,
    PLANE,
    ExtensionBC,
    SampledWaveFunction,
    random_band_limited,
    rotate_transport,
    shift_along_chart,
    total_j_spectrum,
)

YLM_TOL = 1e-10


class AsymmetricGrid(ValueError):
    pass


class InvalidLabel(ValueError):
    pass


def _check_symmetric(z: np.ndarray) -> None:
    if not np.allclose(z, -z[::-1], rtol=0, atol=1e-12 * max(1.0, float(np.max(np.abs(z))))):
        raise AsymmetricGrid("z grid is not symmetric about 0")


@dataclass(frozen=True)
class CylinderWaveFunction:
    """Samples on a symmetric z grid, z along axis -2 (or the only axis).

    ``parity`` optionally tags the function as lying in one sector; the tag
    is checked against the samples.
    """

    z: np.ndarray
    values: np.ndarray
    parity: Optional[SectorLabel] = None

    def __post_init__(self):
        z = np.asarray(self.z, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        _check_symmetric(z)
        axis = 0 if v.ndim == 1 else v.ndim - 2
        if v.shape[axis] != len(z):
            raise ValueError("values do not match the z grid")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "values", v)
        if self.parity is not None:
            p = SectorLabel.coerce(self.parity)
            object.__setattr__(self, "parity", p)
            scale = max(1.0, float(np.max(np.abs(v))))
            if np.max(np.abs(self.reflected() - int(p) * v)) > 1e-12 * scale:
                raise ValueError(f"samples are not in sector {p.symbol}")

    @property
    def _zaxis(self) -> int:
        return 0 if self.values.ndim == 1 else self.values.ndim - 2

    def reflected(self) -> np.ndarray:
        """Samples of P_z psi."""
        return np.flip(self.values, axis=self._zaxis)


def parity_decompose(psi: CylinderWaveFunction) -> tuple[CylinderWaveFunction, CylinderWaveFunction]:
    """(psi + P_z psi)/2 and (psi - P_z psi)/2."""
    r = psi.reflected()
    even = CylinderWaveFunction(psi.z, (psi.values + r) / 2)
    odd = CylinderWaveFunction(psi.z, (psi.values - r) / 2)
    return even, odd


def project_sector(psi: SampledWaveFunction, sector) -> SampledWaveFunction:
    sector = SectorLabel.coerce(sector)
    if psi.z is None:
        raise ValueError("sector projection needs a z grid")
    _check_symmetric(psi.z)
    part = parity_decompose(CylinderWaveFunction(psi.z, psi.values))[0 if sector is SectorLabel.PLUS else 1]
    return psi.replace(part.values)


def sector_effective_bc(s, sector) -> ExtensionBC:
    """2D boundary condition left by the z-reflecting gluing on one sector.

    theta = theta3 on H+, theta3 + pi on H-, where exp(i theta3) = s.
    """
    s = InvolutionSign.coerce(s)
    sector = SectorLabel.coerce(sector)
    theta3 = Fraction(0 if s is InvolutionSign.PLUS else 1)
    return ExtensionBC(theta3 + (0 if sector is SectorLabel.PLUS else 1))


def sector_R(s, sector) -> int:
    """Scalar by which R_z = s P_z acts on a sector."""
    return int(InvolutionSign.coerce(s)) * int(SectorLabel.coerce(sector))


def rotate_transport_3d(psi: SampledWaveFunction, angle: float, s) -> SampledWaveFunction:
    """exp(-i angle ell_z) by transport through the z-reflecting gluing.

    Grid-step angles are exact index shifts that reflect z at every edge
    crossing; other angles split the function into parity sectors, each of
    which is a 2D problem with its effective boundary condition.
    """
    if psi.domain != CONE or psi.z is None:
        raise ValueError("3D transport acts on cone-chart samples with a z grid")
    s = InvolutionSign.coerce(s)
    turns = 0.0 if s is InvolutionSign.PLUS else 1.0
    h = math.pi / psi.N
    if abs(angle / h - round(angle / h)) < 1e-9:
        out = shift_along_chart(psi.values, angle, CONE, boundary_turns=turns, flip_z=True)
        return psi.replace(out)
    total = np.zeros_like(psi.values)
    for sector in (SectorLabel.PLUS, SectorLabel.MINUS):
        part = project_sector(psi, sector)
        bc = sector_effective_bc(s, sector)
        total += rotate_transport(part, angle, bc).values
    return psi.replace(total)


# ---------------------------------------------------------------------------
# doubling relation restricted to one parity sector


def cylinder_testset(M: int, N: int, nz: int, count: int, seed: int = 0,
                     zmax: float = 3.0) -> list[SampledWaveFunction]:
    """Random plane functions on (z, phi~) grids, band-limited in the angle."""
    rng = np.random.default_rng(seed)
    z = np.linspace(-zmax, zmax, nz)
    out = []
    for _ in range(count):
        rows = [random_band_limited(PLANE, M, rng).sample(N).values for _ in range(nz)]
        envelope = np.exp(-0.5 * z**2)[:, None]
        out.append(SampledWaveFunction(PLANE, envelope * np.array(rows), z=z))
    return out


@dataclass(frozen=True)
class SectorResidual:
    residual: float
    admissible: bool
    per_function: tuple


def sector_intertwining_residual(nu: int, s, sector, testset: Sequence[SampledWaveFunction],
                                 angles: Iterable[float]) -> SectorResidual:
    """sup-norm of exp(-i t 2L_z) Psi - U* exp(-i t (ell_z + nu)) U Psi on one sector.

    The test functions are first projected onto the sector; the cone flow
    is the full z-reflecting transport, not the reduced 2D one.
    """
    spec = IntertwinerSpec(nu, dimension=3)
    sector = SectorLabel.coerce(sector)
    angles = list(angles)
    admissible = (-1) ** (nu % 2) * sector_R(s, sector) == 1
    per = []
    for raw in testset:
        psi = project_sector(raw, sector)
        u_psi = apply_U(spec, psi)
        worst = 0.0
        for t in angles:
            lhs = rotate_transport(psi, 2 * t).values
            moved = rotate_transport_3d(u_psi, t, s)
            rhs = apply_U_adjoint(spec, moved.replace(moved.values * np.exp(-1j * t * nu))).values
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        per.append(worst)
    return SectorResidual(max(per, default=0.0), admissible, tuple(per))


# ---------------------------------------------------------------------------
# verdicts


def sector_spectrum(s, sector, lam, M: int):
    return total_j_spectrum(sector_effective_bc(s, sector), lam, M)


def obstruction_check(sigma, lam, s, M: int = 16, spectral_tol: float = SPECTRAL_TOL) -> VerificationReport:
    """j_z on both sectors together is never equivalent to 2(L_z + sigma).

    Spectrally, the two sector lattices have opposite parity so their union
    meets both parities; as operators, exp(i pi (j_z - lam)) = R_z acts as
    s on H+ and -s on H-, so it is not the scalar 1 that the doubled
    one-particle rotation exp(2 pi i L_z) would require.
    """
    sig = pc.SpinLabel(sigma).value
    lam_f = pc.OffsetLambda.for_3d(lam).value
    s = InvolutionSign.coerce(s)
    plus = sector_spectrum(s, SectorLabel.PLUS, lam_f, M)
    minus = sector_spectrum(s, SectorLabel.MINUS, lam_f, M)
    full = plus.union(minus, operator=f"ell_z+{lam_f} (full)")
    target = doubled_plane_spectrum(sig, M)
    full_equiv = spectral_equivalence(full, target, spectral_tol)
    scalars = (sector_R(s, SectorLabel.PLUS), sector_R(s, SectorLabel.MINUS))
    return VerificationReport(
        kind="obstruction",
        parameters={"sigma": sig, "lambda": lam_f, "s": int(s), "M": M},
        verdicts={
            "full_space_equiv": full_equiv,
            "rz_scalar": scalars[0] == scalars[1],
            "obstructed": (not full_equiv) and scalars[0] != scalars[1],
        },
        spectra={"j_z": full, "2(L_z+sigma)": target},
        details={"rz_on_sectors": list(scalars)},
        required=("obstructed",),
    )


def theorem4_verdict(sigma, lam, s, M: int = 16, seed: int = 0, grid: int = 64,
                     nz: int = 9, n_random: int = 2, n_angles: int = 8,
                     witness: bool = True, spectral_tol: float = SPECTRAL_TOL,
                     flow_tol: float = FLOW_TOL) -> VerificationReport:
    """Sector-by-sector comparison of the statistics and spectral criteria in 3D."""
    sig = pc.SpinLabel(sigma).value
    lam_f = pc.OffsetLambda.for_3d(lam).value
    s = InvolutionSign.coerce(s)
    kappa = pc.statistics_phase_3d(lam_f, s)
    ssc = pc.ssc_holds(sig, kappa)
    target = doubled_plane_spectrum(sig, M)
    equiv = {}
    spectra = {"2(L_z+sigma)": target}
    for sector in (SectorLabel.PLUS, SectorLabel.MINUS):
        spec = sector_spectrum(s, sector, lam_f, M)
        spectra[f"j_z|H{sector.symbol}"] = spec
        equiv[sector] = spectral_equivalence(spec, target, spectral_tol)
    eq_p, eq_m = equiv[SectorLabel.PLUS], equiv[SectorLabel.MINUS]
    lemma6 = all(
        pc.two_imply_third(pc.lemma6_conditions(lam_f, sig, s, sector))
        for sector in (SectorLabel.PLUS, SectorLabel.MINUS)
    )
    report = VerificationReport(
        kind="theorem4",
        parameters={"sigma": sig, "lambda": lam_f, "s": int(s), "M": M, "seed": seed},
        verdicts={
            "ssc": ssc,
            "equiv_plus": eq_p,
            "equiv_minus": eq_m,
            "dichotomy": eq_p != eq_m,
            "agreement": (ssc == eq_p) and ((not ssc) == eq_m),
            "lemma6_consistent": lemma6,
        },
        spectra=spectra,
        details={"kappa": kappa},
        required=("agreement", "dichotomy", "lemma6_consistent"),
    )
    granted = [sec for sec in (SectorLabel.PLUS, SectorLabel.MINUS) if equiv[sec]]
    if witness and len(granted) == 1:
        sector = granted[0]
        nu = int(lam_f - 2 * sig)
        tests = cylinder_testset(M=min(M, grid // 2 - 2 - abs(nu)), N=grid, nz=nz,
                                 count=n_random, seed=seed)
        res = sector_intertwining_residual(nu, s, sector, tests, rotation_angles(n_angles))
        report.details.update(nu=nu, witness_sector=sector.symbol)
        report.residuals["intertwining"] = res.residual
        report.verdicts["witness"] = res.admissible and res.residual <= flow_tol
        report.required = report.required + ("witness",)
    return report


# ---------------------------------------------------------------------------
# bound states of a central potential


BOSE = "bose"
FERMI = "fermi"


@dataclass(frozen=True)
class BoundStateLabel:
    l: int
    m: int
    exchange: str

    def __post_init__(self):
        ex = self.exchange.lower()
        if ex not in (BOSE, FERMI):
            raise InvalidLabel(f"exchange must be bose or fermi, got {self.exchange!r}")
        object.__setattr__(self, "exchange", ex)
        if self.l < 0 or abs(self.m) > self.l:
            raise InvalidLabel(f"need |m| <= l, got l={self.l}, m={self.m}")


class BoundStateClass(NamedTuple):
    allowed: bool
    sector: Optional[SectorLabel]
    lz_eigenvalue: Optional[Fraction]
    granted: bool


def granted_sector(exchange: str) -> SectorLabel:
    """Sector where the doubling relation holds: H+ for bosons, H- for fermions.

    Spinless bosons satisfy the spin-statistics relation, spinless fermions
    violate it.
    """
    return SectorLabel.PLUS if exchange == BOSE else SectorLabel.MINUS


def bound_state_classify(label: BoundStateLabel) -> BoundStateClass:
    """Replay the parity bookkeeping for a Y_lm-type bound state.

    Only even l occurs for bosons and odd l for fermions.  P_z acts as
    (-1)**(l - m).  In the granted sector m is even and U* Psi is an L_z
    eigenvector with eigenvalue m / 2.
    """
    allowed = (label.l % 2 == 0) == (label.exchange == BOSE)
    if not allowed:
        return BoundStateClass(False, None, None, False)
    sector = SectorLabel.PLUS if (label.l - label.m) % 2 == 0 else SectorLabel.MINUS
    granted = sector is granted_sector(label.exchange)
    eig = Fraction(label.m, 2) if granted else None
    return BoundStateClass(True, sector, eig, granted)


def assoc_legendre(l: int, m: int, x: np.ndarray) -> np.ndarray:
    """P_l^m(x) for m >= 0 by upward recurrence in l (Condon-Shortley phase)."""
    x = np.asarray(x, dtype=float)
    somx2 = np.sqrt((1 - x) * (1 + x))
    pmm = np.ones_like(x)
    fact = 1.0
    for _ in range(m):
        pmm = -pmm * fact * somx2
        fact += 2.0
    if l == m:
        return pmm
    pmmp1 = x * (2 * m + 1) * pmm
    if l == m + 1:
        return pmmp1
    for ll in range(m + 2, l + 1):
        pll = ((2 * ll - 1) * x * pmmp1 - (ll + m - 1) * pmm) / (ll - m)
        pmm, pmmp1 = pmmp1, pll
    return pmmp1


def spherical_harmonic(l: int, m: int, polar: np.ndarray, azimuth: np.ndarray) -> np.ndarray:
    am = abs(m)
    norm = math.sqrt((2 * l + 1) / (4 * math.pi) * math.exp(math.lgamma(l - am + 1) - math.lgamma(l + am + 1)))
    y = norm * assoc_legendre(l, am, np.cos(polar)) * np.exp(1j * am * azimuth)
    if m < 0:
        y = (-1) ** am * np.conj(y)
    return y


def polar_grid(n_polar: int = 31, n_azimuth: int = 16):
    """Polar/azimuthal mesh avoiding the poles."""
    polar = (np.arange(n_polar) + 0.5) * math.pi / n_polar
    azimuth = np.arange(n_azimuth) * 2 * math.pi / n_azimuth
    return np.meshgrid(polar, azimuth, indexing="ij")


def ylm_parity_check(l: int, m: int, samplegrid=None) -> float:
    """sup |Y_lm(P_z x) - (-1)**(l-m) Y_lm(x)| over the grid."""
    if abs(m) > l:
        raise InvalidLabel(f"need |m| <= l, got l={l}, m={m}")
    polar, azimuth = samplegrid if samplegrid is not None else polar_grid()
    y = spherical_harmonic(l, m, polar, azimuth)
    y_reflected = spherical_harmonic(l, m, math.pi - polar, azimuth)
    return float(np.max(np.abs(y_reflected - (-1) ** ((l - m) % 2) * y)))
