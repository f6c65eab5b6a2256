import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from spinstat import intertwine as it
from spinstat import oracles
from spinstat.spectral2d import (
    CONE,
    PLANE,
    ExtensionBC,
    SampledWaveFunction,
    SpectrumWindow,
    chart_grid,
    cone_spectrum,
    plane_spectrum,
    random_band_limited,
    total_j_spectrum,
)

N = 128


def plane_mode(m, radial=None):
    def f(*args):
        angle = args[-1]
        out = np.exp(1j * m * angle)
        return out if radial is None else radial(args[0]) * out
    return f


# --- the map U ------------------------------------------------------------


def test_U_on_angle_independent_function():
    psi = SampledWaveFunction(PLANE, np.full(N, 0.7 + 0j))
    out = it.apply_U(it.IntertwinerSpec(0), psi)
    assert out.domain == CONE
    assert np.array_equal(out.values, psi.values)


@pytest.mark.parametrize("nu", [0, 1, -3])
@pytest.mark.parametrize("m", [-2, 0, 5])
def test_U_matches_substitution(nu, m):
    r = np.linspace(0.1, 2.0, 7)[:, None]
    g = lambda r: np.exp(-r**2)
    psi = SampledWaveFunction(PLANE, plane_mode(m, g)(r, chart_grid(PLANE, N)))
    got = it.apply_U(it.IntertwinerSpec(nu), psi).values
    want = oracles.substitute_U(nu, plane_mode(m, g), chart_grid(CONE, N), r)
    assert np.max(np.abs(got - want)) <= 1e-13
    # plane mode m lands on cone eigenvalue 2m - nu
    want_mode = g(r) * np.exp(1j * (2 * m - nu) * chart_grid(CONE, N))
    assert np.max(np.abs(got - want_mode)) <= 1e-12
    assert it.mode_image(m, nu) == 2 * m - nu


@given(st.integers(-30, 30), st.integers(-9, 9))
def test_mode_image_is_a_cone_eigenvalue(m, nu):
    bc = it.IntertwinerSpec(nu).natural_bc
    mu = it.mode_image(m, nu)
    assert (mu - bc.theta_over_pi) % 2 == 0


def test_U_adjoint_inverts_U():
    spec = it.IntertwinerSpec(3)
    psi = random_band_limited(PLANE, 10, np.random.default_rng(0)).sample(N)
    back = it.apply_U_adjoint(spec, it.apply_U(spec, psi))
    assert back.domain == PLANE
    assert np.max(np.abs(back.values - psi.values)) <= 1e-14


def test_U_domain_checks():
    cone = SampledWaveFunction(CONE, np.ones(8))
    with pytest.raises(it.GridMismatch):
        it.apply_U(it.IntertwinerSpec(0), cone)
    with pytest.raises(it.GridMismatch):
        it.apply_U(it.IntertwinerSpec(0, dimension=3), SampledWaveFunction(PLANE, np.ones(8)))


# --- unitarity ------------------------------------------------------------


def test_unitarity_single_mode_and_zero():
    spec = it.IntertwinerSpec(1)
    mode = SampledWaveFunction(PLANE, np.exp(3j * chart_grid(PLANE, N)))
    assert it.unitarity_residual(spec, [mode]) <= 1e-12
    assert it.unitarity_residual(spec, [SampledWaveFunction(PLANE, np.zeros(N))]) == 0


@pytest.mark.parametrize("nu", [-2, 0, 1, 4])
def test_unitarity_against_parseval(nu):
    spec = it.IntertwinerSpec(nu)
    rng = np.random.default_rng(nu + 10)
    for _ in range(10):
        psi = random_band_limited(PLANE, 12, rng)
        image = it.apply_U(spec, psi.sample(N))
        plane_norm = oracles.parseval_norm_squared(psi.coefficients)
        cone_norm = oracles.cone_norm_squared_quadrature(image.values, it.CONE_DENSITY)
        assert abs(cone_norm - plane_norm) / plane_norm <= 1e-12


def test_cone_density_is_needed():
    psi = random_band_limited(PLANE, 4, np.random.default_rng(0)).sample(N)
    image = it.apply_U(it.IntertwinerSpec(0), psi)
    assert image.norm_squared() == pytest.approx(psi.norm_squared() / 2, rel=1e-12)


# --- intertwining ---------------------------------------------------------


def residual(nu, theta, bumps=1):
    tests = it.plane_testset(M=12, N=N, count=3, seed=4, bumps=bumps)
    return it.intertwining_residual(it.IntertwinerSpec(nu), ExtensionBC(theta), tests, it.rotation_angles(16))


def test_intertwining_admissible_examples():
    for nu, theta in [(0, 0), (1, 1), (-2, 0), (3, 1)]:
        res = residual(nu, theta)
        assert res.admissible and res.residual <= 1e-9


def test_intertwining_inadmissible_example():
    res = residual(0, 1)
    assert res.admissibility_violated
    # the bump is the last test function
    assert res.per_function[-1] > 0.1


def test_intertwining_off_grid_angles():
    tests = it.plane_testset(M=12, N=N, count=3, seed=5, bumps=0)
    angles = np.random.default_rng(0).uniform(0, 4 * math.pi, 10)
    res = it.intertwining_residual(it.IntertwinerSpec(1), ExtensionBC(1), tests, angles)
    assert res.residual <= 1e-9


def test_intertwining_rejects_non_involutive():
    with pytest.raises(it.NotInvolutive):
        residual(0, F(1, 2))


# --- spectral equivalence -------------------------------------------------


def window(values):
    return SpectrumWindow(tuple(F(v) for v in values), (0, len(values)))


def test_spectral_equivalence_examples():
    assert it.spectral_equivalence(window([-2, 0, 2]), window([-2, 0, 2]))
    j = total_j_spectrum(ExtensionBC(0), 1, 8)
    assert it.spectral_equivalence(j, it.doubled_plane_spectrum(F(1, 2), 8))
    evens = cone_spectrum(ExtensionBC(0), 8)
    odds = cone_spectrum(ExtensionBC(1), 8)
    assert not it.spectral_equivalence(evens, odds)


def test_spectral_equivalence_ignores_truncation_edges():
    a = plane_spectrum(10).scale(2)
    b = plane_spectrum(6).scale(2).shift(4)
    assert it.spectral_equivalence(a, b)


def test_spectral_equivalence_float_tolerance():
    a = SpectrumWindow((0.0, 2.0, 4.0), (0, 2))
    b = SpectrumWindow((1e-12, 2.0, 4.0 - 1e-12), (0, 2))
    assert it.spectral_equivalence(a, b, tol=1e-9)
    assert not it.spectral_equivalence(a, b, tol=1e-14)


def test_spectral_equivalence_empty_overlap():
    with pytest.raises(it.EmptyOverlap):
        it.spectral_equivalence(window([0, 2]), window([10, 12]))
    with pytest.raises(it.EmptyOverlap):
        it.spectral_equivalence(window([]), window([0]))


@given(st.integers(-16, 16).map(lambda k: F(k, 4)),
       st.integers(-4, 4).map(lambda j: F(j, 2)),
       st.sampled_from([0, 1]))
def test_equivalence_matches_lattice_oracle(lam, sigma, theta):
    got = it.spectral_equivalence(total_j_spectrum(ExtensionBC(theta), lam, 16),
                                  it.doubled_plane_spectrum(sigma, 16))
    assert got == oracles.lattice_equivalent(theta + lam, 2 * sigma)


# --- verdicts -------------------------------------------------------------


@pytest.mark.parametrize("sigma, lam, ssc", [(0, 0, True), (F(1, 2), 1, True), (0, 1, False)])
def test_theorem1_verdict_examples(sigma, lam, ssc):
    rep = it.theorem1_verdict(sigma, lam, ExtensionBC(0))
    assert rep.verdicts["ssc"] is ssc
    assert rep.verdicts["equiv"] is ssc
    assert rep.passed
    if ssc:
        assert rep.residuals["intertwining"] <= 1e-9
        assert rep.details["nu"] == lam - 2 * sigma


def test_theorem1_verdict_json_is_plain():
    import json
    rep = it.theorem1_verdict(F(1, 2), 1, ExtensionBC(0), M=4, grid=32)
    data = json.loads(json.dumps(rep.to_json()))
    assert data["parameters"]["lambda"] == "1"
    assert data["passed"] is True


def test_theorem1_verdict_refuses_non_involutive():
    with pytest.raises(it.NotInvolutive):
        it.theorem1_verdict(0, 0, ExtensionBC(F(1, 2)))


def test_admissibility_rule():
    assert it.IntertwinerSpec(0).admissible(ExtensionBC(0))
    assert it.IntertwinerSpec(1).admissible(ExtensionBC(1))
    assert not it.IntertwinerSpec(0).admissible(ExtensionBC(1))
    assert not it.IntertwinerSpec(2).admissible(ExtensionBC(F(1, 2)))
    with pytest.raises(ValueError):
        it.IntertwinerSpec(F(1, 2))
