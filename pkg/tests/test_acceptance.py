"""Acceptance criteria 1-10.

Each test prints one line, ``[acceptance] C<n> PASS|FAIL ...``, with the
measured quantity and the wall time, then asserts.  Run with
``pytest tests/test_acceptance.py -v``; the lines show without ``-s``.
"""

import math
import time
from fractions import Fraction as F

import numpy as np
import pytest

from spinstat import cli
from spinstat import intertwine as it
from spinstat import oracles
from spinstat import phasecalc as pc
from spinstat import spectral3d as s3
from spinstat.geometry import circle_path, exchange_winding
from spinstat.phasecalc import ExactPhase, SectorLabel
from spinstat.spectral2d import (
    CONE,
    PLANE,
    ExtensionBC,
    SampledWaveFunction,
    chart_grid,
    cone_spectrum,
    random_band_limited,
    rotate_spectral,
    rotate_transport,
)

LAMBDAS_2D = [F(k, 4) for k in range(-16, 17)]
SIGMAS = [F(j, 2) for j in range(-4, 5)]
LAMBDAS_3D = list(range(-4, 5))
THETAS = [ExtensionBC(0), ExtensionBC(1)]


@pytest.fixture
def verdict(capsys):
    def emit(n, title, ok, detail, seconds, limit):
        ok = ok and seconds < limit
        line = f"[acceptance] C{n:<2} {'PASS' if ok else 'FAIL'}  {title}: {detail}; {seconds:.2f}s (< {limit}s)"
        with capsys.disabled():
            print("\n" + line)
        assert ok, line
    return emit


def test_c01_theorem1_agreement(verdict):
    t0 = time.perf_counter()
    cases = mismatches = witnessed = 0
    for lam in LAMBDAS_2D:
        for sigma in SIGMAS:
            for bc in THETAS:
                rep = it.theorem1_verdict(sigma, lam, bc, M=16)
                cases += 1
                mismatches += not rep.verdicts["agreement"]
                mismatches += rep.verdicts["ssc"] != rep.verdicts["arithmetic"]
                mismatches += not rep.passed
                if rep.verdicts["equiv"]:
                    witnessed += rep.verdicts["witness"]
    dt = time.perf_counter() - t0
    verdict(1, "ssc == spectral equivalence", cases == 594 and mismatches == 0,
            f"{cases} cases, {mismatches} mismatches, {witnessed} explicit witnesses", dt, 5)


def test_c02_intertwining(verdict):
    t0 = time.perf_counter()
    tests = it.plane_testset(M=64, N=512, count=20, seed=2, bumps=0)
    angles = it.rotation_angles(64)
    worst_ok, weakest_bad, pairs = 0.0, math.inf, 0
    for nu in range(-4, 5):
        spec = it.IntertwinerSpec(nu)
        for bc in THETAS:
            res = it.intertwining_residual(spec, bc, tests, angles)
            pairs += 1
            if res.admissible:
                worst_ok = max(worst_ok, res.residual)
            else:
                weakest_bad = min(weakest_bad, max(res.per_function))
    dt = time.perf_counter() - t0
    verdict(2, "2L vs U* ell U + nu", worst_ok <= 1e-9 and weakest_bad > 0.1,
            f"{pairs} (nu, theta) pairs, admissible max {worst_ok:.2e}, inadmissible min {weakest_bad:.3f}",
            dt, 30)


def test_c03_unitarity(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    nr, N, M = 24, 128, 20
    dr = 4.0 / nr
    r = (np.arange(nr) + 0.5) * dr
    w = r * dr
    worst = 0.0
    for k in range(100):
        angular = [random_band_limited(PLANE, M, rng) for _ in range(nr)]
        profile = np.exp(-r**2) * (1 + rng.standard_normal(nr) ** 2)
        values = profile[:, None] * np.array([a.sample(N).values for a in angular])
        psi = SampledWaveFunction(PLANE, values, radial_weights=w)
        spec = it.IntertwinerSpec(int(rng.integers(-4, 5)))
        image = it.apply_U(spec, psi)
        # independent reference: Parseval per radius against 2 d^2r quadrature on the cone
        ref = float(np.sum(w * profile**2 * np.array([oracles.parseval_norm_squared(a.coefficients) for a in angular])))
        cone = float(np.sum(w * np.array([oracles.cone_norm_squared_quadrature(row, it.CONE_DENSITY)
                                          for row in image.values])))
        worst = max(worst, abs(cone - ref) / ref, it.unitarity_residual(spec, [psi]))
    dt = time.perf_counter() - t0
    verdict(3, "U_nu unitary with measure 2 d^2r", worst <= 1e-12,
            f"100 functions, max relative deviation {worst:.2e}", dt, 5)


def test_c04_extension_spectra(verdict):
    t0 = time.perf_counter()
    worst = 0.0
    ok = True
    for theta in (0.0, math.pi / 2, math.pi):
        fd = oracles.fd_angular_spectrum(theta, n_grid=2048, count=20)
        exact = cone_spectrum(ExtensionBC.from_radians(theta), 12).as_array()
        nearest = np.sort(np.abs(exact))[19]
        err = max(float(np.min(np.abs(exact - mu))) for mu in fd)
        worst = max(worst, err)
        ok &= len(fd) == 20 and len(set(np.round(fd, 6))) == 20
        ok &= float(np.max(np.abs(fd))) <= nearest + 1e-6
    dt = time.perf_counter() - t0
    verdict(4, "cone spectrum vs finite differences", ok and worst <= 1e-6,
            f"theta in {{0, pi/2, pi}}, 20 eigenvalues each, max error {worst:.2e}", dt, 10)


def test_c05_flow_crosscheck(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)
    angles = rng.uniform(0, 4 * math.pi, 64)
    worst = 0.0
    for bc in THETAS:
        for _ in range(20):
            psi = random_band_limited(CONE, 24, rng, bc)
            sampled = psi.sample(64)
            for t in angles:
                a = rotate_transport(sampled, t).values
                b = rotate_spectral(psi, t).evaluate(chart_grid(CONE, 64))
                worst = max(worst, float(np.max(np.abs(a - b))))
    dt = time.perf_counter() - t0
    verdict(5, "spectral vs transport rotation", worst <= 1e-9,
            f"2 x 20 states x 64 off-grid angles, max deviation {worst:.2e}", dt, 20)


def test_c06_lemma_tables(verdict):
    t0 = time.perf_counter()
    triples = [pc.lemma3_conditions(lam, sig, R) for lam in LAMBDAS_2D for sig in SIGMAS for R in (1, -1)]
    triples += [pc.lemma6_conditions(lam, sig, s, sec) for lam in LAMBDAS_3D for sig in SIGMAS
                for s in (1, -1) for sec in (1, -1)]
    violations = sum(not pc.two_imply_third(c) for c in triples)
    caught = []
    for i in range(3):
        mutated = [tuple(not v if k == i else v for k, v in enumerate(c)) for c in triples]
        caught.append(any(not pc.two_imply_third(c) for c in mutated))
    report = cli.run_campaign(cli.load_config("lemma-tables", fault="negate-c2"))
    hook = not report["summary"]["passed"]
    dt = time.perf_counter() - t0
    verdict(6, "two conditions imply the third", violations == 0 and all(caught) and hook,
            f"{len(triples)} triples, {violations} violations, mutations caught {caught}, CLI hook caught {hook}",
            dt, 5)


def test_c07_theorem4_dichotomy(verdict):
    t0 = time.perf_counter()
    cases = bad = 0
    for lam in LAMBDAS_3D:
        for sig in SIGMAS:
            for s in (1, -1):
                rep = s3.theorem4_verdict(sig, lam, s)
                obs = s3.obstruction_check(sig, lam, s)
                v = rep.verdicts
                cases += 1
                bad += not (v["dichotomy"] and v["equiv_plus"] == v["ssc"] and rep.passed)
                bad += obs.verdicts["full_space_equiv"]
    dt = time.perf_counter() - t0
    verdict(7, "exactly one sector, H+ iff ssc, full space obstructed", cases == 162 and bad == 0,
            f"{cases} cases, {bad} failures", dt, 5)


def test_c08_bound_states(verdict):
    t0 = time.perf_counter()
    bad = 0
    worst = 0.0
    labels = 0
    for l in range(7):
        for m in range(-l, l + 1):
            worst = max(worst, s3.ylm_parity_check(l, m))
            for ex in (s3.BOSE, s3.FERMI):
                labels += 1
                c = s3.bound_state_classify(s3.BoundStateLabel(l, m, ex))
                bad += c.allowed != ((ex == s3.BOSE) == (l % 2 == 0))
                if not c.allowed:
                    continue
                parity = SectorLabel.PLUS if (l - m) % 2 == 0 else SectorLabel.MINUS
                bad += c.sector is not parity
                bad += c.granted != (parity is s3.granted_sector(ex))
                if c.granted:
                    bad += m % 2 != 0
                    bad += c.lz_eigenvalue != F(m, 2) or F(m, 2).denominator != 1
    dt = time.perf_counter() - t0
    verdict(8, "bound-state parity chain", bad == 0 and worst <= 1e-10,
            f"{labels} labels, {bad} failures, Y_lm parity residual {worst:.2e}", dt, 10)


def test_c09_braid_bookkeeping(verdict):
    t0 = time.perf_counter()
    kappas = {ExactPhase(F(p, q)) for q in range(1, 9) for p in range(2 * q)}
    bad = checked = 0
    for n in range(1, 11):
        for k in kappas:
            rel, cm, total = pc.braid_phases(n, k)
            checked += 1
            bad += total != rel * cm
            if k.is_real():
                bad += rel != pc.ONE
    dt = time.perf_counter() - t0
    verdict(9, "braid phase factorisation", bad == 0,
            f"{checked} (n, kappa) pairs over {len(kappas)} phases, {bad} failures", dt, 1)


def test_c10_winding(verdict):
    t0 = time.perf_counter()
    got = {w: exchange_winding(circle_path(w, samples_per_half_turn=256)) for w in range(-4, 5)}
    dt = time.perf_counter() - t0
    verdict(10, "exchange winding of circle paths", all(got[w] == w for w in got),
            f"w = -4..4 recovered {sum(got[w] == w for w in got)}/9", dt, 1)
