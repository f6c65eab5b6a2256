"""Independent reference computations used to cross-check the main code paths.

Nothing here imports the eigenbasis machinery of :mod:`spinstat.spectral2d`;
each oracle recomputes its answer from the defining equations.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

# 8th-order central stencils (offsets -4..4)
_D1 = np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 0.0, 4 / 5, -1 / 5, 4 / 105, -1 / 280])
_D2 = np.array([-1 / 560, 8 / 315, -1 / 5, 8 / 5, -205 / 72, 8 / 5, -1 / 5, 8 / 315, -1 / 560])


def _twisted_stencil_matrix(stencil: np.ndarray, n: int, theta: float) -> sp.csr_matrix:
    """Circulant stencil on the chart with quasi-periodic coupling.

    Neighbours reached across the right edge pick up exp(i theta), those
    across the left edge exp(-i theta), so that the discrete operator acts
    on grid functions with psi[j + n] = exp(i theta) psi[j].
    """
    half = len(stencil) // 2
    rows, cols, vals = [], [], []
    j = np.arange(n)
    for off, c in zip(range(-half, half + 1), stencil):
        if c == 0:
            continue
        k = j + off
        wraps = np.floor_divide(k, n)
        rows.append(j)
        cols.append(k - wraps * n)
        vals.append(c * np.exp(1j * theta * wraps))
    return sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    )


def fd_angular_spectrum(theta: float, n_grid: int = 2048, count: int = 20) -> np.ndarray:
    """The ``count`` eigenvalues nearest zero of -i d/dphi on (-pi/2, pi/2).

    The boundary condition psi(pi/2) = exp(i theta) psi(-pi/2) enters only
    through the edge coupling of the difference stencils.  The discrete Laplacian has no spurious low-lying modes, so it selects the
    smooth subspace; the eigenvalues reported are those of the first-derivative
    operator projected onto each cluster of (numerically) degenerate
    Laplacian eigenvectors.
    """
    h = math.pi / n_grid
    lap = -_twisted_stencil_matrix(_D2, n_grid, theta) / h**2
    d1 = -1j * _twisted_stencil_matrix(_D1, n_grid, theta) / h
    lap = (lap + lap.getH()) / 2
    n_eigs = min(count + 8, n_grid - 2)
    w, v = eigsh(lap.tocsc(), k=n_eigs, sigma=-0.37, which="LM", tol=1e-13)
    order = np.argsort(w)
    w, v = np.clip(w[order], 0.0, None), v[:, order]

    values = []
    i = 0
    while i < len(w):
        j = i + 1
        while j < len(w) and abs(w[j] - w[i]) <= 1e-6 * max(1.0, w[i]):
            j += 1
        if j == len(w):
            break  # the last cluster may be cut short by the eigsh window
        # Lanczos vectors inside a degenerate cluster need not be orthonormal
        block, _ = np.linalg.qr(v[:, i:j])
        proj = block.conj().T @ (d1 @ block)
        values.extend(np.linalg.eigvalsh((proj + proj.conj().T) / 2))
        i = j
    values = np.array(values)
    values = values[np.argsort(np.abs(values), kind="stable")][:count]
    return np.sort(values)


def analytic_cone_eigenvalues(theta: float, count: int) -> np.ndarray:
    """Roots of exp(i pi mu) = exp(i theta) nearest zero."""
    base = theta / math.pi
    ks = np.arange(-count, count + 1)
    mu = base + 2 * ks
    return np.sort(mu[np.argsort(np.abs(mu), kind="stable")][:count])


def substitute_U(nu: int, plane_function, cone_angles: np.ndarray, *lead) -> np.ndarray:
    """e^{-i nu phi} Psi(..., 2 phi) for a callable plane function Psi(..., angle)."""
    cone_angles = np.asarray(cone_angles, dtype=float)
    return np.exp(-1j * nu * cone_angles) * plane_function(*lead, 2 * cone_angles)


def parseval_norm_squared(coefficients: np.ndarray) -> float:
    return float(np.sum(np.abs(coefficients) ** 2))


def cone_norm_squared_quadrature(values: np.ndarray, measure_factor: float = 2.0) -> float:
    """Trapezoid-free midpoint rule on the open chart interval, times the density."""
    n = values.shape[-1]
    return float(measure_factor * np.sum(np.abs(values) ** 2) * math.pi / n)


def lattice_equivalent(offset_a, offset_b, spacing=2) -> bool:
    """Two infinite lattices offset + spacing*Z coincide."""
    d = offset_a - offset_b
    return d % spacing == 0
