"""Aberth-Ehrlich simultaneous root finder for complex polynomials."""

import numpy as np

from .errors import RootFindFailure

EPS = np.finfo(float).eps


def horner(coeffs, z):
    """Evaluate a polynomial (highest degree first) at ``z``."""
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z) + coeffs[0]
    for c in coeffs[1:]:
        acc = acc * z + c
    return acc


def _backward_bound(coeffs, z):
    # rounding-level bound on |p(z)| from Horner in double precision
    scale = horner(np.abs(coeffs), np.abs(z)).real + np.abs(coeffs).max()
    return scale * (4 * len(coeffs) * EPS)


def aberth(coeffs, radius=1.0, max_iter=500, tol=1e-14):
    """All roots of the polynomial with ``coeffs`` (highest degree first).

    Starts from ``radius`` on a circle with angles offset so that no start
    lies on the real axis. Raises RootFindFailure when the final iterates
    are not roots to within a small multiple of the rounding bound.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    nz = np.flatnonzero(coeffs)
    if nz.size == 0:
        raise ValueError("zero polynomial")
    coeffs = coeffs[nz[0]:]
    m = len(coeffs) - 1
    if m == 0:
        return np.empty(0, dtype=complex)
    if m == 1:
        return np.array([-coeffs[1] / coeffs[0]])
    dcoeffs = np.polyder(coeffs)
    k = np.arange(m)
    z = radius * np.exp(1j * (2 * np.pi * k / m + 0.4 / m + 0.25))
    for _ in range(max_iter):
        p = horner(coeffs, z)
        dp = horner(dcoeffs, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            corr = ratio / (1.0 - ratio * inv.sum(axis=1))
        corr = np.where(np.isfinite(corr), corr, 0.0)
        z = z - corr
        if np.all(np.abs(corr) <= tol * np.maximum(1.0, np.abs(z))):
            break
    resid = np.abs(horner(coeffs, z))
    bound = _backward_bound(coeffs, z)
    # multiple roots stall around sqrt(eps); the residual is still rounding-level
    if not np.all(np.isfinite(z)) or np.any(resid > 1e3 * bound):
        raise RootFindFailure(
            f"Aberth iteration did not converge (max residual {resid.max():.3e})"
        )
    return z
