"""Doubled logarithmic energies on the circle and on the line, and their derivatives.

Circle side: electrons w_j on the unit circle, proton pairs zeta_k, 1/conj(zeta_k)
(or a general atomic measure mu). Line side: electrons t_j on the real line,
proton images xi_k, conj(xi_k) (or the pushed-forward measure nu).
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .cayley import SignedAtomicMeasure, is_infinite
from .errors import ExceptionalConfiguration, InfinityPresent, MeasureError, SymmetryViolation
from .level import CircleConfiguration

COLLISION_TOL = 1e-12
GRADIENT_STEP = 1e-6
HESSIAN_STEP = 1e-4


@dataclass(frozen=True, eq=False)
class ProtonSystem:
    """Inner protons zeta_k (0 < |zeta_k| < 1), each paired with 1/conj(zeta_k)."""

    inner: np.ndarray

    def __post_init__(self):
        z = np.atleast_1d(np.asarray(self.inner, dtype=complex)).copy()
        if z.ndim != 1:
            raise ValueError("inner protons must be a flat list")
        if np.any(np.abs(z) < COLLISION_TOL):
            raise ValueError("a proton at the origin has no reflected partner")
        if np.any(np.abs(z) >= 1):
            raise ValueError("inner protons must lie strictly inside the unit disk")
        if z.size > 1 and np.min(np.abs(z[:, None] - z[None, :]) + np.eye(z.size)) < COLLISION_TOL:
            raise ValueError("inner protons must be pairwise distinct")
        z.setflags(write=False)
        object.__setattr__(self, "inner", z)

    def __len__(self):
        return self.inner.size

    @property
    def outer(self):
        return 1 / np.conj(self.inner)

    def as_measure(self):
        return SignedAtomicMeasure.from_protons(self.inner)


@dataclass(frozen=True, eq=False)
class LineConfiguration:
    """Electrons on the extended real line; at most one may be infinite."""

    points: np.ndarray

    def __post_init__(self):
        p = np.atleast_1d(np.asarray(self.points, dtype=float)).copy()
        if np.any(np.isnan(p)):
            raise ValueError("line points must not be NaN")
        if np.count_nonzero(np.isinf(p)) > 1:
            raise ValueError("at most one point may be at infinity")
        p[np.isinf(p)] = math.inf
        p.setflags(write=False)
        object.__setattr__(self, "points", p)

    def __len__(self):
        return self.points.size

    @property
    def infinite_index(self):
        idx = np.flatnonzero(np.isinf(self.points))
        return int(idx[0]) if idx.size else None


@dataclass(frozen=True)
class Collision:
    kind: str  # proton-at-origin | electron-electron | electron-proton | electron-reflected-proton
    indices: tuple

    def describe(self):
        return f"{self.kind}{self.indices}"


@dataclass(frozen=True)
class ExceptionalReport:
    reasons: tuple = field(default_factory=tuple)

    @property
    def is_exceptional(self):
        return bool(self.reasons)

    def __bool__(self):
        return self.is_exceptional


def _points(config):
    if isinstance(config, CircleConfiguration):
        return config.points
    if isinstance(config, LineConfiguration):
        return config.points.astype(complex)
    return np.atleast_1d(np.asarray(config, dtype=complex))


def _pair_collisions(points, tol):
    out = []
    n = points.size
    for j in range(n):
        for k in range(j + 1, n):
            if abs(points[j] - points[k]) < tol:
                out.append(Collision("electron-electron", (j, k)))
    return out


def exceptional_report(config, field=None, tol=COLLISION_TOL):
    """Every way ``config`` together with ``field`` falls into the exceptional set.

    ``field`` is a ProtonSystem, a raw sequence of inner protons, a
    SignedAtomicMeasure, or None (electron-electron collisions only).
    """
    points = _points(config)
    finite = points[~is_infinite(points)]
    reasons = _pair_collisions(finite, tol)
    if isinstance(field, SignedAtomicMeasure):
        for j, w in enumerate(points):
            for k, loc in enumerate(field.locations):
                if abs(w - loc) < tol:
                    reasons.append(Collision("electron-proton", (j, k)))
    elif field is not None:
        inner = field.inner if isinstance(field, ProtonSystem) else np.atleast_1d(np.asarray(field, dtype=complex))
        for k, z in enumerate(inner):
            if abs(z) < tol:
                reasons.append(Collision("proton-at-origin", (k,)))
                continue
            zs = 1 / np.conj(z)
            for j, w in enumerate(points):
                if abs(w - z) < tol:
                    reasons.append(Collision("electron-proton", (j, k)))
                if abs(w - zs) < tol:
                    reasons.append(Collision("electron-reflected-proton", (j, k)))
    return ExceptionalReport(tuple(reasons))


def _inner(protons):
    return protons.inner if isinstance(protons, ProtonSystem) else ProtonSystem(protons).inner


def _check_clean(points, field):
    report = exceptional_report(points, field)
    if report:
        raise ExceptionalConfiguration(report)


def _circle_energy(w, zeta):
    """Doubled circle energy along the last axis of ``w``."""
    n = w.shape[-1]
    att = 0.0
    if zeta.size:
        ws = w[..., :, None]
        att = np.sum(np.log(np.abs((ws - zeta) * (ws - 1 / np.conj(zeta)))), axis=(-2, -1))
    j, k = np.triu_indices(n, 1)
    rep = np.sum(np.log(np.abs(w[..., j] - w[..., k])), axis=-1)
    return att - 2 * rep


def energy_W(config, protons):
    """sum_k sum_j log|(w_j - zeta_k)(w_j - zeta_k*)| - 2 sum_{j<k} log|w_j - w_k|."""
    points = _points(config)
    zeta = _inner(protons)
    if zeta.size != points.size - 1:
        raise ValueError(f"{points.size} electrons need {points.size - 1} proton pairs, got {zeta.size}")
    _check_clean(points, zeta)
    return float(_circle_energy(points, zeta))


def restricted_energy(taus, protons):
    """W~(tau) = W(e^{i tau_1}, ..., e^{i tau_n}); ``taus`` may be batched (..., n)."""
    taus = np.asarray(taus, dtype=float)
    zeta = _inner(protons)
    w = np.exp(1j * taus)
    if taus.ndim == 1:
        return energy_W(w, zeta)
    return _circle_energy(w, zeta)


def _measure_energy(points, mu):
    n = points.size
    att = 0.0
    if len(mu):
        att = 2 * np.sum(mu.weights[None, :] * np.log(np.abs(points[:, None] - mu.locations[None, :])))
    diff = np.abs(points[:, None] - points[None, :]) + np.eye(n)
    return float(att - np.sum(np.log(diff)))


def energy_W_mu(config, mu):
    """2 sum_k sum_atoms w log|w_k - zeta| - sum_{l != k} log|w_l - w_k|."""
    points = _points(config)
    _check_clean(points, mu)
    return _measure_energy(points, mu)


def energy_V(config, xi):
    """sum_k sum_j log|(t_j - xi_k)(t_j - conj xi_k)| - 2 sum_{j<k} log|t_j - t_k|."""
    points = _points(config)
    if np.any(is_infinite(points)):
        raise InfinityPresent("configuration contains infinity; use energy_V_with_infinity")
    xi = np.atleast_1d(np.asarray(xi, dtype=complex))
    if np.any(np.abs(xi.imag) < COLLISION_TOL):
        raise ValueError("proton images must lie off the real line")
    atoms = np.concatenate([xi, np.conj(xi)])
    report = exceptional_report(points, None)
    extra = [
        Collision("electron-proton" if k < xi.size else "electron-reflected-proton", (j, k % max(xi.size, 1)))
        for j, t in enumerate(points)
        for k, a in enumerate(atoms)
        if abs(t - a) < COLLISION_TOL
    ]
    if report or extra:
        raise ExceptionalConfiguration(ExceptionalReport(report.reasons + tuple(extra)))
    att = np.sum(np.log(np.abs((points[:, None] - xi[None, :]) * (points[:, None] - np.conj(xi)[None, :]))))
    j, k = np.triu_indices(points.size, 1)
    return float(att - 2 * np.sum(np.log(np.abs(points[j] - points[k]))))


def energy_V_nu(config, nu):
    """Line-side counterpart of energy_W_mu."""
    points = _points(config)
    if np.any(is_infinite(points)):
        raise InfinityPresent("configuration contains infinity; use energy_V_with_infinity")
    _check_clean(points, nu)
    return _measure_energy(points, nu)


def energy_V_with_infinity(config, nu):
    """V_nu with the electron at infinity dropped (the continuous extension)."""
    points = _points(config)
    inf = is_infinite(points)
    if np.count_nonzero(inf) != 1:
        raise ValueError("expected exactly one point at infinity")
    rest = points[~inf]
    if rest.size == 0:
        return 0.0
    return energy_V_nu(rest, nu)


def _angles(config):
    if isinstance(config, CircleConfiguration):
        return config.angles
    return np.atleast_1d(np.asarray(config, dtype=float))


def tangential_gradient(config, protons):
    """Gradient of W~ with respect to the electron angles."""
    taus = _angles(config)
    zeta = _inner(protons)
    w = np.exp(1j * taus)
    _check_clean(w, zeta)
    grad = np.zeros(taus.size)
    if zeta.size:
        ws = w[:, None]
        grad += np.sum(np.real(1j * ws * (1 / (ws - zeta) + 1 / (ws - 1 / np.conj(zeta)))), axis=1)
    diff = w[:, None] - w[None, :]
    np.fill_diagonal(diff, 1.0)
    inter = np.real(1j * w[:, None] / diff)
    np.fill_diagonal(inter, 0.0)
    return grad - 2 * inter.sum(axis=1)


def tangential_hessian(config, protons, h=HESSIAN_STEP):
    """Central finite differences (step h) of the tangential gradient."""
    taus = _angles(config)
    n = taus.size
    H = np.empty((n, n))
    for k in range(n):
        e = np.zeros(n)
        e[k] = h
        H[:, k] = (tangential_gradient(taus + e, protons) - tangential_gradient(taus - e, protons)) / (2 * h)
    return H


def line_gradient(config, xi):
    """Gradient of V(t) = sum log|(t - xi)(t - conj xi)| - 2 sum_{j<k} log|t_j - t_k|."""
    t = np.atleast_1d(np.asarray(_points(config).real, dtype=float))
    xi = np.atleast_1d(np.asarray(xi, dtype=complex))
    grad = np.zeros(t.size)
    if xi.size:
        grad += np.sum(2 * np.real(1 / (t[:, None] - xi[None, :])), axis=1)
    diff = t[:, None] - t[None, :]
    np.fill_diagonal(diff, np.inf)
    return grad - 2 * np.sum(1 / diff, axis=1)


def _check_mass(mu, n):
    if abs(mu.total_mass - (n - 1)) > 1e-9 * max(1, n):
        raise MeasureError(f"measure has mass {mu.total_mass!r}, expected n - 1 = {n - 1}")


def radial_derivative(config, mu, j, eps=GRADIENT_STEP):
    """Central difference of W_mu along w_j -> w_j (1 + eps).

    Needs mu symmetric under z -> 1/conj(z) and of total mass n - 1.
    """
    points = _points(config)
    if not mu.is_inversion_symmetric():
        raise SymmetryViolation("measure is not symmetric under inversion in the unit circle")
    _check_mass(mu, points.size)
    _check_clean(points, mu)
    up, down = points.copy(), points.copy()
    up[j] *= 1 + eps
    down[j] *= 1 - eps
    return (energy_W_mu(up, mu) - energy_W_mu(down, mu)) / (2 * eps)


def imaginary_directional_derivative(config, nu, j, eps=GRADIENT_STEP):
    """Central difference of V_nu along t_j -> t_j + i eps, for real t and conjugation-symmetric nu."""
    points = _points(config)
    if np.any(np.abs(points.imag) > 0) or np.any(is_infinite(points)):
        raise ValueError("line configuration must be real and finite")
    if not nu.is_conjugation_symmetric():
        raise SymmetryViolation("measure is not symmetric under complex conjugation")
    _check_clean(points, nu)
    up, down = points.copy(), points.copy()
    up[j] += 1j * eps
    down[j] -= 1j * eps
    return (energy_V_nu(up, nu) - energy_V_nu(down, nu)) / (2 * eps)
