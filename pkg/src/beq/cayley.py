"""Inverse Cayley transform between the unit circle and the real line, and atomic measures."""

from dataclasses import dataclass
import math

import numpy as np

from .errors import AtomAtInfinity, InfiniteConstant, MeasureError, PoleError

INFINITY = math.inf
INFINITY_TOL = 1e-14
ATOM_GUARD = 1e-10
MINUS_I_GUARD = 1e-12
LOG2 = math.log(2.0)


def is_infinite(u):
    return np.isinf(np.abs(u))


@dataclass(frozen=True)
class CayleyMap:
    """C(z) = i (1 + z e^{-i theta}) / (1 - z e^{-i theta}); sends e^{i theta} to infinity."""

    theta: float

    def __post_init__(self):
        if not math.isfinite(self.theta):
            raise ValueError("theta must be finite")
        object.__setattr__(self, "theta", float(self.theta))

    @property
    def pole(self):
        return complex(math.cos(self.theta), math.sin(self.theta))

    def forward(self, z):
        """Image of ``z``; points within 1e-14 of e^{i theta} map to INFINITY."""
        z_arr = np.asarray(z, dtype=complex)
        q = z_arr * np.exp(-1j * self.theta)
        at_pole = np.abs(z_arr - self.pole) <= INFINITY_TOL
        with np.errstate(divide="ignore", invalid="ignore"):
            u = 1j * (1 + q) / (1 - q)
        u = np.where(at_pole, INFINITY, u)
        if u.ndim == 0:
            return INFINITY if at_pole else complex(u)
        return u

    def forward_boundary(self, tau):
        """Real image of e^{i tau}: -cot((tau - theta) / 2)."""
        tau = np.asarray(tau, dtype=float)
        with np.errstate(divide="ignore"):
            out = -1.0 / np.tan((tau - self.theta) / 2)
        return out[()] if out.ndim == 0 else out

    def boundary_jacobian(self, tau):
        """d/dtau of forward_boundary: 1 / (2 sin^2((tau - theta) / 2))."""
        tau = np.asarray(tau, dtype=float)
        out = 0.5 / np.sin((tau - self.theta) / 2) ** 2
        return out[()] if out.ndim == 0 else out

    def inverse(self, u):
        """e^{i theta} (u - i) / (u + i); INFINITY maps to e^{i theta}."""
        u_arr = np.asarray(u, dtype=complex)
        inf = is_infinite(u_arr)
        if np.any(~inf & (np.abs(u_arr + 1j) == 0)):
            raise PoleError("the inverse Cayley map has a pole at u = -i")
        with np.errstate(invalid="ignore", divide="ignore"):
            z = np.exp(1j * self.theta) * (u_arr - 1j) / (u_arr + 1j)
        z = np.where(inf, self.pole, z)
        return complex(z) if z.ndim == 0 else z


@dataclass(frozen=True, eq=False)
class SignedAtomicMeasure:
    """Finitely many atoms (location, real weight)."""

    locations: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        loc = np.atleast_1d(np.asarray(self.locations, dtype=complex)).copy()
        w = np.atleast_1d(np.asarray(self.weights, dtype=float)).copy()
        if loc.shape != w.shape or loc.ndim != 1:
            raise ValueError("locations and weights must be 1-d and of equal length")
        if loc.size > 1:
            gaps = np.abs(loc[:, None] - loc[None, :]) + np.eye(loc.size)
            if gaps.min() == 0:
                raise ValueError("atom locations must be pairwise distinct")
        loc.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "locations", loc)
        object.__setattr__(self, "weights", w)

    @classmethod
    def empty(cls):
        return cls(np.empty(0, complex), np.empty(0))

    @classmethod
    def from_protons(cls, inner):
        """Atoms at zeta_k and 1/conj(zeta_k), each with weight 1/2."""
        inner = np.atleast_1d(np.asarray(inner, dtype=complex))
        loc = np.concatenate([inner, 1 / np.conj(inner)])
        return cls(loc, np.full(loc.size, 0.5))

    def __len__(self):
        return self.locations.size

    @property
    def total_mass(self):
        return float(self.weights.sum())

    def _has_partner(self, image, tol):
        for loc, w in zip(self.locations, self.weights):
            target = image(loc)
            d = np.abs(self.locations - target)
            k = int(np.argmin(d)) if d.size else -1
            if k < 0 or d[k] > tol * max(1.0, abs(target)) or abs(self.weights[k] - w) > tol:
                return False
        return True

    def is_inversion_symmetric(self, tol=1e-10):
        """Atoms pair up under z -> 1/conj(z) with equal weights; none at 0 or on the circle."""
        if np.any(np.abs(self.locations) < tol) or np.any(np.abs(np.abs(self.locations) - 1) < tol):
            return False
        return self._has_partner(lambda z: 1 / np.conj(z), tol)

    def is_conjugation_symmetric(self, tol=1e-10):
        """Atoms pair up under conjugation with equal weights; none on the real line."""
        if np.any(np.abs(self.locations.imag) < tol):
            return False
        return self._has_partner(np.conj, tol)


def pushforward_measure(cmap, mu):
    """nu = mu o C^{-1}: atoms moved by ``cmap.forward``, weights kept."""
    if len(mu) and np.any(np.abs(mu.locations - cmap.pole) < ATOM_GUARD):
        raise AtomAtInfinity(f"an atom lies within {ATOM_GUARD} of e^(i theta)")
    return SignedAtomicMeasure(cmap.forward(mu.locations) if len(mu) else mu.locations, mu.weights)


def energy_shift_constant(nu, n):
    """c = n (n-1) log 2 - 2 n sum_k w_k log|xi_k + i| for a measure of mass n - 1."""
    if abs(nu.total_mass - (n - 1)) > 1e-9 * max(1, n):
        raise MeasureError(f"measure has mass {nu.total_mass!r}, expected n - 1 = {n - 1}")
    dist = np.abs(nu.locations + 1j)
    if np.any(dist < MINUS_I_GUARD):
        raise InfiniteConstant("an atom of nu sits at -i; the energy shift is infinite")
    return n * (n - 1) * LOG2 - 2 * n * float(np.sum(nu.weights * np.log(dist)))


def discrete_energy_shift_constant(xi, n):
    """c = n (n-1) log 2 - n sum_k log|(xi_k + i)(conj(xi_k) + i)| for n - 1 proton images."""
    xi = np.atleast_1d(np.asarray(xi, dtype=complex))
    if xi.size != n - 1:
        raise MeasureError(f"need n - 1 = {n - 1} proton images, got {xi.size}")
    prod = np.abs((xi + 1j) * (np.conj(xi) + 1j))
    if np.any(np.minimum(np.abs(xi + 1j), np.abs(np.conj(xi) + 1j)) < MINUS_I_GUARD):
        raise InfiniteConstant("a proton image sits at -i; the energy shift is infinite")
    return n * (n - 1) * LOG2 - n * float(np.sum(np.log(prod)))
