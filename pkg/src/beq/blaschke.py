"""Finite Blaschke products: evaluation, derivatives, critical points, boundary argument."""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import ClassificationError, DegenerateOrigin, PoleProximityError, RootFindFailure
from .roots import aberth

BOUNDARY_EPS = 1e-12
DEGENERATE_ORIGIN_TOL = 1e-10
POLE_TOL = 1e-300
ANNULUS = 1e-8
TWO_PI = 2 * math.pi


def _leave_one_out_prod(f):
    """Products of ``f`` along axis 0 with the k-th entry removed, without division."""
    n = f.shape[0]
    ones = np.ones((1,) + f.shape[1:], dtype=f.dtype)
    prefix = np.concatenate([ones, np.cumprod(f[:-1], axis=0)], axis=0)
    suffix = np.concatenate([np.cumprod(f[::-1][:-1], axis=0)[::-1], ones], axis=0)
    if n == 1:
        return ones
    return prefix * suffix


@dataclass(frozen=True, eq=False)
class BlaschkeProduct:
    """``chi * prod (z - a_k) / (1 - conj(a_k) z)`` for zeros ``a_k`` in the open disk."""

    zeros: np.ndarray
    leading_coefficient: complex = 1.0 + 0j

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.zeros, dtype=complex)).copy()
        if a.ndim != 1 or a.size < 1:
            raise ValueError("a Blaschke product needs at least one zero")
        if not np.all(np.isfinite(a)):
            raise ValueError("zeros must be finite")
        if np.any(np.abs(a) >= 1 - BOUNDARY_EPS):
            raise ValueError("all zeros must lie strictly inside the unit disk")
        chi = complex(self.leading_coefficient)
        if abs(abs(chi) - 1) > 1e-14:
            raise ValueError(f"leading coefficient must be unimodular, got |chi|={abs(chi)!r}")
        a.setflags(write=False)
        object.__setattr__(self, "zeros", a)
        object.__setattr__(self, "leading_coefficient", chi)

    @property
    def degree(self):
        return self.zeros.size

    @property
    def is_monic(self):
        return self.leading_coefficient == 1

    def monic(self):
        return BlaschkeProduct(self.zeros, 1.0)

    def __call__(self, z):
        return evaluate(self, z)

    def __eq__(self, other):
        if not isinstance(other, BlaschkeProduct):
            return NotImplemented
        return (
            self.leading_coefficient == other.leading_coefficient
            and np.array_equal(self.zeros, other.zeros)
        )

    def __repr__(self):
        return f"BlaschkeProduct(zeros={self.zeros.tolist()!r}, leading_coefficient={self.leading_coefficient!r})"

    def numerator_coeffs(self):
        """P(z) = chi * prod (z - a_k), highest degree first."""
        p = np.array([1.0 + 0j])
        for a in self.zeros:
            p = np.convolve(p, [1.0, -a])
        return self.leading_coefficient * p

    def denominator_coeffs(self):
        """Q(z) = prod (1 - conj(a_k) z), highest degree first."""
        q = np.array([1.0 + 0j])
        for a in self.zeros:
            q = np.convolve(q, [-np.conj(a), 1.0])
        return q


def _factors(B, z):
    z = np.asarray(z, dtype=complex)
    a = B.zeros.reshape((-1,) + (1,) * z.ndim)
    num = z[None, ...] - a
    den = 1.0 - np.conj(a) * z[None, ...]
    if np.any(np.abs(den) < POLE_TOL):
        raise PoleProximityError("evaluation point coincides with a pole 1/conj(a_k)")
    return num, den


def evaluate(B, z):
    """Value of ``B`` at ``z`` (scalar or array)."""
    num, den = _factors(B, z)
    val = B.leading_coefficient * np.prod(num / den, axis=0)
    return val[()] if np.ndim(val) == 0 else val


def _quotient_parts(B, z):
    num, den = _factors(B, z)
    chi = B.leading_coefficient
    a = B.zeros.reshape((-1,) + (1,) * (num.ndim - 1))
    P = chi * np.prod(num, axis=0)
    dP = chi * np.sum(_leave_one_out_prod(num), axis=0)
    Q = np.prod(den, axis=0)
    dQ = np.sum(-np.conj(a) * _leave_one_out_prod(den), axis=0)
    return P, dP, Q, dQ


def derivative(B, z):
    """B'(z) from the quotient rule (P'Q - PQ') / Q^2."""
    P, dP, Q, dQ = _quotient_parts(B, z)
    val = (dP * Q - P * dQ) / Q**2
    return val[()] if np.ndim(val) == 0 else val


def critical_numerator_coeffs(B):
    """Coefficients of P'Q - PQ' with the (identically cancelling) z^(2n-1) term removed.

    The result has degree 2n-2 exactly when B'(0) != 0.
    """
    n = B.degree
    P = B.numerator_coeffs()
    Q = B.denominator_coeffs()
    # fixed lengths: numpy's poly helpers trim leading zeros, and Q loses its
    # top coefficient when some a_k = 0
    dP = P[:-1] * np.arange(n, 0, -1)
    dQ = Q[:-1] * np.arange(n, 0, -1)
    N = np.convolve(dP, Q) - np.convolve(P, dQ)
    return N[1:]


def reflected_residual(B, z):
    """|B'(z)| for |z| < 1; |B'(z)| |z|^2 / |B(z)|^2 (= |B'(1/conj z)|) for |z| >= 1.

    Outside roots can sit next to a pole, where the raw |B'| is badly scaled.
    """
    z = np.asarray(z, dtype=complex)
    d = np.abs(derivative(B, z))
    outside = np.abs(z) >= 1
    if np.any(outside):
        zo = z[outside]
        d = d.copy()
        d[outside] = d[outside] * np.abs(zo) ** 2 / np.abs(evaluate(B, zo)) ** 2
    return d


@dataclass(frozen=True)
class CriticalPointSet:
    inside: np.ndarray
    outside: np.ndarray
    degenerate_at_origin: bool = False
    residuals: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __len__(self):
        return self.inside.size + self.outside.size

    @property
    def all(self):
        return np.concatenate([self.inside, self.outside])


def _log_derivative_step(B, z):
    """Newton step for L = B'/B = sum (1 - |a|^2) / ((z - a)(1 - conj(a) z)).

    L has the critical points of B as zeros (away from zeros of B) and, as a
    sum of partial fractions, is evaluated far more accurately than the
    expanded numerator polynomial.
    """
    a = B.zeros[:, None]
    z = np.asarray(z, dtype=complex)
    w = 1 - np.abs(a) ** 2
    d = (z[None, :] - a) * (1 - np.conj(a) * z[None, :])
    with np.errstate(divide="ignore", invalid="ignore"):
        L = np.sum(w / d, axis=0)
        dL = -np.sum(w * (1 - 2 * np.conj(a) * z[None, :] + np.abs(a) ** 2) / d**2, axis=0)
        step = L / dL
    return np.where(np.isfinite(step), step, 0.0)


def _polish(B, z, steps=3):
    for _ in range(steps):
        cand = z - _log_derivative_step(B, z)
        better = reflected_residual(B, cand) <= reflected_residual(B, z)
        z = np.where(better, cand, z)
    return z


def critical_points(B, residual_tol=1e-9):
    """All 2n-2 zeros of B', split into the n-1 inside the disk and their reflections.

    A root is accepted when its reflected residual is below ``residual_tol`` or,
    for badly conditioned products, when the next Newton correction is below
    1e-10 relative. Raises DegenerateOrigin when |B'(0)| < 1e-10.
    """
    n = B.degree
    if n == 1:
        return CriticalPointSet(np.empty(0, complex), np.empty(0, complex))
    if abs(derivative(B, 0.0)) < DEGENERATE_ORIGIN_TOL:
        raise DegenerateOrigin(f"|B'(0)| = {abs(derivative(B, 0.0)):.3e} is below {DEGENERATE_ORIGIN_TOL:g}; critical points are degenerate")
    N = critical_numerator_coeffs(B)
    roots = aberth(N, radius=1.0)
    roots = _polish(B, roots)

    for _ in range(5):
        ambiguous = np.abs(np.abs(roots) - 1) <= ANNULUS
        if not ambiguous.any():
            break
        roots = np.where(ambiguous, _polish(B, roots), roots)
    else:
        raise ClassificationError("critical point within 1e-8 of the unit circle")

    res = reflected_residual(B, roots)
    # zeros hugging the circle make B'' huge; then judge by the forward error
    forward = np.abs(_log_derivative_step(B, roots)) / np.maximum(1.0, np.abs(roots))
    if np.any((res >= residual_tol) & (forward >= 1e-10)):
        raise RootFindFailure(f"critical point residual {res.max():.3e} exceeds {residual_tol}")

    mask = np.abs(roots) < 1
    inside, outside = roots[mask], roots[~mask]
    if inside.size != n - 1 or outside.size != n - 1:
        raise ClassificationError(
            f"expected {n - 1} critical points inside the disk, found {inside.size}"
        )
    order = np.lexsort((np.abs(inside), np.angle(inside)))
    inside = inside[order]
    reflected = 1 / np.conj(inside)
    cost = np.abs(reflected[:, None] - outside[None, :])
    _, cols = linear_sum_assignment(cost)
    outside = outside[cols]
    gap = np.abs(reflected - outside) / np.maximum(1.0, np.abs(outside))
    if np.any(gap > 1e-6):
        raise RootFindFailure(f"inside/outside critical points fail inversion pairing ({gap.max():.3e})")
    return CriticalPointSet(
        inside=inside,
        outside=outside,
        degenerate_at_origin=False,
        residuals=reflected_residual(B, np.concatenate([inside, outside])),
    )


@dataclass(frozen=True, eq=False)
class LiftedArgument:
    """Continuous branch of arg B(e^{it}) with value ``alpha`` at t = 0.

    Uses arg b_k(e^{it}) = t + 2 Arg(1 - a_k e^{-it}); the principal argument is
    continuous there because Re(1 - a_k e^{-it}) > 0.
    """

    zeros: np.ndarray
    alpha: float

    @property
    def degree(self):
        return self.zeros.size

    def _offsets(self, t):
        t = np.asarray(t, dtype=float)
        a = self.zeros.reshape((-1,) + (1,) * t.ndim)
        return 2 * np.sum(np.angle(1 - a * np.exp(-1j * t)[None, ...]) - np.angle(1 - a), axis=0)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        # periodicity Phi(t + 2pi) = Phi(t) + 2 pi n keeps large |t| accurate
        k = np.floor(t / TWO_PI)
        t0 = t - TWO_PI * k
        val = self.alpha + self.degree * t0 + self._offsets(t0) + TWO_PI * self.degree * k
        return val[()] if val.ndim == 0 else val

    def derivative(self, t):
        """Phi'(t) = sum (1 - |a|^2) / |e^{it} - a|^2 = |B'(e^{it})|."""
        t = np.asarray(t, dtype=float)
        a = self.zeros.reshape((-1,) + (1,) * t.ndim)
        w = np.exp(1j * t)[None, ...]
        val = np.sum((1 - np.abs(a) ** 2) / np.abs(w - a) ** 2, axis=0)
        return val[()] if val.ndim == 0 else val

    def inverse(self, y, tol=1e-13, max_iter=200):
        """Solve Phi(t) = y for every entry of ``y``; bracketed Newton on [0, 2 pi]."""
        y = np.asarray(y, dtype=float)
        period = TWO_PI * self.degree
        k = np.floor((y - self.alpha) / period)
        y0 = y - period * k
        lo = np.zeros_like(y0)
        hi = np.full_like(y0, TWO_PI)
        # linear initial guess: Phi is n t + bounded periodic offset
        t = np.clip((y0 - self.alpha) / self.degree, 0.0, TWO_PI)
        for _ in range(max_iter):
            f = self(t) - y0
            lo = np.where(f < 0, t, lo)
            hi = np.where(f > 0, t, hi)
            if np.all(np.abs(f) <= tol * max(1.0, period)):
                break
            step = t - f / self.derivative(t)
            bad = ~((step > lo) & (step < hi))
            t = np.where(bad, 0.5 * (lo + hi), step)
        # one more Newton step brings the residual down to rounding level
        step = t - (self(t) - y0) / self.derivative(t)
        t = np.where((step >= lo) & (step <= hi), step, t)
        out = t + TWO_PI * k
        return out[()] if out.ndim == 0 else out


def lifted_argument(B):
    alpha = float(np.angle(evaluate(B, 1.0)))
    if alpha >= math.pi:
        alpha -= TWO_PI
    return LiftedArgument(zeros=B.zeros, alpha=alpha)
