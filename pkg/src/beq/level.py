"""Level equation B(e^{it}) = e^{i delta} and the solution curve delta -> T(delta)."""

from dataclasses import dataclass
import math

import numpy as np

from .blaschke import TWO_PI, evaluate, lifted_argument
from .errors import BranchSwapError

DEFAULT_SAMPLES_PER_BRANCH = 256


def wrap_angle(x):
    """Map angles to (-pi, pi]."""
    x = np.asarray(x, dtype=float)
    y = -((-x + math.pi) % TWO_PI) + math.pi
    return y[()] if y.ndim == 0 else y


@dataclass(frozen=True, eq=False)
class CircleConfiguration:
    """Electron angles tau_1, ..., tau_n (radians; stored as given, possibly lifted)."""

    angles: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.angles, dtype=float)).copy()
        if not np.all(np.isfinite(a)):
            raise ValueError("angles must be finite")
        a.setflags(write=False)
        object.__setattr__(self, "angles", a)

    def __len__(self):
        return self.angles.size

    @property
    def points(self):
        return np.exp(1j * self.angles)

    def display_angles(self):
        return wrap_angle(self.angles)

    def in_A(self):
        """tau_1 < tau_2 < ... < tau_n < tau_1 + 2 pi."""
        a = self.angles
        return bool(np.all(np.diff(a) > 0) and a[-1] < a[0] + TWO_PI)


def _level_targets(alpha, n, delta):
    # the n lifts delta + 2 pi m inside [alpha, alpha + 2 pi n)
    m0 = math.ceil((alpha - delta) / TWO_PI)
    targets = delta + TWO_PI * (m0 + np.arange(n))
    if targets[0] < alpha:
        targets = targets + TWO_PI
    return targets


def _solve_many(phi, n, deltas):
    targets = np.stack([_level_targets(phi.alpha, n, float(d)) for d in deltas])
    tau = phi.inverse(targets)
    tau = np.where(tau >= TWO_PI, tau - TWO_PI, tau)
    return np.sort(tau, axis=-1)


def solve_level(B, delta):
    """The n solutions of B(e^{it}) = e^{i delta} in [0, 2 pi), ascending."""
    # arg chi is already folded into alpha
    return CircleConfiguration(_solve_many(lifted_argument(B), B.degree, [delta])[0])


def curve_point(B, delta, phi=None):
    """T(delta) from the labeling tau_j(delta) = Phi^{-1}(delta + 2 pi (j - 1)).

    The closed form fixes tau_1(alpha) = 0 and keeps the labels ordered and continuous.
    """
    phi = phi if phi is not None else lifted_argument(B)
    n = B.degree
    return CircleConfiguration(phi.inverse(float(delta) + TWO_PI * np.arange(n)))


@dataclass(frozen=True, eq=False)
class SolutionCurve:
    blaschke: object
    alpha: float
    deltas: np.ndarray
    taus: np.ndarray
    end_taus: np.ndarray  # continuation of the last sample to delta = alpha + 2 pi n

    @property
    def degree(self):
        return self.taus.shape[1]

    def __len__(self):
        return self.deltas.size

    def configuration(self, i):
        return CircleConfiguration(self.taus[i])

    def s0(self):
        """Restriction to delta in [alpha, alpha + 2 pi)."""
        keep = self.deltas < self.alpha + TWO_PI
        return SolutionCurve(self.blaschke, self.alpha, self.deltas[keep], self.taus[keep], self.end_taus)

    def residuals(self):
        w = np.exp(1j * self.taus)
        return np.abs(evaluate(self.blaschke, w) - np.exp(1j * self.deltas)[:, None])


def _match(prev, candidates):
    """Continue each branch in ``prev`` to its nearest lift among ``candidates``.

    Returns None when the match is ambiguous (second-nearest < 2 x nearest) or
    not a permutation.
    """
    lifts = candidates[None, :] + TWO_PI * np.round((prev[:, None] - candidates[None, :]) / TWO_PI)
    dist = np.abs(lifts - prev[:, None])
    order = np.argsort(dist, axis=1)
    rows = np.arange(prev.size)
    nearest = dist[rows, order[:, 0]]
    if prev.size > 1:
        second = dist[rows, order[:, 1]]
        if np.any(second < 2 * nearest):
            return None
    if np.unique(order[:, 0]).size != prev.size:
        return None
    new = lifts[rows, order[:, 0]]
    if np.any(new < prev):
        return None
    return new


def _continue(B, prev, d0, d1, depth=0, max_depth=12, candidates=None):
    if candidates is None:
        candidates = solve_level(B, d1).angles
    new = _match(prev, candidates)
    if new is not None:
        return new
    if depth >= max_depth:
        raise BranchSwapError(f"ambiguous branch continuation between delta={d0!r} and {d1!r}")
    mid = 0.5 * (d0 + d1)
    half = _continue(B, prev, d0, mid, depth + 1, max_depth)
    return _continue(B, half, mid, d1, depth + 1, max_depth)


def trace_curve(B, samples_per_branch=DEFAULT_SAMPLES_PER_BRANCH):
    """Sample T(delta) on a uniform delta grid over [alpha, alpha + 2 pi n).

    Branches are labeled by nearest-neighbour continuation from tau_1(alpha) = 0;
    ambiguous steps are subdivided before giving up with BranchSwapError.
    """
    if not B.is_monic:
        raise ValueError("trace_curve needs a monic Blaschke product")
    if samples_per_branch < 2:
        raise ValueError("samples_per_branch must be at least 2")
    n = B.degree
    phi = lifted_argument(B)
    alpha = phi.alpha
    total = n * samples_per_branch
    deltas = alpha + TWO_PI * n * np.arange(total) / total

    solutions = _solve_many(phi, n, deltas)
    start = solutions[0]
    # the solution at t = 0 may come back as 2 pi - tiny
    dist0 = np.minimum(start, TWO_PI - start)
    k0 = int(np.argmin(dist0))
    first = start[k0] if start[k0] < math.pi else start[k0] - TWO_PI
    rest = np.sort((start - first) % TWO_PI)[1:] + first
    taus = np.empty((total, n))
    taus[0] = np.concatenate([[first], rest])
    for i in range(1, total):
        taus[i] = _continue(B, taus[i - 1], deltas[i - 1], deltas[i], candidates=solutions[i])
    end = _continue(B, taus[-1], deltas[-1], alpha + TWO_PI * n)
    return SolutionCurve(B, alpha, deltas, taus, end)


def point_on_curve(B, beta):
    """The unique delta in [alpha, alpha + 2 pi n) with tau_1(delta) = beta, and T(delta)."""
    if not B.is_monic:
        raise ValueError("point_on_curve needs a monic Blaschke product")
    beta = float(beta)
    if not 0 <= beta < TWO_PI:
        raise ValueError("beta must lie in [0, 2 pi)")
    phi = lifted_argument(B)
    delta = float(phi(beta))
    return delta, curve_point(B, delta, phi)
