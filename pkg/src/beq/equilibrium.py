"""Equilibrium checks on the solution curve, the Cayley chain rule, and the reverse problem.

The reverse problem (find a degree-n Blaschke product with B(z_j) = 1 at n given
boundary points) is solved through the Herglotz representation

    (1 + B(z)) / (1 - B(z)) = i gamma + sum_j m_j (z_j + z) / (z_j - z),   m_j > 0,

which produces every such product, each with all zeros inside the disk.
"""

from dataclasses import dataclass
import logging
import math

import numpy as np

from .blaschke import TWO_PI, BlaschkeProduct, critical_points, derivative, evaluate, lifted_argument
from .cayley import CayleyMap
from .energy import (
    COLLISION_TOL,
    ProtonSystem,
    line_gradient,
    restricted_energy,
    tangential_gradient,
    tangential_hessian,
)
from .errors import CurveMismatch, DegenerateOutput, InterpolationFailure
from .level import CircleConfiguration, curve_point, solve_level, trace_curve, wrap_angle
from .roots import aberth, horner

log = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-8
DEFAULT_PROBES = 1000
DEFAULT_SEED = 42
NEAR_ZERO_EIGENVALUE = 1e-6
PROBE_SLACK = 1e-10
MIN_ANGULAR_GAP = 1e-6
# tilt strengths tried, in order, for the default interpolation weights
TILTS = (0.0, 0.5, 1.0, 2.0, 4.0)
MIN_ORIGIN_DERIVATIVE = 1e-3

__all__ = [
    "ProtonSystem",
    "MinimalityEvidence",
    "EquilibriumVerdict",
    "InterpolationResult",
    "assess_configuration",
    "verify_on_curve",
    "curve_energy_constancy",
    "chain_rule_check",
    "clark_parameters",
    "inverse_interpolate",
    "reverse_problem_pipeline",
]


@dataclass(frozen=True)
class MinimalityEvidence:
    hessian_min_eigenvalue: float
    hessian_near_zero_count: int
    num_random_probes: int
    min_probe_energy_excess: float

    @property
    def probes_ok(self):
        return self.min_probe_energy_excess >= -PROBE_SLACK

    @property
    def hessian_ok(self):
        return self.hessian_min_eigenvalue >= -NEAR_ZERO_EIGENVALUE


@dataclass(frozen=True, eq=False)
class EquilibriumVerdict:
    gradient_norm: float
    energy_value: float
    is_critical: bool
    minimality_evidence: MinimalityEvidence
    configuration: CircleConfiguration
    protons: ProtonSystem
    tolerance: float

    @property
    def is_minimal(self):
        ev = self.minimality_evidence
        return ev.probes_ok and ev.hessian_ok

    def as_dict(self):
        ev = self.minimality_evidence
        return {
            "gradient_norm": self.gradient_norm,
            "energy": self.energy_value,
            "is_critical": self.is_critical,
            "tolerance": self.tolerance,
            "is_minimal": self.is_minimal,
            "hessian_min_eigenvalue": ev.hessian_min_eigenvalue,
            "hessian_near_zero_count": ev.hessian_near_zero_count,
            "num_random_probes": ev.num_random_probes,
            "min_probe_energy_excess": ev.min_probe_energy_excess,
            "angles": self.configuration.angles.tolist(),
        }


def _clean_rows(taus, field):
    """Mask of rows of ``taus`` that stay COLLISION_TOL away from each other and from the field."""
    w = np.exp(1j * taus)
    gaps = np.abs(w[:, :, None] - w[:, None, :])
    n = taus.shape[1]
    gaps[:, np.arange(n), np.arange(n)] = np.inf
    keep = gaps.min(axis=(1, 2)) >= COLLISION_TOL if n > 1 else np.ones(len(taus), bool)
    if field is not None:
        inner = field.inner if isinstance(field, ProtonSystem) else np.atleast_1d(np.asarray(field, dtype=complex))
        if inner.size:
            atoms = np.concatenate([inner, 1 / np.conj(inner)])
            keep &= np.abs(w[:, :, None] - atoms).min(axis=(1, 2)) >= COLLISION_TOL
    return keep


def random_ordered_configurations(rng, count, n, field=None):
    """Uniform ordered angle tuples in [0, 2 pi), rejecting the exceptional set."""
    out = np.empty((0, n))
    while out.shape[0] < count:
        taus = np.sort(rng.uniform(0.0, TWO_PI, size=(count, n)), axis=1)
        out = np.concatenate([out, taus[_clean_rows(taus, field)]])
    return out[:count]


def assess_configuration(config, protons, tolerance=DEFAULT_TOLERANCE, probes=DEFAULT_PROBES, seed=DEFAULT_SEED):
    """Gradient, energy, Hessian spectrum and random-probe comparison for one configuration."""
    config = config if isinstance(config, CircleConfiguration) else CircleConfiguration(config)
    n = len(config)
    grad = tangential_gradient(config, protons)
    energy = restricted_energy(config.angles, protons)
    H = tangential_hessian(config, protons)
    eig = np.linalg.eigvalsh(0.5 * (H + H.T))
    rng = np.random.default_rng(seed)
    if probes:
        sample = random_ordered_configurations(rng, probes, n, protons.inner)
        excess = float(np.min(restricted_energy(sample, protons)) - energy)
    else:
        excess = math.inf
    norm = float(np.linalg.norm(grad))
    return EquilibriumVerdict(
        gradient_norm=norm,
        energy_value=float(energy),
        is_critical=norm < tolerance,
        minimality_evidence=MinimalityEvidence(
            hessian_min_eigenvalue=float(eig.min()),
            hessian_near_zero_count=int(np.count_nonzero(np.abs(eig) <= NEAR_ZERO_EIGENVALUE)),
            num_random_probes=int(probes),
            min_probe_energy_excess=excess,
        ),
        configuration=config,
        protons=protons,
        tolerance=tolerance,
    )


def _require_monic(B):
    if not B.is_monic:
        raise ValueError("expected a monic Blaschke product")


def verify_on_curve(B, delta, tolerance=DEFAULT_TOLERANCE, probes=DEFAULT_PROBES, seed=DEFAULT_SEED):
    """Check that T(delta) is a critical point and a (probed) global minimum of W~."""
    _require_monic(B)
    protons = ProtonSystem(critical_points(B).inside)
    return assess_configuration(curve_point(B, delta), protons, tolerance, probes, seed)


def curve_energy_constancy(B, samples=32):
    """max - min of W~ over ``samples`` points traced along the solution curve."""
    _require_monic(B)
    n = B.degree
    if n == 1:
        return 0.0
    protons = ProtonSystem(critical_points(B).inside)
    curve = trace_curve(B, max(2, math.ceil(samples / n)))
    energies = restricted_energy(curve.taus, protons)
    return float(energies.max() - energies.min())


def chain_rule_check(B, delta, j, config=None):
    """Both sides of dW~/dtau_j = dV/dt_j * dt_j/dtau_j with theta = tau_1.

    ``j`` is a 0-based electron index, 1 <= j < n; electron 0 is sent to
    infinity. ``config`` defaults to the sorted solution of the level equation
    at ``delta``; pass any ordered configuration to test off the curve.
    Returns (lhs, rhs).
    """
    protons = ProtonSystem(critical_points(B).inside)
    if config is None:
        config = solve_level(B, delta)
    config = config if isinstance(config, CircleConfiguration) else CircleConfiguration(config)
    taus = config.angles
    if not config.in_A():
        raise ValueError("configuration must be ordered: tau_1 < ... < tau_n < tau_1 + 2 pi")
    if not 1 <= j < taus.size:
        raise IndexError("j must satisfy 1 <= j < n")
    lhs = tangential_gradient(config, protons)[j]
    cmap = CayleyMap(taus[0])
    t = cmap.forward_boundary(taus[1:])
    xi = cmap.forward(protons.inner)
    rhs = line_gradient(t, xi)[j - 1] * cmap.boundary_jacobian(taus[j])
    return float(lhs), float(rhs)


@dataclass(frozen=True, eq=False)
class InterpolationResult:
    blaschke: BlaschkeProduct
    residuals: np.ndarray
    protons: ProtonSystem
    chi_used: complex
    delta_0: float
    weights: np.ndarray
    gamma: float

    def as_dict(self):
        return {
            "zeros": self.blaschke.zeros,
            "leading_coefficient": self.chi_used,
            "residuals": self.residuals.tolist(),
            "protons": self.protons.inner,
            "delta_0": self.delta_0,
            "weights": self.weights.tolist(),
            "gamma": self.gamma,
        }


def _check_points(points):
    z = np.atleast_1d(np.asarray(points, dtype=complex))
    if z.ndim != 1 or z.size < 1:
        raise ValueError("need at least one boundary point")
    if np.any(np.abs(np.abs(z) - 1) > 1e-9):
        raise ValueError("interpolation points must lie on the unit circle")
    z = z / np.abs(z)
    t = np.sort(np.mod(np.angle(z), TWO_PI))
    if z.size > 1:
        gaps = np.diff(np.concatenate([t, [t[0] + TWO_PI]]))
        if gaps.min() < MIN_ANGULAR_GAP:
            raise ValueError(f"interpolation points closer than {MIN_ANGULAR_GAP} rad")
    return z


def _herglotz_zeros(z, weights, gamma):
    """Zeros of B = (F - 1)/(F + 1): roots of N_F - D, D(x) = prod (z_j - x)."""
    n = z.size
    D = np.array([1.0 + 0j])
    for zj in z:
        D = np.convolve(D, [-1.0, zj])
    NF = 1j * gamma * D
    for j in range(n):
        Dj = np.array([1.0 + 0j])
        for i in range(n):
            if i != j:
                Dj = np.convolve(Dj, [-1.0, z[i]])
        NF = np.polyadd(NF, weights[j] * np.convolve([1.0, z[j]], Dj))
    G = np.polysub(NF, D)
    roots = aberth(G)
    dG = np.polyder(G)
    for _ in range(3):
        step = horner(G, roots) / horner(dG, roots)
        roots = roots - np.where(np.isfinite(step), step, 0.0)
    return roots


def _herglotz_value(z, weights, gamma, x):
    return 1j * gamma + np.sum(weights * (z + x) / (z - x))


def _polish(z, a, phase, iters=4):
    """Min-norm Gauss-Newton on arg B(z_j) = 0 over (Re a, Im a, arg chi)."""

    def resid(a, phase):
        return np.angle(np.exp(1j * phase) * np.prod((z[:, None] - a) / (1 - np.conj(a) * z[:, None]), axis=1))

    r = resid(a, phase)
    for _ in range(iters):
        if np.max(np.abs(r)) < 1e-15:
            break
        zc = z[:, None]
        dx = np.imag(-1 / (zc - a) + zc / (1 - np.conj(a) * zc))
        dy = np.imag(-1j / (zc - a) - 1j * zc / (1 - np.conj(a) * zc))
        J = np.hstack([dx, dy, np.ones((z.size, 1))])
        step = np.linalg.lstsq(J, -r, rcond=None)[0]
        m = a.size
        a_new = a + step[:m] + 1j * step[m:2 * m]
        phase_new = phase + step[-1]
        if np.any(np.abs(a_new) >= 1):
            break
        r_new = resid(a_new, phase_new)
        if np.max(np.abs(r_new)) >= np.max(np.abs(r)):
            break
        a, phase, r = a_new, phase_new, r_new
    return a, phase


def _build(z, weights, gamma):
    a = _herglotz_zeros(z, weights, gamma)
    if np.any(np.abs(a) >= 1 - 1e-12):
        raise InterpolationFailure("interpolant has a zero on or outside the unit circle")
    # chi from one evaluation on the circle, as far from the z_j as possible
    t = np.sort(np.mod(np.angle(z), TWO_PI))
    gaps = np.diff(np.concatenate([t, [t[0] + TWO_PI]]))
    k = int(np.argmax(gaps))
    x0 = np.exp(1j * (t[k] + gaps[k] / 2))
    F0 = _herglotz_value(z, weights, gamma, x0)
    target = (F0 - 1) / (F0 + 1)
    chi = target / evaluate(BlaschkeProduct(a), x0)
    a, phase = _polish(z, a, float(np.angle(chi)))
    return BlaschkeProduct(a, np.exp(1j * phase))


def _default_weights(z, s):
    w = np.exp(s * np.cos(np.angle(z) - np.angle(z[0])))
    return w / w.sum()


def clark_parameters(B, points):
    """Weights m_j = 1/|B'(z_j)| and gamma = Im F(0) reproducing ``B`` through inverse_interpolate."""
    z = _check_points(points)
    w = 1 / np.abs(derivative(B, z))
    b0 = evaluate(B, 0.0)
    return w, float(np.imag((1 + b0) / (1 - b0)))


def inverse_interpolate(points, weights=None, gamma=0.0):
    """A degree-n Blaschke product with B(z_j) = 1 at the n given boundary points.

    With ``weights`` omitted, weights proportional to exp(s cos(t_j - t_1)) and
    gamma = 0 are used, taking the first s in TILTS with |B'(0)| >= 1e-3 (else
    the candidate with the largest |B'(0)|).
    """
    z = _check_points(points)
    if weights is not None:
        w = np.asarray(weights, dtype=float)
        if w.shape != z.shape or np.any(w <= 0):
            raise ValueError("weights must be positive, one per point")
        candidates = [(w, float(gamma))]
    else:
        candidates = [(_default_weights(z, s), 0.0) for s in TILTS]

    best = None
    for w, g in candidates:
        B = _build(z, w, g)
        d0 = abs(derivative(B, 0.0))
        if best is None or d0 > best[0]:
            best = (d0, B, w, g)
        if d0 >= MIN_ORIGIN_DERIVATIVE:
            break
    d0, B, w, g = best
    if d0 < 1e-10:
        raise DegenerateOutput("every candidate interpolant has B'(0) = 0")

    residuals = np.abs(evaluate(B, z) - 1)
    if residuals.max() >= 1e-8:
        raise InterpolationFailure(f"interpolation residual {residuals.max():.3e} too large")
    chi = B.leading_coefficient
    alpha = lifted_argument(B.monic()).alpha
    minus_delta0 = alpha + np.mod(-np.angle(chi) - alpha, TWO_PI)
    return InterpolationResult(
        blaschke=B,
        residuals=residuals,
        protons=ProtonSystem(critical_points(B).inside),
        chi_used=chi,
        delta_0=float(-minus_delta0),
        weights=np.asarray(w, dtype=float),
        gamma=g,
    )


def reverse_problem_pipeline(points, tolerance=DEFAULT_TOLERANCE, probes=DEFAULT_PROBES, seed=DEFAULT_SEED,
                             weights=None, gamma=0.0):
    """Interpolate, pass to the monic product, locate the input on S_0 and verify it.

    Returns (InterpolationResult, EquilibriumVerdict).
    """
    result = inverse_interpolate(points, weights, gamma)
    B1 = result.blaschke.monic()
    on_curve = curve_point(B1, -result.delta_0)
    given = np.sort(np.mod(np.angle(_check_points(points)), TWO_PI))
    mismatch = float(np.max(np.abs(wrap_angle(on_curve.angles - given))))
    if mismatch > 1e-6:
        raise CurveMismatch(f"T(-delta_0) misses the input arguments by {mismatch:.3e}")
    if mismatch > 1e-8:
        log.warning("T(-delta_0) matches the input arguments only to %.3e", mismatch)
    verdict = assess_configuration(on_curve, result.protons, tolerance, probes, seed)
    return result, verdict
