"""Quantum-correlation measures on the two-site X state.

Three measures are computed, all in bits (base-2 logarithms):

* one-way quantum deficit: the minimal entropy increase under a projective
  measurement of the second site, minimized over the Bloch angles
  (theta, phi) of the measurement basis;
* l1-norm coherence: the absolute sum of the off-diagonal entries;
* relative entropy of coherence: S(diagonal of rho) - S(rho).

The post-measurement spectrum has a closed form.  With ct = cos(theta):

    xi_ij = [1 + (-1)^i sz*ct
               + (-1)^j sqrt((xx^2 cos^2 phi + yy^2 sin^2 phi) sin^2 theta
                             + (sz + (-1)^i zz*ct)^2)] / 4

At theta = 0 the measurement dephases the state in the z basis, so the
relative entropy of coherence is always an attainable candidate and hence an
upper bound for the deficit.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .errors import DomainError
from .xstate import diagonal_spectrum, spectrum


@dataclass(frozen=True)
class MeasurementAngles:
    """Bloch angles of the measured basis: theta in [0, pi], phi in [0, 2pi)."""

    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise DomainError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < 2.0 * math.pi:
            raise DomainError(f"phi must lie in [0, 2pi), got {self.phi}")


@dataclass(frozen=True)
class OptimizerConfig:
    """Grid-then-refine control for the deficit minimization."""

    grid_points: int = 64
    refine_tol: float = 1e-9
    max_refine_iters: int = 200

    def __post_init__(self):
        if self.grid_points < 8:
            raise DomainError(f"grid_points must be >= 8, got {self.grid_points}")
        if self.refine_tol <= 0.0:
            raise DomainError(f"refine_tol must be > 0, got {self.refine_tol}")
        if self.max_refine_iters < 1:
            raise DomainError(
                f"max_refine_iters must be >= 1, got {self.max_refine_iters}")


@dataclass(frozen=True)
class MeasureResult:
    """All measures at one parameter point."""

    deficit: float
    argmin: MeasurementAngles
    c_l1: float
    c_rel: float
    entropy_rho: float
    entropy_diag: float


def entropy(p):
    """Shannon/von Neumann entropy -sum p log2 p with 0 log 0 := 0.

    Components may undershoot 0 by at most 1e-12 (they are clamped); the
    components must sum to 1 within 1e-9.
    """
    p = np.asarray(p, dtype=float)
    if np.any(p < -1e-12):
        raise DomainError(f"negative probability beyond tolerance: {p.min()}")
    total = float(p.sum())
    if abs(total - 1.0) > 1e-9:
        raise DomainError(f"probabilities sum to {total}, not 1")
    p = np.clip(p, 0.0, None)
    mask = p > 0.0
    return float(-np.sum(p[mask] * np.log2(p[mask])))


def post_measurement_spectrum(state, angles):
    """The four closed-form eigenvalues xi_ij after measuring the second site.

    Order: (i, j) = (0,0), (0,1), (1,0), (1,1).  Nonnegative and summing
    to 1 up to rounding.
    """
    ct = math.cos(angles.theta)
    st2 = math.sin(angles.theta) ** 2
    cp2 = math.cos(angles.phi) ** 2
    sp2 = math.sin(angles.phi) ** 2
    out = []
    for sign_i in (1.0, -1.0):
        root = math.sqrt((state.xx ** 2 * cp2 + state.yy ** 2 * sp2) * st2
                         + (state.sz + sign_i * state.zz * ct) ** 2)
        for sign_j in (1.0, -1.0):
            value = (1.0 + sign_i * state.sz * ct + sign_j * root) / 4.0
            out.append(0.0 if -1e-12 <= value < 0.0 else value)
    return tuple(out)


def measured_entropy(state, theta, phi):
    """Entropy of the post-measurement spectrum; broadcasts over angle arrays."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    ct = np.cos(theta)
    st2 = np.sin(theta) ** 2
    cp2 = np.cos(phi) ** 2
    sp2 = np.sin(phi) ** 2
    out = np.zeros(np.broadcast(theta, phi).shape)
    for sign_i in (1.0, -1.0):
        root = np.sqrt((state.xx ** 2 * cp2 + state.yy ** 2 * sp2) * st2
                       + (state.sz + sign_i * state.zz * ct) ** 2)
        for sign_j in (1.0, -1.0):
            p = (1.0 + sign_i * state.sz * ct + sign_j * root) / 4.0
            safe = np.where(p > 0.0, p, 1.0)
            out -= np.where(p > 0.0, p * np.log2(safe), 0.0)
    return float(out) if out.ndim == 0 else out


def one_way_deficit(state, cfg=None):
    """Minimize S(measured rho) - S(rho) over the measurement angles.

    The search domain is the quarter box [0, pi/2]^2: the spectrum is
    invariant under phi -> pi - phi, phi -> -phi and theta -> pi - theta, so
    nothing outside the box can do better.  A coarse grid (which always
    contains the dephasing point theta = 0) is followed by Nelder-Mead
    refinement.  Ties within refine_tol are reported at the smallest
    (theta, phi) so repeated runs agree bit for bit.
    """
    cfg = cfg or OptimizerConfig()
    s_rho = entropy(spectrum(state).levels())

    half_pi = math.pi / 2.0
    thetas = np.linspace(0.0, half_pi, cfg.grid_points)
    phis = np.linspace(0.0, half_pi, cfg.grid_points)
    surface = measured_entropy(state, thetas[:, None], phis[None, :])
    i, j = np.unravel_index(int(np.argmin(surface)), surface.shape)
    start = np.array([thetas[i], phis[j]])

    def objective(x):
        return measured_entropy(state, x[0], x[1])

    result = optimize.minimize(
        objective, start, method="Nelder-Mead",
        bounds=[(0.0, half_pi), (0.0, half_pi)],
        options={"fatol": cfg.refine_tol, "xatol": cfg.refine_tol,
                 "maxiter": cfg.max_refine_iters})
    refined = np.clip(result.x, 0.0, half_pi)

    candidates = sorted({
        (0.0, 0.0),
        (float(start[0]), float(start[1])),
        (float(refined[0]), float(refined[1])),
    })
    values = [measured_entropy(state, t, p) for t, p in candidates]
    best = min(values)
    for (theta, phi), value in zip(candidates, values):
        if value <= best + cfg.refine_tol:
            argmin = MeasurementAngles(theta=theta, phi=phi)
            break

    deficit = best - s_rho
    if deficit < -1e-10:
        raise DomainError(
            f"deficit {deficit} below the provable lower bound 0; "
            "the input state is likely unphysical")
    return (max(deficit, 0.0), argmin)


def l1_coherence(state):
    """Absolute sum of the off-diagonal entries, (|xx-yy| + |xx+yy|)/2.

    For chain states xx >= |yy| holds and this reduces to xx itself.
    """
    return (abs(state.xx - state.yy) + abs(state.xx + state.yy)) / 2.0


def relative_entropy_coherence(state):
    """S(diagonal of rho) - S(rho), from the closed-form spectra."""
    return entropy(diagonal_spectrum(state)) - entropy(spectrum(state).levels())


def all_measures(state, cfg=None):
    """Bundle every measure at one state; deterministic for a fixed config."""
    cfg = cfg or OptimizerConfig()
    entropy_rho = entropy(spectrum(state).levels())
    entropy_diag = entropy(diagonal_spectrum(state))
    deficit, argmin = one_way_deficit(state, cfg)
    return MeasureResult(
        deficit=deficit,
        argmin=argmin,
        c_l1=l1_coherence(state),
        c_rel=entropy_diag - entropy_rho,
        entropy_rho=entropy_rho,
        entropy_diag=entropy_diag,
    )
