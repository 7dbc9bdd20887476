"""Thermodynamic-limit correlators of the anisotropic XY chain in a transverse field.

The chain is parametrized by the anisotropy ``gamma`` in [0, 1] (``gamma=0``
is the XX chain, ``gamma=1`` the transverse-field Ising chain) and by
``lambda``, the inverse strength of the transverse field.  In the infinite
chain every two-site quantity reduces to one-dimensional integrals over the
momentum-like angle ``phi`` in [0, pi] plus small Toeplitz determinants built
from the one-body coefficients ``F_k``:

    omega(phi) = sqrt((gamma*lam*sin phi)^2 + (1 + lam*cos phi)^2) / 2
    <sz>       = -(1/2pi) Int_0^pi (1 + lam*cos phi) * tanh(beta*omega)/omega dphi
    F_k        =  (1/2pi) Int_0^pi tanh(beta*omega)/omega
                    * [cos(k phi)(1 + lam*cos phi) - gamma*lam*sin(k phi) sin phi] dphi
    <sx0 sxn>  = det of the n x n Toeplitz matrix with entry(i, j) = F_{i-j-1}
    <sy0 syn>  = det of the n x n Toeplitz matrix with entry(i, j) = F_{i-j+1}
    <sz0 szn>  = <sz>^2 - F_n * F_{-n}

``temperature == 0`` is an exact code path that substitutes ``tanh -> 1``;
``beta = 1/temperature`` is only ever formed at positive temperature.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre

from .errors import ConvergenceError, DomainError, PhysicalityError

# Toeplitz conditioning and oscillatory quadrature cost both grow with the
# separation, so the library caps F indices at 64 and separations at 50.
F_INDEX_CAP = 64
SEPARATION_CAP = 50


@dataclass(frozen=True)
class ChainParams:
    """Physical point of the chain.

    gamma       anisotropy in [0, 1]
    lam         inverse transverse-field strength, >= 0
    temperature kT >= 0; exactly 0 selects the zero-temperature limit
    """

    gamma: float
    lam: float
    temperature: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 1.0:
            raise DomainError(f"gamma must lie in [0, 1], got {self.gamma}")
        if self.lam < 0.0:
            raise DomainError(f"lambda must be >= 0, got {self.lam}")
        if self.temperature < 0.0:
            raise DomainError(f"temperature must be >= 0, got {self.temperature}")


@dataclass(frozen=True)
class QuadratureConfig:
    """Node-doubling control for the phi integrals."""

    initial_nodes: int = 128
    max_doublings: int = 6
    abs_tol: float = 1e-10

    def __post_init__(self):
        if self.initial_nodes < 16:
            raise DomainError(f"initial_nodes must be >= 16, got {self.initial_nodes}")
        if self.max_doublings < 1:
            raise DomainError(f"max_doublings must be >= 1, got {self.max_doublings}")
        if not 0.0 < self.abs_tol <= 1e-6:
            raise DomainError(f"abs_tol must lie in (0, 1e-6], got {self.abs_tol}")


@dataclass(frozen=True)
class FTable:
    """Cache of the F_k coefficients for k in [-n_max, n_max].

    Immutable after construction; safe to share between workers.
    """

    n_max: int
    values: dict

    def __post_init__(self):
        for k in range(-self.n_max, self.n_max + 1):
            if k not in self.values:
                raise DomainError(f"F table missing index {k}")

    def __getitem__(self, k):
        try:
            return self.values[k]
        except KeyError:
            raise IndexError(f"F_{k} not tabulated (n_max={self.n_max})") from None


@dataclass(frozen=True)
class CorrelatorSet:
    """The four expectation values that fix the two-site reduced state."""

    n: int
    sz: float
    xx: float
    yy: float
    zz: float


@lru_cache(maxsize=64)
def _gauss_rule(nodes):
    x, w = roots_legendre(nodes)
    return x, w


def _composite_gauss(integrand, nodes, panels):
    """Gauss-Legendre sum over the given panels, `nodes` points per panel."""
    x, w = _gauss_rule(nodes)
    total = 0.0
    for lo, hi in panels:
        half = 0.5 * (hi - lo)
        total += half * float(np.dot(w, integrand(half * (x + 1.0) + lo)))
    return total


def _integrate(integrand, quad, min_nodes=0, breakpoints=(), label="integral"):
    """Integrate over [0, pi], doubling nodes until the value is stable.

    The rule is open (no endpoint nodes), so integrable endpoint behavior is
    never evaluated at the singular point itself.  Interior breakpoints split
    the interval into smooth panels.
    """
    edges = [0.0] + [p for p in breakpoints if 0.0 < p < math.pi] + [math.pi]
    panels = tuple(zip(edges[:-1], edges[1:]))
    nodes = max(quad.initial_nodes, min_nodes)
    prev = _composite_gauss(integrand, nodes, panels)
    for _ in range(quad.max_doublings):
        nodes *= 2
        cur = _composite_gauss(integrand, nodes, panels)
        if abs(cur - prev) < quad.abs_tol:
            return cur
        prev = cur
    raise ConvergenceError(
        f"{label} did not stabilize to {quad.abs_tol} within "
        f"{quad.max_doublings} doublings ({nodes} nodes)"
    )


def dispersion(params, phi):
    """Quasiparticle energy omega(phi) >= 0; accepts scalars or arrays."""
    return np.hypot(params.gamma * params.lam * np.sin(phi),
                    1.0 + params.lam * np.cos(phi)) / 2.0


def thermal_weight(params, omega):
    """The kernel tanh(beta*omega)/omega shared by <sz> and the F_k.

    At zero temperature this is 1/omega exactly.  At positive temperature the
    omega -> 0 limit is beta, which is returned at omega == 0.  Negative
    omega is a domain error.
    """
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0.0):
        raise DomainError("omega must be >= 0")
    if params.temperature == 0.0:
        with np.errstate(divide="ignore"):
            out = 1.0 / omega
    else:
        beta = 1.0 / params.temperature
        safe = np.where(omega == 0.0, 1.0, omega)
        out = np.where(omega == 0.0, beta, np.tanh(beta * safe) / safe)
    return float(out) if out.ndim == 0 else out


def _kernel(params, phi):
    return thermal_weight(params, dispersion(params, phi))


def _interior_breakpoints(params):
    # At T=0 the XX-chain kernel (1/omega with omega = |1+lam*cos phi|/2)
    # jumps where the field term changes sign; splitting there keeps each
    # panel smooth.  For gamma > 0 or T > 0 the integrand is smooth.
    if params.temperature == 0.0 and params.gamma == 0.0 and params.lam > 1.0:
        return (math.acos(-1.0 / params.lam),)
    return ()


def transverse_magnetization(params, quad=None):
    """Single-site <sz> of the thermal state, by adaptive quadrature."""
    quad = quad or QuadratureConfig()

    def integrand(phi):
        return (1.0 + params.lam * np.cos(phi)) * _kernel(params, phi)

    value = _integrate(integrand, quad,
                       breakpoints=_interior_breakpoints(params),
                       label="transverse magnetization")
    return -value / (2.0 * math.pi)


def f_coefficient(params, k, quad=None):
    """One-body coefficient F_k feeding the Toeplitz determinants.

    The integrand oscillates like cos(k phi), so the starting node count
    grows linearly with |k|.
    """
    quad = quad or QuadratureConfig()
    if abs(k) > F_INDEX_CAP:
        raise DomainError(f"|k| must be <= {F_INDEX_CAP}, got {k}")

    def integrand(phi):
        return _kernel(params, phi) * (
            np.cos(k * phi) * (1.0 + params.lam * np.cos(phi))
            - params.gamma * params.lam * np.sin(k * phi) * np.sin(phi))

    value = _integrate(integrand, quad, min_nodes=32 * abs(k),
                       breakpoints=_interior_breakpoints(params),
                       label=f"F_{k}")
    return value / (2.0 * math.pi)


def build_f_table(params, n_max, quad=None):
    """Tabulate F_k for every k in [-n_max, n_max]."""
    if not 1 <= n_max <= F_INDEX_CAP:
        raise DomainError(f"n_max must lie in [1, {F_INDEX_CAP}], got {n_max}")
    quad = quad or QuadratureConfig()
    values = {k: f_coefficient(params, k, quad)
              for k in range(-n_max, n_max + 1)}
    return FTable(n_max=n_max, values=values)


def _toeplitz(ftable, n, offset):
    return np.array([[ftable[i - j + offset] for j in range(n)]
                     for i in range(n)])


def xx_correlator(ftable, n):
    """<sx0 sxn> as the determinant of the Toeplitz matrix F_{i-j-1}.

    Computed by a dense LU factorization with partial pivoting; at the
    separations this library supports (n <= 50) that is both cheap and more
    robust than Toeplitz-specific recursions.
    """
    if n < 1:
        raise DomainError(f"separation must be >= 1, got {n}")
    return float(np.linalg.det(_toeplitz(ftable, n, -1)))


def yy_correlator(ftable, n):
    """<sy0 syn> as the determinant of the Toeplitz matrix F_{i-j+1}."""
    if n < 1:
        raise DomainError(f"separation must be >= 1, got {n}")
    return float(np.linalg.det(_toeplitz(ftable, n, +1)))


def zz_correlator(ftable, sz, n):
    """<sz0 szn> = <sz>^2 - F_n F_{-n}."""
    if n < 1:
        raise DomainError(f"separation must be >= 1, got {n}")
    return float(sz * sz - ftable[n] * ftable[-n])


def correlator_set(params, n, quad=None):
    """All four expectation values at separation ``n``, mutually consistent.

    Deterministic for fixed inputs and quadrature configuration.
    """
    if not 1 <= n <= SEPARATION_CAP:
        raise DomainError(f"separation must lie in [1, {SEPARATION_CAP}], got {n}")
    quad = quad or QuadratureConfig()
    ftable = build_f_table(params, n, quad)
    sz = transverse_magnetization(params, quad)
    corr = CorrelatorSet(
        n=n,
        sz=sz,
        xx=xx_correlator(ftable, n),
        yy=yy_correlator(ftable, n),
        zz=zz_correlator(ftable, sz, n),
    )
    bound = 1.0 + 1e-9
    for name in ("sz", "xx", "yy", "zz"):
        if abs(getattr(corr, name)) > bound:
            raise PhysicalityError(
                f"{name}={getattr(corr, name)} out of [-1, 1] at "
                f"gamma={params.gamma}, lambda={params.lam}, kT={params.temperature}")
    return corr
