"""Brute-force references: finite-chain diagonalization and dense checks.

Everything here exists to validate the closed-form routes independently:

* ``thermal_two_site`` diagonalizes a periodic chain of up to 12 spins and
  extracts the two-site correlators from the exact thermal state;
* ``dense_measured_spectrum`` applies the projective measurement to the
  explicit 4x4 matrix and diagonalizes the result;
* ``grid_min_deficit`` minimizes the measured entropy by exhaustive search.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.linalg import eigh

from .correlators import CorrelatorSet
from .errors import DomainError, PhysicalityError, SizeError
from .measures import entropy, measured_entropy
from .xstate import spectrum

_MAX_SITES = 12

_SX = np.array([[0.0, 1.0], [1.0, 0.0]])
_ISY = np.array([[0.0, 1.0], [-1.0, 0.0]])   # i * sigma_y, real
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]])
# two-site products are real even for sy sy (the two factors of i cancel)
_XX4 = np.kron(_SX, _SX)
_YY4 = -np.kron(_ISY, _ISY)
_ZZ4 = np.kron(_SZ, _SZ)
_ZI4 = np.kron(_SZ, np.eye(2))


@dataclass(frozen=True)
class FiniteChainSpec:
    """A periodic chain small enough for dense diagonalization (N <= 12)."""

    sites: int
    gamma: float
    lam: float
    temperature: float

    def __post_init__(self):
        if not 2 <= self.sites <= _MAX_SITES:
            raise SizeError(f"sites must lie in [2, {_MAX_SITES}], got {self.sites}")
        if not 0.0 <= self.gamma <= 1.0:
            raise DomainError(f"gamma must lie in [0, 1], got {self.gamma}")
        if self.lam < 0.0:
            raise DomainError(f"lambda must be >= 0, got {self.lam}")
        if self.temperature <= 0.0:
            raise DomainError(
                f"oracle temperature must be > 0, got {self.temperature}; "
                "near the degenerate regime the thermal state symmetrizes the "
                "parity sectors, so use a small kT instead of 0")


def build_hamiltonian(spec):
    """Dense periodic-chain Hamiltonian, real symmetric of dimension 2^N.

    H = -sum_j { lam/2 * [(1+gamma) sx_j sx_{j+1} + (1-gamma) sy_j sy_{j+1}]
                 + sz_j }  with site N identified with site 0.

    At N = 2 the periodic closure makes each pair interaction appear twice
    (bonds 0-1 and 1-0); that doubling is intentional and kept.
    """
    sites = spec.sites
    dim = 2 ** sites
    jx = 0.5 * spec.lam * (1.0 + spec.gamma)
    jy = 0.5 * spec.lam * (1.0 - spec.gamma)
    bond = sparse.csr_matrix(-(jx * _XX4 + jy * _YY4))
    h = sparse.csr_matrix((dim, dim))
    for j in range(sites - 1):
        h = h + sparse.kron(sparse.identity(2 ** j),
                            sparse.kron(bond, sparse.identity(2 ** (sites - j - 2))))
    # wrap-around bond couples site N-1 back to site 0
    middle = sparse.identity(2 ** (sites - 2))
    sx = sparse.csr_matrix(_SX)
    isy = sparse.csr_matrix(_ISY)
    h = h - jx * sparse.kron(sx, sparse.kron(middle, sx))
    h = h + jy * sparse.kron(isy, sparse.kron(middle, isy))
    dense = h.toarray()
    # field term is diagonal: sum_j sz_j = N - 2 * popcount(basis index)
    bits = (np.arange(dim)[:, None] >> np.arange(sites)) & 1
    dense[np.diag_indices(dim)] -= sites - 2.0 * bits.sum(axis=1)
    return dense


def _two_site_rdm(rho, sites, a, b):
    """Partial trace of a dense 2^N state down to sites (a, b), in that order."""
    t = rho.reshape((2,) * (2 * sites))
    rest = [k for k in range(sites) if k not in (a, b)]
    perm = ([a, b] + rest + [sites + a, sites + b] + [sites + k for k in rest])
    t = np.transpose(t, perm)
    block = t.reshape(4, 2 ** (sites - 2), 4, 2 ** (sites - 2))
    return np.einsum("imjm->ij", block)


def thermal_two_site(spec, n):
    """Two-site correlators of the exact thermal state at separation ``n``.

    The Boltzmann weights use beta/2: the closed-form integrals measure
    energy against the quasiparticle dispersion, which carries a global
    factor 1/2 relative to the couplings in ``build_hamiltonian``, and the
    finite-chain state must sit at the same energy scale to converge to
    them.  The returned values are averaged over the base site after
    asserting translation invariance.
    """
    if not 1 <= n <= spec.sites // 2:
        raise DomainError(
            f"separation must lie in [1, sites/2], got n={n} for N={spec.sites}")
    h = build_hamiltonian(spec)
    energies, vectors = eigh(h, driver="evd")
    beta_eff = 0.5 / spec.temperature
    weights = np.exp(-beta_eff * (energies - energies.min()))
    weights /= weights.sum()
    rho = (vectors * weights) @ vectors.T

    ops = {"sz": _ZI4, "xx": _XX4, "yy": _YY4, "zz": _ZZ4}
    samples = {name: [] for name in ops}
    for j in range(spec.sites):
        rdm = _two_site_rdm(rho, spec.sites, j, (j + n) % spec.sites)
        for name, op in ops.items():
            samples[name].append(float(np.trace(rdm @ op)))
    for name, vals in samples.items():
        if max(vals) - min(vals) > 1e-10:
            raise PhysicalityError(
                f"translation invariance violated for {name}: "
                f"spread {max(vals) - min(vals)}")
    mean = {name: float(np.mean(vals)) for name, vals in samples.items()}
    return CorrelatorSet(n=n, sz=mean["sz"], xx=mean["xx"],
                         yy=mean["yy"], zz=mean["zz"])


def measurement_unitary(angles):
    """The 2x2 basis rotation whose columns define the measured projectors."""
    half = angles.theta / 2.0
    c, s = math.cos(half), math.sin(half)
    phase = complex(math.cos(angles.phi), math.sin(angles.phi))
    return np.array([[c, phase * s], [-phase.conjugate() * s, c]])


def dense_measured_spectrum(state, angles):
    """Eigenvalues (ascending) of sum_i (I x Pi_i) rho (I x Pi_i).

    This is the independent check of the closed-form post-measurement
    spectrum: it builds the projectors explicitly and diagonalizes the 4x4
    result.
    """
    v = measurement_unitary(angles)
    rho = state.matrix().astype(complex)
    measured = np.zeros_like(rho)
    for i in (0, 1):
        proj = np.outer(v[:, i], v[:, i].conj())
        m = np.kron(np.eye(2), proj)
        measured += m @ rho @ m
    return np.sort(np.linalg.eigvalsh(measured))


def grid_min_deficit(state, resolution):
    """Exhaustive minimum of S(measured) - S(rho) on [0, pi/2]^2.

    Upper-bound oracle for the grid-plus-refinement optimizer; the refined
    result must never exceed this value by more than the refinement
    tolerance.
    """
    if resolution < 64:
        raise DomainError(f"resolution must be >= 64, got {resolution}")
    thetas = np.linspace(0.0, math.pi / 2.0, resolution)
    phis = np.linspace(0.0, math.pi / 2.0, resolution)
    surface = measured_entropy(state, thetas[:, None], phis[None, :])
    return float(surface.min()) - entropy(spectrum(state).levels())
