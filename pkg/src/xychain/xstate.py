"""Two-site X-form density matrix and its exact spectra.

With the four expectation values (sz, xx, yy, zz) the two-site reduced state
in the computational basis reads

    rho = 1/4 * [[1+2sz+zz,   0,       0,     xx-yy],
                 [   0,     1-zz,    xx+yy,     0  ],
                 [   0,     xx+yy,   1-zz,      0  ],
                 [ xx-yy,     0,       0,   1-2sz+zz]]

Only the main diagonal and the anti-diagonal are populated, so the spectrum
splits into two 2x2 blocks with closed-form eigenvalues.  The expectation
values are the single source of truth; the 4x4 matrix is derived on demand
so inconsistent matrices cannot arise.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import PhysicalityError

# Eigenvalues inside this window are quadrature noise and are clamped to 0;
# anything below -1e-10 is treated as genuinely unphysical input.
_CLAMP_FLOOR = -1e-12
_PSD_FLOOR = -1e-10


@dataclass(frozen=True)
class XState:
    """Immutable X-form two-site state, stored as its expectation values."""

    sz: float
    xx: float
    yy: float
    zz: float

    def matrix(self):
        """The derived 4x4 density matrix (real symmetric, trace 1)."""
        sz, xx, yy, zz = self.sz, self.xx, self.yy, self.zz
        return 0.25 * np.array([
            [1.0 + 2.0 * sz + zz, 0.0, 0.0, xx - yy],
            [0.0, 1.0 - zz, xx + yy, 0.0],
            [0.0, xx + yy, 1.0 - zz, 0.0],
            [xx - yy, 0.0, 0.0, 1.0 - 2.0 * sz + zz],
        ])


@dataclass(frozen=True)
class SpectrumPair:
    """Eigenvalues of the outer (eta) and inner (xi) 2x2 blocks."""

    eta: tuple
    xi: tuple

    def levels(self):
        """All four eigenvalues as a flat tuple (eta0, eta1, xi0, xi1)."""
        return self.eta + self.xi


def _clamp(value):
    if _CLAMP_FLOOR <= value < 0.0:
        return 0.0
    return value


def assemble(corr):
    """Build the XState for a correlator set, rejecting unphysical input."""
    state = XState(sz=corr.sz, xx=corr.xx, yy=corr.yy, zz=corr.zz)
    low = min(_raw_levels(state))
    if low < _PSD_FLOOR:
        raise PhysicalityError(
            f"two-site state has eigenvalue {low} < {_PSD_FLOOR} "
            f"(sz={corr.sz}, xx={corr.xx}, yy={corr.yy}, zz={corr.zz})")
    return state


def _raw_levels(state):
    root = math.sqrt(4.0 * state.sz ** 2 + (state.xx - state.yy) ** 2)
    return (
        (1.0 + state.zz + root) / 4.0,
        (1.0 + state.zz - root) / 4.0,
        (1.0 - state.zz + (state.xx + state.yy)) / 4.0,
        (1.0 - state.zz - (state.xx + state.yy)) / 4.0,
    )


def spectrum(state):
    """Closed-form eigenvalues; equals a dense eigensolve of ``matrix()``."""
    eta0, eta1, xi0, xi1 = (_clamp(v) for v in _raw_levels(state))
    return SpectrumPair(eta=(eta0, eta1), xi=(xi0, xi1))


def diagonal_spectrum(state):
    """Main diagonal of the derived matrix: (zeta0, zeta1, eps, eps)."""
    zeta0 = _clamp((1.0 + state.zz + 2.0 * state.sz) / 4.0)
    zeta1 = _clamp((1.0 + state.zz - 2.0 * state.sz) / 4.0)
    eps = _clamp((1.0 - state.zz) / 4.0)
    return (zeta0, zeta1, eps, eps)


def single_spin_reduced(state):
    """Occupations of the one-site marginal, diag((1+sz)/2, (1-sz)/2).

    Both sites share the same marginal because the X form is symmetric under
    exchanging them.
    """
    return ((1.0 + state.sz) / 2.0, (1.0 - state.sz) / 2.0)
