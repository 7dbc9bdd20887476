"""Shared test utilities: random physical X states and angle sampling."""

import numpy as np

from xychain import XState


def random_xstate(rng):
    """Rejection-sample a physical X state (all eigenvalues >= 0)."""
    while True:
        sz, xx, yy, zz = rng.uniform(-1.0, 1.0, size=4)
        root = np.sqrt(4.0 * sz * sz + (xx - yy) ** 2)
        levels = ((1 + zz + root) / 4, (1 + zz - root) / 4,
                  (1 - zz + xx + yy) / 4, (1 - zz - xx - yy) / 4)
        if min(levels) >= 0.0:
            return XState(sz=sz, xx=xx, yy=yy, zz=zz)


def random_angles(rng, theta_max=np.pi, phi_max=2.0 * np.pi):
    theta = rng.uniform(0.0, theta_max)
    phi = rng.uniform(0.0, phi_max)
    # keep phi strictly below the open upper bound
    return theta, min(phi, np.nextafter(phi_max, 0.0))
