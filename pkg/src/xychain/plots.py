"""Render sweep and thermal-map results to figure files.

The CSV emitted by the CLI stays the primary output; these helpers draw the
companion figures (measure curves with their lambda derivatives, and
temperature-field maps) next to it.  Rendering is file-only (Agg backend).
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_MEASURE_STYLE = {
    "c_l1": dict(color="tab:blue", linestyle="-", label="l1-norm coherence"),
    "c_rel": dict(color="tab:red", linestyle="-.", label="relative entropy of coherence"),
    "deficit": dict(color="tab:green", linestyle="--", label="one-way quantum deficit"),
}


def sweep_figure(records, path, derivatives=None):
    """Measures versus lambda, one column per separation.

    When derivative records are given a second row shows d/dlambda of each
    measure on the same lambda axis.
    """
    seps = sorted({r.n for r in records})
    nrows = 2 if derivatives else 1
    fig, axes = plt.subplots(nrows, len(seps), squeeze=False,
                             figsize=(4.2 * len(seps), 3.4 * nrows),
                             sharex="col")
    for col, n in enumerate(seps):
        rows = sorted((r for r in records if r.n == n), key=lambda r: r.lam)
        lams = [r.lam for r in rows]
        ax = axes[0][col]
        for name, style in _MEASURE_STYLE.items():
            ax.plot(lams, [getattr(r, name) for r in rows], **style)
        ax.set_title(f"n = {n}")
        ax.set_ylabel("measure (bits)" if col == 0 else "")
        if derivatives:
            dax = axes[1][col]
            drows = sorted((d for d in derivatives if d.n == n),
                           key=lambda d: d.lam)
            for name, style in _MEASURE_STYLE.items():
                dax.plot([d.lam for d in drows],
                         [getattr(d, "d_" + name) for d in drows], **style)
            dax.set_ylabel("d/d$\\lambda$" if col == 0 else "")
            dax.set_xlabel("$\\lambda$")
        else:
            ax.set_xlabel("$\\lambda$")
    axes[0][0].legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def thermal_map_figure(records, path):
    """Heat maps of the three measures over the (lambda, kT) grid."""
    lams = sorted({r.lam for r in records})
    kts = sorted({r.temperature for r in records})
    index = {(r.lam, r.temperature): r for r in records}
    fig, axes = plt.subplots(1, 3, figsize=(12.6, 3.6))
    for ax, name in zip(axes, ("c_rel", "c_l1", "deficit")):
        grid = np.array([[getattr(index[(lam, kt)], name) for lam in lams]
                         for kt in kts])
        mesh = ax.pcolormesh(lams, kts, grid, shading="nearest", cmap="viridis")
        fig.colorbar(mesh, ax=ax)
        ax.set_title(_MEASURE_STYLE[name]["label"], fontsize=9)
        ax.set_xlabel("$\\lambda$")
    axes[0].set_ylabel("$kT$")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
