"""Parameter sweeps, lambda derivatives and critical-point location.

Grid points are independent, so they may be farmed out to worker processes;
results are always assembled in lexicographic grid order (gamma,
temperature, n, lambda) so identical configurations produce bit-identical
record lists whatever the worker count.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .correlators import (SEPARATION_CAP, ChainParams, QuadratureConfig,
                          correlator_set)
from .errors import (DomainError, EmptyInputError, SpacingError,
                     SweepPointError, XYChainError)
from .measures import OptimizerConfig, all_measures
from .xstate import assemble

_MEASURE_COLUMNS = {"deficit": "d_deficit", "c_l1": "d_c_l1", "c_rel": "d_c_rel"}


@dataclass(frozen=True)
class SweepGrid:
    """Axes of a zero- or finite-temperature sweep; lambda endpoint included."""

    lambda_start: float
    lambda_end: float
    lambda_step: float
    gammas: tuple
    temperatures: tuple = (0.0,)
    separations: tuple = (1,)

    def __post_init__(self):
        if self.lambda_step <= 0.0:
            raise DomainError(f"lambda_step must be > 0, got {self.lambda_step}")
        if self.lambda_start >= self.lambda_end:
            raise DomainError(
                f"lambda range must have start < end, got "
                f"[{self.lambda_start}, {self.lambda_end}]")
        if self.lambda_start < 0.0:
            raise DomainError(f"lambda must be >= 0, got {self.lambda_start}")
        for g in self.gammas:
            if not 0.0 <= g <= 1.0:
                raise DomainError(f"gamma must lie in [0, 1], got {g}")
        for t in self.temperatures:
            if t < 0.0:
                raise DomainError(f"temperature must be >= 0, got {t}")
        for n in self.separations:
            if not 1 <= n <= SEPARATION_CAP:
                raise DomainError(
                    f"separation must lie in [1, {SEPARATION_CAP}], got {n}")
        if not (self.gammas and self.temperatures and self.separations):
            raise DomainError("gammas, temperatures and separations must be non-empty")

    def lambda_values(self):
        count = int(math.floor(
            (self.lambda_end - self.lambda_start) / self.lambda_step + 1e-9)) + 1
        return [self.lambda_start + i * self.lambda_step for i in range(count)]


@dataclass(frozen=True)
class SweepRecord:
    """One evaluated grid point: correlators, measures and argmin angles."""

    gamma: float
    lam: float
    temperature: float
    n: int
    sz: float
    xx: float
    yy: float
    zz: float
    deficit: float
    theta_opt: float
    phi_opt: float
    c_l1: float
    c_rel: float


@dataclass(frozen=True)
class DerivativeRecord:
    """Finite-difference d/dlambda of each measure at one grid point."""

    gamma: float
    temperature: float
    n: int
    lam: float
    d_deficit: float
    d_c_l1: float
    d_c_rel: float


@dataclass(frozen=True)
class CriticalPointEstimate:
    """Location of the sharpest response of one measure along lambda."""

    lambda_c: float
    uncertainty: float
    measure_name: str
    derivative_peak: float


def evaluate_point(gamma, lam, temperature, n, quad=None, opt=None):
    """Correlators plus measures at a single parameter point."""
    stage = "parameter validation"
    try:
        params = ChainParams(gamma=gamma, lam=lam, temperature=temperature)
        stage = "correlators"
        corr = correlator_set(params, n, quad)
        stage = "state assembly"
        state = assemble(corr)
        stage = "measures"
        result = all_measures(state, opt)
    except XYChainError as exc:
        raise SweepPointError(
            f"gamma={gamma}, lambda={lam}, kT={temperature}, n={n}: "
            f"failed during {stage}: {exc}") from exc
    return SweepRecord(
        gamma=gamma, lam=lam, temperature=temperature, n=n,
        sz=corr.sz, xx=corr.xx, yy=corr.yy, zz=corr.zz,
        deficit=result.deficit,
        theta_opt=result.argmin.theta, phi_opt=result.argmin.phi,
        c_l1=result.c_l1, c_rel=result.c_rel)


def _evaluate_args(args):
    return evaluate_point(*args)


def _evaluate_many(points, quad, opt, workers):
    args = [(g, lam, t, n, quad, opt) for (g, t, n, lam) in points]
    if workers <= 1:
        return [_evaluate_args(a) for a in args]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        chunk = max(1, len(args) // (4 * workers))
        return list(pool.map(_evaluate_args, args, chunksize=chunk))


def run_sweep(grid, quad=None, opt=None, workers=1):
    """Evaluate every grid point, ordered by (gamma, temperature, n, lambda)."""
    quad = quad or QuadratureConfig()
    opt = opt or OptimizerConfig()
    points = [(g, t, n, lam)
              for g in sorted(grid.gammas)
              for t in sorted(grid.temperatures)
              for n in sorted(grid.separations)
              for lam in grid.lambda_values()]
    return _evaluate_many(points, quad, opt, workers)


def thermal_map(gamma, lambdas, temperatures, n, quad=None, opt=None, workers=1):
    """Records over a lambda x kT grid at fixed gamma and separation.

    All temperatures must be strictly positive in this mode.
    """
    quad = quad or QuadratureConfig()
    opt = opt or OptimizerConfig()
    for t in temperatures:
        if t <= 0.0:
            raise DomainError(f"thermal map requires kT > 0, got {t}")
    points = [(gamma, t, n, lam)
              for t in sorted(temperatures)
              for lam in sorted(lambdas)]
    return _evaluate_many(points, quad, opt, workers)


def derivative_lambda(records):
    """d/dlambda of each measure: central differences inside, one-sided at ends.

    The records must share (gamma, temperature, n) and sit on a uniform
    lambda grid.
    """
    if not records:
        raise EmptyInputError("no records to differentiate")
    keys = {(r.gamma, r.temperature, r.n) for r in records}
    if len(keys) > 1:
        raise DomainError(f"records mix several (gamma, kT, n) groups: {sorted(keys)}")
    ordered = sorted(records, key=lambda r: r.lam)
    if len(ordered) < 2:
        raise SpacingError("need at least two lambda points for a derivative")
    lams = np.array([r.lam for r in ordered])
    steps = np.diff(lams)
    if float(np.max(np.abs(steps - steps[0]))) > 1e-12:
        raise SpacingError(
            f"lambda grid is not uniform: step spread {np.ptp(steps)}")
    h = float(steps[0])
    slopes = {col: np.gradient(np.array([getattr(r, name) for r in ordered]), h)
              for name, col in _MEASURE_COLUMNS.items()}
    gamma, temperature, n = next(iter(keys))
    return [DerivativeRecord(gamma=gamma, temperature=temperature, n=n,
                             lam=float(lams[k]),
                             d_deficit=float(slopes["d_deficit"][k]),
                             d_c_l1=float(slopes["d_c_l1"][k]),
                             d_c_rel=float(slopes["d_c_rel"][k]))
            for k in range(len(ordered))]


def detect_critical_point(derivatives, measure="deficit"):
    """Lambda of the largest |d measure / d lambda|; ties go to smaller lambda."""
    if not derivatives:
        raise EmptyInputError("no derivative records")
    try:
        column = _MEASURE_COLUMNS[measure]
    except KeyError:
        raise DomainError(
            f"unknown measure {measure!r}; choose from {sorted(_MEASURE_COLUMNS)}"
        ) from None
    ordered = sorted(derivatives, key=lambda r: r.lam)
    magnitudes = [abs(getattr(r, column)) for r in ordered]
    k = int(np.argmax(magnitudes))
    step = ordered[1].lam - ordered[0].lam if len(ordered) > 1 else 0.0
    return CriticalPointEstimate(
        lambda_c=ordered[k].lam,
        uncertainty=abs(step),
        measure_name=measure,
        derivative_peak=getattr(ordered[k], column))
