"""Quantum deficit and coherence measures of the transverse-field XY chain.

The package computes the thermodynamic-limit two-site reduced density matrix
of the anisotropic XY spin-1/2 chain at zero and finite temperature,
evaluates the one-way quantum deficit and two coherence measures on it, and
sweeps the field parameter to locate the quantum phase transition.
"""

from .correlators import (ChainParams, CorrelatorSet, FTable,
                          QuadratureConfig, build_f_table, correlator_set,
                          dispersion, f_coefficient, thermal_weight,
                          transverse_magnetization, xx_correlator,
                          yy_correlator, zz_correlator)
from .errors import (ConvergenceError, DomainError, EmptyInputError,
                     PhysicalityError, SizeError, SpacingError,
                     SweepPointError, UsageError, XYChainError)
from .measures import (MeasurementAngles, MeasureResult, OptimizerConfig,
                       all_measures, entropy, l1_coherence, measured_entropy,
                       one_way_deficit, post_measurement_spectrum,
                       relative_entropy_coherence)
from .oracle import (FiniteChainSpec, build_hamiltonian,
                     dense_measured_spectrum, grid_min_deficit,
                     thermal_two_site)
from .sweep import (CriticalPointEstimate, DerivativeRecord, SweepGrid,
                    SweepRecord, derivative_lambda, detect_critical_point,
                    evaluate_point, run_sweep, thermal_map)
from .xstate import (SpectrumPair, XState, assemble, diagonal_spectrum,
                     single_spin_reduced, spectrum)

__version__ = "0.1.0"
