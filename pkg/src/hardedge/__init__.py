"""Simulation and analysis of the hard-edge beta-ensemble point process.

Submodules
----------
sde      Euler–Maruyama integration of the phase, bulk and Riccati diffusions.
special  Elliptic integrals and the large-deviation rate function.
oracle   Bidiagonal beta-Laguerre sampler and bisection eigensolver.
harness  Monte Carlo experiments with pass/fail thresholds.
io, cli  Report files and the ``hardedge`` command.
"""
from .errors import AccuracyError, DomainError, EigensolverError, HardEdgeError, IntegrationError
from .noise import NoiseDriver, derive_seed
from .oracle import (BidiagonalEnsemble, OracleSpectrum, oracle_count, oracle_counts, sample_beta_laguerre,
                     smallest_eigenvalues)
from .sde import (CountSample, DiffusionRun, IntegratorConfig, ModelParams, bess_counts, bess_increments,
                  count_from_alpha, count_from_phi, oscillation_samples, oscillatory_statistic, riccati_counts,
                  simulate_alpha, simulate_coupled_increment, simulate_phi, simulate_riccati, sine_counts)
from .special import (EllipticValue, RateEvaluation, ellip_E, ellip_K, elliptic_value, gamma_fn, gamma_inv,
                      rate_bess, rate_sine, script_H)

__version__ = "0.1.0"
