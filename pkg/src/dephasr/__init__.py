"""Dephasing dynamics of a two-level system in a thermal bosonic bath.

Computes one-time expectation values and two-time correlation functions of
system operators for an exactly solvable pure-dephasing model, both from
closed-form operator results and from second-order evolution equations,
and quantifies where the naive regression-theorem shortcut breaks down.
"""

from .model import (ModelParams, SpinOperator, DensityMatrix, TimeGrid,
                    pauli_product, expectation,
                    SIGMA_X, SIGMA_Y, SIGMA_Z, SIGMA_PLUS, SIGMA_MINUS,
                    IDENTITY, OPERATORS)
from .kernels import (NumericsError, KernelRangeError, SpectralDensity,
                      SpectralDensityKind, spectral_density, alpha_kernel,
                      beta_kernel, alpha_eff, KernelCache, build_cache,
                      cross_kernel, cross_kernel_integral, markovian_rate)
from .exact import (ExactContext, reduced_density, expectation_single,
                    cf_case1, cf_case2, cf_case3, cf_exact)
from .evolution import (Mode, SingleTimeTrajectory, CfTrajectory,
                        evolve_single, evolve_two_time, equal_time_value,
                        evolve_master, two_time_trajectory)

__version__ = "0.1.0"

__all__ = [
    "ModelParams", "SpinOperator", "DensityMatrix", "TimeGrid",
    "pauli_product", "expectation",
    "SIGMA_X", "SIGMA_Y", "SIGMA_Z", "SIGMA_PLUS", "SIGMA_MINUS",
    "IDENTITY", "OPERATORS",
    "NumericsError", "KernelRangeError", "SpectralDensity",
    "SpectralDensityKind", "spectral_density", "alpha_kernel", "beta_kernel",
    "alpha_eff", "KernelCache", "build_cache", "cross_kernel",
    "cross_kernel_integral", "markovian_rate",
    "ExactContext", "reduced_density", "expectation_single",
    "cf_case1", "cf_case2", "cf_case3", "cf_exact",
    "Mode", "SingleTimeTrajectory", "CfTrajectory", "evolve_single",
    "evolve_two_time", "equal_time_value", "evolve_master",
    "two_time_trajectory",
    "__version__",
]
