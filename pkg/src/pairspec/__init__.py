"""Photon-pair spectral propagation through cavity-material systems.

Pipeline: build a frequency grid and block dynamical matrix, assemble the
input covariance from a joint spectral amplitude, solve the regularized
Lyapunov equation for the all-time-integrated correlations, apply the
scattering map to obtain the output covariance, and extract spectra and
entanglement metrics.  A brute-force time-domain oracle certifies the
algebraic path on small instances.
"""

from .model import (
    BlockLayout,
    DynamicalMatrix,
    FrequencyGrid,
    SystemParams,
    build_dynamical_matrix,
    build_grid,
    mev_to_nm,
    nm_to_mev,
)
from .numkit import (
    SolveReport,
    determinant,
    linear_solve,
    log_determinant,
    matrix_exponential,
    solve_sylvester,
    svd,
)
from .observables import (
    PurityResult,
    SchmidtSpectrum,
    purity,
    schmidt,
    von_neumann_entropy,
    wigner,
)
from .oracle import IntegrationConfig, integrate_sylvester, quadrature_time_integral
from .scattering import (
    DEFAULT_EPSILON,
    PropagationResult,
    ScatteringMatrix,
    extract_output_jsa,
    propagate,
    scattering_matrix,
    time_integrated_covariance,
)
from .states import (
    CovarianceMatrix,
    JointSpectralAmplitude,
    JointSpectralIntensity,
    assemble_input_covariance,
    gaussian_jsa,
    jsa_from_jsi,
    jsi_of,
    load_jsa,
    load_jsi,
    save_jsa,
    save_jsi,
)

__version__ = "0.1.0"

__all__ = [
    "BlockLayout",
    "CovarianceMatrix",
    "DEFAULT_EPSILON",
    "DynamicalMatrix",
    "FrequencyGrid",
    "IntegrationConfig",
    "JointSpectralAmplitude",
    "JointSpectralIntensity",
    "PropagationResult",
    "PurityResult",
    "ScatteringMatrix",
    "SchmidtSpectrum",
    "SolveReport",
    "SystemParams",
    "assemble_input_covariance",
    "build_dynamical_matrix",
    "build_grid",
    "determinant",
    "extract_output_jsa",
    "gaussian_jsa",
    "integrate_sylvester",
    "jsa_from_jsi",
    "jsi_of",
    "linear_solve",
    "load_jsa",
    "load_jsi",
    "log_determinant",
    "matrix_exponential",
    "mev_to_nm",
    "nm_to_mev",
    "propagate",
    "purity",
    "quadrature_time_integral",
    "save_jsa",
    "save_jsi",
    "scattering_matrix",
    "schmidt",
    "solve_sylvester",
    "svd",
    "time_integrated_covariance",
    "von_neumann_entropy",
    "wigner",
]
