"""Core pipeline: time-integrated covariance, scattering matrix, and the
input->output covariance map.

Everything is evaluated at a real regularization epsilon > 0: the generator
W is shifted to W - eps*I in the Lyapunov solve, in the scattering matrix,
and in the output assembly, so the algebraic identity between the full and
reduced forms of the output map holds exactly at the working epsilon.
"""

from dataclasses import dataclass, field

import numpy as np

from . import numkit
from .errors import NearSingularPencil
from .model import DynamicalMatrix
from .states import CovarianceMatrix, JointSpectralAmplitude, jsi_of  # noqa: F401

# Default regularization (meV); every solve records whether it fired.
DEFAULT_EPSILON = 1e-3


@dataclass
class ScatteringMatrix:
    """Asymptotic mode map S = (W^dag - z)(W - z)^(-1)."""

    matrix: np.ndarray
    z_used: complex
    residual: float


@dataclass
class PropagationResult:
    theta_out: CovarianceMatrix
    theta_tilde_in: CovarianceMatrix
    scattering: ScatteringMatrix
    epsilon_used: float
    regularized: bool
    identity_gap: float
    hermiticity_defect: float
    reports: dict = field(default_factory=dict)


def _raw(mat_like):
    if isinstance(mat_like, (DynamicalMatrix, CovarianceMatrix)):
        return mat_like.matrix
    return np.asarray(mat_like, dtype=np.complex128)


def _shifted(W, eps):
    Wm = _raw(W)
    return Wm - eps * np.eye(Wm.shape[0])


def time_integrated_covariance(W, theta_in, epsilon, fallback_epsilon=DEFAULT_EPSILON):
    """Solve (W - eps) X + X (W - eps)^dag = -Theta_in.

    X is the all-time integral of the input correlations evaluated at the
    regularized Laplace point.  If epsilon = 0 hits a singular pencil (the
    generic case: W's spectrum is near-imaginary), the solve automatically
    retries at ``fallback_epsilon`` and flags the report as regularized.

    Returns (X, SolveReport); X is a CovarianceMatrix when theta_in is one.
    """
    theta_mat = _raw(theta_in)

    def attempt(eps):
        A = _shifted(W, eps)
        return numkit.solve_sylvester(A, A.conj().T, theta_mat)

    regularized = False
    try:
        X, report = attempt(epsilon)
    except NearSingularPencil:
        if epsilon != 0.0 or fallback_epsilon <= 0.0:
            raise
        X, report = attempt(fallback_epsilon)
        regularized = True
    report.regularized = regularized

    if isinstance(theta_in, CovarianceMatrix):
        X = CovarianceMatrix(matrix=X, layout=theta_in.layout, grid=theta_in.grid)
    return X, report


def scattering_matrix(W, z):
    """S = (W^dag - z)(W - z)^(-1), solved on the transposed system.

    Raises SingularMatrix when (W - z) is singular at the requested z; the
    caller is expected to retry with an epsilon shift.
    """
    Wm = _raw(W)
    A = Wm - z * np.eye(Wm.shape[0])
    # S A = A^dag  <=>  A^T S^T = conj(A)
    St, report = numkit.linear_solve(A.T, A.conj())
    S = St.T
    residual = float(np.linalg.norm(S @ A - A.conj().T) / max(np.linalg.norm(Wm), 1e-300))
    return ScatteringMatrix(matrix=S, z_used=complex(z), residual=residual), report


def propagate(theta_in, W, epsilon=DEFAULT_EPSILON, fallback_epsilon=DEFAULT_EPSILON):
    """Map the input covariance to the output covariance.

    Output assembly (all operators at the shared regularized shift
    A = W - eps):

        Theta_out = X A^dag + A X + (S X S^dag) A + A^dag (S X S^dag) + Theta_in

    with X the time-integrated input covariance and S the scattering matrix
    at z = eps.  The algebraically reduced form
    Theta_out = (S X S^dag) A + A^dag (S X S^dag) follows by substituting the
    Lyapunov identity; their relative gap is recorded as a diagnostic (it
    measures nothing but the solver residual).
    """
    theta_mat = _raw(theta_in)

    eff_eps = epsilon
    regularized = False
    try:
        X, lyap_report = time_integrated_covariance(W, theta_mat, eff_eps, fallback_epsilon=0.0)
    except NearSingularPencil:
        if epsilon != 0.0 or fallback_epsilon <= 0.0:
            raise
        eff_eps = fallback_epsilon
        X, lyap_report = time_integrated_covariance(W, theta_mat, eff_eps, fallback_epsilon=0.0)
        regularized = True
    lyap_report.regularized = regularized

    A = _shifted(W, eff_eps)
    smat, scat_report = scattering_matrix(W, eff_eps)
    S = smat.matrix

    G = S @ X @ S.conj().T
    cross = G @ A + A.conj().T @ G
    theta_out = X @ A.conj().T + A @ X + cross + theta_mat
    gap_norm = np.linalg.norm(theta_out - cross)
    out_norm = np.linalg.norm(theta_out)
    identity_gap = float(gap_norm / out_norm) if out_norm > 0 else 0.0
    herm = float(
        np.linalg.norm(theta_out - theta_out.conj().T) / out_norm if out_norm > 0 else 0.0
    )

    layout = getattr(theta_in, "layout", None)
    grid = getattr(theta_in, "grid", None)
    if layout is None and isinstance(W, DynamicalMatrix):
        layout = W.layout
        grid = W.grid
    if layout is not None:
        theta_out_obj = CovarianceMatrix(matrix=theta_out, layout=layout, grid=grid)
        theta_tilde_obj = CovarianceMatrix(matrix=X, layout=layout, grid=grid)
    else:
        theta_out_obj = theta_out
        theta_tilde_obj = X

    return PropagationResult(
        theta_out=theta_out_obj,
        theta_tilde_in=theta_tilde_obj,
        scattering=smat,
        epsilon_used=float(eff_eps),
        regularized=regularized,
        identity_gap=identity_gap,
        hermiticity_defect=herm,
        reports={"lyapunov": lyap_report, "scattering": scat_report},
    )


def extract_output_jsa(theta):
    """Signal-idler block of a covariance matrix as a (raw, unnormalized)
    joint spectral amplitude."""
    if not isinstance(theta, CovarianceMatrix):
        raise TypeError("extract_output_jsa needs a CovarianceMatrix with block layout")
    if theta.grid is None:
        raise ValueError("covariance matrix carries no frequency grid")
    block = theta.matrix[theta.layout.signal, theta.layout.idler]
    return JointSpectralAmplitude(theta.grid, block)
