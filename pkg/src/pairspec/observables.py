"""State metrics: Schmidt spectrum, von Neumann entropy, Wigner function, purity."""

from dataclasses import dataclass

import numpy as np

from . import numkit
from .errors import DegenerateState, NonPositiveDeterminant, SingularCovariance
from .states import CovarianceMatrix, JointSpectralAmplitude


@dataclass
class SchmidtSpectrum:
    """Nonincreasing Schmidt coefficients r_n with sum r_n^2 = 1."""

    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)


@dataclass
class PurityResult:
    """mu = 1 / sqrt|det Theta|, with the log-determinant kept alongside
    since det itself under/overflows beyond dim ~100."""

    mu: float
    log_abs_det: float


def schmidt(jsa, use_magnitude=False):
    """Schmidt coefficients of the amplitude matrix, renormalized so the
    squared coefficients sum to one (the raw amplitude need not be
    normalized).

    use_magnitude=True decomposes |F| instead of the complex F, i.e. the
    intensity-level variant.
    """
    if isinstance(jsa, JointSpectralAmplitude):
        F = jsa.values
    else:
        F = np.asarray(jsa, dtype=np.complex128)
    if use_magnitude:
        F = np.abs(F)
    _, s, _ = numkit.svd(F)
    total = np.sum(s**2)
    if total <= 0.0:
        raise DegenerateState("all-zero amplitude has no Schmidt spectrum")
    return SchmidtSpectrum(values=s / np.sqrt(total))


def von_neumann_entropy(spectrum):
    """S = -sum r_n^2 ln r_n^2 in nats, with 0 ln 0 = 0."""
    if isinstance(spectrum, SchmidtSpectrum):
        r = spectrum.values
    else:
        r = np.asarray(spectrum, dtype=np.float64)
    p = r**2
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def wigner(theta, alpha, mean=None):
    """Gaussian phase-space density at point alpha:

        W(alpha) = exp(-1/2 (a-m)^T Theta^(-1) (a-m)) / ((2 pi)^(d/2) sqrt|Theta|)

    with d the covariance dimension (d/2 modes).  mean defaults to zero;
    local displacements do not change the entanglement structure.
    """
    mat = theta.matrix if isinstance(theta, CovarianceMatrix) else np.asarray(theta)
    mat = np.asarray(mat, dtype=np.complex128)
    d = mat.shape[0]
    alpha = np.asarray(alpha, dtype=np.complex128).reshape(d)
    x = alpha if mean is None else alpha - np.asarray(mean, dtype=np.complex128).reshape(d)

    log_abs, _ = numkit.log_determinant(mat)
    if not np.isfinite(log_abs):
        raise SingularCovariance("covariance matrix is singular")
    try:
        y, _ = numkit.linear_solve(mat, x.reshape(d, 1))
    except Exception as exc:
        raise SingularCovariance(f"covariance solve failed: {exc}") from exc
    quad = complex(x @ y[:, 0])
    value = np.exp(-0.5 * quad) / ((2.0 * np.pi) ** (d / 2.0) * np.exp(0.5 * log_abs))
    return float(np.real(value))


def purity(theta, det_tol=1e-300):
    """mu = 1 / sqrt|det Theta| via the log-determinant.

    The determinant magnitude is used as printed in the defining formula; a
    complex covariance can carry a benign phase after Hermitization.  Note
    the formula is not rescaled to any vacuum convention, so e.g.
    Theta = I/2 gives mu = 2^(d/2); Theta = I gives exactly 1.
    """
    mat = theta.matrix if isinstance(theta, CovarianceMatrix) else np.asarray(theta)
    mat = np.asarray(mat, dtype=np.complex128)
    log_abs, phase = numkit.log_determinant(mat)
    if not np.isfinite(log_abs) or np.exp(log_abs) < det_tol:
        raise NonPositiveDeterminant(
            f"|det Theta| = {np.exp(log_abs) if np.isfinite(log_abs) else 0.0:.3e} "
            "is not positive within tolerance",
            determinant=complex(np.exp(log_abs) * np.exp(1j * phase)) if np.isfinite(log_abs) else 0j,
        )
    return PurityResult(mu=float(np.exp(-0.5 * log_abs)), log_abs_det=float(log_abs))
