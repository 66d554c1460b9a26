"""Input checks shared by the functional API and the estimators."""
import numpy as np

from . import _tolerances as tol
from . import qmat
from .exceptions import InvalidState


def check_density_matrix(rho, dim=None):
    """Return ``rho`` as a complex array after checking it is a valid state."""
    try:
        rho = qmat.as_matrix(rho)
    except ValueError as exc:
        raise InvalidState(str(exc)) from exc
    if rho.ndim != 2:
        raise InvalidState(f"expected a single matrix, got shape {rho.shape}")
    if dim is not None and rho.shape != (dim, dim):
        raise InvalidState(f"expected a {dim}x{dim} density matrix, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise InvalidState("density matrix has non-finite entries")
    if qmat.hermiticity_error(rho) > tol.HERMITIAN_ATOL:
        raise InvalidState("density matrix is not Hermitian")
    if abs(qmat.trace(rho) - 1.0) > tol.TRACE_ATOL:
        raise InvalidState("density matrix does not have unit trace")
    if qmat.hermitian_eigenvalues(rho, check=False)[0] < -tol.PSD_ATOL:
        raise InvalidState("density matrix is not positive semidefinite")
    return rho


def check_density_matrices(X, dims=(3, 9)):
    """Validate a stack ``(n_samples, d, d)`` of states; a single matrix is promoted."""
    X = np.asarray(X, dtype=complex)
    if X.ndim == 2:
        X = X[None]
    if X.ndim != 3 or X.shape[1] != X.shape[2]:
        raise InvalidState(f"expected an array of shape (n_samples, d, d), got {X.shape}")
    if X.shape[0] == 0:
        raise InvalidState("no samples given")
    if X.shape[1] not in dims:
        raise InvalidState(f"state dimension must be one of {dims}, got {X.shape[1]}")
    for rho in X:
        check_density_matrix(rho)
    return X


def state_violations(rho):
    """Largest Hermiticity, trace and negativity deviations of a state stack."""
    rho = qmat.as_matrix(rho)
    herm = float(np.max(np.abs(rho - qmat.dagger(rho))))
    tr = float(np.max(np.abs(qmat.trace(rho) - 1.0)))
    lo = float(np.min(qmat.hermitian_eigenvalues(rho, check=False)))
    return herm, tr, lo
