"""Small dense complex linear algebra for one and two qutrits.

Matrices are plain ``numpy`` arrays of shape ``(d, d)`` or stacks
``(..., d, d)``. Single-qutrit indices 0, 1, 2 stand for the levels
|2>, |1>, |0> (excited, excited, ground); two-qutrit indices are
lexicographic pairs ``3 * i + k``.
"""
import numpy as np

from . import _tolerances as tol
from .exceptions import DimensionMismatch, EigenNotConverged, NonHermitianInput

QUTRIT = 3
PAIR = 9
_TINY = 1e-290


def as_matrix(m):
    m = np.asarray(m, dtype=complex)
    if m.ndim < 2 or m.shape[-1] != m.shape[-2]:
        raise DimensionMismatch(f"expected square matrix, got shape {m.shape}")
    return m


def dagger(m):
    return np.conj(np.swapaxes(m, -1, -2))


def tensor(a, b):
    """Kronecker product, broadcasting over leading stack axes.

    Entry ``(i*db + k, j*db + l)`` equals ``a[i, j] * b[k, l]``.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    da, db = a.shape[-1], b.shape[-1]
    out = a[..., :, None, :, None] * b[..., None, :, None, :]
    return out.reshape(out.shape[:-4] + (da * db, da * db))


def hermiticity_error(m):
    m = as_matrix(m)
    return float(np.max(np.abs(m - dagger(m)), initial=0.0))


def check_hermitian(m, atol=tol.HERMITIAN_ATOL):
    m = as_matrix(m)
    err = hermiticity_error(m)
    if err > atol:
        raise NonHermitianInput(f"matrix is not Hermitian (max deviation {err:.3e})")
    return m


def _offdiag_norm(a):
    d = a.shape[-1]
    mask = ~np.eye(d, dtype=bool)
    return np.sqrt(np.sum(np.abs(a[..., mask]) ** 2, axis=-1))


def _jacobi_eigvalsh(a):
    """Cyclic complex Jacobi on a stack ``(n, d, d)`` of Hermitian matrices."""
    a = a.copy()
    n, d, _ = a.shape
    scale = np.maximum(1.0, np.sqrt(np.sum(np.abs(a) ** 2, axis=(-1, -2))))
    rows = np.arange(n)
    for _ in range(tol.JACOBI_MAX_SWEEPS):
        off = _offdiag_norm(a)
        active = (off >= tol.JACOBI_OFFDIAG_TOL * scale) & (off > _TINY)
        if not active.any():
            return np.sort(np.real(np.diagonal(a, axis1=-2, axis2=-1)), axis=-1)
        full = bool(active.all())
        sub = a if full else a[rows[active]]
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = sub[:, p, q]
                r = np.abs(apq)
                # subnormal entries are dropped: dividing by them overflows
                nz = r > _TINY
                rs = np.where(nz, r, 1.0)
                phase = np.where(nz, apq / rs, 1.0)
                app = sub[:, p, p].real
                aqq = sub[:, q, q].real
                cot2 = np.where(nz, (aqq - app) / (2.0 * rs), 0.0)
                big = np.abs(cot2) > 1e150
                c2s = np.where(big, 1.0, cot2)
                t = np.where(c2s >= 0, 1.0, -1.0) / (np.abs(c2s) + np.sqrt(c2s * c2s + 1.0))
                t = np.where(big, 0.5 / np.where(big, cot2, 1.0), t)
                t = np.where(nz, t, 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # rotation R on (p, q): R_pp = c, R_pq = s, R_qp = -s e^{-i phi}, R_qq = c e^{-i phi}
                ph = np.conj(phase)
                rpp, rpq = c, s
                rqp, rqq = -s * ph, c * ph
                colp = sub[:, :, p].copy()
                colq = sub[:, :, q].copy()
                sub[:, :, p] = colp * rpp[:, None] + colq * rqp[:, None]
                sub[:, :, q] = colp * rpq[:, None] + colq * rqq[:, None]
                rowp = sub[:, p, :].copy()
                rowq = sub[:, q, :].copy()
                sub[:, p, :] = np.conj(rpp)[:, None] * rowp + np.conj(rqp)[:, None] * rowq
                sub[:, q, :] = np.conj(rpq)[:, None] * rowp + np.conj(rqq)[:, None] * rowq
                sub[:, p, q] = 0.0
                sub[:, q, p] = 0.0
        if not full:
            a[rows[active]] = sub
    raise EigenNotConverged("Jacobi iteration did not converge")


def hermitian_eigenvalues(m, check=True):
    """Ascending real eigenvalues of a Hermitian matrix or stack of them.

    Uses cyclic Jacobi rotations; the result is checked against the first
    two spectral moments ``Tr m`` and ``Tr m^2``.
    """
    m = as_matrix(m)
    if check:
        check_hermitian(m)
    d = m.shape[-1]
    lead = m.shape[:-2]
    h = 0.5 * (m + dagger(m))
    flat = h.reshape((-1, d, d))
    vals = _jacobi_eigvalsh(flat)
    tr1 = np.real(np.trace(flat, axis1=-2, axis2=-1))
    tr2 = np.real(np.einsum("nij,nji->n", flat, flat))
    scale = np.maximum(1.0, np.abs(tr2))
    if np.any(np.abs(vals.sum(-1) - tr1) > tol.MOMENT_ATOL * scale) or np.any(
        np.abs((vals ** 2).sum(-1) - tr2) > tol.MOMENT_ATOL * scale
    ):
        raise EigenNotConverged("eigenvalues fail the trace moment check")
    return vals.reshape(lead + (d,))


def partial_transpose_second(m):
    """Transpose the second qutrit of a 9x9 matrix: ((i,k),(j,l)) -> ((i,l),(j,k))."""
    m = as_matrix(m)
    if m.shape[-1] != PAIR:
        raise DimensionMismatch(f"partial transpose needs a 9x9 matrix, got {m.shape[-2:]}")
    lead = m.shape[:-2]
    t = m.reshape(lead + (3, 3, 3, 3))
    return np.swapaxes(t, -1, -3).reshape(lead + (PAIR, PAIR))


def swap_subsystems(m):
    """Exchange the two qutrits of a 9x9 matrix: ((i,k),(j,l)) -> ((k,i),(l,j))."""
    m = as_matrix(m)
    if m.shape[-1] != PAIR:
        raise DimensionMismatch(f"party swap needs a 9x9 matrix, got {m.shape[-2:]}")
    lead = m.shape[:-2]
    t = m.reshape(lead + (3, 3, 3, 3))
    t = np.swapaxes(np.swapaxes(t, -4, -3), -2, -1)
    return t.reshape(lead + (PAIR, PAIR))


def trace_norm(m, check=True):
    """Sum of absolute eigenvalues of a Hermitian matrix (stack-aware)."""
    return np.sum(np.abs(hermitian_eigenvalues(m, check=check)), axis=-1)


def purity(rho):
    rho = as_matrix(rho)
    return np.real(np.einsum("...ij,...ji->...", rho, rho))


def trace(m):
    return np.trace(as_matrix(m), axis1=-2, axis2=-1)


def ket(*labels):
    """Product basis vector for level labels (0 = ground, 1, 2 = excited)."""
    v = np.ones(1, dtype=complex)
    for label in labels:
        if label not in (0, 1, 2):
            raise ValueError(f"qutrit label must be 0, 1 or 2, got {label!r}")
        e = np.zeros(QUTRIT, dtype=complex)
        e[2 - label] = 1.0
        v = np.kron(v, e)
    return v


def projector(psi):
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, np.conj(psi))
