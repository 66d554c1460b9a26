"""Distance measures, the relative-purity QSL time and the BLP measure."""
import math
from dataclasses import dataclass, field

import numpy as np

from . import _tolerances as tol
from . import qmat, vchannel
from .exceptions import DimensionMismatch, GridError, QuadratureNotConverged
from .validation import check_density_matrix


@dataclass(frozen=True)
class QslResult:
    tau: float
    fidelity: float
    x_of_tau: float
    tau_qsl: float
    n_quadrature_steps: int


@dataclass(frozen=True)
class NonMarkovResult:
    n_measure: float
    pair_description: dict
    grid_step: float
    t_max: float = field(default=float("nan"))


def _same_shape(a, b):
    a = qmat.as_matrix(a)
    b = qmat.as_matrix(b)
    if a.shape[-2:] != b.shape[-2:]:
        raise DimensionMismatch(f"shape mismatch {a.shape} vs {b.shape}")
    return a, b


def fidelity_alt(rho0, rhot):
    """Tr(rho0 rhot) / sqrt(Tr rho0^2 Tr rhot^2)."""
    rho0, rhot = _same_shape(rho0, rhot)
    overlap = np.real(np.einsum("...ij,...ji->...", rho0, rhot))
    return overlap / np.sqrt(qmat.purity(rho0) * qmat.purity(rhot))


def trace_distance(rho1, rho2):
    rho1, rho2 = _same_shape(rho1, rho2)
    return 0.5 * qmat.trace_norm(rho1 - rho2)


def _frobenius2(m):
    return np.sum(np.abs(m) ** 2, axis=(-1, -2))


def _speed(rho0, p, t):
    """Speed integrand for one state ``(9, 9)`` or a stack ``(m, 9, 9)``; time axis last."""
    r0 = vchannel.realign(rho0)
    s, sdot = vchannel.superoperator(p, t)
    st = np.swapaxes(s, -1, -2)
    if r0.ndim == 3:
        r0 = r0[:, None]
    left = s @ r0
    rt = left @ st
    rate = (sdot @ r0) @ st + left @ np.swapaxes(sdot, -1, -2)
    # for Hermitian A, Tr(A^2) is the squared Frobenius norm, which realignment preserves
    return np.sqrt(_frobenius2(rate) / _frobenius2(rt))


def speed_integrand(rho0, p, t):
    """sqrt(Tr(rho_dot^2) / Tr(rho^2)) along the two-atom trajectory."""
    rho0 = check_density_matrix(rho0, 9)
    return _speed(rho0, p, t)


def _simpson(values, h):
    return h / 3.0 * (
        values[..., 0] + values[..., -1]
        + 4.0 * values[..., 1:-1:2].sum(axis=-1)
        + 2.0 * values[..., 2:-1:2].sum(axis=-1)
    )


def _check_quadrature(tau, n_steps):
    if not tau > 0:
        raise GridError("tau must be positive")
    if n_steps < 32 or n_steps % 2:
        raise GridError("n_steps must be even and >= 32")


def _integrate_speed(rho0s, p, tau, n_steps):
    """Self-checking composite Simpson for a stack of states on a shared grid.

    Each state keeps the first estimate that agrees with its predecessor to
    relative 1e-6; the grid keeps doubling while any state is unsettled.
    """
    m = rho0s.shape[0]
    n = n_steps
    t = np.linspace(0.0, tau, n + 1)
    f = _speed(rho0s, p, t)
    prev = _simpson(f, tau / n)
    result = np.full(m, np.nan)
    steps = np.zeros(m, dtype=int)
    todo = np.ones(m, dtype=bool)
    while todo.any():
        if 2 * n > tol.QUAD_MAX_INTERVALS:
            raise QuadratureNotConverged(
                f"Simpson rule did not reach relative {tol.QUAD_REL_TOL:g} "
                f"within {tol.QUAD_MAX_INTERVALS} intervals"
            )
        mid = (t[:-1] + t[1:]) / 2.0
        fm = _speed(rho0s[todo], p, mid)
        t2 = np.empty(2 * n + 1)
        t2[0::2], t2[1::2] = t, mid
        f2 = np.empty((int(todo.sum()), 2 * n + 1))
        f2[:, 0::2], f2[:, 1::2] = f, fm
        t, n = t2, 2 * n
        cur = _simpson(f2, tau / n)
        done = (np.abs(cur - prev) <= tol.QUAD_REL_TOL * np.abs(cur)) | ((cur == 0.0) & (prev == 0.0))
        idx = np.flatnonzero(todo)
        result[idx[done]] = cur[done]
        steps[idx[done]] = n
        todo[idx[done]] = False
        f, prev = f2[~done], cur[~done]
    return result, steps


def x_of_tau(rho0, p, tau, n_steps=256, return_steps=False):
    """(2 / tau) * integral of the speed over [0, tau] by self-checking Simpson.

    The interval count doubles until two successive estimates agree to a
    relative 1e-6; exceeding 2**14 intervals raises.
    """
    _check_quadrature(tau, n_steps)
    rho0 = check_density_matrix(rho0, 9)
    integral, steps = _integrate_speed(rho0[None], p, tau, n_steps)
    x = 2.0 / tau * float(integral[0])
    return (x, int(steps[0])) if return_steps else x


def qsl_times(rho0s, p, tau=1.0, n_steps=256, validate=True):
    """QSL results for several initial states under the same channel."""
    _check_quadrature(tau, n_steps)
    if validate:
        rho0s = np.stack([check_density_matrix(r, 9) for r in rho0s])
    else:
        rho0s = np.asarray(rho0s, dtype=complex)
    integral, steps = _integrate_speed(rho0s, p, tau, n_steps)
    s, _ = vchannel.superoperator(p, tau)
    r0 = vchannel.realign(rho0s)
    rt = s @ r0 @ s.T
    purity0 = _frobenius2(r0)
    purity_t = _frobenius2(rt)
    overlap = np.real(np.sum(np.conj(r0) * rt, axis=(-1, -2)))
    fids = overlap / np.sqrt(purity0 * purity_t)
    out = []
    for fid, integ, n in zip(fids, integral, steps):
        x = 2.0 / tau * float(integ)
        tqsl = abs(1.0 - fid) / x if x > tol.QSL_X_EPS else 0.0
        out.append(QslResult(float(tau), float(fid), x, float(tqsl), int(n)))
    return out


def qsl_time(rho0, p, tau=1.0, n_steps=256):
    """QSL time bound |1 - F(rho0, rho_tau)| / X(tau) for driving time ``tau``."""
    return qsl_times([rho0], p, tau, n_steps)[0]


def _excited_pairs(n_phase):
    pairs = []
    for k in range(n_phase):
        phase = 2.0 * math.pi * k / n_phase
        e = np.exp(1j * phase)
        a = (qmat.ket(2) + e * qmat.ket(1)) / math.sqrt(2.0)
        b = (qmat.ket(2) - e * qmat.ket(1)) / math.sqrt(2.0)
        pairs.append(({"kind": "excited-phase", "phase": phase}, a, b))
    return pairs


def _random_pairs(n_random, seed):
    rng = np.random.default_rng(seed)
    pairs = []
    for i in range(n_random):
        z = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        qm, r = np.linalg.qr(z)
        qm = qm * (np.diagonal(r) / np.abs(np.diagonal(r)))
        pairs.append(({"kind": "random", "seed": seed, "index": i}, qm[:, 0], qm[:, 1]))
    return pairs


def candidate_pairs(n_phase=16, n_random=64, seed=1234):
    """Orthogonal pure-state pairs: a phase grid in the excited subspace plus Haar-random pairs."""
    return _excited_pairs(n_phase) + _random_pairs(n_random, seed)


def default_t_max(p):
    r = vchannel.derived_rates(p)
    return max(20.0 / max(r.gamma_plus, p.lam), 5.0 / p.lam)


def blp_measure(p, t_max=None, dt=5e-3, pairs=None, chunk=16):
    """Lower bound on the BLP non-Markovianity over a finite family of initial pairs.

    The backflow integral is discretised as the sum of positive increments
    of the trace distance on a uniform grid.
    """
    if t_max is None:
        t_max = default_t_max(p)
    if not (0 < dt <= 1e-2):
        raise GridError("dt must lie in (0, 1e-2]")
    if not t_max > dt:
        raise GridError("t_max must exceed dt")
    if pairs is None:
        pairs = candidate_pairs()
    n = int(round(t_max / dt))
    t = np.linspace(0.0, n * dt, n + 1)
    ks = vchannel.kraus_set(p, t)
    best, best_desc = 0.0, None
    for start in range(0, len(pairs), chunk):
        block = pairs[start:start + chunk]
        diff = np.stack([qmat.projector(a) - qmat.projector(b) for _, a, b in block])
        # evolved differences, shape (pairs, times, 3, 3)
        evolved = sum(
            k[None] @ diff[:, None] @ qmat.dagger(k)[None] for k in ks.ops
        )
        dist = 0.5 * qmat.trace_norm(evolved, check=False)
        gain = np.clip(np.diff(dist, axis=1), 0.0, None).sum(axis=1)
        i = int(np.argmax(gain))
        if best_desc is None or gain[i] > best:
            best, best_desc = float(gain[i]), block[i][0]
    return NonMarkovResult(best, best_desc, float(dt), float(n * dt))
