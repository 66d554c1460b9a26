"""Exact decoherence channel of a V-type atom in a resonant Lorentzian reservoir.

The two excited levels |2>, |1> decay to |0>. In the basis that
diagonalises the decay matrix the excited amplitudes evolve independently,
``c_pm(t) = G_pm(t) c_pm(0)``, with

    G(t) = exp(-lam t / 2) [cosh(d t / 2) + (lam / d) sinh(d t / 2)],
    d    = sqrt(lam^2 - 2 lam gamma_pm).

Every function accepts a scalar time or an array of times; array inputs
give stacked results with the time axis first.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import _tolerances as tol
from . import qmat
from .exceptions import GridError, ParamOutOfRange
from .validation import check_density_matrix


@dataclass(frozen=True)
class ChannelParams:
    """Reservoir/atom parameters, rates in a common inverse-time unit."""

    gamma1: float
    gamma2: float
    theta: float
    lam: float

    def __post_init__(self):
        for name in ("gamma1", "gamma2", "lam"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParamOutOfRange(f"{name} must be positive, got {value!r}")
        if not (math.isfinite(self.theta) and abs(self.theta) <= 1.0):
            raise ParamOutOfRange(f"theta must satisfy |theta| <= 1, got {self.theta!r}")

    @classmethod
    def equal_rates(cls, gamma, theta, lam):
        return cls(gamma1=gamma, gamma2=gamma, theta=theta, lam=lam)


@dataclass(frozen=True)
class DerivedRates:
    q: float
    gamma_plus: float
    gamma_minus: float
    d_plus: complex
    d_minus: complex


@dataclass(frozen=True)
class AmplitudePair:
    g_plus: np.ndarray
    g_minus: np.ndarray
    gdot_plus: np.ndarray
    gdot_minus: np.ndarray


@dataclass(frozen=True)
class KrausSet:
    """Kraus operators K1..K3 and their time derivatives, shape ``(..., 3, 3)``."""

    k1: np.ndarray
    k2: np.ndarray
    k3: np.ndarray
    kdot1: np.ndarray
    kdot2: np.ndarray
    kdot3: np.ndarray
    time: np.ndarray

    @property
    def ops(self):
        return (self.k1, self.k2, self.k3)

    @property
    def dots(self):
        return (self.kdot1, self.kdot2, self.kdot3)

    def completeness_error(self):
        total = sum(qmat.dagger(k) @ k for k in self.ops)
        return float(np.max(np.abs(total - np.eye(3))))


def derived_rates(p):
    g1, g2, th = p.gamma1, p.gamma2, p.theta
    q = math.sqrt((g1 - g2) ** 2 + 4.0 * g1 * g2 * th * th)
    gamma_plus = 0.5 * (g1 + g2 + q)
    # gamma_+ gamma_- = g1 g2 (1 - theta^2); avoids cancellation at |theta| = 1
    gamma_minus = g1 * g2 * (1.0 - th * th) / gamma_plus
    lam = p.lam

    def d_of(gamma):
        return complex(np.sqrt(complex(lam * (lam - 2.0 * gamma))))

    return DerivedRates(q, gamma_plus, gamma_minus, d_of(gamma_plus), d_of(gamma_minus))


def _sinhc(z):
    """sinh(z) / z for complex arrays, series near zero."""
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 1e-3
    zs = np.where(small, z, 0.0)
    z2 = zs * zs
    series = 1.0 + z2 / 6.0 * (1.0 + z2 / 20.0 * (1.0 + z2 / 42.0))
    zb = np.where(small, 1.0, z)
    return np.where(small, series, np.sinh(zb) / zb)


def _amplitude_one(gamma, d, lam, t):
    """G and dG/dt for one decay rate; overflow-free exponential form."""
    t = np.asarray(t, dtype=float)
    if gamma == 0.0:
        # dark combination: G = 1 exactly, the closed form only up to rounding
        return np.ones_like(t), np.zeros_like(t)
    x = lam * t / 2.0
    y = d * t / 2.0
    if abs(d) < tol.SERIES_SWITCH:
        damp = np.exp(-x)
        ch = damp * np.cosh(y)
        sc = damp * _sinhc(y)
    else:
        # exp(-x) cosh(y) and exp(-x) sinh(y)/y with Re d >= 0
        e1 = np.exp(y - x)
        e2 = np.exp(-y - x)
        ch = 0.5 * (e1 + e2)
        small = np.abs(y) < 1e-3
        ys = np.where(small, 1.0, y)
        sc = np.where(small, np.exp(-x) * _sinhc(y), 0.5 * (e1 - e2) / ys)
    g = ch + x * sc
    gdot = -lam * gamma * (t / 2.0) * sc
    if np.max(np.abs(np.imag(g)), initial=0.0) > tol.AMPLITUDE_IMAG_ATOL:
        raise ArithmeticError("decoherence amplitude acquired an imaginary part")
    return np.real(g), np.real(gdot)


def amplitude(p, t):
    """Decoherence amplitudes G_pm(t) and their time derivatives."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise GridError("times must be nonnegative")
    r = derived_rates(p)
    gp, gdp = _amplitude_one(r.gamma_plus, r.d_plus, p.lam, t)
    gm, gdm = _amplitude_one(r.gamma_minus, r.d_minus, p.lam, t)
    return AmplitudePair(gp, gm, gdp, gdm)


def one_minus_amplitude(gamma, lam, t, g=None):
    """1 - G(t) without cancellation for short times.

    G solves G'' + lam G' + (lam gamma / 2) G = 0 with G(0)=1, G'(0)=0,
    whose Taylor coefficients follow a two-term recursion.
    """
    t = np.asarray(t, dtype=float)
    scale = max(lam, math.sqrt(lam * gamma / 2.0))
    short = t * scale < 0.5
    out = np.empty_like(t)
    if g is not None:
        out[...] = 1.0 - np.asarray(g)
    if np.any(short):
        ts = t[short]
        a_prev, a_cur = 1.0, 0.0
        acc = np.zeros_like(ts)
        power = ts.copy()
        for n in range(0, 40):
            a_next = (-lam * (n + 1) * a_cur - 0.5 * lam * gamma * a_prev) / ((n + 2) * (n + 1))
            power = power * ts
            acc -= a_next * power
            a_prev, a_cur = a_cur, a_next
        out[short] = acc
    if g is None and np.any(~short):
        r = complex(np.sqrt(complex(lam * (lam - 2.0 * gamma))))
        gl, _ = _amplitude_one(gamma, r, lam, t[~short])
        out[~short] = 1.0 - gl
    return out


def _decay_entry(gamma, lam, t, g, gdot):
    """sqrt(1 - G^2) and its time derivative."""
    one_m = one_minus_amplitude(gamma, lam, t, g=g)
    s2 = np.clip(one_m * (1.0 + g), 0.0, None)
    s = np.sqrt(s2)
    guarded = s2 < tol.SQRT_GUARD
    safe = np.where(guarded, 1.0, s)
    ds = np.where(guarded, 0.0, -g * gdot / safe)
    # t -> 0+: sqrt(1 - G^2) ~ t sqrt(lam gamma / 2), so the slope tends to that constant
    at_start = guarded & (t * max(lam, gamma) < 1e-6)
    ds = np.where(at_start, math.sqrt(lam * gamma / 2.0), ds)
    return s, ds


def mixing_unitary(p):
    """Real orthogonal U with rows giving the (+, -) combinations of |2>, |1>."""
    r = derived_rates(p)
    q = r.q
    if q < 1e-12:
        return np.eye(3, dtype=complex)
    delta = p.gamma1 - p.gamma2
    a = math.sqrt(max(q + delta, 0.0) / (2.0 * q))
    b = math.sqrt(max(q - delta, 0.0) / (2.0 * q))
    return np.array([[a, -b, 0.0], [b, a, 0.0], [0.0, 0.0, 1.0]], dtype=complex)


def kraus_set(p, t):
    """Kraus operators in the original |2>, |1>, |0> basis.

    Built by conjugating the diagonal-basis operators with U, which keeps
    the normalisation sqrt(1 - G^2) exact (the closed forms with a 1/(2q)
    prefactor are not trace preserving).
    """
    t = np.asarray(t, dtype=float)
    amp = amplitude(p, t)
    r = derived_rates(p)
    u = mixing_unitary(p)
    ud = qmat.dagger(u)
    sp, dsp = _decay_entry(r.gamma_plus, p.lam, t, amp.g_plus, amp.gdot_plus)
    sm, dsm = _decay_entry(r.gamma_minus, p.lam, t, amp.g_minus, amp.gdot_minus)

    shape = t.shape + (3, 3)
    c1 = np.zeros(shape, dtype=complex)
    c2 = np.zeros(shape, dtype=complex)
    c3 = np.zeros(shape, dtype=complex)
    c1[..., 0, 0] = amp.g_plus
    c1[..., 1, 1] = amp.g_minus
    c1[..., 2, 2] = 1.0
    c2[..., 2, 0] = sp
    c3[..., 2, 1] = sm
    dc1 = np.zeros(shape, dtype=complex)
    dc2 = np.zeros(shape, dtype=complex)
    dc3 = np.zeros(shape, dtype=complex)
    dc1[..., 0, 0] = amp.gdot_plus
    dc1[..., 1, 1] = amp.gdot_minus
    dc2[..., 2, 0] = dsp
    dc3[..., 2, 1] = dsm

    def rot(m):
        return ud @ m @ u

    return KrausSet(rot(c1), rot(c2), rot(c3), rot(dc1), rot(dc2), rot(dc3), t)


def _check_state(rho, dim):
    return check_density_matrix(rho, dim)


def _pair_ops(ks):
    """Two-atom Kraus operators K_k (x) K_l and their derivatives."""
    ops, dots = [], []
    for ka, da in zip(ks.ops, ks.dots):
        for kb, db in zip(ks.ops, ks.dots):
            ops.append(qmat.tensor(ka, kb))
            dots.append(qmat.tensor(da, kb) + qmat.tensor(ka, db))
    return ops, dots


def evolve_single(rho0, p, t):
    rho0 = _check_state(rho0, 3)
    ks = kraus_set(p, t)
    return sum(k @ rho0 @ qmat.dagger(k) for k in ks.ops)


def evolve_pair(rho0, p, t):
    """Two identical atoms, each in its own reservoir with parameters ``p``."""
    rho0 = _check_state(rho0, 9)
    ops, _ = _pair_ops(kraus_set(p, t))
    return sum(k @ rho0 @ qmat.dagger(k) for k in ops)


def rho_dot_pair(rho0, p, t):
    """Analytic d rho/dt of the two-atom state at time ``t``."""
    rho0 = _check_state(rho0, 9)
    ops, dots = _pair_ops(kraus_set(p, t))
    out = 0
    for k, kd in zip(ops, dots):
        term = kd @ rho0 @ qmat.dagger(k)
        out = out + term + qmat.dagger(term)
    return out


def evolve_pair_with_rate(rho0, p, t):
    """``(rho(t), rho_dot(t))`` from one Kraus evaluation."""
    rho0 = _check_state(rho0, 9)
    ops, dots = _pair_ops(kraus_set(p, t))
    rho = 0
    rate = 0
    for k, kd in zip(ops, dots):
        kdag = qmat.dagger(k)
        rho = rho + k @ rho0 @ kdag
        term = kd @ rho0 @ kdag
        rate = rate + term + qmat.dagger(term)
    return rho, rate


def oracle_amplitude_ode(p, t_grid, max_step=1e-3):
    """G_pm and dG_pm/dt on ``t_grid`` from the local form of the memory-kernel equation.

    With the Lorentzian kernel the integro-differential equation is
    equivalent to ``c' = -(gamma lam / 2) z, z' = c - lam z`` with
    ``c(0) = 1, z(0) = 0``, integrated here by fixed-step RK4.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size == 0 or t_grid[0] != 0.0:
        raise GridError("time grid must be one-dimensional and start at 0")
    if np.any(np.diff(t_grid) <= 0):
        raise GridError("time grid must be strictly ascending")
    r = derived_rates(p)
    gamma = np.array([r.gamma_plus, r.gamma_minus])
    lam = p.lam
    k = 0.5 * gamma * lam

    def f(y):
        c, z = y
        return np.array([-k * z, c - lam * z])

    y = np.array([[1.0, 1.0], [0.0, 0.0]])
    out = np.empty((t_grid.size, 2, 2))
    out[0] = y
    for i in range(1, t_grid.size):
        span = t_grid[i] - t_grid[i - 1]
        n = max(1, math.ceil(span / max_step))
        h = span / n
        for _ in range(n):
            k1 = f(y)
            k2 = f(y + 0.5 * h * k1)
            k3 = f(y + 0.5 * h * k2)
            k4 = f(y + h * k3)
            y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        out[i] = y
    c = out[:, 0, :]
    cdot = -k * out[:, 1, :]
    return AmplitudePair(c[:, 0], c[:, 1], cdot[:, 0], cdot[:, 1])


def superoperator(p, t):
    """Single-atom transfer matrix S = sum_k K_k (x) conj(K_k) and its derivative.

    With row-major vectorisation ``vec(rho)[3 i + j] = rho[i, j]`` the
    evolved state is ``S @ vec(rho0)``.
    """
    ks = kraus_set(p, t)
    s = 0
    sdot = 0
    for k, kd in zip(ks.ops, ks.dots):
        s = s + qmat.tensor(k, np.conj(k))
        sdot = sdot + qmat.tensor(kd, np.conj(k)) + qmat.tensor(k, np.conj(kd))
    return s, sdot


def realign(rho):
    """R[(i, j), (k, l)] = rho[(i, k), (j, l)]; a permutation of the entries."""
    rho = qmat.as_matrix(rho)
    lead = rho.shape[:-2]
    r = rho.reshape(lead + (3, 3, 3, 3))
    return np.swapaxes(r, -3, -2).reshape(lead + (9, 9))


def pair_trajectory_realigned(rho0, p, t):
    """Realigned two-atom state and rate, ``(S R0 S^T, dS R0 S^T + S R0 dS^T)``.

    Realignment permutes entries, so Frobenius norms and overlaps with the
    realigned initial state equal those of the density matrices themselves.
    """
    r0 = realign(rho0)
    s, sdot = superoperator(p, t)
    st = np.swapaxes(s, -1, -2)
    rt = s @ r0 @ st
    rate = sdot @ r0 @ st + s @ r0 @ np.swapaxes(sdot, -1, -2)
    return rt, rate
