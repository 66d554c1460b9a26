"""Evaluate a sweep configuration over its (state parameter x gamma) grid."""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .. import metrics, states, vchannel
from ..exceptions import VQSLError
from ..validation import check_density_matrix
from .config import BlpConfig, SweepConfig

TAU_SLACK = 1e-9

DEFAULT_GAMMAS = tuple(float(g) for g in np.geomspace(0.01, 5.0, 100))
DEFAULT_LAMBDAS = (0.1, 1.0, 10.0)
DEFAULT_WERNER_PS = (0.3, 0.5, 0.7, 1.0)
DEFAULT_HORODECKI_ALPHAS = (0.0, 0.5, 0.9, 1.5)


class SweepPointError(VQSLError):
    """A computation failed at a specific grid point."""


@dataclass(frozen=True)
class SweepRow:
    state_family: str
    state_param: float
    gamma: float
    lam: float
    theta: float
    tau: float
    fidelity: float
    x_of_tau: float
    tau_qsl: float
    negativity: float
    region: str
    n_measure: float = None

    def check(self):
        if not self.tau_qsl <= self.tau + TAU_SLACK:
            raise SweepPointError(
                f"QSL bound violated at gamma={self.gamma:g}, {self.state_family}={self.state_param:g}: "
                f"tau_qsl={self.tau_qsl!r} > tau={self.tau!r}"
            )
        if not self.negativity >= 0:
            raise SweepPointError(f"negative negativity at {self.state_family}={self.state_param:g}")
        return self


def _gamma_column(cfg, gamma, initial):
    """All rows for one gamma; ``initial`` holds validated states in state_params order."""
    p = vchannel.ChannelParams.equal_rates(gamma, cfg.theta, cfg.lam)
    try:
        results = metrics.qsl_times(initial, p, cfg.tau, cfg.quadrature_steps, validate=False)
        n_measure = None
        if cfg.blp is not None:
            pairs = metrics.candidate_pairs(seed=cfg.blp.seed)
            n_measure = metrics.blp_measure(p, cfg.blp.t_max, cfg.blp.dt, pairs).n_measure
    except (VQSLError, ArithmeticError, ValueError) as exc:
        raise SweepPointError(f"gamma={gamma:g}, lambda={cfg.lam:g}, theta={cfg.theta:g}: {exc}") from exc
    return results, n_measure


def _column_task(args):
    return _gamma_column(*args)


def run_sweep(cfg, workers=1):
    """Rows for every (state_param, gamma) pair, ordered by state_param then gamma.

    With ``workers > 1`` the gamma columns are evaluated in a process pool;
    each column is a pure function of the config so the rows are identical
    to a serial run.
    """
    initial = []
    diagnostics = []
    for x in cfg.state_params:
        rho = check_density_matrix(states.family_state(cfg.state_family, x), 9)
        initial.append(rho)
        diagnostics.append(
            (states.negativity(rho), states.classify_region(cfg.state_family, x).label.value)
        )
    initial = np.stack(initial)

    tasks = [(cfg, g, initial) for g in cfg.gamma_grid]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            columns = list(pool.map(_column_task, tasks))
    else:
        columns = [_column_task(t) for t in tasks]

    rows = []
    for i, x in enumerate(cfg.state_params):
        neg, region = diagnostics[i]
        for gamma, (results, n_measure) in zip(cfg.gamma_grid, columns):
            r = results[i]
            rows.append(
                SweepRow(
                    cfg.state_family, x, gamma, cfg.lam, cfg.theta, cfg.tau,
                    r.fidelity, r.x_of_tau, r.tau_qsl, neg, region, n_measure,
                ).check()
            )
    return rows


def default_configs(output_dir=".", emit_svg=False, gammas=DEFAULT_GAMMAS):
    """The reference sweep: every state family at each default lambda, theta = 1, tau = 1."""
    configs = []
    for family in ("werner-psi0", "werner-psi1", "werner-psi1-swapped", "horodecki"):
        params = DEFAULT_HORODECKI_ALPHAS if family == "horodecki" else DEFAULT_WERNER_PS
        for lam in DEFAULT_LAMBDAS:
            name = f"{family}_lambda{lam:g}.csv"
            configs.append(
                SweepConfig(
                    state_family=family,
                    state_params=params,
                    gamma_grid=tuple(gammas),
                    lam=lam,
                    theta=1.0,
                    output_path=str(Path(output_dir) / name),
                    emit_svg=emit_svg,
                )
            )
    return configs


def with_blp(cfg, t_max=None, dt=5e-3, seed=1234):
    return replace(cfg, blp=BlpConfig(t_max, dt, seed))

