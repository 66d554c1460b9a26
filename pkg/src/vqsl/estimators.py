"""scikit-learn style wrappers around the channel and the QSL/BLP metrics.

The estimators hold only hyper-parameters; ``fit`` validates input and
records shape information so they compose with ``Pipeline`` and
``clone``. Samples are density matrices stacked as ``(n_samples, d, d)``.
"""
import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import metrics, states, vchannel
from .validation import check_density_matrices


class ChannelTransformer(TransformerMixin, BaseEstimator):
    """Evolve one- or two-qutrit states through the V-atom channel to time ``t``."""

    def __init__(self, gamma1=1.0, gamma2=1.0, theta=1.0, lam=0.1, t=1.0):
        self.gamma1 = gamma1
        self.gamma2 = gamma2
        self.theta = theta
        self.lam = lam
        self.t = t

    def _params(self):
        return vchannel.ChannelParams(self.gamma1, self.gamma2, self.theta, self.lam)

    def fit(self, X, y=None):
        X = check_density_matrices(X)
        self._params()
        self.state_dim_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "state_dim_")
        X = check_density_matrices(X, dims=(self.state_dim_,))
        p = self._params()
        evolve = vchannel.evolve_single if self.state_dim_ == 3 else vchannel.evolve_pair
        return np.stack([evolve(rho, p, self.t) for rho in X])


class QSLEstimator(TransformerMixin, BaseEstimator):
    """Map two-qutrit initial states to ``[fidelity, X(tau), tau_QSL]``.

    Both atoms decay at rate ``gamma`` into independent reservoirs of width
    ``lam``; ``theta`` sets the interference between the two decay channels.
    """

    feature_names = ("fidelity", "x_of_tau", "tau_qsl")

    def __init__(self, gamma=1.0, lam=0.1, theta=1.0, tau=1.0, quadrature_steps=256):
        self.gamma = gamma
        self.lam = lam
        self.theta = theta
        self.tau = tau
        self.quadrature_steps = quadrature_steps

    def fit(self, X, y=None):
        check_density_matrices(X, dims=(9,))
        vchannel.ChannelParams.equal_rates(self.gamma, self.theta, self.lam)
        self.n_features_in_ = 81
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_density_matrices(X, dims=(9,))
        p = vchannel.ChannelParams.equal_rates(self.gamma, self.theta, self.lam)
        out = np.empty((X.shape[0], 3))
        for i, rho in enumerate(X):
            r = metrics.qsl_time(rho, p, self.tau, self.quadrature_steps)
            out[i] = (r.fidelity, r.x_of_tau, r.tau_qsl)
        return out

    def predict(self, X):
        """QSL time for each state."""
        return self.transform(X)[:, 2]

    def get_feature_names_out(self, input_features=None):
        return np.asarray(self.feature_names, dtype=object)


class NonMarkovianityEstimator(BaseEstimator):
    """BLP measure of the single-atom channel over a finite pair family.

    ``fit`` takes no data; after fitting ``n_measure_`` is a lower bound
    on the measure and ``best_pair_`` describes the maximising pair.
    """

    def __init__(self, gamma=1.0, lam=0.1, theta=1.0, t_max=None, dt=5e-3,
                 n_phase=16, n_random=64, seed=1234):
        self.gamma = gamma
        self.lam = lam
        self.theta = theta
        self.t_max = t_max
        self.dt = dt
        self.n_phase = n_phase
        self.n_random = n_random
        self.seed = seed

    def fit(self, X=None, y=None):
        p = vchannel.ChannelParams.equal_rates(self.gamma, self.theta, self.lam)
        pairs = metrics.candidate_pairs(self.n_phase, self.n_random, self.seed)
        res = metrics.blp_measure(p, t_max=self.t_max, dt=self.dt, pairs=pairs)
        self.n_measure_ = res.n_measure
        self.best_pair_ = res.pair_description
        self.t_max_ = res.t_max
        return self


def state_family_matrices(family, params):
    """Stack of initial states for a family label over its parameter values."""
    return np.stack([states.family_state(family, x) for x in params])
