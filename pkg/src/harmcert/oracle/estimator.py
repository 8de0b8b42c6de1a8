"""Scikit-learn style front end for the walk-on-spheres oracle."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ..geometry import RoundedConvexBody
from .density import DensityProbe, score_probes
from .wos import Bins, HarmonicMeasureEstimate, WosConfig, bin_exits, sample_exits


class WalkOnSpheres(BaseEstimator):
    """Harmonic-measure density estimator.

    ``fit`` draws the exit sample for a body; ``predict`` turns it into
    densities at boundary points.  Parameters mirror :class:`WosConfig`.

    Examples
    --------
    >>> from harmcert.fixtures import unit_disk
    >>> est = WalkOnSpheres(walkers=20000, seed=1).fit(unit_disk())
    >>> est.predict([[1.0, 0.0]]).shape
    (1,)
    """

    def __init__(self, epsilon=None, max_steps=10**6, walkers=10**6, seed=0, workers=1, delta=None, start=None):
        self.epsilon = epsilon
        self.max_steps = max_steps
        self.walkers = walkers
        self.seed = seed
        self.workers = workers
        self.delta = delta
        self.start = start

    def _config(self) -> WosConfig:
        return WosConfig(self.epsilon, self.max_steps, self.walkers, self.seed, self.workers)

    def fit(self, X: RoundedConvexBody, y=None):
        if not isinstance(X, RoundedConvexBody):
            raise TypeError("fit expects a RoundedConvexBody")
        self.body_ = X
        self.sample_ = sample_exits(X, self._config(), self.start)
        self.exit_points_ = self.sample_.points
        self.overflow_fraction_ = float(self.sample_.overflow.mean())
        self.epsilon_ = self.sample_.epsilon
        self.delta_ = X.radius / 20 if self.delta is None else float(self.delta)
        return self

    def probe(self, W, delta=None) -> list[DensityProbe]:
        check_is_fitted(self)
        return score_probes(self.body_, self.sample_, W, self.delta_ if delta is None else delta)

    def predict(self, W, delta=None) -> np.ndarray:
        """Estimated density of harmonic measure at each boundary point."""
        return np.array([p.density for p in self.probe(W, delta)])

    def harmonic_measure(self, bins: Bins) -> HarmonicMeasureEstimate:
        check_is_fitted(self)
        return bin_exits(self.sample_, bins)
