"""Sign-of-quadrature correlations and CHSH values.

Each party measures ``Sign[cos(t) x + sin(t) p]`` on its own mode. Under a
Gaussian-mixture Wigner function the correlation factorises per component,
so the analytic route is a weighted sum of products of ``erf`` terms; the
Monte Carlo route samples hidden variables from the same mixture.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels, logical_model, phase_space
from .errors import InvalidArgument
from .numerics import bisect, erf

MIN_MC_SAMPLES = 1000
CLASSICAL_BOUND = 2.0
# (theta1, theta2, phi1, phi2) giving the maximal transformed CHSH value
OPTIMAL_SETTINGS = (0.0, math.pi / 4, math.pi / 8, -math.pi / 8)
# correlation pairs in CHSH order and their signs
CHSH_PAIRS = ((0, 0, 1.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, -1.0))


@dataclass(frozen=True)
class MeasurementSetting:
    angle: float

    def __post_init__(self):
        if not math.isfinite(self.angle):
            raise InvalidArgument(f"non-finite measurement angle {self.angle}")


@dataclass(frozen=True)
class TransformationSettings:
    theta1: float
    theta2: float
    phi1: float
    phi2: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in self.as_tuple()):
            raise InvalidArgument("transformation settings must be finite")

    def as_tuple(self):
        return (self.theta1, self.theta2, self.phi1, self.phi2)

    @property
    def thetas(self):
        return (self.theta1, self.theta2)

    @property
    def phis(self):
        return (self.phi1, self.phi2)

    @classmethod
    def optimal(cls):
        return cls(*OPTIMAL_SETTINGS)


@dataclass(frozen=True)
class CorrelationEstimate:
    value: float
    method: str
    n: int = 0
    stderr: float = 0.0

    def __post_init__(self):
        if self.method not in ("analytic", "monte-carlo"):
            raise InvalidArgument(f"unknown method {self.method!r}")
        if abs(self.value) > 1 + 1e-9:
            raise InvalidArgument(f"correlation {self.value} outside [-1, 1]")
        if self.stderr < 0 or (self.method == "analytic" and (self.n or self.stderr)):
            raise InvalidArgument("stderr/n inconsistent with method")


def _angle(m):
    return m.angle if isinstance(m, MeasurementSetting) else float(m)


def sign_expectation(mode, m):
    t = _angle(m)
    mu = mode.mean.x * math.cos(t) + mode.mean.p * math.sin(t)
    return erf(mu / math.sqrt(2.0 * mode.variance))


def correlation_analytic(w, a, b):
    value = math.fsum(c.weight * sign_expectation(c.mode1, a) * sign_expectation(c.mode2, b)
                      for c in w.components)
    return CorrelationEstimate(value, "analytic")


def correlation_closed_form(theta_i, phi_j, alpha_r):
    """Closed form ``cos(2(theta_i - phi_j)) erf(alpha_r)^2``."""
    return math.cos(2.0 * (theta_i - phi_j)) * erf(alpha_r) ** 2


def correlation_mc(w, a, b, seed, n):
    if int(n) != n or n < MIN_MC_SAMPLES:
        raise InvalidArgument(f"need at least {MIN_MC_SAMPLES} samples, got {n}")
    ta, tb = _angle(a), _angle(b)
    ca, sa, cb, sb = math.cos(ta), math.sin(ta), math.cos(tb), math.sin(tb)
    total = 0.0
    for pts in phase_space.iter_sample_chunks(w, seed, n):
        total += _kernels.sign_product_sum(pts, ca, sa, cb, sb)
    value = total / n
    return CorrelationEstimate(value, "monte-carlo", int(n), math.sqrt(max(0.0, 1.0 - value * value) / n))


def _settings(s):
    return s if isinstance(s, TransformationSettings) else TransformationSettings(*s)


def chsh_transformed(s, alpha_r):
    """CHSH combination of the transformed-state correlations at fixed x-measurements."""
    s = _settings(s)
    return math.fsum(sign * correlation_closed_form(s.thetas[i], s.phis[j], alpha_r)
                     for i, j, sign in CHSH_PAIRS)


def transformed_mixtures(s, alpha, variance=phase_space.DEFAULT_VARIANCE):
    """``[W11, W12, W21, W22]`` for the states reached under settings `s`."""
    s = _settings(s)
    return [logical_model.to_wigner(logical_model.rho_target(s.thetas[i], s.phis[j]), alpha, variance)
            for i, j, _ in CHSH_PAIRS]


def chsh_from_mixtures(mixtures):
    """Signed sum of fixed x-measurement correlations over ``[W11, W12, W21, W22]``."""
    return math.fsum(sign * correlation_analytic(w, 0.0, 0.0).value
                     for w, (_, _, sign) in zip(mixtures, CHSH_PAIRS))


def chsh_fixed_state(w, settings):
    """CHSH value of one mixture with varying measurement angles.

    `settings` lists the angle pairs ``(a1, b1), (a1, b2), (a2, b1), (a2, b2)``.
    """
    if len(settings) != 4:
        raise InvalidArgument("need four measurement-angle pairs")
    return math.fsum(sign * correlation_analytic(w, a, b).value
                     for (a, b), (_, _, sign) in zip(settings, CHSH_PAIRS))


def threshold_alpha(xtol=1e-10):
    """Smallest ``Re(alpha)`` at which the optimal settings reach the classical bound."""
    optimal = TransformationSettings.optimal()
    return bisect(lambda a: chsh_transformed(optimal, a) - CLASSICAL_BOUND, 0.5, 1.5, xtol=xtol)


def scan_settings(alpha_r, resolution):
    """Grid search of the transformed CHSH value over ``[0, pi)^4``.

    Angles are ``k pi / resolution``. Ties within 1e-12 resolve to the
    lexicographically smallest quadruple.
    """
    if int(resolution) != resolution or resolution < 8:
        raise InvalidArgument(f"resolution must be an integer >= 8, got {resolution}")
    angles = np.arange(int(resolution)) * (math.pi / resolution)
    best, idx = _kernels.chsh_scan(angles, erf(alpha_r) ** 2)
    return TransformationSettings(*(float(angles[i]) for i in idx)), best


@dataclass(frozen=True)
class LHVCheck:
    d12: float
    d21: float
    d22: float

    def contradiction(self, tol=1e-12):
        """True when W12, W21 equal W11 but W22 does not."""
        return self.d12 <= tol and self.d21 <= tol and self.d22 > tol


def lhv_identity_check(s, alpha, variance, grid, full=False):
    """Distances of W12, W21, W22 from W11 over `grid`.

    When W11 = W12 = W21 the local hidden-variable maps linking them must be
    identities, which would force W22 = W11 as well.
    """
    w11, w12, w21, w22 = transformed_mixtures(s, alpha, variance)
    return LHVCheck(phase_space.sup_distance(w11, w12, grid, full),
                    phase_space.sup_distance(w11, w21, grid, full),
                    phase_space.sup_distance(w11, w22, grid, full))
