"""Small-``beta`` limits of the family.

As ``beta`` drops to zero, ``mu(alpha, beta, lam)`` converges weakly to

    nu(1/alpha, lam)                                        lam >= 1,
    (1-lam)/2 * delta_0 + (1+lam)/2 * nu((1+lam)/(2*alpha), 1)   |lam| < 1,
    delta_0                                                 lam <= -1,

with the support endpoints scaling like ``a ~ beta`` (and ``b`` of order
one) strictly inside the middle regime, ``a, b ~ beta`` below it, and
fractional powers ``beta**(2/3)``/``beta**(1/3)`` exactly on the
boundaries ``lam = 1`` / ``lam = -1``.  The square-root data follow:
``delta -> alpha/(1-|lam|)`` and ``eta -> infinity`` for ``|lam| > 1``,
``delta -> -infinity`` and ``eta -> alpha/(1-lam**2)`` for ``|lam| < 1``,
both unbounded on the boundaries.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError
from .measures import (FreePoissonParams, SpectralMeasure, atom_measure,
                       build_fgig, build_free_poisson, levy_distance)
from .params import NaturalParams, reparameterize, solve_spread

REGIME_LAM_GE_1 = "lambda_ge_1"
REGIME_ABS_LT_1 = "abs_lambda_lt_1"
REGIME_LAM_LE_M1 = "lambda_le_minus_1"


@dataclass(frozen=True)
class LimitDescription:
    regime: str
    limit: SpectralMeasure


def _scaled_copy(m, weight, extra_atoms):
    """Measure with the a.c. part of ``m`` scaled by ``weight`` plus atoms."""
    interp = (PchipInterpolator(m.cdf_x, weight * m.cdf_y)
              if m.cdf_x is not None else None)
    parent = m.density

    def density(x, _w=weight, _f=parent):
        return _w * _f(x)

    return SpectralMeasure(tuple(extra_atoms), m.support, density,
                           m.nodes, weight * m.weights,
                           m.cdf_x, None if m.cdf_y is None else weight * m.cdf_y,
                           interp, m.param_spacing, m.param_dxdt,
                           m.param_theta)


def limit_regime(lam):
    if lam >= 1.0:
        return REGIME_LAM_GE_1
    if lam <= -1.0:
        return REGIME_LAM_LE_M1
    return REGIME_ABS_LT_1


def limit_measure(alpha, lam, n=512):
    """Weak limit of ``mu(alpha, beta, lam)`` as ``beta`` drops to zero."""
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    regime = limit_regime(lam)
    if regime == REGIME_LAM_GE_1:
        limit = build_free_poisson(FreePoissonParams(1.0 / alpha, lam), n)
    elif regime == REGIME_LAM_LE_M1:
        limit = atom_measure([(0.0, 1.0)])
    else:
        mp = build_free_poisson(
            FreePoissonParams((1.0 + lam) / (2.0 * alpha), 1.0), n)
        limit = _scaled_copy(mp, (1.0 + lam) / 2.0,
                             [(0.0, (1.0 - lam) / 2.0)])
    return LimitDescription(regime, limit)


def spread_path(alpha, lam, betas):
    """Spread coordinates along a decreasing ``beta`` sweep.

    Continuation: starts at ``beta = 0.1`` (or above the largest target)
    and walks down geometrically, warm-starting each solve; the support
    degenerates as ``beta`` vanishes and cold Newton becomes fragile.
    """
    betas = np.asarray(betas, dtype=float)
    if np.any(betas <= 0):
        raise DomainError("beta values must be positive")
    order = np.argsort(-betas)
    results = {}
    current_beta = max(0.1, float(betas.max()))
    guess = None
    sf = solve_spread(NaturalParams(alpha, current_beta, lam))
    guess = (sf.A, sf.B)
    for idx in order:
        target = float(betas[idx])
        while current_beta > target * 1.0000001:
            current_beta = max(target, current_beta / 3.1622776601683795)
            sf = solve_spread(NaturalParams(alpha, current_beta, lam),
                              guess=guess)
            guess = (sf.A, sf.B)
        results[idx] = solve_spread(NaturalParams(alpha, target, lam),
                                    guess=guess)
    return [results[i] for i in range(betas.size)]


def convergence_curve(alpha, lam, betas, n=2048):
    """Levy distances to the limit along a decreasing ``beta`` list.

    The lower two regimes put an atom at the origin, which the family
    approximates by an ever steeper ramp: the sup-distance of the
    distribution functions then stays pinned near the atom mass, so the
    weak-convergence (Levy) metric is the honest yardstick here.
    """
    desc = limit_measure(alpha, lam)
    spread_path(alpha, lam, betas)  # prime the solver cache down the sweep
    out = []
    for beta in betas:
        m = build_fgig(NaturalParams(alpha, float(beta), lam), n)
        out.append(levy_distance(m, desc.limit))
    return out


def _fit_exponent(betas, values, slope_floor=0.02, variation_floor=0.05):
    logb = np.log(betas)
    logv = np.log(values)
    slope = float(np.polyfit(logb, logv, 1)[0])
    spread = float((values.max() - values.min()) / values.max())
    if abs(slope) < slope_floor and spread < variation_floor:
        return 0.0
    return slope


def scaling_exponents(alpha, lam, betas, tail=4):
    """Power-law exponents ``(p_a, p_b)`` of the support endpoints.

    Least-squares slopes of ``log a`` and ``log b`` against ``log beta``
    over the smallest supplied values; a quantity that levels off (slope
    below 0.02 and relative variation below 5 percent) reports exponent
    zero.
    """
    betas = np.asarray(betas, dtype=float)
    if betas.size < 4 or np.any(np.diff(betas) >= 0):
        raise DomainError("need at least four strictly decreasing betas")
    spreads = spread_path(alpha, lam, betas)
    supports = [reparameterize(sf) for sf in spreads]
    take = min(max(tail, 4), betas.size)
    bs = betas[-take:]
    a_vals = np.array([s.a for s in supports[-take:]])
    b_vals = np.array([s.b for s in supports[-take:]])
    return (_fit_exponent(bs, a_vals), _fit_exponent(bs, b_vals))


def root_limits(alpha, lam):
    """Limits of ``(delta, eta)`` as ``beta`` drops to zero.

    Unbounded entries are reported as signed infinities.
    """
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    if abs(lam) > 1.0:
        return alpha / (1.0 - abs(lam)), math.inf
    if abs(lam) < 1.0:
        return -math.inf, alpha / (1.0 - lam * lam)
    return -math.inf, math.inf
