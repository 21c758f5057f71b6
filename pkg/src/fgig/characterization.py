"""The reciprocal fixed point ``X = (X + Y)^(-1)`` in distribution.

For free ``X > 0`` and ``Y`` Marchenko--Pastur with jump ``1/alpha`` and
rate ``lam`` (both parameters positive), the fixed-point equation holds
exactly when ``X ~ mu(alpha, alpha, -lam)``.  Subordination turns the
fixed point into a functional equation for ``M(z) = G_X(1/z)``:

    -M(z) + z = z**2 * M(N(z)),
    N(z) = (-z + alpha z^2 + M(z)) / (-(1+lam) z^2 + alpha z^3 + z M(z)),

which pins down every Taylor coefficient of ``M`` at the distinguished
point ``c`` in ``(-1, 0)`` where ``N(c) = c``; ``c`` is the unique root
there of the quartic

    alpha c^4 - (1 + lam) c^3 + (1 - lam) c - alpha = 0.

This module solves the coefficient recursion order by order through
truncated-series algebra, checks it against direct quadrature of the
derivative kernels ``k! x^(k-1) / (1 - c x)^(k+1)``, and verifies the
fixed point itself by running the convolution/reciprocal pipeline.
"""

import math
from dataclasses import dataclass

import numpy as np

from .convolution import free_convolve
from .errors import DomainError, NumericError
from .measures import (FreePoissonParams, build_fgig, build_free_poisson,
                       integrate, kolmogorov_distance, pushforward_reciprocal)
from .params import NaturalParams
from .series import Series
from .transforms import cauchy

_COLLINEARITY_TOL = 1e-9


@dataclass(frozen=True)
class CoefficientSeries:
    """Taylor coefficients of an analytic function at a real center."""

    center: float
    coeffs: np.ndarray


@dataclass(frozen=True)
class CharacterizationReport:
    c: float
    series: CoefficientSeries
    oracle: CoefficientSeries
    max_rel_dev: float
    fixed_point_distance: float
    stage_distance: float = math.nan
    key_eq_residual: float = math.nan


@dataclass(frozen=True)
class IteratedReport:
    stages: tuple  # (label, kolmogorov distance) per stage
    final_distance: float


def quartic_residual(alpha, lam, c):
    return alpha * c ** 4 - (1.0 + lam) * c ** 3 + (1.0 - lam) * c - alpha


def solve_c(alpha, lam):
    """Unique root in ``(-1, 0)`` of the center quartic.

    Bisection brackets the sign change, a Newton polish brings the
    residual to machine precision.
    """
    if not (alpha > 0 and lam > 0):
        raise DomainError("both parameters must be positive")
    lo, hi = -1.0, 0.0
    f_lo = quartic_residual(alpha, lam, lo)
    f_hi = quartic_residual(alpha, lam, hi)
    if not f_lo * f_hi < 0:
        # f(-1) = 2lam > 0 > f(0) = -alpha always; guard anyway
        raise NumericError("quartic does not change sign on (-1, 0)")
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if quartic_residual(alpha, lam, mid) * f_lo > 0:
            lo = mid
        else:
            hi = mid
    c = 0.5 * (lo + hi)
    for _ in range(8):
        f = quartic_residual(alpha, lam, c)
        df = (4.0 * alpha * c ** 3 - 3.0 * (1.0 + lam) * c ** 2
              + (1.0 - lam))
        if df == 0.0:
            break
        c -= f / df
    return float(c)


def initial_coefficients(alpha, lam, c=None):
    """Zeroth and first coefficients ``(a0, a1)`` of ``M`` at ``c``.

    ``a0 = c/(1 + c^2)``; ``a1`` is the smaller root of the quadratic
    obtained from the first derivative of the functional equation, and
    lands in ``(0, 1/(1+c^2))``.
    """
    if c is None:
        c = solve_c(alpha, lam)
    a0 = c / (1.0 + c * c)
    u = 1.0 + c * c
    qa = c * u * u
    qb = (alpha * u * u - 2.0 * c) * u
    qc = -(alpha - c + alpha * c * c)
    disc = qb * qb - 4.0 * qa * qc
    if disc < 0:
        raise NumericError("first-coefficient quadratic has no real root",
                           residual=disc)
    sq = math.sqrt(disc)
    r1 = (-qb + sq) / (2.0 * qa)
    r2 = (-qb - sq) / (2.0 * qa)
    a1 = r1 if r1 < r2 else r2
    if not 0.0 < a1 < 1.0 / u:
        raise NumericError("first coefficient escaped its bracket",
                           residual=a1)
    return a0, a1


def slope_p(alpha, lam, c):
    """Linear coefficient of ``beta_n`` in ``alpha_n``: the map slope."""
    return (1.0 - c ** 4) / (c * (alpha - c + alpha * c * c))


def beta1_from_alpha1(c, a1):
    """First derivative of ``N`` at ``c`` out of the order-1 relation."""
    return (1.0 - c * c) / (a1 * c * c * (1.0 + c * c)) - 1.0 / (c * c)


def beta1_direct(alpha, lam, c, a0, a1):
    """``N'(c)`` evaluated from the quotient rule (cross-check route)."""
    num = (-lam * c ** 2 * a1
           + c ** 2 * (-1.0 - lam + 2.0 * alpha * c - alpha ** 2 * c ** 2)
           + 2.0 * c * (1.0 + lam - alpha * c) * a0 - a0 ** 2)
    den = c ** 2 * (a0 - (1.0 + lam) * c + alpha * c ** 2) ** 2
    return num / den


def _fe_residual(alpha, lam, c, coeffs, order):
    """Coefficient of order ``order`` of ``-M + z - z^2 M(N(z))``."""
    m = Series(coeffs, order=order)
    z = Series.variable(order, constant=c)
    z2 = z * z
    num = -z + alpha * z2 + m
    den = -(1.0 + lam) * z2 + alpha * (z2 * z) + z * m
    n_series = num / den
    inner = Series(n_series.c.copy())
    if abs(inner.c[0] - c) > 1e-8 * max(1.0, abs(c)):
        raise NumericError("composition center drifted",
                           residual=float(abs(inner.c[0] - c)))
    inner.c[0] = 0.0
    phi = (z - m) - z2 * m.compose(inner)
    return phi.c[order], n_series


def series_coefficients(alpha, lam, order, detail=False):
    """Coefficients of ``M`` at ``c`` from the functional equation.

    Each order's residual is affine in the unknown coefficient, so two
    evaluations solve it; a third evaluation asserts the affinity (which
    would break if the series algebra were wrong).  The returned detail
    carries the per-order slopes and the derived ``N`` coefficients.
    """
    order = int(order)
    if not 0 <= order <= 32:
        raise DomainError("series order must lie in [0, 32]")
    c = solve_c(alpha, lam)
    a0, a1 = initial_coefficients(alpha, lam, c)
    coeffs = np.zeros(order + 1)
    coeffs[0] = a0
    if order >= 1:
        coeffs[1] = a1
    slopes = []
    for n in range(2, order + 1):
        work = coeffs[: n + 1]
        work[n] = 0.0
        r0, _ = _fe_residual(alpha, lam, c, work, n)
        work[n] = 1.0
        r1, _ = _fe_residual(alpha, lam, c, work, n)
        work[n] = 2.0
        r2, _ = _fe_residual(alpha, lam, c, work, n)
        scale = max(1.0, abs(r0), abs(r1))
        if abs(r2 - 2.0 * r1 + r0) > _COLLINEARITY_TOL * scale:
            raise NumericError(
                f"order-{n} residual is not affine in the coefficient",
                residual=float(abs(r2 - 2.0 * r1 + r0)))
        slope = r1 - r0
        if slope == 0.0:
            raise NumericError(f"vanishing linear coefficient at order {n}")
        work[n] = r0 / (r0 - r1)
        slopes.append(slope)
    series = CoefficientSeries(c, coeffs)
    if not detail:
        return series
    _, n_series = _fe_residual(alpha, lam, c, coeffs, order)
    return series, {
        "slopes": np.asarray(slopes),
        "n_coeffs": n_series.c.copy(),
        "p": slope_p(alpha, lam, c),
        "a1": a1,
    }


def oracle_coefficients(alpha, lam, order, c=None, n_nodes=2048):
    """Taylor coefficients of ``M`` at ``c`` by quadrature.

    ``M(z) = G_X(1/z) = integral z/(1 - z x) dmu(x)`` for
    ``X ~ mu(alpha, alpha, -lam)``; its derivatives have the closed
    kernels ``k! x^(k-1)/(1 - z x)^(k+1)``, so no numerical
    differentiation enters.
    """
    if c is None:
        c = solve_c(alpha, lam)
    x_law = build_fgig(NaturalParams(alpha, alpha, -lam), n_nodes)
    coeffs = np.empty(int(order) + 1)
    coeffs[0] = integrate(x_law, lambda x: c / (1.0 - c * x))
    for k in range(1, int(order) + 1):
        coeffs[k] = integrate(
            x_law, lambda x, k=k: x ** (k - 1) / (1.0 - c * x) ** (k + 1))
    return CoefficientSeries(c, coeffs)


def compare_series(series, oracle):
    """Maximum relative deviation between two coefficient lists."""
    a, b = series.coeffs, oracle.coeffs
    n = min(a.size, b.size)
    scale = np.maximum(np.abs(b[:n]), 1e-30)
    return float(np.max(np.abs(a[:n] - b[:n]) / scale))


def reciprocal_cauchy_residual(m, m_recip, z):
    """Residual of ``G_{1/X}(z) = (1 - G_X(1/z)/z) / z`` at one point."""
    lhs = cauchy(m_recip, z)
    rhs = (1.0 - cauchy(m, 1.0 / z) / z) / z
    return abs(lhs - rhs)


def verify_fixed_point(alpha, lam, order=8, n_nodes=1024):
    """End-to-end check that ``mu(alpha, alpha, -lam)`` solves the fixed point.

    Builds the law of ``(X + Y)^(-1)`` through the convolution and
    reciprocal-pushforward pipeline and reports its Kolmogorov distance
    to the law of ``X``, alongside the two coefficient routes and the
    residual of the defining relation for ``c``.
    """
    if not (alpha > 0 and lam > 0):
        raise DomainError("both parameters must be positive")
    c = solve_c(alpha, lam)
    series = series_coefficients(alpha, lam, order)
    oracle = oracle_coefficients(alpha, lam, order, c=c)
    max_rel_dev = compare_series(series, oracle)

    x_law = build_fgig(NaturalParams(alpha, alpha, -lam), n_nodes)
    y_law = build_free_poisson(FreePoissonParams(1.0 / alpha, lam), n_nodes)
    s_law = free_convolve(x_law, y_law)
    stage = kolmogorov_distance(
        s_law, build_fgig(NaturalParams(alpha, alpha, lam), n_nodes))
    t_law = pushforward_reciprocal(s_law)
    distance = kolmogorov_distance(t_law, x_law)

    x_recip = pushforward_reciprocal(x_law)
    g_at_c = cauchy(x_recip, complex(c))
    key_eq = abs(1.0 / c - lam / (g_at_c.real - alpha) - c)
    return CharacterizationReport(c, series, oracle, max_rel_dev, distance,
                                  stage, key_eq)


def verify_iterated(alpha, beta, lam, n_nodes=1024):
    """Chase the two-step reciprocal chain through its closed-form laws.

    With ``X ~ mu(alpha, beta, -lam)``, ``Y2 ~ nu(1/alpha, lam)`` and
    ``Y1 ~ nu(1/beta, lam)``, each stage of
    ``(Y1 + (Y2 + X)^(-1))^(-1)`` has an explicit law in the family;
    every stage is compared against it.
    """
    if not (alpha > 0 and beta > 0 and lam > 0):
        raise DomainError("all three parameters must be positive")
    x_law = build_fgig(NaturalParams(alpha, beta, -lam), n_nodes)
    y2 = build_free_poisson(FreePoissonParams(1.0 / alpha, lam), n_nodes)
    y1 = build_free_poisson(FreePoissonParams(1.0 / beta, lam), n_nodes)

    s1 = free_convolve(x_law, y2)
    d1 = kolmogorov_distance(
        s1, build_fgig(NaturalParams(alpha, beta, lam), n_nodes))
    s2 = pushforward_reciprocal(s1)
    d2 = kolmogorov_distance(
        s2, build_fgig(NaturalParams(beta, alpha, -lam), n_nodes))
    s3 = free_convolve(s2, y1)
    d3 = kolmogorov_distance(
        s3, build_fgig(NaturalParams(beta, alpha, lam), n_nodes))
    s4 = pushforward_reciprocal(s3)
    d4 = kolmogorov_distance(s4, x_law)
    stages = (("X + Y2", d1), ("(X + Y2)^-1", d2),
              ("Y1 + (X + Y2)^-1", d3), ("full chain", d4))
    return IteratedReport(stages, d4)
