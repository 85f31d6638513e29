"""Density of the inverse tempered stable subordinator.

The density h(x, t) of the first-passage process E(t) = inf{u : D(u) > t}
of a tempered stable subordinator D is evaluated by two independent
representations: a real integral over the half line and a power series
in x whose coefficients involve upper incomplete gamma functions of
negative order. Boundary behaviour at x = 0 (value, derivatives) and the
CDF complete the picture.
"""

import dataclasses
import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from .quadrature import QuadratureSpec, integrate_semi_infinite
from .special_fn import upper_incomplete_gamma_scaled
from .stable_family import (
    NonConvergenceError,
    ParameterError,
    TemperedStableParams,
)

_METHODS = ("integral", "series")


@dataclass(frozen=True)
class EvalPoint:
    """A (space, time) evaluation point; x >= 0 and t > 0 strictly."""

    x: float
    t: float

    def __post_init__(self):
        if self.x < 0:
            raise ParameterError(f"require x >= 0, got {self.x}")
        if self.t <= 0:
            raise ParameterError(f"require t > 0, got {self.t}")


@dataclass(frozen=True)
class DensityResult:
    """One density evaluation: value, error estimate, and provenance."""

    value: float
    error_estimate: float
    method: str
    terms_or_panels: int


@dataclass(frozen=True)
class EvalConfig:
    """Dispatch and accuracy knobs for density evaluation.

    The series is preferred when x * lam**beta <= series_x_threshold and
    lam * t >= series_min_lam_t (the incomplete gamma evaluation refuses
    smaller products); otherwise the integral runs first.
    """

    quadrature: QuadratureSpec = QuadratureSpec()
    max_terms: int = 400
    series_x_threshold: float = 2.0
    series_min_lam_t: float = 1e-6


_DEFAULT_CONFIG = EvalConfig()


def _integrate_damped(f, spec, scale, power_singularity):
    """Half-line quadrature with a loosened-tolerance retry.

    Oscillatory integrands with large interior amplitude hit a rounding
    noise floor above the default 1e-12 absolute tolerance even though
    the value itself is accurate; a second pass at abs_tol=1e-9 accepts
    those while keeping the honest error estimate.
    """
    if spec is None:
        spec = QuadratureSpec()
    res = integrate_semi_infinite(f, spec, scale=scale,
                                  power_singularity=power_singularity)
    if not res.converged and spec.abs_tol < 1e-9:
        res = integrate_semi_infinite(
            f, dataclasses.replace(spec, abs_tol=1e-9),
            scale=scale, power_singularity=power_singularity)
    return res


def _require_tempered(params):
    if params.lam <= 0:
        raise ParameterError(
            "tempered density requires lam > 0; use the inverse stable "
            "density for lam = 0"
        )


def eval_integral(p, params, spec=None):
    """Density h(x, t) by the half-line integral representation.

    h = (exp(lam**beta * x - lam * t) / pi) * I with
    I = int_0^inf exp(-t*y - x*y**beta*cos(beta*pi)) / (y + lam)
        * [lam**beta * sin(x*y**beta*sin(beta*pi))
           + y**beta * sin(beta*pi - x*y**beta*sin(beta*pi))] dy.
    """
    _require_tempered(params)
    if p.x <= 0:
        raise ParameterError("integral form needs x > 0; use boundary_value")
    beta, lam = params.beta, params.lam
    x, t = p.x, p.t
    c = math.cos(beta * math.pi)
    s = math.sin(beta * math.pi)
    lb = lam ** beta
    # Fold the exp(lam**beta * x - lam * t) prefactor into the integrand
    # exponent so large x cannot overflow the panel evaluations.
    shift = lb * x - lam * t

    def integrand(y):
        yb = y ** beta
        phase = x * yb * s
        return (np.exp(shift - t * y - x * yb * c) / (y + lam)
                * (lb * np.sin(phase) + yb * np.sin(beta * math.pi - phase)))

    res = _integrate_damped(integrand, spec, 1.0 / t, beta)
    if not res.converged:
        raise NonConvergenceError(
            f"density integral did not converge at x={x}, t={t}, "
            f"beta={beta}, lam={lam}"
        )
    return DensityResult(res.value / math.pi, res.error_estimate / math.pi,
                         "integral", res.subdivisions_used)


def _series_coefficients(params, t, n):
    """Log-magnitude and sign of A_j = Gamma(1+beta*j) * lam**(beta*j)
    * Gamma(-beta*j, lam*t) * sin(j*beta*pi) for j = 0..n.

    The incomplete gamma enters through its scaled form
    lam**(beta*j) * Gamma(-beta*j, u) = t**(-beta*j) * g(-beta*j, u),
    which keeps every factor in double range.
    """
    beta, lam = params.beta, params.lam
    u = lam * t
    log_mag = np.empty(n + 1)
    sign = np.empty(n + 1)
    log_mag[0] = -math.inf
    sign[0] = 0.0
    lt = math.log(t)
    for j in range(1, n + 1):
        sn = math.sin(j * beta * math.pi)
        if sn == 0.0:
            log_mag[j] = -math.inf
            sign[j] = 0.0
            continue
        g = upper_incomplete_gamma_scaled(-beta * j, u)
        log_mag[j] = (sp.gammaln(1.0 + beta * j) - beta * j * lt
                      + math.log(g) + math.log(abs(sn)))
        sign[j] = math.copysign(1.0, sn)
    return log_mag, sign


def eval_series(p, params, max_terms=None):
    """Density h(x, t) by the power series in x.

    h = (exp(lam**beta * x) / pi) * sum_k (-1)**k x**k / k! * (A_{k+1} - A_k)
    with A_j as in _series_coefficients. The error estimate is the first
    omitted term; the convergence flag requires the terms to have entered
    decay before truncation.
    """
    _require_tempered(params)
    if max_terms is None:
        max_terms = _DEFAULT_CONFIG.max_terms
    beta, lam = params.beta, params.lam
    x, t = p.x, p.t
    log_A, sign_A = _series_coefficients(params, t, max_terms + 1)
    # The k-th term carries lam**(beta*(k+1)) against both bracket halves;
    # A_k only absorbs lam**(beta*k), so the trailing half gains lam**beta.
    log_lb = beta * math.log(lam)
    lx = math.log(x) if x > 0 else -math.inf

    total = 0.0
    peak = 0.0
    prev_abs = math.inf
    decaying = False
    term = 0.0
    used = 0
    for k in range(max_terms):
        # log of x**k / k!
        lw = k * lx - sp.gammaln(k + 1.0) if x > 0 else (0.0 if k == 0 else None)
        if lw is None:
            used = k
            term = 0.0
            decaying = True
            break
        la, sa = log_A[k + 1] + lw, sign_A[k + 1]
        lb_, sb = log_A[k] + lw + log_lb, sign_A[k]
        if max(la, lb_) > 700.0:
            return DensityResult(total, abs(total), "series", k)
        term = (-1.0) ** k * (sa * math.exp(la) - sb * math.exp(lb_))
        total += term
        peak = max(peak, abs(term))
        used = k + 1
        if abs(term) <= prev_abs:
            decaying = True
        if decaying and abs(term) < 1e-15 * max(abs(total), 1e-300) and k >= 2:
            break
        prev_abs = abs(term)
    pref = math.exp(lam ** beta * x) / math.pi
    cancel = peak * 1e-16
    err = pref * (abs(term) + cancel)
    value = pref * total
    converged = decaying and (cancel <= max(1e-13, 1e-8 * abs(total)))
    if not converged:
        return DensityResult(value, max(err, abs(value)), "series", used)
    return DensityResult(value, err, "series", used)


def eval(p, params, config=None):
    """Density h(x, t), dispatching between series and integral.

    Exact x = 0 routes to boundary_value; the series handles small
    x * lam**beta, the integral the rest, each falling back to the other
    on non-convergence.
    """
    if config is None:
        config = _DEFAULT_CONFIG
    _require_tempered(params)
    if p.x == 0:
        return DensityResult(boundary_value(p.t, params), 1e-12, "series", 1)
    series_ok = (p.x * params.lam ** params.beta <= config.series_x_threshold
                 and params.lam * p.t >= config.series_min_lam_t)
    if series_ok:
        res = eval_series(p, params, config.max_terms)
        if res.error_estimate <= 1e-8 * max(1.0, abs(res.value)):
            return res
    try:
        return eval_integral(p, params, config.quadrature)
    except NonConvergenceError:
        if series_ok:
            return eval_series(p, params, config.max_terms)
        raise


def boundary_value(t, params):
    """lim_{x -> 0+} h(x, t) = (sin(beta*pi)/pi) * lam**beta * Gamma(1+beta)
    * Gamma(-beta, lam*t).

    For lam * t below the incomplete-gamma floor the small-argument
    expansion of the scaled gamma is used; the lam -> 0 limit is
    t**(-beta) / Gamma(1 - beta).
    """
    if t <= 0:
        raise ParameterError(f"require t > 0, got {t}")
    beta, lam = params.beta, params.lam
    if lam < 0:
        raise ParameterError(f"require lam >= 0, got {lam}")
    u = lam * t
    if u < 1e-8:
        # g(-beta, u) = Gamma(-beta, u) * u**beta -> 1/beta as u -> 0.
        g = 1.0 / beta + sp.gamma(-beta) * u ** beta + u / (1.0 - beta)
    else:
        g = upper_incomplete_gamma_scaled(-beta, u)
    return (math.sin(beta * math.pi) / math.pi
            * sp.gamma(1.0 + beta) * t ** (-beta) * g)


def derivative_at_zero(k, t, params, spec=None):
    """k-th x-derivative of h(x, t) at x = 0+.

    For lam > 0 this is the half-line integral
        (exp(-lam*t)/pi) * int_0^inf exp(-t*y)/(y+lam) * rho**k
            * [lam**beta * sin(k*alpha)
               + y**beta * sin(beta*pi - k*alpha)] dy
    with rho, alpha the polar form of lam**beta - y**beta * exp(i*beta*pi)
    (alpha from the two-argument arctangent). For lam = 0 the closed form
    (-1)**k * t**(-(k+1)*beta) / Gamma(1 - (k+1)*beta) applies while
    (k+1)*beta <= 1.
    """
    if k < 0 or k != int(k):
        raise ParameterError(f"require integer k >= 0, got {k}")
    if t <= 0:
        raise ParameterError(f"require t > 0, got {t}")
    k = int(k)
    beta, lam = params.beta, params.lam
    if lam == 0:
        if (k + 1) * beta > 1.0:
            raise ParameterError(
                f"derivative order k={k} needs (k+1)*beta <= 1 when lam=0, "
                f"got beta={beta}"
            )
        return (-1.0) ** k * t ** (-(k + 1) * beta) * sp.rgamma(1.0 - (k + 1) * beta)
    if k == 0:
        return boundary_value(t, params)
    c = math.cos(beta * math.pi)
    s = math.sin(beta * math.pi)
    lb = lam ** beta

    def integrand(y):
        yb = y ** beta
        rho = np.sqrt(lb * lb + yb * yb - 2.0 * lb * yb * c)
        alpha = np.arctan2(yb * s, lb - yb * c)
        ka = k * alpha
        return (np.exp(-t * y) / (y + lam) * rho ** k
                * (lb * np.sin(ka) + yb * np.sin(beta * math.pi - ka)))

    res = _integrate_damped(integrand, spec, 1.0 / t, beta)
    if not res.converged:
        raise NonConvergenceError(
            f"derivative integral did not converge at k={k}, t={t}, "
            f"beta={beta}, lam={lam}"
        )
    return math.exp(-lam * t) / math.pi * res.value


def cdf(x, t, params, spec=None):
    """P(E(t) <= x) by the half-line integral

    (exp(lam**beta * x) / pi) * int_0^inf exp(-t*(lam+u))/(lam+u)
        * exp(-x*u**beta*cos(beta*pi)) * sin(x*u**beta*sin(beta*pi)) du.
    """
    if t <= 0:
        raise ParameterError(f"require t > 0, got {t}")
    if x <= 0:
        return 0.0
    beta, lam = params.beta, params.lam
    if lam ** beta * x > 20.0:
        # The direct integral carries an exp(lam**beta * x) prefactor
        # against a cancelling oscillatory integral; far in the tail the
        # complementary form P(E(t) > x) = P(D(x) < t) is stable instead.
        from scipy.integrate import quad as _quad

        from .stable_family import tempered_density

        tail, _ = _quad(lambda v: tempered_density(v, x, params), 0.0, t,
                        limit=200)
        return min(max(1.0 - tail, 0.0), 1.0)
    c = math.cos(beta * math.pi)
    s = math.sin(beta * math.pi)

    def integrand(u):
        ub = u ** beta
        return (np.exp(-t * (lam + u) - x * ub * c) / (lam + u)
                * np.sin(x * ub * s))

    res = _integrate_damped(integrand, spec, 1.0 / t, beta)
    if not res.converged:
        raise NonConvergenceError(
            f"cdf integral did not converge at x={x}, t={t}, "
            f"beta={beta}, lam={lam}"
        )
    value = math.exp(lam ** beta * x) / math.pi * res.value
    return min(max(value, 0.0), 1.0)
