"""Gamma-family special functions, including the upper incomplete gamma
function at negative (non-integer or integer) order.

The negative-order evaluation works on the scaled quantity
g(a, u) = Gamma(a, u) * u**(-a), which stays in double range even for
very negative orders, using the downward recurrence

    g(a - 1, u) = (u * g(a, u) - exp(-u)) / (a - 1)

for small u and a Lentz-type continued fraction for large u, where the
recurrence amplifies rounding error.
"""

import math

from scipy import special as sp


class GammaPoleError(ValueError):
    """Gamma evaluated at a non-positive integer."""


class GammaDomainError(ValueError):
    """Incomplete gamma arguments outside the supported domain."""


# Refuse extrapolation below this lower limit for non-positive orders;
# callers needing the u -> 0 behaviour must use the asymptotic form
# Gamma(a, u) ~ -u**a / a explicitly.
_MIN_U_NONPOS_ORDER = 1e-8

_CF_MAX_ITER = 500
_CF_TINY = 1e-300


def gamma(a):
    """Complete gamma function Gamma(a).

    Raises GammaPoleError at the poles a = 0, -1, -2, ...
    """
    if a <= 0 and a == math.floor(a):
        raise GammaPoleError(f"gamma pole at a = {a}")
    return sp.gamma(a)


def _upper_gamma_cf_scaled(a, u):
    """Gamma(a, u) * u**(-a) by the Legendre continued fraction.

    Modified Lentz iteration; valid for any real a when u > 0, rapidly
    convergent for u >= |a| + 1 or so.
    """
    b = u + 1.0 - a
    c = 1.0 / _CF_TINY
    d = 1.0 / b if b != 0.0 else 1.0 / _CF_TINY
    h = d
    for i in range(1, _CF_MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = b + an / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    # h approximates Gamma(a,u) * u**(-a) * exp(u) / u ... rearranged:
    # Gamma(a,u) = exp(-u) * u**a * h  =>  scaled value is exp(-u) * h.
    return math.exp(-u) * h


def _upper_gamma_scaled_nonpos(a, u):
    """g(a, u) = Gamma(a, u) * u**(-a) for a <= 0, u > 0."""
    # The continued fraction converges to machine accuracy for negative
    # orders once u is not tiny, but degrades for small |a| with small u.
    # The downward recurrence is stable there: u below the recurrence
    # denominators keeps the endpoint term dominant.
    if u >= 0.05 and not (a > -3.0 and u < 2.0):
        return _upper_gamma_cf_scaled(a, u)
    emu = math.exp(-u)
    if a == math.floor(a):
        # Integer chain seeded at Gamma(0, u) = E1(u).
        g = sp.exp1(u)
        n = int(-a)
    else:
        # Seed at a0 = a + n in (1, 2], where scipy's regularized
        # gammaincc is accurate, then recur downward.
        n = math.ceil(-a) + 1
        a0 = a + n
        g = sp.gammaincc(a0, u) * sp.gamma(a0) * u ** (-a0)
    for k in range(1, n + 1):
        g = (u * g - emu) / (a + n - k)
    return g


def upper_incomplete_gamma_scaled(a, u):
    """Scaled upper incomplete gamma Gamma(a, u) * u**(-a).

    This form stays representable for very negative a where the plain
    value would overflow; as u -> 0 it tends to -1/a for a < 0.
    """
    if u <= 0:
        raise GammaDomainError(f"require u > 0, got u = {u}")
    if a > 0:
        return sp.gammaincc(a, u) * sp.gamma(a) * u ** (-a)
    if u < _MIN_U_NONPOS_ORDER:
        raise GammaDomainError(
            f"refusing Gamma(a, u) for a <= 0 and u = {u} < {_MIN_U_NONPOS_ORDER}; "
            "use the small-u asymptotic Gamma(a, u) ~ -u**a / a instead"
        )
    return _upper_gamma_scaled_nonpos(a, u)


def upper_incomplete_gamma(a, u):
    """Upper incomplete gamma Gamma(a, u) = int_u^inf y**(a-1) exp(-y) dy.

    Defined for any real order a when u > 0. Target relative accuracy
    1e-10 on a in [-10, 10], u in [1e-8, 50].
    """
    if u <= 0:
        raise GammaDomainError(f"require u > 0, got u = {u}")
    if a > 0:
        return sp.gammaincc(a, u) * sp.gamma(a)
    if u < _MIN_U_NONPOS_ORDER:
        raise GammaDomainError(
            f"refusing Gamma(a, u) for a <= 0 and u = {u} < {_MIN_U_NONPOS_ORDER}; "
            "use the small-u asymptotic Gamma(a, u) ~ -u**a / a instead"
        )
    return _upper_gamma_scaled_nonpos(a, u) * u ** a


def weighted_exp_integral(p, q, t):
    """int_0^inf exp(-t*y) * y**p / (y + q) dy for p > -1, q > 0, t > 0.

    Evaluated through the identity
        Gamma(p+1) * q**p * exp(q*t) * Gamma(-p, q*t).
    """
    if p <= -1:
        raise GammaDomainError(f"require p > -1, got p = {p}")
    if q <= 0:
        raise GammaDomainError(f"require q > 0, got q = {q}")
    if t <= 0:
        raise GammaDomainError(f"require t > 0, got t = {t}")
    u = q * t
    # Gamma(p+1) q^p e^(qt) Gamma(-p, qt) with the scaled form:
    # q^p * Gamma(-p, u) = q^p * g * u^p = t^(-p) * g.
    g = upper_incomplete_gamma_scaled(-p, u)
    return sp.gamma(p + 1.0) * t ** (-p) * math.exp(u) * g
