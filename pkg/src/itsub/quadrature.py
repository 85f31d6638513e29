"""Adaptive quadrature on (0, inf) for exponentially damped, possibly
oscillatory integrands.

The half line is covered by geometrically growing panels until the
integrand falls below a truncation threshold; panels are then refined by
bisecting the worst error estimate. Each panel uses the nested
Gauss7/Kronrod15 pair, with the error taken as the difference of the two
orders. Integrands must accept and return numpy arrays.
"""

from dataclasses import dataclass

import numpy as np

# Kronrod-15 abscissae on [-1, 1] (odd-indexed entries are the embedded
# Gauss-7 points) and the two weight sets.
_XK = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,
    0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759,
    0.991455371120813,
])
_WK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979,
    0.022935322010529,
])
_WG = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870,
])


class QuadratureSpecError(ValueError):
    """Invalid quadrature specification."""


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-9
    max_subdivisions: int = 2000
    truncation_threshold: float = 1e-16

    def validate(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise QuadratureSpecError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise QuadratureSpecError("max_subdivisions must be >= 1")
        if not 0 < self.truncation_threshold < 1:
            raise QuadratureSpecError("truncation_threshold must be in (0, 1)")


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    subdivisions_used: int
    converged: bool


def _gk15(f, a, b):
    """Gauss7/Kronrod15 on [a, b]: (value, error, peak |f|)."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    y = mid + half * _XK
    fy = np.asarray(f(y), dtype=float)
    vk = half * float(_WK @ fy)
    vg = half * float(_WG @ fy[1::2])
    return vk, abs(vk - vg), float(np.max(np.abs(fy)))


def _power_map(f, s):
    """Flatten an f ~ y**(s-1) endpoint singularity via y = v**(1/s)."""
    inv = 1.0 / s

    def g(v):
        v = np.asarray(v, dtype=float)
        y = v ** inv
        return f(y) * inv * y / np.where(v > 0, v, 1.0)

    return g


def integrate_semi_infinite(f, spec=None, scale=1.0, power_singularity=None):
    """Integrate f over (0, inf).

    f must be vectorized, finite on (0, inf), and decay at least
    exponentially. `scale` locates the interesting region (first panel is
    [0, scale]). `power_singularity` = s flags an integrable f ~ y**(s-1)
    behaviour at 0, handled by a power substitution on the first panel.

    Non-convergence is reported through the `converged` flag, never
    silently.
    """
    if spec is None:
        spec = QuadratureSpec()
    spec.validate()
    scale = float(scale)
    if not np.isfinite(scale) or scale <= 0:
        scale = 1.0

    # Panels as [a, b, value, error]; first panel possibly transformed.
    panels = []
    peak = 0.0

    def add_panel(fn, a, b):
        nonlocal peak
        v, e, p = _gk15(fn, a, b)
        panels.append([fn, a, b, v, e])
        peak = max(peak, p)
        return p

    if power_singularity is not None and power_singularity != 1.0:
        s = float(power_singularity)
        add_panel(_power_map(f, s), 0.0, scale ** s)
    else:
        add_panel(f, 0.0, scale)

    # Geometric tail coverage: stop once the integrand has dropped below
    # truncation_threshold * peak on a panel (and at least a few panels
    # beyond the scale have been seen).
    a = scale
    width = scale
    n_tail = 0
    while n_tail < spec.max_subdivisions:
        p = add_panel(f, a, a + width)
        a += width
        width *= 2.0
        n_tail += 1
        if p <= spec.truncation_threshold * peak and n_tail >= 4:
            break

    def totals():
        v = sum(p[3] for p in panels)
        e = sum(p[4] for p in panels)
        return v, e

    subdivisions = len(panels)
    while subdivisions < spec.max_subdivisions:
        value, error = totals()
        if error <= max(spec.abs_tol, spec.rel_tol * abs(value)):
            return QuadratureResult(value, error, subdivisions, True)
        # Bisect the worst panel; tie-break on width.
        worst = max(panels, key=lambda p: (p[4], p[2] - p[1]))
        panels.remove(worst)
        fn, pa, pb = worst[0], worst[1], worst[2]
        pm = 0.5 * (pa + pb)
        add_panel(fn, pa, pm)
        add_panel(fn, pm, pb)
        subdivisions += 1

    value, error = totals()
    converged = error <= max(spec.abs_tol, spec.rel_tol * abs(value))
    return QuadratureResult(value, error, subdivisions, converged)
