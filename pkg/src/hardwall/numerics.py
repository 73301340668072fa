"""Quadrature, root finding and Euler-Maclaurin summation.

The quadrature kernel is a globally adaptive 7/15-point Gauss-Kronrod rule
with the QUADPACK error heuristic.  Integrands are called with numpy arrays
of abscissae when they support it and point by point otherwise.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import brentq, minimize_scalar
from scipy.special import bernoulli

from .errors import IntegrandError, QuadratureError, RootBracketError, UnderflowError

__all__ = [
    "QuadratureConfig",
    "QuadResult",
    "DEFAULT_CONFIG",
    "integrate",
    "log_integrate_exp",
    "find_root_monotone",
    "euler_maclaurin_sum",
]

_EPS = np.finfo(float).eps

# Kronrod abscissae on [0, 1] (symmetric), Kronrod weights, and the weights of
# the embedded 7-point Gauss rule at the odd-indexed abscissae.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# Full 15-point node set on [-1, 1] and matching weight vectors.
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(15)
_GW[[1, 3, 5]] = _WG[:3]
_GW[[9, 11, 13]] = _WG[2::-1]
_GW[7] = _WG[3]


@dataclass(frozen=True)
class QuadratureConfig:
    """Stopping rule for :func:`integrate`."""

    rel_tol: float = 1e-12
    abs_tol: float = 1e-14
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if not self.abs_tol >= 0:
            raise ValueError("abs_tol must be non-negative")
        if int(self.max_subdivisions) < 1:
            raise ValueError("max_subdivisions must be at least 1")


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    subdivisions_used: int


def _evaluate(f, x):
    """Evaluate ``f`` on an array, falling back to a scalar loop."""
    try:
        with np.errstate(all="ignore"):
            y = np.asarray(f(x), dtype=float)
        if y.shape == x.shape:
            return y
    except (TypeError, ValueError):
        pass
    return np.array([float(f(float(xi))) for xi in x])


def _gk15_batch(f, lo, hi):
    """Apply the Gauss-Kronrod pair on many intervals in a single call of ``f``."""
    centre = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = centre[:, None] + half[:, None] * _NODES[None, :]
    y = _evaluate(f, x.ravel()).reshape(x.shape)
    bad = ~np.isfinite(y)
    if bad.any():
        i, k = np.argwhere(bad)[0]
        raise IntegrandError(
            f"integrand is not finite at x={x[i, k]!r} (value {y[i, k]!r})", x[i, k])
    kron = y @ _KW
    gauss = y @ _GW
    mean = 0.5 * kron
    resabs = np.abs(y) @ _KW
    resasc = np.abs(y - mean[:, None]) @ _KW
    err = np.abs(kron - gauss) * half
    resabs = resabs * np.abs(half)
    resasc = resasc * np.abs(half)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc != 0) & (err != 0), scaled, err)
    err = np.maximum(err, 50.0 * _EPS * resabs)
    return kron * half, err, resabs


def _gk15_mapped(g, lo, hi, from_t):
    try:
        return _gk15_batch(g, lo, hi)
    except IntegrandError as exc:
        x = from_t(exc.abscissa)
        raise IntegrandError(f"integrand is not finite at x={x!r}", x) from None


def _finite_map(f, a, b):
    """Map an (a, b) range with infinite ends onto a finite one.

    Returns ``(g, lo, hi, to_t, from_t)``; ``to_t`` sends a point in the
    original variable to the new one and ``from_t`` inverts it.
    """
    if math.isinf(a) and math.isinf(b):
        raise ValueError("doubly infinite ranges must be split by the caller")
    if math.isinf(b):
        def g(t):
            s = 1.0 - t
            return f(a + t / s) / (s * s)
        return (g, 0.0, 1.0, lambda x: (x - a) / (1.0 + (x - a)),
                lambda t: a + t / (1.0 - t))
    if math.isinf(a):
        def g(t):
            s = 1.0 - t
            return f(b - t / s) / (s * s)
        return (g, 0.0, 1.0, lambda x: (b - x) / (1.0 + (b - x)),
                lambda t: b - t / (1.0 - t))
    return f, a, b, lambda x: x, lambda t: t


def integrate(f: Callable, a: float, b: float, cfg: QuadratureConfig = DEFAULT_CONFIG,
              points: Iterable[float] | None = None) -> QuadResult:
    """Adaptive Gauss-Kronrod quadrature of ``f`` over ``[a, b]``.

    ``b`` may be ``+inf`` and ``a`` may be ``-inf`` (not both); infinite ends
    are compactified by ``x = a + t/(1 - t)``.  ``points`` are extra break
    points used for the initial partition, useful for sharply peaked
    integrands that a coarse first pass could miss entirely.

    Raises :class:`QuadratureError` carrying the partial estimate when the
    tolerance is not met within ``cfg.max_subdivisions`` bisections, and
    :class:`IntegrandError` on a non-finite integrand value.
    """
    a = float(a)
    b = float(b)
    if not a < b:
        raise ValueError(f"integration range must satisfy a < b, got [{a}, {b}]")
    if math.isinf(a) and math.isinf(b):
        left = integrate(f, a, 0.0, cfg, points)
        right = integrate(f, 0.0, b, cfg, points)
        return QuadResult(left.value + right.value,
                          left.error_estimate + right.error_estimate,
                          left.subdivisions_used + right.subdivisions_used)
    g, lo, hi, to_t, from_t = _finite_map(f, a, b)

    cuts = [lo, hi]
    if points is not None:
        for p in points:
            p = float(p)
            if a < p < b:
                cuts.append(to_t(p))
    cuts = np.unique(np.array(cuts))
    left = cuts[:-1]
    right = cuts[1:]
    keep = right - left > 0
    left, right = left[keep], right[keep]

    vals, errs, abss = _gk15_mapped(g, left, right, from_t)
    # heap of (-error, left, right, value, resabs); tiny intervals that can
    # no longer be split meaningfully are parked in `frozen`.
    heap = [(-e, l, r, v, s) for e, l, r, v, s in zip(errs, left, right, vals, abss)]
    heapq.heapify(heap)
    total = float(np.sum(vals))
    total_err = float(np.sum(errs))
    total_abs = float(np.sum(abss))
    frozen_err = 0.0
    frozen_vals = []
    subdivisions = 0

    def target():
        return max(cfg.abs_tol, cfg.rel_tol * abs(total), 100.0 * _EPS * total_abs)

    while total_err > target():
        if not heap:
            break
        if subdivisions >= cfg.max_subdivisions:
            raise QuadratureError(
                f"no convergence after {subdivisions} subdivisions: "
                f"estimate {total!r}, error {total_err!r}",
                value=total, error_estimate=total_err, subdivisions_used=subdivisions)
        neg_e, l, r, v, s = heapq.heappop(heap)
        m = 0.5 * (l + r)
        if not (l < m < r) or (r - l) <= 1e3 * _EPS * max(abs(l), abs(r)):
            frozen_err += -neg_e
            frozen_vals.append(v)
            continue
        nv, ne, ns = _gk15_mapped(g, np.array([l, m]), np.array([m, r]), from_t)
        subdivisions += 1
        total += float(nv[0] + nv[1] - v)
        total_err += float(ne[0] + ne[1] + neg_e)
        total_abs += float(ns[0] + ns[1] - s)
        heapq.heappush(heap, (-ne[0], l, m, nv[0], ns[0]))
        heapq.heappush(heap, (-ne[1], m, r, nv[1], ns[1]))

    # re-sum to shed rounding accumulated by the running updates
    total = math.fsum([item[3] for item in heap] + frozen_vals)
    if frozen_err > target():
        raise QuadratureError(
            f"roundoff limits accuracy: estimate {total!r}, error {total_err!r}",
            value=total, error_estimate=total_err, subdivisions_used=subdivisions)
    return QuadResult(total, max(total_err, 0.0), subdivisions)


def _refine_max(g, xs, gv):
    # A peak narrower than the prescan cell sits between the sampled maximum
    # and one of its neighbours; locate it so the shift is not too low.
    k = int(np.argmax(np.where(np.isfinite(gv), gv, -np.inf)))
    lo, hi = float(xs[max(k - 1, 0)]), float(xs[min(k + 1, len(xs) - 1)])
    if not lo < hi:
        return None, None

    def neg(x):
        v = float(_evaluate(g, np.array([x]))[0])
        return -v if np.isfinite(v) else np.inf

    res = minimize_scalar(neg, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-15 * max(1.0, abs(lo), abs(hi))})
    if np.isfinite(res.fun) and -res.fun > gv[k]:
        return float(res.x), -float(res.fun)
    return None, None


def _peak_scale_points(g, xs, gv, shift, drops=(1.0, 4.0, 16.0, 64.0)):
    # Peaks narrower than a prescan cell are invisible to the adaptive
    # error estimate; place break points at the level sets shift - d.
    k = int(np.nanargmax(np.where(np.isfinite(gv), gv, -np.inf)))
    out = []
    for nb in (k - 1, k + 1):
        if nb < 0 or nb >= len(xs):
            continue
        x_top, x_far = float(xs[k]), float(xs[nb])
        for d in drops:
            level = shift - d
            if not gv[nb] < level:
                continue
            lo, hi = x_top, x_far
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if mid == lo or mid == hi:
                    break
                gm = float(_evaluate(g, np.array([mid]))[0])
                if np.isfinite(gm) and gm >= level:
                    lo = mid
                else:
                    hi = mid
            out.append(0.5 * (lo + hi))
    return out


def log_integrate_exp(g: Callable, a: float, b: float,
                      cfg: QuadratureConfig = DEFAULT_CONFIG,
                      points: Sequence[float] | None = None) -> float:
    """Return ``log(integral of exp(g) over [a, b])`` without overflow.

    ``g`` is sampled on a 65-point grid (plus any ``points``) to find the
    shift ``M``; the integral of ``exp(g - M)`` is then computed adaptively
    with the sample grid as initial break points.
    """
    a = float(a)
    b = float(b)
    grid = np.linspace(a, b, 65)
    probe = grid if points is None else np.concatenate([grid, np.asarray(points, float)])
    probe = probe[(probe >= a) & (probe <= b)]
    gv = _evaluate(g, probe)
    finite = np.isfinite(gv)
    if not finite.any():
        raise UnderflowError("exponent is not finite anywhere on the prescan grid")
    order = np.argsort(probe)
    probe, gv = probe[order], gv[order]
    x_peak, g_peak = _refine_max(g, probe, gv)
    if x_peak is not None:
        probe = np.sort(np.append(probe, x_peak))
        gv = _evaluate(g, probe)
    shift = float(np.max(gv[np.isfinite(gv)]))
    cuts = list(probe[1:-1])
    cuts += _peak_scale_points(g, probe, gv, shift)

    def h(x):
        return np.exp(_evaluate(g, np.atleast_1d(np.asarray(x, float))) - shift)

    res = integrate(h, a, b, cfg, points=cuts)
    if not res.value > 0:
        raise UnderflowError(
            f"integral vanished after shifting by {shift!r}",
            shifted_estimate=res.value, shift=shift)
    return shift + math.log(res.value)


def find_root_monotone(f: Callable[[float], float], lo: float, hi: float,
                       tol: float = 1e-14) -> float:
    """Root of a continuous monotone ``f`` on ``[lo, hi]``.

    Brent's bisection/secant hybrid; the iterate never leaves the bracket.
    """
    flo = f(lo)
    fhi = f(hi)
    if flo == 0:
        return float(lo)
    if fhi == 0:
        return float(hi)
    if np.sign(flo) == np.sign(fhi):
        raise RootBracketError(
            f"no sign change on [{lo!r}, {hi!r}]: f(lo)={flo!r}, f(hi)={fhi!r}")
    return float(brentq(f, lo, hi, xtol=tol, rtol=4 * _EPS, maxiter=500))


def euler_maclaurin_sum(f: Callable, f_odd_derivs: Sequence[Callable], p: int, q: int,
                        k: int, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Approximate ``sum(f(i) for i in range(p, q + 1))`` by Euler-Maclaurin.

    ``f_odd_derivs[i]`` is the derivative of order ``2*i + 1``; at least ``k``
    of them are needed.  The result is exact, up to quadrature error, for
    polynomials of degree at most ``2*k + 1``.
    """
    if k < 1:
        raise ValueError("Euler-Maclaurin order k must be at least 1")
    if len(f_odd_derivs) < k:
        raise ValueError(f"need {k} odd derivatives, got {len(f_odd_derivs)}")
    if q < p:
        raise ValueError("require p <= q")
    fp = float(f(float(p)))
    fq = float(f(float(q)))
    if q == p:
        return fp
    integral = integrate(f, p, q, cfg).value
    bern = bernoulli(2 * k)
    terms = [integral, 0.5 * (fp + fq)]
    for i in range(1, k + 1):
        d = f_odd_derivs[i - 1]
        terms.append(bern[2 * i] / math.factorial(2 * i) * (float(d(float(q))) - float(d(float(p)))))
    return math.fsum(terms)
