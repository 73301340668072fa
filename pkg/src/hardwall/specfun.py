"""Special functions: scaled erfc, Phi and Phi', log-gamma, lower incomplete gamma.

All functions are scalar and pure.  ``erfcx``, ``log_half_erfc`` and
``phi_prime`` also accept numpy arrays.
"""

import math

import numpy as np
from scipy import special

from .errors import ConvergenceError

__all__ = [
    "erfcx", "log_half_erfc", "phi_prime", "log_gamma", "log_factorial",
    "gamma_p_series", "gamma_q_continued_fraction", "gamma_p", "gamma_q",
    "log_lower_gamma", "zeta_prime_minus_one", "ZETA_PRIME_MINUS_ONE",
]

ZETA_PRIME_MINUS_ONE = -0.16542114370045092
_SQRT_PI = math.sqrt(math.pi)
_ERFCX_OVERFLOW = -26.5
_EPS = np.finfo(float).eps
_TINY = 1e-300


def erfcx(x):
    """Scaled complementary error function ``exp(x**2) * erfc(x)``.

    Raises
    ------
    OverflowError
        If any ``x < -26.5``, where the result exceeds the float range.
        Use :func:`log_half_erfc` there instead.
    """
    xa = np.asarray(x, dtype=float)
    if np.any(xa < _ERFCX_OVERFLOW):
        raise OverflowError("erfcx overflows for x < -26.5; use log_half_erfc")
    out = special.erfcx(xa)
    return float(out) if out.ndim == 0 else out


def log_half_erfc(x):
    """``Phi(x) = log(erfc(x) / 2)``, accurate for any finite ``x``.

    For ``x >= 0`` the scaled form ``log(erfcx(x)/2) - x**2`` avoids
    underflow; for ``x < 0`` we use ``log1p(-erfc(-x)/2)`` which keeps the
    tiny negative values near ``x = -inf``.
    """
    xa = np.asarray(x, dtype=float)
    pos = xa >= 0
    xp = np.where(pos, xa, 0.0)
    xn = np.where(pos, 0.0, xa)
    out = np.where(pos,
                   np.log(special.erfcx(xp) / 2) - xp * xp,
                   np.log1p(-special.erfc(-xn) / 2))
    return float(out) if out.ndim == 0 else out


def phi_prime(x):
    """Derivative of ``Phi``, ``-2 exp(-x**2) / (sqrt(pi) erfc(x))``.

    Evaluated as ``-2 / (sqrt(pi) erfcx(x))`` for ``x >= 0``; for negative
    ``x`` the Gaussian factor is kept explicit so no overflow occurs.
    """
    xa = np.asarray(x, dtype=float)
    pos = xa >= 0
    xp = np.where(pos, xa, 0.0)
    xn = np.where(pos, 0.0, xa)
    out = np.where(pos,
                   -2.0 / (_SQRT_PI * special.erfcx(xp)),
                   -2.0 * np.exp(-xn * xn) / (_SQRT_PI * special.erfc(xn)))
    return float(out) if out.ndim == 0 else out


def log_gamma(x):
    """``log Gamma(x)`` for ``x > 0``."""
    x = float(x)
    if not x > 0:
        raise ValueError(f"log_gamma needs x > 0, got {x!r}")
    return math.lgamma(x)


def log_factorial(n):
    """``log(n!)`` for a non-negative integer ``n``."""
    if int(n) != n or n < 0:
        raise ValueError(f"log_factorial needs a non-negative integer, got {n!r}")
    return math.lgamma(int(n) + 1.0)


def _check_args(a, z):
    a = float(a)
    z = float(z)
    if not a > 0:
        raise ValueError(f"incomplete gamma needs a > 0, got a={a!r}")
    if not z >= 0:
        raise ValueError(f"incomplete gamma needs z >= 0, got z={z!r}")
    return a, z


def _stirling_error(a):
    # log Gamma(a+1) - (a log a - a + log(2 pi a)/2)
    if a < 15.0:
        return math.lgamma(a + 1.0) - (a * math.log(a) - a + 0.5 * math.log(2 * math.pi * a))
    r = 1.0 / (a * a)
    return (1 / 12 - r * (1 / 360 - r * (1 / 1260 - r * (1 / 1680 - r / 1188)))) / a


def _log1pmx(x):
    # log(1 + x) - x; the series avoids cancellation for small |x|
    if abs(x) >= 0.5:
        return math.log1p(x) - x
    total, term, k = 0.0, x, 1
    while True:
        k += 1
        term *= -x
        add = term / k
        total += add
        if abs(add) <= 1e-17 * abs(total):
            return total


def _log_prefactor(a, z):
    # log(z^a e^{-z} / Gamma(a+1)) without cancelling terms of size a log a
    x = (z - a) / a
    return (a * _log1pmx(x) - 0.5 * math.log(2 * math.pi * a)
            - _stirling_error(a))


def _log_p_series(a, z, max_iter):
    # P(a, z) = z^a e^{-z} / Gamma(a+1) * sum_n z^n / ((a+1)...(a+n)).
    # The running term is rescaled so the sum never overflows.
    log_scale = 0.0
    term = 1.0
    total = 1.0
    ap = a
    for _ in range(max_iter):
        ap += 1.0
        term *= z / ap
        total += term
        if total > 1e280:
            log_scale += math.log(total)
            term /= total
            total = 1.0
        if term < total * _EPS * 0.25 and ap > z:
            return _log_prefactor(a, z) + log_scale + math.log(total)
    raise ConvergenceError(f"incomplete gamma series did not converge for a={a!r}, z={z!r}")


def _log_q_continued_fraction(a, z, max_iter):
    # Modified Lentz evaluation of the continued fraction for Gamma(a, z).
    b = z + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b if b != 0 else 1.0 / _TINY
    h = d
    for i in range(1, max_iter + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 2 * _EPS:
            if not h > 0:
                break
            return _log_prefactor(a, z) + math.log(a) + math.log(h)
    raise ConvergenceError(
        f"incomplete gamma continued fraction did not converge for a={a!r}, z={z!r}")


def gamma_p_series(a, z, max_iter=1_000_000):
    """Regularized lower incomplete gamma ``P(a, z)`` by its power series alone."""
    a, z = _check_args(a, z)
    if z == 0:
        return 0.0
    return math.exp(_log_p_series(a, z, max_iter))


def gamma_q_continued_fraction(a, z, max_iter=1_000_000):
    """Regularized upper incomplete gamma ``Q(a, z)`` by its continued fraction alone."""
    a, z = _check_args(a, z)
    if z == 0:
        return 1.0
    return math.exp(_log_q_continued_fraction(a, z, max_iter))


def _log_p(a, z, max_iter=1_000_000):
    if z == 0:
        return -math.inf
    if z < a + 1.0:
        return _log_p_series(a, z, max_iter)
    return math.log1p(-math.exp(_log_q_continued_fraction(a, z, max_iter)))


def gamma_p(a, z):
    """Regularized lower incomplete gamma ``P(a, z)``.

    Series for ``z < a + 1``, otherwise the complement of the continued
    fraction for ``Q``.
    """
    a, z = _check_args(a, z)
    return math.exp(_log_p(a, z))


def gamma_q(a, z):
    """Regularized upper incomplete gamma ``Q(a, z) = 1 - P(a, z)``."""
    a, z = _check_args(a, z)
    if z == 0:
        return 1.0
    if z < a + 1.0:
        return -math.expm1(_log_p_series(a, z, 1_000_000))
    return math.exp(_log_q_continued_fraction(a, z, 1_000_000))


def log_lower_gamma(a, z):
    """``log gamma(a; z)``, the log of the unregularized lower incomplete gamma.

    Computed as ``log P(a, z) + log Gamma(a)`` so that ``a`` and ``z`` of
    order ``1e5`` or more stay in range.

    Returns
    -------
    float
        ``-inf`` when ``z == 0``.
    """
    a, z = _check_args(a, z)
    return _log_p(a, z) + math.lgamma(a)


def zeta_prime_minus_one():
    """The constant ``zeta'(-1)``."""
    return ZETA_PRIME_MINUS_ONE
