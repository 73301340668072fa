"""The six universal constants and the identities tying them together.

Each constant is an integral of ``Phi = log(erfc/2)`` or ``Phi'`` over a
half line.  Integrands on the negative side decay like a Gaussian and are
cut at ``x = -40``.  On the positive side the polynomial counterterms leave
an algebraic tail; the integral is taken numerically on ``[0, 20]`` and the
remainder is added from the large-``x`` expansion of the integrand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction as Fr

import numpy as np
from scipy import special

from .numerics import DEFAULT_CONFIG, QuadratureConfig, integrate
from .specfun import log_half_erfc, phi_prime

__all__ = [
    "UniversalConstants", "compute_universal_constants", "identity_residuals",
    "beta_tilde", "GAUSSIAN_CUTOFF", "TAIL_START",
]

GAUSSIAN_CUTOFF = 40.0
TAIL_START = 20.0
_SQRT_PI = math.sqrt(math.pi)

# Coefficients c_k of u**k, u = 1/x, in the large-x expansion of each
# positive-side integrand.
_TAIL_ALPHA_OUT = [0, 0, 1, Fr(-5, 2), 1, Fr(15, 4), 1, Fr(-175, 8), 1, Fr(1815, 16), 1,
                   Fr(-23875, 32), 1, Fr(358275, 64)]
_TAIL_BETA_OUT = [0, 0, 0, Fr(-3, 2), 0, Fr(27, 4), 0, Fr(-279, 8), 0, Fr(3375, 16), 0,
                  Fr(-47043, 32), 0, Fr(743787, 64)]
_TAIL_LOG_W = [0, 0, Fr(-1, 2), 0, Fr(5, 8), 0, Fr(-37, 24), 0, Fr(353, 64), 0,
               Fr(-4081, 160), 0, Fr(55205, 384)]
_TAIL_BETA_TILDE_OUT = [0, 0, 0, -1, 0, Fr(121, 24), 0, Fr(-873, 32), 0, Fr(27023, 160), 0,
                        Fr(-114491, 96), 0, Fr(8514861, 896)]


def _tail(coefs, t):
    """Integral over ``[t, inf)`` of ``sum_k c_k x**-k`` and a size bound of the last term."""
    terms = [float(c) * t ** (1 - k) / (k - 1) for k, c in enumerate(coefs) if k >= 2]
    return math.fsum(terms), abs(terms[-1])


_CF_START = 2.0
_CF_DEPTH = 80


def _w_minus_one(x):
    """``sqrt(pi) x erfcx(x) - 1`` without cancellation at large ``x``.

    For ``x >= 2`` the Laplace continued fraction
    ``sqrt(pi) erfcx(x) = 1/(x + K)``, ``K = (1/2)/(x + 1/(x + (3/2)/(x + ...)))``
    gives ``w - 1 = -K/(x + K)`` directly.
    """
    x = np.asarray(x, dtype=float)
    k = np.zeros_like(x)
    xc = np.maximum(x, _CF_START)
    for n in range(_CF_DEPTH, 0, -1):
        k = (n / 2) / (xc + k)
    cf = -k / (xc + k)
    direct = _SQRT_PI * x * special.erfcx(x) - 1.0
    out = np.where(x >= _CF_START, cf, direct)
    return out if out.ndim else float(out)


def _w(x):
    # sqrt(pi) x erfcx(x), tends to 1 as x grows
    return 1.0 + _w_minus_one(x)


def _alpha_in(x):
    return (x * x - 2) / 3 * phi_prime(x)


def _beta_in(x):
    return -(x * x + 1) / 6 * phi_prime(x)


def _gamma_in(x):
    return log_half_erfc(x)


def _alpha_out(x):
    # x(2x^2-3) + (x^2-2) Phi'(x) with Phi' = -2x/w, regrouped around w - 1
    m = _w_minus_one(x)
    return x * (2 * x * x * m + 1 - 3 * m) / (3 * (1 + m)) - 1 / (x + 1)


def _beta_out_raw(x):
    m = _w_minus_one(x)
    return x * (2 * x * x * m + 1 + 3 * m) / (1 + m)


def _log_sqrtpi_erfcx(x):
    return np.log(_SQRT_PI * special.erfcx(x))


def _log_w(x):
    return np.log1p(_w_minus_one(x))


def beta_tilde_in_integrand(y):
    """``2 y Phi(y) + (5 y**2 - 1) Phi'(y) / 6`` for ``y <= 0``."""
    return 2 * y * log_half_erfc(y) + (5 * y * y - 1) * phi_prime(y) / 6


def beta_tilde_out_integrand(y):
    """Counterterm-regularized integrand of the outer beta-tilde integral, ``y > 0``.

    Algebraically equal to ``g(y) + 11 y**3/3 + 2 y log y + (1/2 + 2 log(2 sqrt(pi))) y``
    but written with ``w = sqrt(pi) y erfcx(y)`` so nothing cancels at large ``y``.
    """
    m = _w_minus_one(y)
    w = 1 + m
    return 2 * y * np.log1p(m) + (5 * y**3 / 3) * (m / w) + y / (3 * w) + y / 2


def beta_tilde_out_integrand_naive(y):
    """The same integrand assembled term by term, for cross-checks at moderate ``y``."""
    g = beta_tilde_in_integrand(y)
    return (g + 11 * y**3 / 3 + 2 * y * np.log(y)
            + (0.5 + 2 * math.log(2 * _SQRT_PI)) * y)


@dataclass(frozen=True)
class UniversalConstants:
    """The six potential-independent constants with quadrature error estimates."""

    alpha_in: float
    beta_in: float
    gamma_in: float
    alpha_out: float
    beta_out: float
    gamma_out: float
    errors: dict = field(default_factory=dict, compare=False)

    def as_dict(self):
        names = ("alpha_in", "beta_in", "gamma_in", "alpha_out", "beta_out", "gamma_out")
        return {n: getattr(self, n) for n in names}


def _neg(f, cfg):
    r = integrate(f, -GAUSSIAN_CUTOFF, 0.0, cfg)
    return r.value, r.error_estimate


def _pos(f, coefs, cfg):
    r = integrate(f, 0.0, TAIL_START, cfg, points=[1.0, 4.0])
    tail, tail_err = _tail(coefs, TAIL_START)
    return r.value + tail, r.error_estimate + tail_err


@lru_cache(maxsize=8)
def compute_universal_constants(cfg: QuadratureConfig = DEFAULT_CONFIG) -> UniversalConstants:
    """Evaluate the six universal constants; results are cached per configuration."""
    a_in, ea_in = _neg(_alpha_in, cfg)
    b_in, eb_in = _neg(_beta_in, cfg)
    g_in, eg_in = _neg(_gamma_in, cfg)
    a_out, ea_out = _pos(_alpha_out, _TAIL_ALPHA_OUT, cfg)
    b_raw, eb_raw = _pos(_beta_out_raw, _TAIL_BETA_OUT, cfg)

    head = integrate(_log_sqrtpi_erfcx, 0.0, 1.0, cfg)
    mid = integrate(_log_w, 1.0, TAIL_START, cfg, points=[4.0])
    tail, tail_err = _tail(_TAIL_LOG_W, TAIL_START)
    # the log x part of log w over [0, 1] integrates to -1
    g_raw = head.value - 1.0 + mid.value + tail
    eg_raw = head.error_estimate + mid.error_estimate + tail_err

    s = 1 / math.sqrt(2)
    return UniversalConstants(
        alpha_in=a_in, beta_in=b_in, gamma_in=-s * g_in,
        alpha_out=a_out, beta_out=-b_raw / 6, gamma_out=-s * g_raw,
        errors={"alpha_in": ea_in, "beta_in": eb_in, "gamma_in": s * eg_in,
                "alpha_out": ea_out, "beta_out": eb_raw / 6, "gamma_out": s * eg_raw},
    )


def identity_residuals(c: UniversalConstants) -> tuple[float, float]:
    """``(beta_in + alpha_in/2 - log(2)/2, beta_out + alpha_out/2 - log(pi)/4)``."""
    return (c.beta_in + c.alpha_in / 2 - math.log(2) / 2,
            c.beta_out + c.alpha_out / 2 - math.log(math.pi) / 4)


def beta_tilde(side: str, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """The alternative integral representations of ``beta_in`` and ``beta_out``.

    Parameters
    ----------
    side : {"in", "out"}
    """
    if side == "in":
        return integrate(beta_tilde_in_integrand, -GAUSSIAN_CUTOFF, 0.0, cfg).value
    if side == "out":
        r = integrate(beta_tilde_out_integrand, 0.0, TAIL_START, cfg, points=[1.0, 4.0])
        return 0.5 + r.value + _tail(_TAIL_BETA_TILDE_OUT, TAIL_START)[0]
    raise ValueError(f"side must be 'in' or 'out', got {side!r}")
