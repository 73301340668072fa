"""Large-N asymptotics of the individual radial moments ``u_j``.

With ``tau = j/N`` the exponent ``V_tau(r) = q(r) - 2 tau log r`` has its
minimum at ``r_tau``.  When ``r_tau`` lies beyond the wall (``tau > tau0``)
the integral is dominated by the endpoint ``r = 1``; when it lies inside,
by a Gaussian around ``r_tau``; near ``tau = tau0`` the two merge through
an error-function profile in the scaled variable ``x``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import RegimeError
from .potential import RadialPotential, _solve_r_dq, v_tau
from .specfun import log_factorial

__all__ = [
    "TermTag", "TermRegime", "KernelValues", "kernels_outer", "kernels_inner",
    "scaled_x", "near_window", "origin_window",
    "log_uj_outer_interp", "log_uj_outer_far", "log_uj_outer_near",
    "b_correction", "log_uj_inner_far", "log_uj_inner_near",
    "log_uj_disk_origin", "classify_term", "log_uj_asymptotic",
]

_SQRT_PI = math.sqrt(math.pi)
_LOG_2PI = math.log(2 * math.pi)
ORIGIN_EXPONENT = 1 / 6


class TermTag(str, enum.Enum):
    OUTER_FAR = "OuterFar"
    OUTER_NEAR = "OuterNear"
    OUTER_INTERP = "OuterInterp"
    INNER_NEAR = "InnerNear"
    INNER_FAR = "InnerFar"
    DISK_ORIGIN = "DiskOrigin"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class TermRegime:
    """Which expansion was used for a term, with its scaled coordinate if any."""

    tag: TermTag
    x: float | None = None


@dataclass(frozen=True)
class KernelValues:
    f: float
    h: float
    side: str


def kernels_outer(x: float, dlog_dq: float) -> KernelValues:
    """Profile functions ``f1``, ``h1`` for terms just beyond the wall (``x >= 0``).

    Parameters
    ----------
    dlog_dq : float
        ``d/dr Delta Q(1) / Delta Q(1)``.
    """
    f1 = _SQRT_PI / 2 * float(special.erfcx(x))
    h1 = ((x * x - 2) - x * (2 * x * x - 3) * f1) / 3 \
        + dlog_dq / 6 * ((x * x + 1) - x * (2 * x * x + 3) * f1)
    return KernelValues(f1, h1, "outer")


def kernels_inner(x: float, dlog_dq: float) -> KernelValues:
    """Profile functions ``f2``, ``h2`` for terms just inside the wall (``x <= 0``)."""
    f2 = float(special.erfc(x)) / 2
    g = math.exp(-x * x) / _SQRT_PI
    h2 = g * (x * x - 2) / 3 + dlog_dq * g * (x * x + 1) / 6
    return KernelValues(f2, h2, "inner")


def _wall_data(pot):
    dq1 = float(pot.laplacian(1.0, 0))
    ddq1 = float(pot.laplacian(1.0, 1))
    tau0 = float(pot.derivative(1.0, 1)) / 2
    return dq1, ddq1, tau0


def scaled_x(pot: RadialPotential, n: int, tau: float) -> float:
    """``x = sqrt(2N / Delta Q(1)) (tau - tau0)`` with the unclamped ``tau0 = q'(1)/2``."""
    dq1, _, tau0 = _wall_data(pot)
    return math.sqrt(2 * n / dq1) * (tau - tau0)


def near_window(n: int) -> float:
    """Half-width ``log(N)**1.5 / sqrt(N)`` of the transition layer around ``tau0``.

    Any width with ``w -> 0`` and ``sqrt(N) w -> inf`` is admissible.  A
    narrower layer hands terms with small ``tau - tau0`` to the endpoint
    expansion, whose error grows like ``1/(N (tau - tau0)**2)**2``; a wider
    one stretches the profile expansions to large ``|x|``.  This exponent
    keeps both contributions to the summed error small.
    """
    return math.log(n) ** 1.5 / math.sqrt(n)


def origin_window(n: int) -> float:
    """Largest ``j`` handled by the expansion at the origin of a disk droplet."""
    return n ** ORIGIN_EXPONENT


def _check(n, j):
    if int(n) != n or n < 1 or int(j) != j or not 0 <= j < n:
        raise ValueError(f"need integers 0 <= j < n, got n={n!r}, j={j!r}")
    return j / n


def log_uj_outer_interp(pot: RadialPotential, n: int, j: int) -> float:
    """Endpoint expansion valid uniformly for ``tau >= tau0``.

    The factor ``exp(N V'^2 / (2 V'')) erfc(-V' sqrt(N / (2 V'')))`` is
    evaluated as one ``erfcx`` call, which cannot overflow.
    """
    tau = _check(n, j)
    v0 = v_tau(pot, tau, 1.0, 0)
    v1 = v_tau(pot, tau, 1.0, 1)
    v2 = v_tau(pot, tau, 1.0, 2)
    v3 = v_tau(pot, tau, 1.0, 3)
    if not v2 > 0:
        raise RegimeError(f"V''(1) = {v2!r} is not positive; potential not subharmonic at the wall")
    N = float(n)
    poly = (-2 * v1**3 * v2 * v3 * N**2 + 2 * v1**2 * v2**2 * v3 * N**2
            - 10 * v1 * v2**2 * v3 * N - 12 * v2**4 * N + 4 * v2**3 * v3 * N)
    bracket = (v1**3 * v3 * N**2 * (v2 - v1) + 6 * v2**3 * N * (v2 - v1)
               + 3 * v1 * v2 * v3 * N * (v2 - 2 * v1) - 3 * v2**2 * v3)
    z = -v1 * math.sqrt(N / (2 * v2))
    gauss = math.sqrt(2 * math.pi * v2 * N) * float(special.erfcx(z))
    total = poly + gauss * bracket
    if not total > 0:
        raise RegimeError(f"interpolating expansion is not positive at j={j}, n={n}")
    return -N * v0 + math.log(total) - math.log(12 * v2**5 * N**2)


def log_uj_outer_far(pot: RadialPotential, n: int, j: int) -> float:
    """Endpoint expansion with the first ``1/N`` correction, for ``tau`` well above ``tau0``."""
    tau = _check(n, j)
    v1 = v_tau(pot, tau, 1.0, 1)
    if not v1 < 0:
        raise RegimeError(f"V'(1) = {v1!r} must be negative beyond the wall")
    v0 = v_tau(pot, tau, 1.0, 0)
    v2 = v_tau(pot, tau, 1.0, 2)
    inner = -1 / v1 + (v2 - v1) / (n * v1**3)
    if not inner > 0:
        raise RegimeError(f"outer expansion bracket is not positive at j={j}, n={n}")
    return -n * v0 - math.log(n) + math.log(inner)


def log_uj_outer_near(pot: RadialPotential, n: int, j: int) -> float:
    """Error-function profile expansion for ``tau`` just at or above ``tau0``."""
    tau = _check(n, j)
    dq1, ddq1, tau0 = _wall_data(pot)
    x = math.sqrt(2 * n / dq1) * (tau - tau0)
    k = kernels_outer(x, ddq1 / dq1)
    inner = k.f + math.sqrt(2 / (n * dq1)) * k.h
    if not inner > 0:
        raise RegimeError(f"near-wall bracket is not positive at x={x!r}")
    v0 = v_tau(pot, tau, 1.0, 0)
    return -n * v0 - math.log(n) + 0.5 * math.log(2 * n / dq1) + math.log(inner)


def b_correction(pot: RadialPotential, r: float, printed: bool = False) -> float:
    """The ``1/N`` coefficient of the interior Laplace expansion at radius ``r``.

    ``B = -d2/(8 D**2) - 19 d1/(24 r D**2) + 5 d1**2/(24 D**3) + 1/(3 r**2 D)``
    with ``D = Delta Q(r)`` and ``d1, d2`` its radial derivatives.  This is
    what Laplace's method gives for ``int r exp(-N V_tau)``.  With
    ``printed=True`` the first term uses ``D`` instead of ``D**2``, a variant
    that is dimensionally inconsistent and leaves an ``O(1/N)`` error
    whenever ``d2 != 0``; it is kept only for comparison.
    """
    d0 = float(pot.laplacian(r, 0))
    if not d0 > 0:
        raise RegimeError(f"Delta Q({r!r}) = {d0!r} is not positive")
    d1 = float(pot.laplacian(r, 1))
    d2 = float(pot.laplacian(r, 2))
    first = -d2 / (8 * d0) if printed else -d2 / (8 * d0**2)
    return (first - 19 * d1 / (24 * r * d0**2)
            + 5 * d1**2 / (24 * d0**3) + 1 / (3 * r * r * d0))


def _r_tau(pot, tau):
    r0 = pot.geometry.r0
    if tau == 0:
        if r0 > 0:
            return r0
        raise RegimeError("the critical radius at tau = 0 is the origin of a disk droplet")
    return _solve_r_dq(pot, 2.0 * tau)


def _log_gaussian_prefactor(pot, n, tau, r):
    v2 = v_tau(pot, tau, r, 2)
    v0 = v_tau(pot, tau, r, 0)
    return 0.5 * _LOG_2PI + math.log(r) - 0.5 * math.log(n * v2) - n * v0


def log_uj_inner_far(pot: RadialPotential, n: int, j: int) -> float:
    """Interior Laplace expansion with the ``B(r_tau)/N`` correction."""
    tau = _check(n, j)
    r = _r_tau(pot, tau)
    corr = 1 + b_correction(pot, r) / n
    if not corr > 0:
        raise RegimeError(f"interior correction 1 + B/N is not positive at j={j}, n={n}")
    return _log_gaussian_prefactor(pot, n, tau, r) + math.log(corr)


def log_uj_inner_near(pot: RadialPotential, n: int, j: int) -> float:
    """Interior expansion cut off by the wall, for ``tau`` just below ``tau0``."""
    tau = _check(n, j)
    dq1, ddq1, tau0 = _wall_data(pot)
    x = math.sqrt(2 * n / dq1) * (tau - tau0)
    k = kernels_inner(x, ddq1 / dq1)
    inner = k.f + math.sqrt(2 / (n * dq1)) * k.h
    if not inner > 0:
        raise RegimeError(f"near-wall bracket is not positive at x={x!r}")
    r = _r_tau(pot, tau)
    return _log_gaussian_prefactor(pot, n, tau, r) + math.log(inner)


def log_uj_disk_origin(pot: RadialPotential, n: int, j: int) -> float:
    """Small-``j`` terms of a disk droplet: ``u_j ~ j! / (2 (N q''(0)/2)^(j+1)) e^(-N q(0))``."""
    _check(n, j)
    if pot.geometry.r0 != 0:
        raise RegimeError("origin expansion needs a disk droplet (r0 = 0)")
    q0 = float(pot.derivative(0.0, 0))
    q2 = float(pot.derivative(0.0, 2))
    if not q2 > 0:
        raise RegimeError(f"q''(0) = {q2!r} must be positive")
    return -math.log(2) - n * q0 - (j + 1) * math.log(n * q2 / 2) + log_factorial(j)


_DISPATCH = {
    TermTag.OUTER_FAR: log_uj_outer_far,
    TermTag.OUTER_NEAR: log_uj_outer_near,
    TermTag.OUTER_INTERP: log_uj_outer_interp,
    TermTag.INNER_NEAR: log_uj_inner_near,
    TermTag.INNER_FAR: log_uj_inner_far,
    TermTag.DISK_ORIGIN: log_uj_disk_origin,
}


def classify_term(pot: RadialPotential, n: int, j: int) -> TermRegime:
    """Pick the expansion for term ``j``; windows are half-open with ``tau = tau0`` outer."""
    tau = _check(n, j)
    dq1, _, tau0 = _wall_data(pot)
    x = math.sqrt(2 * n / dq1) * (tau - tau0)
    width = near_window(n)
    d = tau - tau0
    if pot.geometry.r0 == 0 and j <= origin_window(n) and d < 0:
        return TermRegime(TermTag.DISK_ORIGIN)
    if d >= width:
        return TermRegime(TermTag.OUTER_FAR, x)
    if d >= 0:
        return TermRegime(TermTag.OUTER_NEAR, x)
    if -d <= width:
        return TermRegime(TermTag.INNER_NEAR, x)
    return TermRegime(TermTag.INNER_FAR, x)


def log_uj_asymptotic(pot: RadialPotential, n: int, j: int) -> tuple[float, TermRegime]:
    """Asymptotic ``log u_j`` from the expansion appropriate to ``j/n``."""
    regime = classify_term(pot, n, j)
    return _DISPATCH[regime.tag](pot, n, j), regime
