"""Exact evaluation of the radial moments ``u_j`` and the hard-wall partition function.

``Z^h / (2 pi)^N`` factorizes into ``prod_j u_j`` with
``u_j = int_0^1 r^(2j+1) exp(-N q(r)) dr``.  Everything is carried in log form.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import HardwallError, TermError
from .numerics import DEFAULT_CONFIG, QuadratureConfig, log_integrate_exp
from .potential import RadialPotential, _solve_r_dq, gauss_scaled
from .specfun import log_factorial, log_lower_gamma

__all__ = [
    "PartitionResult", "log_uj_quadrature", "log_uj_gamma_oracle", "log_uj_oracle",
    "log_partition_hard", "log_partition_soft_gauss", "log_gap_probability",
    "ORACLE_PRESETS",
]

ORACLE_PRESETS = ("annulus-log", "pinned", "gauss-scaled", "mittag")
_METHODS = ("quadrature", "gamma_oracle")


@dataclass(frozen=True)
class PartitionResult:
    """``log(Z^h / (2 pi)^N)`` together with the individual ``log u_j``."""

    log_z_over_2pi_pow_n: float
    per_term_logs: tuple
    n: int
    method: str


def _check_term(n, j):
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if int(j) != j or not 0 <= j < n:
        raise ValueError(f"j must be an integer in [0, n-1], got {j!r}")


def _peak_points(pot, n, j):
    # The integrand r^(2j+1) e^(-n q) peaks where r q'(r) = (2j+1)/n.
    level = (2 * j + 1) / n
    if float(pot.r_dq(1.0)) <= level:
        return [1.0 - k / (n * max(level - float(pot.r_dq(1.0)), 1e-300))
                for k in (1.0, 3.0, 10.0)]
    peak = _solve_r_dq(pot, level)
    width = 1.0 / math.sqrt(n * float(pot.laplacian(peak)) + (2 * j + 1) / peak**2)
    return [peak] + [peak + s * k * width for k in (1.0, 3.0, 10.0) for s in (-1, 1)]


def log_uj_quadrature(pot: RadialPotential, n: int, j: int,
                      cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``log u_j`` by stabilized quadrature of ``r^(2j+1) exp(-n q(r))`` on ``(0, 1]``.

    The exponent is sampled around the integrand's peak and the integral is
    computed in shifted form, so ``n`` of order ``1e4`` is no problem.
    """
    _check_term(n, j)
    p = 2 * j + 1

    def g(r):
        with np.errstate(divide="ignore", invalid="ignore"):
            out = p * np.log(r) - n * pot.derivative(r, 0)
        return np.where(r > 0, out, -np.inf)

    pts = [x for x in _peak_points(pot, n, j) if 0 < x < 1]
    return log_integrate_exp(g, 0.0, 1.0, cfg, points=pts)


def log_uj_gamma_oracle(preset: str, params: dict, n: int, j: int, const: float = 0.0) -> float:
    """``log u_j`` in closed form through the lower incomplete gamma function.

    Parameters
    ----------
    preset : {"annulus-log", "pinned", "gauss-scaled", "mittag"}
    params : dict
        Preset parameters, e.g. ``{"a": 0.5}``.
    const : float
        Additive constant in ``q``; shifts the result by ``-n * const``.
    """
    _check_term(n, j)
    half = -math.log(2.0)
    if preset == "annulus-log":
        big_a = j + params["a"] * n + 1
        out = half - big_a * math.log(n) + log_lower_gamma(big_a, n)
    elif preset == "pinned":
        c = params["c"]
        big_a = j + (c - 1) * n + 1
        out = half - big_a * math.log(c * n) + log_lower_gamma(big_a, c * n)
    elif preset == "gauss-scaled":
        z = params["s"] ** 2 * n
        out = half - (j + 1) * math.log(z) + log_lower_gamma(j + 1, z)
    elif preset == "mittag":
        mu, a = params["mu"], params["a"]
        big_a = (j + a * n + 1) / (1 + mu)
        out = (half - math.log(1 + mu) - big_a * math.log(n)
               + log_lower_gamma(big_a, n))
    else:
        raise ValueError(f"no incomplete-gamma closed form for preset {preset!r}")
    return out - n * const


def log_uj_oracle(pot: RadialPotential, n: int, j: int) -> float:
    """:func:`log_uj_gamma_oracle` for a preset potential object."""
    if pot.preset not in ORACLE_PRESETS:
        raise ValueError(f"no incomplete-gamma closed form for {pot.descriptor!r}")
    return log_uj_gamma_oracle(pot.preset, pot.params, n, j, pot.const)


def _term(args):
    pot, n, j, method, cfg = args
    try:
        if method == "quadrature":
            return log_uj_quadrature(pot, n, j, cfg)
        return log_uj_oracle(pot, n, j)
    except (HardwallError, ArithmeticError, ValueError) as exc:
        raise TermError(j, exc) from exc


def log_partition_hard(pot: RadialPotential, n: int, method: str = "quadrature",
                       cfg: QuadratureConfig = DEFAULT_CONFIG,
                       workers: int = 1) -> PartitionResult:
    """``log(Z^h / (2 pi)^n)`` as the sum of ``log u_j`` for ``j = 0..n-1``.

    Parameters
    ----------
    method : {"quadrature", "gamma_oracle"}
    workers : int
        Number of processes for the per-term work.  The reduction is always
        done in ascending ``j`` with ``math.fsum``, so the result does not
        depend on ``workers``.

    Raises
    ------
    TermError
        Carrying the failing index ``j`` and the original error.
    """
    if method not in _METHODS:
        raise ValueError(f"method must be one of {_METHODS}, got {method!r}")
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    jobs = [(pot, n, j, method, cfg) for j in range(n)]
    if workers > 1 and n > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            logs = list(ex.map(_term, jobs, chunksize=max(1, n // (4 * workers))))
    else:
        logs = [_term(job) for job in jobs]
    return PartitionResult(math.fsum(logs), tuple(logs), n, method)


def log_partition_soft_gauss(s: float, n: int) -> float:
    """``log(Z^s / (2 pi)^n)`` for ``q = s^2 r^2`` without a wall, in closed form."""
    if not 0 < s <= 1:
        raise ValueError(f"s must lie in (0, 1], got {s!r}")
    lz = math.log(n * s * s)
    return math.fsum(log_factorial(j) - (j + 1) * lz - math.log(2.0) for j in range(n))


def log_gap_probability(s: float, n: int, method: str = "quadrature",
                        cfg: QuadratureConfig = DEFAULT_CONFIG, workers: int = 1) -> float:
    """Log-probability that all ``n`` particles of the scaled Ginibre gas lie in the unit disk."""
    if not 0 < s < 1:
        raise ValueError(f"s must lie in (0, 1), got {s!r}")
    hard = log_partition_hard(gauss_scaled(s), n, method, cfg, workers)
    return hard.log_z_over_2pi_pow_n - log_partition_soft_gauss(s, n)
