"""Large-N expansion of ``log(Z^h / (2 pi)^N)`` and its verification against exact sums.

The expansion has the form

    c2 N^2 + c1log N log N + c1 N + chalf sqrt(N) + clog log N + c0 + o(1)

with coefficients built from the equilibrium energy ``I``, entropy ``E``,
a curvature functional ``F`` and the universal constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .constants import UniversalConstants, compute_universal_constants
from .errors import RegimeError
from .exact import log_partition_hard
from .numerics import DEFAULT_CONFIG, QuadratureConfig, integrate
from .potential import RadialPotential, Regime
from .specfun import ZETA_PRIME_MINUS_ONE

__all__ = [
    "Functionals", "compute_functionals", "ExpansionCoefficients",
    "expansion_coefficients", "predict_log_partition", "gap_coefficients_gauss",
    "SweepRow", "remainder_sweep", "CLOG",
]

CLOG = {
    Regime.IN_OUT_ANNULUS_INTERIOR: Fraction(-1, 4),
    Regime.IN_OUT_ANNULUS_BOUNDARY: Fraction(0),
    Regime.OUT_ANNULUS_INTERIOR: Fraction(0),
    Regime.OUT_ANNULUS_BOUNDARY: Fraction(-1, 4),
}
DISK_CLOG_SHIFT = Fraction(-1, 12)
CLOG[Regime.IN_OUT_DISK_INTERIOR] = CLOG[Regime.IN_OUT_ANNULUS_INTERIOR] + DISK_CLOG_SHIFT
CLOG[Regime.IN_OUT_DISK_BOUNDARY] = CLOG[Regime.IN_OUT_ANNULUS_BOUNDARY] + DISK_CLOG_SHIFT

_ANNULUS_OF = {
    Regime.IN_OUT_DISK_INTERIOR: Regime.IN_OUT_ANNULUS_INTERIOR,
    Regime.IN_OUT_DISK_BOUNDARY: Regime.IN_OUT_ANNULUS_BOUNDARY,
}


@dataclass(frozen=True)
class Functionals:
    """Energy, entropy and curvature functionals of the equilibrium measure.

    ``f_disk`` is ``None`` unless the droplet is a disk.
    """

    energy_I: float
    entropy_E: float
    f_annulus: float
    f_disk: float | None = None


def compute_functionals(pot: RadialPotential,
                        cfg: QuadratureConfig = DEFAULT_CONFIG) -> Functionals:
    """Integrals over the part ``r0 < r < 1`` of the droplet inside the wall.

    Raises
    ------
    RegimeError
        When the droplet lies outside the wall (``r0 >= 1``) or inside it
        entirely (no wall contact), where these functionals are not used.
    """
    g = pot.geometry
    if g.r0 >= 1:
        raise RegimeError("functionals are undefined when the droplet lies outside the wall")
    if g.regime is Regime.NO_WALL:
        raise RegimeError("functionals are undefined when the droplet does not reach the wall")
    r0 = g.r0
    lap = pot.laplacian

    def energy(u):
        log_u = np.log(u)
        return u * lap(u) * (pot.derivative(u, 0) - u * pot.derivative(u, 1) * log_u)

    def entropy(u):
        d = lap(u)
        return np.log(d / 4) * u * d

    def curvature(u):
        return (lap(u, 1) / lap(u)) ** 2 * u

    energy_I = 0.5 * integrate(energy, r0, 1.0, cfg).value
    entropy_E = 0.5 * integrate(entropy, r0, 1.0, cfg).value
    tail = integrate(curvature, r0, 1.0, cfg).value / 24
    dlog1 = float(lap(1.0, 1)) / float(lap(1.0))
    if r0 > 0:
        d0 = float(lap(r0))
        f_annulus = (math.log(r0 * r0 * d0 / float(lap(1.0))) / 12
                     - (dlog1 - r0 * float(lap(r0, 1)) / d0) / 16 + tail)
        f_disk = None
    else:
        f_annulus = math.nan
        f_disk = math.log(4 / float(lap(1.0))) / 12 - dlog1 / 16 + tail
    return Functionals(energy_I, entropy_E, f_annulus, f_disk)


@dataclass(frozen=True)
class ExpansionCoefficients:
    """Coefficients of ``N^2, N log N, N, sqrt(N), log N, 1``.

    ``clog`` is an exact rational.  ``fractional_note`` marks regimes where
    the intermediate sums carry ``{N tau0}`` terms that cancel only in the
    total.
    """

    c2: float
    c1log: float
    c1: float
    chalf: float
    clog: Fraction
    c0: float
    regime: Regime
    fractional_note: bool = False
    details: dict = field(default_factory=dict, compare=False)

    def as_dict(self):
        return {"c2": self.c2, "c1log": self.c1log, "c1": self.c1, "chalf": self.chalf,
                "clog": str(self.clog), "clog_value": float(self.clog), "c0": self.c0,
                "regime": self.regime.value, "fractional_note": self.fractional_note}


def expansion_coefficients(pot: RadialPotential, cfg: QuadratureConfig = DEFAULT_CONFIG,
                           constants: UniversalConstants | None = None) -> ExpansionCoefficients:
    """Expansion coefficients for the regime of ``pot``.

    Raises
    ------
    RegimeError
        For a droplet that does not touch the wall; that case is the
        ordinary soft-edge expansion and is not covered here.

    Notes
    -----
    The constant term contains ``Delta Q(1) / (4 eta)``, so it grows without
    bound as the surface mass ``eta`` tends to 0; the expansion is then only
    useful for ``N eta`` large.
    """
    g = pot.geometry
    regime = g.regime
    if regime is Regime.NO_WALL:
        raise RegimeError(
            "droplet lies strictly inside the wall; use the soft-edge (no wall) "
            "expansion, which is out of scope here")
    c = constants or compute_universal_constants(cfg)
    eta = g.eta
    q1 = float(pot.derivative(1.0, 0))
    dq1 = float(pot.laplacian(1.0, 0))
    dlog1 = float(pot.laplacian(1.0, 1)) / dq1

    if regime is Regime.OUT_ANNULUS_INTERIOR:
        return ExpansionCoefficients(
            c2=-q1, c1log=-1.0,
            c1=1 - math.log(2) + (eta - 1) * math.log(eta - 1) - eta * math.log(eta),
            chalf=0.0, clog=CLOG[regime],
            c0=0.5 * math.log((eta - 1) / eta) + dq1 / (4 * eta * (1 - eta)),
            regime=regime)
    if regime is Regime.OUT_ANNULUS_BOUNDARY:
        return ExpansionCoefficients(
            c2=-q1, c1log=-1.0, c1=1 - math.log(2),
            chalf=-c.gamma_out * math.sqrt(dq1), clog=CLOG[regime],
            c0=-c.alpha_out + c.beta_out * dlog1 + dq1 / 4 + math.log(math.pi * dq1 / 2) / 4,
            regime=regime)

    fun = compute_functionals(pot, cfg)
    disk = regime.is_disk
    base = _ANNULUS_OF.get(regime, regime)
    f_val = fun.f_disk if disk else fun.f_annulus
    if base is Regime.IN_OUT_ANNULUS_INTERIOR:
        coeffs = dict(
            c2=-(fun.energy_I + eta * q1),
            c1log=-(1 + eta) / 2,
            c1=-(fun.entropy_E / 2 - (1 - eta) * math.log(math.pi / 2) / 2
                 + eta * (math.log(2 * eta) - 1)),
            chalf=-(c.gamma_in + c.gamma_out) * math.sqrt(dq1),
            c0=(f_val - (c.alpha_in + c.alpha_out) + (c.beta_in + c.beta_out) * dlog1
                + dq1 / (4 * eta) - 0.5 * math.log(eta) + math.log(2 * math.pi * dq1) / 4),
        )
    else:
        coeffs = dict(
            c2=-fun.energy_I,
            c1log=-0.5,
            c1=-(fun.entropy_E / 2 - math.log(math.pi / 2) / 2),
            chalf=-c.gamma_in * math.sqrt(dq1),
            c0=f_val - c.alpha_in + c.beta_in * dlog1 + math.log(2) / 2,
        )
    if disk:
        coeffs["c0"] += ZETA_PRIME_MINUS_ONE
    return ExpansionCoefficients(
        clog=CLOG[regime], regime=regime,
        fractional_note=base is Regime.IN_OUT_ANNULUS_INTERIOR,
        details={"energy_I": fun.energy_I, "entropy_E": fun.entropy_E, "F": f_val},
        **coeffs)


def predict_log_partition(coeffs: ExpansionCoefficients, n: int) -> float:
    """Evaluate the expansion at finite ``n`` (without the ``o(1)`` remainder)."""
    if n < 2:
        raise ValueError("the expansion needs n >= 2")
    ln = math.log(n)
    return math.fsum([coeffs.c2 * n * n, coeffs.c1log * n * ln, coeffs.c1 * n,
                      coeffs.chalf * math.sqrt(n), float(coeffs.clog) * ln, coeffs.c0])


def gap_coefficients_gauss(s: float, constants: UniversalConstants | None = None,
                           literal: bool = False) -> tuple[float, float, float, float]:
    """Closed-form ``N^2, N log N, N, sqrt(N)`` coefficients for ``q = (s r)^2``.

    The ``N`` coefficient is returned for the ``(2 pi)^N`` normalization.  The
    commonly quoted closed form ``(1 - s^2)(1 - log(1 - s^2)) - s^2 log(s/sqrt(2 pi))``
    exceeds it by exactly ``log 2`` (it corresponds to dividing by ``pi^N``);
    pass ``literal=True`` to get that form unchanged.
    """
    if not 0 < s < 1:
        raise ValueError(f"s must lie in (0, 1), got {s!r}")
    c = constants or compute_universal_constants()
    s2 = s * s
    c1 = s2 * s2 / 4 - s2
    c2 = (s2 - 2) / 2
    c3 = (1 - s2) * (1 - math.log(1 - s2)) - s2 * math.log(s / math.sqrt(2 * math.pi))
    if not literal:
        c3 -= math.log(2)
    c4 = -2 * s * (c.gamma_in + c.gamma_out)
    return c1, c2, c3, c4


@dataclass(frozen=True)
class SweepRow:
    n: int
    exact: float
    predicted: float
    remainder: float
    ratio: float | None


def remainder_sweep(pot: RadialPotential, n_list, cfg: QuadratureConfig = DEFAULT_CONFIG,
                    method: str = "quadrature", workers: int = 1,
                    coeffs: ExpansionCoefficients | None = None) -> list[SweepRow]:
    """Exact minus predicted ``log(Z^h / (2 pi)^N)`` over a ladder of ``n``.

    ``ratio`` is ``|remainder(n_i)| / |remainder(n_{i-1})|`` (``None`` for the
    first row).
    """
    coeffs = coeffs or expansion_coefficients(pot, cfg)
    rows = []
    prev = None
    for n in n_list:
        exact = log_partition_hard(pot, int(n), method, cfg, workers).log_z_over_2pi_pow_n
        pred = predict_log_partition(coeffs, int(n))
        rem = exact - pred
        ratio = abs(rem) / abs(prev) if prev not in (None, 0.0) else None
        rows.append(SweepRow(int(n), exact, pred, rem, ratio))
        prev = rem
    return rows
