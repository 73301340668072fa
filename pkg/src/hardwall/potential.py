"""Radial potentials, their Laplacian, droplet geometry and the exponent family V_tau."""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Mapping

import numpy as np

from .errors import DescriptorError, GeometryError, RootBracketError
from .numerics import find_root_monotone

__all__ = [
    "RadialPotential", "PowerLogPotential", "CallablePotential", "Regime",
    "DropletGeometry", "parse_descriptor", "annulus_log", "pinned",
    "gauss_scaled", "mittag", "polylog", "laplacian", "droplet_geometry",
    "critical_radius", "v_tau", "BOUNDARY_TOL", "INFINITE_RADIUS_PROBE",
]

BOUNDARY_TOL = 1e-9
INFINITE_RADIUS_PROBE = 1e8
_R_MIN = 1e-12


class RadialPotential:
    """A radial potential ``q(r)`` with derivatives up to order four.

    Subclasses implement :meth:`derivative`.  Instances are immutable and
    are checked for strict subharmonicity on the droplet at construction.
    """

    descriptor: str = "custom"
    preset: str | None = None
    params: Mapping[str, float] = {}
    const: float = 0.0

    def derivative(self, r, order=0):
        raise NotImplementedError

    def __call__(self, r):
        return self.derivative(r, 0)

    def laplacian(self, r, order=0):
        """``Delta Q = q'' + q'/r`` (order 0) and its first two radial derivatives."""
        r = np.asarray(r, dtype=float)
        d1 = self.derivative(r, 1)
        d2 = self.derivative(r, 2)
        if order == 0:
            return d2 + d1 / r
        d3 = self.derivative(r, 3)
        if order == 1:
            return d3 + d2 / r - d1 / r**2
        if order == 2:
            d4 = self.derivative(r, 4)
            return d4 + d3 / r - 2 * d2 / r**2 + 2 * d1 / r**3
        raise ValueError(f"laplacian order must be 0, 1 or 2, got {order!r}")

    def r_dq(self, r):
        """``r q'(r)``, increasing wherever the potential is subharmonic."""
        return r * self.derivative(r, 1)

    def shifted(self, c):
        """The potential ``q + c``."""
        return _Shifted(self, float(c))

    @cached_property
    def geometry(self) -> "DropletGeometry":
        return _compute_geometry(self)

    def _validate(self):
        g = self.geometry
        lo = max(g.r0, 1e-6)
        hi = max(1.0, min(g.r1, 100.0))
        rs = np.geomspace(lo, hi, 257)[1:-1] if hi > lo else np.array([lo])
        dq = np.asarray(self.laplacian(rs), dtype=float)
        if not np.all(dq > 0):
            bad = float(rs[np.argmin(dq)])
            raise GeometryError(
                f"potential {self.descriptor!r} is not strictly subharmonic on the "
                f"droplet: Delta Q({bad:.6g}) = {float(np.min(dq)):.6g}")

    def __repr__(self):
        return f"{type(self).__name__}({self.descriptor!r})"


class PowerLogPotential(RadialPotential):
    """``q(r) = const + sum_p c_p r**p - 2 a log r`` with closed-form derivatives.

    Parameters
    ----------
    powers : mapping of float to float
        Exponent ``p > 0`` to coefficient ``c_p``.
    log_coef : float
        The ``a >= 0`` in front of ``-2 log r``.
    """

    def __init__(self, powers: Mapping[float, float], log_coef: float = 0.0,
                 const: float = 0.0, descriptor: str | None = None,
                 preset: str | None = None, params: Mapping[str, float] | None = None,
                 validate: bool = True):
        self.powers = {float(p): float(c) for p, c in powers.items() if c != 0}
        if any(p <= 0 for p in self.powers):
            raise DescriptorError("powers must be positive", code="bad_parameters")
        self.log_coef = float(log_coef)
        if self.log_coef < 0:
            raise DescriptorError("log coefficient must be non-negative", code="bad_parameters")
        self.const = float(const)
        self.preset = preset
        self.params = dict(params or {})
        self.descriptor = descriptor or self._default_descriptor()
        if validate:
            self._validate()

    def _default_descriptor(self):
        parts = [f"{c!r}*r^{p!r}" for p, c in sorted(self.powers.items())]
        if self.log_coef:
            parts.append(f"-2*{self.log_coef!r}*log(r)")
        return " + ".join(parts) or "0"

    def derivative(self, r, order=0):
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        for p, c in self.powers.items():
            fall = 1.0
            for i in range(order):
                fall *= p - i
            if fall != 0:
                out = out + c * fall * r ** (p - order)
        a = self.log_coef
        if a:
            if order == 0:
                with np.errstate(divide="ignore"):
                    out = out - 2 * a * np.log(r)
            else:
                # d^k/dr^k log r = (-1)^(k-1) (k-1)! r^-k
                out = out - 2 * a * (-1) ** (order - 1) * math.factorial(order - 1) * r ** (-order)
        if order == 0:
            out = out + self.const
        return out if out.ndim else float(out)

    def shifted(self, c):
        return PowerLogPotential(self.powers, self.log_coef, self.const + float(c),
                                 descriptor=self.descriptor, preset=self.preset,
                                 params=self.params)


class CallablePotential(RadialPotential):
    """A user potential given by ``q`` and ``q'``, higher derivatives optional.

    Missing derivatives of order two to four are obtained from ``dq`` by
    central differences with one Richardson step.  The step grows with the
    derivative order to balance truncation against roundoff.
    """

    _STEPS = {1: 1e-4, 2: 1e-3, 3: 5e-3}

    def __init__(self, q: Callable, dq: Callable, d2q: Callable | None = None,
                 d3q: Callable | None = None, d4q: Callable | None = None,
                 descriptor: str = "callable", validate: bool = True):
        self._fns = {0: q, 1: dq, 2: d2q, 3: d3q, 4: d4q}
        self.descriptor = descriptor
        self.params = {}
        if validate:
            self._validate()

    def derivative(self, r, order=0):
        fn = self._fns.get(order)
        r = np.asarray(r, dtype=float)
        if fn is not None:
            out = np.vectorize(lambda x: float(fn(x)), otypes=[float])(r)
        elif order in (2, 3, 4):
            out = self._fd(r, order - 1)
        else:
            raise ValueError(f"derivative order must be 0..4, got {order!r}")
        return out if out.ndim else float(out)

    def _fd(self, r, k):
        dq = np.vectorize(lambda x: float(self._fns[1](x)), otypes=[float])
        h = np.minimum(self._STEPS[k] * np.maximum(1.0, r), r / (2 * k + 2))

        def central(step):
            if k == 1:
                return (dq(r + step) - dq(r - step)) / (2 * step)
            if k == 2:
                return (dq(r + step) - 2 * dq(r) + dq(r - step)) / step**2
            return (dq(r + 2 * step) - 2 * dq(r + step) + 2 * dq(r - step)
                    - dq(r - 2 * step)) / (2 * step**3)

        coarse = central(h)
        fine = central(h / 2)
        return (4 * fine - coarse) / 3


class _Shifted(RadialPotential):
    def __init__(self, base, c):
        self.base = base
        self.const = base.const + c
        self._c = c
        self.descriptor = base.descriptor
        self.preset = base.preset
        self.params = base.params

    def derivative(self, r, order=0):
        out = self.base.derivative(r, order)
        return out + self._c if order == 0 else out


# presets ---------------------------------------------------------------

def annulus_log(a):
    """``q = r**2 - 2 a log r``: annulus droplet ``sqrt(a) < r < sqrt(a + 1)``."""
    return PowerLogPotential({2: 1.0}, a, descriptor=f"annulus-log a={_fmt(a)}",
                             preset="annulus-log", params={"a": float(a)})


def pinned(c):
    """``q = c r**2 - 2 (c - 1) log r``, whose outer radius sits on the wall."""
    return PowerLogPotential({2: c}, c - 1.0, descriptor=f"pinned c={_fmt(c)}",
                             preset="pinned", params={"c": float(c)})


def gauss_scaled(s):
    """``q = s**2 r**2``: disk droplet of radius ``1/s``."""
    return PowerLogPotential({2: s * s}, 0.0, descriptor=f"gauss-scaled s={_fmt(s)}",
                             preset="gauss-scaled", params={"s": float(s)})


def mittag(mu, a):
    """``q = r**(2 (1 + mu)) - 2 a log r``."""
    return PowerLogPotential({2 * (1 + mu): 1.0}, a,
                             descriptor=f"mittag mu={_fmt(mu)} a={_fmt(a)}",
                             preset="mittag", params={"mu": float(mu), "a": float(a)})


def polylog(a, coefs):
    """``q = sum_k c_k r**(2k) - 2 a log r`` with ``coefs[k-1] = c_k``."""
    coefs = [float(c) for c in coefs]
    desc = " ".join([f"polylog a={_fmt(a)}"] +
                    [f"c{k}={_fmt(c)}" for k, c in enumerate(coefs, 1)])
    params = {"a": float(a)}
    params.update({f"c{k}": c for k, c in enumerate(coefs, 1)})
    return PowerLogPotential({2 * k: c for k, c in enumerate(coefs, 1)}, a,
                             descriptor=desc, preset="polylog", params=params)


def _fmt(x):
    return repr(float(x))


_PRESET_KEYS = {
    "annulus-log": ("a",),
    "pinned": ("c",),
    "gauss-scaled": ("s",),
    "mittag": ("mu", "a"),
}


def parse_descriptor(text: str) -> RadialPotential:
    """Build a potential from a descriptor such as ``"annulus-log a=0.5"``.

    Grammar: a preset name followed by ``key=value`` tokens.  Presets are
    ``annulus-log a``, ``pinned c``, ``gauss-scaled s``, ``mittag mu a`` and
    ``polylog a c1 c2 ...`` (``c_k`` multiplies ``r**(2k)``).

    Raises
    ------
    DescriptorError
        With ``code`` one of ``unknown_preset``, ``malformed_number`` or
        ``bad_parameters``.
    """
    tokens = text.split()
    if not tokens:
        raise DescriptorError("empty potential descriptor", code="unknown_preset")
    name, rest = tokens[0], tokens[1:]
    if name not in _PRESET_KEYS and name != "polylog":
        raise DescriptorError(f"unknown preset {name!r}", code="unknown_preset")
    params = {}
    for tok in rest:
        key, sep, val = tok.partition("=")
        if not sep or not key:
            raise DescriptorError(f"expected key=value, got {tok!r}", code="bad_parameters")
        if key in params:
            raise DescriptorError(f"duplicate parameter {key!r}", code="bad_parameters")
        try:
            num = float(val)
        except ValueError:
            raise DescriptorError(f"malformed number {val!r} for {key!r}",
                                  code="malformed_number") from None
        if not math.isfinite(num):
            raise DescriptorError(f"parameter {key!r} must be finite", code="malformed_number")
        params[key] = num

    if name == "polylog":
        return _build_polylog(params)
    expected = set(_PRESET_KEYS[name])
    if set(params) != expected:
        raise DescriptorError(
            f"{name} takes parameters {sorted(expected)}, got {sorted(params)}",
            code="bad_parameters")
    try:
        if name == "annulus-log":
            _require(params["a"] >= 0, "a must be >= 0")
            return annulus_log(params["a"])
        if name == "pinned":
            _require(params["c"] >= 1, "c must be >= 1")
            return pinned(params["c"])
        if name == "gauss-scaled":
            _require(params["s"] > 0, "s must be > 0")
            return gauss_scaled(params["s"])
        _require(params["mu"] > -1, "mu must be > -1")
        _require(params["a"] >= 0, "a must be >= 0")
        return mittag(params["mu"], params["a"])
    except GeometryError as exc:
        raise DescriptorError(str(exc), code="bad_parameters") from None


def _build_polylog(params):
    a = params.pop("a", 0.0)
    coefs = {}
    for key, val in params.items():
        m = re.fullmatch(r"c([1-9][0-9]*)", key)
        if not m:
            raise DescriptorError(f"unknown polylog parameter {key!r}", code="bad_parameters")
        coefs[int(m.group(1))] = val
    _require(a >= 0, "a must be >= 0")
    _require(any(coefs.values()), "polylog needs at least one nonzero c_k")
    top = max(coefs)
    try:
        return polylog(a, [coefs.get(k, 0.0) for k in range(1, top + 1)])
    except GeometryError as exc:
        raise DescriptorError(str(exc), code="bad_parameters") from None


def _require(cond, msg):
    if not cond:
        raise DescriptorError(msg, code="bad_parameters")


# geometry --------------------------------------------------------------

class Regime(str, enum.Enum):
    """Droplet configuration relative to the unit-circle wall."""

    IN_OUT_ANNULUS_INTERIOR = "InOutAnnulus_Interior"
    IN_OUT_ANNULUS_BOUNDARY = "InOutAnnulus_Boundary"
    IN_OUT_DISK_INTERIOR = "InOutDisk_Interior"
    IN_OUT_DISK_BOUNDARY = "InOutDisk_Boundary"
    OUT_ANNULUS_INTERIOR = "OutAnnulus_Interior"
    OUT_ANNULUS_BOUNDARY = "OutAnnulus_Boundary"
    NO_WALL = "NoWall"

    def __str__(self):
        return self.value

    @property
    def is_disk(self):
        return self in (Regime.IN_OUT_DISK_INTERIOR, Regime.IN_OUT_DISK_BOUNDARY)


@dataclass(frozen=True)
class DropletGeometry:
    """Inner and outer droplet radii, wall-crossing fraction and surface mass.

    Attributes
    ----------
    r0, r1 : float
        Droplet radii; ``r1`` may be ``inf``.
    tau0 : float
        ``q'(1)/2`` clamped to ``[0, 1]``.
    eta : float
        Surface mass ``1 - q'(1)/2`` pushed onto the wall.
    regime : Regime
    """

    r0: float
    r1: float
    tau0: float
    eta: float
    regime: Regime

    @property
    def tau0_raw(self):
        """``q'(1)/2`` without clamping."""
        return 1.0 - self.eta

    def as_dict(self):
        return {"r0": self.r0, "r1": self.r1, "tau0": self.tau0, "eta": self.eta,
                "regime": self.regime.value}


def _compute_geometry(pot):
    dq = lambda r: float(pot.derivative(r, 1))
    r0 = _inner_radius(pot, dq)
    r1 = _outer_radius(pot, r0)
    slope = dq(1.0)
    eta = 1.0 - slope / 2
    tau0 = min(max(slope / 2, 0.0), 1.0)

    tol = BOUNDARY_TOL
    if r0 > 1 + tol:
        regime, ok = Regime.OUT_ANNULUS_INTERIOR, eta > 1
    elif r0 > 0 and abs(r0 - 1) <= tol:
        regime, ok = Regime.OUT_ANNULUS_BOUNDARY, abs(eta - 1) < 1e-6
    elif r1 < 1 - tol:
        regime, ok = Regime.NO_WALL, eta < 0
    elif abs(r1 - 1) <= tol:
        regime = Regime.IN_OUT_DISK_BOUNDARY if r0 == 0 else Regime.IN_OUT_ANNULUS_BOUNDARY
        ok = abs(eta) < 1e-6
    else:
        regime = Regime.IN_OUT_DISK_INTERIOR if r0 == 0 else Regime.IN_OUT_ANNULUS_INTERIOR
        ok = 0 < eta < 1
    if not ok:
        raise GeometryError(
            f"inconsistent droplet geometry for {pot.descriptor!r}: r0={r0!r}, r1={r1!r}, "
            f"eta={eta!r} does not fit {regime.value}")
    return DropletGeometry(r0=r0, r1=r1, tau0=tau0, eta=eta, regime=regime)


def _inner_radius(pot, dq):
    if dq(_R_MIN) >= 0:
        return 0.0
    lo = _R_MIN
    for hi in np.geomspace(1e-10, INFINITE_RADIUS_PROBE, 181):
        if dq(hi) > 0:
            return find_root_monotone(dq, lo, float(hi))
        lo = float(hi)
    raise GeometryError(f"q' never becomes positive for {pot.descriptor!r}; no droplet")


def _outer_radius(pot, r0):
    f = lambda r: float(pot.r_dq(r)) - 2.0
    lo = max(r0, _R_MIN)
    if f(lo) >= 0:
        raise GeometryError(f"r q'(r) >= 2 already at the inner radius for {pot.descriptor!r}")
    hi = max(1.0, 2 * lo)
    while f(hi) < 0:
        lo = hi
        hi *= 2
        if hi > INFINITE_RADIUS_PROBE:
            return math.inf
    return find_root_monotone(f, lo, hi)


def laplacian(pot: RadialPotential, r, order=0):
    """``Delta Q(r)`` for ``order=0`` and its radial derivatives for 1 and 2.

    Raises
    ------
    ValueError
        If ``r <= 0``.
    """
    if np.any(np.asarray(r) <= 0):
        raise ValueError("laplacian needs r > 0")
    return pot.laplacian(r, order)


def droplet_geometry(pot: RadialPotential) -> DropletGeometry:
    """Droplet radii, ``tau0``, ``eta`` and the regime tag of ``pot``."""
    return pot.geometry


def critical_radius(pot: RadialPotential, tau: float) -> float:
    """The radius ``r_tau`` solving ``r q'(r) = 2 tau`` for ``0 < tau <= 1``."""
    if not 0 < tau <= 1:
        raise ValueError(f"tau must lie in (0, 1], got {tau!r}")
    return _solve_r_dq(pot, 2.0 * tau)


def _solve_r_dq(pot, level):
    g = pot.geometry
    f = lambda r: float(pot.r_dq(r)) - level
    lo = max(g.r0, _R_MIN)
    hi = max(1.0, 2 * lo)
    while f(hi) < 0:
        lo = hi
        hi *= 2
        if hi > INFINITE_RADIUS_PROBE:
            raise RootBracketError(f"r q'(r) stays below {level!r} up to r={hi:g}")
    if f(lo) > 0:
        raise RootBracketError(f"r q'(r) exceeds {level!r} already at r={lo!r}")
    return find_root_monotone(f, lo, hi)


def v_tau(pot: RadialPotential, tau: float, r, order: int = 0):
    """``V_tau(r) = q(r) - 2 tau log r`` and its derivatives to order four.

    Orders two to four are assembled from ``V'`` and the Laplacian:
    ``V'' = Delta Q - V'/r`` and its successive radial derivatives.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("v_tau needs r > 0")
    if order == 0:
        out = pot.derivative(r, 0) - 2 * tau * np.log(r)
    else:
        v1 = pot.derivative(r, 1) - 2 * tau / r
        if order == 1:
            out = v1
        elif order == 2:
            out = pot.laplacian(r, 0) - v1 / r
        elif order == 3:
            out = pot.laplacian(r, 1) - pot.laplacian(r, 0) / r + 2 * v1 / r**2
        elif order == 4:
            out = (pot.laplacian(r, 2) + 3 * pot.laplacian(r, 0) / r**2
                   - pot.laplacian(r, 1) / r - 6 * v1 / r**3)
        else:
            raise ValueError(f"v_tau order must be 0..4, got {order!r}")
    out = np.asarray(out, dtype=float)
    return out if out.ndim else float(out)
