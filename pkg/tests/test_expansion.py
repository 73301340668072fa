import math
from fractions import Fraction

import pytest
from scipy import integrate as sint

from hardwall.errors import RegimeError
from hardwall.exact import log_partition_hard
from hardwall.expansion import (CLOG, ExpansionCoefficients, compute_functionals,
                                expansion_coefficients, gap_coefficients_gauss,
                                predict_log_partition, remainder_sweep)
from hardwall.potential import (PowerLogPotential, Regime, annulus_log, gauss_scaled, mittag,
                                parse_descriptor, pinned)
from hardwall.specfun import ZETA_PRIME_MINUS_ONE


class TestFunctionals:
    @pytest.mark.parametrize("s", [0.3, 0.8, 1.0])
    def test_gauss(self, s):
        f = compute_functionals(gauss_scaled(s))
        assert f.energy_I == pytest.approx(3 * s**4 / 4, rel=1e-12)
        assert f.entropy_E == pytest.approx(s * s * math.log(s * s), rel=1e-12, abs=1e-15)
        assert f.f_disk == pytest.approx(math.log(1 / s**2) / 12, rel=1e-12, abs=1e-15)

    @pytest.mark.parametrize("a", [0.2, 0.5, 0.9])
    def test_annulus_curvature(self, a):
        f = compute_functionals(annulus_log(a))
        assert f.f_annulus == pytest.approx(math.log(a) / 12, rel=1e-12)
        assert f.f_disk is None

    def test_against_scipy_quad(self):
        pot = mittag(0.5, 0.7)
        r0 = pot.geometry.r0
        lap = lambda u: float(pot.laplacian(u))
        energy = 0.5 * sint.quad(lambda u: u * lap(u) * (pot.derivative(u) - u * pot.derivative(u, 1)
                                                         * math.log(u)), r0, 1, epsabs=1e-14)[0]
        entropy = 0.5 * sint.quad(lambda u: math.log(lap(u) / 4) * u * lap(u), r0, 1, epsabs=1e-14)[0]
        f = compute_functionals(pot)
        assert f.energy_I == pytest.approx(energy, rel=1e-10)
        assert f.entropy_E == pytest.approx(entropy, rel=1e-10)

    @pytest.mark.parametrize("pot", [annulus_log(1.5), annulus_log(1.0), gauss_scaled(1.5)])
    def test_undefined(self, pot):
        with pytest.raises(RegimeError):
            compute_functionals(pot)


class TestCoefficients:
    def test_gauss_disk(self, uc):
        s = 0.8
        co = expansion_coefficients(gauss_scaled(s))
        assert co.regime is Regime.IN_OUT_DISK_INTERIOR
        assert co.c2 == pytest.approx(s**4 / 4 - s * s, abs=1e-12)
        assert co.c2 == pytest.approx(-0.5376, abs=1e-12)
        assert co.c1log == pytest.approx(-0.68, abs=1e-14)
        assert co.clog == Fraction(-1, 3)
        assert co.chalf == pytest.approx(-(uc.gamma_in + uc.gamma_out) * 2 * s, rel=1e-14)

    def test_out_annulus_interior(self):
        co = expansion_coefficients(annulus_log(1.5))
        eta = 1.5
        assert co.regime is Regime.OUT_ANNULUS_INTERIOR
        assert co.c2 == pytest.approx(-1, abs=1e-15)
        assert co.c1log == -1
        assert co.c1 == pytest.approx(1 - math.log(2) + 0.5 * math.log(0.5) - eta * math.log(eta), rel=1e-14)
        assert co.chalf == 0
        assert co.clog == 0
        assert co.c0 == pytest.approx(0.5 * math.log(1 / 3) - 4 / 3, rel=1e-14)

    def test_out_annulus_boundary(self, uc):
        co = expansion_coefficients(annulus_log(1.0))
        assert co.regime is Regime.OUT_ANNULUS_BOUNDARY
        assert co.c1 == pytest.approx(1 - math.log(2), rel=1e-15)
        assert co.chalf == pytest.approx(-2 * uc.gamma_out, rel=1e-14)
        assert co.clog == Fraction(-1, 4)
        want = -uc.alpha_out + 1 + math.log(math.pi * 2) / 4
        assert co.c0 == pytest.approx(want, rel=1e-14)

    def test_boundary_limit_of_interior_c1(self):
        # the eta-dependent part of the eta > 1 formula vanishes as eta -> 1+
        for eps in (1e-6, 1e-9, 1e-12):
            eta = 1 + eps
            extra = eps * math.log(eps) - eta * math.log(eta)
            assert abs(extra) < 20 * eps * abs(math.log(eps))
        assert expansion_coefficients(annulus_log(1.0)).c1 == pytest.approx(1 - math.log(2), rel=1e-15)

    def test_pinned_boundary(self, uc):
        co = expansion_coefficients(pinned(2.0))
        assert co.regime is Regime.IN_OUT_ANNULUS_BOUNDARY
        assert co.c1log == -0.5 and co.clog == 0
        assert co.chalf == pytest.approx(-uc.gamma_in * math.sqrt(8), rel=1e-14)

    def test_no_wall(self):
        with pytest.raises(RegimeError, match="soft"):
            expansion_coefficients(gauss_scaled(1.5))

    @pytest.mark.parametrize("desc", ["annulus-log a=0.5", "pinned c=2", "gauss-scaled s=0.6",
                                      "gauss-scaled s=1", "mittag mu=0.5 a=0.7", "annulus-log a=1",
                                      "polylog a=0.6 c1=0.5 c2=0.5"])
    def test_invariants(self, desc):
        co = expansion_coefficients(parse_descriptor(desc))
        assert co.clog in {Fraction(0), Fraction(-1, 4), Fraction(-1, 3), Fraction(-1, 12)}
        assert co.chalf <= 0
        assert co.clog == CLOG[co.regime]

    @pytest.mark.parametrize("s", [0.5, 0.8, 1.0])
    def test_disk_rebuilt_from_annulus_formulas(self, uc, s):
        pot = gauss_scaled(s)
        co = expansion_coefficients(pot)
        f = compute_functionals(pot)
        g = pot.geometry
        dq1 = float(pot.laplacian(1.0))
        dlog = float(pot.laplacian(1.0, 1)) / dq1
        if g.regime is Regime.IN_OUT_DISK_INTERIOR:
            eta = g.eta
            c0_annulus = (f.f_disk - (uc.alpha_in + uc.alpha_out) + (uc.beta_in + uc.beta_out) * dlog
                          + dq1 / (4 * eta) - 0.5 * math.log(eta) + math.log(2 * math.pi * dq1) / 4)
            clog_annulus = Fraction(-1, 4)
        else:
            c0_annulus = f.f_disk - uc.alpha_in + uc.beta_in * dlog + math.log(2) / 2
            clog_annulus = Fraction(0)
        assert co.clog == clog_annulus - Fraction(1, 12)
        assert co.c0 == pytest.approx(c0_annulus + ZETA_PRIME_MINUS_ONE, rel=1e-13)

    def test_constant_term_blows_up_as_eta_vanishes(self):
        c, eps = 2.0, 1e-3
        pot = PowerLogPotential({2: c}, log_coef=c - 1 + eps)
        g = pot.geometry
        assert g.eta == pytest.approx(eps, rel=1e-9)
        co = expansion_coefficients(pot)
        dominant = float(pot.laplacian(1.0)) / (4 * g.eta)
        assert co.c0 / dominant == pytest.approx(1, abs=0.05)

    def test_as_dict(self):
        d = expansion_coefficients(annulus_log(0.5)).as_dict()
        assert d["clog"] == "-1/4" and d["regime"] == "InOutAnnulus_Interior"
        assert d["fractional_note"] is True


class TestGap:
    @pytest.mark.parametrize("s", [0.5, 0.8])
    def test_matches_numerical_coefficients(self, uc, s):
        co = expansion_coefficients(gauss_scaled(s))
        c1, c2, c3, c4 = gap_coefficients_gauss(s, uc)
        assert co.c2 == pytest.approx(c1, abs=1e-8)
        assert co.c1log == pytest.approx(c2, abs=1e-8)
        assert co.c1 == pytest.approx(c3, abs=1e-8)
        assert co.chalf == pytest.approx(c4, abs=1e-8)

    @pytest.mark.parametrize("s", [0.3, 0.5, 0.8])
    def test_printed_n_coefficient_offset(self, s):
        literal = gap_coefficients_gauss(s, literal=True)[2]
        assert literal - gap_coefficients_gauss(s)[2] == pytest.approx(math.log(2), abs=1e-15)

    def test_values(self):
        c1, c2, _, _ = gap_coefficients_gauss(0.8)
        assert c1 == pytest.approx(-0.5376, abs=1e-12)
        assert c2 == pytest.approx(-0.68, abs=1e-12)

    def test_circular_law_limit(self):
        assert gap_coefficients_gauss(1 - 1e-9)[0] == pytest.approx(-0.75, abs=1e-8)

    def test_half(self, uc):
        c4 = gap_coefficients_gauss(0.5)[3]
        assert c4 == pytest.approx(-(uc.gamma_in + uc.gamma_out), rel=1e-15)
        assert c4 == pytest.approx(-1.1507, abs=1e-4)

    @pytest.mark.parametrize("s", [0.0, 1.0])
    def test_range(self, s):
        with pytest.raises(ValueError):
            gap_coefficients_gauss(s)


class TestPrediction:
    def test_zero(self):
        co = ExpansionCoefficients(0.0, 0.0, 0.0, 0.0, Fraction(0), 0.0, Regime.IN_OUT_ANNULUS_BOUNDARY)
        assert predict_log_partition(co, 10) == 0

    def test_quadratic(self):
        co = ExpansionCoefficients(1.0, 0.0, 0.0, 0.0, Fraction(0), 0.0, Regime.IN_OUT_ANNULUS_BOUNDARY)
        assert predict_log_partition(co, 10) == 100

    def test_needs_two(self):
        co = ExpansionCoefficients(1.0, 0.0, 0.0, 0.0, Fraction(0), 0.0, Regime.IN_OUT_ANNULUS_BOUNDARY)
        with pytest.raises(ValueError):
            predict_log_partition(co, 1)

    def test_gauss_close_to_exact(self):
        pot = gauss_scaled(0.8)
        exact = log_partition_hard(pot, 400).log_z_over_2pi_pow_n
        assert abs(exact - predict_log_partition(expansion_coefficients(pot), 400)) < 0.05


class TestSweeps:
    def test_annulus_decreasing(self):
        rows = remainder_sweep(annulus_log(0.5), [100, 200, 400, 800], method="gamma_oracle")
        rems = [abs(r.remainder) for r in rows]
        assert all(b < a for a, b in zip(rems, rems[1:]))
        assert rows[0].ratio is None
        assert rows[1].ratio == pytest.approx(rems[1] / rems[0])

    @pytest.mark.parametrize("pot", [gauss_scaled(0.8), pinned(2.0), mittag(0.5, 0.7),
                                     annulus_log(1.5), annulus_log(1.0), gauss_scaled(1.0)])
    def test_remainder_shrinks(self, pot):
        rows = remainder_sweep(pot, [100, 400])
        assert abs(rows[1].remainder) < abs(rows[0].remainder)

    def test_quadrature_and_oracle_agree(self):
        pot = pinned(2.0)
        a = remainder_sweep(pot, [150])[0]
        b = remainder_sweep(pot, [150], method="gamma_oracle")[0]
        assert a.remainder == pytest.approx(b.remainder, abs=1e-9)
