import math

import mpmath as mp
import numpy as np
import pytest
from scipy import special

from hardwall import constants as K
from hardwall.constants import (beta_tilde, compute_universal_constants, identity_residuals)
from hardwall.numerics import QuadratureConfig, integrate


@pytest.fixture(autouse=True)
def _mp_precision():
    with mp.workdps(30):
        yield

QUOTED = {"alpha_in": 0.36941, "beta_in": 0.16186, "gamma_in": 0.23876,
         "alpha_out": 0.27752, "beta_out": 0.14742, "gamma_out": 0.91194}


def mp_phi_prime(x):
    return -2 * mp.exp(-x * x) / (mp.sqrt(mp.pi) * mp.erfc(x))


@pytest.fixture(scope="module")
def oracle():
    # Beyond x = 100 the outer integrands are replaced by their algebraic
    # tail series, which test_tail_expansions checks separately.
    neg = [-mp.inf, -10, -3, 0]
    pos = [0, 1, 4, 20, 100]
    sq2 = mp.sqrt(2)
    with mp.workdps(40):
        vals = {
            "alpha_in": mp.quad(lambda x: (x * x - 2) / 3 * mp_phi_prime(x), neg),
            "beta_in": -mp.quad(lambda x: (x * x + 1) / 6 * mp_phi_prime(x), neg),
            "gamma_in": -mp.quad(lambda x: mp.log(mp.erfc(x) / 2), neg) / sq2,
            "alpha_out": mp.quad(lambda x: (x * (2 * x * x - 3) + (x * x - 2) * mp_phi_prime(x)) / 3
                                 - 1 / (x + 1), pos) + K._tail(K._TAIL_ALPHA_OUT, 100.0)[0],
            "beta_out": -(mp.quad(lambda x: x * (2 * x * x + 3) + (x * x + 1) * mp_phi_prime(x), pos)
                          + K._tail(K._TAIL_BETA_OUT, 100.0)[0]) / 6,
            "gamma_out": -(mp.quad(lambda x: mp.log(mp.sqrt(mp.pi) * x * mp.exp(x * x) * mp.erfc(x)),
                                   pos) + K._tail(K._TAIL_LOG_W, 100.0)[0]) / sq2,
        }
    return {k: float(v) for k, v in vals.items()}


@pytest.mark.parametrize("name", sorted(QUOTED))
def test_quoted_values(uc, name):
    assert getattr(uc, name) == pytest.approx(QUOTED[name], abs=5e-5)


@pytest.mark.parametrize("name", sorted(QUOTED))
def test_against_high_precision_quadrature(uc, oracle, name):
    assert getattr(uc, name) == pytest.approx(oracle[name], rel=1e-12)


def test_all_positive_with_small_errors(uc):
    for name, value in uc.as_dict().items():
        assert value > 0
        assert 0 <= uc.errors[name] < 1e-10


def test_identity_residuals(uc):
    r_in, r_out = identity_residuals(uc)
    assert abs(r_in) < 1e-9
    assert abs(r_out) < 1e-9


def test_identity_residuals_of_quoted_values():
    c = K.UniversalConstants(**QUOTED)
    r_in, r_out = identity_residuals(c)
    assert abs(r_in) < 2e-5 and abs(r_out) < 2e-5


@pytest.mark.parametrize("t", [0.0, 1.0, -3.0])
def test_combined_form(uc, t):
    a = uc.alpha_in + uc.alpha_out
    b = uc.beta_in + uc.beta_out
    assert -a + b * t == pytest.approx(b * (t + 2) - math.log(2) - math.log(math.pi) / 2, abs=1e-9)


@pytest.mark.parametrize("side,name", [("in", "beta_in"), ("out", "beta_out")])
def test_beta_tilde(uc, side, name):
    bt = beta_tilde(side)
    assert bt > 0
    assert bt == pytest.approx(getattr(uc, name), abs=1e-6)


def test_beta_tilde_side_checked():
    with pytest.raises(ValueError):
        beta_tilde("up")


def test_beta_tilde_in_integrand_form():
    # e^{-y^2}(1 - 5 y^2) / (3 sqrt(pi) erfc y) written through Phi'
    for y in (-4.0, -1.0, -0.2):
        direct = 2 * y * math.log(special.erfc(y) / 2) + math.exp(-y * y) * (1 - 5 * y * y) / (
            3 * math.sqrt(math.pi) * special.erfc(y))
        assert K.beta_tilde_in_integrand(y) == pytest.approx(direct, rel=1e-13)


def test_stable_outer_integrand_matches_naive():
    ys = np.linspace(0.1, 5, 50)
    np.testing.assert_allclose(K.beta_tilde_out_integrand(ys), K.beta_tilde_out_integrand_naive(ys),
                               rtol=1e-9, atol=1e-12)


def test_gamma_in_reflection(uc):
    res = integrate(lambda y: np.log1p(special.erf(y)) - math.log(2), 0.0, 40.0,
                    QuadratureConfig(rel_tol=1e-13))
    assert -res.value / math.sqrt(2) == pytest.approx(uc.gamma_in, abs=1e-9)


def test_convergence_plateau(uc):
    base = QuadratureConfig()
    doubled = QuadratureConfig(base.rel_tol, base.abs_tol, 2 * base.max_subdivisions)
    other = compute_universal_constants(doubled)
    for name, value in uc.as_dict().items():
        assert abs(getattr(other, name) - value) < 1e-10


def test_tightening_tolerance_is_stable(uc):
    tight = compute_universal_constants(QuadratureConfig(rel_tol=1e-13, abs_tol=1e-15))
    for name, value in uc.as_dict().items():
        assert getattr(tight, name) == pytest.approx(value, abs=1e-12)


# The analytic tails rely on hard-coded expansion coefficients; check them
# against the integrands evaluated in high precision at large x.

def _series(coefs, x):
    return math.fsum(float(c) * x ** -k for k, c in enumerate(coefs))


@pytest.mark.parametrize("x", [20.0, 30.0])
@pytest.mark.parametrize("coefs,integrand", [
    (K._TAIL_ALPHA_OUT, lambda x: (x * (2 * x * x - 3) + (x * x - 2) * mp_phi_prime(x)) / 3 - 1 / (x + 1)),
    (K._TAIL_BETA_OUT, lambda x: x * (2 * x * x + 3) + (x * x + 1) * mp_phi_prime(x)),
    (K._TAIL_LOG_W, lambda x: mp.log(mp.sqrt(mp.pi) * x * mp.exp(x * x) * mp.erfc(x))),
], ids=["alpha_out", "beta_out", "log_w"])
def test_tail_expansions(x, coefs, integrand):
    with mp.workdps(50):
        ref = float(integrand(mp.mpf(x)))
    assert _series(coefs, x) == pytest.approx(ref, rel=1e-12)


def test_beta_tilde_tail_expansion():
    x = 25.0
    with mp.workdps(50):
        y = mp.mpf(x)
        g = 2 * y * mp.log(mp.erfc(y) / 2) + mp.exp(-y * y) * (1 - 5 * y * y) / (
            3 * mp.sqrt(mp.pi) * mp.erfc(y))
        ref = float(g + 11 * y**3 / 3 + 2 * y * mp.log(y) + (mp.mpf(1) / 2 + 2 * mp.log(2 * mp.sqrt(mp.pi))) * y)
    assert _series(K._TAIL_BETA_TILDE_OUT, x) == pytest.approx(ref, rel=1e-10)
