import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padicfact import euler
from padicfact.errors import NotArithmetic, ZeroAlpha, ZeroDenominator
from padicfact.euler import (
    CMCharacter,
    CMParams,
    HeckeParams,
    Mono,
    cm_hecke_params,
    euler_adjoint,
    euler_bdp,
    euler_deg4,
    euler_triple,
    evaluate_expanded,
)

F = Fraction


def hp(p, k, a, b):
    return HeckeParams(p, k, F(a), F(b))


def roots(n):
    return Mono.sym("a" + n), Mono.sym("b" + n)


def test_adjoint_examples():
    assert euler_adjoint(hp(5, 2, 1, 0)) == 1
    assert euler_adjoint(hp(5, 2, 1, 5)) == 0
    assert euler_adjoint(hp(7, 2, 2, 3)) == F(-11, 28)
    with pytest.raises(ZeroAlpha):
        euler_adjoint(hp(7, 2, 0, 3))


def _deg4_oracle(p, f, g, s):
    af, bf = f
    ag, bg = g
    ps = F(p) ** s
    return (1 - ps / p / (af * ag)) * (1 - ps / p / (af * bg)) * (1 - bf * ag / ps) * (1 - bf * bg / ps)


def test_deg4_vanishes_at_j1():
    assert euler_deg4(hp(5, 2, 1, 0), hp(5, 2, 1, 1), 1, "f") == 0


def test_deg4_beta_zero_hits_a_denominator():
    # beta_g enters as 1/(alpha_f beta_g): the all-beta-zero point is outside the domain
    with pytest.raises(ZeroDenominator):
        euler_deg4(hp(5, 2, 1, 0), hp(5, 2, 1, 0), 2, "f")


nonzero = st.fractions(min_value=-20, max_value=20, max_denominator=20).filter(lambda x: x != 0)


@given(nonzero, nonzero, nonzero, nonzero, st.integers(-3, 5), st.sampled_from([3, 5, 7]))
def test_deg4_oracle_and_swap(af, bf, ag, bg, j, p):
    f, g = hp(p, 2, af, bf), hp(p, 3, ag, bg)
    assert euler_deg4(f, g, j, "f") == _deg4_oracle(p, (af, bf), (ag, bg), j)
    assert euler_deg4(f, g, j, "f") == euler_deg4(g, f, j, "g")


def test_triple_examples():
    p, c = 5, 3
    f, g, h = hp(p, 2, 2, 0), hp(p, 3, 3, 0), hp(p, 4, 7, 0)
    assert euler_triple(f, g, h, c, "f-dom") == 1
    assert euler_triple(f, g, h, c, "bal") == 1
    # beta_f alpha_g alpha_h = p^c
    f, g, h = hp(p, 2, 1, 25), hp(p, 2, 1, 3), hp(p, 2, 5, 2)
    assert euler_triple(f, g, h, 3, "f-dom") == 0


@given(nonzero, nonzero, nonzero, nonzero, nonzero, nonzero, st.integers(0, 5))
def test_triple_oracle(af, bf, ag, bg, ah, bh, c):
    p = 7
    f, g, h = hp(p, 2, af, bf), hp(p, 2, ag, bg), hp(p, 2, ah, bh)
    pc = F(p) ** c
    fdom = 1
    for x in (ag, bg):
        for y in (ah, bh):
            fdom *= (1 - bf * x * y / pc) ** 2
    bal = ((1 - af * bg * bh / pc) * (1 - bf * ag * bh / pc) * (1 - bf * bg * ah / pc) * (1 - bf * bg * bh / pc)) ** 2
    assert euler_triple(f, g, h, c, "f-dom") == fdom
    assert euler_triple(f, g, h, c, "bal") == bal
    # role swap: g-dominant is f-dominant with f and g exchanged
    assert euler_triple(f, g, h, c, "g-dom") == euler_triple(g, f, h, c, "f-dom")


def test_bdp_examples():
    p = 5
    cm0 = CMParams(CMCharacter(F(3), F(0), 2), CMCharacter(F(2), F(0), 3))
    f0 = hp(p, 2, 4, 0)
    assert euler_bdp(f0, cm0, 2, "Phi", arithmetic=False) == 1
    assert euler_bdp(f0, cm0, 2, "Phi'", arithmetic=False) == 1
    # alpha_f beta_g beta_h = p^c
    f = hp(p, 2, 5, 1)
    cm = CMParams(CMCharacter(F(1), F(5), 2), CMCharacter(F(1), F(5), 2))
    assert euler_bdp(f, cm, 3, "Phi'", arithmetic=False) == 0


def test_bdp_generic_is_product_of_two_squares():
    p, c = 7, 4
    f = HeckeParams.ordinary(p, 2, F(3))
    cm = CMParams(CMCharacter(F(2), F(7, 2), 2), CMCharacter(F(5), F(49, 5), 3))
    g, h = cm_hecke_params(cm.lam, p), cm_hecke_params(cm.mu, p)
    pc = F(p) ** c
    want = ((1 - f.beta * g.beta * h.alpha / pc) * (1 - f.beta * g.beta * h.beta / pc)) ** 2
    assert euler_bdp(f, cm, c, "Phi") == want


def _rand_env(rng, names):
    env = {}
    for n in names:
        x = F(0)
        while x == 0:
            x = F(rng.randint(-30, 30), rng.randint(1, 30))
        env[n] = x
    return env


SHAPES = {
    "adjoint": lambda p: euler.adjoint_factors(p, *roots("f")),
    "deg4_f": lambda p: euler.deg4_factors(p, roots("f"), roots("g"), 3, "f"),
    "deg4_g": lambda p: euler.deg4_factors(p, roots("f"), roots("g"), -1, "g"),
    "triple_f": lambda p: euler.triple_factors(p, roots("f"), roots("g"), roots("h"), 2, "f"),
    "triple_bal": lambda p: euler.triple_factors(p, roots("f"), roots("g"), roots("h"), 2, "bal"),
    "bdp_phi": lambda p: euler.bdp_factors(p, roots("f"), roots("g"), roots("h"), 3, "Phi"),
    "bdp_phi_prime": lambda p: euler.bdp_factors(p, roots("f"), roots("g"), roots("h"), 3, "Phi'"),
}


@pytest.mark.parametrize("shape", sorted(SHAPES))
def test_expanded_matches_factored(shape):
    rng = random.Random(shape)
    prod = SHAPES[shape](5)
    poly = prod.expand()
    for _ in range(200):
        env = _rand_env(rng, ["af", "bf", "ag", "bg", "ah", "bh"])
        assert evaluate_expanded(poly, env) == prod.value(env)


@given(st.sampled_from([3, 5, 7, 11]), st.integers(1, 12), nonzero, st.sampled_from([1, -1]))
def test_arithmetic_roundtrip(p, k, alpha, eps):
    if alpha.numerator % p == 0 or alpha.denominator % p == 0:
        with pytest.raises(NotArithmetic):
            HeckeParams.ordinary(p, k, alpha, eps)
        return
    f = HeckeParams.ordinary(p, k, alpha, eps)
    assert f.alpha * f.beta == eps * F(p) ** (k - 1)
    assert HeckeParams.from_json(f.to_json()) == f


def test_arithmetic_violation():
    with pytest.raises(NotArithmetic):
        HeckeParams(5, 2, F(1), F(2), arithmetic=True)
    with pytest.raises(NotArithmetic):
        HeckeParams(5, 2, F(5), F(1), arithmetic=True)


@given(st.sampled_from([3, 5, 7]), st.integers(1, 8), nonzero)
def test_cm_dictionary_readback(p, w, a):
    if a.numerator % p == 0 or a.denominator % p == 0:
        return
    psi = CMCharacter(F(p) ** (w - 1) / a, a, w)  # non-unit first: must be reordered
    g = cm_hecke_params(psi, p)
    assert g.a_p == psi.psi_p + psi.psi_pbar
    if w > 1:
        assert g.alpha == a


def test_identity_8_eq_4x4_report():
    rep = euler.verify_identity_8_eq_4x4(100, seed=7)
    assert rep.selected == "unsquared_triple_vs_deg4"
    assert rep.failures == 0
    lit = rep.readings["literal_triple_vs_deg4"]
    assert lit["failures"] > 0
    assert lit["factor_diff"]["lhs_only"] or lit["factor_diff"]["rhs_only"]
    js = rep.to_json()
    assert js["samples"] == 100


def test_identity_ad_report():
    rep = euler.verify_identity_ad_eq_bdp_times_quad(100, seed=8)
    assert rep.selected == "squared_ad_vs_deg4"
    assert rep.failures == 0
    assert rep.readings["unsquared_ad_vs_deg4"]["failures"] == 100


def test_identity_report_is_deterministic():
    a = euler.verify_identity_8_eq_4x4(20, seed=3).to_json()
    b = euler.verify_identity_8_eq_4x4(20, seed=3).to_json()
    assert a == b
