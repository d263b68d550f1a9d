import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from padicfact.characters import (
    CyclotomicElement,
    DirichletCharacter,
    all_characters,
    bernoulli_number,
    embed_padic,
    gauss_norm,
    gauss_sum,
    gen_bernoulli,
    kronecker_symbol,
    parse_character,
    primitive_characters,
)
from padicfact.errors import NotPrimitive, RamifiedEmbedding


def _series_bernoulli(n: int, values: list[int]) -> Fraction:
    """B_{n,chi} for a real character from sum chi(a) t e^{at} / (e^{ft} - 1).

    Power series in t with Fraction coefficients; independent of the
    Bernoulli-polynomial route.
    """
    f = len(values)
    K = n + 2
    # (e^{ft} - 1)/t = sum f^{k+1} t^k / (k+1)!
    den = [Fraction(f ** (k + 1), math.factorial(k + 1)) for k in range(K)]
    num = [sum(Fraction(values[a - 1] * a**k, math.factorial(k)) for a in range(1, f + 1)) for k in range(K)]
    q = [Fraction(0)] * K
    for k in range(K):
        q[k] = (num[k] - sum(q[i] * den[k - i] for i in range(k))) / den[0]
    return q[n] * math.factorial(n)


def _values(chi: DirichletCharacter) -> list[int]:
    out = []
    for a in range(1, chi.modulus + 1):
        v = chi(a) if math.gcd(a, chi.modulus) == 1 else None
        out.append(0 if v is None else int(v.to_rational()))
    return out


@pytest.mark.parametrize("D", [-4, -3, 5, 8, -7, 12, -8, 13])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_gen_bernoulli_against_series_oracle(D, n):
    chi = DirichletCharacter.kronecker(D)
    assert gen_bernoulli(n, chi).to_rational() == _series_bernoulli(n, _values(chi))


def test_gen_bernoulli_examples():
    assert gen_bernoulli(1, DirichletCharacter.kronecker(-4)).to_rational() == Fraction(-1, 2)
    assert gen_bernoulli(2, DirichletCharacter.kronecker(5)).to_rational() == Fraction(4, 5)
    assert gen_bernoulli(1, DirichletCharacter.trivial()).to_rational() == Fraction(1, 2)


@pytest.mark.parametrize("n", range(0, 16))
def test_bernoulli_numbers_against_sympy(n):
    b = sympy.bernoulli(n)
    want = Fraction(int(b.p), int(b.q))
    if n == 1:
        want = Fraction(-1, 2)
    assert bernoulli_number(n) == want


def test_even_character_b1_from_first_moment():
    chi = DirichletCharacter.kronecker(5)
    expect = Fraction(sum(int(chi(a).to_rational()) * a for a in range(1, 5)), 5)
    assert gen_bernoulli(1, chi).to_rational() == expect == 0


def test_gauss_sum_examples():
    assert gauss_sum(DirichletCharacter.trivial()).to_rational() == 1
    t5 = gauss_sum(DirichletCharacter.kronecker(5))
    assert (t5 * t5).to_rational() == 5
    z = [CyclotomicElement.root_of_unity(5, k) for k in range(5)]
    assert t5 == z[1] - z[2] - z[3] + z[4]
    t3 = gauss_sum(DirichletCharacter.kronecker(-3))
    assert (t3 * t3).to_rational() == -3
    assert t3 == CyclotomicElement.root_of_unity(3, 1) - CyclotomicElement.root_of_unity(3, 2)


def test_gauss_sum_needs_primitive():
    with pytest.raises(NotPrimitive):
        gauss_sum(DirichletCharacter.trivial(4))


@pytest.mark.parametrize("f", [7, 16, 21, 25, 36])
def test_gauss_norm_equals_conductor(f):
    for chi in primitive_characters(f):
        assert gauss_norm(chi) == f


def test_character_counts():
    # the number of characters mod f is phi(f); primitive ones by Moebius
    for f in range(1, 60):
        assert len(all_characters(f)) == sympy.totient(f)
        prim = sum(sympy.mobius(d) * sympy.totient(f // d) for d in sympy.divisors(f))
        assert len(primitive_characters(f)) == prim


def test_embed_examples():
    assert embed_padic(CyclotomicElement.rational(1), 5, 4).residue(4) == 1
    assert embed_padic(CyclotomicElement.root_of_unity(4, 1), 5, 2).residue(2) == 7
    with pytest.raises(RamifiedEmbedding):
        embed_padic(gauss_sum(DirichletCharacter.kronecker(5)), 5, 3)


def test_parse_character_forms():
    assert parse_character("trivial").is_trivial()
    w2 = parse_character("omega^2", 5)
    assert w2 == DirichletCharacter.teichmuller(5, 2)
    assert parse_character("quad:5") == DirichletCharacter.kronecker(5)
    assert parse_character('{"modulus": 5, "order": 2, "generator_images": [[2, 1]]}') == w2


def test_json_round_trip_and_canonical_dump():
    chi = DirichletCharacter.teichmuller(7, 2)
    again = DirichletCharacter.from_json(chi.to_json())
    assert again == chi and again.to_json() == chi.to_json()


chars = st.integers(1, 60).flatmap(lambda f: st.sampled_from(all_characters(f)))


@settings(max_examples=150)
@given(chars, st.integers(1, 300), st.integers(1, 300))
def test_multiplicativity(chi, a, b):
    f = chi.modulus
    if math.gcd(a * b, f) != 1:
        return
    assert (chi.exponent(a * b) - chi.exponent(a) - chi.exponent(b)) % chi.order == 0


@settings(max_examples=150)
@given(chars)
def test_parity_and_identity(chi):
    assert chi.exponent(1) == 0
    minus = chi(chi.modulus - 1).to_rational() if chi.modulus > 2 else 1
    assert minus == chi.parity()


@settings(max_examples=100)
@given(chars, st.integers(1, 4))
def test_conductor_stable_under_induction(chi, k):
    big = chi.induce(chi.modulus * k)
    assert big.conductor == chi.conductor
    assert big.primitive() == chi.primitive()


@settings(max_examples=100)
@given(st.integers(-300, 300).filter(lambda d: d not in (0, 1) and d % 4 in (0, 1)), st.integers(1, 500))
def test_kronecker_symbol_matches_sympy_for_odd_n(D, n):
    if n == 1 or n % 2 == 0 or math.gcd(D, n) != 1:
        return
    assert kronecker_symbol(D, n) == sympy.jacobi_symbol(D % n, n)
