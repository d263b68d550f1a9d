"""Imaginary quadratic fields: class numbers by reduced forms, the quadratic
character, torsion, splitting at p, and log_p of a generator of a power of a
prime above p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .characters import DirichletCharacter, gen_bernoulli
from .errors import NotFundamental, NotSplit, SearchExhausted
from .padic import PadicNumber, hensel_sqrt, plog, sqrt_mod_p


def _squarefree(n: int) -> bool:
    n = abs(n)
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def is_fundamental(D: int) -> bool:
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return _squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def reduced_forms(D: int) -> list[tuple[int, int, int]]:
    """Reduced primitive forms (a, b, c) of discriminant D < 0."""
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError("need a negative discriminant")
    forms = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a:
                continue
            if b < 0 and a == c:
                continue
            if math.gcd(math.gcd(a, abs(b)), c) != 1:
                continue
            forms.append((a, b, c))
        a += 1
    return forms


def class_number(D: int) -> int:
    if D >= 0 or not is_fundamental(D):
        raise NotFundamental(f"{D} is not a negative fundamental discriminant")
    return len(reduced_forms(D))


def torsion_count(D: int) -> int:
    return {-3: 6, -4: 4}.get(D, 2)


@dataclass(frozen=True)
class QuadField:
    D: int

    def __post_init__(self):
        if self.D >= 0 or not is_fundamental(self.D):
            raise NotFundamental(f"{self.D} is not a negative fundamental discriminant")

    @cached_property
    def character(self) -> DirichletCharacter:
        return DirichletCharacter.kronecker(self.D)

    @cached_property
    def h(self) -> int:
        return class_number(self.D)

    @property
    def omega(self) -> int:
        return torsion_count(self.D)

    @cached_property
    def B1(self) -> Fraction:
        return gen_bernoulli(1, self.character).to_rational()

    def split_at(self, p: int) -> bool:
        e = self.character.exponent(p)
        return e == 0

    def sqrt_embedding(self, p: int, N: int) -> PadicNumber:
        """Image of sqrt(D) under the fixed embedding.

        sqrt(d) with d = D/4 (if 4 | D) or D is sent to the Hensel root
        reducing to the least square root of d mod p.
        """
        d = self.D // 4 if self.D % 4 == 0 else self.D
        r = hensel_sqrt(d, p, N, sqrt_mod_p(d, p)[0])
        return r * 2 if self.D % 4 == 0 else r


def class_number_formula_check(D: int) -> dict:
    K = QuadField(D)
    rhs = Fraction(K.omega) * abs(K.B1) / 2
    return {"D": D, "h": K.h, "omega": K.omega, "B1": str(K.B1), "formula": str(rhs), "ok": rhs == K.h}


@dataclass(frozen=True)
class PiLog:
    D: int
    p: int
    h: int
    u: tuple[int, int]  # u = (a + b sqrt(D)) / 2
    embedded: PadicNumber
    log_u: PadicNumber
    seed: int

    def to_json(self) -> dict:
        return {
            "u": list(self.u),
            "u_form": "(a + b*sqrt(D))/2",
            "u_embedded": self.embedded.to_json(),
            "log_u": self.log_u.to_json(),
            "sqrt_seed": self.seed,
        }


def pi_log(D: int, p: int, N: int) -> PiLog:
    """log_p of an element u of norm p^h whose image under the embedding is a unit.

    Search: b = 1, 2, ...; a = 0, 1, ... with +a tried before -a, both up to
    4 p^h.  Any two admissible u differ by a root of unity, so the logarithm
    does not depend on which is found.
    """
    K = QuadField(D)
    if p == 2 or not K.split_at(p):
        raise NotSplit(f"{p} does not split in Q(sqrt({D}))")
    h = K.h
    target = 4 * p**h
    bound = 4 * p**h
    root = K.sqrt_embedding(p, N)
    d = D // 4 if D % 4 == 0 else D
    seed = sqrt_mod_p(d, p)[0]
    for b in range(1, bound + 1):
        rest = target + D * b * b  # a^2 = 4 p^h + D b^2
        if rest < 0:
            break
        a = math.isqrt(rest)
        if a * a != rest or a > bound or (a - b * D) % 2:
            continue
        for sa in ((a, -a) if a else (0,)):
            x = (PadicNumber.from_rational(sa, p, N + 2) + root * b) / 2 if sa else root * b / 2
            if x.prec and x.val == 0:
                x = PadicNumber(p, 0, x.unit % p**N, min(x.prec, N))
                return PiLog(D, p, h, (sa, b), x, plog(x), seed)
    raise SearchExhausted(f"no unit of norm {p}^{h} with |a|, |b| <= {bound}")
