"""Dirichlet characters, exact cyclotomic arithmetic, Gauss sums and
generalised Bernoulli numbers.

A character of modulus f and order m is stored through its exponents on a
fixed generating set of (Z/f)^x: chi(g_i) = zeta_m^{e_i}.  The value table is
built on demand by walking the group from these generators.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import NotEmbeddable, NotPrimitive, RamifiedEmbedding
from .padic import (
    PadicNumber,
    UnramifiedElement,
    cyclotomic_poly,
    multiplicative_order,
    primitive_root,
    teichmuller,
    unramified_ring,
)


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_phi(n: int) -> int:
    r = n
    for q in _factor(n):
        r = r // q * (q - 1)
    return r


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


@lru_cache(maxsize=None)
def unit_group_generators(f: int) -> tuple[tuple[int, int], ...]:
    """Generators of (Z/f)^x as (generator, order) pairs, one per cyclic factor.

    Odd prime powers use the least primitive root mod l^e; powers of two use
    -1 and 5.  Each generator is CRT-lifted to be 1 at the other prime powers.
    """
    gens: list[tuple[int, int]] = []
    for ell, e in sorted(_factor(f).items()):
        q = ell**e
        rest = f // q
        local: list[tuple[int, int]] = []
        if ell == 2:
            if e >= 2:
                local.append((q - 1, 2))
            if e >= 3:
                local.append((5, q // 4))
        else:
            phi = q // ell * (ell - 1)
            g = primitive_root(ell)
            if e > 1 and pow(g, ell - 1, ell * ell) == 1:
                g += ell
            local.append((g, phi))
        for g, order in local:
            if rest == 1:
                gens.append((g % f, order))
            else:
                # x = g mod q, x = 1 mod rest
                x = g + q * ((1 - g) * pow(q, -1, rest) % rest)
                gens.append((x % f, order))
    return tuple(gens)


@dataclass(frozen=True)
class DirichletCharacter:
    """chi mod ``modulus`` with chi(g) = zeta_order^e for each (g, e) in ``images``."""

    modulus: int
    order: int
    images: tuple[tuple[int, int], ...]
    _table: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        table = _walk(self.modulus, self.order, self.images)
        object.__setattr__(self, "_table", table)

    # -- constructors -------------------------------------------------
    @classmethod
    def trivial(cls, modulus: int = 1) -> "DirichletCharacter":
        gens = unit_group_generators(modulus)
        return cls(modulus, 1, tuple((g, 0) for g, _ in gens))

    @classmethod
    def from_values(cls, modulus: int, order: int, exponent: Callable[[int], int]) -> "DirichletCharacter":
        """Build from a function a -> exponent, read off on the canonical generators.

        Multiplicativity of ``exponent`` is checked on the whole group.
        """
        gens = unit_group_generators(modulus)
        chi = cls(modulus, order, tuple((g, exponent(g) % order) for g, _ in gens))
        for a, e in chi._table.items():
            if (exponent(a) - e) % order:
                raise ValueError("exponent function is not a character")
        return chi.reduced()

    @classmethod
    def teichmuller(cls, p: int, power: int = 1) -> "DirichletCharacter":
        """omega**power mod p, with omega(g) = zeta_{p-1} at the least primitive root g."""
        g = primitive_root(p)
        return cls(p, p - 1, ((g, power % (p - 1)),)).reduced()

    @classmethod
    def kronecker(cls, D: int) -> "DirichletCharacter":
        """The Kronecker symbol (D/.) as a character mod |D|."""
        f = abs(D)
        return cls.from_values(f, 2, lambda a: 0 if kronecker_symbol(D, a) == 1 else 1)

    @classmethod
    def from_json(cls, obj: dict) -> "DirichletCharacter":
        f = int(obj["modulus"])
        m = int(obj["order"])
        imgs = tuple((int(g) % f, int(e) % m) for g, e in obj["generator_images"])
        return cls(f, m, imgs).reduced()

    def to_json(self) -> dict:
        c = self.canonical()
        return {
            "modulus": c.modulus,
            "generator_images": [[g, e] for g, e in sorted(c.images)],
            "order": c.order,
        }

    # -- evaluation ---------------------------------------------------
    def exponent(self, a: int) -> int | None:
        """e with chi(a) = zeta_m^e, or None when gcd(a, f) > 1."""
        return self._table.get(a % self.modulus)

    def __call__(self, a: int) -> "CyclotomicElement":
        e = self.exponent(a)
        if e is None:
            return CyclotomicElement.zero(self.order)
        return CyclotomicElement.root_of_unity(self.order, e)

    def values(self) -> dict[int, int]:
        return dict(self._table)

    # -- structure ----------------------------------------------------
    def canonical(self) -> "DirichletCharacter":
        """Same character expressed on the canonical generators with exact order."""
        gens = unit_group_generators(self.modulus)
        c = DirichletCharacter(self.modulus, self.order, tuple((g, self._table[g]) for g, _ in gens))
        return c.reduced()

    def reduced(self) -> "DirichletCharacter":
        m = self.order
        g = m
        for _, e in self.images:
            g = math.gcd(g, e)
        if g == m:
            return DirichletCharacter(self.modulus, 1, tuple((x, 0) for x, _ in self.images))
        if g == 1:
            return self
        return DirichletCharacter(self.modulus, m // g, tuple((x, e // g) for x, e in self.images))

    def is_trivial(self) -> bool:
        return self.order == 1

    def parity(self) -> int:
        """chi(-1) as +1 or -1."""
        e = self.exponent(-1)
        return 1 if e == 0 else -1

    def is_even(self) -> bool:
        return self.parity() == 1

    @cached_property
    def conductor(self) -> int:
        f = self.modulus
        for d in sorted(divisors(f)):
            if all(e == 0 for a, e in self._table.items() if a % d == 1 % d):
                return d
        return f

    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def primitive(self) -> "DirichletCharacter":
        """The primitive character inducing this one."""
        d = self.conductor
        if d == self.modulus:
            return self
        f = self.modulus

        def lift(b: int) -> int:
            a = b % d
            while math.gcd(a, f) != 1:
                a += d
            return a

        gens = unit_group_generators(d)
        return DirichletCharacter(d, self.order, tuple((g, self._table[lift(g) % f]) for g, _ in gens)).reduced()

    def induce(self, modulus: int) -> "DirichletCharacter":
        if modulus % self.modulus:
            raise ValueError(f"{modulus} is not a multiple of {self.modulus}")
        gens = unit_group_generators(modulus)
        return DirichletCharacter(
            modulus, self.order, tuple((g, self._table[g % self.modulus]) for g, _ in gens)
        ).reduced()

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        f = _lcm(self.modulus, other.modulus)
        m = _lcm(self.order, other.order)
        a, b = self.induce(f), other.induce(f)
        sa, sb = m // self.order, m // other.order
        gens = unit_group_generators(f)
        return DirichletCharacter(
            f, m, tuple((g, (a._table[g] * sa + b._table[g] * sb) % m) for g, _ in gens)
        ).reduced()

    def __pow__(self, k: int) -> "DirichletCharacter":
        m = self.order
        return DirichletCharacter(self.modulus, m, tuple((g, e * k % m) for g, e in self.images)).reduced()

    def inverse(self) -> "DirichletCharacter":
        return self ** (-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        return self.modulus == other.modulus and self.canonical().images == other.canonical().images and \
            self.canonical().order == other.canonical().order

    def __hash__(self) -> int:
        c = self.canonical()
        return hash((c.modulus, c.order, c.images))

    def same_primitive(self, other: "DirichletCharacter") -> bool:
        return self.primitive() == other.primitive()

    # -- p-adic values ------------------------------------------------
    def padic_table(self, p: int, N: int) -> dict[int, int]:
        """chi(a) mod p^N for a coprime to f, when chi takes values in Z_p."""
        m = self.order
        if (p - 1) % m:
            raise NotEmbeddable(f"order {m} does not divide {p - 1}")
        zeta = teichmuller(primitive_root(p), p, N).unit
        z = pow(zeta, (p - 1) // m, p**N)
        mod = p**N
        powers = [pow(z, e, mod) for e in range(m)]
        return {a: powers[e] for a, e in self._table.items()}

    def __repr__(self) -> str:
        return f"DirichletCharacter(modulus={self.modulus}, order={self.order}, images={self.images})"


def all_characters(f: int) -> list[DirichletCharacter]:
    """Every character mod f, reduced to its exact order."""
    gens = unit_group_generators(f)
    m = 1
    for _, o in gens:
        m = _lcm(m, o)
    out = []
    for js in itertools.product(*(range(o) for _, o in gens)):
        imgs = tuple((g, j * (m // o)) for (g, o), j in zip(gens, js))
        out.append(DirichletCharacter(f, m, imgs).reduced())
    return out


def primitive_characters(f: int) -> list[DirichletCharacter]:
    return [chi for chi in all_characters(f) if chi.is_primitive()]


def _walk(f: int, m: int, images: Sequence[tuple[int, int]]) -> dict[int, int]:
    table = {1 % f: 0}
    frontier = [1 % f]
    while frontier:
        nxt = []
        for a in frontier:
            for g, e in images:
                b = a * g % f
                want = (table[a] + e) % m
                if b in table:
                    if table[b] != want:
                        raise ValueError("generator images are not consistent with a character")
                else:
                    table[b] = want
                    nxt.append(b)
        frontier = nxt
    if len(table) != euler_phi(f):
        raise ValueError("images do not generate the unit group")
    return table


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def kronecker_symbol(D: int, n: int) -> int:
    """Kronecker symbol (D/n) for n >= 1."""
    if n <= 0:
        raise ValueError("n must be positive")
    result = 1
    while n % 2 == 0:
        n //= 2
        if D % 2 == 0:
            return 0
        if D % 8 in (3, 5):
            result = -result
    # Jacobi symbol (D/n) for odd n
    a = D % n if n > 1 else 0
    if n == 1:
        return result
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def parse_character(spec: str, p: int | None = None) -> DirichletCharacter:
    """Parse ``trivial``, ``omega^k`` (needs p), ``quad:D`` or a JSON object."""
    import json

    s = spec.strip()
    if s == "trivial":
        return DirichletCharacter.trivial()
    if s.startswith("omega"):
        if p is None:
            raise ValueError("omega needs a prime")
        k = int(s.split("^", 1)[1]) if "^" in s else 1
        return DirichletCharacter.teichmuller(p, k)
    if s.startswith("quad:"):
        n = int(s[5:])
        D = n if n % 4 == 1 else (4 * n if n % 4 != 0 else n)
        return DirichletCharacter.kronecker(D)
    return DirichletCharacter.from_json(json.loads(s))


# ---------------------------------------------------------------------------
# Cyclotomic fields


@lru_cache(maxsize=None)
def _phi_tuple(m: int) -> tuple[int, ...]:
    return tuple(cyclotomic_poly(m))


@lru_cache(maxsize=None)
def _reduction_matrix(m: int):
    """Row i holds the coefficients of x^i mod Phi_m, for 0 <= i < m."""
    phi = _phi_tuple(m)
    d = len(phi) - 1
    rows = []
    cur = [0] * d
    for i in range(m):
        if i < d:
            cur = [int(k == i) for k in range(d)]
        else:
            # x * cur, then replace x^d by -sum phi_j x^j
            top = cur[-1]
            cur = [0] + cur[:-1]
            cur = [c - top * phi[k] for k, c in enumerate(cur)]
        rows.append(cur)
    R = np.array(rows, dtype=object)
    return R, R.astype(np.int64), max(1, max(abs(int(c)) for row in rows for c in row))


def _reduce_cyclotomic(vec: Sequence, m: int) -> list:
    """Reduce an integer coefficient list (low-first) modulo Phi_m."""
    d = euler_phi(m)
    vec = list(vec)
    folded = [0] * m
    for i, c in enumerate(vec):
        folded[i % m] += c
    R, R64, height = _reduction_matrix(m)
    if max(map(abs, folded), default=0) * height * m < 2**62:
        out = np.array(folded, dtype=np.int64) @ R64
    else:
        out = np.array(folded, dtype=object) @ R
    return [int(c) for c in out]


@dataclass(frozen=True)
class CyclotomicElement:
    """sum coeffs[i] * zeta_m^i on the power basis of Q(zeta_m)."""

    m: int
    coeffs: tuple[Fraction, ...]

    @classmethod
    def from_vector(cls, m: int, vec: Sequence) -> "CyclotomicElement":
        """Reduce an arbitrary-length vector (interpreted mod x^m - 1 first)."""
        folded = [Fraction(0)] * m
        for i, c in enumerate(vec):
            if c:
                folded[i % m] += c
        den = 1
        for c in folded:
            den = _lcm(den, c.denominator)
        red = _reduce_cyclotomic([int(c * den) for c in folded], m)
        return cls(m, tuple(Fraction(c, den) for c in red))

    @classmethod
    def zero(cls, m: int = 1) -> "CyclotomicElement":
        return cls(m, tuple(Fraction(0) for _ in range(euler_phi(m))))

    @classmethod
    def rational(cls, x, m: int = 1) -> "CyclotomicElement":
        d = euler_phi(m)
        return cls(m, (Fraction(x),) + tuple(Fraction(0) for _ in range(d - 1)))

    @classmethod
    def root_of_unity(cls, m: int, e: int) -> "CyclotomicElement":
        vec = [0] * m
        vec[e % m] = 1
        return cls.from_vector(m, vec)

    # -- field operations ---------------------------------------------
    def lift_to(self, L: int) -> "CyclotomicElement":
        """View in Q(zeta_L) for a multiple L of m."""
        if L == self.m:
            return self
        if L % self.m:
            raise ValueError(f"{self.m} does not divide {L}")
        s = L // self.m
        vec = [Fraction(0)] * L
        for i, c in enumerate(self.coeffs):
            vec[i * s] = c
        return CyclotomicElement.from_vector(L, vec)

    def _common(self, other):
        if not isinstance(other, CyclotomicElement):
            other = CyclotomicElement.rational(other, self.m)
        L = _lcm(self.m, other.m)
        return self.lift_to(L), other.lift_to(L), L

    def __add__(self, other):
        a, b, L = self._common(other)
        return CyclotomicElement(L, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicElement(self.m, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other if isinstance(other, CyclotomicElement) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicElement(self.m, tuple(c * other for c in self.coeffs))
        a, b, L = self._common(other)
        den = 1
        for c in a.coeffs + b.coeffs:
            den = _lcm(den, c.denominator)
        ia = [int(c * den) for c in a.coeffs]
        ib = [int(c * den) for c in b.coeffs]
        bound = max(map(abs, ia), default=0) * max(map(abs, ib), default=0) * len(ia)
        dtype = np.int64 if bound < 2**62 else object
        full = np.convolve(np.array(ia, dtype=dtype), np.array(ib, dtype=dtype))
        prod = [0] * L
        for i, x in enumerate(full.tolist()):
            prod[i % L] += x
        red = _reduce_cyclotomic(prod, L)
        d2 = den * den
        return CyclotomicElement(L, tuple(Fraction(c, d2) for c in red))

    __rmul__ = __mul__

    def conjugate(self) -> "CyclotomicElement":
        """Complex conjugation zeta -> zeta^{-1}."""
        vec = [Fraction(0)] * self.m
        for i, c in enumerate(self.coeffs):
            vec[(-i) % self.m] += c
        return CyclotomicElement.from_vector(self.m, vec)

    def galois(self, k: int) -> "CyclotomicElement":
        """The automorphism zeta -> zeta^k (gcd(k, m) = 1)."""
        vec = [Fraction(0)] * self.m
        for i, c in enumerate(self.coeffs):
            vec[(i * k) % self.m] += c
        return CyclotomicElement.from_vector(self.m, vec)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def simplify(self) -> "CyclotomicElement":
        """Express in the smallest Q(zeta_d) with d | m containing the element."""
        for d in sorted(divisors(self.m)):
            if self.m % d == 0 and d < self.m:
                s = self.m // d
                # try to read the element as a vector in zeta_m^s
                cand = [Fraction(0)] * d
                ok = True
                for i, c in enumerate(self.coeffs):
                    if c:
                        if i % s:
                            ok = False
                            break
                        cand[i // s] = c
                if ok and euler_phi(d) >= len([1 for c in cand if c]):
                    e = CyclotomicElement.from_vector(d, cand)
                    if e.lift_to(self.m) == self:
                        return e
        return self

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CyclotomicElement.rational(other, self.m)
        if not isinstance(other, CyclotomicElement):
            return NotImplemented
        a, b, _ = self._common(other)
        return a.coeffs == b.coeffs

    def __hash__(self) -> int:
        s = self.simplify()
        return hash((s.m, s.coeffs))

    def to_json(self) -> dict | str:
        if self.is_rational():
            return str(self.to_rational())
        return {"m": self.m, "coeffs": [str(c) for c in self.coeffs]}

    def __repr__(self) -> str:
        if self.is_rational():
            return str(self.to_rational())
        terms = [f"{c}*z{self.m}^{i}" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms)


def gauss_sum(chi: DirichletCharacter) -> CyclotomicElement:
    """sum_{a mod f} chi(a) zeta_f^a in Q(zeta_lcm(f, m))."""
    if not chi.is_primitive():
        raise NotPrimitive(f"conductor {chi.conductor} < modulus {chi.modulus}")
    f, m = chi.modulus, chi.order
    L = _lcm(f, m)
    vec = [0] * L
    for a, e in chi.values().items():
        vec[(e * (L // m) + a * (L // f)) % L] += 1
    return CyclotomicElement.from_vector(L, vec)


def gauss_norm(chi: DirichletCharacter) -> Fraction:
    """tau(chi) * conj(tau(chi)), which must be rational."""
    t = gauss_sum(chi)
    return (t * t.conjugate()).to_rational()


# ---------------------------------------------------------------------------
# Bernoulli numbers


@lru_cache(maxsize=None)
def bernoulli_number(n: int) -> Fraction:
    """B_n with B_1 = -1/2."""
    if n == 0:
        return Fraction(1)
    s = Fraction(0)
    for k in range(n):
        s += math.comb(n + 1, k) * bernoulli_number(k)
    return -s / (n + 1)


def bernoulli_poly(n: int, x) -> Fraction:
    x = Fraction(x)
    return sum((math.comb(n, k) * bernoulli_number(k) * x ** (n - k) for k in range(n + 1)), Fraction(0))


def gen_bernoulli(n: int, chi: DirichletCharacter) -> CyclotomicElement:
    """B_{n,chi} = f^(n-1) sum_{a=1}^f chi(a) B_n(a/f), in Q(zeta_m)."""
    if n < 1:
        raise ValueError("n must be positive")
    f, m = chi.modulus, chi.order
    vec = [Fraction(0)] * m
    for a in range(1, f + 1):
        e = chi.exponent(a)
        if e is not None:
            vec[e] += bernoulli_poly(n, Fraction(a, f))
    scale = Fraction(f) ** (n - 1)
    return CyclotomicElement.from_vector(m, [c * scale for c in vec])


# ---------------------------------------------------------------------------
# p-adic embedding


def embed_padic(x: CyclotomicElement, p: int, N: int) -> PadicNumber | UnramifiedElement:
    """Image of x under zeta_m -> (fixed root of the lifted factor).

    Lands in Q_p (returned as a PadicNumber) when m | p - 1 or x is rational,
    otherwise in the degree-d unramified extension, d = ord of p mod m.
    """
    m = x.m
    if m % p == 0:
        raise RamifiedEmbedding(f"{p} divides {m}")
    if x.is_rational():
        r = x.to_rational()
        if r == 0:
            return PadicNumber.zero(p)
        return PadicNumber.from_rational(r, p, N)
    d = multiplicative_order(p, m)
    # extra digits to absorb p in the denominators and cancellation
    negv = 0
    for c in x.coeffs:
        if c:
            den_v = 0
            q = c.denominator
            while q % p == 0:
                q //= p
                den_v += 1
            negv = max(negv, den_v)
    W = N + 2 * negv + 2
    ring = unramified_ring(p, d, W)
    z = ring.root_of_unity(m)
    acc = ring.element([0])
    zi = ring.one()
    for c in x.coeffs:
        if c:
            acc = acc + zi * _embed_fraction(c, ring)
        zi = zi * z
    if d == 1:
        val = acc.to_padic()
        if val.prec == 0:
            return val
        prec = min(val.prec, N)
        return PadicNumber(p, val.val, val.unit % p**prec, prec)
    return acc


def _embed_fraction(c: Fraction, ring):
    from .padic import embed_rational

    return embed_rational(c, ring)
