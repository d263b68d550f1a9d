"""Capped relative-precision arithmetic in Q_p and small unramified extensions.

A :class:`PadicNumber` is ``p**val * unit`` with ``unit`` known modulo
``p**prec``.  A value with ``prec == 0`` is a zero known only to absolute
precision ``val`` (written O(p^val)); the exact zero has ``val = INF``.
Every operation returns the precision its operands justify and nothing more.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

from .errors import NonResidue, NotAUnit, PrecisionExhausted, Ramified

INF = math.inf

Rational = Union[int, Fraction]


def valuation(x: Rational, p: int) -> float:
    """p-adic valuation of a rational number (``INF`` for 0)."""
    if x == 0:
        return INF
    x = Fraction(x)
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def _split(n: int, p: int) -> tuple[int, int]:
    """Return (v, m) with n = p**v * m, p not dividing m; n != 0."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


@dataclass(frozen=True, eq=False)
class PadicNumber:
    p: int
    val: float  # int, or INF for the exact zero
    unit: int
    prec: int

    # -- construction -------------------------------------------------
    @classmethod
    def from_rational(cls, x: Rational, p: int, prec: int) -> "PadicNumber":
        """Embed a rational with ``prec`` digits of relative precision."""
        if x == 0:
            return cls.zero(p)
        x = Fraction(x)
        vn, num = _split(x.numerator, p)
        vd, den = _split(x.denominator, p)
        mod = p**prec
        unit = num * pow(den, -1, mod) % mod
        return cls(p, vn - vd, unit, prec)

    @classmethod
    def from_residue(cls, n: int, p: int, absprec: int) -> "PadicNumber":
        """An integer known modulo ``p**absprec``."""
        n %= p**absprec
        if n == 0:
            return cls(p, absprec, 0, 0)
        v, m = _split(n, p)
        return cls(p, v, m, absprec - v)

    @classmethod
    def zero(cls, p: int, absprec: float = INF) -> "PadicNumber":
        return cls(p, absprec, 0, 0)

    # -- basic queries ------------------------------------------------
    @property
    def absprec(self) -> float:
        return self.val + self.prec

    def is_zero(self) -> bool:
        """True when the value is zero at its precision."""
        return self.prec == 0

    def is_exact_zero(self) -> bool:
        return self.prec == 0 and self.val == INF

    def valuation(self) -> float:
        return self.val

    def residue(self, n: int) -> int:
        """The value modulo ``p**n``; requires integrality and enough digits."""
        if n > self.absprec:
            raise PrecisionExhausted(f"need {n} digits, have {self.absprec}")
        if self.prec == 0:
            return 0
        if self.val < 0:
            raise ValueError("value is not integral")
        return self.unit * self.p ** int(self.val) % self.p**n

    def lift(self) -> Fraction:
        """A rational representative (``unit * p**val``)."""
        if self.prec == 0:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** int(self.val)

    def __repr__(self) -> str:
        if self.is_exact_zero():
            return f"0 (p={self.p})"
        if self.prec == 0:
            return f"O({self.p}^{self.val})"
        return f"{self.unit}*{self.p}^{self.val} + O({self.p}^{self.absprec})"

    def to_json(self) -> dict:
        return {
            "valuation": None if self.val == INF else int(self.val),
            "unit_mod_pN": str(self.unit),
            "precision": self.prec,
        }

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise ValueError(f"prime mismatch: {self.p} vs {other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return PadicNumber.zero(self.p)
            # enough digits that the other operand decides the precision
            target = self.absprec if self.absprec != INF else self.val + 1
            v = valuation(other, self.p)
            prec = max(int(target - v) + abs(int(v)) + 2, self.prec + 2, 1)
            return PadicNumber.from_rational(other, self.p, prec)
        return NotImplemented

    def __neg__(self) -> "PadicNumber":
        if self.prec == 0:
            return self
        mod = self.p**self.prec
        return PadicNumber(self.p, self.val, (-self.unit) % mod, self.prec)

    def __add__(self, other) -> "PadicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_exact_zero():
            return other
        if other.is_exact_zero():
            return self
        p = self.p
        A = min(self.absprec, other.absprec)
        vmin = min(self.val, other.val)
        if A <= vmin:
            return PadicNumber.zero(p, A)
        vmin, A = int(vmin), int(A)
        mod = p ** (A - vmin)
        s = 0
        if self.prec:
            s += self.unit * p ** (int(self.val) - vmin)
        if other.prec:
            s += other.unit * p ** (int(other.val) - vmin)
        s %= mod
        if s == 0:
            return PadicNumber.zero(p, A)
        k, u = _split(s, p)
        return PadicNumber(p, vmin + k, u, A - vmin - k)

    __radd__ = __add__

    def __sub__(self, other) -> "PadicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "PadicNumber":
        return (-self) + other

    def __mul__(self, other) -> "PadicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.p
        if self.is_exact_zero() or other.is_exact_zero():
            return PadicNumber.zero(p)
        if self.prec == 0 or other.prec == 0:
            return PadicNumber.zero(p, self.val + other.val)
        prec = min(self.prec, other.prec)
        mod = p**prec
        return PadicNumber(p, self.val + other.val, self.unit * other.unit % mod, prec)

    __rmul__ = __mul__

    def inverse(self) -> "PadicNumber":
        if self.prec == 0:
            raise ZeroDivisionError("inverse of a p-adic zero")
        mod = self.p**self.prec
        return PadicNumber(self.p, -self.val, pow(self.unit, -1, mod), self.prec)

    def __truediv__(self, other) -> "PadicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "PadicNumber":
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "PadicNumber":
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return PadicNumber.from_rational(1, self.p, max(self.prec, 1))
        if self.prec == 0:
            return PadicNumber.zero(self.p, self.val * n)
        mod = self.p**self.prec
        return PadicNumber(self.p, self.val * n, pow(self.unit, n, mod), self.prec)

    # -- comparison ---------------------------------------------------
    def compare(self, other) -> tuple[bool, float]:
        """(congruent, shared absolute precision)."""
        other = self._coerce(other)
        A = min(self.absprec, other.absprec)
        diff = self - other
        return diff.is_zero(), A

    def __eq__(self, other) -> bool:
        if not isinstance(other, (PadicNumber, int, Fraction)):
            return NotImplemented
        return self.compare(other)[0]

    __hash__ = None  # congruence is not transitive across precisions


# ---------------------------------------------------------------------------
# Teichmüller lifts, logarithm, square roots


def teichmuller(a: int, p: int, N: int) -> PadicNumber:
    """The (p-1)-st root of unity congruent to ``a`` mod p, to precision p^N."""
    if a % p == 0:
        raise NotAUnit(f"{a} is divisible by {p}")
    mod = p**N
    x = a % mod
    while True:
        y = pow(x, p, mod)
        if y == x:
            return PadicNumber(p, 0, x, N)
        x = y


def _log_one_unit(z: int, p: int, N: int) -> int:
    """log(1 + z) mod p^N for an integer z divisible by p."""
    if z % (p**N) == 0:
        return 0
    t, _ = _split(z, p)
    # terms k with k*t - v_p(k) >= N vanish mod p^N
    K = 1
    while K * t - int(math.log(K, p) + 1e-9) < N:
        K += 1
    e = int(math.log(K, p) + 1e-9)
    work = p ** (N + e)
    mod = p**N
    total = 0
    zk = 1
    for k in range(1, K + 1):
        zk = zk * z % work
        vk, kk = _split(k, p)
        term = (zk // p**vk) * pow(kk, -1, mod)
        total += term if k % 2 else -term
    return total % mod


def plog(u) -> PadicNumber:
    """Iwasawa-normalised p-adic logarithm of a unit.

    The unit is pushed into 1 + pZ_p by raising to the (p-1)-st power, so the
    kernel is exactly the Teichmüller roots of unity.
    """
    if not isinstance(u, PadicNumber):
        raise TypeError("plog expects a PadicNumber")
    if u.prec == 0 or u.val != 0:
        raise NotAUnit(f"plog of non-unit {u!r}")
    p, N = u.p, u.prec
    mod = p**N
    w = pow(u.unit, p - 1, mod)
    val = _log_one_unit(w - 1, p, N) * pow(p - 1, -1, mod) % mod
    return PadicNumber.from_residue(val, p, N)


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sqrt_mod_p(D: int, p: int) -> list[int]:
    """Both square roots of D mod p, ascending."""
    D %= p
    return sorted(r for r in range(p) if r * r % p == D)


def hensel_sqrt(D: int, p: int, N: int, seed: int | None = None) -> PadicNumber:
    """Square root of D in Z_p congruent to ``seed`` mod p.

    Without a seed the root reducing to the least residue mod p is returned;
    the seed is how callers pin the embedding of a quadratic field.
    """
    if D % p == 0:
        raise Ramified(f"{p} divides {D}")
    if legendre(D, p) != 1:
        raise NonResidue(f"{D} is not a square mod {p}")
    if seed is None:
        seed = sqrt_mod_p(D, p)[0]
    if (seed * seed - D) % p:
        raise ValueError(f"seed {seed} is not a square root of {D} mod {p}")
    r = seed % p
    k = 1
    while k < N:
        k = min(2 * k, N)
        mod = p**k
        r = (r - (r * r - D) * pow(2 * r, -1, mod)) % mod
    return PadicNumber(p, 0, r % p**N, N)


def primitive_root(p: int) -> int:
    """Least primitive root mod an odd prime p."""
    phi = p - 1
    factors = _prime_factors(phi)
    for g in range(2, p):
        if all(pow(g, phi // q, p) != 1 for q in factors):
            return g
    return 1  # p = 2


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def multiplicative_order(a: int, m: int) -> int:
    if m == 1:
        return 1
    k, x = 1, a % m
    while x != 1:
        x = x * a % m
        k += 1
    return k


# ---------------------------------------------------------------------------
# Unramified extensions
#
# Z_{p^d} = Z_p[x]/(F) with F the Hensel lift of the lexicographically least
# irreducible factor of the (p^d - 1)-th cyclotomic polynomial mod p, so that
# x itself is a primitive (p^d - 1)-th root of unity.  Factors are ordered by
# the tuple of their negated lower coefficients (for x - r this is just r).


def _pmul(a: Sequence[int], b: Sequence[int], mod: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return [c % mod for c in out]


def _pdivmod(a: Sequence[int], b: Sequence[int], mod: int) -> tuple[list[int], list[int]]:
    """Division by a polynomial with unit leading coefficient (low-first lists)."""
    a = [c % mod for c in a]
    db = len(b) - 1
    inv = pow(b[-1], -1, mod)
    q = [0] * max(len(a) - db, 1)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv % mod
        if c:
            q[i - db] = c
            for j, bj in enumerate(b):
                a[i - db + j] = (a[i - db + j] - c * bj) % mod
    r = a[:db] if db else [0]
    return q, _trim(r)


def _trim(a: list[int]) -> list[int]:
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _psub(a, b, mod):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % mod for x, y in zip(a, b)])


def _padd(a, b, mod):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x + y) % mod for x, y in zip(a, b)])


def _gcdex_mod_p(a, b, p):
    """s, t with s*a + t*b = 1 mod p for coprime a, b over F_p."""
    r0, r1 = _trim([c % p for c in a]), _trim([c % p for c in b])
    s0, s1 = [1], [0]
    t0, t1 = [0], [1]
    while r1 != [0]:
        q, r = _pdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
        t0, t1 = t1, _psub(t0, _pmul(q, t1, p), p)
    if len(r0) != 1:
        raise ValueError("polynomials are not coprime mod p")
    inv = pow(r0[0], -1, p)
    return [c * inv % p for c in s0], [c * inv % p for c in t0]


def hensel_lift_factor(f, g, p, N):
    """Lift f = g*h mod p (g monic, coprime to h) to f = G*H mod p^N."""
    h, r = _pdivmod(f, g, p)
    if r != [0]:
        raise ValueError("g does not divide f mod p")
    s, t = _gcdex_mod_p(g, h, p)
    G, H = [c % p for c in g], h
    for k in range(1, N):
        pk = p**k
        mod = p ** (k + 1)
        e = _psub(f, _pmul(G, H, mod), mod)
        e = [(c // pk) % p for c in e]
        # tau*H + sigma*G = e mod p, deg tau < deg G
        _, tau = _pdivmod(_pmul(t, e, p), G, p)
        sigma, rem = _pdivmod(_psub(e, _pmul(tau, H, p), p), G, p)
        G = _padd(G, [c * pk for c in tau], mod)
        H = _padd(H, [c * pk for c in sigma], mod)
    return G, H


def cyclotomic_poly(n: int) -> list[int]:
    """Integer coefficients of the n-th cyclotomic polynomial, low-first."""
    return list(_cyclotomic(n))


@lru_cache(maxsize=None)
def _cyclotomic(n: int) -> tuple[int, ...]:
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num = _exact_div_int(num, list(_cyclotomic(d)))
    return tuple(num)


def _exact_div_int(a, b):
    a = list(a)
    db = len(b) - 1
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] // b[-1]
        q[i - db] = c
        for j, bj in enumerate(b):
            a[i - db + j] -= c * bj
    return q


@lru_cache(maxsize=None)
def least_primitive_poly(p: int, d: int) -> list[int]:
    """Least monic primitive polynomial of degree d over F_p (low-first).

    Candidates are scanned in the order of the tuple of negated coefficients
    from x^(d-1) down to x^0, which is the order in which the factors of
    Phi_{p^d - 1} mod p are ranked.  For d = 1 this is x - g with g the least
    primitive root.
    """
    from itertools import product

    from sympy import ZZ
    from sympy.polys.galoistools import gf_irreducible_p, gf_pow_mod

    M = p**d - 1
    qs = _prime_factors(M)
    for key in product(range(p), repeat=d):
        coeffs_high = [1] + [(-k) % p for k in key]
        if coeffs_high[-1] == 0:
            continue
        f = [ZZ(c) for c in coeffs_high]
        if not gf_irreducible_p(f, p, ZZ):
            continue
        x = [ZZ(1), ZZ(0)]
        if all(gf_pow_mod(x, M // q, f, p, ZZ) != [ZZ(1)] for q in qs):
            return [int(c) for c in reversed(coeffs_high)]
    raise ValueError("no primitive polynomial found")


@dataclass(frozen=True)
class UnramifiedRing:
    """Z_p[x]/(F) mod p^N where x is a primitive (p^d - 1)-th root of unity."""

    p: int
    d: int
    N: int
    modulus: tuple[int, ...]  # monic F, low-first, coefficients mod p^N

    @property
    def order(self) -> int:
        return self.p**self.d - 1

    def element(self, coeffs, val: int = 0) -> "UnramifiedElement":
        mod = self.p**self.N
        c = [int(x) % mod for x in coeffs] + [0] * self.d
        return UnramifiedElement(self, tuple(c[: self.d]), val)

    def one(self) -> "UnramifiedElement":
        return self.element([1])

    def gen(self) -> "UnramifiedElement":
        if self.d == 1:
            return self.element([(-self.modulus[0])])
        return self.element([0, 1])

    def root_of_unity(self, m: int) -> "UnramifiedElement":
        """The image of zeta_m; requires m | p^d - 1."""
        if self.order % m:
            raise ValueError(f"{m} does not divide {self.order}")
        return self.gen() ** (self.order // m)


@lru_cache(maxsize=None)
def unramified_ring(p: int, d: int, N: int) -> UnramifiedRing:
    M = p**d - 1
    if d == 1:
        r = primitive_root(p)
        t = teichmuller(r, p, N).unit
        return UnramifiedRing(p, 1, N, ((-t) % p**N, 1))
    f0 = least_primitive_poly(p, d)
    # F0 divides x^M - 1 mod p with simple roots, so it lifts uniquely
    xm1 = [-1] + [0] * (M - 1) + [1]
    F, _ = hensel_lift_factor(xm1, f0, p, N)
    return UnramifiedRing(p, d, N, tuple(F))


@dataclass(frozen=True, eq=False)
class UnramifiedElement:
    """``p**val * sum(coeffs[i] x^i)`` with coefficients known mod p^N."""

    ring: UnramifiedRing
    coeffs: tuple[int, ...]
    val: int = 0

    def _lift(self, other) -> "UnramifiedElement":
        if isinstance(other, UnramifiedElement):
            if other.ring != self.ring:
                raise ValueError("elements of different rings")
            return other
        if isinstance(other, PadicNumber):
            return self.ring.element([other.residue(other.absprec) if other.val >= 0 else other.unit],
                                     0 if other.val >= 0 else int(other.val))
        if isinstance(other, (int, Fraction)):
            return embed_rational(Fraction(other), self.ring)
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _aligned(self, other):
        v = min(self.val, other.val)
        p, mod = self.ring.p, self.ring.p**self.ring.N
        a = [c * p ** (self.val - v) % mod for c in self.coeffs]
        b = [c * p ** (other.val - v) % mod for c in other.coeffs]
        return a, b, v

    def __add__(self, other):
        other = self._lift(other)
        a, b, v = self._aligned(other)
        return self.ring.element([x + y for x, y in zip(a, b)], v)

    __radd__ = __add__

    def __neg__(self):
        return self.ring.element([-c for c in self.coeffs], self.val)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        mod = self.ring.p**self.ring.N
        prod = _pmul(self.coeffs, other.coeffs, mod)
        _, r = _pdivmod(prod, self.ring.modulus, mod)
        return self.ring.element(r, self.val + other.val)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        result, base = self.ring.one(), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def in_base_field(self) -> bool:
        return not any(self.coeffs[1:])

    def to_padic(self) -> PadicNumber:
        """Coerce to Q_p when the element lies there."""
        if not self.in_base_field():
            raise ValueError("element does not lie in Q_p")
        n = PadicNumber.from_residue(self.coeffs[0], self.ring.p, self.ring.N)
        if self.val:
            n = n * PadicNumber(self.ring.p, self.val, 1, self.ring.N)
        return n

    def __repr__(self) -> str:
        return f"UnramifiedElement(p={self.ring.p}, d={self.ring.d}, {self.coeffs}, val={self.val})"


def embed_rational(x: Fraction, ring: UnramifiedRing) -> UnramifiedElement:
    p, mod = ring.p, ring.p**ring.N
    if x == 0:
        return ring.element([0])
    vn, num = _split(x.numerator, p)
    vd, den = _split(x.denominator, p)
    return ring.element([num * pow(den, -1, mod)], vn - vd)
