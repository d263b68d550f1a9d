"""Truncated power series in Z_p[[T]] with per-coefficient precision.

The generator convention is fixed once: gamma acts on the cyclotomic tower
through u = 1 + p, so T = gamma - 1 and evaluation at s means T = u^s - 1.

Each coefficient c_k carries its own absolute precision ``precs[k]`` (<= N).
Substitutions whose inner series has a non-zero constant term lose digits in
the low coefficients because the discarded tail T^M, T^{M+1}, ... leaks into
them with a p-power weight; the loss is recorded rather than hidden.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import PrecisionExhausted, ZeroAtPrecision
from .padic import INF, PadicNumber, _split

Scalar = Union[int, Fraction, PadicNumber]


def _v(n: int, p: int, cap: int) -> int:
    """Valuation of n, capped at ``cap`` (n = 0 gives cap)."""
    if n == 0:
        return cap
    v, _ = _split(n, p)
    return min(v, cap)


@dataclass(frozen=True, eq=False)
class IwasawaSeries:
    p: int
    N: int
    M: int
    coeffs: tuple[int, ...]
    precs: tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.coeffs) != self.M:
            c = tuple(self.coeffs[: self.M]) + (0,) * max(0, self.M - len(self.coeffs))
            object.__setattr__(self, "coeffs", c)
        precs = self.precs or (self.N,) * self.M
        precs = tuple(max(0, min(int(x), self.N)) for x in precs)
        object.__setattr__(self, "precs", precs)
        object.__setattr__(self, "coeffs", tuple(c % self.p**k for c, k in zip(self.coeffs, precs)))

    # -- constructors -------------------------------------------------
    @classmethod
    def from_coeffs(cls, p: int, N: int, M: int, coeffs: Sequence[int]) -> "IwasawaSeries":
        return cls(p, N, M, tuple(int(c) for c in coeffs))

    @classmethod
    def constant(cls, c: int, p: int, N: int, M: int) -> "IwasawaSeries":
        return cls(p, N, M, (c,))

    @classmethod
    def variable(cls, p: int, N: int, M: int) -> "IwasawaSeries":
        return cls(p, N, M, (0, 1))

    @property
    def u(self) -> int:
        return 1 + self.p

    def _like(self, coeffs, precs) -> "IwasawaSeries":
        return IwasawaSeries(self.p, self.N, self.M, tuple(coeffs), tuple(precs))

    def _check(self, other: "IwasawaSeries"):
        if (self.p, self.M) != (other.p, other.M):
            raise ValueError("series over different (p, M)")

    # -- ring operations ----------------------------------------------
    def __add__(self, other):
        if isinstance(other, int):
            other = IwasawaSeries.constant(other, self.p, self.N, self.M)
        self._check(other)
        precs = [min(a, b) for a, b in zip(self.precs, other.precs)]
        return self._like([a + b for a, b in zip(self.coeffs, other.coeffs)], precs)

    __radd__ = __add__

    def __neg__(self):
        return self._like([-c for c in self.coeffs], self.precs)

    def __sub__(self, other):
        if isinstance(other, int):
            other = IwasawaSeries.constant(other, self.p, self.N, self.M)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self._like([c * other for c in self.coeffs], self.precs)
        self._check(other)
        M, p = self.M, self.p
        N = min(self.N, other.N)
        mod = p**N
        a, b = self.coeffs, other.coeffs
        out = [0] * M
        for i in range(M):
            if a[i]:
                ai = a[i]
                for j in range(M - i):
                    if b[j]:
                        out[i + j] += ai * b[j]
        # prec of a_i b_j is min(pa_i + v(b_j), pb_j + v(a_i))
        va = [_v(c, p, N) for c in a]
        vb = [_v(c, p, N) for c in b]
        precs = []
        for k in range(M):
            best = N
            for i in range(k + 1):
                j = k - i
                best = min(best, self.precs[i] + vb[j], other.precs[j] + va[i])
            precs.append(best)
        return IwasawaSeries(p, N, M, tuple(c % mod for c in out), tuple(precs))

    __rmul__ = __mul__

    def inverse(self) -> "IwasawaSeries":
        """Multiplicative inverse; requires a unit constant term."""
        p, M, N = self.p, self.M, self.N
        c0 = self.coeffs[0]
        if c0 % p == 0 or self.precs[0] == 0:
            raise ZeroDivisionError("constant term is not a unit")
        mod = p**N
        inv0 = pow(c0, -1, mod)
        out = [inv0]
        for k in range(1, M):
            acc = 0
            for j in range(1, k + 1):
                if self.coeffs[j]:
                    acc += self.coeffs[j] * out[k - j]
            out.append(-acc * inv0 % mod)
        precs = []
        running = N
        for k in range(M):
            running = min(running, self.precs[k])
            precs.append(running)
        return self._like(out, precs)

    def __eq__(self, other) -> bool:
        """Congruence at the shared per-coefficient precision."""
        if not isinstance(other, IwasawaSeries):
            return NotImplemented
        self._check(other)
        return all(
            (a - b) % self.p ** min(pa, pb) == 0
            for a, b, pa, pb in zip(self.coeffs, other.coeffs, self.precs, other.precs)
        )

    __hash__ = None

    def truncate_precision(self, N: int) -> "IwasawaSeries":
        return IwasawaSeries(self.p, N, self.M, self.coeffs, tuple(min(x, N) for x in self.precs))

    # -- substitution -------------------------------------------------
    def compose(self, inner: Sequence[int]) -> "IwasawaSeries":
        """F(G(T)) for an integral series G with v(G(0)) >= 1 (or G(0) = 0).

        The coefficient j of the result depends on c_k with weight
        p^{(k - j) v(G(0))} for k > j; the unknown tail k >= M is accounted
        for in the same way.
        """
        p, M, N = self.p, self.M, self.N
        mod = p**N
        g = [int(c) % mod for c in inner[:M]] + [0] * max(0, M - len(inner))
        v0 = _v(g[0], p, N) if g[0] else INF
        if v0 < 1:
            raise ValueError("inner series must have topologically nilpotent constant term")
        res = [0] * M
        for k in range(M - 1, -1, -1):
            # res = res * g + c_k
            new = [0] * M
            for i in range(M):
                if res[i]:
                    ri = res[i]
                    for j in range(M - i):
                        if g[j]:
                            new[i + j] += ri * g[j]
            new[0] += self.coeffs[k]
            res = [c % mod for c in new]
        precs = []
        for j in range(M):
            best = N
            for k in range(M):
                if k <= j:
                    best = min(best, self.precs[k])
                elif v0 != INF:
                    best = min(best, self.precs[k] + (k - j) * v0)
            if v0 != INF:
                best = min(best, int((M - j) * v0))
            precs.append(best)
        return self._like(res, precs)

    def substitute_unit_power(self, e: int, sigma: int) -> "IwasawaSeries":
        """F(u^e (1+T)^sigma - 1) for sigma = +1 or -1."""
        p, M, N = self.p, self.M, self.N
        mod = p**N
        ue = pow(self.u, e, mod)
        if sigma == 1:
            base = [1, 1]
        elif sigma == -1:
            base = [(-1) ** k for k in range(M)]
        else:
            raise ValueError("sigma must be +1 or -1")
        g = [ue * c % mod for c in base]
        g[0] = (g[0] - 1) % mod
        return self.compose(g)

    # -- evaluation ---------------------------------------------------
    def evaluate(self, s: Scalar) -> PadicNumber:
        """F(u^s - 1) for s in Z_p."""
        p, N = self.p, self.N
        s_res, s_abs = _integral_residue(s, p, N)
        if s_res % p**s_abs == 0 and s_abs >= N:
            x, vx = 0, INF
        else:
            vs = _v(s_res, p, s_abs)
            vx = 1 + vs
        # u^s mod p^(s_abs + 1) only depends on s mod p^s_abs
        x_abs = s_abs + 1
        if vx != INF:
            x = (pow(self.u, s_res, p**x_abs) - 1) % p**x_abs
        prec = N
        for k, pk in enumerate(self.precs):
            if vx == INF:
                if k == 0:
                    prec = min(prec, pk)
                continue
            prec = min(prec, pk + k * vx)
        if vx != INF:
            prec = min(prec, self.M * vx, x_abs)
        prec = int(prec)
        if prec <= 0:
            raise PrecisionExhausted("no p-adic digits survive the evaluation")
        mod = p**prec
        if vx == INF:
            return PadicNumber.from_residue(self.coeffs[0], p, prec)
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % mod
        return PadicNumber.from_residue(acc, p, prec)

    # -- invariants ---------------------------------------------------
    def mu_lambda(self) -> "MuLambda":
        p = self.p
        vals = []
        for c, pk in zip(self.coeffs, self.precs):
            if c % p**pk == 0 or pk == 0:
                vals.append(None)
            else:
                vals.append(_v(c, p, pk))
        known = [v for v in vals if v is not None]
        if not known:
            raise ZeroAtPrecision("series vanishes at its declared precision")
        mu = min(known)
        lam = vals.index(mu)
        # a zero coefficient known only below mu could hide a smaller valuation
        reliable = all(vals[k] is not None or self.precs[k] > mu for k in range(lam))
        reliable = reliable and mu < self.N
        return MuLambda(mu, lam, reliable)

    # -- serialisation -------------------------------------------------
    def to_json(self) -> dict:
        return {
            "p": self.p,
            "N": self.N,
            "M": self.M,
            "coeffs": [str(c) for c in self.coeffs],
            "precisions": list(self.precs),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "IwasawaSeries":
        precs = tuple(obj.get("precisions", ()))
        return cls(int(obj["p"]), int(obj["N"]), int(obj["M"]), tuple(int(c) for c in obj["coeffs"]), precs)

    def __repr__(self) -> str:
        terms = [f"{c}*T^{k}" for k, c in enumerate(self.coeffs[:6]) if c]
        return f"IwasawaSeries(p={self.p}, N={self.N}, M={self.M}: {' + '.join(terms) or '0'} + ...)"


@dataclass(frozen=True)
class MuLambda:
    mu: int
    lam: int | str
    reliable: bool

    def to_json(self) -> dict:
        return {"mu": self.mu, "lambda": self.lam, "reliable": self.reliable}


def twist(F: IwasawaSeries) -> IwasawaSeries:
    """F(u(1+T) - 1): the cyclotomic twist."""
    return F.substitute_unit_power(1, 1)


def involution(F: IwasawaSeries) -> IwasawaSeries:
    """F((1+T)^{-1} - 1)."""
    return F.substitute_unit_power(0, -1)


def evaluate(F, s: Scalar) -> PadicNumber:
    return F.evaluate(s)


def mu_lambda(F: IwasawaSeries) -> MuLambda:
    return F.mu_lambda()


@dataclass(frozen=True, eq=False)
class SeriesQuotient:
    """num / den for a p-adic L-function with a pole (trivial character).

    ``den`` is a fixed regularising series, not a unit of Lambda, so only
    values at points where den does not vanish are meaningful.
    """

    num: IwasawaSeries
    den: IwasawaSeries

    def evaluate(self, s: Scalar) -> PadicNumber:
        a = self.num.evaluate(s)
        b = self.den.evaluate(s)
        if b.is_zero():
            raise PrecisionExhausted("denominator vanishes at this point")
        return a / b

    def substitute_unit_power(self, e: int, sigma: int) -> "SeriesQuotient":
        return SeriesQuotient(self.num.substitute_unit_power(e, sigma), self.den.substitute_unit_power(e, sigma))


def _integral_residue(s: Scalar, p: int, N: int) -> tuple[int, int]:
    """(representative mod p^A, A) for s in Z_p with A = min(N, absprec)."""
    if isinstance(s, PadicNumber):
        if s.val < 0:
            raise ValueError("s must lie in Z_p")
        A = int(min(N, s.absprec))
        return s.residue(A), A
    s = Fraction(s)
    if s.denominator % p == 0:
        raise ValueError("s must lie in Z_p")
    mod = p**N
    return s.numerator * pow(s.denominator, -1, mod) % mod, N
