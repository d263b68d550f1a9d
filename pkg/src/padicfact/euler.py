"""Modified Euler factors at p and the Euler-factor identities behind the
CM factorisations.

Every factor is a product of linear forms 1 - m, where m is a Laurent
monomial in the Hecke roots (symbols ``af``, ``bf``, ``ag``, ...) with a
rational coefficient absorbing powers of p.  Products are kept as multisets
of such forms so that two sides of an identity can be compared both by value
and factor by factor.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import NotArithmetic, ZeroAlpha, ZeroDenominator
from .padic import valuation

# ---------------------------------------------------------------------------
# symbolic layer


@dataclass(frozen=True)
class Mono:
    """coef * prod sym^e."""

    coef: Fraction
    exps: tuple[tuple[str, int], ...] = ()

    @classmethod
    def sym(cls, name: str) -> "Mono":
        return cls(Fraction(1), ((name, 1),))

    @classmethod
    def const(cls, c) -> "Mono":
        return cls(Fraction(c), ())

    def __mul__(self, other) -> "Mono":
        if not isinstance(other, Mono):
            return Mono(self.coef * Fraction(other), self.exps)
        e = Counter(dict(self.exps))
        for s, k in other.exps:
            e[s] += k
        return Mono(self.coef * other.coef, tuple(sorted((s, k) for s, k in e.items() if k)))

    __rmul__ = __mul__

    def inverse(self) -> "Mono":
        if self.coef == 0:
            raise ZeroDenominator("inverse of a zero monomial")
        return Mono(1 / self.coef, tuple((s, -k) for s, k in self.exps))

    def __truediv__(self, other) -> "Mono":
        if not isinstance(other, Mono):
            other = Mono.const(other)
        return self * other.inverse()

    def __rtruediv__(self, other) -> "Mono":
        return Mono.const(other) * self.inverse()

    def evaluate(self, env: Mapping[str, Fraction]):
        v = self.coef
        for s, k in self.exps:
            x = env[s]
            if k < 0:
                if x == 0:
                    raise ZeroDenominator(f"{s} = 0 appears in a denominator")
                v = v / x ** (-k)
            else:
                v = v * x**k
        return v

    def substitute(self, rules: Mapping[str, "Mono"]) -> "Mono":
        out = Mono.const(self.coef)
        for s, k in self.exps:
            if s in rules:
                r = rules[s]
                out = out * (r ** k if k >= 0 else r.inverse() ** (-k))
            else:
                out = out * Mono(Fraction(1), ((s, k),))
        return out

    def __pow__(self, n: int) -> "Mono":
        if n < 0:
            return self.inverse() ** (-n)
        out = Mono.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __str__(self) -> str:
        parts = [] if self.coef == 1 else [str(self.coef)]
        for s, k in self.exps:
            parts.append(s if k == 1 else f"{s}^{k}")
        return "*".join(parts) or "1"


@dataclass(frozen=True)
class EulerProduct:
    """prod (1 - m)^mult over a multiset of monomials m."""

    factors: tuple[tuple[Mono, int], ...]

    @classmethod
    def of(cls, monos: Iterable[Mono], mult: int = 1) -> "EulerProduct":
        return cls(tuple((m, mult) for m in monos))

    def __mul__(self, other: "EulerProduct") -> "EulerProduct":
        return EulerProduct(self.factors + other.factors)

    def __pow__(self, n: int) -> "EulerProduct":
        return EulerProduct(tuple((m, k * n) for m, k in self.factors))

    def value(self, env: Mapping[str, Fraction]):
        v = Fraction(1)
        for m, k in self.factors:
            v = v * (1 - m.evaluate(env)) ** k
        return v

    def multiset(self) -> Counter:
        c: Counter = Counter()
        for m, k in self.factors:
            c[m] += k
        return c

    def substitute(self, rules: Mapping[str, Mono]) -> "EulerProduct":
        return EulerProduct(tuple((m.substitute(rules), k) for m, k in self.factors))

    def expand(self) -> dict:
        """Laurent-polynomial expansion as {exps: coefficient}."""
        poly: dict = {(): Fraction(1)}
        for m, k in self.factors:
            for _ in range(k):
                new: dict = {}
                for exps, c in poly.items():
                    new[exps] = new.get(exps, 0) + c
                    prod = Mono(c, exps) * m
                    new[prod.exps] = new.get(prod.exps, 0) - prod.coef
                poly = {e: c for e, c in new.items() if c}
        return poly

    def __str__(self) -> str:
        return " ".join(f"(1 - {m})" + (f"^{k}" if k != 1 else "") for m, k in self.factors)


def evaluate_expanded(poly: dict, env: Mapping[str, Fraction]):
    return sum((Mono(c, e).evaluate(env) for e, c in poly.items()), Fraction(0))


def multiset_diff(lhs: EulerProduct, rhs: EulerProduct) -> dict:
    a, b = lhs.multiset(), rhs.multiset()
    only_l = a - b
    only_r = b - a
    return {
        "lhs_only": sorted(f"(1 - {m})^{k}" for m, k in only_l.items()),
        "rhs_only": sorted(f"(1 - {m})^{k}" for m, k in only_r.items()),
    }


# ---------------------------------------------------------------------------
# parameters


def _frac(x) -> Fraction:
    return Fraction(x) if not isinstance(x, str) else Fraction(x)


@dataclass(frozen=True)
class HeckeParams:
    p: int
    k: int
    alpha: Fraction
    beta: Fraction
    eps_p: Fraction = Fraction(1)
    arithmetic: bool = False

    def __post_init__(self):
        if self.arithmetic:
            if self.alpha * self.beta != self.eps_p * Fraction(self.p) ** (self.k - 1):
                raise NotArithmetic("alpha * beta != eps(p) p^(k-1)")
            if self.alpha == 0 or valuation(self.alpha, self.p) != 0:
                raise NotArithmetic("alpha is not a p-adic unit")

    @classmethod
    def ordinary(cls, p: int, k: int, alpha, eps_p=1) -> "HeckeParams":
        """Arithmetic-mode parameters: beta = eps(p) p^(k-1) / alpha."""
        alpha = Fraction(alpha)
        if alpha == 0:
            raise NotArithmetic("alpha must be nonzero")
        beta = Fraction(eps_p) * Fraction(p) ** (k - 1) / alpha
        return cls(p, k, alpha, beta, Fraction(eps_p), True)

    @property
    def a_p(self) -> Fraction:
        return self.alpha + self.beta

    @classmethod
    def from_json(cls, obj: Mapping) -> "HeckeParams":
        return cls(int(obj["p"]), int(obj["k"]), _frac(obj["alpha"]), _frac(obj["beta"]),
                   _frac(obj.get("eps_p", 1)), bool(obj.get("arithmetic", False)))

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "alpha": str(self.alpha), "beta": str(self.beta),
                "eps_p": str(self.eps_p), "arithmetic": self.arithmetic}


@dataclass(frozen=True)
class CMCharacter:
    """Values of a CM Hecke character at the two primes above a split p."""

    psi_p: Fraction
    psi_pbar: Fraction
    w: int
    eps: Fraction = Fraction(1)

    @classmethod
    def from_json(cls, obj: Mapping) -> "CMCharacter":
        return cls(_frac(obj["psi_p"]), _frac(obj["psi_pbar"]), int(obj["w"]), _frac(obj.get("eps", 1)))

    def to_json(self) -> dict:
        return {"psi_p": str(self.psi_p), "psi_pbar": str(self.psi_pbar), "w": self.w, "eps": str(self.eps)}


@dataclass(frozen=True)
class CMParams:
    """The two CM characters lambda (for g) and mu (for h)."""

    lam: CMCharacter
    mu: CMCharacter

    @classmethod
    def from_json(cls, obj: Mapping) -> "CMParams":
        return cls(CMCharacter.from_json(obj["lambda"]), CMCharacter.from_json(obj["mu"]))


def cm_hecke_params(psi: CMCharacter, p: int, arithmetic: bool = True) -> HeckeParams:
    """{alpha, beta} = {Psi(p), Psi(pbar)}, alpha the p-adic unit in arithmetic mode."""
    a, b = psi.psi_p, psi.psi_pbar
    if arithmetic:
        if a * b != psi.eps * Fraction(p) ** (psi.w - 1):
            raise NotArithmetic("Psi(p) Psi(pbar) != eps(p) p^(w-1)")
        if a == 0 or valuation(a, p) != 0:
            a, b = b, a
        if a == 0 or valuation(a, p) != 0:
            raise NotArithmetic("neither Psi value is a p-adic unit")
    return HeckeParams(p, psi.w, a, b, psi.eps, arithmetic)


# ---------------------------------------------------------------------------
# factor shapes on symbolic roots


def _roots(name: str) -> tuple[Mono, Mono]:
    return Mono.sym("a" + name), Mono.sym("b" + name)


def _ppow(p: int, e: int) -> Mono:
    return Mono.const(Fraction(p) ** e)


def adjoint_factors(p: int, a: Mono, b: Mono) -> EulerProduct:
    return EulerProduct.of([b / a, b / (a * p)])


def deg4_factors(p: int, f: tuple[Mono, Mono], g: tuple[Mono, Mono], s: int, dominance: str) -> EulerProduct:
    """The four-factor Rankin-Selberg modification at s, f- or g-dominant."""
    if dominance == "g":
        f, g = g, f
    elif dominance != "f":
        raise ValueError("dominance must be 'f' or 'g'")
    (af, bf), (ag, bg) = f, g
    return EulerProduct.of([
        _ppow(p, s - 1) / (af * ag),
        _ppow(p, s - 1) / (af * bg),
        bf * ag / _ppow(p, s),
        bf * bg / _ppow(p, s),
    ])


def triple_factors(p: int, f, g, h, c: int, region: str, squared: bool = True) -> EulerProduct:
    """Triple-product modification at the centre c.

    ``region`` is one of f, g, h (dominant) or bal.  With ``squared`` each
    linear form carries the exponent 2 as displayed for these factors.
    """
    mult = 2 if squared else 1
    if region == "bal":
        (af, bf), (ag, bg), (ah, bh) = f, g, h
        monos = [af * bg * bh, bf * ag * bh, bf * bg * ah, bf * bg * bh]
    else:
        order = {"f": (f, g, h), "g": (g, f, h), "h": (h, f, g)}
        if region not in order:
            raise ValueError("region must be f, g, h or bal")
        (ad, bd), (a1, b1), (a2, b2) = order[region]
        monos = [bd * x * y for x in (a1, b1) for y in (a2, b2)]
    return EulerProduct.of([m / _ppow(p, c) for m in monos], mult)


def bdp_factors(p: int, f, g, h, c: int, variant: str) -> EulerProduct:
    """The two squared forms displayed for the BDP^2 modifications."""
    (af, bf), (ag, bg), (ah, bh) = f, g, h
    if variant in ("Phi'", "Phi_prime", "prime"):
        monos = [af * bg * bh, bf * bg * bh]
    elif variant == "Phi":
        monos = [bf * bg * ah, bf * bg * bh]
    else:
        raise ValueError("variant must be Phi or Phi'")
    return EulerProduct.of([m / _ppow(p, c) for m in monos], 2)


# ---------------------------------------------------------------------------
# numeric evaluators


def _env(**params: HeckeParams) -> dict:
    env = {}
    for name, hp in params.items():
        env["a" + name] = hp.alpha
        env["b" + name] = hp.beta
    return env


def euler_adjoint(f: HeckeParams):
    """(1 - beta/alpha)(1 - beta/(p alpha))."""
    if f.alpha == 0:
        raise ZeroAlpha("alpha = 0")
    return adjoint_factors(f.p, *_roots("f")).value(_env(f=f))


def euler_deg4(f: HeckeParams, g: HeckeParams, j: int, dominance: str):
    return deg4_factors(f.p, _roots("f"), _roots("g"), j, dominance).value(_env(f=f, g=g))


def euler_triple(f: HeckeParams, g: HeckeParams, h: HeckeParams, c: int, region: str):
    region = {"f-dom": "f", "g-dom": "g", "h-dom": "h"}.get(region, region)
    return triple_factors(f.p, _roots("f"), _roots("g"), _roots("h"), c, region).value(_env(f=f, g=g, h=h))


def euler_bdp(f: HeckeParams, cm: CMParams, c: int, variant: str, arithmetic: bool = True):
    g = cm_hecke_params(cm.lam, f.p, arithmetic)
    h = cm_hecke_params(cm.mu, f.p, arithmetic)
    return bdp_factors(f.p, _roots("f"), _roots("g"), _roots("h"), c, variant).value(_env(f=f, g=g, h=h))


# ---------------------------------------------------------------------------
# identity verification


def _random_unit(rng: random.Random, p: int, size: int = 60) -> Fraction:
    while True:
        x = Fraction(rng.randint(1, size) * rng.choice((1, -1)), rng.randint(1, size))
        if x.numerator % p and x.denominator % p:
            return x


def _canonical_rules(p: int, weights: Mapping[str, int], eps: Mapping[str, Fraction]) -> dict:
    """b_x -> eps_x p^(w_x - 1) / a_x."""
    return {"b" + n: Mono.const(eps.get(n, 1) * Fraction(p) ** (w - 1)) / Mono.sym("a" + n)
            for n, w in weights.items()}


@dataclass
class IdentityReport:
    name: str
    samples: int
    readings: dict = field(default_factory=dict)
    selected: str | None = None
    resampled: int = 0

    def to_json(self) -> dict:
        return {
            "identity": self.name,
            "samples": self.samples,
            "selected_reading": self.selected,
            "resampled_uninformative": self.resampled,
            "readings": self.readings,
        }

    @property
    def failures(self) -> int:
        if self.selected is None:
            return self.samples
        return self.readings[self.selected]["failures"]


def _record(readings: dict, key: str, desc: str, ok: bool, lhs: EulerProduct, rhs: EulerProduct, rules):
    r = readings.setdefault(key, {"description": desc, "agree": 0, "failures": 0, "factor_diff": None})
    if ok:
        r["agree"] += 1
    else:
        r["failures"] += 1
        if r["factor_diff"] is None:
            r["factor_diff"] = multiset_diff(lhs.substitute(rules), rhs.substitute(rules))


def _select(report: IdentityReport):
    good = [k for k, r in report.readings.items() if r["failures"] == 0]
    report.selected = good[0] if good else None


def sample_8_eq_4x4(rng: random.Random, primes=(3, 5, 7, 11)) -> dict:
    """g-dominant weights (l >= k + m, k + l + m even) and ordinary roots with eps = 1."""
    p = rng.choice(primes)
    k = rng.randint(1, 6)
    m = rng.randint(1, 6)
    l = rng.randint(k + m, k + m + 6)
    if (k + l + m) % 2:
        l += 1
    c = (k + l + m) // 2 - 1
    f = HeckeParams.ordinary(p, k, _random_unit(rng, p))
    lam = CMCharacter(_random_unit(rng, p), Fraction(0), l)
    lam = CMCharacter(lam.psi_p, Fraction(p) ** (l - 1) / lam.psi_p, l)
    mu = CMCharacter(_random_unit(rng, p), Fraction(0), m)
    mu = CMCharacter(mu.psi_p, Fraction(p) ** (m - 1) / mu.psi_p, m)
    return {"p": p, "k": k, "l": l, "m": m, "c": c, "f": f, "cm": CMParams(lam, mu)}


def verify_identity_8_eq_4x4(sample_count: int, seed: int = 0, samples: list | None = None) -> IdentityReport:
    """E^g(f x g x h)^2 against E(f x Phi, c) E(f x Phi', c') for CM g, h.

    Phi has roots {a_g a_h, b_g b_h} (weight l + m - 1); Phi' has roots
    {a_g b_h / p^(m-1), b_g a_h / p^(m-1)} (weight l - m + 1); c' = c + 1 - m.
    Four readings of the squaring are checked.
    """
    rng = random.Random(seed)
    rep = IdentityReport("8=4x4", 0)
    F, G, H = _roots("f"), _roots("g"), _roots("h")
    while rep.samples < sample_count:
        smp = samples[rep.samples] if samples else sample_8_eq_4x4(rng)
        p, k, l, m, c = smp["p"], smp["k"], smp["l"], smp["m"], smp["c"]
        g = cm_hecke_params(smp["cm"].lam, p)
        h = cm_hecke_params(smp["cm"].mu, p)
        env = _env(f=smp["f"], g=g, h=h)
        cprime = c + 1 - m
        pm = _ppow(p, m - 1)
        Phi = (G[0] * H[0], G[1] * H[1])
        Phip = (G[0] * H[1] / pm, G[1] * H[0] / pm)
        e_unsq = triple_factors(p, F, G, H, c, "g", squared=False)
        e_lit = triple_factors(p, F, G, H, c, "g", squared=True)
        d_phi = deg4_factors(p, F, Phi, c, "g")
        d_phip = deg4_factors(p, F, Phip, cprime, "g")
        b_phi = bdp_factors(p, F, G, H, c, "Phi")
        b_phip = bdp_factors(p, F, G, H, c, "Phi'")
        rhs_deg4 = d_phi * d_phip
        lhs_val = e_unsq.value(env)
        if lhs_val == 0 and rhs_deg4.value(env) == 0 and not samples:
            rep.resampled += 1
            continue
        rules = _canonical_rules(p, {"f": k, "g": l, "h": m}, {})
        cases = [
            ("unsquared_triple_vs_deg4", "(prod of 4 unsquared forms)^2 = deg4(f x Phi, c) deg4(f x Phi', c')",
             e_unsq**2, rhs_deg4),
            ("literal_triple_vs_deg4", "(displayed squared forms)^2 = deg4(f x Phi, c) deg4(f x Phi', c')",
             e_lit**2, rhs_deg4),
            ("literal_triple_vs_literal_bdp", "(displayed squared forms)^2 = displayed BDP Phi * displayed BDP Phi'",
             e_lit**2, b_phi * b_phip),
            ("unsquared_triple_vs_literal_bdp", "(prod of 4 unsquared forms)^2 = displayed BDP Phi * displayed BDP Phi'",
             e_unsq**2, b_phi * b_phip),
        ]
        for key, desc, lhs, rhs in cases:
            _record(rep.readings, key, desc, lhs.value(env) == rhs.value(env), lhs, rhs, rules)
        rep.samples += 1
    _select(rep)
    return rep


def sample_ad(rng: random.Random, primes=(3, 5, 7, 11, 13)) -> dict:
    p = rng.choice(primes)
    k = 2 * rng.randint(1, 6)
    l = rng.randint(k // 2 + 1, k // 2 + 8)
    f = HeckeParams.ordinary(p, k, _random_unit(rng, p))
    a = _random_unit(rng, p)
    lam = CMCharacter(a, Fraction(p) ** (l - 1) / a, l)
    return {"p": p, "k": k, "l": l, "f": f, "lam": lam}


def verify_identity_ad_eq_bdp_times_quad(sample_count: int, seed: int = 0, samples: list | None = None) -> IdentityReport:
    """E^ad(f x ad0 g, k/2) against the Phi-side times the candidate quadratic factor.

    Phi = Phi_{lambda x lambda} has roots {a_g^2, b_g^2}, c = k/2 + l - 1; the
    candidate is (1 - p^(j-1)/a_f)(1 - b_f/p^j) at j = k/2 (eps_K(p) = +1).
    """
    rng = random.Random(seed)
    rep = IdentityReport("ad=BDPxquad", 0)
    F, G = _roots("f"), _roots("g")
    while rep.samples < sample_count:
        smp = samples[rep.samples] if samples else sample_ad(rng)
        p, k, l = smp["p"], smp["k"], smp["l"]
        g = cm_hecke_params(smp["lam"], p)
        env = _env(f=smp["f"], g=g)
        j = k // 2
        c = j + l - 1
        pj = _ppow(p, j)
        ead = EulerProduct.of([F[0] * G[1] / (pj * G[0]), F[1] / pj, F[1] * G[1] / (pj * G[0])])
        cand = EulerProduct.of([_ppow(p, j - 1) / F[0], F[1] / pj])
        Phi = (G[0] * G[0], G[1] * G[1])
        d_phi = deg4_factors(p, F, Phi, c, "g")
        b_phi = bdp_factors(p, F, G, G, c, "Phi")
        if ead.value(env) == 0 and not samples:
            rep.resampled += 1
            continue
        rules = _canonical_rules(p, {"f": k, "g": l}, {})
        cases = [
            ("squared_ad_vs_deg4", "E^ad^2 = deg4(f x Phi, c) * candidate", ead**2, d_phi * cand),
            ("unsquared_ad_vs_deg4", "E^ad = deg4(f x Phi, c) * candidate", ead, d_phi * cand),
            ("literal_ad_vs_literal_bdp", "E^ad = displayed BDP Phi * candidate", ead, b_phi * cand),
        ]
        for key, desc, lhs, rhs in cases:
            _record(rep.readings, key, desc, lhs.value(env) == rhs.value(env), lhs, rhs, rules)
        rep.samples += 1
    _select(rep)
    return rep
