"""Kubota-Leopoldt p-adic L-functions.

Three independent routes to the same function:

* ``kl_special``: the interpolation values at s = 1 - n from generalised
  Bernoulli numbers (exact, then embedded);
* ``kl_value``: the convergent sum over a in [1, F], p not dividing a, valid
  at every s in Z_p;
* ``stickelberger_series``: the power series obtained by projecting the tower
  of regularised Stickelberger elements, with the variable-change convention
  calibrated against ``kl_special`` and then frozen.

Also here: Coates-Wiles values of the cyclotomic-unit Coleman series and the
product series on the right of Gross' factorisation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .characters import (
    CyclotomicElement,
    DirichletCharacter,
    bernoulli_number,
    embed_padic,
    gen_bernoulli,
)
from .errors import (
    ConventionMismatch,
    NotEmbeddable,
    NotSplit,
    OddCharacter,
    ParityViolation,
    PoleAtOne,
    PrecisionExhausted,
    TrivialProjection,
)
from .iwasawa import IwasawaSeries, SeriesQuotient, involution, twist
from .padic import INF, PadicNumber, _split, plog, primitive_root, teichmuller

CANDIDATE_CONVENTIONS: tuple[tuple[int, int], ...] = tuple(
    (e, sigma) for sigma in (1, -1) for e in (-1, 0, 1)
)


def _p_part(n: int, p: int) -> tuple[int, int]:
    v, m = _split(n, p)
    return v, m


def _tame_conductor(chi: DirichletCharacter, p: int) -> int:
    """Prime-to-p part of the conductor; raises if p^2 divides it."""
    v, f0 = _p_part(chi.conductor, p)
    if v > 1:
        raise NotEmbeddable(f"conductor {chi.conductor} is divisible by {p}^2")
    return f0


def _check_even(chi: DirichletCharacter):
    if not chi.is_even():
        raise OddCharacter("p-adic L-function of an odd character vanishes identically")


# ---------------------------------------------------------------------------
# Bernoulli interpolation values


@dataclass(frozen=True)
class SpecialValue:
    chi: DirichletCharacter
    n: int
    p: int
    exact: CyclotomicElement
    padic: object  # PadicNumber or UnramifiedElement

    @property
    def rational(self) -> Fraction | None:
        return self.exact.to_rational() if self.exact.is_rational() else None


def kl_special(chi: DirichletCharacter, n: int, p: int, N: int) -> SpecialValue:
    """L_p(chi, 1 - n) = -(1 - psi(p) p^(n-1)) B_{n, psi} / n with psi = chi omega^(-n)."""
    _check_even(chi)
    if n < 1:
        raise ValueError("n must be >= 1")
    psi = (chi * DirichletCharacter.teichmuller(p, -n)).primitive()
    B = gen_bernoulli(n, psi)
    euler = CyclotomicElement.rational(1) - psi(p) * Fraction(p) ** (n - 1)
    exact = (euler * B * Fraction(-1, n)).simplify()
    return SpecialValue(chi, n, p, exact, embed_padic(exact, p, N))


# ---------------------------------------------------------------------------
# Convergent sum


def _s_exact(s, p: int) -> tuple[Fraction, float]:
    """(rational representative of s, absolute precision of s)."""
    if isinstance(s, PadicNumber):
        if s.val < 0:
            raise ValueError("s must lie in Z_p")
        if s.is_exact_zero():
            return Fraction(0), INF
        return Fraction(s.residue(int(s.absprec))), s.absprec
    s = Fraction(s)
    if s.denominator % p == 0:
        raise ValueError("s must lie in Z_p")
    return s, INF


def kl_value(chi: DirichletCharacter, s, p: int, N: int) -> PadicNumber:
    """L_p(chi, s) for chi even with values in Z_p and s in Z_p.

    With t = 1 - s and F = lcm(f, p):
        L_p(chi, s) = -(1/t)(1/F) sum_{a<=F, p!|a} chi(a) <a>^t
                      sum_{j>=0} C(t, j) (F/a)^j B_j
    and at t = 0 the derivative in t of the inner sum.

    A p-adic ``s`` known to absolute precision A is evaluated at its
    representative; the result is then capped at absolute precision A for
    nontrivial chi (the series has integral coefficients and v(u^s - u^s') =
    1 + v(s - s')), and at A - 2 v(1 - s) - 1 for the trivial character.
    """
    _check_even(chi)
    chi = chi.primitive()
    f = chi.modulus
    F = f * p // math.gcd(f, p)
    vF, F0 = _p_part(F, p)
    s_rep, s_abs = _s_exact(s, p)
    t = 1 - s_rep
    if t == 0:
        if chi.is_trivial():
            raise PoleAtOne("trivial character at s = 1")
        if s_abs != INF:
            raise PrecisionExhausted("s is indistinguishable from 1 at its precision")
    vt = 0 if t == 0 else int(_v_frac(t, p))
    W = N + vt + vF + 3
    mod = p**W
    J = 1
    while J - 1 - _log_p_floor(J, p) < W + 1:
        J += 1
    table = chi.padic_table(p, W)
    unit_F = pow(F0, -1, mod)
    if t == 0:
        total = _derivative_sum(chi, table, p, F, W, J)
        # L(1) = -(1/F) * total / p  (total carries a factor p from B_j)
        val = PadicNumber.from_residue(total, p, W) if total % mod else PadicNumber.zero(p, W)
        res = -(val * PadicNumber(p, -(vF + 1), unit_F, W))
        return _cap(res, N)

    t_int = _frac_to_residue(t, p, W + J + 2)
    total = 0
    for a in range(1, F + 1):
        if a % p == 0:
            continue
        ca = table.get(a % f)
        if ca is None:
            continue
        om = teichmuller(a, p, W).unit
        br = a * pow(om, -1, mod) % mod  # <a>
        power = pow(br, t_int % p ** (W - 1), mod)
        inner = 0
        Fa = F * pow(a, -1, mod) % mod
        Faj = 1
        for j in range(J + 1):
            Bj = bernoulli_number(j)
            if Bj:
                pB = Bj * p
                term = math.comb(t_int, j) % mod * Faj % mod
                inner += term * (pB.numerator * pow(pB.denominator, -1, mod)) % mod
            Faj = Faj * Fa % mod
        total += ca * power % mod * inner
    total %= mod
    # L = -total / (p t F)
    if total == 0:
        res = PadicNumber.zero(p, W - vt - vF - 1)
    else:
        val = PadicNumber.from_residue(total, p, W)
        tt = PadicNumber.from_rational(t, p, W)
        res = -(val / tt) * PadicNumber(p, -(vF + 1), unit_F, W)
    if s_abs != INF:
        cap = s_abs - (2 * vt + 1 if chi.is_trivial() else 0)
        res = res + PadicNumber.zero(p, cap)
    return _cap(res, N)


def _derivative_sum(chi, table, p, F, W, J) -> int:
    mod = p**W
    f = chi.modulus
    total = 0
    for a in range(1, F + 1):
        if a % p == 0:
            continue
        ca = table.get(a % f)
        if ca is None:
            continue
        # p * (log<a> + sum_{j>=1} (-1)^{j-1}/j * B_j (F/a)^j)
        lg = plog(PadicNumber.from_rational(a, p, W)).residue(W)
        inner = p * lg
        ainv = pow(a, -1, mod)
        Fa = F * ainv % mod
        Faj = Fa
        for j in range(1, J + 1):
            Bj = bernoulli_number(j)
            if Bj:
                coef = Bj * p * Fraction((-1) ** (j - 1), j)
                num = coef.numerator * Faj
                den = coef.denominator
                vd, du = _split(den, p)
                # Faj carries p^j, enough to absorb p^vd
                inner += (num // p**vd if num % p**vd == 0 else _raise_prec()) * pow(du, -1, mod)
            Faj = Faj * Fa % mod
        total += ca * (inner % mod)
    return total % mod


def _raise_prec():
    raise PrecisionExhausted("insufficient working precision in derivative sum")


def _v_frac(x: Fraction, p: int) -> float:
    if x == 0:
        return INF
    return _split(x.numerator, p)[0] - _split(x.denominator, p)[0]


def _frac_to_residue(x: Fraction, p: int, W: int) -> int:
    mod = p**W
    return x.numerator * pow(x.denominator, -1, mod) % mod


def _log_p_floor(j: int, p: int) -> int:
    k = 0
    while p ** (k + 1) <= j:
        k += 1
    return k


def _cap(x: PadicNumber, N: int) -> PadicNumber:
    if x.prec <= N:
        return x
    return PadicNumber(x.p, x.val, x.unit % x.p**N, N)


# ---------------------------------------------------------------------------
# Stickelberger elements


@dataclass(frozen=True)
class StickelbergerElement:
    """sum_a (a/Q - 1/2) [a] over (Z/Q)^x, Q = f * p^(n+1), kept exactly."""

    f: int
    p: int
    n: int
    coeffs: dict = field(hash=False, compare=False)

    @property
    def Q(self) -> int:
        return self.f * self.p ** (self.n + 1)

    @classmethod
    def build(cls, f: int, p: int, n: int) -> "StickelbergerElement":
        Q = f * p ** (n + 1)
        coeffs = {a: Fraction(a, Q) - Fraction(1, 2) for a in range(1, Q) if math.gcd(a, Q) == 1}
        return cls(f, p, n, coeffs)

    def total(self) -> Fraction:
        return sum(self.coeffs.values(), Fraction(0))

    def project(self) -> "StickelbergerElement":
        """Image under (Z/Q)^x -> (Z/(Q/p))^x (level n - 1)."""
        if self.n == 0:
            raise ValueError("already at level 0")
        q = self.Q // self.p
        out: dict[int, Fraction] = {}
        for a, c in self.coeffs.items():
            out[a % q] = out.get(a % q, Fraction(0)) + c
        return StickelbergerElement(self.f, self.p, self.n - 1, out)


def _smallest_c(chi_exps: dict[int, int], f0p: int, nontrivial: bool) -> int:
    """Least c >= 2 prime to f0 p with chi(c) != 1 (any such c if chi is trivial)."""
    c = 2
    while True:
        if math.gcd(c, f0p) == 1 and (not nontrivial or chi_exps[c % f0p] != 0):
            return c
        c += 1


@dataclass(frozen=True, eq=False)
class StickelbergerPair:
    """G and H with G / H = L_p(chi) in the raw variable (before calibration)."""

    G: IwasawaSeries
    H: IwasawaSeries
    c: int
    level: int

    def series(self) -> IwasawaSeries:
        return self.G * self.H.inverse()

    def quotient(self) -> SeriesQuotient:
        return SeriesQuotient(self.G, self.H)


def stickelberger_pair(chi: DirichletCharacter, p: int, n: int, N: int, M: int) -> StickelbergerPair:
    """Project the level-n regularised Stickelberger element by eta = chi omega^-1.

    Returns G, H with G(u^(k-1) - 1) = (1 - chi(c)<c>^k) L_p(1 - k, chi) and
    H(u^(k-1) - 1) = 1 - chi(c)<c>^k.
    """
    _check_even(chi)
    chi = chi.primitive()
    if (p - 1) % chi.order:
        raise NotEmbeddable(f"order {chi.order} does not divide {p - 1}")
    f0 = _tame_conductor(chi, p)
    f0p = f0 * p
    Q = f0 * p ** (n + 1)
    pn1 = p ** (n + 1)
    pn = p**n
    mod = p**N

    omega = DirichletCharacter.teichmuller(p, 1)
    eta = (chi * omega.inverse()).induce(f0p)
    chi_f0p = chi.induce(f0p)
    m = math.lcm(eta.order, chi_f0p.order, p - 1)
    # exponents of zeta_m for eta and chi on residues mod f0 p (-1 = zero)
    eta_exp = np.full(f0p, -1, dtype=np.int64)
    chi_exp_map: dict[int, int] = {}
    for r in range(f0p):
        e = eta.exponent(r)
        if e is not None:
            eta_exp[r] = e * (m // eta.order)
        ce = chi_f0p.exponent(r)
        if ce is not None:
            chi_exp_map[r] = ce * (m // chi_f0p.order)

    zeta = pow(teichmuller(primitive_root(p), p, N).unit, (p - 1) // m, mod)
    roots = [pow(zeta, e, mod) for e in range(m)]
    nontrivial = not chi.is_trivial()
    c = _smallest_c(chi_exp_map, f0p, nontrivial)

    # discrete log of <a> mod p^(n+1) to base u = 1 + p
    u = 1 + p
    dlog = np.full(pn1, -1, dtype=np.int64)
    x = 1
    for i in range(pn):
        dlog[x] = i
        x = x * u % pn1
    teich_inv = np.zeros(p, dtype=np.int64)
    for r in range(1, p):
        teich_inv[r] = pow(teichmuller(r, p, n + 1).unit, -1, pn1)

    a = np.arange(1, Q, dtype=np.int64)
    a = a[(a % p != 0) & (eta_exp[a % f0p] >= 0)]
    cinv = pow(c, -1, Q)
    r = (a * cinv) % Q
    # 2 * (c B_1(r/Q) - B_1(a/Q)) with c r = a mod Q, i.e. minus the
    # c-regularised Bernoulli distribution; this sign makes G interpolate
    # (1 - chi(c)<c>^k) L_p rather than its negative
    two_E = 2 * ((c * r) // Q) - (c - 1)
    bracket = (a % pn1) * teich_inv[a % p] % pn1
    ell = dlog[bracket]
    if (ell < 0).any():
        raise RuntimeError("discrete log table incomplete")
    key = ell * m + eta_exp[a % f0p]
    sums = np.bincount(key, weights=two_E.astype(np.float64), minlength=pn * m)
    sums = np.rint(sums).astype(np.int64).reshape(pn, m)
    inv2 = pow(2, -1, mod)
    root_arr = np.array(roots, dtype=object)
    ci = (sums.astype(object) @ root_arr) % mod
    ci = (ci * inv2) % mod
    if not any(int(v) for v in ci):
        raise TrivialProjection("eta-component vanishes")
    G = _group_ring_to_series(np.array([int(v) for v in ci], dtype=np.int64), p, n, N, M)

    # H = 1 - chi(c) <c> (1+T)^ell(c)
    chi_c = roots[chi_exp_map[c % f0p]] if m else 1
    ell_c = int(dlog[(c % pn1) * int(teich_inv[c % p]) % pn1])
    br_c = c * pow(teichmuller(c, p, N).unit, -1, mod) % mod
    hvec = np.zeros(pn, dtype=np.int64)
    hvec[ell_c] = (-chi_c * br_c) % mod
    H = _group_ring_to_series(hvec, p, n, N, M)
    H = IwasawaSeries(p, N, M, ((H.coeffs[0] + 1) % mod,) + H.coeffs[1:], H.precs)
    return StickelbergerPair(G, H, c, n)


def _group_ring_to_series(ci: np.ndarray, p: int, n: int, N: int, M: int) -> IwasawaSeries:
    """sum_i c_i (1+T)^i (i mod p^n) expanded in T, truncated at T^M.

    The T^k coefficient is sum_i C(i, k) c_i, obtained by k strict suffix sums.
    It is only defined modulo the T^k coefficients of (1+T)^(p^n) - 1, whose
    valuation is n - v_p(k); the precision recorded is n - floor(log_p k).
    """
    mod = p**N
    v = ci.astype(np.int64) % mod
    coeffs = [int(v.sum() % mod)]
    for _ in range(1, M):
        suffix = np.cumsum(v[::-1]) % mod
        v = np.concatenate((suffix[::-1][1:], [0])).astype(np.int64)
        coeffs.append(int(v.sum() % mod))
    precs = [N] + [max(0, min(N, n - _log_p_floor(k, p))) for k in range(1, M)]
    return IwasawaSeries(p, N, M, tuple(coeffs), tuple(precs))


# ---------------------------------------------------------------------------
# Calibration


@dataclass(frozen=True)
class Calibration:
    convention: tuple[int, int]  # (e, sigma): T -> u^e (1+T)^sigma - 1
    matched_at: tuple[int, ...]
    verified_at: tuple[int, ...]
    checks: tuple[dict, ...]

    def to_json(self) -> dict:
        e, s = self.convention
        return {
            "substitution": f"T -> u^{e}(1+T)^{s} - 1",
            "e": e,
            "sigma": s,
            "generator_u": "1+p",
            "normalisation": "a/Q - 1/2 regularised by c",
            "matched_at_n": list(self.matched_at),
            "verified_at_n": list(self.verified_at),
        }


def _apply(obj, conv):
    e, sigma = conv
    return obj.substitute_unit_power(e, sigma)


def _agree(value: PadicNumber, target) -> tuple[bool, float]:
    if not isinstance(target, PadicNumber):
        raise NotEmbeddable("special value does not lie in Q_p")
    return value.compare(target)


def calibrate(chi: DirichletCharacter, p: int, N: int = 7, M: int = 64, level: int | None = None,
              calib_points: Sequence[int] = (1, 2), verify_points: Sequence[int] = (3, 4, 5, 6),
              pair: StickelbergerPair | None = None) -> Calibration:
    """Pick the unique candidate substitution matching kl_special at calib_points.

    Points where the special value is a trivial zero are skipped and replaced
    by the next n.
    """
    level = N - 1 if level is None else level
    pair = pair or stickelberger_pair(chi, p, level, N, M)
    raw = pair.quotient()
    pts = list(calib_points)
    targets = {}
    nxt = max(list(calib_points) + list(verify_points)) + 1
    for n in list(pts):
        sv = kl_special(chi, n, p, N + 2)
        if sv.exact == 0:
            pts.remove(n)
            pts.append(nxt)
            nxt += 1
    for n in pts + list(verify_points):
        targets[n] = kl_special(chi, n, p, N + 2).padic
    winners = []
    checks = []
    for conv in CANDIDATE_CONVENTIONS:
        cand = _apply(raw, conv)
        ok = True
        for n in pts:
            try:
                val = cand.evaluate(1 - n)
                good, prec = _agree(val, targets[n])
            except PrecisionExhausted:
                good, prec = False, 0
            checks.append({"convention": list(conv), "n": n, "match": good, "precision": prec})
            ok = ok and good
        if ok:
            winners.append(conv)
    if len(winners) != 1:
        raise ConventionMismatch(f"{len(winners)} candidate conventions match at n = {pts}")
    conv = winners[0]
    cand = _apply(raw, conv)
    for n in verify_points:
        val = cand.evaluate(1 - n)
        good, prec = _agree(val, targets[n])
        checks.append({"convention": list(conv), "n": n, "match": good, "precision": prec, "stage": "verify"})
        if not good:
            raise ConventionMismatch(f"frozen convention fails at n = {n}")
    return Calibration(conv, tuple(pts), tuple(verify_points), tuple(checks))


def stickelberger_series(chi: DirichletCharacter, p: int, N: int = 7, M: int = 64,
                         convention: tuple[int, int] | None = None, level: int | None = None) -> IwasawaSeries:
    """F in Z_p[[T]] with F(u^s - 1) = L_p(chi, s).

    If ``convention`` is None the calibration is run for this character.
    """
    _check_even(chi)
    if chi.is_trivial():
        raise PoleAtOne("trivial character: use stickelberger_quotient")
    level = N - 1 if level is None else level
    pair = stickelberger_pair(chi, p, level, N, M)
    if convention is None:
        convention = calibrate(chi, p, N, M, level, pair=pair).convention
    return _apply(pair.series(), convention)


def stickelberger_quotient(chi: DirichletCharacter, p: int, N: int = 7, M: int = 64,
                           convention: tuple[int, int] | None = None, level: int | None = None) -> SeriesQuotient:
    """G/H form, which also covers the trivial character (pole at s = 1)."""
    level = N - 1 if level is None else level
    pair = stickelberger_pair(chi, p, level, N, M)
    if convention is None:
        convention = calibrate(chi, p, N, M, level, pair=pair).convention
    return _apply(pair.quotient(), convention)


# ---------------------------------------------------------------------------
# Coleman map values


def coates_wiles(c: int, k: int, p: int | None = None, N: int = 10) -> tuple[Fraction, PadicNumber | None]:
    """D^k log g_c at T = 0, g_c = ((1+T)^c - 1)/T and D = (1+T) d/dT."""
    if c < 2 or k < 1:
        raise ValueError("need c >= 2 and k >= 1")
    if p is not None and c % p == 0:
        raise ValueError(f"c must be prime to {p}")
    K = k + 1
    # h = g_c / c, constant term 1
    g = [Fraction(math.comb(c, j + 1), c) for j in range(K)]
    z = [Fraction(0)] + g[1:]  # h - 1
    log = [Fraction(0)] * K
    power = [Fraction(1)] + [Fraction(0)] * (K - 1)
    for i in range(1, K):
        power = _series_mul(power, z, K)
        sign = 1 if i % 2 else -1
        for j in range(K):
            log[j] += sign * power[j] / i
    series = log
    for _ in range(k):
        series = [(j + 1) * series[j + 1] + j * series[j] if j + 1 < len(series) else j * series[j]
                  for j in range(len(series))]
    value = series[0]
    padic = PadicNumber.from_rational(value, p, N) if p is not None else None
    return value, padic


def _series_mul(a, b, K):
    out = [Fraction(0)] * K
    for i, x in enumerate(a):
        if x:
            for j in range(K - i):
                if b[j]:
                    out[i + j] += x * b[j]
    return out


# ---------------------------------------------------------------------------
# Gross right-hand side


@dataclass(frozen=True, eq=False)
class GrossRHS:
    series: IwasawaSeries
    factor1: IwasawaSeries  # L_p(chi^-1)
    factor2: IwasawaSeries  # L_p(chi eps_K omega)
    chars: tuple[DirichletCharacter, DirichletCharacter]
    convention: tuple[int, int]


def gross_rhs(chi: DirichletCharacter, D: int, p: int, N: int = 7, M: int = 64,
              convention: tuple[int, int] | None = None) -> GrossRHS:
    """L_p(chi^-1) * iota(twist(L_p(chi eps_K omega))).

    The value at s is L_p(chi^-1, s) * L_p(chi eps_K omega, 1 - s).
    """
    from .quadratic import QuadField

    K = QuadField(D)
    eps = K.character
    if eps.exponent(p) is None or eps.exponent(p) != 0:
        raise NotSplit(f"{p} is not split in Q(sqrt({D}))")
    c1 = chi.inverse()
    c2 = (chi * eps * DirichletCharacter.teichmuller(p, 1)).primitive()
    if not c1.is_even() or not c2.is_even():
        raise ParityViolation("both factors must be even characters")
    if c1.is_trivial():
        raise PoleAtOne("chi^-1 trivial: the first factor has a pole at s = 1")
    if convention is None:
        convention = calibrate(c1, p, N, M).convention
    F1 = stickelberger_series(c1, p, N, M, convention)
    F2 = stickelberger_series(c2, p, N, M, convention)
    return GrossRHS(F1 * involution(twist(F2)), F1, F2, (c1, c2), convention)
