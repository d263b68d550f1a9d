"""Leading-term algebra over finite rings S = (Z/p^a)[x]/(x^b).

Elements of S are encoded as integers sum c_i q^i with q = p^a, 0 <= c_i < q,
so that ring operations are table lookups.  These lookups broadcast over
numpy arrays, which lets the exhaustive sweeps treat many presentation
matrices at once.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, NotRegular

DEFAULT_BUDGET = 10**6


# ---------------------------------------------------------------------------
# rings


@dataclass(frozen=True)
class ChainRingSpec:
    p: int
    a: int
    b: int

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise ValueError("need a, b >= 1")

    @property
    def q(self) -> int:
        return self.p**self.a

    @property
    def size(self) -> int:
        return self.q**self.b

    def name(self) -> str:
        base = f"Z/{self.q}" if self.a > 1 or self.p > 2 else "F2"
        if self.a == 1 and self.p > 2:
            base = f"F{self.p}"
        return base if self.b == 1 else f"{base}[x]/(x^{self.b})"


@lru_cache(maxsize=None)
def ring(p: int, a: int, b: int) -> "FiniteRing":
    return FiniteRing(ChainRingSpec(p, a, b))


class FiniteRing:
    def __init__(self, spec: ChainRingSpec):
        self.spec = spec
        q, b, n = spec.q, spec.b, spec.size
        self.n = n
        coeffs = np.array([self._digits(e) for e in range(n)], dtype=np.int64)
        self.coeffs = coeffs
        weights = q ** np.arange(b, dtype=np.int64)
        self.add = ((coeffs[:, None, :] + coeffs[None, :, :]) % q) @ weights
        prod = np.zeros((n, n, b), dtype=np.int64)
        for i in range(b):
            for j in range(b - i):
                prod[:, :, i + j] += coeffs[:, None, i] * coeffs[None, :, j]
        self.mul = (prod % q) @ weights
        self.neg = ((-coeffs) % q) @ weights
        self.zero = 0
        self.one = 1

    def _digits(self, e: int) -> list[int]:
        q = self.spec.q
        out = []
        for _ in range(self.spec.b):
            out.append(e % q)
            e //= q
        return out

    # element conversion
    def element(self, x) -> int:
        q, b = self.spec.q, self.spec.b
        if isinstance(x, (int, np.integer)):
            cs = [int(x) % q] + [0] * (b - 1)
        else:
            cs = [int(c) % q for c in x]
            if len(cs) > b:
                if any(cs[b:]):
                    raise ValueError("x^b = 0 in this ring; coefficient list too long")
                cs = cs[:b]
            cs += [0] * (b - len(cs))
        return sum(c * q**i for i, c in enumerate(cs))

    def format(self, e) -> str:
        cs = self._digits(int(e))
        terms = []
        for i, c in enumerate(cs):
            if c == 0:
                continue
            mon = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(str(c) if not mon else (mon if c == 1 else f"{c}{mon}"))
        return " + ".join(terms) or "0"

    def sub(self, x, y):
        return self.add[x, self.neg[y]]

    def is_unit(self, e: int) -> bool:
        return int(e) % self.spec.p != 0

    def is_regular(self, r: int) -> bool:
        return int(np.count_nonzero(self.mul[r] == 0)) == 1

    # ideals as bitmasks over elements
    def ideal(self, gens: Iterable[int]) -> frozenset:
        members = {0}
        frontier = [0]
        gens = [int(g) for g in gens]
        steps = {int(self.mul[s, g]) for g in gens for s in range(self.n)}
        while frontier:
            new = []
            for x in frontier:
                for st in steps:
                    y = int(self.add[x, st])
                    if y not in members:
                        members.add(y)
                        new.append(y)
            frontier = new
        return frozenset(members)

    @cached_property
    def principal(self) -> list[frozenset]:
        return [self.ideal([e]) for e in range(self.n)]

    @cached_property
    def ideal_lattice(self):
        """All ideals, the id of each principal ideal and the join table."""
        ideals = list(dict.fromkeys(self.principal))
        index = {I: i for i, I in enumerate(ideals)}
        changed = True
        while changed:
            changed = False
            for I, J in itertools.product(list(ideals), repeat=2):
                K = self.ideal(I | J)
                if K not in index:
                    index[K] = len(ideals)
                    ideals.append(K)
                    changed = True
        k = len(ideals)
        join = np.zeros((k, k), dtype=np.int64)
        for i, I in enumerate(ideals):
            for j, J in enumerate(ideals):
                join[i, j] = index[self.ideal(I | J)]
        pid = np.array([index[P] for P in self.principal], dtype=np.int64)
        return ideals, pid, join

    def ideal_id_of(self, elements: Sequence) -> np.ndarray:
        """Ideal id generated by elements[0], elements[1], ... (each may be an array)."""
        _, pid, join = self.ideal_lattice
        acc = pid[np.asarray(elements[0])]
        for e in elements[1:]:
            acc = join[acc, pid[np.asarray(e)]]
        return acc

    def ideal_generators(self, I: frozenset) -> list[int]:
        gens: list[int] = []
        cur = self.ideal([])
        for e in sorted(I):
            if e not in cur:
                gens.append(e)
                cur = self.ideal(gens)
                if cur == I:
                    break
        return gens


# ---------------------------------------------------------------------------
# free maps and modules


@dataclass(frozen=True)
class FreeMap:
    """phi: S^m -> S^n given by an n x m matrix of encoded elements."""

    spec: ChainRingSpec
    matrix: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, R: FiniteRing, rows) -> "FreeMap":
        return cls(R.spec, tuple(tuple(R.element(x) for x in row) for row in rows))

    @property
    def R(self) -> FiniteRing:
        s = self.spec
        return ring(s.p, s.a, s.b)

    @property
    def n(self) -> int:
        return len(self.matrix)

    @property
    def m(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    def apply(self, vecs: np.ndarray) -> np.ndarray:
        """Apply to a batch of vectors, shape (K, m) -> (K, n)."""
        R = self.R
        out = np.zeros((vecs.shape[0], self.n), dtype=np.int64)
        for i, row in enumerate(self.matrix):
            acc = np.zeros(vecs.shape[0], dtype=np.int64)
            for j, a in enumerate(row):
                acc = R.add[acc, R.mul[a, vecs[:, j]]]
            out[:, i] = acc
        return out

    def compose(self, other: "FreeMap") -> "FreeMap":
        """self o other."""
        R = self.R
        rows = []
        for i in range(self.n):
            row = []
            for j in range(other.m):
                acc = 0
                for k in range(self.m):
                    acc = int(R.add[acc, R.mul[self.matrix[i][k], other.matrix[k][j]]])
                row.append(acc)
            rows.append(tuple(row))
        return FreeMap(self.spec, tuple(rows))

    def transpose(self) -> "FreeMap":
        return FreeMap(self.spec, tuple(zip(*self.matrix)) if self.matrix else ())

    @classmethod
    def identity(cls, spec: ChainRingSpec, n: int) -> "FreeMap":
        return cls(spec, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))


def all_vectors(R: FiniteRing, m: int, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    total = R.n**m
    if total > budget:
        raise BudgetExceeded(f"|S|^{m} = {total} exceeds the enumeration budget {budget}")
    if m == 0:
        return np.zeros((1, 0), dtype=np.int64)
    idx = np.arange(total, dtype=np.int64)
    return np.stack([(idx // R.n**j) % R.n for j in range(m)], axis=1)


def _encode(R: FiniteRing, vecs: np.ndarray) -> np.ndarray:
    w = R.n ** np.arange(vecs.shape[1], dtype=np.int64)
    return vecs @ w


def submodule(R: FiniteRing, gens: Sequence[Sequence[int]], m: int) -> set[tuple[int, ...]]:
    """All elements of the submodule of S^m generated by gens."""
    members = {(0,) * m}
    frontier = list(members)
    steps = set()
    for g in gens:
        for s in range(R.n):
            steps.add(tuple(int(R.mul[s, x]) for x in g))
    while frontier:
        new = []
        for v in frontier:
            for st in steps:
                w = tuple(int(R.add[x, y]) for x, y in zip(v, st))
                if w not in members:
                    members.add(w)
                    new.append(w)
        frontier = new
    return members


def greedy_generators(R: FiniteRing, elements: Iterable[tuple[int, ...]], m: int) -> list[tuple[int, ...]]:
    target = set(elements)
    gens: list[tuple[int, ...]] = []
    span = {(0,) * m}
    for v in sorted(target, key=lambda t: (sum(1 for x in t if x), t)):
        if v not in span:
            gens.append(v)
            span = submodule(R, gens, m)
            if span == target:
                break
    for g in list(gens):
        rest = [h for h in gens if h != g]
        if submodule(R, rest, m) == target:
            gens = rest
    return gens


def _kernel_enumerate(f: FreeMap, budget: int) -> list[tuple[int, ...]]:
    R = f.R
    vecs = all_vectors(R, f.m, budget)
    img = f.apply(vecs)
    ker = vecs[np.all(img == 0, axis=1)]
    return [tuple(int(x) for x in v) for v in ker]


def _kernel_smith(f: FreeMap) -> list[tuple[int, ...]]:
    """Kernel over Z/p^a by diagonalising with row and column operations."""
    p, q = f.spec.p, f.spec.q
    A = [list(row) for row in f.matrix]
    n, m = f.n, f.m
    V = [[int(i == j) for j in range(m)] for i in range(m)]

    def val(x):
        x %= q
        if x == 0:
            return f.spec.a
        v = 0
        while x % p == 0:
            x //= p
            v += 1
        return v

    exps = []
    for k in range(min(n, m)):
        best = None
        for i in range(k, n):
            for j in range(k, m):
                v = val(A[i][j])
                if v < f.spec.a and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        e, i, j = best
        A[k], A[i] = A[i], A[k]
        for M in (A, V):
            for row in M:
                row[k], row[j] = row[j], row[k]
        u = (A[k][k] // p**e) % q
        uinv = pow(u, -1, q)
        for M in (A, V):
            for row in M:
                row[k] = row[k] * uinv % q
        for i2 in range(k + 1, n):
            c = (A[i2][k] // p**e) % q
            if c:
                A[i2] = [(x - c * y) % q for x, y in zip(A[i2], A[k])]
        for j2 in range(k + 1, m):
            c = (A[k][j2] // p**e) % q
            if c:
                for M in (A, V):
                    for row in M:
                        row[j2] = (row[j2] - c * row[k]) % q
        exps.append(e)
    gens = []
    for i in range(m):
        scale = p ** (f.spec.a - exps[i]) if i < len(exps) else 1
        g = tuple(V[r][i] * scale % q for r in range(m))
        if any(g):
            gens.append(g)
    return gens


def kernel(f: FreeMap, budget: int = DEFAULT_BUDGET, method: str = "auto") -> list[tuple[int, ...]]:
    """Generators of ker f (as encoded vectors)."""
    if f.m == 0:
        return []
    if method == "smith" or (method == "auto" and f.spec.b == 1):
        if f.spec.b != 1:
            raise ValueError("the diagonalisation path needs b = 1")
        return _kernel_smith(f)
    ker = _kernel_enumerate(f, budget)
    return [g for g in greedy_generators(f.R, ker, f.m) if any(g)]


def kernel_elements(f: FreeMap, budget: int = DEFAULT_BUDGET) -> set[tuple[int, ...]]:
    return set(_kernel_enumerate(f, budget))


# ---------------------------------------------------------------------------
# exterior powers


Wedge = dict  # sorted index tuple -> element (int or array)


def tilde_phi(R: FiniteRing, phi: Sequence, w: Wedge) -> Wedge:
    """Contraction e_{i1}^...^e_{it} -> sum (-1)^(j) phi(e_{ij}) (omit ij)."""
    out: Wedge = {}
    for idx, coef in w.items():
        for j, i in enumerate(idx):
            term = R.mul[phi[i], coef]
            if j % 2:
                term = R.neg[term]
            rest = idx[:j] + idx[j + 1:]
            out[rest] = R.add[out[rest], term] if rest in out else term
    return out


def top_wedge(n: int, like=None) -> Wedge:
    one = 1 if like is None else np.ones_like(like)
    return {tuple(range(n)): one}


def delta_element(f: FreeMap, check: bool = True) -> Wedge:
    """Contract the top wedge of S^(s+t) through the rows of f in order."""
    R = f.R
    w = top_wedge(f.m)
    for row in f.matrix:
        w = tilde_phi(R, row, w)
    if check:
        for row in f.matrix:
            if any(int(v) for v in tilde_phi(R, row, w).values()):
                raise AssertionError("delta is not annihilated by a further contraction")
    return w


def _delta_batch(R: FiniteRing, mats: np.ndarray) -> Wedge:
    """delta for a batch of matrices, shape (K, s, s+t)."""
    K, s, n = mats.shape
    w = {tuple(range(n)): np.ones(K, dtype=np.int64)}
    for r in range(s):
        w = tilde_phi(R, [mats[:, r, j] for j in range(n)], w)
    return w


def _det_batch(R: FiniteRing, cols: list[np.ndarray]) -> np.ndarray:
    """Leibniz determinant of a batch of square matrices given by columns (K, s)."""
    s = len(cols)
    K = cols[0].shape[0] if s else 1
    total = np.zeros(K, dtype=np.int64)
    if s == 0:
        return np.ones(K, dtype=np.int64)
    for perm in itertools.permutations(range(s)):
        term = np.ones(K, dtype=np.int64)
        for r, c in enumerate(perm):
            term = R.mul[term, cols[c][:, r]]
        inv = sum(1 for i in range(s) for j in range(i + 1, s) if perm[i] > perm[j])
        total = R.add[total, R.neg[term] if inv % 2 else term]
    return total


def maximal_minors(f: FreeMap) -> list[int]:
    R = f.R
    mats = np.array([f.matrix], dtype=np.int64).reshape(1, f.n, f.m)
    return [int(x[0]) for x in _minors_batch(R, mats)]


def _minors_batch(R: FiniteRing, mats: np.ndarray) -> list[np.ndarray]:
    K, s, n = mats.shape
    if n < s:
        return [np.zeros(K, dtype=np.int64)]
    return [_det_batch(R, [mats[:, :, j] for j in cols]) for cols in itertools.combinations(range(n), s)]


# ---------------------------------------------------------------------------
# modules, Fitting ideals, duals


@dataclass(frozen=True)
class PresentedModule:
    """M = coker(A: S^m -> S^n)."""

    presentation: FreeMap

    @property
    def R(self) -> FiniteRing:
        return self.presentation.R

    def relations(self, budget: int = DEFAULT_BUDGET) -> set[tuple[int, ...]]:
        A = self.presentation
        vecs = all_vectors(self.R, A.m, budget)
        return {tuple(int(x) for x in v) for v in A.apply(vecs)}

    def order(self, budget: int = DEFAULT_BUDGET) -> int:
        return self.R.n ** self.presentation.n // len(self.relations(budget))


def fitting0(M: PresentedModule | FreeMap) -> frozenset:
    A = M.presentation if isinstance(M, PresentedModule) else M
    R = A.R
    if A.n == 0:
        return R.ideal([1])
    return R.ideal(maximal_minors(A))


def delta_ideal(f: FreeMap) -> frozenset:
    """Ideal generated by the coordinates of delta, i.e. its image under all
    functionals of the wedge power (restrictions from the free ambient exhaust
    the dual because S is self-injective)."""
    return f.R.ideal(int(v) for v in delta_element(f).values())


@dataclass
class FittStarkReport:
    equal: bool
    delta: dict
    im_delta: list
    fitt0: list
    witness: str | None = None

    def to_json(self) -> dict:
        return {"delta": self.delta, "im_delta": self.im_delta, "fitt0": self.fitt0,
                "fitt_stark": "equal" if self.equal else "unequal", "witness": self.witness}


def _wedge_label(idx: tuple[int, ...]) -> str:
    return "^".join(f"e{i + 1}" for i in idx) or "1"


def verify_fitt_stark(f: FreeMap) -> FittStarkReport:
    R = f.R
    delta = delta_element(f)
    I = R.ideal(int(v) for v in delta.values())
    J = fitting0(f)
    witness = None
    if I != J:
        extra = sorted(I - J) or sorted(J - I)
        side = "im(delta)" if I - J else "Fitt0"
        witness = f"{R.format(extra[0])} lies only in {side}"
    return FittStarkReport(
        I == J,
        {_wedge_label(k): R.format(v) for k, v in sorted(delta.items())},
        [R.format(g) for g in R.ideal_generators(I)],
        [R.format(g) for g in R.ideal_generators(J)],
        witness,
    )


@dataclass
class SweepResult:
    ring: str
    pool: list
    shapes: list
    matrices: int
    failures: int

    def to_json(self) -> dict:
        return self.__dict__.copy()


def fitt_stark_sweep(R: FiniteRing, pool: Sequence[int], max_total: int = 3) -> SweepResult:
    """Exhaustive im(delta) = Fitt0 over all s x (s+t) matrices with pool entries."""
    pool_arr = np.array(pool, dtype=np.int64)
    total = 0
    fails = 0
    shapes = []
    for s in range(1, max_total + 1):
        for t in range(0, max_total - s + 1):
            n = s + t
            cells = s * n
            idx = all_vectors_small(len(pool), cells)
            mats = pool_arr[idx].reshape(-1, s, n)
            delta = _delta_batch(R, mats)
            lhs = R.ideal_id_of(list(delta.values()))
            rhs = R.ideal_id_of(_minors_batch(R, mats))
            bad = int(np.count_nonzero(lhs != rhs))
            # bi-dual membership: one more contraction vanishes
            for r in range(s):
                again = tilde_phi(R, [mats[:, r, j] for j in range(n)], delta)
                for v in again.values():
                    bad += int(np.count_nonzero(np.asarray(v) != 0))
            total += mats.shape[0]
            fails += bad
            shapes.append([s, t])
    return SweepResult(R.spec.name(), [R.format(e) for e in pool], shapes, total, fails)


def all_vectors_small(base: int, length: int) -> np.ndarray:
    idx = np.arange(base**length, dtype=np.int64)
    return np.stack([(idx // base**j) % base for j in range(length)], axis=1) if length else np.zeros((1, 0), dtype=np.int64)


# ---------------------------------------------------------------------------
# Matlis duality


@dataclass
class MatlisReport:
    order_M: int
    order_Mdd: int
    injective: bool
    bijective: bool

    def to_json(self) -> dict:
        return self.__dict__.copy()


def dual_generators(M: PresentedModule, budget: int = DEFAULT_BUDGET) -> list[tuple[int, ...]]:
    """Generators of M* = ker(A^T), as row functionals on S^n."""
    return kernel(M.presentation.transpose(), budget, method="enumerate")


def bidual_matlis_check(M: PresentedModule, budget: int = DEFAULT_BUDGET) -> MatlisReport:
    R = M.R
    A = M.presentation
    n = A.n
    gens = dual_generators(M, budget)
    r = len(gens)
    # relations among the generators of M*: kernel of S^r -> S^n
    G = FreeMap(A.spec, tuple(tuple(g[i] for g in gens) for i in range(n))) if r else None
    if r:
        rel = kernel(G, budget, method="enumerate")
        # M** = {s in S^r : <c, s> = 0 for every relation c}
        if rel:
            Mdd_size = len(kernel_elements(FreeMap(A.spec, tuple(rel)), budget))
        else:
            Mdd_size = R.n**r
    else:
        Mdd_size = 1
    order_M = M.order(budget)
    # canonical map v -> (g_i(v))_i; its kernel must be exactly im(A)
    vecs = all_vectors(R, n, budget)
    if r:
        ev = FreeMap(A.spec, tuple(gens)).apply(vecs)
        zero = np.all(ev == 0, axis=1)
    else:
        zero = np.ones(vecs.shape[0], dtype=bool)
    ker_size = int(np.count_nonzero(zero))
    injective = ker_size == len(M.relations(budget))
    return MatlisReport(order_M, Mdd_size, injective, injective and order_M == Mdd_size)


def random_modules(R: FiniteRing, count: int, seed: int = 0, max_n: int = 2, max_m: int = 2) -> list[PresentedModule]:
    rng = random.Random(seed)
    out = [PresentedModule(FreeMap(R.spec, ((0,),)))]  # M = S
    while len(out) < count:
        n = rng.randint(1, max_n)
        m = rng.randint(1, max_m)
        mat = tuple(tuple(rng.randrange(R.n) for _ in range(m)) for _ in range(n))
        out.append(PresentedModule(FreeMap(R.spec, mat)))
    return out


# ---------------------------------------------------------------------------
# determinants of cyclic torsion modules


@dataclass
class DetReport:
    product_ideal_ok: bool
    ses_ok: bool

    def to_json(self) -> dict:
        return self.__dict__.copy()


def det_cokernel_multiplicative(R: FiniteRing, r1: int, r2: int) -> DetReport:
    for r in (r1, r2):
        if not R.is_regular(r):
            raise NotRegular(f"{R.format(r)} is a zero divisor")
    r12 = int(R.mul[r1, r2])
    I1, I2 = R.principal[r1], R.principal[r2]
    prod = R.ideal(int(R.mul[x, y]) for x in I1 for y in I2)
    product_ok = prod == R.principal[r12]
    # 0 -> S/r2 --r1--> S/r1r2 -> S/r1 -> 0
    n = R.n
    size = lambda I: n // len(I)
    I12 = R.principal[r12]
    # injectivity of multiplication by r1 from S/r2 into S/r1r2
    inj = all((int(R.mul[r1, s]) in I12) == (s in I2) for s in range(n))
    ses_ok = inj and size(I12) == size(I1) * size(I2)
    return DetReport(product_ok, ses_ok)


# ---------------------------------------------------------------------------
# desk-scale presets


ACCEPTANCE_RINGS = {
    "Z/4": ((2, 2, 1), (0, 1, 2, 3)),
    "Z/9": ((3, 2, 1), (0, 1, 3, 6)),
    "F2[x]/(x^2)": ((2, 1, 2), (0, 1, (0, 1), (1, 1))),
    "Z/4[x]/(x^2)": ((2, 2, 2), (0, 1, 2, (0, 1))),
}


def acceptance_ring(name: str) -> tuple[FiniteRing, list[int]]:
    (p, a, b), pool = ACCEPTANCE_RINGS[name]
    R = ring(p, a, b)
    return R, [R.element(x) for x in pool]
