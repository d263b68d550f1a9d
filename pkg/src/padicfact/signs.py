"""Weight regions, central points, root numbers and the Panchishkin defect."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParityError

REGIONS3 = ("bal", "f", "g", "h")
REGIONS2 = ("ad", "f")


@dataclass(frozen=True)
class WeightTriple:
    k: int
    l: int
    m: int

    def __post_init__(self):
        if min(self.k, self.l, self.m) < 1:
            raise ValueError("weights must be >= 1")

    @property
    def even(self) -> bool:
        return (self.k + self.l + self.m) % 2 == 0

    @property
    def center(self) -> int:
        if not self.even:
            raise ParityError(f"k + l + m = {self.k + self.l + self.m} is odd")
        return (self.k + self.l + self.m) // 2 - 1


@dataclass(frozen=True)
class Classification:
    region: str
    center: int
    tie: bool = False

    def to_json(self) -> dict:
        return {"region": self.region, "c": self.center, "tie": self.tie}


def classify3(w: WeightTriple) -> Classification:
    """bal iff the sum exceeds twice the largest weight; otherwise dominant (sum = 2 max included)."""
    c = w.center
    ws = (w.k, w.l, w.m)
    top = max(ws)
    if sum(ws) > 2 * top:
        return Classification("bal", c)
    first = ws.index(top)
    return Classification("fgh"[first], c, ws.count(top) > 1)


def classify2(k: int, l: int) -> str:
    return "ad" if 2 * l > k else "f"


def _sign(x: int) -> int:
    if x not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return x


def archimedean_sign(region3: str) -> int:
    if region3 not in REGIONS3:
        raise ValueError(f"unknown region {region3!r}")
    return -1 if region3 == "bal" else 1


def global_sign(region3: str, finite_prod: int) -> int:
    return archimedean_sign(region3) * _sign(finite_prod)


def forced_vanishing(finite_prod: int) -> list[str]:
    """Regions whose p-adic L-function is forced to vanish identically."""
    return ["bal"] if _sign(finite_prod) == 1 else ["f", "g", "h"]


def selfdual_table(region2: str, eps_f: int) -> tuple[int, int]:
    """(eps(f x g x g^c), eps(f x ad0 g)) for h = g^c."""
    eps_f = _sign(eps_f)
    if region2 == "ad":
        return -1, -eps_f
    if region2 == "f":
        return 1, eps_f
    raise ValueError(f"unknown region {region2!r}")


def panchishkin_defect(rank_plus: int, rank_Fplus: int) -> int:
    if rank_plus < 0 or rank_Fplus < 0:
        raise ValueError("ranks must be nonnegative")
    return abs(rank_plus - rank_Fplus)


def is_weakly_panchishkin(rank_plus: int, rank_Fplus: int) -> bool:
    return panchishkin_defect(rank_plus, rank_Fplus) == 0


def signs_record3(w: WeightTriple, finite_prod: int) -> dict:
    cl = classify3(w)
    return {
        "weights": [w.k, w.l, w.m],
        **cl.to_json(),
        "eps_infinity": archimedean_sign(cl.region),
        "finite_prod": finite_prod,
        "epsilon": global_sign(cl.region, finite_prod),
        "vanishing": forced_vanishing(finite_prod),
    }


def signs_record2(k: int, l: int, eps_f: int) -> dict:
    region = classify2(k, l)
    triple, adj = selfdual_table(region, eps_f)
    return {"weights": [k, l], "region": region, "eps_f": eps_f,
            "eps_triple": triple, "eps_adjoint": adj}
