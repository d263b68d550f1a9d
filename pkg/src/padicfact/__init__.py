"""Exact and p-adic computations around Kubota-Leopoldt functions, modified
Euler factors, root numbers and leading-term algebra over finite rings."""

__version__ = "0.1.0"

from .errors import PadicFactError
from .padic import PadicNumber, plog, teichmuller
from .characters import DirichletCharacter, gauss_sum, gen_bernoulli
from .iwasawa import IwasawaSeries
from .kubota_leopoldt import kl_special, kl_value, stickelberger_series
from .config import RunConfig

__all__ = [
    "PadicFactError",
    "PadicNumber",
    "plog",
    "teichmuller",
    "DirichletCharacter",
    "gauss_sum",
    "gen_bernoulli",
    "IwasawaSeries",
    "kl_special",
    "kl_value",
    "stickelberger_series",
    "RunConfig",
]
