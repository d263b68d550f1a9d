"""Command-line entry point.

Every subcommand prints one JSON document.  Exit codes: 0 success, 1 a
mathematical error (the document then carries an "error" field), 2 a usage
error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__, acceptance, euler, leading_terms as lt, signs
from .characters import parse_character
from .config import RunConfig, load_config
from .errors import PadicFactError
from .kubota_leopoldt import (
    calibrate,
    coates_wiles,
    gross_rhs,
    kl_special,
    kl_value,
    stickelberger_quotient,
    stickelberger_series,
)
from .quadratic import QuadField, pi_log


class UsageError(Exception):
    pass


def _sign_arg(x: str) -> int:
    v = int(x)
    if v not in (1, -1):
        raise argparse.ArgumentTypeError("expected +1 or -1")
    return v


def _json_arg(text: str | None):
    """Inline JSON, @file, or '-' for stdin."""
    if text is None or text == "-":
        return json.load(sys.stdin)
    if text.startswith("@"):
        return json.loads(Path(text[1:]).read_text())
    path = Path(text)
    if not text.lstrip().startswith(("{", "[")) and path.exists():
        return json.loads(path.read_text())
    return json.loads(text)


def _rational_exact(chi, s: Fraction, p: int, N: int):
    if s.denominator == 1 and s <= 0:
        sv = kl_special(chi, 1 - int(s), p, N)
        return sv.rational
    return None


# ---------------------------------------------------------------------------
# subcommands; each returns (payload, calibration-or-None)


def cmd_kl(a, cfg: RunConfig):
    chi = parse_character(a.chi, cfg.p)
    s = Fraction(a.s)
    val = kl_value(chi, s, cfg.p, cfg.N)
    exact = _rational_exact(chi, s, cfg.p, cfg.N)
    out = {"chi": chi.to_json(), "s": str(s), "p": cfg.p, "precision": cfg.N, "padic": val.to_json()}
    out["value"] = str(exact) if exact is not None else {"valuation": val.to_json()["valuation"],
                                                         "unit_mod_pN": val.to_json()["unit_mod_pN"]}
    return out, None


def cmd_stickelberger(a, cfg: RunConfig):
    chi = parse_character(a.chi, cfg.p)
    N = min(cfg.N, 7) if a.N is None else cfg.N
    cal = calibrate(chi, cfg.p, N, cfg.M)
    out = {"chi": chi.to_json(), "p": cfg.p}
    if chi.is_trivial():
        F = stickelberger_quotient(chi, cfg.p, N, cfg.M, cal.convention)
        out["numerator"] = F.num.to_json()
        out["denominator"] = F.den.to_json()
    else:
        F = stickelberger_series(chi, cfg.p, N, cfg.M, cal.convention)
        out["series"] = F.to_json()
    if a.s is not None:
        out["s"] = a.s
        out["value"] = F.evaluate(Fraction(a.s)).to_json()
    return out, cal.to_json()


def cmd_gross_rhs(a, cfg: RunConfig):
    chi = parse_character(a.chi, cfg.p)
    N = min(cfg.N, 7) if a.N is None else cfg.N
    g = gross_rhs(chi, a.D, cfg.p, N, cfg.M)
    out = {"chi": chi.to_json(), "D": a.D, "p": cfg.p,
           "factors": [c.to_json() for c in g.chars], "series": g.series.to_json()}
    if a.s is not None:
        out["s"] = a.s
        out["value"] = g.series.evaluate(Fraction(a.s)).to_json()
    return out, {"e": g.convention[0], "sigma": g.convention[1]}


def cmd_coleman(a, cfg: RunConfig):
    value, padic = coates_wiles(a.c, a.k, a.p, cfg.N)
    out = {"c": a.c, "k": a.k, "value": str(value)}
    if padic is not None:
        out["p"] = a.p
        out["padic"] = padic.to_json()
    return out, None


def cmd_euler(a, cfg: RunConfig):
    kind = a.kind
    if kind in ("identity-8", "identity-ad"):
        fn = euler.verify_identity_8_eq_4x4 if kind == "identity-8" else euler.verify_identity_ad_eq_bdp_times_quad
        rep = fn(a.samples, cfg.seed)
        return rep.to_json(), None
    data = _json_arg(a.input)
    f = euler.HeckeParams.from_json(data["f"])
    if kind == "adjoint":
        v = euler.euler_adjoint(f)
    elif kind == "deg4":
        g = euler.HeckeParams.from_json(data["g"])
        v = euler.euler_deg4(f, g, int(data["j"]), data.get("dominance", "f"))
    elif kind == "triple":
        g = euler.HeckeParams.from_json(data["g"])
        h = euler.HeckeParams.from_json(data["h"])
        v = euler.euler_triple(f, g, h, int(data["c"]), data.get("region", "f"))
    elif kind == "bdp":
        cm = euler.CMParams.from_json(data["cm"])
        v = euler.euler_bdp(f, cm, int(data["c"]), data.get("variant", "Phi"), data.get("arithmetic", True))
    else:
        raise UsageError(f"unknown euler kind {kind!r}")
    return {"kind": kind, "value": str(v)}, None


def cmd_signs(a, cfg: RunConfig):
    if a.weights is not None and len(a.weights) == 3:
        if a.finite_prod is None:
            raise UsageError("three weights need --finite-prod")
        return signs.signs_record3(signs.WeightTriple(*a.weights), a.finite_prod), None
    if a.weights is not None and len(a.weights) == 2:
        if a.eps_f is None:
            raise UsageError("two weights need --eps-f")
        return signs.signs_record2(*a.weights, a.eps_f), None
    if a.region is not None:
        if a.region in signs.REGIONS3 and a.finite_prod is not None:
            return {"region": a.region, "epsilon": signs.global_sign(a.region, a.finite_prod),
                    "vanishing": signs.forced_vanishing(a.finite_prod)}, None
        if a.region in signs.REGIONS2 and a.eps_f is not None:
            t, ad = signs.selfdual_table(a.region, a.eps_f)
            return {"region": a.region, "eps_f": a.eps_f, "eps_triple": t, "eps_adjoint": ad}, None
        raise UsageError("--region needs --finite-prod (bal/f/g/h) or --eps-f (ad/f)")
    if a.defect is not None:
        d = signs.panchishkin_defect(*a.defect)
        return {"defect": d, "weakly_panchishkin": d == 0}, None
    raise UsageError("signs needs --weights, --region or --defect")


def cmd_quadfield(a, cfg: RunConfig):
    K = QuadField(a.D)
    out = {"D": a.D, "h": K.h, "omega": K.omega, "B1": str(K.B1), "p": cfg.p,
           "split_at_p": K.split_at(cfg.p)}
    if out["split_at_p"] and cfg.p != 2:
        r = pi_log(a.D, cfg.p, cfg.N)
        out["u"] = list(r.u)
        out["log_u"] = r.log_u.to_json()
    else:
        out["u"] = None
        out["log_u"] = None
    return out, None


def cmd_leading_term(a, cfg: RunConfig):
    data = _json_arg(a.input)
    rs = data["ring"]
    R = lt.ring(int(rs["p"]), int(rs["a"]), int(rs.get("b", 1)))
    f = lt.FreeMap.from_rows(R, data["matrix"])
    if R.n ** f.m > cfg.budget:
        raise lt.BudgetExceeded(f"|S|^{f.m} exceeds the budget {cfg.budget}")
    rep = lt.verify_fitt_stark(f)
    out = {"ring": R.spec.name(), **rep.to_json()}
    return out, None


def cmd_verify(a, cfg: RunConfig):
    if a.suite not in acceptance.SUITES:
        raise UsageError(f"unknown suite {a.suite!r}; choose from {sorted(acceptance.SUITES)}")
    results = acceptance.run_all(acceptance.SUITES[a.suite])
    rows = []
    for r in results:
        j = r.to_json()
        if not a.timings:
            j.pop("seconds")
            j["detail"].pop("time_limit_s", None)
        rows.append(j)
    return {"suite": a.suite, "passed": all(r.passed for r in results), "criteria": rows}, None


COMMANDS = {
    "kl": cmd_kl,
    "stickelberger": cmd_stickelberger,
    "gross-rhs": cmd_gross_rhs,
    "coleman": cmd_coleman,
    "euler": cmd_euler,
    "signs": cmd_signs,
    "quadfield": cmd_quadfield,
    "leading-term": cmd_leading_term,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML config file (default: $PADICFACT_CONFIG)")
    common.add_argument("--p", type=int)
    common.add_argument("--N", type=int, help="p-adic precision")
    common.add_argument("--M", type=int, help="series truncation")
    common.add_argument("--budget", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--output")

    ap = argparse.ArgumentParser(prog="padicfact", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("kl", parents=[common], help="L_p(chi, s) by the convergent sum")
    s.add_argument("--chi", required=True, help="trivial | omega^k | quad:n | JSON")
    s.add_argument("--s", required=True)

    s = sub.add_parser("stickelberger", parents=[common], help="calibrated Stickelberger series")
    s.add_argument("--chi", required=True)
    s.add_argument("--s")

    s = sub.add_parser("gross-rhs", parents=[common], help="product series on the right of Gross' formula")
    s.add_argument("--chi", required=True)
    s.add_argument("--D", type=int, required=True)
    s.add_argument("--s")

    s = sub.add_parser("coleman", parents=[common], help="Coates-Wiles values of g_c")
    s.add_argument("--c", type=int, required=True)
    s.add_argument("--k", type=int, required=True)

    s = sub.add_parser("euler", parents=[common], help="modified Euler factors and identity reports")
    s.add_argument("--kind", required=True,
                   choices=["adjoint", "deg4", "triple", "bdp", "identity-8", "identity-ad"])
    s.add_argument("--input", help="JSON parameters (inline, @file or -)")
    s.add_argument("--samples", type=int, default=100)

    s = sub.add_parser("signs", parents=[common], help="regions, root numbers and sign tables")
    s.add_argument("--weights", type=int, nargs="+")
    s.add_argument("--region")
    s.add_argument("--finite-prod", type=_sign_arg)
    s.add_argument("--eps-f", type=_sign_arg)
    s.add_argument("--defect", type=int, nargs=2, metavar=("RANK_PLUS", "RANK_FPLUS"))

    s = sub.add_parser("quadfield", parents=[common], help="imaginary quadratic field data")
    s.add_argument("--D", type=int, required=True)

    s = sub.add_parser("leading-term", parents=[common], help="delta element and Fitting ideal")
    s.add_argument("--input", help="JSON {ring, matrix} (inline, @file or -)")

    s = sub.add_parser("verify", parents=[common], help="run acceptance suites")
    s.add_argument("--suite", default="all")
    s.add_argument("--timings", action="store_true", help="include wall-clock times (non-reproducible)")
    return ap


def _emit(doc: dict, cfg: RunConfig | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True, default=str)
    if cfg is not None and cfg.output:
        Path(cfg.output).write_text(text + "\n")
    print(text)


def main(argv=None) -> int:
    ap = build_parser()
    a = ap.parse_args(argv)
    cfg = None
    try:
        cfg = load_config(a.config).override(p=a.p, N=a.N, M=a.M, budget=a.budget, seed=a.seed, output=a.output)
        if getattr(a, "kind", None) in ("adjoint", "deg4", "triple", "bdp") and a.input is None and sys.stdin.isatty():
            raise UsageError("--input is required")
        payload, calibration = COMMANDS[a.command](a, cfg)
    except (UsageError, ValueError, KeyError, json.JSONDecodeError, FileNotFoundError) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, None)
        return 2
    except PadicFactError as exc:
        _emit({"error": type(exc).__name__, "message": str(exc), "meta": _meta(cfg, None)}, None)
        return 1
    payload["meta"] = _meta(cfg, calibration)
    _emit(payload, cfg)
    if a.command == "verify" and not payload["passed"]:
        return 1
    return 0


def _meta(cfg: RunConfig | None, calibration) -> dict:
    return {"version": __version__, "config": cfg.to_json() if cfg else None,
            "seed": cfg.seed if cfg else None, "calibration": calibration}


if __name__ == "__main__":
    sys.exit(main())
