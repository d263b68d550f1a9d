#!/usr/bin/env python3
"""Exhaustive im(delta) = Fitt0 sweep over the four desk-scale rings."""

import argparse
import time

from padicfact import leading_terms as lt


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-total", type=int, default=3, help="largest s + t")
    ap.add_argument("--rings", nargs="*", default=list(lt.ACCEPTANCE_RINGS))
    a = ap.parse_args()
    for name in a.rings:
        R, pool = lt.acceptance_ring(name)
        t0 = time.perf_counter()
        res = lt.fitt_stark_sweep(R, pool, a.max_total)
        dt = time.perf_counter() - t0
        print(f"{name:14s} pool={res.pool} matrices={res.matrices} failures={res.failures} ({dt:.1f}s)")


if __name__ == "__main__":
    main()
