#!/usr/bin/env python3
"""Sweep the rational points of a ring over small field extensions and
tabulate the regularity verdicts at each one."""

import argparse
from dataclasses import dataclass

from fwdiff.localalg import rational_points, regularity
from fwdiff.modarith import GaloisField, PrimeField
from fwdiff.ringfile import parse_ring


@dataclass
class SweepConfig:
    path: str
    max_degree: int = 2
    flat: bool = False


def fields_for(pres, max_degree):
    p = pres.base.p
    yield PrimeField(p)
    for e in range(2, max_degree + 1):
        yield GaloisField(p, e)


def run(cfg: SweepConfig) -> int:
    with open(cfg.path) as fh:
        pres = parse_ring(fh.read())
    print(f"# {pres.describe()}")
    for fld in fields_for(pres, cfg.max_degree):
        pts = rational_points(pres, fld)
        print(f"\nover {fld.tag()}: {len(pts)} rational point(s)")
        for x in pts:
            v = regularity(pres, x, flat=cfg.flat)
            print(f"  {x.describe():<18} {v.verdict:<11}"
                  f" fiber={v.fiber_dim} d={v.d} r={v.r}")
    return 0


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("ring", help="ring description file")
    ap.add_argument("--max-degree", type=int, default=2,
                    help="largest residue-field extension degree (default 2)")
    ap.add_argument("--flat", action="store_true",
                    help="assert flatness for a Z/p^2 base")
    ns = ap.parse_args(argv)
    return run(SweepConfig(ns.ring, ns.max_degree, ns.flat))


if __name__ == "__main__":
    raise SystemExit(main())
