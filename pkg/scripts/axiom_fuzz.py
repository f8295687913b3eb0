#!/usr/bin/env python3
"""Long-running randomized replay of the derivation axioms.

Runs check_axioms in rounds with stepped seeds and reports any failing
identity verbatim.  Intended for soak testing beyond what the unit
suite covers; exit code 1 if any round fails.
"""

import argparse
import time

from fwdiff.fwcore import check_axioms


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, required=True, help="the prime")
    ap.add_argument("--nvars", type=int, default=2)
    ap.add_argument("--trials", type=int, default=2000,
                    help="trials per round (default 2000)")
    ap.add_argument("--rounds", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0, help="base seed")
    ns = ap.parse_args(argv)

    bad = 0
    t0 = time.time()
    for r in range(ns.rounds):
        rep = check_axioms(ns.p, ns.nvars, trials=ns.trials, seed=ns.seed + r)
        mark = "ok " if rep.passed else "BAD"
        print(f"round {r:3d}  seed={ns.seed + r:<6} [{mark}]"
              f" {rep.trials - len(rep.failures)}/{rep.trials}")
        if not rep.passed:
            bad += 1
            print(f"  {rep.describe()}")
    print(f"{ns.rounds} rounds in {time.time() - t0:.1f}s, {bad} failing")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
