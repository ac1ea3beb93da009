"""Cross-check the enumeration routes against the exact LP oracle on seeded random laws."""

import argparse
import time
from dataclasses import dataclass
from fractions import Fraction

from ivbounds.model import corrupt, marginalize, random_full_data_law
from ivbounds.multival import multival_lower_bound, multival_upper_bound
from ivbounds.oracle import oracle_ate_bounds, oracle_feasible
from ivbounds.rays import falsification_test
from ivbounds.vertices import ate_bounds


@dataclass(frozen=True)
class SweepConfig:
    laws: int = 50
    seed: int = 0
    magnitude: Fraction = Fraction(3, 5)
    bound_sizes: tuple = ((2, 2), (3, 2), (4, 2), (3, 3))
    falsification_sizes: tuple = (2, 3)


def sweep_bounds(n, ell, laws, seed0):
    mismatches = 0
    for seed in range(seed0, seed0 + laws):
        law = marginalize(random_full_data_law(n, ell, seed))
        lo, hi = oracle_ate_bounds(law)
        if ell == 2:
            mismatches += ate_bounds(law).as_tuple() != (lo, hi)
        else:
            mismatches += not (multival_lower_bound(law) <= lo and hi <= multival_upper_bound(law))
    return mismatches


def sweep_falsification(n, laws, seed0, magnitude):
    mismatches = falsified = 0
    for seed in range(seed0, seed0 + laws):
        law = corrupt(marginalize(random_full_data_law(n, 2, seed)), magnitude, seed)
        compatible = falsification_test(law).verdict == "compatible"
        falsified += not compatible
        mismatches += compatible != oracle_feasible(law.probs, n, 2)
    return mismatches, falsified


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--laws", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--magnitude", default="3/5", help="corruption magnitude for the falsification sweep")
    args = ap.parse_args()
    cfg = SweepConfig(args.laws, args.seed, Fraction(args.magnitude))

    for n, ell in cfg.bound_sizes:
        t0 = time.perf_counter()
        bad = sweep_bounds(n, ell, cfg.laws, cfg.seed)
        kind = "exact equality" if ell == 2 else "validity"
        print(f"bounds   n={n} ell={ell}: {cfg.laws} laws, {bad} mismatches ({kind}), {time.perf_counter() - t0:.1f} s")
    for n in cfg.falsification_sizes:
        bad, fals = sweep_falsification(n, cfg.laws, cfg.seed, cfg.magnitude)
        print(f"falsify  n={n}: {cfg.laws} corrupted laws, {fals} falsified, {bad} verdict mismatches")

if __name__ == "__main__":
    main()
