"""Enumerate vertices and sharp inequalities for a range of n and compare with the closed forms."""

import argparse
import time

from ivbounds.model import OutcomeSupport
from ivbounds.rays import count_inequalities, sharp_inequalities
from ivbounds.signatures import count_signatures
from ivbounds.vertices import enumerate_vertices


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-min", type=int, default=2)
    ap.add_argument("--n-max", type=int, default=9)
    args = ap.parse_args()
    print(f"{'n':>3} {'vertices':>10} {'formula':>10} {'ineqs':>7} {'formula':>8} {'seconds':>8}")
    ok = True
    for n in range(args.n_min, args.n_max + 1):
        t0 = time.perf_counter()
        nv = sum(1 for _ in enumerate_vertices(OutcomeSupport.range(n)))
        ni = sum(1 for _ in sharp_inequalities(n))
        dt = time.perf_counter() - t0
        ok &= nv == count_signatures(n) and ni == count_inequalities(n)
        print(f"{n:>3} {nv:>10} {count_signatures(n):>10} {ni:>7} {count_inequalities(n):>8} {dt:>8.3f}")
    print("all counts match" if ok else "MISMATCH")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
