#!/usr/bin/env python3
"""Scan both optimized figures of merit against the analytic bounds.

For each n this prints the best shared-randomness-averaged advantage f(n),
the best worst-bit advantage g(n), the 1/sqrt(n) ceiling, the guaranteed
floor from padding up to the next 3-smooth size, and the information
inequality K(1 - h(p)) <= 1 evaluated at the achieved probability.
"""

import argparse
import math

from earac.codetree import format_tree
from earac.optimizer import (best_avg_tree, best_min_tree, ic_check,
                             lower_bound, smallest_23_smooth_geq, upper_bound)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-n", type=int, default=30)
    args = parser.parse_args()

    print(f"{'n':>3} {'f(n)':>10} {'g(n)':>10} {'1/sqrt(n)':>10} "
          f"{'floor':>10} {'n>=':>4} {'ic lhs':>8} {'tree (worst-bit)'}")
    for n in range(1, args.max_n + 1):
        f = best_avg_tree(n)
        g = best_min_tree(n)
        ceiling = 1.0 / math.sqrt(n)
        floor = 2 * lower_bound(n).to_decimal() - 1.0
        lhs, holds = ic_check(n, f.probability.to_decimal())
        assert holds, f"information inequality violated at n={n}"
        saturated = "*" if upper_bound(n).is_exact and \
            g.probability == upper_bound(n).exact else " "
        print(f"{n:>3} {f.value.to_decimal():>10.6f} "
              f"{g.value.to_decimal():>10.6f}{saturated}{ceiling:>9.6f} "
              f"{floor:>10.6f} {smallest_23_smooth_geq(n):>4} {lhs:>8.4f} "
              f"{format_tree(g.tree)}")
    print("\n* worst-bit optimum saturates the ceiling (3-smooth n)")


if __name__ == "__main__":
    main()
