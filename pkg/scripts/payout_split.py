#!/usr/bin/env python3
"""Trace how the referral budget splits as recommendation chains lengthen.

The hired applicant always takes half the budget; every hop the chain grows
halves each earlier referrer's cut and the poster's leftover alike. Sweeping
the recommendation probability in a slow-spread regime shows the poster's
expected retained fraction falling geometrically with depth, and checks the
ledger round trip: the surplus alone pins down how long the chain was.
"""
from collections import Counter
from fractions import Fraction

import numpy as np

from halting_cascade import (
    IHCParams,
    compute_payouts,
    generate_er,
    run_cascade,
    surplus_to_length,
)

N_AGENTS = 1000
MEAN_DEGREE = 20.0
P_APPLY = 0.1
P_HIRE = 0.5
P_RECOMMEND = (0.08, 0.12, 0.2, 0.4)
BUDGET = 1
REPS = 400
MASTER_SEED = 20260815


def depth_distribution(p_r: float, cell: int) -> Counter[int]:
    depths: Counter[int] = Counter()
    for rep in range(REPS):
        net_ss, node_ss, run_ss = np.random.SeedSequence(
            [MASTER_SEED, cell, rep]
        ).spawn(3)
        network = generate_er(N_AGENTS, MEAN_DEGREE, net_ss)
        seed_node = int(np.random.default_rng(node_ss).integers(network.n))
        result = run_cascade(network, IHCParams(p_r, P_APPLY, P_HIRE), (seed_node,), run_ss)
        if result.success:
            depths[result.chain_length] += 1
    return depths


def main() -> None:
    print(
        f"n={N_AGENTS} mean_degree={MEAN_DEGREE} p_a={P_APPLY} p_h={P_HIRE} "
        f"budget={BUDGET} reps={REPS}"
    )
    print(
        f"{'p_r':>6} {'hires':>6} {'mean_depth':>10} {'poster_keeps':>12} "
        f"{'worker_take':>11} {'depth_range':>11}"
    )
    for cell, p_r in enumerate(P_RECOMMEND):
        depths = depth_distribution(p_r, cell)
        hires = sum(depths.values())
        if hires == 0:
            print(f"{p_r:>6.2f} {0:>6}")
            continue
        retained = Fraction(0)
        worker = Fraction(0)
        for depth, count in depths.items():
            schedule = compute_payouts(depth, BUDGET)
            assert surplus_to_length(schedule.surplus, BUDGET) == depth
            retained += schedule.surplus * count
            worker += schedule.payouts[0] * count
        mean_depth = sum(d * c for d, c in depths.items()) / hires
        print(
            f"{p_r:>6.2f} {hires:>6} {mean_depth:>10.2f} "
            f"{float(retained / hires):>12.4f} {float(worker / hires):>11.4f} "
            f"{min(depths):>5}-{max(depths):<5}"
        )


if __name__ == "__main__":
    main()
