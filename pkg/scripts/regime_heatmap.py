#!/usr/bin/env python3
"""Sweep the recommendation/application grid and print the hire-rate map.

Each cell simulates fresh cascades on an Erdos-Renyi network and tags the
measured success rate with the regime predicted from the mean degree. The
interesting part is the interior ridge: raising the application rate both
feeds the halting product and starves the spread, so the hire rate is not
monotone in p_a.
"""
import numpy as np

from halting_cascade import (
    IHCParams,
    classify_regime,
    generate_er,
    run_cascade,
    summarize,
)

N_AGENTS = 1000
MEAN_DEGREE = 20.0
P_HIRE = 0.5
P_RECOMMEND = (0.01, 0.02, 0.05, 0.1, 0.2)
P_APPLY = (0.05, 0.2, 0.5, 0.8)
REPS = 300
MASTER_SEED = 20260815

REGIME_TAGS = {
    "above_both": "AB",
    "diffusion_only": "DO",
    "halting_only": "HO",
    "below_both": "BB",
}


def sweep_cell(p_r: float, p_a: float, cell: int) -> str:
    results = []
    for rep in range(REPS):
        net_ss, node_ss, run_ss = np.random.SeedSequence(
            [MASTER_SEED, cell, rep]
        ).spawn(3)
        network = generate_er(N_AGENTS, MEAN_DEGREE, net_ss)
        seed_node = int(np.random.default_rng(node_ss).integers(network.n))
        results.append(
            run_cascade(network, IHCParams(p_r, p_a, P_HIRE), (seed_node,), run_ss)
        )
    summary = summarize(results)
    regime = classify_regime(MEAN_DEGREE, p_r, p_a, P_HIRE)
    return f"{summary.success_rate:.2f} {REGIME_TAGS[regime.regime.value]}"


def main() -> None:
    print(
        f"n={N_AGENTS} mean_degree={MEAN_DEGREE} p_h={P_HIRE} "
        f"reps={REPS} per cell"
    )
    header = "p_r \\ p_a " + "".join(f"{p_a:>10.2f}" for p_a in P_APPLY)
    print(header)
    cell = 0
    for p_r in P_RECOMMEND:
        row = [f"{p_r:<10.2f}"]
        for p_a in P_APPLY:
            row.append(f"{sweep_cell(p_r, p_a, cell):>10}")
            cell += 1
        print("".join(row))
    print(
        "regimes: AB above both boundaries, DO above the spread boundary\n"
        "only, HO above the halting boundary only, BB below both"
    )


if __name__ == "__main__":
    main()
