#!/usr/bin/env python3
"""Compare cascading referrals against direct posting on shared skill worlds.

For each vacancy size the same sampled worlds drive both channels: the
cascade spreads over a fresh Erdos-Renyi network, while the direct channel
pushes the posting straight to a uniform half of the population. The
closed-form value for the direct channel is printed alongside its simulated
rate. Cascades keep hiring as the vacancy grows because unqualified
recipients keep forwarding; the direct channel decays with qualification
rarity.
"""
import numpy as np

from halting_cascade import (
    OracleSpec,
    bind_params,
    generate_er,
    oracle_success_probability,
    run_cascade,
    sample_skill_world,
    simulate_oracle,
    summarize,
)

N_AGENTS = 1000
MEAN_DEGREE = 20.0
SKILL_RATE = 3.0
P_RECOMMEND = 0.3
REACH_FRACTION = 0.5
VACANCY_SIZES = (2, 4, 6, 8)
REPS = 200
MASTER_SEED = 20260815


def compare(vacancy_size: int) -> tuple[float, float, float, float]:
    cascade_results = []
    oracle_hits = 0
    for rep in range(REPS):
        world_ss, net_ss, node_ss, run_ss, oracle_ss = np.random.SeedSequence(
            [MASTER_SEED, vacancy_size, rep]
        ).spawn(5)
        world = sample_skill_world(N_AGENTS, SKILL_RATE, vacancy_size, seed=world_ss)
        network = generate_er(N_AGENTS, MEAN_DEGREE, net_ss)
        seed_node = int(np.random.default_rng(node_ss).integers(network.n))
        cascade_results.append(
            run_cascade(network, bind_params(world, P_RECOMMEND), (seed_node,), run_ss)
        )
        oracle_hits += simulate_oracle(
            world, REACH_FRACTION, P_RECOMMEND, seed=oracle_ss
        ).success
    summary = summarize(cascade_results)
    analytic = oracle_success_probability(
        OracleSpec(N_AGENTS, REACH_FRACTION, P_RECOMMEND, SKILL_RATE, vacancy_size)
    )
    return (
        summary.success_rate,
        float(summary.median_chain_length),
        oracle_hits / REPS,
        analytic,
    )


def main() -> None:
    print(
        f"n={N_AGENTS} skill_rate={SKILL_RATE} p_r={P_RECOMMEND} "
        f"reach={REACH_FRACTION} reps={REPS}"
    )
    print(
        f"{'vacancy':>7} {'cascade':>9} {'median_len':>10} "
        f"{'direct_sim':>10} {'direct_exact':>12}"
    )
    for vacancy_size in VACANCY_SIZES:
        cascade, median_len, direct, analytic = compare(vacancy_size)
        print(
            f"{vacancy_size:>7} {cascade:>9.3f} {median_len:>10.0f} "
            f"{direct:>10.3f} {analytic:>12.4f}"
        )


if __name__ == "__main__":
    main()
