"""Closed-form success probability for the direct-recommendation baseline.

The baseline ("oracle") posts the vacancy straight to a uniformly chosen
fraction of the population from a central hub. Success needs at least one
reached agent that is both recommended and fully qualified. The analytic
value marginalizes over the number of qualified agents (binomial), how many
of them land in the reached sample (hypergeometric), and whether any of
those gets recommended. All kernels run in log space so population-scale
terms stay finite, and the outer sums are truncated to the bulk of their
probability mass.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cascade import CascadeResult, IHCParams, run_cascade
from .graph import generate_star
from .skills import SkillWorld, hiring_probability


@dataclass(frozen=True)
class OracleSpec:
    population: int
    reach_fraction: float
    p_r: float
    skill_rate: float
    vacancy_size: int

    def __post_init__(self):
        if self.population < 1:
            raise ValueError("population must be at least 1")
        if not 0 <= self.reach_fraction <= 1:
            raise ValueError("reach_fraction must lie in [0, 1]")
        if not 0 <= self.p_r <= 1:
            raise ValueError("p_r must lie in [0, 1]")
        if self.skill_rate < 0:
            raise ValueError("skill_rate must be non-negative")
        if self.vacancy_size < 0:
            raise ValueError("vacancy_size must be non-negative")


@dataclass(frozen=True)
class TruncationBounds:
    """Truncation window for the analytic sums.

    ``l_min``..``l_max`` bound the qualified-agent count (2.5 sigma around
    its binomial mean); ``k_max`` caps the skill-catalog size at the point
    where the distribution of the maximum per-agent skill count has
    accumulated ``mass_threshold`` of its mass.
    """

    l_min: int
    l_max: int
    k_max: int
    mass_threshold: float


# -- distribution kernels (log space) ----------------------------------------


def _log_comb(n: int, k: int) -> float:
    if k < 0 or k > n:
        return -math.inf
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def poisson_pmf(k: int, rate: float) -> float:
    if rate < 0:
        raise ValueError("rate must be non-negative")
    if k < 0:
        return 0.0
    if rate == 0:
        return 1.0 if k == 0 else 0.0
    return math.exp(k * math.log(rate) - rate - math.lgamma(k + 1))


def poisson_cdf(k: int, rate: float) -> float:
    if k < 0:
        return 0.0
    return min(1.0, math.fsum(poisson_pmf(i, rate) for i in range(k + 1)))


def binomial_pmf(k: int, n: int, p: float) -> float:
    if n < 0 or not 0 <= p <= 1:
        raise ValueError("need n >= 0 and p in [0, 1]")
    if k < 0 or k > n:
        return 0.0
    if p == 0:
        return 1.0 if k == 0 else 0.0
    if p == 1:
        return 1.0 if k == n else 0.0
    return math.exp(
        _log_comb(n, k) + k * math.log(p) + (n - k) * math.log1p(-p)
    )


def hypergeom_pmf(k: int, total: int, tagged: int, draws: int) -> float:
    """Probability of k tagged items in ``draws`` picks without replacement."""
    if not 0 <= tagged <= total or not 0 <= draws <= total:
        raise ValueError("need 0 <= tagged, draws <= total")
    if k < max(0, draws - (total - tagged)) or k > min(tagged, draws):
        return 0.0
    return math.exp(
        _log_comb(tagged, k) + _log_comb(total - tagged, draws - k) - _log_comb(total, draws)
    )


def p_success_trial(reached: int, p_r: float) -> float:
    """Chance that at least one of ``reached`` independent contacts lands."""
    if reached < 0:
        raise ValueError("reached must be non-negative")
    if not 0 <= p_r <= 1:
        raise ValueError("p_r must lie in [0, 1]")
    if reached == 0:
        return 0.0
    if p_r == 1.0:
        return 1.0
    return -math.expm1(reached * math.log1p(-p_r))


# -- qualified-agent probability ---------------------------------------------


def _catalog_cap(population: int, skill_rate: float, mass_threshold: float) -> int:
    """Smallest catalog size covering ``mass_threshold`` of the max-count mass.

    The skill catalog is as large as the biggest per-agent Poisson count, so
    its cdf is the Poisson cdf raised to the population size.
    """
    k = 0
    while poisson_cdf(k, skill_rate) ** population < mass_threshold:
        k += 1
    return k


def _check_mass_threshold(mass_threshold: float) -> None:
    if not 0 < mass_threshold <= 1:
        raise ValueError("mass_threshold must lie in (0, 1]")


def p_lambda(
    skill_rate: float,
    vacancy_size: int,
    population: int,
    mass_threshold: float = 0.98,
) -> float:
    """Probability that one agent holds every skill of a random vacancy.

    Marginalizes over the catalog size (the maximum skill count among the
    population, summed up to the ``mass_threshold`` cap) and the agent's own
    Poisson skill count: an agent with k of K catalog skills covers a fixed
    vacancy of size v with probability C(k, v) / C(K, v).
    """
    if population < 1:
        raise ValueError("population must be at least 1")
    if skill_rate < 0:
        raise ValueError("skill_rate must be non-negative")
    if vacancy_size < 0:
        raise ValueError("vacancy_size must be non-negative")
    _check_mass_threshold(mass_threshold)
    cap = _catalog_cap(population, skill_rate, mass_threshold)
    total = 0.0
    prev = 0.0
    for catalog in range(cap + 1):
        cum = poisson_cdf(catalog, skill_rate) ** population
        weight = cum - prev
        prev = cum
        if catalog < vacancy_size or weight <= 0.0:
            continue
        log_denom = _log_comb(catalog, vacancy_size)
        inner = math.fsum(
            poisson_pmf(k, skill_rate)
            * math.exp(_log_comb(k, vacancy_size) - log_denom)
            for k in range(vacancy_size, catalog + 1)
        )
        total += weight * inner
    return total


def truncation_bounds(
    population: int,
    p_qualified: float,
    skill_rate: float,
    mass_threshold: float = 0.98,
) -> TruncationBounds:
    """Truncation window used by ``oracle_success_probability``."""
    if not 0 <= p_qualified <= 1:
        raise ValueError("p_qualified must lie in [0, 1]")
    _check_mass_threshold(mass_threshold)
    mean = population * p_qualified
    sd = math.sqrt(population * p_qualified * (1 - p_qualified))
    l_min = max(0, math.floor(mean - 2.5 * sd))
    l_max = min(population, math.ceil(mean + 2.5 * sd))
    k_max = _catalog_cap(population, skill_rate, mass_threshold)
    return TruncationBounds(l_min, l_max, k_max, mass_threshold)


def oracle_success_probability(spec: OracleSpec, mass_threshold: float = 0.98) -> float:
    """Chance the hub's direct posting produces at least one hire."""
    n = spec.population
    p_q = p_lambda(spec.skill_rate, spec.vacancy_size, n, mass_threshold)
    bounds = truncation_bounds(n, p_q, spec.skill_rate, mass_threshold)
    draws = round(spec.reach_fraction * n)

    total = 0.0
    for qualified in range(bounds.l_min, bounds.l_max + 1):
        outer = binomial_pmf(qualified, n, p_q)
        if outer == 0.0:
            continue
        lo = max(0, draws - (n - qualified))
        hi = min(qualified, draws)
        reached_terms = math.fsum(
            hypergeom_pmf(in_reach, n, qualified, draws)
            * p_success_trial(in_reach, spec.p_r)
            for in_reach in range(lo, hi + 1)
        )
        total += outer * reached_terms
    return min(1.0, total)


# -- simulation counterpart ---------------------------------------------------


def simulate_oracle(
    world: SkillWorld,
    reach_fraction: float,
    p_r: float,
    seed: int | np.random.SeedSequence,
) -> CascadeResult:
    """One stochastic trial of the hub posting, on the same skill world.

    Agent 0 acts as the hub: a directed star links it to round(reach_fraction
    * (n - 1)) uniformly chosen agents, and the cascade engine runs with
    application probability one and per-agent hiring given by full skill
    coverage. The hub seeds the run and never applies, so its own skills are
    unused. Successful runs always report chain length 2.
    """
    star_ss, run_ss = _spawn2(seed)
    star = generate_star(world.n, reach_fraction, star_ss)
    p_h = np.array([hiring_probability(s, world.vacancy) for s in world.agent_skills])
    params = IHCParams(p_r=p_r, p_a=1.0, p_h=p_h)
    return run_cascade(star, params, seeds=(0,), rng_seed=run_ss)


def _spawn2(seed: int | np.random.SeedSequence) -> list[np.random.SeedSequence]:
    if isinstance(seed, np.random.SeedSequence):
        return seed.spawn(2)
    return np.random.SeedSequence(seed).spawn(2)
