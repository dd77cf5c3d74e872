"""Skill-based agent heterogeneity.

A skill world fixes a shared catalog of skill ids, one skill set per agent,
and the set of skills a vacancy requires. Hiring is all-or-nothing: an
agent can be hired only if it holds every required skill. Application
propensity scales with the fraction of required skills the agent holds.
"""
from __future__ import annotations

import json
from collections.abc import Set
from dataclasses import dataclass

import numpy as np

from .cascade import IHCParams


@dataclass(frozen=True)
class SkillWorld:
    universe_size: int
    vacancy: frozenset[int]
    agent_skills: tuple[frozenset[int], ...]
    skill_rate: float  # Poisson mean of per-agent skill counts

    @property
    def n(self) -> int:
        return len(self.agent_skills)

    def to_json(self) -> str:
        return json.dumps(
            {
                "universe_size": self.universe_size,
                "skill_rate": self.skill_rate,
                "vacancy": sorted(self.vacancy),
                "agent_skills": [sorted(s) for s in self.agent_skills],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "SkillWorld":
        data = json.loads(text)
        return cls(
            universe_size=int(data["universe_size"]),
            vacancy=frozenset(data["vacancy"]),
            agent_skills=tuple(frozenset(s) for s in data["agent_skills"]),
            skill_rate=float(data["skill_rate"]),
        )


def sample_skill_world(n: int, skill_rate: float, vacancy_size: int, seed) -> SkillWorld:
    """Draw a fresh skill world for n agents.

    Per-agent skill counts are Poisson(skill_rate). The catalog size is the
    largest count observed (at least vacancy_size), fixed before any skill
    identities are drawn; identities are then distinct uniform picks from
    the catalog, for agents first and the vacancy last.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if skill_rate < 0:
        raise ValueError("skill_rate must be non-negative")
    if vacancy_size < 0:
        raise ValueError("vacancy_size must be non-negative")
    rng = np.random.default_rng(seed)
    counts = rng.poisson(skill_rate, size=n)
    universe = int(max(counts.max(), vacancy_size))
    skills = tuple(
        frozenset(rng.choice(universe, size=int(c), replace=False).tolist()) if c else frozenset()
        for c in counts
    )
    vacancy = (
        frozenset(rng.choice(universe, size=vacancy_size, replace=False).tolist())
        if vacancy_size
        else frozenset()
    )
    return SkillWorld(universe, vacancy, skills, float(skill_rate))


def hiring_probability(agent_skills: Set[int], vacancy: Set[int]) -> float:
    """1.0 when the agent holds every required skill, else 0.0."""
    return 1.0 if vacancy <= agent_skills else 0.0


def application_probability(agent_skills: Set[int], vacancy: Set[int]) -> float:
    """Fraction of required skills the agent holds; 1.0 for an empty vacancy."""
    if not vacancy:
        return 1.0
    return len(agent_skills & vacancy) / len(vacancy)


def bind_params(world: SkillWorld, p_r, max_steps: int | None = None) -> IHCParams:
    """Cascade parameters with per-agent application and hiring probabilities."""
    p_a = np.array([application_probability(s, world.vacancy) for s in world.agent_skills])
    p_h = np.array([hiring_probability(s, world.vacancy) for s in world.agent_skills])
    return IHCParams(p_r=p_r, p_a=p_a, p_h=p_h, max_steps=max_steps)
