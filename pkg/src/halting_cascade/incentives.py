"""Geometric reward split along a successful recommendation chain.

The hired agent gets half the budget, the agent who recommended them a
quarter, and so on outward; whatever is left after the initial spreader is
the poster's surplus. Amounts are exact rationals so the split conserves
the budget for any chain length.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

_FLOAT_TOL = 1e-12


@dataclass(frozen=True)
class PayoutSchedule:
    budget: Fraction
    payouts: tuple[Fraction, ...]  # payouts[0] is the hired agent
    surplus: Fraction


def compute_payouts(chain_length: int, budget) -> PayoutSchedule:
    """Halving payouts for a chain of ``chain_length`` agents.

    Position i (0-based, hired agent first) receives budget / 2**(i+1); the
    surplus equals budget / 2**chain_length, so payouts plus surplus add up
    to the budget exactly.
    """
    if chain_length < 1:
        raise ValueError("chain_length must be at least 1")
    b = Fraction(budget)
    if b <= 0:
        raise ValueError("budget must be positive")
    payouts = tuple(b / 2 ** (i + 1) for i in range(chain_length))
    return PayoutSchedule(budget=b, payouts=payouts, surplus=b / 2**chain_length)


def surplus_to_length(surplus, budget=1) -> int:
    """Invert the split: recover the chain length from the leftover surplus.

    Accepts exact rationals or floats (floats matched within 1e-12).
    """
    s = Fraction(surplus)
    b = Fraction(budget)
    if b <= 0:
        raise ValueError("budget must be positive")
    ratio = s / b
    if not 0 < ratio <= Fraction(1, 2):
        raise ValueError("surplus must lie in (0, budget/2]")
    length = round(-math.log2(float(ratio)))
    if abs(float(ratio) - 2.0**-length) > _FLOAT_TOL:
        raise ValueError(f"surplus {surplus} is not budget/2**k for any integer k")
    return length
