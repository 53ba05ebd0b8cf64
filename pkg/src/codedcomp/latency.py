"""Shifted-exponential straggler model for per-worker computation speed.

A worker needs alpha + E time units per full-size computation, where E is
exponential with rate mu and drawn once per worker per iteration (a slow
worker is slow for the whole iteration).  Finishing s computations therefore
takes s * (alpha + E), which yields a closed-form law for the number of
computations finished by any deadline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .blocks import CumulativeType


@dataclass(frozen=True)
class LatencyModel:
    """Per-computation latency alpha + Exp(mu)."""

    mu: float = 10.0
    alpha: float = 0.01

    def __post_init__(self) -> None:
        if self.mu <= 0 or self.alpha <= 0:
            raise ValueError(f"mu and alpha must be positive, got {self.mu}, {self.alpha}")

    def sample_unit_times(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Draw per-unit computation times for n workers."""
        return self.alpha + rng.exponential(1.0 / self.mu, n)


def sample_worker(model: LatencyModel, rng: np.random.Generator) -> float:
    """Draw one worker's per-unit computation time alpha + Exp(mu).

    Finishing s unit computations then takes s times this value.
    """
    return float(model.alpha + rng.exponential(1.0 / model.mu))


def prob_at_least(s: int, t: float, model: LatencyModel, task_cost: float = 1.0) -> float:
    """P(a worker finishes at least s tasks by time t); each task costs
    task_cost * (alpha + E)."""
    if s <= 0:
        return 1.0
    slack = t / (s * task_cost) - model.alpha
    if slack < 0:
        return 0.0
    return 1.0 - math.exp(-model.mu * slack)


def prob_exactly(
    s: int,
    t: float,
    model: LatencyModel,
    task_cost: float = 1.0,
    max_tasks: int | None = None,
) -> float:
    """P(a worker finishes exactly s tasks by time t).

    With max_tasks set, a worker stops after that many tasks, so the top
    count accumulates all faster outcomes; otherwise the worker keeps
    computing indefinitely.
    """
    if s < 0:
        return 0.0
    if max_tasks is not None:
        if s > max_tasks:
            return 0.0
        if s == max_tasks:
            return prob_at_least(s, t, model, task_cost)
    return prob_at_least(s, t, model, task_cost) - prob_at_least(s + 1, t, model, task_cost)


def type_probability(
    ctype: CumulativeType,
    t: float,
    model: LatencyModel,
    task_cost: float = 1.0,
) -> float:
    """Probability of one specific score vector of the given type at time t.

    Workers are independent, so the probability is the product over scores s
    of P(exactly s tasks by t) raised to the number of workers at score s.
    Multiply by the number of score vectors of the type to get the type's
    total probability.
    """
    prob = 1.0
    for s in range(ctype.max_score + 1):
        n = ctype.count_for_score(s)
        if n:
            p = prob_exactly(s, t, model, task_cost, max_tasks=ctype.max_score)
            if p == 0.0:
                return 0.0
            prob *= p**n
    return prob
