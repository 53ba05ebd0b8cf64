"""Linear-regression training with partial gradient recovery.

The gradient of the least-squares loss L(theta) = (1/2n) * sum (y_i - x_i
theta)^2 factors through the Gram matrix: grad = (X'X theta - X'y) / n.
Splitting X'X row-wise into blocks turns each gradient block into one coded
computation, so an iteration can update exactly the coordinates whose blocks
the master recovered before stopping.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .blocks import DECODE_THRESHOLD, MODE_COMPUTATION, ComputationAssignment
from .latency import LatencyModel
from .simulate import simulate_iteration, trial_rng


@dataclass(frozen=True)
class Dataset:
    """Synthetic regression data drawn from a two-component Gaussian mixture."""

    x: np.ndarray
    y: np.ndarray
    theta_star: np.ndarray

    @property
    def n_samples(self) -> int:
        return self.x.shape[0]

    @property
    def dim(self) -> int:
        return self.x.shape[1]


def generate_dataset(
    n_samples: int,
    dim: int,
    rng: np.random.Generator,
    theta_star: np.ndarray | None = None,
    noise_std: float = 0.01,
) -> Dataset:
    """Draw a synthetic regression problem.

    The ground truth theta* has uniform [0, 1] entries (unless given).  Each
    sample comes from an equal mixture of N(mu, I) and N(-mu, I) with
    mu = (1.5 / dim) * theta*, and labels are y = x . theta* + noise.
    """
    if n_samples < 1 or dim < 1:
        raise ValueError("n_samples and dim must be positive")
    if theta_star is None:
        theta_star = rng.uniform(0.0, 1.0, dim)
    else:
        theta_star = np.asarray(theta_star, dtype=float)
        if theta_star.shape != (dim,):
            raise ValueError(f"theta_star must have shape ({dim},)")
    mu = (1.5 / dim) * theta_star
    signs = rng.integers(0, 2, n_samples) * 2 - 1
    x = rng.standard_normal((n_samples, dim)) + signs[:, None] * mu[None, :]
    y = x @ theta_star + noise_std * rng.standard_normal(n_samples)
    return Dataset(x=x, y=y, theta_star=theta_star)


def gram(dataset: Dataset) -> tuple[np.ndarray, np.ndarray]:
    """Precomputable pieces of the gradient: W = X'X and c = X'y."""
    return dataset.x.T @ dataset.x, dataset.x.T @ dataset.y


def loss(dataset: Dataset, theta: np.ndarray) -> float:
    """Mean squared residual halved: (1/2n) * sum (y_i - x_i theta)^2."""
    residual = dataset.y - dataset.x @ theta
    return float(residual @ residual / (2.0 * dataset.n_samples))


def partial_gd_step(
    theta: np.ndarray,
    recovered_mask: np.ndarray,
    block_values: Mapping[int, np.ndarray],
    c: np.ndarray,
    eta: float,
) -> np.ndarray:
    """Gradient step restricted to the recovered coordinate blocks.

    The parameter vector is split into len(recovered_mask) equal blocks.
    For every recovered block b (with supplied value (W theta)_b) the update
    theta_b - eta * ((W theta)_b - c_b) is applied; unrecovered blocks keep
    their current value bit-for-bit.

    Args:
        theta: current parameters.
        recovered_mask: boolean per-block recovery flags.
        block_values: block id -> recovered value of (W theta) on that block.
        c: precomputed X'y, same length as theta.
        eta: step size (scale by 1/n outside when W and c are unnormalized).

    Returns:
        Updated copy of theta.
    """
    theta = np.asarray(theta, dtype=float)
    recovered_mask = np.asarray(recovered_mask, dtype=bool)
    k_total = recovered_mask.shape[0]
    dim = theta.shape[0]
    if dim % k_total:
        raise ValueError(f"dimension {dim} not divisible into {k_total} blocks")
    rows = dim // k_total
    wanted = {int(b) for b in np.nonzero(recovered_mask)[0]}
    if set(block_values) != wanted:
        raise ValueError(
            f"block values {sorted(block_values)} do not match recovered "
            f"blocks {sorted(wanted)}"
        )
    out = theta.copy()
    for b in wanted:
        sl = slice(b * rows, (b + 1) * rows)
        value = np.asarray(block_values[b], dtype=float)
        if value.shape != (rows,):
            raise ValueError(f"block {b} value must have shape ({rows},)")
        out[sl] = theta[sl] - eta * (value - c[sl])
    return out


@dataclass
class TrainResult:
    """Per-iteration training trajectory."""

    losses: np.ndarray
    times: np.ndarray
    messages: np.ndarray
    recovered_fraction: np.ndarray
    theta: np.ndarray

    @property
    def total_time(self) -> float:
        return float(np.sum(self.times))


def train(
    dataset: Dataset,
    source: ComputationAssignment | Callable[[np.random.Generator], ComputationAssignment],
    q: float,
    model: LatencyModel,
    eta: float,
    iterations: int,
    seed: int,
) -> TrainResult:
    """Run gradient descent where each step waits only for a tolerated
    fraction of the gradient blocks.

    Every iteration redraws the assignment (when ``source`` is a factory),
    simulates the straggler race, and updates exactly the recovered blocks
    of theta using the true (W theta) values; unrecovered coordinates carry
    over unchanged.  theta starts at zero.

    Raises:
        ValueError: if the assignment is not a matrix-vector scheme (exact-
            sum coding recovers only the aggregated gradient, not blocks) or
            the dimension does not split evenly over the blocks.
    """
    if iterations < 1:
        raise ValueError("iterations must be positive")
    if eta <= 0:
        raise ValueError("eta must be positive")
    fixed = None if callable(source) else source
    probe = source(trial_rng(seed, 0)) if fixed is None else fixed
    if probe.decode == DECODE_THRESHOLD or probe.mode != MODE_COMPUTATION:
        raise ValueError(
            "training needs a matrix-vector scheme whose recovered blocks map "
            "to coordinate ranges; exact-sum/communication schemes do not"
        )
    k_total = probe.k_total
    if dataset.dim % k_total:
        raise ValueError(
            f"dimension {dataset.dim} not divisible into {k_total} blocks"
        )
    rows = dataset.dim // k_total
    w_full, c = gram(dataset)
    n = dataset.n_samples
    theta = np.zeros(dataset.dim)
    losses = np.empty(iterations)
    times = np.empty(iterations)
    messages = np.empty(iterations, dtype=int)
    fraction = np.empty(iterations)
    for it in range(iterations):
        rng = trial_rng(seed, it)
        assignment = source(rng) if fixed is None else fixed
        outcome = simulate_iteration(assignment, q, model, rng)
        w_theta = w_full @ theta
        blocks = {
            int(b): w_theta[int(b) * rows : (int(b) + 1) * rows]
            for b in np.nonzero(outcome.recovered_mask)[0]
        }
        theta = partial_gd_step(theta, outcome.recovered_mask, blocks, c, eta / n)
        losses[it] = loss(dataset, theta)
        times[it] = outcome.completion_time
        messages[it] = outcome.messages_received
        fraction[it] = outcome.recovered_count / k_total
    return TrainResult(
        losses=losses,
        times=times,
        messages=messages,
        recovered_fraction=fraction,
        theta=theta,
    )


def centralized_gd(dataset: Dataset, eta: float, iterations: int) -> TrainResult:
    """Reference full-gradient descent on the same objective."""
    w_full, c = gram(dataset)
    n = dataset.n_samples
    theta = np.zeros(dataset.dim)
    losses = np.empty(iterations)
    for it in range(iterations):
        theta = theta - (eta / n) * (w_full @ theta - c)
        losses[it] = loss(dataset, theta)
    return TrainResult(
        losses=losses,
        times=np.zeros(iterations),
        messages=np.zeros(iterations, dtype=int),
        recovered_fraction=np.ones(iterations),
        theta=theta,
    )
