"""Evolutionary engine: fitness accumulation, synchronous Fermi imitation,
mutation, and the well-mixed variant.

Each agent prices every interaction with its own audit-probability line (the
perception is subjective; under population diversity the anchors vary per
agent).  A step is synchronous: all imitation decisions are evaluated against
the pre-step strategy/fitness snapshot and applied at once, then mutation
independently redraws each agent's strategy with probability mu.

Randomness is consumed as fixed-shape blocks indexed by agent id, so the
outcome of a step does not depend on agent iteration order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DegenerateAnchors, InvalidParams, SizeMismatch
from .game import GameParams, Strategy
from .network import WeightedNetwork


@dataclass
class PopulationState:
    """Per-agent strategy, last computed fitness, and audit anchors.

    ``theta_anchors`` has shape (Z, 2): columns are each agent's values at the
    low and high both-defect mismatch amounts.  ``fitness`` always refers to
    the strategies of the previous step (it is what imitation saw last).
    """

    strategies: np.ndarray
    fitness: np.ndarray
    theta_anchors: np.ndarray
    step_index: int = 0

    @property
    def size(self) -> int:
        return len(self.strategies)

    def coop_frequency(self) -> float:
        return float(np.mean(self.strategies == Strategy.C))


def make_state(Z: int, init_coop_freq: float, params: GameParams,
               sigma: float = 0.0, rng=None) -> PopulationState:
    """Initial population: i.i.d. Bernoulli strategies and, when sigma > 0,
    per-agent anchors drawn from N(theta, sigma) clamped to [0, 1]."""
    if not (0.0 <= init_coop_freq <= 1.0):
        raise InvalidParams(f"init_coop_freq={init_coop_freq} must lie in [0, 1]")
    if sigma < 0.0:
        raise InvalidParams(f"sigma={sigma} must be >= 0")
    rng = np.random.default_rng(rng)
    strategies = np.where(rng.random(Z) < init_coop_freq,
                          np.int8(Strategy.C), np.int8(Strategy.D))
    base = np.array([params.theta_low, params.theta_high])
    if sigma == 0.0:
        anchors = np.tile(base, (Z, 1))
    else:
        anchors = np.clip(rng.normal(loc=base, scale=sigma, size=(Z, 2)), 0.0, 1.0)
    return PopulationState(strategies=strategies,
                           fitness=np.zeros(Z, dtype=np.float64),
                           theta_anchors=anchors,
                           step_index=0)


def theta_lines(params: GameParams, anchors: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-agent slope/intercept of the audit line through that agent's anchors."""
    x_lo = 2.0 * params.alpha * params.d_low
    x_hi = 2.0 * params.alpha * params.d_high
    lo = anchors[:, 0]
    hi = anchors[:, 1]
    if x_lo == x_hi:
        if np.any(lo != hi):
            raise DegenerateAnchors(
                "anchor x-values coincide (alpha*d_low == alpha*d_high) but "
                "per-agent anchor values differ")
        return np.zeros_like(lo), lo.copy()
    slope = (hi - lo) / (x_hi - x_lo)
    intercept = lo - slope * x_lo
    return slope, intercept


def _check_sizes(state: PopulationState, net: WeightedNetwork) -> None:
    if state.size != net.Z:
        raise SizeMismatch(f"state has {state.size} agents, network has {net.Z}")
    if len(state.fitness) != state.size or len(state.theta_anchors) != state.size:
        raise SizeMismatch("state arrays disagree in length")


def compute_fitness(state: PopulationState, net: WeightedNetwork,
                    params: GameParams) -> np.ndarray:
    """Degree-averaged payoff of every agent against its current neighbors.

    Isolated agents get fitness 0.
    """
    _check_sizes(state, net)
    if net.weights is None:
        raise InvalidParams("network must carry edge weights")
    slope, intercept = theta_lines(params, state.theta_anchors)
    indptr, indices, eweight = net.csr()
    out = np.empty(state.size, dtype=np.float64)
    _kernels.fitness_network(state.strategies, indptr, indices, eweight,
                             slope, intercept, params.R, params.Gamma,
                             params.phi, params.alpha, out)
    return out


def fermi_prob(f_i: float, f_j: float, beta: float) -> float:
    """Probability that the focal agent adopts the partner's strategy:
    1 / (1 + exp(-beta * (f_j - f_i))).  Saturates without overflow."""
    if beta <= 0.0:
        raise InvalidParams(f"beta={beta} must be > 0")
    if not (math.isfinite(f_i) and math.isfinite(f_j)):
        raise InvalidParams("fitness values must be finite")
    return float(_kernels._fermi(f_i, f_j, beta))


def step(state: PopulationState, net: WeightedNetwork, params: GameParams,
         rng) -> PopulationState:
    """One synchronous update: fitness, Fermi imitation against one random
    neighbor each, then mutation.  Isolated agents only mutate."""
    _check_sizes(state, net)
    fit = compute_fitness(state, net, params)
    z = state.size
    u = rng.random((4, z))
    indptr, indices, _ = net.csr()
    out = np.empty(z, dtype=np.int8)
    _kernels.imitate_network(state.strategies, fit, indptr, indices,
                             params.beta, params.mu,
                             u[0], u[1], u[2], u[3], out)
    return PopulationState(strategies=out, fitness=fit,
                           theta_anchors=state.theta_anchors,
                           step_index=state.step_index + 1)


def step_well_mixed(state: PopulationState, params: GameParams, rng,
                    n_partners: int = 4) -> PopulationState:
    """Well-mixed variant: fitness averages payoffs against n_partners agents
    sampled without replacement from the population, with per-interaction
    transaction sizes; the imitation partner is any random other agent."""
    z = state.size
    if not (1 <= n_partners < z):
        raise InvalidParams(f"n_partners={n_partners} must lie in [1, Z-1]")
    slope, intercept = theta_lines(params, state.theta_anchors)
    u_partner = rng.random((z, n_partners))
    u_weight = rng.random((z, n_partners))
    fit = np.empty(z, dtype=np.float64)
    _kernels.fitness_well_mixed(state.strategies, u_partner, u_weight,
                                params.prob_high, params.d_low, params.d_high,
                                slope, intercept, params.R, params.Gamma,
                                params.phi, params.alpha, fit)
    u = rng.random((4, z))
    out = np.empty(z, dtype=np.int8)
    _kernels.imitate_well_mixed(state.strategies, fit, params.beta, params.mu,
                                u[0], u[1], u[2], u[3], out)
    return PopulationState(strategies=out, fitness=fit,
                           theta_anchors=state.theta_anchors,
                           step_index=state.step_index + 1)


def write_trajectory(path, trajectory) -> None:
    """CSV with header step,coop_freq; one row per recorded step."""
    with open(path, "w", newline="\n") as f:
        f.write("step,coop_freq\n")
        for t, v in enumerate(trajectory):
            f.write(f"{t},{float(v)!r}\n")
