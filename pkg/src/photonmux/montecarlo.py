"""Stochastic simulation of the multiplexer, independent of the analytic engine.

Every trial draws a pair count for each (arm, window) cell directly from the
source statistics, decides detector clicks photon by photon, applies the
priority rule to the clicked cells, and pushes each signal photon of the
selected cell through a Bernoulli loss channel.  Nothing is shared with the
series evaluation in :mod:`photonmux.engine`, so agreement between the two is
a genuine cross-check.

Trials are partitioned into fixed-size blocks, each driven by its own child
of ``numpy.random.SeedSequence(seed)``; results are therefore reproducible
bit for bit and blocks may be evaluated in any order (the block structure is
part of the random-stream definition).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import PhotonNumberDistribution
from .statistics import PairSourceModel, SourceKind
from .transmission import (
    LossParameters,
    MultiplexerLayout,
    PriorityLogic,
    TransmissionMatrix,
    build_matrix,
)

DEFAULT_BLOCK_SIZE = 1 << 20


@dataclass(frozen=True)
class TrialOutcome:
    """Result of one simulated period."""

    output_photons: int
    heralded_arm: int | None = None
    heralded_window: int | None = None

    def __post_init__(self):
        if (self.heralded_arm is None) != (self.heralded_window is None):
            raise ValueError("heralded_arm and heralded_window must be present together")
        if self.output_photons < 0:
            raise ValueError("output_photons must be >= 0")
        if self.heralded_arm is None and self.output_photons != 0:
            raise ValueError("a trial without heralding cannot emit photons")


def choose_heralded_cell(clicked: np.ndarray, logic: PriorityLogic) -> tuple[int, int] | None:
    """Apply the priority rule to a boolean (arm rank, window) click matrix.

    Lowest-loss: best-ranked arm first, earliest window within it.
    First-detection: earliest window first, best-ranked arm within it.
    """
    if not clicked.any():
        return None
    if logic is PriorityLogic.LOWEST_LOSS:
        arm = int(clicked.any(axis=1).argmax())
        window = int(clicked[arm].argmax())
    else:
        window = int(clicked.any(axis=0).argmax())
        arm = int(clicked[:, window].argmax())
    return arm, window


def _sample_pairs(model: PairSourceModel, rng: np.random.Generator, shape) -> np.ndarray:
    mu = model.mean_per_window
    if model.kind is SourceKind.THERMAL:
        return rng.geometric(1.0 / (1.0 + mu), size=shape) - 1
    return rng.poisson(mu, size=shape)


def run_trial(
    model: PairSourceModel,
    params: LossParameters,
    layout: MultiplexerLayout,
    rng: np.random.Generator,
    tm: TransmissionMatrix | None = None,
) -> TrialOutcome:
    """Simulate a single period, photon by photon (readable scalar path)."""
    if tm is None:
        tm = build_matrix(params, layout)
    pairs = _sample_pairs(model, rng, (layout.m, layout.n))
    clicked = rng.random((layout.m, layout.n)) < 1.0 - (1.0 - params.v_d) ** pairs
    cell = choose_heralded_cell(clicked, layout.logic)
    if cell is None:
        return TrialOutcome(output_photons=0)
    arm, window = cell
    survived = int(np.sum(rng.random(pairs[arm, window]) < tm.values[arm, window]))
    return TrialOutcome(output_photons=survived, heralded_arm=arm, heralded_window=window)


def _simulate_block(
    model: PairSourceModel,
    params: LossParameters,
    layout: MultiplexerLayout,
    tm: TransmissionMatrix,
    n_trials: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Photon-count histogram of one block of trials (vectorized)."""
    shape = (n_trials, layout.m, layout.n)
    pairs = _sample_pairs(model, rng, shape)
    clicked = rng.random(shape) < 1.0 - (1.0 - params.v_d) ** pairs
    heralded = clicked.any(axis=(1, 2))
    rows = np.arange(n_trials)
    if layout.logic is PriorityLogic.LOWEST_LOSS:
        arm = clicked.any(axis=2).argmax(axis=1)
        window = clicked[rows, arm].argmax(axis=1)
    else:
        window = clicked.any(axis=1).argmax(axis=1)
        arm = clicked[rows, :, window].argmax(axis=1)
    survivors = rng.binomial(pairs[rows, arm, window], tm.values[arm, window])
    survivors[~heralded] = 0
    return np.bincount(survivors)


def simulate(
    model: PairSourceModel,
    params: LossParameters,
    layout: MultiplexerLayout,
    trials: int,
    seed: int,
    tm: TransmissionMatrix | None = None,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> PhotonNumberDistribution:
    """Empirical output photon-number distribution over ``trials`` periods.

    Args:
        model: pair-generation statistics of each source.
        params: optical and detector efficiencies.
        layout: geometry and priority logic.
        trials: number of simulated periods (>= 1).
        seed: seed of the block-splitting random stream.
        tm: transmission matrix override; built from ``params`` when omitted.
        block_size: trials per random-stream block.

    Returns:
        Empirical distribution with per-bin binomial standard errors.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if tm is None:
        tm = build_matrix(params, layout)
    if tm.shape != (layout.m, layout.n):
        raise ValueError(
            f"transmission matrix of shape {tm.shape} does not match layout ({layout.m}, {layout.n})"
        )
    n_blocks = (trials + block_size - 1) // block_size
    streams = np.random.SeedSequence(seed).spawn(n_blocks)
    counts = np.zeros(1, dtype=np.int64)
    remaining = trials
    for stream in streams:
        block = min(block_size, remaining)
        hist = _simulate_block(model, params, layout, tm, block, np.random.default_rng(stream))
        if hist.size > counts.size:
            counts = np.concatenate([counts, np.zeros(hist.size - counts.size, dtype=np.int64)])
        counts[: hist.size] += hist
        remaining -= block
    probs = counts / trials
    std_err = np.sqrt(probs * (1.0 - probs) / trials)
    return PhotonNumberDistribution(
        probs=probs,
        i_max=counts.size - 1,
        tail_bound=0.0,
        std_err=std_err,
        trials=trials,
    )
