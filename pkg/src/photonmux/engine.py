"""Exact output photon-number distribution of the combined multiplexer.

For a heralded input ``(p0, pj)`` per (arm, window) cell and net transmissions
``V[k, n]``, the probability of ``i`` output photons is

    P(i) = p0^(M*N) [i = 0]
         + sum_{j,k,n}  C(j, i) W(k, n) pj[j] V[k,n]^i (1 - V[k,n])^(j-i)

where the priority weight ``W(k, n)`` is ``p0^(N*k + n)`` for the lowest-loss
logic (the best-ranked heralded arm wins at the period's end) and
``p0^(M*n + k)`` for the first-detection logic (the earliest heralded window
wins), with 0-based ``k`` and ``n``.  Both weightings enumerate the exponents
``0 .. M*N-1`` exactly once, which makes the distribution normalize by a
geometric telescoping argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.special import gammaln

from .statistics import HeraldedInputDistribution
from .transmission import MultiplexerLayout, PriorityLogic, TransmissionMatrix

# Binomial coefficients evaluated directly up to this truncation order,
# in log-space beyond (avoids overflow of C(j, i) at large j).
_DIRECT_COMB_J = 30

DEFAULT_I_MAX = 10


@dataclass(frozen=True)
class PhotonNumberDistribution:
    """Truncated photon-number probabilities with a certified tail bound.

    ``probs[i]`` is the probability of ``i`` output photons for
    ``i = 0 .. i_max``; ``tail_bound`` bounds the mass beyond ``i_max``
    (including any truncation of the input distribution).  Empirical
    distributions from the Monte-Carlo sampler also carry a per-bin binomial
    standard error and the trial count.
    """

    probs: np.ndarray
    i_max: int
    tail_bound: float
    std_err: np.ndarray | None = None
    trials: int | None = None

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        if probs.size != self.i_max + 1:
            raise ValueError(f"probs size {probs.size} inconsistent with i_max={self.i_max}")
        if np.any(probs < 0.0) or np.any(probs > 1.0):
            raise ValueError("probabilities must lie in [0, 1]")
        if self.tail_bound < 0.0:
            raise ValueError(f"tail_bound must be >= 0, got {self.tail_bound}")
        total = float(np.sum(probs)) + self.tail_bound
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"sum(probs) + tail_bound = {total!r} deviates from 1 beyond 1e-10")
        if self.std_err is not None:
            std_err = np.asarray(self.std_err, dtype=float)
            std_err.setflags(write=False)
            object.__setattr__(self, "std_err", std_err)
            if std_err.size != probs.size:
                raise ValueError("std_err must have one entry per probability bin")


def priority_weights(p0: float, layout: MultiplexerLayout) -> np.ndarray:
    """Selection weight of each (arm rank, window) cell under the layout's logic."""
    exponents = np.arange(layout.m * layout.n)
    powers = np.power(p0, exponents)
    if layout.logic is PriorityLogic.FIRST_DETECTION:
        return powers.reshape(layout.n, layout.m).T
    return powers.reshape(layout.m, layout.n)


def _shifted_coeffs(pj: np.ndarray, i: int) -> np.ndarray:
    """Coefficients c[t] = C(t+i, i) pj[t+i] of the series sum_j C(j,i) pj[j] x^(j-i)."""
    j_max = pj.size
    if i == 0:
        c = np.zeros(j_max + 1)
        c[1:] = pj
        return c
    if i > j_max:
        return np.zeros(1)
    js = np.arange(i, j_max + 1)
    tail = pj[i - 1 :]
    if j_max <= _DIRECT_COMB_J:
        comb = np.array([math.comb(int(j), i) for j in js], dtype=float)
        return comb * tail
    log_comb = gammaln(js + 1.0) - gammaln(js - i + 1.0) - math.lgamma(i + 1)
    positive = tail > 0.0
    out = np.zeros(js.size)
    out[positive] = np.exp(log_comb[positive] + np.log(tail[positive]))
    return out


def _check_dimensions(tm: TransmissionMatrix, layout: MultiplexerLayout) -> None:
    if tm.shape != (layout.m, layout.n):
        raise ValueError(
            f"transmission matrix of shape {tm.shape} does not match layout ({layout.m}, {layout.n})"
        )


def output_distribution(
    heralded: HeraldedInputDistribution,
    tm: TransmissionMatrix,
    layout: MultiplexerLayout,
    i_max: int = DEFAULT_I_MAX,
) -> PhotonNumberDistribution:
    """Photon-number distribution at the multiplexer output, truncated at ``i_max``.

    Args:
        heralded: per-window heralded input statistics.
        tm: net transmission matrix; any externally built matrix of matching
            shape is accepted, the rows being taken as the arm priority order.
        layout: geometry and priority logic.
        i_max: largest photon number evaluated; must not exceed the input's
            truncation order ``j_max``.

    The returned ``tail_bound`` certifies both the output truncation at
    ``i_max`` and the propagated input truncation at ``j_max``.
    """
    _check_dimensions(tm, layout)
    if i_max < 1:
        raise ValueError(f"i_max must be >= 1, got {i_max}")
    p0 = heralded.p0
    cells = layout.m * layout.n
    if p0 >= 1.0:
        # No window ever heralds: vacuum output, exactly.
        probs = np.zeros(i_max + 1)
        probs[0] = 1.0
        return PhotonNumberDistribution(probs=probs, i_max=i_max, tail_bound=0.0)
    if heralded.j_max < i_max:
        raise ValueError(f"input truncated at j_max={heralded.j_max} cannot resolve i_max={i_max}")
    weights = priority_weights(p0, layout).ravel()
    v = tm.values.ravel()
    x = 1.0 - v
    probs = np.empty(i_max + 1)
    v_pow = np.ones(cells)
    for i in range(i_max + 1):
        series = npoly.polyval(x, _shifted_coeffs(heralded.pj, i))
        probs[i] = np.dot(weights, v_pow * series)
        v_pow = v_pow * v
    p0_all = p0**cells
    probs[0] += p0_all
    # Mass accounting: everything the truncated sums can reach, minus what
    # landed in probs, is output-truncation mass; the input truncation adds
    # at most sum(W) * tail_bound.
    weight_sum = float(np.sum(weights))
    included = p0_all + weight_sum * float(np.sum(heralded.pj))
    output_truncated = max(included - float(np.sum(probs)), 0.0)
    tail_bound = output_truncated + weight_sum * heralded.tail_bound
    return PhotonNumberDistribution(
        probs=np.clip(probs, 0.0, 1.0), i_max=i_max, tail_bound=tail_bound
    )


def single_photon_probability(
    heralded: HeraldedInputDistribution,
    tm: TransmissionMatrix,
    layout: MultiplexerLayout,
) -> float:
    """P(exactly one output photon); equals ``output_distribution(...).probs[1]``.

    Evaluates only the i = 1 term, which is the optimization objective.
    """
    _check_dimensions(tm, layout)
    p0 = heralded.p0
    if p0 >= 1.0:
        return 0.0
    weights = priority_weights(p0, layout).ravel()
    v = tm.values.ravel()
    series = npoly.polyval(1.0 - v, _shifted_coeffs(heralded.pj, 1))
    return float(np.dot(weights, v * series))
