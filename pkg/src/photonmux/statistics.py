"""Photon-pair statistics of a heralded source and the threshold-detector heralding step.

A pumped nonlinear source emits photon pairs into each of ``n_windows`` time
windows; the pair number per window follows either a thermal or a Poissonian
distribution with per-window mean ``mean_pairs / n_windows``.  A threshold
detector with efficiency ``v_d`` watching the idler mode turns the emitted
distribution into the pair ``(p0, pj)``: the probability that a window gives
no click, and the joint probabilities that ``j`` signal photons enter the
multiplexer together with a click.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy.special import gammainc, gammaln

# Direct evaluation of factorials/powers below this k, log-space above.
_LOG_SPACE_K = 20

# Hard cap on the adaptive truncation order.
_J_CAP = 512

DEFAULT_TAIL_TOL = 1e-12


class TruncationError(ValueError):
    """Requested truncation order cannot push the distribution tail below tolerance.

    Carries the achieved tail bound in :attr:`tail_bound`.
    """

    def __init__(self, message: str, tail_bound: float):
        super().__init__(message)
        self.tail_bound = tail_bound


class SourceKind(Enum):
    THERMAL = "thermal"
    POISSONIAN = "poissonian"


@dataclass(frozen=True)
class PairSourceModel:
    """Pair-generation statistics of one source over a full period.

    Args:
        kind: thermal (single-mode emission) or Poissonian (multimode emission).
        mean_pairs: mean number of photon pairs summed over all time windows.
        n_windows: number of time windows the period is divided into.
    """

    kind: SourceKind
    mean_pairs: float
    n_windows: int

    def __post_init__(self):
        if not isinstance(self.kind, SourceKind):
            raise ValueError(f"kind must be a SourceKind, got {self.kind!r}")
        if not (math.isfinite(self.mean_pairs) and self.mean_pairs >= 0.0):
            raise ValueError(f"mean_pairs must be finite and >= 0, got {self.mean_pairs}")
        if self.n_windows < 1:
            raise ValueError(f"n_windows must be >= 1, got {self.n_windows}")

    @property
    def mean_per_window(self) -> float:
        return self.mean_pairs / self.n_windows


@dataclass(frozen=True)
class HeraldedInputDistribution:
    """Joint distribution of the signal photon number entering the multiplexer.

    ``p0`` is the no-click probability of a single window; ``pj[j-1]`` is the
    probability that the source emitted ``j`` pairs *and* the detector
    clicked, for ``j = 1 .. j_max``.  ``tail_bound`` is a certified upper
    bound on the heralded probability mass truncated beyond ``j_max``.
    """

    p0: float
    pj: np.ndarray
    j_max: int
    tail_bound: float

    def __post_init__(self):
        pj = np.asarray(self.pj, dtype=float)
        pj.setflags(write=False)
        object.__setattr__(self, "pj", pj)
        if self.j_max != pj.size or self.j_max < 1:
            raise ValueError(f"j_max={self.j_max} inconsistent with pj of size {pj.size}")
        if not (0.0 <= self.p0 <= 1.0) or np.any(pj < 0.0) or np.any(pj > 1.0):
            raise ValueError("probabilities must lie in [0, 1]")
        if self.tail_bound < 0.0:
            raise ValueError(f"tail_bound must be >= 0, got {self.tail_bound}")
        total = self.p0 + float(np.sum(pj)) + self.tail_bound
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"p0 + sum(pj) + tail_bound = {total!r} deviates from 1 beyond 1e-12")


def pair_distribution(model: PairSourceModel, k: int) -> float:
    """Probability that a single window emits exactly ``k`` photon pairs.

    Thermal: ``mu^k / (1 + mu)^(k+1)``; Poissonian: ``mu^k e^-mu / k!``,
    with ``mu`` the per-window mean pair number.
    """
    if k < 0:
        raise ValueError(f"pair count k must be >= 0, got {k}")
    mu = model.mean_per_window
    if mu == 0.0:
        return 1.0 if k == 0 else 0.0
    if model.kind is SourceKind.THERMAL:
        if k <= _LOG_SPACE_K:
            return mu**k / (1.0 + mu) ** (k + 1)
        return math.exp(k * math.log(mu) - (k + 1) * math.log1p(mu))
    if k <= _LOG_SPACE_K:
        return mu**k * math.exp(-mu) / math.factorial(k)
    return math.exp(k * math.log(mu) - mu - math.lgamma(k + 1))


def pair_pmf(model: PairSourceModel, k_max: int) -> np.ndarray:
    """Vector of emission probabilities for ``k = 0 .. k_max``."""
    if k_max < 0:
        raise ValueError(f"k_max must be >= 0, got {k_max}")
    mu = model.mean_per_window
    out = np.zeros(k_max + 1)
    if mu == 0.0:
        out[0] = 1.0
        return out
    k = np.arange(k_max + 1)
    lo = k[k <= _LOG_SPACE_K]
    hi = k[k > _LOG_SPACE_K]
    if model.kind is SourceKind.THERMAL:
        out[lo] = mu**lo / (1.0 + mu) ** (lo + 1)
        if hi.size:
            out[hi] = np.exp(hi * math.log(mu) - (hi + 1) * math.log1p(mu))
    else:
        fact = np.array([math.factorial(int(i)) for i in lo], dtype=float)
        out[lo] = mu**lo * math.exp(-mu) / fact
        if hi.size:
            out[hi] = np.exp(hi * math.log(mu) - mu - gammaln(hi + 1.0))
    return out


def emission_tail(model: PairSourceModel, j: int) -> float:
    """Exact probability that a window emits more than ``j`` pairs (closed form)."""
    if j < 0:
        raise ValueError(f"j must be >= 0, got {j}")
    mu = model.mean_per_window
    if mu == 0.0:
        return 0.0
    if model.kind is SourceKind.THERMAL:
        return math.exp((j + 1) * (math.log(mu) - math.log1p(mu)))
    return float(gammainc(j + 1.0, mu))


def _adaptive_j_max(model: PairSourceModel, tail_tol: float) -> tuple[int, float]:
    """Smallest j with emission tail below ``tail_tol`` (capped at 512), and that tail."""
    mu = model.mean_per_window
    if mu == 0.0:
        return 1, 0.0
    js = np.arange(1, _J_CAP + 1)
    if model.kind is SourceKind.THERMAL:
        tails = np.exp((js + 1) * (math.log(mu) - math.log1p(mu)))
    else:
        tails = gammainc(js + 1.0, mu)
    below = np.nonzero(tails < tail_tol)[0]
    if below.size == 0:
        raise TruncationError(
            f"emission tail {tails[-1]:.3e} beyond j={_J_CAP} exceeds tolerance {tail_tol:.1e}",
            tail_bound=float(tails[-1]),
        )
    j = int(js[below[0]])
    return j, float(tails[below[0]])


@lru_cache(maxsize=256)
def _click_probabilities(j_max: int, v_d: float) -> tuple[np.ndarray, np.ndarray]:
    """Click probability given j emitted pairs, summed form and closed form.

    Summed form: ``sum_{k=0}^{j-1} C(j, j-k) v_d^(j-k) (1-v_d)^k`` over the
    detected-idler patterns with at least one detection; closed form:
    ``1 - (1-v_d)^j``.  Both returned for the binomial-identity self-check.
    """
    js = np.arange(1, j_max + 1)
    closed = -np.expm1(js * math.log1p(-v_d)) if v_d < 1.0 else np.ones(j_max)
    if v_d == 0.0:
        summed = np.zeros(j_max)
    elif v_d == 1.0:
        summed = np.ones(j_max)
    else:
        jcol = js[:, None].astype(float)
        krow = np.arange(j_max)[None, :].astype(float)
        valid = krow < jcol
        with np.errstate(invalid="ignore"):
            logterm = (
                gammaln(jcol + 1.0)
                - gammaln(np.where(valid, jcol - krow, 1.0) + 1.0)
                - gammaln(krow + 1.0)
                + (jcol - krow) * math.log(v_d)
                + krow * math.log1p(-v_d)
            )
        summed = np.where(valid, np.exp(logterm), 0.0).sum(axis=1)
    summed.setflags(write=False)
    closed.setflags(write=False)
    return summed, closed


def herald_convolve(
    model: PairSourceModel,
    v_d: float,
    j_max: int | None = None,
    tail_tol: float = DEFAULT_TAIL_TOL,
) -> HeraldedInputDistribution:
    """Fold the emission distribution with a threshold detector of efficiency ``v_d``.

    Returns the no-click probability ``p0 = sum_k P'(k) (1-v_d)^k`` and the
    heralded-input probabilities ``pj``, computed via the summed detector
    convolution and verified on every call against the binomial-theorem
    closed form ``P'(j) (1 - (1-v_d)^j)`` at 1e-12.

    Args:
        model: pair-generation statistics.
        v_d: detector efficiency in [0, 1].
        j_max: truncation order; adaptively chosen when omitted.
        tail_tol: tolerated emission-tail mass beyond ``j_max``.

    Raises:
        TruncationError: the (given or capped) truncation order leaves a tail
            above ``tail_tol``.
    """
    if not (0.0 <= v_d <= 1.0):
        raise ValueError(f"v_d must lie in [0, 1], got {v_d}")
    if j_max is None:
        j_max, tail = _adaptive_j_max(model, tail_tol)
    else:
        if j_max < 1:
            raise ValueError(f"j_max must be >= 1, got {j_max}")
        tail = emission_tail(model, j_max)
        if tail > tail_tol:
            raise TruncationError(
                f"emission tail {tail:.3e} beyond j_max={j_max} exceeds tolerance {tail_tol:.1e}",
                tail_bound=tail,
            )
    if v_d == 0.0:
        # A blind detector never heralds: all mass sits at "no click".
        return HeraldedInputDistribution(p0=1.0, pj=np.zeros(j_max), j_max=j_max, tail_bound=0.0)
    pmf = pair_pmf(model, j_max)
    summed, closed = _click_probabilities(j_max, v_d)
    if np.max(np.abs(summed - closed)) > 1e-12:
        raise AssertionError("binomial-identity self-check failed in herald_convolve")
    # Deriving the no-click factors from the click probabilities keeps
    # p0 + sum(pj) + tail consistent to machine precision.
    miss = np.empty(j_max + 1)
    miss[0] = 1.0
    miss[1:] = 1.0 - closed
    p0 = float(np.sum(pmf * miss))
    pj = pmf[1:] * closed
    return HeraldedInputDistribution(p0=p0, pj=pj, j_max=j_max, tail_bound=tail)
