"""Net transmission of the bulk-optics combined multiplexer.

The device routes a heralded photon from time window ``n`` of spatial arm
``k`` to the common output.  Its survival probability factorizes as
``V[k, n] = V_arm(k) * V_window(n)``: the time multiplexer is a binary
division delay network whose PBS reflection/transmission count follows the
binary representation of the required delay, and the spatial multiplexer is
a binary tree of polarizing-beam-splitter routers whose arm losses follow the
binomial expansion of ``(v_r_s + v_t_s)^levels``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class PriorityLogic(Enum):
    """Rule selecting which heralded (arm, window) cell feeds the output."""

    LOWEST_LOSS = "lowest_loss"
    FIRST_DETECTION = "first_detection"


def _is_power_of_two(x: int) -> bool:
    return x >= 1 and (x & (x - 1)) == 0


@dataclass(frozen=True)
class LossParameters:
    """Transmission efficiencies of every optical element, each in [0, 1].

    ``v_r`` / ``v_t``: PBS reflection / transmission in the time multiplexer.
    ``v_r_s`` / ``v_t_s``: same for the spatial multiplexer; default to the
    time-multiplexer values (identical beam splitters).
    ``v_p``: propagation through the full delay medium of the time multiplexer.
    ``v_p0_s``: propagation per router level of the spatial multiplexer.
    ``v_b``: basic generic transmission (optical switches etc.).
    ``v_d``: heralding detector efficiency.
    """

    v_r: float
    v_t: float
    v_p: float
    v_p0_s: float
    v_d: float
    v_b: float = 1.0
    v_r_s: float | None = None
    v_t_s: float | None = None

    def __post_init__(self):
        if self.v_r_s is None:
            object.__setattr__(self, "v_r_s", self.v_r)
        if self.v_t_s is None:
            object.__setattr__(self, "v_t_s", self.v_t)
        for name in ("v_r", "v_t", "v_p", "v_p0_s", "v_d", "v_b", "v_r_s", "v_t_s"):
            value = getattr(self, name)
            if not (0.0 <= value <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class MultiplexerLayout:
    """Geometry and priority logic: ``m`` spatial arms, ``n`` time windows.

    The built-in transmission builders require ``m`` and ``n`` to be powers
    of two (binary-tree geometry); a layout with other sizes is accepted here
    and usable with an externally supplied transmission matrix.
    """

    m: int
    n: int
    logic: PriorityLogic = PriorityLogic.LOWEST_LOSS

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError(f"m and n must be >= 1, got m={self.m}, n={self.n}")
        if not isinstance(self.logic, PriorityLogic):
            raise ValueError(f"logic must be a PriorityLogic, got {self.logic!r}")


@dataclass(frozen=True)
class TransmissionMatrix:
    """Net transmissions ``values[k, n]``, rows ordered by descending arm transmission.

    Row index is the arm's priority rank (rank 0 = best arm); ``arm_order``
    records which arm of the canonical enumeration landed at each rank.
    """

    values: np.ndarray
    arm_order: tuple[int, ...]

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise ValueError(f"values must be a 2-D matrix, got shape {values.shape}")
        if np.any(values < 0.0) or np.any(values > 1.0):
            raise ValueError("transmission entries must lie in [0, 1]")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if len(self.arm_order) != values.shape[0]:
            raise ValueError("arm_order length must equal the number of arms")

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


def time_window_transmission(params: LossParameters, n: int, big_n: int) -> float:
    """Transmission for a photon heralded in window ``n`` of an ``big_n``-window delay network.

    The photon needs a delay of ``big_n - n`` window lengths; each set bit of
    that delay routes it through one reflection, each clear bit through one
    transmission, and propagation scales with the delay fraction:
    ``v_r^h * v_t^(levels-h) * v_p^((big_n-n)/big_n) * v_b`` with ``h`` the
    number of set bits (Hamming weight).
    """
    if not _is_power_of_two(big_n):
        raise ValueError(f"window count must be a power of 2, got {big_n}")
    if not 1 <= n <= big_n:
        raise ValueError(f"window index must lie in 1..{big_n}, got {n}")
    levels = big_n.bit_length() - 1
    delay = big_n - n
    h = delay.bit_count()
    return params.v_r**h * params.v_t ** (levels - h) * params.v_p ** (delay / big_n) * params.v_b


def _ranked_arms(params: LossParameters, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Sorted arm transmissions and the permutation from canonical enumeration."""
    if not _is_power_of_two(m):
        raise ValueError(f"arm count must be a power of 2, got {m}")
    levels = m.bit_length() - 1
    arms = np.empty(m)
    pos = 0
    for q in range(levels, -1, -1):
        mult = math.comb(levels, q)
        arms[pos : pos + mult] = params.v_r_s**q * params.v_t_s ** (levels - q)
        pos += mult
    order = np.argsort(-arms, kind="stable")
    return arms[order] * params.v_p0_s**levels, order


def spatial_arm_transmissions(params: LossParameters, m: int) -> np.ndarray:
    """Arm transmissions of an ``m``-input router tree, sorted descending.

    Each arm crosses ``levels = log2(m)`` beam splitters, ``q`` by reflection
    and ``levels - q`` by transmission; ``C(levels, q)`` arms share each
    value.  A common per-level propagation factor ``v_p0_s^levels`` applies.
    Sorting descending realizes the lowest-loss priority labeling whichever
    of ``v_r_s`` and ``v_t_s`` dominates; ties keep the canonical
    (descending-reflection-count) enumeration order.
    """
    values, _ = _ranked_arms(params, m)
    return values


def build_matrix(params: LossParameters, layout: MultiplexerLayout) -> TransmissionMatrix:
    """Assemble the full transmission matrix ``V[k, n] = V_arm(k) * V_window(n)``."""
    arm_values, order = _ranked_arms(params, layout.m)
    window_values = np.array(
        [time_window_transmission(params, n, layout.n) for n in range(1, layout.n + 1)]
    )
    return TransmissionMatrix(
        values=np.outer(arm_values, window_values),
        arm_order=tuple(int(i) for i in order),
    )
