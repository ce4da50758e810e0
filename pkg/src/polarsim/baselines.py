"""Benchmark transmission schemes for polarized links.

Each scheme fixes or adapts the per-antenna polarization vectors in a
different way; all rates come from the same water-filling capacity so the
schemes are directly comparable:

* dual-polarized: both orthogonal ports of every antenna drive separate RF
  chains, so the full element-level matrix is used (upper benchmark),
* switched: each antenna selects one of the two circular polarizations,
* rotated: each antenna applies a real rotation angle (linear polarization
  of adjustable orientation),
* fixed circular / fixed linear: the same hard-wired vector everywhere.
"""

import enum
from dataclasses import dataclass

import numpy as np

from . import _engine
from .channel import PolarizedChannel
from .errors import InvalidInputError
from .polarforming import mimo_capacity


class SchemeId(enum.Enum):
    POLARFORMING = "pf"
    DUAL_POLARIZED = "dpa"
    SWITCHED = "spra"
    ROTATED = "paa"
    FIXED_CIRCULAR = "cpa"
    FIXED_LINEAR = "lpa"


@dataclass(frozen=True)
class PolarizationVectorPair:
    """A fixed transmit/receive polarization vector pair.

    The transmit vector must have unit norm (it carries the power constraint);
    the receive vector is a combining vector and may have any nonzero norm.
    """

    p_tx: np.ndarray
    p_rx: np.ndarray

    def __post_init__(self):
        p_tx = np.asarray(self.p_tx, dtype=complex)
        p_rx = np.asarray(self.p_rx, dtype=complex)
        if p_tx.shape != (2,) or p_rx.shape != (2,):
            raise InvalidInputError("polarization vectors must have shape (2,)")
        if abs(np.linalg.norm(p_tx) - 1.0) > 1e-9:
            raise InvalidInputError("transmit polarization vector must have unit norm")
        object.__setattr__(self, "p_tx", p_tx)
        object.__setattr__(self, "p_rx", p_rx)


CPA_PAIR = PolarizationVectorPair(
    p_tx=np.array([1.0, 1.0j]) / np.sqrt(2.0), p_rx=np.array([1.0, 1.0j])
)
LPA_PAIR = PolarizationVectorPair(p_tx=np.array([1.0, 0.0]), p_rx=np.array([1.0, 0.0]))


def _batch(channel):
    return channel.blocks[None, ...]


def dpa_capacity(channel: PolarizedChannel, power, noise_power=1.0):
    """Capacity with every polarization port on its own RF chain.

    The (M, N) grid of 2x2 blocks is flattened to a 2M x 2N element-level
    matrix and water-filled directly.
    """
    h = _engine.full_matrix(_batch(channel))[0]
    capacity, _ = mimo_capacity(h, power, noise_power)
    return capacity


def fpa_rate(channel: PolarizedChannel, pair: PolarizationVectorPair, power, noise_power=1.0):
    """Rate with the same fixed polarization vector pair at every antenna."""
    if not isinstance(pair, PolarizationVectorPair):
        pair = PolarizationVectorPair(*pair)
    caps = _engine.fixed_pair_capacities(_batch(channel), pair.p_tx, pair.p_rx, power, noise_power)
    return float(caps[0])


def spra_optimize(channel: PolarizedChannel, power, noise_power=1.0):
    """Greedy per-antenna selection between the two circular polarizations.

    Starting from all antennas left-handed, sweeps receive antennas then
    transmit antennas, flipping a state whenever that strictly increases
    capacity, and repeats until a sweep makes no change. Returns
    ((s_rx, s_tx), capacity) with states in {+1, -1}; state +1 is the
    left-handed vector [1, j] (transmit side scaled to unit norm).
    """
    s_rx, s_tx, caps = _engine.switched_capacities(_batch(channel), power, noise_power)
    return (s_rx[0].astype(int), s_tx[0].astype(int)), float(caps[0])


def paa_optimize(channel: PolarizedChannel, power, noise_power=1.0):
    """Alternating per-antenna polarization-rotation optimization.

    Each antenna's vector is [cos a, sin a] for a real angle a in [0, pi).
    Receive angles and transmit angles are updated in closed form from the
    2x2 quadratic form each antenna sees; an update round that improves
    capacity by less than a 1e-3 relative factor is discarded and iteration
    stops. Returns ((alpha_tx, beta_rx), capacity).
    """
    alpha, beta, caps = _engine.rotated_capacities(_batch(channel), power, noise_power)
    return (alpha[0], beta[0]), float(caps[0])


def scheme_rate(channel: PolarizedChannel, scheme: SchemeId, power, noise_power=1.0):
    """Single-channel rate under a benchmark scheme (adaptive schemes optimized)."""
    if scheme is SchemeId.DUAL_POLARIZED:
        return dpa_capacity(channel, power, noise_power)
    if scheme is SchemeId.SWITCHED:
        return spra_optimize(channel, power, noise_power)[1]
    if scheme is SchemeId.ROTATED:
        return paa_optimize(channel, power, noise_power)[1]
    if scheme is SchemeId.FIXED_CIRCULAR:
        return fpa_rate(channel, CPA_PAIR, power, noise_power)
    if scheme is SchemeId.FIXED_LINEAR:
        return fpa_rate(channel, LPA_PAIR, power, noise_power)
    raise InvalidInputError(f"scheme {scheme!r} has no fixed-rate evaluator")
