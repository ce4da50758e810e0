"""Polarized Rayleigh channel generation.

A channel realization is an M x N grid of 2x2 complex blocks; block (m, n) couples
the two polarization elements of receive antenna m to those of transmit antenna n.
Depolarization is controlled by the inverse discrimination ratio chi, antenna-side
leakage by the inverse isolation mu, and polarized correlation by a complex nu.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, InvalidParameterError
from .matkit import GaussianSource, sample_cscg


@dataclass
class ChannelParams:
    m_rx: int
    n_tx: int
    chi: float = 0.2
    mu_t: float = 0.0
    mu_r: float = 0.0
    nu_t: complex = 0.0
    nu_r: complex = 0.0

    def validate(self):
        if self.m_rx < 1 or self.n_tx < 1:
            raise InvalidParameterError("antenna counts must be at least 1")
        if not 0.0 <= self.chi <= 1.0:
            raise InvalidParameterError("chi must lie in [0, 1]")
        for mu in (self.mu_t, self.mu_r):
            if not 0.0 <= mu <= 1.0:
                raise InvalidParameterError("mu must lie in [0, 1]")
        for nu in (self.nu_t, self.nu_r):
            if abs(nu) > 1.0:
                raise InvalidParameterError("|nu| must not exceed 1")
        return self


@dataclass
class PolarizedChannel:
    """M x N grid of 2x2 blocks, stored as an (M, N, 2, 2) complex array."""

    blocks: np.ndarray = field(repr=False)

    def __post_init__(self):
        b = np.asarray(self.blocks, dtype=complex)
        if b.ndim != 4 or b.shape[2:] != (2, 2):
            raise InvalidInputError("blocks must have shape (M, N, 2, 2)")
        if not np.all(np.isfinite(b)):
            raise InvalidInputError("channel blocks contain non-finite entries")
        self.blocks = b

    @property
    def m_rx(self) -> int:
        return self.blocks.shape[0]

    @property
    def n_tx(self) -> int:
        return self.blocks.shape[1]

    def conj_transposed(self) -> "PolarizedChannel":
        """Reciprocal channel: block (n, m) is the conjugate transpose of block (m, n)."""
        return PolarizedChannel(np.conj(np.transpose(self.blocks, (1, 0, 3, 2))))


def depolarization_mask(chi: float) -> np.ndarray:
    """Per-block amplitude mask [[1, sqrt(chi)], [sqrt(chi), 1]] / sqrt(chi + 1)."""
    return np.array([[1.0, np.sqrt(chi)], [np.sqrt(chi), 1.0]]) / np.sqrt(chi + 1.0)


def generate(params: ChannelParams, src: GaussianSource) -> PolarizedChannel:
    """Draw one channel realization.

    Entries are i.i.d. CN(0, 1) before the depolarization mask; the mask keeps the
    average per-block row power at 1 for every chi. Antenna leakage and correlation
    transforms are applied afterwards when their parameters are nonzero. The number
    and order of random draws depends only on (m_rx, n_tx), so realizations with
    different chi/mu/nu from equal-seeded sources share the same fading.
    """
    params.validate()
    m, n = params.m_rx, params.n_tx
    h = sample_cscg(src, 2 * m, 2 * n, 1.0)
    blocks = h.reshape(m, 2, n, 2).transpose(0, 2, 1, 3) * depolarization_mask(params.chi)
    p = PolarizedChannel(blocks)
    if params.mu_t > 0 or params.mu_r > 0:
        p = apply_xpi(p, params.mu_t, params.mu_r)
    if params.nu_t != 0 or params.nu_r != 0:
        p = apply_correlation(p, params.nu_t, params.nu_r)
    return p


def psd_sqrt_2x2(w) -> np.ndarray:
    """Hermitian PSD square root of a 2x2 Hermitian PSD matrix."""
    w = np.asarray(w, dtype=complex)
    if w.shape != (2, 2):
        raise InvalidInputError("expected a 2x2 matrix")
    if not np.allclose(w, w.conj().T, atol=1e-12):
        raise InvalidInputError("matrix is not Hermitian")
    vals, vecs = np.linalg.eigh(w)
    if vals[0] < -1e-12:
        raise InvalidInputError("matrix is not positive semidefinite")
    return (vecs * np.sqrt(np.maximum(vals, 0.0))) @ vecs.conj().T


def _leakage_matrix(mu: float) -> np.ndarray:
    if not 0.0 <= mu <= 1.0:
        raise InvalidParameterError("mu must lie in [0, 1]")
    return np.array([[1.0, np.sqrt(mu)], [np.sqrt(mu), 1.0]]) / np.sqrt(mu + 1.0)


def _correlation_matrix(nu: complex) -> np.ndarray:
    if abs(nu) > 1.0:
        raise InvalidParameterError("|nu| must not exceed 1")
    return np.array([[1.0, np.conj(nu)], [nu, 1.0]]) / np.sqrt(abs(nu) ** 2 + 1.0)


def _sandwich(p: PolarizedChannel, left: np.ndarray, right: np.ndarray) -> PolarizedChannel:
    return PolarizedChannel(np.einsum("ac,mncd,db->mnab", left, p.blocks, right))


def apply_xpi(p: PolarizedChannel, mu_t: float, mu_r: float) -> PolarizedChannel:
    """Apply antenna cross-polar leakage: block -> X_r^(1/2) block X_t^(1/2)."""
    xr = psd_sqrt_2x2(_leakage_matrix(mu_r))
    xt = psd_sqrt_2x2(_leakage_matrix(mu_t))
    return _sandwich(p, xr, xt)


def apply_correlation(p: PolarizedChannel, nu_t: complex, nu_r: complex) -> PolarizedChannel:
    """Apply polarized correlation: block -> C_r^(1/2) block C_t^(1/2)."""
    cr = psd_sqrt_2x2(_correlation_matrix(nu_r))
    ct = psd_sqrt_2x2(_correlation_matrix(nu_t))
    return _sandwich(p, cr, ct)
