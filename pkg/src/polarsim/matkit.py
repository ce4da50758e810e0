"""Small dense complex linear-algebra helpers and a seedable complex-Gaussian source.

Everything here works on plain numpy arrays of modest size (the largest matrices in
this package are 2M x 2N with M, N <= ~16), so no sparse or out-of-core machinery.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, InvalidParameterError

RANK_TOL = 1e-12


def _check_finite(a, name="matrix"):
    a = np.asarray(a)
    if not np.all(np.isfinite(a)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return a


@dataclass
class SvdResult:
    """Truncated SVD: a = left_vectors @ diag(singular_values) @ right_vectors^H."""

    left_vectors: np.ndarray
    singular_values: np.ndarray
    right_vectors: np.ndarray


def svd(a) -> SvdResult:
    """Truncated SVD keeping singular values above RANK_TOL * largest.

    The rank cut-off keeps later water-filling away from numerically zero
    eigenmodes; for an exactly zero matrix the result has zero columns.
    """
    a = _check_finite(np.asarray(a, dtype=complex))
    if a.ndim != 2 or min(a.shape) < 1:
        raise InvalidInputError("svd expects a 2-D matrix with at least one row and column")
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    keep = s > RANK_TOL * (s[0] if s.size else 0.0)
    rank = int(np.count_nonzero(keep))
    return SvdResult(u[:, :rank], s[:rank], vh[:rank].conj().T)


def gram_trace(a) -> float:
    """Squared Frobenius norm Tr(A A^H)."""
    a = _check_finite(a)
    return float(np.sum(np.abs(a) ** 2))


class GaussianSource:
    """Deterministic source of circularly symmetric complex Gaussian samples.

    Child sources derived with ``child(*key)`` draw statistically independent
    streams; the derivation depends only on (master_seed, key), never on how many
    samples the parent has produced, so per-realization streams are reproducible
    under any execution order.
    """

    def __init__(self, master_seed: int, _seq: np.random.SeedSequence | None = None):
        self.master_seed = int(master_seed)
        self._seq = _seq if _seq is not None else np.random.SeedSequence(self.master_seed)
        self._rng = np.random.Generator(np.random.PCG64(self._seq))

    def child(self, *key: int) -> "GaussianSource":
        seq = np.random.SeedSequence(self.master_seed, spawn_key=tuple(int(k) for k in key))
        return GaussianSource(self.master_seed, _seq=seq)

    def uniform_phases(self, count: int) -> np.ndarray:
        return self._rng.uniform(0.0, 2.0 * np.pi, size=count)

    def sample(self, rows: int, cols: int, variance: float = 1.0) -> np.ndarray:
        return sample_cscg(self, rows, cols, variance)


def sample_cscg(src: GaussianSource, rows: int, cols: int, variance: float) -> np.ndarray:
    """Draw a rows x cols matrix of i.i.d. CN(0, variance) entries from src."""
    if variance <= 0:
        raise InvalidParameterError("variance must be positive")
    scale = np.sqrt(variance / 2.0)
    z = src._rng.standard_normal((rows, cols, 2))
    return scale * (z[..., 0] + 1j * z[..., 1])
