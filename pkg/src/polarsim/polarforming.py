"""Phase-shifter polarization control and capacity objectives.

A transmit antenna radiates with polarization vector f(theta) = [1, e^{j theta}]/sqrt(2)
and a receive antenna combines with g(phi) = [1, e^{j phi}]; the combiner is applied
before the LNA, so g is deliberately unnormalized and its gain ||g||^2 = 2 is real
signal gain against per-chain noise. The effective M x N channel seen by the RF chains
has entries g(phi_m)^H P_mn f(theta_n).

Both optimizers alternate exact per-phase updates: the optimum of the quadratic
p(psi)^H W p(psi) over p(psi) = [1, e^{j psi}] is the angle of the lower-left entry
of W, which makes every coordinate update closed-form.
"""

from dataclasses import dataclass, field

import numpy as np

from .channel import PolarizedChannel
from .errors import InvalidInputError, UnsupportedConfigurationError
from .matkit import gram_trace, svd

TWO_PI = 2.0 * np.pi

# relative capacity-increase threshold and iteration cap shared by both optimizers
EPSILON = 1e-3
MAX_ITERATIONS = 20


@dataclass
class PhaseConfig:
    """Per-antenna phase shifts, reduced to [0, 2*pi) on construction."""

    theta: np.ndarray  # transmit, length N
    phi: np.ndarray    # receive, length M

    def __post_init__(self):
        self.theta = np.mod(np.asarray(self.theta, dtype=float), TWO_PI)
        self.phi = np.mod(np.asarray(self.phi, dtype=float), TWO_PI)


@dataclass
class WaterFillResult:
    powers: np.ndarray
    water_level: float
    inactive_count: int
    capacity_bits: float


@dataclass
class OptimizeResult:
    config: PhaseConfig
    covariance: np.ndarray = field(repr=False)
    rate_bits: float
    trace: np.ndarray
    iterations: int


def pfv_tx(theta: float) -> np.ndarray:
    """Unit-norm transmit polarization vector for phase shift theta."""
    return np.array([1.0, np.exp(1j * theta)]) / np.sqrt(2.0)


def pfv_rx(phi: float) -> np.ndarray:
    """Receive polarization vector [1, e^{j phi}] (combining gain 2, by design)."""
    return np.array([1.0, np.exp(1j * phi)])


def effective_channel(p: PolarizedChannel, cfg: PhaseConfig) -> np.ndarray:
    """M x N effective channel with entries g(phi_m)^H P_mn f(theta_n)."""
    if cfg.theta.shape != (p.n_tx,) or cfg.phi.shape != (p.m_rx,):
        raise InvalidInputError("phase vector lengths must match the antenna counts")
    f = np.stack([np.ones_like(cfg.theta, dtype=complex), np.exp(1j * cfg.theta)], axis=-1) / np.sqrt(2.0)
    g = np.stack([np.ones_like(cfg.phi, dtype=complex), np.exp(1j * cfg.phi)], axis=-1)
    return np.einsum("ma,mnab,nb->mn", g.conj(), p.blocks, f)


def siso_optimal_phase(b) -> float:
    """Receive phase maximizing |g(phi)^H b|^2 for a single incoming wave b.

    The maximizer aligns the combiner with the wave's polarization:
    phi = angle(b2) - angle(b1), achieving gain (|b1| + |b2|)^2. Zero entries
    fall back to the angle-of-zero-is-zero convention.
    """
    b = np.asarray(b, dtype=complex)
    if b.shape != (2,) or not np.all(np.isfinite(b)):
        raise InvalidInputError("expected a finite 2-vector")
    return float(np.mod(np.angle(b[1]) - np.angle(b[0]), TWO_PI))


def phase_argmax(w) -> float:
    """Phase maximizing p(psi)^H W p(psi) over p(psi) = [1, e^{j psi}], W Hermitian.

    The quadratic reduces to W11 + W22 + 2*Re(e^{-j psi} W21), maximized at
    psi = angle(W21). For W21 = 0 the objective is constant and 0 is returned.
    """
    w = np.asarray(w, dtype=complex)
    if w.shape != (2, 2):
        raise InvalidInputError("expected a 2x2 matrix")
    if not np.allclose(w, w.conj().T, atol=1e-10):
        raise InvalidInputError("matrix is not Hermitian")
    return float(np.mod(np.angle(w[1, 0]), TWO_PI))


def water_fill(singular_values, p_total: float, noise: float) -> WaterFillResult:
    """Allocate p_total across eigenmodes with gains lambda_s^2 / noise.

    Implements the standard iterative deactivation: solve for the common water
    level over the active set, drop the weakest stream while its power would be
    non-positive, repeat. Input singular values must be sorted descending.
    """
    lam = np.asarray(singular_values, dtype=float)
    if lam.size == 0 or lam[0] <= 0:
        raise InvalidInputError("need at least one positive singular value")
    if np.any(np.diff(lam) > 0):
        raise InvalidInputError("singular values must be sorted descending")
    if p_total <= 0 or noise <= 0:
        raise InvalidInputError("p_total and noise must be positive")

    floors = noise / lam**2  # power level at which stream s turns on
    active = lam.size
    while active > 0:
        water = (p_total + floors[:active].sum()) / active
        if water > floors[active - 1]:
            break
        active -= 1
    powers = np.concatenate([water - floors[:active], np.zeros(lam.size - active)])
    capacity = float(np.sum(np.log2(1.0 + powers[:active] * lam[:active] ** 2 / noise)))
    return WaterFillResult(powers, float(water), lam.size - active, capacity)


def mimo_capacity(h, p_total: float, noise: float):
    """Water-filled capacity of an effective channel and the achieving covariance.

    Returns (capacity_bits, Q) with Q = V diag(powers) V^H from the truncated SVD.
    A zero channel is the documented degenerate case: capacity 0 with Q = 0.
    """
    h = np.asarray(h, dtype=complex)
    n = h.shape[1]
    if not h.any():
        return 0.0, np.zeros((n, n), dtype=complex)
    dec = svd(h)
    wf = water_fill(dec.singular_values, p_total, noise)
    q = (dec.right_vectors * wf.powers) @ dec.right_vectors.conj().T
    return wf.capacity_bits, q


def capacity_upper_bound(h, noise: float, wf: WaterFillResult) -> float:
    """Jensen-style capacity bound from the channel energy and the water level.

    With S streams of which s_bar are inactive, the bound is
    S * log2( ||H||_F^2 * water / (S * noise) + s_bar / S ), tight when all
    singular values coincide and every stream is active.
    """
    s = wf.powers.size
    s_bar = wf.inactive_count
    return float(s * np.log2(gram_trace(h) * wf.water_level / (s * noise) + s_bar / s))


def _miso_iterate(blocks: np.ndarray, snr_linear: float):
    """Alternating phase optimization for one receive antenna (blocks: (1, N, 2, 2))."""
    n = blocks.shape[1]
    theta = np.zeros(n)
    phi = np.zeros(1)

    def row(th, ph):
        f = np.stack([np.ones(n, dtype=complex), np.exp(1j * th)], axis=-1) / np.sqrt(2.0)
        g = np.array([1.0, np.exp(1j * ph[0])])
        return np.einsum("a,nab,nb->n", g.conj(), blocks[0], f)

    def rate(th, ph):
        h = row(th, ph)
        return float(np.log2(1.0 + snr_linear * np.sum(np.abs(h) ** 2)))

    trace = [rate(theta, phi)]
    for _ in range(MAX_ITERATIONS):
        # receive phase against the current transmit phases
        f = np.stack([np.ones(n, dtype=complex), np.exp(1j * theta)], axis=-1) / np.sqrt(2.0)
        pf = np.einsum("nab,nb->na", blocks[0], f)
        a = np.einsum("na,nb->ab", pf, pf.conj())
        phi = np.array([phase_argmax(a)])
        # transmit phases against the fresh receive phase
        g = np.array([1.0, np.exp(1j * phi[0])])
        gp = np.einsum("a,nab->nb", g.conj(), blocks[0])
        # adjoint product: the per-antenna wave vector is conj(g^H P), so the
        # aligning angle is angle(u1 * conj(u2)) for u = g^H P
        theta = np.mod(np.angle(gp[:, 0] * gp[:, 1].conj()), TWO_PI)
        c = rate(theta, phi)
        grew = (c - trace[-1]) / max(trace[-1], 1e-12)
        trace.append(c)
        if grew < EPSILON:
            break
    h = row(theta, phi)
    return theta, phi, h, np.array(trace)


def optimize_miso_simo(p: PolarizedChannel, snr_linear: float) -> OptimizeResult:
    """Alternating polarization optimization when one side has a single antenna.

    MISO (M = 1): maximizes the channel power ||h||^2; the returned covariance is
    the maximum-ratio rank-1 matrix. SIMO (N = 1) is solved on the reciprocal
    channel with the roles of the two phase vectors exchanged; its covariance is
    the scalar full-power allocation. Capacity trace entries are bits/s/Hz at
    noise power 1, so snr_linear doubles as the transmit power.
    """
    if p.m_rx > 1 and p.n_tx > 1:
        raise UnsupportedConfigurationError("one side must have a single antenna")
    if p.m_rx == 1:
        theta, phi, h, trace = _miso_iterate(p.blocks, snr_linear)
        hv = h.reshape(-1, 1)
        q = snr_linear * (hv @ hv.conj().T) / float(np.sum(np.abs(hv) ** 2))
        cfg = PhaseConfig(theta, phi)
    else:
        theta_r, phi_r, _, trace = _miso_iterate(p.conj_transposed().blocks, snr_linear)
        q = np.array([[snr_linear]], dtype=complex)
        cfg = PhaseConfig(theta=phi_r, phi=theta_r)
    return OptimizeResult(cfg, q, float(trace[-1]), trace, len(trace) - 1)


def optimize_single_sided(p: PolarizedChannel, fixed_rx=None, fixed_tx=None) -> PhaseConfig:
    """One-shot optimal phases when the other link end has one fixed antenna.

    With a fixed receive vector (transmit-side optimization, M = 1) each transmit
    phase maximizes its own summand of ||h||^2 independently, so the closed form
    is exact; symmetrically for a fixed transmit vector (N = 1).
    """
    if (fixed_rx is None) == (fixed_tx is None):
        raise InvalidInputError("exactly one of fixed_rx/fixed_tx must be given")
    if fixed_rx is not None:
        if p.m_rx != 1:
            raise InvalidInputError("transmit-side optimization expects a single receive antenna")
        v = np.asarray(fixed_rx, dtype=complex)
        if v.shape != (2,):
            raise InvalidInputError("fixed vector must have two entries")
        b = np.einsum("nba,b->na", p.blocks[0].conj(), v)  # P^H g per transmit antenna
        theta = np.mod(np.angle(b[:, 1] * b[:, 0].conj()), TWO_PI)
        return PhaseConfig(theta=theta, phi=np.zeros(1))
    if p.n_tx != 1:
        raise InvalidInputError("receive-side optimization expects a single transmit antenna")
    v = np.asarray(fixed_tx, dtype=complex)
    if v.shape != (2,):
        raise InvalidInputError("fixed vector must have two entries")
    b = np.einsum("mab,b->ma", p.blocks[:, 0], v)  # P f per receive antenna
    phi = np.mod(np.angle(b[:, 1] * b[:, 0].conj()), TWO_PI)
    return PhaseConfig(theta=np.zeros(1), phi=phi)


def optimize_mimo(p: PolarizedChannel, snr_linear: float) -> OptimizeResult:
    """Alternating per-antenna phase updates with water-filled capacity tracking.

    Starting from all-zero phases (linear polarization at both ends), each
    iteration updates every receive phase and then every transmit phase through
    the closed-form argmax, evaluates the water-filled capacity, and stops when
    the relative increase drops below EPSILON, reverting to the previous iterate
    so the reported configuration is never worse than what preceded it. The trace
    records the accepted capacity sequence starting with the initialization.
    """
    m, n = p.m_rx, p.n_tx
    blocks = p.blocks
    theta = np.zeros(n)
    phi = np.zeros(m)

    def evaluate(th, ph):
        return mimo_capacity(effective_channel(p, PhaseConfig(th, ph)), snr_linear, 1.0)

    cap, q = evaluate(theta, phi)
    trace = [cap]
    for _ in range(MAX_ITERATIONS):
        new_phi = phi.copy()
        f = np.stack([np.ones(n, dtype=complex), np.exp(1j * theta)], axis=-1) / np.sqrt(2.0)
        pf = np.einsum("mnab,nb->mna", blocks, f)
        for i in range(m):
            a_i = np.einsum("na,nb->ab", pf[i], pf[i].conj())
            new_phi[i] = phase_argmax(a_i)
        new_theta = theta.copy()
        g = np.stack([np.ones(m, dtype=complex), np.exp(1j * new_phi)], axis=-1)
        gp = np.einsum("ma,mnab->mnb", g.conj(), blocks)
        for j in range(n):
            b_j = np.einsum("ma,mb->ab", gp[:, j].conj(), gp[:, j])
            new_theta[j] = phase_argmax(b_j)
        new_cap, new_q = evaluate(new_theta, new_phi)
        if (new_cap - cap) / max(cap, 1e-12) < EPSILON:
            break  # keep the previous iterate
        theta, phi, cap, q = new_theta, new_phi, new_cap, new_q
        trace.append(cap)
    return OptimizeResult(PhaseConfig(theta, phi), q, cap, np.array(trace), len(trace) - 1)
