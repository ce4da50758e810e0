"""Vectorized evaluators used by the experiment runner.

Every function here processes a whole batch of channel realizations at once,
with the realization index as the leading axis of a blocks array of shape
(R, M, N, 2, 2). Results are bit-for-bit equal to looping the public
single-channel operations; the test suite pins that equivalence.
"""

import numpy as np

from .polarforming import EPSILON, MAX_ITERATIONS, TWO_PI

_FLIP_SLACK = 1e-12  # strict-improvement margin for discrete state flips


def f_of(theta):
    """Transmit polarization vectors for a (..., N) array of phases."""
    return np.stack([np.ones_like(theta, dtype=complex), np.exp(1j * theta)], axis=-1) / np.sqrt(2.0)


def g_of(phi):
    return np.stack([np.ones_like(phi, dtype=complex), np.exp(1j * phi)], axis=-1)


def effective(blocks, theta, phi):
    """Batched effective channels: (R, M, N) from (R, N) and (R, M) phases."""
    return np.einsum("rma,rmnab,rnb->rmn", g_of(phi).conj(), blocks, f_of(theta))


def _eigvals_gram(h):
    """Descending eigenvalues of H H^H (or H^H H, whichever is smaller)."""
    r, m, n = h.shape
    if m <= n:
        gram = np.einsum("rmn,rkn->rmk", h, h.conj())
    else:
        gram = np.einsum("rmn,rmk->rnk", h.conj(), h)
    if gram.shape[1] == 1:
        lam = gram[:, 0, 0].real.reshape(r, 1)
    elif gram.shape[1] == 2:
        # closed-form 2x2 Hermitian eigenvalues; faster than eigvalsh per batch
        tr = gram[:, 0, 0].real + gram[:, 1, 1].real
        det = (gram[:, 0, 0].real * gram[:, 1, 1].real) - np.abs(gram[:, 0, 1]) ** 2
        disc = np.sqrt(np.maximum(tr * tr - 4.0 * det, 0.0))
        lam = np.stack([(tr + disc) / 2.0, (tr - disc) / 2.0], axis=-1)
    else:
        lam = np.linalg.eigvalsh(gram)[:, ::-1]
    return np.maximum(lam, 0.0)


def waterfill_capacities(h, p_total, noise):
    """Water-filled capacity per realization for (R, M, N) effective channels."""
    lam2 = _eigvals_gram(h)
    tol = 1e-24 * np.maximum(lam2[:, :1], 1e-300)
    with np.errstate(divide="ignore"):
        floors = np.where(lam2 > tol, noise / lam2, np.inf)
    counts = np.arange(1, lam2.shape[1] + 1)
    water = (p_total + np.cumsum(np.where(np.isfinite(floors), floors, 0.0), axis=1)) / counts
    feasible = (water > floors) & np.isfinite(floors)
    # the feasible prefix is contiguous; take its largest k
    active = np.maximum(feasible.sum(axis=1), 1)
    idx = active - 1
    level = np.take_along_axis(water, idx[:, None], axis=1)
    ratio = np.where(np.arange(lam2.shape[1]) < active[:, None], level * lam2 / noise, 1.0)
    caps = np.sum(np.log2(np.maximum(ratio, 1.0)), axis=1)
    return np.where(lam2[:, 0] > 0, caps, 0.0)


def miso_capacities(h, p_total, noise):
    """Rank-1 capacity log2(1 + P ||h||^2 / noise) for (R, M, N) with min side 1."""
    return np.log2(1.0 + p_total * np.sum(np.abs(h) ** 2, axis=(1, 2)) / noise)


# ---------------------------------------------------------------------------
# adaptive-polarization optimizers


def alternate_miso(blocks, p_total, noise, theta0=None, phi0=None):
    """Batched alternating updates for (R, 1, N, 2, 2) blocks; returns (theta, phi, caps)."""
    r, _, n = blocks.shape[:3]
    theta = np.zeros((r, n)) if theta0 is None else np.array(theta0, dtype=float)
    phi = np.zeros((r, 1)) if phi0 is None else np.array(phi0, dtype=float)
    caps = miso_capacities(effective(blocks, theta, phi), p_total, noise)
    active = np.ones(r, dtype=bool)
    for _ in range(MAX_ITERATIONS):
        pf = np.einsum("rnab,rnb->rna", blocks[:, 0], f_of(theta))
        new_phi = np.mod(np.angle(np.sum(pf[..., 1] * pf[..., 0].conj(), axis=1)), TWO_PI)
        phi = np.where(active, new_phi, phi[:, 0])[:, None]
        gp = np.einsum("ra,rnab->rnb", g_of(phi[:, 0]).conj(), blocks[:, 0])
        new_theta = np.mod(np.angle(gp[..., 0] * gp[..., 1].conj()), TWO_PI)
        theta = np.where(active[:, None], new_theta, theta)
        new_caps = miso_capacities(effective(blocks, theta, phi), p_total, noise)
        rel = (new_caps - caps) / np.maximum(caps, 1e-12)
        caps = np.where(active, new_caps, caps)
        active = active & (rel >= EPSILON)
        if not active.any():
            break
    return theta, phi, caps


def alternate_miso_traces(blocks, p_total, noise):
    """Per-realization capacity traces from the zero init, padded with final values."""
    r, _, n = blocks.shape[:3]
    theta = np.zeros((r, n))
    phi = np.zeros((r, 1))
    caps = miso_capacities(effective(blocks, theta, phi), p_total, noise)
    trace = [caps]
    active = np.ones(r, dtype=bool)
    for _ in range(MAX_ITERATIONS):
        pf = np.einsum("rnab,rnb->rna", blocks[:, 0], f_of(theta))
        new_phi = np.mod(np.angle(np.sum(pf[..., 1] * pf[..., 0].conj(), axis=1)), TWO_PI)
        phi = np.where(active, new_phi, phi[:, 0])[:, None]
        gp = np.einsum("ra,rnab->rnb", g_of(phi[:, 0]).conj(), blocks[:, 0])
        new_theta = np.mod(np.angle(gp[..., 0] * gp[..., 1].conj()), TWO_PI)
        theta = np.where(active[:, None], new_theta, theta)
        new_caps = miso_capacities(effective(blocks, theta, phi), p_total, noise)
        rel = (new_caps - trace[-1]) / np.maximum(trace[-1], 1e-12)
        caps = np.where(active, new_caps, trace[-1])
        trace.append(caps)
        active = active & (rel >= EPSILON)
        if not active.any():
            break
    while len(trace) < MAX_ITERATIONS + 1:
        trace.append(trace[-1])
    return np.stack(trace, axis=1)


def alternate_mimo(blocks, p_total, noise, theta0=None, phi0=None):
    """Batched alternating updates with revert-on-stall; returns (theta, phi, caps).

    Capacity is water-filled per candidate iterate; a realization whose relative
    increase falls under EPSILON keeps its previous phases, matching the scalar
    optimizer's revert rule.
    """
    r, m, n = blocks.shape[:3]
    theta = np.zeros((r, n)) if theta0 is None else np.array(theta0, dtype=float)
    phi = np.zeros((r, m)) if phi0 is None else np.array(phi0, dtype=float)
    caps = waterfill_capacities(effective(blocks, theta, phi), p_total, noise)
    active = np.ones(r, dtype=bool)
    for _ in range(MAX_ITERATIONS):
        pf = np.einsum("rmnab,rnb->rmna", blocks, f_of(theta))
        cand_phi = np.mod(np.angle(np.sum(pf[..., 1] * pf[..., 0].conj(), axis=2)), TWO_PI)
        gp = np.einsum("rma,rmnab->rmnb", g_of(cand_phi).conj(), blocks)
        cand_theta = np.mod(np.angle(np.sum(gp[..., 0].conj() * gp[..., 1], axis=1).conj()), TWO_PI)
        new_caps = waterfill_capacities(effective(blocks, cand_theta, cand_phi), p_total, noise)
        rel = (new_caps - caps) / np.maximum(caps, 1e-12)
        accept = active & (rel >= EPSILON)
        theta = np.where(accept[:, None], cand_theta, theta)
        phi = np.where(accept[:, None], cand_phi, phi)
        caps = np.where(accept, new_caps, caps)
        active = accept
        if not active.any():
            break
    return theta, phi, caps


def alternate_mimo_traces(blocks, p_total, noise):
    r, m, n = blocks.shape[:3]
    theta = np.zeros((r, n))
    phi = np.zeros((r, m))
    caps = waterfill_capacities(effective(blocks, theta, phi), p_total, noise)
    trace = [caps]
    active = np.ones(r, dtype=bool)
    for _ in range(MAX_ITERATIONS):
        pf = np.einsum("rmnab,rnb->rmna", blocks, f_of(theta))
        cand_phi = np.mod(np.angle(np.sum(pf[..., 1] * pf[..., 0].conj(), axis=2)), TWO_PI)
        gp = np.einsum("rma,rmnab->rmnb", g_of(cand_phi).conj(), blocks)
        cand_theta = np.mod(np.angle(np.sum(gp[..., 0].conj() * gp[..., 1], axis=1).conj()), TWO_PI)
        new_caps = waterfill_capacities(effective(blocks, cand_theta, cand_phi), p_total, noise)
        rel = (new_caps - trace[-1]) / np.maximum(trace[-1], 1e-12)
        accept = active & (rel >= EPSILON)
        theta = np.where(accept[:, None], cand_theta, theta)
        phi = np.where(accept[:, None], cand_phi, phi)
        trace.append(np.where(accept, new_caps, trace[-1]))
        active = accept
        if not active.any():
            break
    while len(trace) < MAX_ITERATIONS + 1:
        trace.append(trace[-1])
    return np.stack(trace, axis=1)


# ---------------------------------------------------------------------------
# benchmark schemes

CPA_TX = np.array([1.0, 1.0j]) / np.sqrt(2.0)
CPA_RX = np.array([1.0, 1.0j])
LPA_TX = np.array([1.0, 0.0])
LPA_RX = np.array([1.0, 0.0])


def fixed_pair_capacities(blocks, p_tx, p_rx, p_total, noise):
    h = np.einsum("a,rmnab,b->rmn", np.conj(p_rx), blocks, p_tx)
    return waterfill_capacities(h, p_total, noise)


def full_matrix(blocks):
    """Flatten (R, M, N, 2, 2) blocks into (R, 2M, 2N) element-level channels."""
    r, m, n = blocks.shape[:3]
    return blocks.transpose(0, 1, 3, 2, 4).reshape(r, 2 * m, 2 * n)


def dpa_capacities(blocks, p_total, noise):
    return waterfill_capacities(full_matrix(blocks), p_total, noise)


def _switched_rate(blocks, s_rx, s_tx, p_total, noise):
    pr = np.stack([np.ones_like(s_rx), 1j * s_rx], axis=-1)
    pt = np.stack([np.ones_like(s_tx), 1j * s_tx], axis=-1) / np.sqrt(2.0)
    h = np.einsum("rma,rmnab,rnb->rmn", pr.conj(), blocks, pt)
    return waterfill_capacities(h, p_total, noise)


def switched_capacities(blocks, p_total, noise):
    """Greedy per-antenna state flips between the two circular states.

    Starts from the all-left-handed configuration and sweeps receive antennas
    then transmit antennas, keeping a flip only when capacity strictly improves;
    repeats until a full sweep changes nothing (at most MAX_ITERATIONS sweeps).
    Returns (s_rx, s_tx, caps) with states in {+1, -1}.
    """
    r, m, n = blocks.shape[:3]
    s_rx = np.ones((r, m))
    s_tx = np.ones((r, n))
    caps = _switched_rate(blocks, s_rx, s_tx, p_total, noise)
    for _ in range(MAX_ITERATIONS):
        changed = np.zeros(r, dtype=bool)
        for i in range(m):
            cand = s_rx.copy()
            cand[:, i] = -cand[:, i]
            c2 = _switched_rate(blocks, cand, s_tx, p_total, noise)
            take = c2 > caps + _FLIP_SLACK
            s_rx[take, i] = -s_rx[take, i]
            caps = np.where(take, c2, caps)
            changed |= take
        for j in range(n):
            cand = s_tx.copy()
            cand[:, j] = -cand[:, j]
            c2 = _switched_rate(blocks, s_rx, cand, p_total, noise)
            take = c2 > caps + _FLIP_SLACK
            s_tx[take, j] = -s_tx[take, j]
            caps = np.where(take, c2, caps)
            changed |= take
        if not changed.any():
            break
    return s_rx, s_tx, caps


def rotation_angle(w):
    """Angle in [0, pi) maximizing [cos a, sin a] W [cos a, sin a]^T, W real symmetric."""
    return np.mod(0.5 * np.arctan2(2.0 * w[..., 0, 1], w[..., 0, 0] - w[..., 1, 1]), np.pi)


def _rotated_rate(blocks, alpha, beta, p_total, noise):
    pt = np.stack([np.cos(alpha), np.sin(alpha)], axis=-1).astype(complex)
    pr = np.stack([np.cos(beta), np.sin(beta)], axis=-1).astype(complex)
    h = np.einsum("rma,rmnab,rnb->rmn", pr.conj(), blocks, pt)
    return waterfill_capacities(h, p_total, noise)


def rotated_capacities(blocks, p_total, noise):
    """Alternating closed-form polarization-angle updates with revert-on-stall.

    Returns (alpha, beta, caps): transmit angles, receive angles, capacities.
    """
    r, m, n = blocks.shape[:3]
    alpha = np.zeros((r, n))
    beta = np.zeros((r, m))
    caps = _rotated_rate(blocks, alpha, beta, p_total, noise)
    active = np.ones(r, dtype=bool)
    for _ in range(MAX_ITERATIONS):
        pt = np.stack([np.cos(alpha), np.sin(alpha)], axis=-1).astype(complex)
        v = np.einsum("rmnab,rnb->rmna", blocks, pt)
        w_r = np.einsum("rmna,rmnb->rmab", v, v.conj()).real
        cand_beta = rotation_angle(w_r)
        pr = np.stack([np.cos(cand_beta), np.sin(cand_beta)], axis=-1).astype(complex)
        u = np.einsum("rma,rmnab->rmnb", pr.conj(), blocks)
        w_t = np.einsum("rmna,rmnb->rnab", u.conj(), u).real
        cand_alpha = rotation_angle(w_t)
        new_caps = _rotated_rate(blocks, cand_alpha, cand_beta, p_total, noise)
        rel = (new_caps - caps) / np.maximum(caps, 1e-12)
        accept = active & (rel >= EPSILON)
        alpha = np.where(accept[:, None], cand_alpha, alpha)
        beta = np.where(accept[:, None], cand_beta, beta)
        caps = np.where(accept, new_caps, caps)
        active = accept
        if not active.any():
            break
    return alpha, beta, caps


# ---------------------------------------------------------------------------
# single-sided variants: one link end carries a fixed polarization vector and
# only the other end adapts; rates are rank-1 (single RF chain at the fixed end)


def one_shot_tx_side(blocks, g_fixed, p_total, noise):
    """Exact transmit-side optimum for (R, 1, N, 2, 2) blocks and a fixed receive vector."""
    b = np.einsum("rnba,b->rna", blocks[:, 0].conj(), g_fixed)
    theta = np.mod(np.angle(b[..., 1] * b[..., 0].conj()), TWO_PI)
    h = np.einsum("a,rnab,rnb->rn", g_fixed.conj(), blocks[:, 0], f_of(theta))
    return np.log2(1.0 + p_total * np.sum(np.abs(h) ** 2, axis=1) / noise)


def one_shot_rx_side(blocks, f_fixed, p_total, noise):
    """Exact receive-side optimum for (R, M, 1, 2, 2) blocks and a fixed transmit vector."""
    b = np.einsum("rmab,b->rma", blocks[:, :, 0], f_fixed)
    phi = np.mod(np.angle(b[..., 1] * b[..., 0].conj()), TWO_PI)
    h = np.einsum("rma,rmab,b->rm", g_of(phi).conj(), blocks[:, :, 0], f_fixed)
    return np.log2(1.0 + p_total * np.sum(np.abs(h) ** 2, axis=1) / noise)


def _side_rate(blocks, adj_vecs, fixed, p_total, noise, side):
    if side == "tx":
        h = np.einsum("a,rnab,rnb->rn", fixed.conj(), blocks[:, 0], adj_vecs)
    else:
        h = np.einsum("rma,rmab,b->rm", adj_vecs.conj(), blocks[:, :, 0], fixed)
    return np.log2(1.0 + p_total * np.sum(np.abs(h) ** 2, axis=1) / noise)


def switched_side(blocks, fixed, p_total, noise, side):
    """Per-antenna circular-state selection on one side; separable, so one sweep is exact."""
    r = blocks.shape[0]
    count = blocks.shape[2] if side == "tx" else blocks.shape[1]
    s = np.ones((r, count))
    scale = 1.0 / np.sqrt(2.0) if side == "tx" else 1.0

    def vecs(states):
        return np.stack([np.ones_like(states), 1j * states], axis=-1) * scale

    caps = _side_rate(blocks, vecs(s), fixed, p_total, noise, side)
    for _ in range(MAX_ITERATIONS):
        changed = np.zeros(r, dtype=bool)
        for i in range(count):
            cand = s.copy()
            cand[:, i] = -cand[:, i]
            c2 = _side_rate(blocks, vecs(cand), fixed, p_total, noise, side)
            take = c2 > caps + _FLIP_SLACK
            s[take, i] = -s[take, i]
            caps = np.where(take, c2, caps)
            changed |= take
        if not changed.any():
            break
    return caps


def rotated_side(blocks, fixed, p_total, noise, side):
    """One-shot per-antenna polarization angles on one side (objective separable)."""
    if side == "tx":
        v = np.einsum("a,rnab->rnb", fixed.conj(), blocks[:, 0])
        w = np.einsum("rna,rnb->rnab", v.conj(), v).real
    else:
        v = np.einsum("rmab,b->rma", blocks[:, :, 0], fixed)
        w = np.einsum("rma,rmb->rmab", v, v.conj()).real
    ang = rotation_angle(w)
    vecs = np.stack([np.cos(ang), np.sin(ang)], axis=-1).astype(complex)
    return _side_rate(blocks, vecs, fixed, p_total, noise, side)


def fixed_side(blocks, adj_vec, fixed, p_total, noise, side):
    """Fixed polarization vector at every adaptive-side antenna (CPA/LPA references)."""
    count = blocks.shape[2] if side == "tx" else blocks.shape[1]
    vecs = np.broadcast_to(adj_vec, (blocks.shape[0], count, 2))
    return _side_rate(blocks, vecs, fixed, p_total, noise, side)
