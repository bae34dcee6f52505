"""Two-stage precoder construction.

Outer stage: a per-group semi-unitary F_g whose columns live in the null
space of every interfering group's (truncated) eigenspace, so inter-group
interference vanishes identically for channels drawn in those eigenspaces.
Inner stage: per-user zero-forcing private vectors and isotropic random
common vectors in the reduced M̄/2-dimensional effective space.

The dual-polarized outer precoder K_g = I_2 ⊗ F_g is never materialized;
every product is computed blockwise with F_g.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import CovarianceModel

# Singular values below this fraction of the largest are treated as zero
# when extracting null spaces.
NULLSPACE_REL_THRESHOLD = 1e-10


@dataclass
class OuterPrecoder:
    """Group-separating outer precoder for one polarization (M/2 x M̄/2)."""

    F: np.ndarray
    group: int

    @property
    def dim(self) -> int:
        return self.F.shape[1]


def build_outer_precoder(
    all_covariances: list[CovarianceModel], g: int, m_bar: int
) -> OuterPrecoder:
    """Construct F_g from the null space of the stacked interfering eigenspaces.

    Within the null space the basis is ordered by the eigenvalues of the
    restricted own-group covariance, so the first M̄/2 columns are the
    strongest interference-free directions available to group g.
    """
    half_m = all_covariances[g].half_antennas
    n_half = m_bar // 2
    others = [c for i, c in enumerate(all_covariances) if i != g]
    sum_rbar = sum(c.trunc_rank for c in others)

    if half_m <= sum_rbar:
        raise ValueError(
            f"infeasible outer precoder for group {g}: M/2 = {half_m} must exceed "
            f"sum of interfering ranks = {sum_rbar}"
        )
    null_dim = half_m - sum_rbar
    if n_half > null_dim:
        raise ValueError(
            f"infeasible outer precoder for group {g}: M_bar/2 = {n_half} exceeds "
            f"null-space dimension M/2 - sum(r_bar) = {null_dim}"
        )
    if n_half > all_covariances[g].trunc_rank:
        raise ValueError(
            f"infeasible outer precoder for group {g}: M_bar/2 = {n_half} exceeds "
            f"own truncated rank r_bar = {all_covariances[g].trunc_rank}"
        )

    if others:
        u_star = np.hstack([c.eigvecs for c in others])
        u_svd, _, _ = np.linalg.svd(u_star, full_matrices=True)
        basis = u_svd[:, u_star.shape[1]:]          # trailing left singular vectors
    else:
        basis = np.eye(half_m, dtype=complex)

    # order the null basis by captured own-group energy (restricted eigenbasis)
    restricted = basis.conj().T @ all_covariances[g].R @ basis
    vals, vecs = np.linalg.eigh(restricted)
    order = np.argsort(vals)[::-1]
    F = basis @ vecs[:, order[:n_half]]
    return OuterPrecoder(F=np.ascontiguousarray(F), group=g)


def build_private_precoder(
    effective_channels_others: np.ndarray,
    rng: np.random.Generator,
    own_effective_channel: np.ndarray | None = None,
) -> np.ndarray:
    """Unit vector orthogonal to the other users' effective channels.

    `effective_channels_others` has shape (U-1, M̄/2).  When the null space
    has more than one dimension the basis vector maximizing the projection
    onto `own_effective_channel` is returned (a random one when no own
    channel is supplied).
    """
    others = np.atleast_2d(np.asarray(effective_channels_others))
    if others.ndim == 2 and others.shape[1] > 0:
        dim = others.shape[1]
    elif own_effective_channel is not None:
        dim = own_effective_channel.shape[0]
    else:
        dim = 0
    n_others = others.shape[0] if others.size else 0
    if n_others >= dim:
        raise ValueError(
            f"no private null space: {n_others} interferers in dimension {dim} "
            f"(requires M_bar/2 > U - 1)"
        )
    if n_others == 0:
        if own_effective_channel is not None:
            v = own_effective_channel
            return v / np.linalg.norm(v)
        v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        return v / np.linalg.norm(v)

    # Hermitian orthogonality (row^H p = 0) means p lies in null{others.conj()},
    # spanned by the plain transpose of the trailing right singular vectors.
    _, s, vh = np.linalg.svd(others, full_matrices=True)
    rank = int((s > NULLSPACE_REL_THRESHOLD * s[0]).sum())
    null_basis = vh[rank:].T                          # (dim, dim - rank)
    if own_effective_channel is not None:
        proj = null_basis.conj().T @ own_effective_channel
        # projection of own channel into the null space, renormalized
        v = null_basis @ proj
        norm = np.linalg.norm(v)
        if norm > 1e-14:
            return v / norm
    v = null_basis[:, 0]
    return v / np.linalg.norm(v)


def build_common_precoder(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Isotropic random unit vector: i.i.d. CN(0,1) entries, normalized."""
    if dim < 1:
        raise ValueError(f"common precoder dimension must be >= 1, got {dim}")
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)
