"""Instantaneous SINR evaluation for the proposed schemes and the baselines.

All evaluators operate on reduced-dimension effective channels
x_ij = F^H h_ij with unscaled CN(0, S) statistics; large-scale gain (zeta),
cross-polar leakage (chi) and per-stream powers enter here.  Channel arrays
carry arbitrary leading batch dimensions, and `noise_var` may itself carry
extra leading axes (e.g. an SNR sweep) that broadcast against the batch:
channel-dependent gains are computed once and reused across the sweep.

Every dual-polarized stream is transmitted with its stacked precoder
[v-block; h-block] normalized to unit norm, so each polarization block
carries half the stream power (POL_POWER).  Schemes that leave one block
empty still use the same per-block power, so a single rate parameter
phi = M_bar / tr(F^H R F) describes every scheme's effective gains.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Per-polarization-block share of a stream's unit power.
POL_POWER = 0.5

BASELINE_KINDS = (
    "sp-oma",
    "sp-sdma",
    "sp-rsma",
    "sp-noma",
    "dp-noma-div",
    "dp-sdma-div",
    "dp-sdma-mux",
)

RSMA_SCHEMES = ("pmux", "pdiv", "spmux")
ALL_SCHEMES = RSMA_SCHEMES + BASELINE_KINDS


@dataclass(frozen=True)
class PowerAllocation:
    """Per-group power split: alpha to the common stream, beta_u to privates."""

    alpha: float
    beta: tuple[float, ...]

    def __post_init__(self):
        if self.alpha <= 0 or any(b <= 0 for b in self.beta):
            raise ValueError("power coefficients must be positive")
        total = self.alpha + sum(self.beta)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"alpha + sum(beta) must equal 1, got {total}")


@dataclass(frozen=True)
class ImpairmentParams:
    """Cross-polar leakage (chi), residual SIC error (xi), CSI error variance."""

    chi: float = 0.0
    xi: float = 0.0
    csi_error: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.chi <= 1.0:
            raise ValueError(f"chi must lie in [0, 1], got {self.chi}")
        if self.xi < 0:
            raise ValueError(f"xi must be >= 0, got {self.xi}")
        if not 0.0 <= self.csi_error <= 1.0:
            raise ValueError(f"csi_error must lie in [0, 1], got {self.csi_error}")


@dataclass
class EffectiveChannels:
    """Effective channels x_ij = F^H h_ij for one group, shape (..., U, d).

    `design_*` optionally hold the imperfect-CSI copies the transmitter uses
    to build zero-forcing precoders; detection always uses the true channels.
    """

    x_vv: np.ndarray
    x_vh: np.ndarray
    x_hv: np.ndarray
    x_hh: np.ndarray
    zeta: np.ndarray                       # (U,)
    design_vv: np.ndarray | None = None
    design_hh: np.ndarray | None = None

    @property
    def num_users(self) -> int:
        return self.x_vv.shape[-2]

    @property
    def dim(self) -> int:
        return self.x_vv.shape[-1]

    @property
    def zf_basis_v(self) -> np.ndarray:
        return self.design_vv if self.design_vv is not None else self.x_vv

    @property
    def zf_basis_h(self) -> np.ndarray:
        return self.design_hh if self.design_hh is not None else self.x_hh


@dataclass
class GroupPrecoders:
    """Inner precoders for one group: unit vectors in the effective space."""

    common_v: np.ndarray                   # (..., d)
    common_h: np.ndarray
    private_v: np.ndarray                  # (..., U, d)
    private_h: np.ndarray


@dataclass
class SinrOutcome:
    """Per-user SINRs of one scheme evaluation.

    common/private have trailing axis U; SPMUX and dp-sdma-mux carry an extra
    polarization axis, trailing shape (2, U) with index 0 = v.  NOMA baselines
    store the decode-layer SINR matrix with trailing shape (U, U): entry
    [u, j] is user u's SINR when detecting layer j (meaningful for j <= u
    under descending-power SIC order).
    """

    scheme: str
    common: np.ndarray | None = None
    private: np.ndarray | None = None
    noma_layers: np.ndarray | None = field(default=None, repr=False)


def _g(x_user: np.ndarray, vec: np.ndarray) -> np.ndarray:
    """|x^H v|^2 with broadcasting over leading axes."""
    return np.abs(np.einsum("...i,...i->...", x_user.conj(), vec)) ** 2


def _g_all(x_user: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    """|x^H v_n|^2 for a stack of vectors (..., n, d) -> (..., n)."""
    return np.abs(np.einsum("...i,...ni->...n", x_user.conj(), vecs)) ** 2


def zf_private_precoders(x_own_pol: np.ndarray) -> np.ndarray:
    """Zero-forcing private precoders for all users of one polarization.

    x_own_pol: (..., U, d) co-polar effective channels.  Returns (..., U, d)
    unit vectors with p_u orthogonal to every x_m (m != u), chosen as the
    projection of x_u onto that null space (unique up to phase in the
    generic case where the null space is one-dimensional).
    """
    U = x_own_pol.shape[-2]
    d = x_own_pol.shape[-1]
    if U - 1 >= d:
        raise ValueError(f"no ZF null space: U-1 = {U-1} >= d = {d}")
    out = np.empty_like(x_own_pol)
    for u in range(U):
        others_idx = [m for m in range(U) if m != u]
        if others_idx:
            others = x_own_pol[..., others_idx, :]
            # least-squares coefficients of x_u on the interferer rows
            gram = np.einsum("...mi,...ni->...mn", others.conj(), others)
            rhs = np.einsum("...mi,...i->...m", others.conj(), x_own_pol[..., u, :])
            coef = np.linalg.solve(gram, rhs[..., None])[..., 0]
            proj = x_own_pol[..., u, :] - np.einsum("...m,...mi->...i", coef, others)
        else:
            proj = x_own_pol[..., u, :]
        norm = np.linalg.norm(proj, axis=-1, keepdims=True)
        out[..., u, :] = proj / np.maximum(norm, 1e-300)
    return out


def _check_dims(eff: EffectiveChannels, prec: GroupPrecoders):
    if prec.common_v.shape[-1] != eff.dim or prec.private_h.shape[-1] != eff.dim:
        raise ValueError(
            f"precoder dimension {prec.common_v.shape[-1]} does not match "
            f"effective channel dimension {eff.dim}"
        )


def sinr_pmux(
    eff: EffectiveChannels,
    prec: GroupPrecoders,
    powers: PowerAllocation,
    imp: ImpairmentParams,
    noise_var,
) -> SinrOutcome:
    """Polarization multiplexing: common on v, privates on h, no SIC."""
    _check_dims(eff, prec)
    U = eff.num_users
    beta = np.asarray(powers.beta)
    common, private = [], []
    for u in range(U):
        z = eff.zeta[u]
        num_c = z * powers.alpha * POL_POWER * _g(eff.x_vv[..., u, :], prec.common_v)
        int_c = z * imp.chi * POL_POWER * (
            _g_all(eff.x_hv[..., u, :], prec.private_h) * beta
        ).sum(-1)
        common.append(num_c / (int_c + noise_var))
        num_p = z * beta[u] * POL_POWER * _g(eff.x_hh[..., u, :], prec.private_h[..., u, :])
        others = [m for m in range(U) if m != u]
        # co-polar leak vanishes when zero-forcing holds (perfect CSI)
        leak = z * POL_POWER * (
            _g_all(eff.x_hh[..., u, :], prec.private_h[..., others, :]) * beta[others]
        ).sum(-1)
        int_p = z * imp.chi * powers.alpha * POL_POWER * _g(eff.x_vh[..., u, :], prec.common_v)
        private.append(num_p / (int_p + leak + noise_var))
    return SinrOutcome(
        scheme="pmux", common=np.stack(common, axis=-1), private=np.stack(private, axis=-1)
    )


def sinr_pdiv(
    eff: EffectiveChannels,
    prec: GroupPrecoders,
    powers: PowerAllocation,
    imp: ImpairmentParams,
    noise_var,
) -> SinrOutcome:
    """Polarization diversity: message replicas on both polarizations.

    The receiver decodes from the polarization with the larger effective
    gain (ties break toward v); SIC of the common stream leaves a residual
    xi fraction of its received power in the private stage.
    """
    _check_dims(eff, prec)
    U = eff.num_users
    chi, xi = imp.chi, imp.xi
    beta = np.asarray(powers.beta)
    common, private = [], []
    for u in range(U):
        z = eff.zeta[u]
        rc_v = z * powers.alpha * POL_POWER * (
            _g(eff.x_vv[..., u, :], prec.common_v) + chi * _g(eff.x_hv[..., u, :], prec.common_h)
        )
        rc_h = z * powers.alpha * POL_POWER * (
            _g(eff.x_hh[..., u, :], prec.common_h) + chi * _g(eff.x_vh[..., u, :], prec.common_v)
        )
        others = [m for m in range(U) if m != u]
        # co-polar leak of other users' privates: zero under perfect nulling
        leak_v = z * POL_POWER * (
            _g_all(eff.x_vv[..., u, :], prec.private_v[..., others, :]) * beta[others]
        ).sum(-1)
        leak_h = z * POL_POWER * (
            _g_all(eff.x_hh[..., u, :], prec.private_h[..., others, :]) * beta[others]
        ).sum(-1)
        int_c_v = leak_v + z * POL_POWER * (
            beta[u] * _g(eff.x_vv[..., u, :], prec.private_v[..., u, :])
            + chi * (_g_all(eff.x_hv[..., u, :], prec.private_h) * beta).sum(-1)
        )
        int_c_h = leak_h + z * POL_POWER * (
            beta[u] * _g(eff.x_hh[..., u, :], prec.private_h[..., u, :])
            + chi * (_g_all(eff.x_vh[..., u, :], prec.private_v) * beta).sum(-1)
        )
        sel_v = rc_v >= rc_h
        common.append(
            np.where(sel_v, rc_v / (int_c_v + noise_var), rc_h / (int_c_h + noise_var))
        )

        rp_v = z * beta[u] * POL_POWER * (
            _g(eff.x_vv[..., u, :], prec.private_v[..., u, :])
            + chi * _g(eff.x_hv[..., u, :], prec.private_h[..., u, :])
        )
        rp_h = z * beta[u] * POL_POWER * (
            _g(eff.x_hh[..., u, :], prec.private_h[..., u, :])
            + chi * _g(eff.x_vh[..., u, :], prec.private_v[..., u, :])
        )
        # SIC leaves xi of the received common power; the cross-polar sum
        # excludes the own stream (nulled in its origin polarization).
        int_p_v = xi * rc_v + leak_v + z * POL_POWER * chi * (
            _g_all(eff.x_hv[..., u, :], prec.private_h[..., others, :]) * beta[others]
        ).sum(-1)
        int_p_h = xi * rc_h + leak_h + z * POL_POWER * chi * (
            _g_all(eff.x_vh[..., u, :], prec.private_v[..., others, :]) * beta[others]
        ).sum(-1)
        selp_v = rp_v >= rp_h
        private.append(
            np.where(selp_v, rp_v / (int_p_v + noise_var), rp_h / (int_p_h + noise_var))
        )
    return SinrOutcome(
        scheme="pdiv", common=np.stack(common, axis=-1), private=np.stack(private, axis=-1)
    )


def sinr_spmux(
    eff: EffectiveChannels,
    prec: GroupPrecoders,
    powers: PowerAllocation,
    imp: ImpairmentParams,
    noise_var,
) -> SinrOutcome:
    """Full RSMA per polarization: two independent common + private stream sets."""
    _check_dims(eff, prec)
    U = eff.num_users
    chi, xi = imp.chi, imp.xi
    beta = np.asarray(powers.beta)
    pols = [
        (eff.x_vv, eff.x_hv, prec.common_v, prec.common_h, prec.private_v, prec.private_h),
        (eff.x_hh, eff.x_vh, prec.common_h, prec.common_v, prec.private_h, prec.private_v),
    ]
    common_pols, private_pols = [], []
    for x_ii, x_ji, c_i, c_j, p_i, p_j in pols:
        common, private = [], []
        for u in range(U):
            z = eff.zeta[u]
            others = [m for m in range(U) if m != u]
            rc = z * powers.alpha * POL_POWER * _g(x_ii[..., u, :], c_i)
            cross = z * POL_POWER * chi * (
                powers.alpha * _g(x_ji[..., u, :], c_j)
                + (_g_all(x_ji[..., u, :], p_j) * beta).sum(-1)
            )
            # co-polar leak of other users' privates: zero under perfect nulling
            leak = z * POL_POWER * (
                _g_all(x_ii[..., u, :], p_i[..., others, :]) * beta[others]
            ).sum(-1)
            own_p = z * beta[u] * POL_POWER * _g(x_ii[..., u, :], p_i[..., u, :])
            common.append(rc / (own_p + cross + leak + noise_var))
            private.append(own_p / (xi * rc + cross + leak + noise_var))
        common_pols.append(np.stack(common, axis=-1))
        private_pols.append(np.stack(private, axis=-1))
    return SinrOutcome(
        scheme="spmux",
        common=np.stack(common_pols, axis=-2),
        private=np.stack(private_pols, axis=-2),
    )


def noma_power_coefficients(num_users: int) -> np.ndarray:
    """Descending power-domain coefficients; (5/8, 2/8, 1/8) for three users."""
    if num_users == 3:
        return np.array([5.0, 2.0, 1.0]) / 8.0
    w = 2.0 ** np.arange(num_users - 1, -1, -1)
    return w / w.sum()


def sinr_baseline(
    kind: str,
    eff: EffectiveChannels,
    powers: PowerAllocation,
    imp: ImpairmentParams,
    noise_var,
    rng: np.random.Generator,
) -> SinrOutcome:
    """Baseline multiple-access schemes of the comparison roster.

    Single-polarized schemes ride the v-polarization only at full stream
    power (standing in for a single-polarized array of the same total
    element count); dual-polarized diversity schemes send replicas on both
    blocks with max-gain selection; dp-sdma-mux sends two independent
    zero-forced streams per user.
    """
    if kind not in BASELINE_KINDS:
        raise ValueError(f"unknown baseline kind {kind!r}; expected one of {BASELINE_KINDS}")
    U = eff.num_users
    chi, xi = imp.chi, imp.xi
    zeta = eff.zeta

    if kind == "sp-oma":
        sinr = [
            zeta[u] * np.linalg.norm(eff.x_vv[..., u, :], axis=-1) ** 2 / noise_var
            for u in range(U)
        ]
        return SinrOutcome(scheme=kind, private=np.stack(sinr, axis=-1))

    if kind == "sp-sdma":
        p = zf_private_precoders(eff.zf_basis_v)
        sinr = []
        for u in range(U):
            z = zeta[u]
            others = [m for m in range(U) if m != u]
            num = z / U * _g(eff.x_vv[..., u, :], p[..., u, :])
            leak = z / U * _g_all(eff.x_vv[..., u, :], p[..., others, :]).sum(-1)
            sinr.append(num / (leak + noise_var))
        return SinrOutcome(scheme=kind, private=np.stack(sinr, axis=-1))

    if kind == "sp-rsma":
        c = _unit(rng, eff.x_vv.shape[:-2] + (eff.dim,))
        p = zf_private_precoders(eff.zf_basis_v)
        beta = np.asarray(powers.beta)
        common, private = [], []
        for u in range(U):
            z = zeta[u]
            gc = z * powers.alpha * _g(eff.x_vv[..., u, :], c)
            gp_own = z * beta[u] * _g(eff.x_vv[..., u, :], p[..., u, :])
            others = [m for m in range(U) if m != u]
            leak = z * (_g_all(eff.x_vv[..., u, :], p[..., others, :]) * beta[others]).sum(-1)
            common.append(gc / (gp_own + leak + noise_var))
            private.append(gp_own / (xi * gc + leak + noise_var))
        return SinrOutcome(
            scheme=kind, common=np.stack(common, axis=-1), private=np.stack(private, axis=-1)
        )

    if kind in ("sp-noma", "dp-noma-div"):
        a = noma_power_coefficients(U)
        c_v = _unit(rng, eff.x_vv.shape[:-2] + (eff.dim,))
        if kind == "sp-noma":
            gain = np.stack(
                [zeta[u] * _g(eff.x_vv[..., u, :], c_v) for u in range(U)], axis=-1
            )
        else:
            c_h = _unit(rng, eff.x_vv.shape[:-2] + (eff.dim,))
            gv = np.stack(
                [
                    zeta[u] * POL_POWER * (
                        _g(eff.x_vv[..., u, :], c_v) + chi * _g(eff.x_hv[..., u, :], c_h)
                    )
                    for u in range(U)
                ],
                axis=-1,
            )
            gh = np.stack(
                [
                    zeta[u] * POL_POWER * (
                        _g(eff.x_hh[..., u, :], c_h) + chi * _g(eff.x_vh[..., u, :], c_v)
                    )
                    for u in range(U)
                ],
                axis=-1,
            )
            gain = np.maximum(gv, gh)
        layer_rows = []
        for u in range(U):
            row = []
            for j in range(U):
                resid = xi * a[:j].sum()       # already-cancelled stronger layers
                later = a[j + 1:].sum()        # undecoded weaker layers
                row.append(
                    gain[..., u] * a[j] / (gain[..., u] * (resid + later) + noise_var)
                )
            layer_rows.append(np.stack(row, axis=-1))
        return SinrOutcome(scheme=kind, noma_layers=np.stack(layer_rows, axis=-2))

    if kind == "dp-sdma-div":
        pv = zf_private_precoders(eff.zf_basis_v)
        ph = zf_private_precoders(eff.zf_basis_h)
        sinr = []
        for u in range(U):
            z = zeta[u]
            others = [m for m in range(U) if m != u]
            gv = z / U * POL_POWER * (
                _g(eff.x_vv[..., u, :], pv[..., u, :]) + chi * _g(eff.x_hv[..., u, :], ph[..., u, :])
            )
            gh = z / U * POL_POWER * (
                _g(eff.x_hh[..., u, :], ph[..., u, :]) + chi * _g(eff.x_vh[..., u, :], pv[..., u, :])
            )
            iv = z / U * POL_POWER * (
                _g_all(eff.x_vv[..., u, :], pv[..., others, :]).sum(-1)
                + chi * _g_all(eff.x_hv[..., u, :], ph[..., others, :]).sum(-1)
            )
            ih = z / U * POL_POWER * (
                _g_all(eff.x_hh[..., u, :], ph[..., others, :]).sum(-1)
                + chi * _g_all(eff.x_vh[..., u, :], pv[..., others, :]).sum(-1)
            )
            sinr.append(np.where(gv >= gh, gv / (iv + noise_var), gh / (ih + noise_var)))
        return SinrOutcome(scheme=kind, private=np.stack(sinr, axis=-1))

    # dp-sdma-mux: two independent ZF streams per user, one per polarization
    pv = zf_private_precoders(eff.zf_basis_v)
    ph = zf_private_precoders(eff.zf_basis_h)
    per_pol = []
    for x_ii, x_ji, p_i, p_j in (
        (eff.x_vv, eff.x_hv, pv, ph),
        (eff.x_hh, eff.x_vh, ph, pv),
    ):
        sinr = []
        for u in range(U):
            z = zeta[u]
            others = [m for m in range(U) if m != u]
            num = z / U * POL_POWER * _g(x_ii[..., u, :], p_i[..., u, :])
            interf = z / U * POL_POWER * (
                _g_all(x_ii[..., u, :], p_i[..., others, :]).sum(-1)
                + chi * _g_all(x_ji[..., u, :], p_j).sum(-1)
            )
            sinr.append(num / (interf + noise_var))
        per_pol.append(np.stack(sinr, axis=-1))
    return SinrOutcome(scheme=kind, private=np.stack(per_pol, axis=-2))


def _unit(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    v = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)
