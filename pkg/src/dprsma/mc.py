"""Monte Carlo estimation of outage and ergodic metrics.

Trials are evaluated in fixed-size blocks; block b draws all of its
randomness from a Philox counter-based stream keyed by (seed, b), so results
are bit-identical for any worker count and block-level parallelism is safe.
Channel gains are computed once per block and swept across the whole SNR
grid by broadcasting, since only the noise variance changes along the grid.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import schemes
from .analytic import phi_factor
from .channel import CovarianceModel, apply_csi_error
from .precoder import OuterPrecoder
from .results import MetricEstimate
from .schemes import (
    EffectiveChannels,
    GroupPrecoders,
    ImpairmentParams,
    PowerAllocation,
    SinrOutcome,
    noma_power_coefficients,
)

BLOCK_SIZE = 8192


@dataclass(frozen=True)
class TrialPlan:
    """How many trials to run and under which root seed.

    worker_hint only controls parallel execution; every trial's randomness
    derives from (seed, block index) alone.
    """

    seed: int
    n_trials: int
    worker_hint: int = 1

    def __post_init__(self):
        if self.n_trials < 1:
            raise ValueError("n_trials must be >= 1")
        if self.worker_hint < 1:
            raise ValueError("worker_hint must be >= 1")


@dataclass
class GroupLink:
    """Effective-domain description of the observed group.

    eff_map lifts reduced fading vectors to the effective space:
    x = eff_map @ g with eff_map = F^H U diag(sqrt(eigvals)).
    """

    eff_map: np.ndarray                    # (d, r_bar)
    zeta: np.ndarray                       # (U,)
    phi: float
    group: int

    @property
    def dim(self) -> int:
        return self.eff_map.shape[0]

    @property
    def num_users(self) -> int:
        return self.zeta.shape[0]


def build_group_link(
    cov: CovarianceModel, outer: OuterPrecoder, zetas: np.ndarray, group: int
) -> GroupLink:
    eff_map = outer.F.conj().T @ (cov.eigvecs * np.sqrt(cov.eigvals)[None, :])
    return GroupLink(
        eff_map=np.ascontiguousarray(eff_map),
        zeta=np.asarray(zetas, dtype=float),
        phi=phi_factor(outer.F, cov.R),
        group=group,
    )


def _block_rng(seed: int, block_index: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence((seed, block_index)))
    )


def _draw_effective(
    link: GroupLink, imp: ImpairmentParams, rng: np.random.Generator, n: int
) -> EffectiveChannels:
    """Draw one block of effective channels (and CSI-degraded design copies)."""
    U = link.num_users
    r = link.eff_map.shape[1]

    def cplx(shape):
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)

    g = {name: cplx((n, U, r)) for name in ("vv", "vh", "hv", "hh")}
    x = {name: g[name] @ link.eff_map.T for name in g}
    design_vv = design_hh = None
    if imp.csi_error > 0.0:
        # estimation error lives in the unit-variance reduced domain
        g_vv_hat = apply_csi_error(g["vv"], imp.csi_error, rng)
        g_hh_hat = apply_csi_error(g["hh"], imp.csi_error, rng)
        design_vv = g_vv_hat @ link.eff_map.T
        design_hh = g_hh_hat @ link.eff_map.T
    return EffectiveChannels(
        x_vv=x["vv"], x_vh=x["vh"], x_hv=x["hv"], x_hh=x["hh"],
        zeta=link.zeta, design_vv=design_vv, design_hh=design_hh,
    )


def _draw_rsma_precoders(
    eff: EffectiveChannels, rng: np.random.Generator, n: int
) -> GroupPrecoders:
    d = eff.dim
    return GroupPrecoders(
        common_v=schemes._unit(rng, (n, d)),
        common_h=schemes._unit(rng, (n, d)),
        private_v=schemes.zf_private_precoders(eff.zf_basis_v),
        private_h=schemes.zf_private_precoders(eff.zf_basis_h),
    )


def evaluate_block(
    link: GroupLink,
    scheme: str,
    powers: PowerAllocation,
    imp: ImpairmentParams,
    noise_vars: np.ndarray,
    seed: int,
    block_index: int,
    block_len: int,
) -> SinrOutcome:
    """Evaluate one deterministic block of trials over the whole noise grid."""
    rng = _block_rng(seed, block_index)
    eff = _draw_effective(link, imp, rng, block_len)
    nv = np.asarray(noise_vars, dtype=float).reshape(-1, 1)   # broadcasts to (S, B)
    if scheme in schemes.RSMA_SCHEMES:
        prec = _draw_rsma_precoders(eff, rng, block_len)
        fn = {
            "pmux": schemes.sinr_pmux,
            "pdiv": schemes.sinr_pdiv,
            "spmux": schemes.sinr_spmux,
        }[scheme]
        return fn(eff, prec, powers, imp, nv)
    return schemes.sinr_baseline(scheme, eff, powers, imp, nv, rng)


def _blocks(n_trials: int) -> list[tuple[int, int]]:
    out = []
    b = 0
    done = 0
    while done < n_trials:
        size = min(BLOCK_SIZE, n_trials - done)
        out.append((b, size))
        b += 1
        done += size
    return out


def _outage_block_stats(args) -> dict:
    (link, scheme, powers, imp, noise_vars, seed, bidx, blen, tau_c, tau_p, tau_user) = args
    out = evaluate_block(link, scheme, powers, imp, noise_vars, seed, bidx, blen)
    stats: dict[str, np.ndarray] = {}
    if scheme in ("pmux", "pdiv", "sp-rsma"):
        ec = out.common < tau_c                          # (S, B, U)
        ep = out.private < tau_p
        stats["common"] = ec.sum(axis=1)
        stats["private"] = ep.sum(axis=1)
        stats["total"] = (ec | ep).sum(axis=1)
    elif scheme == "spmux":
        ec = out.common < tau_c                          # (S, B, 2, U)
        ep = out.private < tau_p
        stats["common"] = ec.sum(axis=1)
        stats["private"] = ep.sum(axis=1)
        stats["total"] = (ec | ep).sum(axis=1)
    elif scheme in ("sp-noma", "dp-noma-div"):
        U = link.num_users
        lay = out.noma_layers                            # (S, B, U, U)
        fail = np.zeros(lay.shape[:2] + (U,), dtype=bool)
        for u in range(U):
            for j in range(u + 1):
                fail[..., u] |= lay[..., u, j] < tau_user[j]
        stats["total"] = fail.sum(axis=1)
    elif scheme == "dp-sdma-mux":
        ev = out.private < tau_user[None, None, None, :]  # (S, B, 2, U)
        stats["total"] = ev.sum(axis=1)
    else:
        ev = out.private < tau_user[None, None, :]        # (S, B, U)
        stats["total"] = ev.sum(axis=1)
    return stats


def _ergodic_block_stats(args) -> dict:
    (link, scheme, powers, imp, noise_vars, seed, bidx, blen) = args
    out = evaluate_block(link, scheme, powers, imp, noise_vars, seed, bidx, blen)
    U = link.num_users
    if scheme in ("pmux", "pdiv", "sp-rsma"):
        common = U * np.log2(1.0 + out.common.min(axis=-1))          # (S, B)
        private = np.log2(1.0 + out.private).sum(axis=-1)
    elif scheme == "spmux":
        common = (U * np.log2(1.0 + out.common.min(axis=-1))).sum(axis=-1)
        private = np.log2(1.0 + out.private).sum(axis=(-2, -1))
    elif scheme in ("sp-noma", "dp-noma-div"):
        own = np.stack(
            [out.noma_layers[..., u, u] for u in range(U)], axis=-1
        )
        common = np.zeros(own.shape[:-1])
        private = np.log2(1.0 + own).sum(axis=-1)
    elif scheme == "dp-sdma-mux":
        common = np.zeros(out.private.shape[:-2])
        private = np.log2(1.0 + out.private).sum(axis=(-2, -1))
    else:
        common = np.zeros(out.private.shape[:-1])
        private = np.log2(1.0 + out.private).sum(axis=-1)
        if scheme == "sp-oma":
            private = private / U                                    # time sharing
    total = common + private
    return {
        "sum": total.sum(axis=1),
        "sumsq": (total**2).sum(axis=1),
        "common_sum": common.sum(axis=1),
        "private_sum": private.sum(axis=1),
    }


def _run_blocks(fn, job_args, plan: TrialPlan):
    """Run per-block jobs, serially or on a pool; reduce in block order."""
    if plan.worker_hint == 1 or len(job_args) == 1:
        return [fn(a) for a in job_args]
    workers = min(plan.worker_hint, len(job_args), os.cpu_count() or 1)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, job_args, chunksize=1))


def estimate_outage(
    link: GroupLink,
    scheme: str,
    powers: PowerAllocation,
    imp: ImpairmentParams,
    noise_vars: np.ndarray,
    rate_common: float,
    rates_private: np.ndarray,
    plan: TrialPlan,
) -> dict:
    """Empirical outage probabilities over the noise grid.

    Returns arrays keyed 'common'/'private'/'total' of shape (S, U) (an extra
    polarization axis for spmux / dp-sdma-mux), plus binomial standard errors
    under '<key>_se' and the trial count under 'trials'.  Baseline schemes
    (non-RSMA) are assessed against the adjusted target R_c + R_p,u and only
    report 'total'.
    """
    tau_c = 2.0 ** rate_common - 1.0
    tau_p = 2.0 ** np.asarray(rates_private, dtype=float) - 1.0
    tau_user = 2.0 ** (rate_common + np.asarray(rates_private, dtype=float)) - 1.0
    jobs = [
        (link, scheme, powers, imp, noise_vars, plan.seed, b, n, tau_c, tau_p, tau_user)
        for b, n in _blocks(plan.n_trials)
    ]
    parts = _run_blocks(_outage_block_stats, jobs, plan)
    result: dict = {"trials": plan.n_trials}
    for key in parts[0]:
        counts = sum(p[key] for p in parts)
        prob = counts / plan.n_trials
        result[key] = prob
        result[key + "_se"] = np.sqrt(
            np.maximum(prob * (1.0 - prob), 1e-300) / plan.n_trials
        )
    return result


def estimate_ergodic(
    link: GroupLink,
    scheme: str,
    powers: PowerAllocation,
    imp: ImpairmentParams,
    noise_vars: np.ndarray,
    plan: TrialPlan,
) -> dict:
    """Empirical ergodic sum-rate (bpcu) over the noise grid.

    The common-stream term contributes U times the worst user's rate; SPMUX
    adds both polarizations' stream sets; OMA divides by U for time sharing.
    """
    jobs = [
        (link, scheme, powers, imp, noise_vars, plan.seed, b, n)
        for b, n in _blocks(plan.n_trials)
    ]
    parts = _run_blocks(_ergodic_block_stats, jobs, plan)
    n = plan.n_trials
    tot = sum(p["sum"] for p in parts)
    totsq = sum(p["sumsq"] for p in parts)
    mean = tot / n
    var = np.maximum(totsq / n - mean**2, 0.0)
    se = np.sqrt(var / max(n - 1, 1))
    return {
        "sum": mean,
        "sum_se": se,
        "common": sum(p["common_sum"] for p in parts) / n,
        "private": sum(p["private_sum"] for p in parts) / n,
        "trials": n,
    }


def outage_sum_rate_from_estimates(
    est: dict,
    scheme: str,
    rate_common: float,
    rates_private: np.ndarray,
    num_users: int,
    spmux_net: bool = False,
) -> tuple[np.ndarray, np.ndarray]:
    """Outage sum-rate and its standard error from an estimate_outage result.

    RSMA schemes: sum_u (1-Pc_u) Rc + (1-Pp_u) Rp_u.  Baselines: the adjusted
    per-user target rates.  For spmux, `spmux_net=False` counts the vertical
    polarization's streams; True adds both.  OMA rates are scaled by 1/U.
    """
    rp = np.asarray(rates_private, dtype=float)
    if scheme in ("pmux", "pdiv", "sp-rsma"):
        val = ((1.0 - est["common"]) * rate_common + (1.0 - est["private"]) * rp).sum(-1)
        var = ((est["common_se"] * rate_common) ** 2 + (est["private_se"] * rp) ** 2).sum(-1)
    elif scheme == "spmux":
        pc, pp = est["common"], est["private"]
        sc, sp = est["common_se"], est["private_se"]
        per_pol = ((1.0 - pc) * rate_common + (1.0 - pp) * rp).sum(-1)     # (S, 2)
        var_pol = ((sc * rate_common) ** 2 + (sp * rp) ** 2).sum(-1)
        if spmux_net:
            val, var = per_pol.sum(-1), var_pol.sum(-1)
        else:
            val, var = per_pol[..., 0], var_pol[..., 0]
    else:
        targets = rate_common + rp
        if scheme == "dp-sdma-mux":
            val = ((1.0 - est["total"]) * targets).sum(axis=(-2, -1))
            var = ((est["total_se"] * targets) ** 2).sum(axis=(-2, -1))
        else:
            val = ((1.0 - est["total"]) * targets).sum(-1)
            var = ((est["total_se"] * targets) ** 2).sum(-1)
        if scheme == "sp-oma":
            val = val / num_users
            var = var / num_users**2
    return val, np.sqrt(var)
