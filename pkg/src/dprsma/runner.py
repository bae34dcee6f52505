"""Experiment orchestration: expand presets, run analytic + MC pipelines, emit rows."""

from __future__ import annotations

import numpy as np

from . import analytic
from .analytic import AnalyticParams
from .config import SystemConfig, build_scenario
from .mc import GroupLink, TrialPlan, estimate_ergodic, estimate_outage, outage_sum_rate_from_estimates
from .presets import PresetCase, preset_cases
from .results import ResultRow

ANALYTIC_OUTAGE = {
    "pmux": (analytic.outage_common_pmux, analytic.outage_private_pmux),
    "pdiv": (analytic.outage_common_pdiv, analytic.outage_private_pdiv),
    "spmux": (analytic.outage_common_spmux, analytic.outage_private_spmux),
}


def analytic_params_for(
    config: SystemConfig, link: GroupLink, user: int, snr_db: float
) -> AnalyticParams:
    """Closed-form parameters for one user at one SNR point."""
    rho = 1.0 / _nv(config, snr_db)
    return AnalyticParams.from_rates(
        rate_common=config.rate_common,
        rate_private=config.rates_private[user],
        phi=link.phi,
        zeta=float(link.zeta[user]),
        alpha=config.alpha,
        beta=config.beta[user],
        chi=config.chi,
        xi=config.xi,
        num_users=config.num_users,
        rho=rho,
    )


def _nv(config: SystemConfig, snr_db: float) -> float:
    from .config import noise_variance

    return float(noise_variance(snr_db))


def _row(config, scheme, user, snr_db, metric, source, value, se=0.0, trials=0):
    return ResultRow(
        scheme=scheme,
        group=config.observed_group,
        user=user,
        snr_db=float(snr_db),
        chi=config.chi,
        xi=config.xi,
        csi_error=config.csi_error,
        metric=metric,
        source=source,
        value=float(value),
        std_error=float(se),
        trials=int(trials),
        seed=config.seed,
    )


def run_case(case: PresetCase, workers: int = 1) -> list[ResultRow]:
    """Run one preset case (a config plus metric kind) for all its schemes."""
    config = case.config
    _, _, link = build_scenario(config)
    rows: list[ResultRow] = []
    for scheme in config.schemes:
        if case.kind == "outage":
            rows += _run_outage(config, link, scheme, workers)
        elif case.kind == "outage_sum_rate":
            rows += _run_outage_sum_rate(config, link, scheme, workers, case.spmux_net)
        elif case.kind == "ergodic":
            rows += _run_ergodic(config, link, scheme, workers)
        else:
            raise ValueError(f"unknown case kind {case.kind!r}")
    return rows


def _analytic_outage_rows(config, link, scheme) -> list[ResultRow]:
    if scheme not in ANALYTIC_OUTAGE:
        return []
    fn_c, fn_p = ANALYTIC_OUTAGE[scheme]
    rows = []
    for snr in config.snr_db_grid:
        for u in range(config.num_users):
            p = analytic_params_for(config, link, u, snr)
            pc, pp = fn_c(p), fn_p(p)
            po = analytic.outage_total(pc, pp)
            user = str(u + 1)
            rows.append(_row(config, scheme, user, snr, "outage_common", "analytic", pc))
            rows.append(_row(config, scheme, user, snr, "outage_private", "analytic", pp))
            rows.append(_row(config, scheme, user, snr, "outage_total", "analytic", po))
    return rows


def _run_outage(config, link, scheme, workers) -> list[ResultRow]:
    rows = _analytic_outage_rows(config, link, scheme)
    est = estimate_outage(
        link, scheme, config.power_allocation(), config.impairments(),
        config.noise_variances(), config.rate_common,
        np.asarray(config.rates_private),
        TrialPlan(seed=config.seed, n_trials=config.trials_outage, worker_hint=workers),
    )
    n = est["trials"]
    for si, snr in enumerate(config.snr_db_grid):
        for u in range(config.num_users):
            if scheme == "spmux":
                for pi, pol in enumerate("vh"):
                    user = f"{u + 1}{pol}"
                    for key, metric in (
                        ("common", "outage_common"),
                        ("private", "outage_private"),
                        ("total", "outage_total"),
                    ):
                        rows.append(_row(
                            config, scheme, user, snr, metric, "mc",
                            est[key][si, pi, u], est[key + "_se"][si, pi, u], n,
                        ))
            elif scheme == "dp-sdma-mux":
                for pi, pol in enumerate("vh"):
                    rows.append(_row(
                        config, scheme, f"{u + 1}{pol}", snr, "outage_total", "mc",
                        est["total"][si, pi, u], est["total_se"][si, pi, u], n,
                    ))
            else:
                user = str(u + 1)
                for key, metric in (
                    ("common", "outage_common"),
                    ("private", "outage_private"),
                    ("total", "outage_total"),
                ):
                    if key in est:
                        rows.append(_row(
                            config, scheme, user, snr, metric, "mc",
                            est[key][si, u], est[key + "_se"][si, u], n,
                        ))
    return rows


def _run_outage_sum_rate(config, link, scheme, workers, spmux_net) -> list[ResultRow]:
    rows = []
    rp = np.asarray(config.rates_private)
    if scheme in ANALYTIC_OUTAGE:
        fn_c, fn_p = ANALYTIC_OUTAGE[scheme]
        for snr in config.snr_db_grid:
            pairs = []
            for u in range(config.num_users):
                p = analytic_params_for(config, link, u, snr)
                pairs.append((fn_c(p), fn_p(p)))
            val = analytic.outage_sum_rate(pairs, config.rate_common, list(rp))
            if scheme == "spmux" and spmux_net:
                val *= 2.0       # identical closed forms for both polarizations
            rows.append(_row(config, scheme, "sum", snr, "outage_sum_rate", "analytic", val))
    est = estimate_outage(
        link, scheme, config.power_allocation(), config.impairments(),
        config.noise_variances(), config.rate_common, rp,
        TrialPlan(seed=config.seed, n_trials=config.trials_outage, worker_hint=workers),
    )
    val, se = outage_sum_rate_from_estimates(
        est, scheme, config.rate_common, rp, config.num_users, spmux_net=spmux_net
    )
    for si, snr in enumerate(config.snr_db_grid):
        rows.append(_row(
            config, scheme, "sum", snr, "outage_sum_rate", "mc",
            val[si], se[si], est["trials"],
        ))
    return rows


def _analytic_ergodic_rows(config, link, scheme) -> list[ResultRow]:
    if scheme not in ("pmux", "pdiv"):
        return []
    rows = []
    for snr in config.snr_db_grid:
        params = [
            analytic_params_for(config, link, u, snr) for u in range(config.num_users)
        ]
        if scheme == "pmux":
            cc = analytic.ergodic_common_pmux(params)
            cp = analytic.ergodic_private_pmux(params)
        else:
            cc = analytic.ergodic_common_pdiv(params)
            cp = analytic.ergodic_private_pdiv(params)
        rows.append(_row(config, scheme, "sum", snr, "ergodic_common", "analytic", cc))
        rows.append(_row(config, scheme, "sum", snr, "ergodic_private", "analytic", cp))
        rows.append(_row(config, scheme, "sum", snr, "ergodic_sum", "analytic", cc + cp))
    return rows


def _run_ergodic(config, link, scheme, workers) -> list[ResultRow]:
    rows = _analytic_ergodic_rows(config, link, scheme)
    est = estimate_ergodic(
        link, scheme, config.power_allocation(), config.impairments(),
        config.noise_variances(),
        TrialPlan(seed=config.seed, n_trials=config.trials_ergodic, worker_hint=workers),
    )
    for si, snr in enumerate(config.snr_db_grid):
        rows.append(_row(config, scheme, "sum", snr, "ergodic_common", "mc",
                         est["common"][si], 0.0, est["trials"]))
        rows.append(_row(config, scheme, "sum", snr, "ergodic_private", "mc",
                         est["private"][si], 0.0, est["trials"]))
        rows.append(_row(config, scheme, "sum", snr, "ergodic_sum", "mc",
                         est["sum"][si], est["sum_se"][si], est["trials"]))
    return rows


def run_preset(
    name: str,
    overrides: dict | None = None,
    trials: int | None = None,
    seed: int | None = None,
    workers: int = 1,
) -> tuple[list[ResultRow], dict]:
    """Run every case of a preset; returns (rows, config echo of the last case)."""
    cases = preset_cases(name, overrides=overrides, trials=trials, seed=seed)
    rows: list[ResultRow] = []
    echo: dict = {}
    for case in cases:
        rows += run_case(case, workers=workers)
        echo = case.config.to_dict()
    echo["preset"] = name
    return rows, echo
