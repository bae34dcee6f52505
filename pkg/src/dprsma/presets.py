"""Experiment presets mirroring the reference figure layouts.

Each preset expands into a list of (config, metric kind, sweep tags): the
runner executes analytic and Monte Carlo pipelines for every curve of the
corresponding figure.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .config import SystemConfig

RATES_A = dict(rate_common=0.5, rates_private=(0.1, 0.5, 1.2))
RATES_B = dict(rate_common=0.5, rates_private=(0.1, 1.0, 2.0))

SUMRATE_SCHEMES = (
    "pmux", "pdiv", "spmux", "sp-rsma", "sp-noma", "sp-sdma", "sp-oma",
    "dp-noma-div", "dp-sdma-div", "dp-sdma-mux",
)


@dataclass(frozen=True)
class PresetCase:
    """One simulation cell of a preset: a full config plus the metric kind."""

    config: SystemConfig
    kind: str            # "outage" | "outage_sum_rate" | "ergodic"
    spmux_net: bool = False


def _base(**overrides) -> SystemConfig:
    return SystemConfig.from_dict(overrides)


def _cases_outage(schemes, chis=(0.0,), xis=(0.0,), rates=RATES_A, **extra):
    cases = []
    for chi in chis:
        for xi in xis:
            cases.append(
                PresetCase(
                    config=_base(schemes=tuple(schemes), chi=chi, xi=xi, **rates, **extra),
                    kind="outage",
                )
            )
    return cases


def _preset_map() -> dict:
    presets = {}
    presets["outage-pmux-ideal"] = _cases_outage(["pmux"])
    presets["outage-pmux-chi"] = _cases_outage(["pmux"], chis=(0.0, 0.01, 0.1))
    presets["outage-pdiv-ideal"] = _cases_outage(["pdiv"])
    presets["outage-pdiv-xi"] = _cases_outage(["pdiv"], chis=(0.001,), xis=(0.0, 0.01, 0.05))
    presets["outage-spmux-ideal"] = _cases_outage(["spmux"])
    presets["outage-spmux-xi"] = _cases_outage(["spmux"], chis=(0.001,), xis=(0.0, 0.01, 0.05))
    presets["outage-compare"] = _cases_outage(
        ["pmux", "pdiv", "spmux"], chis=(0.001,), xis=(0.0, 0.05), rates=RATES_B
    )
    presets["outage-sumrate-vs-snr"] = [
        PresetCase(
            config=_base(schemes=SUMRATE_SCHEMES, chi=0.001, xi=xi, **RATES_B),
            kind="outage_sum_rate",
        )
        for xi in (0.0, 0.05)
    ]
    presets["outage-sumrate-vs-xi"] = [
        PresetCase(
            config=_base(
                schemes=SUMRATE_SCHEMES, chi=0.001, xi=xi, snr_db_grid=(24.0,), **RATES_B
            ),
            kind="outage_sum_rate",
            spmux_net=True,
        )
        for xi in (0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5)
    ]
    presets["ergodic-pmux-chi"] = [
        PresetCase(config=_base(schemes=("pmux",), chi=chi), kind="ergodic")
        for chi in (0.0, 0.001, 0.01)
    ]
    presets["ergodic-pdiv-xi"] = [
        PresetCase(config=_base(schemes=("pdiv",), chi=0.0, xi=xi), kind="ergodic")
        for xi in (0.0, 0.01, 0.05)
    ]
    presets["ergodic-schemes-xi"] = [
        PresetCase(
            config=_base(schemes=("pmux", "pdiv", "spmux", "sp-rsma"), chi=0.001, xi=xi),
            kind="ergodic",
        )
        for xi in (0.0, 0.01, 0.1)
    ]
    presets["ergodic-schemes-chi"] = [
        PresetCase(
            config=_base(schemes=("pmux", "pdiv", "spmux", "sp-rsma"), chi=chi, xi=0.01),
            kind="ergodic",
        )
        for chi in (0.001, 0.01, 0.1)
    ]
    presets["ergodic-all-ma"] = [
        PresetCase(
            config=_base(schemes=SUMRATE_SCHEMES, chi=0.001, xi=xi),
            kind="ergodic",
        )
        for xi in (0.0, 0.1)
    ]
    presets["ergodic-sdma-csi"] = [
        PresetCase(
            config=_base(
                schemes=("pmux", "pdiv", "spmux", "sp-sdma", "dp-sdma-div", "dp-sdma-mux"),
                chi=0.001, xi=0.01, csi_error=0.3,
            ),
            kind="ergodic",
        )
    ]
    return presets


PRESETS = _preset_map()


def list_presets() -> list[str]:
    return sorted(PRESETS)


def preset_cases(
    name: str,
    overrides: dict | None = None,
    trials: int | None = None,
    seed: int | None = None,
) -> list[PresetCase]:
    """Expand a preset, applying user overrides to every case config."""
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(list_presets())}")
    cases = PRESETS[name]
    out = []
    for case in cases:
        cfg = case.config
        patch = dict(overrides or {})
        if trials is not None:
            patch["trials_outage"] = trials
            patch["trials_ergodic"] = trials
        if seed is not None:
            patch["seed"] = seed
        if patch:
            merged = cfg.to_dict()
            merged.update(patch)
            cfg = SystemConfig.from_dict(merged)
        out.append(replace(case, config=cfg))
    return out
