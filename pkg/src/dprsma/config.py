"""Scenario configuration: defaults, JSON loading, feasibility validation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from .channel import (
    CovarianceModel,
    GroupGeometry,
    UserLinkParams,
    build_one_ring_covariance,
    truncate_rank,
)
from .mc import GroupLink, build_group_link
from .precoder import OuterPrecoder, build_outer_precoder
from .schemes import ALL_SCHEMES, ImpairmentParams, PowerAllocation


class ConfigError(ValueError):
    """A configuration fails to parse or violates a feasibility constraint."""


# Reference scenario: 50 dual-polarized pairs, 4 groups of 3 users, groups at
# 30 + 160 g degrees, group ring 30 m at 170 m, fixed 0.7/0.1 power split.
_DEFAULTS = dict(
    m_total=100,
    num_groups=4,
    num_users=3,
    m_bar=6,
    group_azimuth_start_deg=30.0,
    group_azimuth_step_deg=160.0,
    group_distance_m=170.0,
    group_radius_m=30.0,
    user_distances_m=(200.0, 170.0, 140.0),
    delta_gain=4.0e4,
    path_loss_exponent=2.5,
    alpha=0.7,
    chi=0.0,
    xi=0.0,
    csi_error=0.0,
    snr_db_grid=tuple(float(s) for s in range(0, 34, 2)),
    rate_common=0.5,
    rates_private=(0.1, 0.5, 1.2),
    schemes=("pmux",),
    trials_outage=100_000,
    trials_ergodic=20_000,
    seed=20230815,
    observed_group=0,
    antenna_spacing_wavelengths=0.5,
)


@dataclass
class SystemConfig:
    """All scenario scalars; defaults reproduce the reference scenario."""

    m_total: int = _DEFAULTS["m_total"]
    num_groups: int = _DEFAULTS["num_groups"]
    num_users: int = _DEFAULTS["num_users"]
    m_bar: int = _DEFAULTS["m_bar"]
    group_azimuth_start_deg: float = _DEFAULTS["group_azimuth_start_deg"]
    group_azimuth_step_deg: float = _DEFAULTS["group_azimuth_step_deg"]
    group_distance_m: float = _DEFAULTS["group_distance_m"]
    group_radius_m: float = _DEFAULTS["group_radius_m"]
    user_distances_m: tuple = _DEFAULTS["user_distances_m"]
    delta_gain: float = _DEFAULTS["delta_gain"]
    path_loss_exponent: float = _DEFAULTS["path_loss_exponent"]
    alpha: float = _DEFAULTS["alpha"]
    chi: float = _DEFAULTS["chi"]
    xi: float = _DEFAULTS["xi"]
    csi_error: float = _DEFAULTS["csi_error"]
    snr_db_grid: tuple = _DEFAULTS["snr_db_grid"]
    rate_common: float = _DEFAULTS["rate_common"]
    rates_private: tuple = _DEFAULTS["rates_private"]
    schemes: tuple = _DEFAULTS["schemes"]
    trials_outage: int = _DEFAULTS["trials_outage"]
    trials_ergodic: int = _DEFAULTS["trials_ergodic"]
    seed: int = _DEFAULTS["seed"]
    observed_group: int = _DEFAULTS["observed_group"]
    antenna_spacing_wavelengths: float = _DEFAULTS["antenna_spacing_wavelengths"]

    def __post_init__(self):
        self.validate()

    # -- derived quantities -------------------------------------------------

    @property
    def half_antennas(self) -> int:
        return self.m_total // 2

    @property
    def beta(self) -> tuple:
        b = (1.0 - self.alpha) / self.num_users
        return tuple([b] * self.num_users)

    def power_allocation(self) -> PowerAllocation:
        return PowerAllocation(alpha=self.alpha, beta=self.beta)

    def impairments(self) -> ImpairmentParams:
        return ImpairmentParams(chi=self.chi, xi=self.xi, csi_error=self.csi_error)

    def group_geometry(self, g: int) -> GroupGeometry:
        return GroupGeometry(
            azimuth_deg=self.group_azimuth_start_deg + g * self.group_azimuth_step_deg,
            distance_m=self.group_distance_m,
            radius_m=self.group_radius_m,
            user_distances_m=tuple(self.user_distances_m),
        )

    def user_links(self) -> list[UserLinkParams]:
        return [
            UserLinkParams.from_distance(d, self.delta_gain, self.path_loss_exponent)
            for d in self.user_distances_m
        ]

    def noise_variances(self) -> np.ndarray:
        return noise_variance(np.asarray(self.snr_db_grid, dtype=float))

    # -- validation ----------------------------------------------------------

    def validate(self) -> None:
        c = self
        if c.m_total % 2 or c.m_total < 4:
            raise ConfigError(f"m_total must be an even integer >= 4, got {c.m_total}")
        if c.m_bar % 2 or c.m_bar < 2:
            raise ConfigError(f"m_bar must be an even integer >= 2, got {c.m_bar}")
        if c.num_groups < 1 or c.num_users < 1:
            raise ConfigError("num_groups and num_users must be >= 1")
        if len(c.user_distances_m) != c.num_users:
            raise ConfigError(
                f"user_distances_m has {len(c.user_distances_m)} entries for "
                f"{c.num_users} users"
            )
        if len(c.rates_private) != c.num_users:
            raise ConfigError(
                f"rates_private has {len(c.rates_private)} entries for "
                f"{c.num_users} users"
            )
        if not 0 < c.alpha < 1:
            raise ConfigError(f"alpha must lie in (0, 1), got {c.alpha}")
        if not 0 <= c.chi <= 1:
            raise ConfigError(f"chi must lie in [0, 1], got {c.chi}")
        if c.xi < 0:
            raise ConfigError(f"xi must be >= 0, got {c.xi}")
        if not 0 <= c.csi_error <= 1:
            raise ConfigError(f"csi_error must lie in [0, 1], got {c.csi_error}")
        if c.m_bar // 2 <= c.num_users - 1:
            raise ConfigError(
                f"private null space is empty: require m_bar/2 > U - 1, got "
                f"m_bar/2 = {c.m_bar // 2}, U - 1 = {c.num_users - 1}"
            )
        if c.num_groups > 1:
            cap = (c.half_antennas - c.m_bar // 2) // (c.num_groups - 1)
            if cap < c.m_bar // 2:
                raise ConfigError(
                    f"outer precoder infeasible: rank cap {cap} per interfering group "
                    f"cannot support m_bar/2 = {c.m_bar // 2}"
                )
        unknown = set(c.schemes) - set(ALL_SCHEMES)
        if unknown:
            raise ConfigError(f"unknown schemes {sorted(unknown)}; known: {ALL_SCHEMES}")
        if not c.snr_db_grid:
            raise ConfigError("snr_db_grid must not be empty")
        if c.trials_outage < 1 or c.trials_ergodic < 1:
            raise ConfigError("trial counts must be >= 1")
        if not 0 <= c.observed_group < c.num_groups:
            raise ConfigError("observed_group out of range")

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        d = asdict(self)
        for k, v in d.items():
            if isinstance(v, tuple):
                d[k] = list(v)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "SystemConfig":
        known = set(_DEFAULTS)
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        merged = dict(_DEFAULTS)
        merged.update(data)
        for key, value in merged.items():
            default = _DEFAULTS[key]
            try:
                if key == "schemes":
                    merged[key] = tuple(str(s) for s in value)
                elif isinstance(default, tuple):
                    merged[key] = tuple(float(v) for v in value)
                elif isinstance(default, bool):
                    merged[key] = bool(value)
                elif isinstance(default, int):
                    merged[key] = int(value)
                elif isinstance(default, float):
                    merged[key] = float(value)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"field {key!r}: not a valid value ({value!r})") from exc
        try:
            return cls(**merged)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from exc


def noise_variance(snr_db):
    """Noise variance per receive branch for a given SNR in dB.

    Noise is accounted per real dimension (sigma^2 = 2 * 10^(-SNR/10)); this
    single global convention reproduces the reference scenario's reported
    absolute sum rates and cancels out of every analytic-vs-simulation
    comparison.
    """
    return 2.0 * 10.0 ** (-np.asarray(snr_db, dtype=float) / 10.0)


def load_config(source: str | Path | dict | None) -> SystemConfig:
    """Load a config from a JSON file path, inline JSON text, dict, or None."""
    if source is None:
        return SystemConfig()
    if isinstance(source, dict):
        return SystemConfig.from_dict(source)
    text = None
    p = Path(str(source))
    if p.exists():
        text = p.read_text(encoding="utf-8")
    elif str(source).lstrip().startswith("{"):
        text = str(source)
    else:
        raise ConfigError(f"config file not found: {source}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config JSON must be an object")
    return SystemConfig.from_dict(data)


def build_scenario(config: SystemConfig) -> tuple[list[CovarianceModel], list[OuterPrecoder], GroupLink]:
    """Construct covariances, outer precoders and the observed group's link."""
    covs = []
    for g in range(config.num_groups):
        cov = build_one_ring_covariance(
            config.group_geometry(g),
            config.half_antennas,
            config.antenna_spacing_wavelengths,
        )
        covs.append(truncate_rank(cov, config.m_bar, config.num_groups))
    outers = [
        build_outer_precoder(covs, g, config.m_bar) for g in range(config.num_groups)
    ]
    zetas = np.array([l.zeta for l in config.user_links()])
    link = build_group_link(
        covs[config.observed_group], outers[config.observed_group], zetas,
        config.observed_group,
    )
    return covs, outers, link
