"""Dual-polarized massive MIMO RSMA: link-level simulator and closed-form analytics."""

from .analytic import (
    AnalyticParams,
    ergodic_common_pdiv,
    ergodic_common_pmux,
    ergodic_private_pdiv,
    ergodic_private_pmux,
    outage_common_pdiv,
    outage_common_pmux,
    outage_common_spmux,
    outage_private_pdiv,
    outage_private_pmux,
    outage_private_spmux,
    outage_sum_rate,
    outage_total,
    phi_factor,
)
from .channel import (
    CovarianceModel,
    DualPolChannelSample,
    GroupGeometry,
    UserLinkParams,
    apply_csi_error,
    build_one_ring_covariance,
    sample_channel,
    truncate_rank,
)
from .config import ConfigError, SystemConfig, build_scenario, load_config, noise_variance
from .mc import GroupLink, TrialPlan, estimate_ergodic, estimate_outage
from .precoder import OuterPrecoder, build_common_precoder, build_outer_precoder, build_private_precoder
from .schemes import (
    EffectiveChannels,
    GroupPrecoders,
    ImpairmentParams,
    PowerAllocation,
    SinrOutcome,
    sinr_baseline,
    sinr_pdiv,
    sinr_pmux,
    sinr_spmux,
)

__version__ = "0.1.0"
