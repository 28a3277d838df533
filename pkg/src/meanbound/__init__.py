"""Power means, exponential means and sharp bounds on the ratio of two power means."""

from .bounds import (
    BoundInputs,
    BoundReport,
    cargo_shisha,
    cargo_shisha_raw,
    cubic_identity_check,
    exp_mean_diff_bound,
    f,
    kantorovich_bound,
    lemma_uv_lhs,
    log_sinch,
    new_bound,
    sinch,
)
from .errors import DomainError
from .extremal import (
    SharpnessProbeResult,
    TwoPointConfig,
    gap_report,
    sharpness_probe,
    sup_ratio,
    two_point_ratio,
)
from .means_core import exponential_mean, log_power_mean, power_mean, ratio, spread_gamma
from .verify import CampaignConfig, CampaignReport, run_all, run_property

__version__ = "0.1.0"
