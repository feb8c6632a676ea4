"""Exact DoF regions, achieving schedules, and link simulation for the
two-user MIMO broadcast channel with delayed, imperfect-quality CSIT."""

from .errors import (
    AntennaOverflow,
    DegenerateCorner,
    DoflabError,
    InfeasiblePlan,
    InvalidWeight,
    ShapeMismatch,
    SingularCovariance,
    UnboundedRegion,
    WrongCase,
)
from .region import (
    DofPoint,
    DofRegion,
    HalfPlane,
    SystemConfig,
    corner_point,
    delayed_csit_region,
    dof_region,
    is_subset,
    no_csit_region,
    region_equal,
    representative_corner,
)
from .converse import converse_region, outer_bound_rx1_enhanced, outer_bound_rx2_enhanced
from .scheme import (
    DecodingCheck,
    Order2Payload,
    SchedulePlan,
    achievable_region,
    achieved_dof,
    check_decoding_conditions,
    corner_weight,
    order2_payload,
    plan_schedule,
    plan_tdma,
    scheme_region,
    tdma_region,
)
from .simulate import (
    ChannelRealization,
    PhaseMatrices,
    RankCheck,
    ResidualScan,
    SimParams,
    SimReport,
    build_phase_matrices,
    estimate_rates,
    gen_channels,
    quantize_csit,
    rank_check_campaign,
    residual_power_scan,
    run_scheme_rank_check,
)

__version__ = "0.1.0"
