"""Three-phase transmission schedules that achieve the region boundary.

For N2 < M the scheme sends user-1 symbols for tau1 slots at
``m1 = min(N1 + alpha2*N2, M)`` streams per slot, user-2 symbols for tau2
slots at ``m2 = min(N2 + alpha1*N1, M)`` streams per slot, then spends tau3
slots retransmitting order-2 combinations (functions useful to both
receivers, built from the overheard-equation estimates) so that each
receiver ends up with as many independent equations as it has symbols:

    s1 <= N1*(tau1 + tau3)        s2 <= N2*(tau2 + tau3)

Durations are planned as exact rationals from a time-sharing weight and then
scaled by the smallest integer that makes all durations and stream counts
whole, so every plan is directly realizable slot by slot.

For M <= N2 plain time sharing is already optimal; ``plan_tdma`` covers that
regime (and degenerate single-user baselines in general).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import AntennaOverflow, InfeasiblePlan, InvalidWeight, WrongCase
from .rational import RatioLike, as_ratio
from .region import DofPoint, DofRegion, HalfPlane, SystemConfig

__all__ = [
    "SchedulePlan",
    "DecodingCheck",
    "Order2Payload",
    "plan_schedule",
    "plan_tdma",
    "corner_weight",
    "achieved_dof",
    "check_decoding_conditions",
    "order2_payload",
    "scheme_region",
    "tdma_region",
    "achievable_region",
]


@dataclass(frozen=True)
class SchedulePlan:
    """Integer-slot schedule: phase durations and per-user symbol totals."""

    tau1: int
    tau2: int
    tau3: int
    s1_count: int
    s2_count: int
    integer_scale: int = 1

    def __post_init__(self):
        for name in ("tau1", "tau2", "tau3", "s1_count", "s2_count"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.total_slots == 0:
            raise ValueError("empty schedule")
        if self.integer_scale < 1:
            raise ValueError("integer_scale must be positive")

    @property
    def total_slots(self) -> int:
        return self.tau1 + self.tau2 + self.tau3

    @classmethod
    def from_durations(
        cls, cfg: SystemConfig, tau1: int, tau2: int, tau3: int
    ) -> "SchedulePlan":
        """Three-phase plan with the standard stream loading for given
        integer durations: s_i = m_i * tau_i. The loads must come out whole.
        """
        s1 = cfg.enhanced_dim(1) * tau1
        s2 = cfg.enhanced_dim(2) * tau2
        if s1.denominator != 1 or s2.denominator != 1:
            raise ValueError(
                "fractional stream totals; scale the durations first"
            )
        return cls(tau1, tau2, tau3, int(s1), int(s2))


@dataclass(frozen=True)
class DecodingCheck:
    """Equation-count slack per receiver: N_i*(tau_i + tau3) - s_i."""

    ok: bool
    slack1: int
    slack2: int


@dataclass(frozen=True)
class Order2Payload:
    """What phase three must deliver.

    k1_needed, k2_needed -- extra equations each receiver still lacks
    length               -- order-2 symbols to send, max(k1, k2)
    per_slot_streams     -- simultaneous streams in each phase-three slot
    """

    k1_needed: int
    k2_needed: int
    length: int
    per_slot_streams: int


def _overhead_ratios(cfg: SystemConfig) -> tuple[Fraction, Fraction]:
    # r_i: phase-three slots needed per slot of phase i to finish user i
    r1 = max(Fraction(0), cfg.enhanced_dim(1) - cfg.n1) / cfg.n1
    r2 = max(Fraction(0), cfg.enhanced_dim(2) - cfg.n2) / cfg.n2
    return r1, r2


def _integerize(values: list[Fraction]) -> tuple[list[int], int]:
    scale = math.lcm(*(v.denominator for v in values))
    return [int(v * scale) for v in values], scale


def _check_weight(weight: RatioLike) -> Fraction:
    w = as_ratio(weight)
    if not 0 <= w <= 1:
        raise InvalidWeight(f"weight must lie in [0, 1], got {w}")
    return w


def plan_schedule(cfg: SystemConfig, weight: RatioLike) -> SchedulePlan:
    """Plan the three-phase scheme for time-sharing weight ``weight``.

    The weight splits the symbol phases (tau1 : tau2 = w : 1-w); phase three
    is sized to the larger of the two per-user equation deficits,
    tau3 = max(r1*tau1, r2*tau2), which makes at least one decoding
    condition exactly tight. Requires N2 < M.
    """
    w = _check_weight(weight)
    if cfg.n2 >= cfg.m:
        raise WrongCase(
            f"three-phase scheme needs N2 < M, got N2={cfg.n2}, M={cfg.m}"
        )
    r1, r2 = _overhead_ratios(cfg)
    t1, t2 = w, 1 - w
    t3 = max(r1 * t1, r2 * t2)
    s1 = cfg.enhanced_dim(1) * t1
    s2 = cfg.enhanced_dim(2) * t2
    (t1i, t2i, t3i, s1i, s2i), scale = _integerize([t1, t2, t3, s1, s2])
    return SchedulePlan(t1i, t2i, t3i, s1i, s2i, scale)


def plan_tdma(cfg: SystemConfig, weight: RatioLike) -> SchedulePlan:
    """Plain time sharing: user i alone for its share of the slots.

    Valid for every antenna configuration (it sends no order-2 payload) and
    optimal when M <= N2. Weight 1 degenerates to a single-user
    point-to-point schedule for user 1, weight 0 to one for user 2.
    """
    w = _check_weight(weight)
    t1, t2 = w, 1 - w
    s1 = cfg.spatial_dim(1) * t1
    s2 = cfg.spatial_dim(2) * t2
    (t1i, t2i, s1i, s2i), scale = _integerize([t1, t2, s1, s2])
    return SchedulePlan(t1i, t2i, 0, s1i, s2i, scale)


def corner_weight(cfg: SystemConfig) -> Fraction:
    """The weight whose plan lands on the region's off-axis corner.

    Balancing the two deficits (r1*tau1 = r2*tau2) makes both decoding
    conditions tight simultaneously, so the achieved pair sits on both
    boundary lines at once. Falls back to 1/2 when neither user needs phase
    three (then every weight is tight and 1/2 picks the midpoint of the
    off-axis edge). Requires N2 < M, like ``plan_schedule``.
    """
    if cfg.n2 >= cfg.m:
        raise WrongCase(
            f"three-phase scheme needs N2 < M, got N2={cfg.n2}, M={cfg.m}"
        )
    r1, r2 = _overhead_ratios(cfg)
    if r1 + r2 == 0:
        return Fraction(1, 2)
    return r2 / (r1 + r2)


def check_decoding_conditions(plan: SchedulePlan, cfg: SystemConfig) -> DecodingCheck:
    """Exact equation-count slacks; ok iff both are nonnegative."""
    slack1 = cfg.n1 * (plan.tau1 + plan.tau3) - plan.s1_count
    slack2 = cfg.n2 * (plan.tau2 + plan.tau3) - plan.s2_count
    return DecodingCheck(slack1 >= 0 and slack2 >= 0, slack1, slack2)


def achieved_dof(plan: SchedulePlan, cfg: SystemConfig) -> DofPoint:
    """DoF pair the plan delivers: symbol totals over total duration."""
    check = check_decoding_conditions(plan, cfg)
    if not check.ok:
        raise InfeasiblePlan(
            f"decoding conditions violated (slacks {check.slack1}, {check.slack2})"
        )
    total = plan.total_slots
    return DofPoint(Fraction(plan.s1_count, total), Fraction(plan.s2_count, total))


def order2_payload(plan: SchedulePlan, cfg: SystemConfig) -> Order2Payload:
    """Size the phase-three payload for a feasible plan.

    k_i = max(0, s_i - N_i*tau_i) equations still owed to receiver i; the
    payload is length K = max(k1, k2); each phase-three slot carries
    ceil(K / tau3) streams, which must fit the transmit array.
    """
    check = check_decoding_conditions(plan, cfg)
    if not check.ok:
        raise InfeasiblePlan(
            f"decoding conditions violated (slacks {check.slack1}, {check.slack2})"
        )
    k1 = max(0, plan.s1_count - cfg.n1 * plan.tau1)
    k2 = max(0, plan.s2_count - cfg.n2 * plan.tau2)
    length = max(k1, k2)
    if length == 0:
        streams = 0
    else:
        # feasibility guarantees tau3 >= 1 here (k_i <= N_i * tau3)
        streams = -(-length // plan.tau3)
        if streams > cfg.m:
            raise AntennaOverflow(
                f"phase three needs {streams} streams with only {cfg.m} antennas"
            )
    return Order2Payload(k1, k2, length, streams)


def scheme_region(cfg: SystemConfig) -> DofRegion:
    """Closure of all pairs the three-phase scheme achieves (N2 < M):

        d1/m1 + d2/N2 <= 1        d1/N1 + d2/m2 <= 1

    As a set this coincides with ``dof_region``; the constraints are written
    in the scheme's native variables, so the identity is a theorem the test
    suite checks, not a restatement.
    """
    if cfg.n2 >= cfg.m:
        raise WrongCase(
            f"three-phase scheme needs N2 < M, got N2={cfg.n2}, M={cfg.m}"
        )
    return DofRegion(
        [
            HalfPlane.from_intercepts(cfg.enhanced_dim(1), cfg.n2),
            HalfPlane.from_intercepts(cfg.n1, cfg.enhanced_dim(2)),
        ]
    )


def tdma_region(cfg: SystemConfig) -> DofRegion:
    """Time-sharing region for M <= N2.

    Two constraints; the symmetric all-antenna one is redundant whenever
    N1 < M, and the binding boundary is d1/min(N1, M) + d2/M <= 1.
    """
    if cfg.m > cfg.n2:
        raise WrongCase(
            f"time sharing is only the full answer for M <= N2, got M={cfg.m}, N2={cfg.n2}"
        )
    return DofRegion(
        [
            HalfPlane.from_intercepts(cfg.m, cfg.m),
            HalfPlane.from_intercepts(cfg.spatial_dim(1), cfg.m),
        ]
    )


def achievable_region(cfg: SystemConfig) -> DofRegion:
    """Whichever scheme applies to the antenna regime."""
    if cfg.n2 < cfg.m:
        return scheme_region(cfg)
    return tdma_region(cfg)
