"""Link-level Monte Carlo simulation of the three-phase scheme.

The simulator plays a :class:`~doflab.scheme.SchedulePlan` against i.i.d.
Rayleigh channel draws and measures two fidelities:

* **rank** -- idealized bookkeeping: with exact overheard-equation
  coefficients, does every receiver end up with a full-column-rank linear
  system for its symbols? This validates the schedule combinatorics
  (stream loading, phase-three chunk dealing) independent of SNR.

* **rate** -- finite-SNR mutual information. CSIT imperfection is modeled
  by feeding back each channel coefficient through a uniform quantizer
  with ``alpha * log2(rho)`` bits per complex entry, so the residual power
  decays like ``rho**-alpha``. Phase-three retransmissions are built from
  the quantized coefficients; each receiver cancels what it can
  reconstruct from its own observations, and the irreducible mismatch
  (quantization residual plus reconstruction noise) is treated as extra
  Gaussian noise inside a whitened log-det rate. Fitted rate slopes
  versus ``log2(rho)`` then estimate the achieved DoF pair.

Symbols have unit power; a slot's transmit power ``P = rho * sigma2`` is
split evenly over the streams it carries, so SNR means exactly ``rho``.
All randomness flows from ``numpy.random.default_rng`` seeded per trial
with ``[seed, trial]``; identical parameters reproduce identical reports.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import ShapeMismatch
from .rational import RatioLike, as_ratio
from .region import SystemConfig
from .scheme import SchedulePlan, order2_payload

__all__ = [
    "SimParams",
    "ChannelRealization",
    "PhaseMatrices",
    "RankCheck",
    "SimReport",
    "ResidualScan",
    "gen_channels",
    "quantize_csit",
    "build_phase_matrices",
    "run_scheme_rank_check",
    "rank_check_campaign",
    "estimate_rates",
    "residual_power_scan",
]

QUANTIZER_CLIP = 4.0


@dataclass(frozen=True)
class SimParams:
    """Monte Carlo controls for one campaign."""

    snr_grid_db: tuple[float, ...]
    trials: int = 200
    seed: int = 0
    noise_variance: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "snr_grid_db", tuple(float(s) for s in self.snr_grid_db))
        if len(self.snr_grid_db) < 2:
            raise ValueError("need at least two SNR points to fit a slope")
        if list(self.snr_grid_db) != sorted(self.snr_grid_db):
            raise ValueError("SNR grid must be increasing")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if self.noise_variance <= 0:
            raise ValueError("noise variance must be positive")


@dataclass(eq=False)
class ChannelRealization:
    """Per-slot channel matrices (and, once attached, their CSIT estimates).

    ``h1``/``h2`` have shape (slots, N_i, M). The additive decomposition
    ``h = h_hat + residual`` holds exactly by construction.
    """

    h1: np.ndarray
    h2: np.ndarray
    h1_hat: np.ndarray | None = None
    h2_hat: np.ndarray | None = None

    @property
    def total_slots(self) -> int:
        return self.h1.shape[0]

    def with_csit(self, cfg: SystemConfig, rho: float) -> "ChannelRealization":
        """Attach quantized estimates at the configuration's qualities."""
        return replace(
            self,
            h1_hat=quantize_csit(self.h1, cfg.alpha1, rho),
            h2_hat=quantize_csit(self.h2, cfg.alpha2, rho),
        )

    @property
    def h1_residual(self) -> np.ndarray:
        return self.h1 - self.h1_hat

    @property
    def h2_residual(self) -> np.ndarray:
        return self.h2 - self.h2_hat


@dataclass(eq=False)
class PhaseMatrices:
    """Unscaled block-diagonal stacks of the two symbol phases.

    Rows group by slot (N_i rows each); columns are symbols. Entry blocks
    follow the big-first per-slot stream loading of the plan.
    """

    rx1_phase1: np.ndarray  # (N1*tau1, s1)
    rx2_phase1: np.ndarray  # (N2*tau1, s1)
    rx1_phase2: np.ndarray  # (N1*tau2, s2)
    rx2_phase2: np.ndarray  # (N2*tau2, s2)


@dataclass(frozen=True)
class RankCheck:
    """Idealized solvability of one realization: per-receiver ranks."""

    rx1_ok: bool
    rx2_ok: bool
    rx1_rank: int
    rx2_rank: int
    rx1_needed: int
    rx2_needed: int


@dataclass(eq=False)
class SimReport:
    """Campaign output: ergodic rates per SNR point plus fitted slopes."""

    snr_grid_db: tuple[float, ...]
    rates: np.ndarray  # (len(grid), 2) bits per slot
    slopes: tuple[float, float]
    trials: int
    backend: str
    rank_passes: tuple[int, int] | None = None
    rank_trials: int = 0

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["snr_db", "rx", "rate_bits_per_slot", "trials"])
        for si, snr in enumerate(self.snr_grid_db):
            for rx in (1, 2):
                writer.writerow([repr(snr), rx, repr(float(self.rates[si, rx - 1])), self.trials])
        return buf.getvalue()

    def to_json_dict(self) -> dict:
        rank = None
        if self.rank_passes is not None:
            rank = {
                "rx1_passes": self.rank_passes[0],
                "rx2_passes": self.rank_passes[1],
                "trials": self.rank_trials,
            }
        return {
            "snr_db": list(self.snr_grid_db),
            "rate_bits_per_slot": {
                "rx1": [float(r) for r in self.rates[:, 0]],
                "rx2": [float(r) for r in self.rates[:, 1]],
            },
            "slope": {"rx1": self.slopes[0], "rx2": self.slopes[1]},
            "trials": self.trials,
            "backend": self.backend,
            "rank_check": rank,
        }


@dataclass(eq=False)
class ResidualScan:
    """Mean quantization-residual power across an SNR grid, with the
    fitted log-log slope (ideal value: minus the CSIT quality)."""

    snr_grid_db: tuple[float, ...]
    mean_power: list[float]
    slope: float


def gen_channels(cfg: SystemConfig, total_slots: int, seed) -> ChannelRealization:
    """Draw i.i.d. unit-variance complex Gaussian channels for both users.

    ``seed`` may be an int or a sequence of ints (the campaign drivers pass
    ``[seed, trial]`` so trials are independent but reproducible).
    """
    if total_slots < 1:
        raise ValueError("total_slots must be positive")
    rng = np.random.default_rng(seed)
    shape1 = (total_slots, cfg.n1, cfg.m)
    shape2 = (total_slots, cfg.n2, cfg.m)
    h1 = (rng.standard_normal(shape1) + 1j * rng.standard_normal(shape1)) / np.sqrt(2)
    h2 = (rng.standard_normal(shape2) + 1j * rng.standard_normal(shape2)) / np.sqrt(2)
    return ChannelRealization(h1, h2)


def quantize_csit(h: np.ndarray, alpha: RatioLike, rho: float) -> np.ndarray:
    """Uniform feedback quantizer at quality ``alpha``.

    Budget ``alpha * log2(rho)`` bits per complex coefficient, i.e. step
    ``sqrt(6) * rho**(-alpha/2)`` on each real axis (clipped at +-4), which
    makes the mean residual power ``rho**-alpha`` inside the clip region.
    ``alpha == 0`` returns the all-zero estimate; ``alpha == 1`` puts the
    residual at the noise floor relative to the transmit power.
    """
    a = float(as_ratio(alpha))
    if not 0 <= a <= 1:
        raise ValueError(f"alpha must lie in [0, 1], got {a}")
    if rho <= 0:
        raise ValueError("rho must be positive")
    if a == 0:
        return np.zeros_like(h)
    step = math.sqrt(6.0) * rho ** (-a / 2.0)
    re = np.clip(h.real, -QUANTIZER_CLIP, QUANTIZER_CLIP)
    im = np.clip(h.imag, -QUANTIZER_CLIP, QUANTIZER_CLIP)
    return step * np.round(re / step) + 1j * step * np.round(im / step)


def _spread(total: int, slots: int) -> list[int]:
    """Per-slot stream loads, largest first, summing to ``total``."""
    if slots == 0:
        return []
    base, extra = divmod(total, slots)
    return [base + 1 if t < extra else base for t in range(slots)]


def _stack_blocks(
    slices: np.ndarray, loads: list[int], scales: list[float] | None = None
) -> np.ndarray:
    """Block-diagonal stack: slot t contributes its first ``loads[t]``
    columns (optionally scaled) at the running column offset."""
    rows_per = slices.shape[1] if slices.ndim == 3 else 0
    total = sum(loads)
    out = np.zeros((rows_per * len(loads), total), dtype=np.complex128)
    off = 0
    for t, load in enumerate(loads):
        if load == 0:
            continue
        block = slices[t][:, :load]
        if scales is not None:
            block = scales[t] * block
        out[t * rows_per : (t + 1) * rows_per, off : off + load] = block
        off += load
    return out


class _PlanGeometry:
    """Shared index bookkeeping for one (config, plan) pair."""

    def __init__(self, cfg: SystemConfig, plan: SchedulePlan):
        self.cfg = cfg
        self.plan = plan
        self.payload = order2_payload(plan, cfg)  # validates feasibility
        self.loads1 = _spread(plan.s1_count, plan.tau1)
        self.loads2 = _spread(plan.s2_count, plan.tau2)
        # deal retransmitted symbols round-robin over the phase-three slots:
        # slot t serves indices congruent to t, which caps each slot's
        # user-i-carrying count at ceil(k_i / tau3) <= N_i
        self.chunks = [
            [j for j in range(self.payload.length) if j % plan.tau3 == t]
            for t in range(plan.tau3)
        ]

    def slot_of_phase1_row(self, row: int) -> int:
        return row // self.cfg.n2  # rows of the rx2 phase-one stack

    def slot_of_phase2_row(self, row: int) -> int:
        return row // self.cfg.n1  # rows of the rx1 phase-two stack


def build_phase_matrices(realization: ChannelRealization, plan: SchedulePlan,
                         cfg: SystemConfig) -> PhaseMatrices:
    """Stack the true channels of the two symbol phases (unscaled)."""
    if realization.total_slots < plan.total_slots:
        raise ShapeMismatch(
            f"realization has {realization.total_slots} slots, plan needs {plan.total_slots}"
        )
    if realization.h1.shape[1] != cfg.n1 or realization.h2.shape[1] != cfg.n2 \
            or realization.h1.shape[2] != cfg.m:
        raise ShapeMismatch("realization dimensions do not match the configuration")
    loads1 = _spread(plan.s1_count, plan.tau1)
    loads2 = _spread(plan.s2_count, plan.tau2)
    p2 = slice(plan.tau1, plan.tau1 + plan.tau2)
    return PhaseMatrices(
        rx1_phase1=_stack_blocks(realization.h1[: plan.tau1], loads1),
        rx2_phase1=_stack_blocks(realization.h2[: plan.tau1], loads1),
        rx1_phase2=_stack_blocks(realization.h1[p2], loads2),
        rx2_phase2=_stack_blocks(realization.h2[p2], loads2),
    )


def _ideal_payload_rows(geom: _PlanGeometry, phases: PhaseMatrices):
    """Order-2 coefficient rows with perfect estimates (rank fidelity)."""
    k1, k2 = geom.payload.k1_needed, geom.payload.k2_needed
    s1, s2 = geom.plan.s1_count, geom.plan.s2_count
    rows1 = np.zeros((geom.payload.length, s1), dtype=np.complex128)
    rows2 = np.zeros((geom.payload.length, s2), dtype=np.complex128)
    rows1[:k1] = phases.rx2_phase1[:k1]
    rows2[:k2] = phases.rx1_phase2[:k2]
    return rows1, rows2


def run_scheme_rank_check(
    cfg: SystemConfig, plan: SchedulePlan, seed, rtol: float = 1e-9
) -> RankCheck:
    """One idealized realization: does each receiver's stacked linear
    system reach full column rank for its own symbols?

    Uses the true channel as the order-2 coefficients and assumes exact
    cancellation of the cross part, so failures isolate schedule defects
    (not enough equations routed to some receiver) rather than SNR effects.
    """
    geom = _PlanGeometry(cfg, plan)
    realization = gen_channels(cfg, max(plan.total_slots, 1), seed)
    phases = build_phase_matrices(realization, plan, cfg)
    rows1, rows2 = _ideal_payload_rows(geom, phases)

    sys1 = [phases.rx1_phase1]
    sys2 = [phases.rx2_phase2]
    base3 = plan.tau1 + plan.tau2
    for t, chunk in enumerate(geom.chunks):
        q = len(chunk)
        if q == 0:
            continue
        w1 = realization.h1[base3 + t][:, :q]
        w2 = realization.h2[base3 + t][:, :q]
        sys1.append(w1 @ rows1[chunk])
        sys2.append(w2 @ rows2[chunk])

    s1, s2 = plan.s1_count, plan.s2_count
    rank1 = kernels.numerical_rank(np.vstack(sys1), rtol) if s1 else 0
    rank2 = kernels.numerical_rank(np.vstack(sys2), rtol) if s2 else 0
    return RankCheck(rank1 == s1, rank2 == s2, rank1, rank2, s1, s2)


def rank_check_campaign(
    cfg: SystemConfig, plan: SchedulePlan, params: SimParams, rtol: float = 1e-9
) -> tuple[int, int]:
    """Count rank-check passes per receiver over ``params.trials`` draws."""
    passes = [0, 0]
    for trial in range(params.trials):
        check = run_scheme_rank_check(cfg, plan, [params.seed, trial], rtol)
        passes[0] += check.rx1_ok
        passes[1] += check.rx2_ok
    return passes[0], passes[1]


def _row_powers(loads: list[int], rows_per_slot: int, power: float) -> np.ndarray:
    """Per-row transmit power of a phase stack (0 for empty slots)."""
    out = np.zeros(rows_per_slot * len(loads))
    for t, load in enumerate(loads):
        if load:
            out[t * rows_per_slot : (t + 1) * rows_per_slot] = power / load
    return out


def _phase3_blocks(geom, realization, est1, est2, res1, res2, pow1, pow2,
                   power, sigma2):
    """Per-receiver phase-three pieces for the rate model.

    Returns (gain rows, mismatch rows, extra noise blocks) for each
    receiver. Gain rows carry the receiver's own symbols; mismatch rows map
    the other user's symbols through the quantization residual left after
    cancellation; the extra blocks hold the reconstruction thermal noise
    lifted through the phase-three channel.
    """
    cfg, plan = geom.cfg, geom.plan
    k1, k2 = geom.payload.k1_needed, geom.payload.k2_needed
    base3 = plan.tau1 + plan.tau2
    out = {1: ([], [], []), 2: ([], [], [])}
    for t, chunk in enumerate(geom.chunks):
        q = len(chunk)
        if q == 0:
            continue
        gains = np.zeros(q)
        for qi, j in enumerate(chunk):
            pw = 0.0
            if j < k1:
                pw += float(np.sum(np.abs(est1[j]) ** 2))
            if j < k2:
                pw += float(np.sum(np.abs(est2[j]) ** 2))
            if pw > 0:
                gains[qi] = math.sqrt(power / q / pw)
        w1 = realization.h1[base3 + t][:, :q] * gains[None, :]
        w2 = realization.h2[base3 + t][:, :q] * gains[None, :]

        own1 = np.zeros((q, plan.s1_count), dtype=np.complex128)
        cross1 = np.zeros((q, plan.s2_count), dtype=np.complex128)
        evar1 = np.zeros(q)
        own2 = np.zeros((q, plan.s2_count), dtype=np.complex128)
        cross2 = np.zeros((q, plan.s1_count), dtype=np.complex128)
        evar2 = np.zeros(q)
        for qi, j in enumerate(chunk):
            if j < k1:
                own1[qi] = est1[j]
                cross2[qi] = res1[j]
                evar2[qi] = sigma2 / pow1[j]
            if j < k2:
                own2[qi] = est2[j]
                cross1[qi] = res2[j]
                evar1[qi] = sigma2 / pow2[j]
        out[1][0].append(w1 @ own1)
        out[1][1].append(w1 @ cross1)
        out[1][2].append((w1 * evar1[None, :]) @ w1.conj().T)
        out[2][0].append(w2 @ own2)
        out[2][1].append(w2 @ cross2)
        out[2][2].append((w2 * evar2[None, :]) @ w2.conj().T)
    return out


def _receiver_rate(own_phase, gain_blocks, mismatch_blocks, extra_blocks,
                   sigma2, total_slots):
    """Whitened log-det rate of one receiver's stacked system, per slot."""
    n_own = own_phase.shape[0]
    if gain_blocks:
        g3 = np.vstack(gain_blocks)
        mism = np.vstack(mismatch_blocks)
        n3 = g3.shape[0]
        sig3 = sigma2 * np.eye(n3, dtype=np.complex128) + mism @ mism.conj().T
        off = 0
        for blk in extra_blocks:
            b = blk.shape[0]
            sig3[off : off + b, off : off + b] += blk
            off += b
        g = np.vstack([own_phase, g3])
        sigma = np.zeros((n_own + n3, n_own + n3), dtype=np.complex128)
        sigma[:n_own, :n_own] = sigma2 * np.eye(n_own)
        sigma[n_own:, n_own:] = sig3
    else:
        g = own_phase
        sigma = sigma2 * np.eye(n_own, dtype=np.complex128)
    return kernels.logdet_rate_bits(g, sigma) / total_slots


def estimate_rates(cfg: SystemConfig, plan: SchedulePlan, params: SimParams) -> SimReport:
    """Ergodic achievable rates of the plan across the SNR grid.

    Per trial and SNR point the transmitter quantizes the delayed CSIT at
    the configured qualities, builds the phase-three payload from the
    estimates, and each receiver decodes its stacked system with the
    cancellation mismatch folded into the noise covariance. Rates are in
    bits per slot; the returned slopes are least-squares fits against
    ``log2(rho)`` over the top half of the grid.
    """
    geom = _PlanGeometry(cfg, plan)
    sigma2 = params.noise_variance
    total = plan.total_slots
    k1, k2 = geom.payload.k1_needed, geom.payload.k2_needed
    p2 = slice(plan.tau1, plan.tau1 + plan.tau2)

    rates = np.zeros((len(params.snr_grid_db), 2))
    for trial in range(params.trials):
        realization = gen_channels(cfg, total, [params.seed, trial])
        for si, snr_db in enumerate(params.snr_grid_db):
            rho = 10.0 ** (snr_db / 10.0)
            power = rho * sigma2
            h1_hat = quantize_csit(realization.h1, cfg.alpha1, rho)
            h2_hat = quantize_csit(realization.h2, cfg.alpha2, rho)

            scales1 = [math.sqrt(power / u) if u else 0.0 for u in geom.loads1]
            scales2 = [math.sqrt(power / v) if v else 0.0 for v in geom.loads2]
            own_rx1 = _stack_blocks(realization.h1[: plan.tau1], geom.loads1, scales1)
            own_rx2 = _stack_blocks(realization.h2[p2], geom.loads2, scales2)

            # order-2 coefficient rows (estimates) and their residuals
            est1 = _stack_blocks(h2_hat[: plan.tau1], geom.loads1)[:k1]
            res1 = _stack_blocks(
                realization.h2[: plan.tau1] - h2_hat[: plan.tau1], geom.loads1
            )[:k1]
            est2 = _stack_blocks(h1_hat[p2], geom.loads2)[:k2]
            res2 = _stack_blocks(realization.h1[p2] - h1_hat[p2], geom.loads2)[:k2]
            pow1 = _row_powers(geom.loads1, cfg.n2, power)[:k1]
            pow2 = _row_powers(geom.loads2, cfg.n1, power)[:k2]

            blocks = _phase3_blocks(
                geom, realization, est1, est2, res1, res2, pow1, pow2, power, sigma2
            )
            rates[si, 0] += _receiver_rate(own_rx1, *blocks[1], sigma2, total)
            rates[si, 1] += _receiver_rate(own_rx2, *blocks[2], sigma2, total)
    rates /= params.trials

    slopes = (
        _fit_slope(params.snr_grid_db, rates[:, 0]),
        _fit_slope(params.snr_grid_db, rates[:, 1]),
    )
    return SimReport(
        snr_grid_db=params.snr_grid_db,
        rates=rates,
        slopes=slopes,
        trials=params.trials,
        backend=kernels.backend,
    )


def _fit_slope(snr_grid_db, values) -> float:
    """Least-squares slope of rate versus log2(rho), top half of the grid."""
    x = np.asarray(snr_grid_db, dtype=float) * (math.log2(10.0) / 10.0)
    y = np.asarray(values, dtype=float)
    top = slice(len(x) // 2, len(x))
    design = np.vstack([x[top], np.ones(len(x) - len(x) // 2)]).T
    slope, _ = np.linalg.lstsq(design, y[top], rcond=None)[0]
    return float(slope)


def residual_power_scan(
    alpha: RatioLike, snr_grid_db, seed, entries: int = 100_000
) -> ResidualScan:
    """Mean quantizer-residual power per SNR point and its log-log slope.

    The fitted slope of ``log10(mean power)`` against ``log10(rho)`` should
    sit near ``-alpha``.
    """
    grid = tuple(float(s) for s in snr_grid_db)
    rng = np.random.default_rng(seed)
    draws = (rng.standard_normal(entries) + 1j * rng.standard_normal(entries)) / np.sqrt(2)
    means = []
    for snr_db in grid:
        rho = 10.0 ** (snr_db / 10.0)
        hat = quantize_csit(draws, alpha, rho)
        means.append(float(np.mean(np.abs(draws - hat) ** 2)))
    x = np.array([snr / 10.0 for snr in grid])  # log10(rho)
    y = np.log10(np.maximum(means, 1e-300))
    design = np.vstack([x, np.ones(len(x))]).T
    slope, _ = np.linalg.lstsq(design, y, rcond=None)[0]
    return ResidualScan(grid, means, float(slope))
