"""Exact degrees-of-freedom regions for the two-user MIMO broadcast channel.

The channel has an M-antenna transmitter and receivers with N1 and N2
antennas. CSIT is completely outdated (delayed by at least one coherence
block) and of imperfect quality: the feedback for user i carries
``alpha_i * log2(rho)`` bits per channel coefficient at SNR ``rho``, so
``alpha_i`` in [0, 1] measures how far the fed-back estimate is above the
noise floor (0 = no usable CSIT, 1 = estimation error at the noise floor).

A DoF region here is an intersection of half-planes ``p*d1 + q*d2 <= r`` in
the nonnegative quadrant. All coefficients and all derived quantities
(vertices, areas, corner points) are exact rationals; nothing in this module
touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import DegenerateCorner, UnboundedRegion
from .rational import RatioLike, as_ratio, format_ratio

__all__ = [
    "SystemConfig",
    "HalfPlane",
    "DofPoint",
    "DofRegion",
    "dof_region",
    "no_csit_region",
    "delayed_csit_region",
    "corner_point",
    "representative_corner",
    "is_subset",
    "region_equal",
]


@dataclass(frozen=True)
class SystemConfig:
    """Antenna counts and CSIT qualities of one channel instance.

    m, n1, n2   -- transmit / receive antenna counts (positive integers)
    alpha1, alpha2 -- CSIT quality exponents, exact rationals in [0, 1]
    """

    m: int
    n1: int
    n2: int
    alpha1: Fraction = Fraction(1)
    alpha2: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("m", "n1", "n2"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        for name in ("alpha1", "alpha2"):
            value = as_ratio(getattr(self, name))
            if not 0 <= value <= 1:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
            object.__setattr__(self, name, value)

    def spatial_dim(self, rx: int) -> Fraction:
        """min(N_rx, M): receive dimension actually usable by receiver rx."""
        n = self.n1 if rx == 1 else self.n2
        return Fraction(min(n, self.m))

    def enhanced_dim(self, rx: int) -> Fraction:
        """Receive dimension of receiver rx once the other user's overheard
        equations are credited at that user's CSIT quality:
        min(N_rx + alpha_other * N_other, M). Fractional in general.
        """
        if rx == 1:
            raw = self.n1 + self.alpha2 * self.n2
        else:
            raw = self.n2 + self.alpha1 * self.n1
        return min(raw, Fraction(self.m))

    def with_quality(self, alpha1: RatioLike, alpha2: RatioLike) -> "SystemConfig":
        return SystemConfig(self.m, self.n1, self.n2, as_ratio(alpha1), as_ratio(alpha2))


@dataclass(frozen=True)
class HalfPlane:
    """Constraint ``p*d1 + q*d2 <= r`` with exact nonnegative coefficients."""

    p: Fraction
    q: Fraction
    r: Fraction

    def __post_init__(self):
        for name in ("p", "q", "r"):
            object.__setattr__(self, name, as_ratio(getattr(self, name)))
        if self.p < 0 or self.q < 0 or self.r < 0:
            raise ValueError("half-plane coefficients must be nonnegative")
        if self.p == 0 and self.q == 0:
            raise ValueError("half-plane needs a nonzero normal")

    @classmethod
    def from_intercepts(cls, d1_max: RatioLike, d2_max: RatioLike) -> "HalfPlane":
        """Build ``d1/d1_max + d2/d2_max <= 1`` from positive axis intercepts."""
        x, y = as_ratio(d1_max), as_ratio(d2_max)
        if x <= 0 or y <= 0:
            raise ValueError("intercepts must be positive")
        return cls(1 / x, 1 / y, Fraction(1))

    def evaluate(self, d1: Fraction, d2: Fraction) -> Fraction:
        return self.p * d1 + self.q * d2

    def contains(self, d1: Fraction, d2: Fraction) -> bool:
        return self.evaluate(d1, d2) <= self.r

    def is_tight_at(self, d1: Fraction, d2: Fraction) -> bool:
        return self.evaluate(d1, d2) == self.r

    def to_json_dict(self) -> dict:
        return {"p": format_ratio(self.p), "q": format_ratio(self.q), "r": format_ratio(self.r)}

    @classmethod
    def from_json_dict(cls, data: dict) -> "HalfPlane":
        return cls(as_ratio(data["p"]), as_ratio(data["q"]), as_ratio(data["r"]))


@dataclass(frozen=True)
class DofPoint:
    """A DoF pair (d1, d2), exact."""

    d1: Fraction
    d2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "d1", as_ratio(self.d1))
        object.__setattr__(self, "d2", as_ratio(self.d2))

    def __iter__(self) -> Iterator[Fraction]:
        yield self.d1
        yield self.d2

    def as_floats(self) -> tuple[float, float]:
        return float(self.d1), float(self.d2)


def _coerce_point(point) -> tuple[Fraction, Fraction]:
    d1, d2 = point
    return as_ratio(d1), as_ratio(d2)


@dataclass(frozen=True)
class DofRegion:
    """Intersection of half-planes with the nonnegative quadrant."""

    constraints: tuple[HalfPlane, ...]

    def __init__(self, constraints: Iterable[HalfPlane]):
        object.__setattr__(self, "constraints", tuple(constraints))

    def contains(self, point) -> bool:
        d1, d2 = _coerce_point(point)
        if d1 < 0 or d2 < 0:
            return False
        return all(hp.contains(d1, d2) for hp in self.constraints)

    def vertices(self) -> list[DofPoint]:
        """Corner points of the polygon, counterclockwise starting at (0, 0).

        Every vertex is the exact intersection of two active lines (the
        constraint boundaries plus the two axes). Raises UnboundedRegion if
        some direction of the quadrant is never capped.
        """
        if not any(hp.p > 0 for hp in self.constraints) or not any(
            hp.q > 0 for hp in self.constraints
        ):
            raise UnboundedRegion("region is unbounded in the quadrant")
        lines = [(hp.p, hp.q, hp.r) for hp in self.constraints]
        lines.append((Fraction(1), Fraction(0), Fraction(0)))  # d1 = 0
        lines.append((Fraction(0), Fraction(1), Fraction(0)))  # d2 = 0
        found: set[tuple[Fraction, Fraction]] = set()
        for i in range(len(lines)):
            p1, q1, r1 = lines[i]
            for j in range(i + 1, len(lines)):
                p2, q2, r2 = lines[j]
                det = p1 * q2 - p2 * q1
                if det == 0:
                    continue
                x = (r1 * q2 - r2 * q1) / det
                y = (p1 * r2 - p2 * r1) / det
                if x < 0 or y < 0:
                    continue
                if all(hp.contains(x, y) for hp in self.constraints):
                    found.add((x, y))

        def angle_key(v: tuple[Fraction, Fraction]):
            x, y = v
            if x == 0 and y == 0:
                return (Fraction(-1), Fraction(0))
            # y/(x+y) grows monotonically with the polar angle in the quadrant
            return (y / (x + y), x + y)

        ordered = sorted(found, key=angle_key)
        return [DofPoint(x, y) for x, y in ordered]

    def area(self) -> Fraction:
        """Exact area via the shoelace sum over the ordered vertices."""
        verts = self.vertices()
        if len(verts) < 3:
            return Fraction(0)
        total = Fraction(0)
        for k in range(len(verts)):
            ax, ay = verts[k].d1, verts[k].d2
            bx, by = verts[(k + 1) % len(verts)].d1, verts[(k + 1) % len(verts)].d2
            total += ax * by - bx * ay
        return total / 2

    def to_json_dict(self) -> dict:
        return {
            "constraints": [hp.to_json_dict() for hp in self.constraints],
            "vertices": [
                [format_ratio(v.d1), format_ratio(v.d2)] for v in self.vertices()
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "DofRegion":
        """Rebuild from the serialized constraints (vertices are recomputed)."""
        return cls(HalfPlane.from_json_dict(hp) for hp in data["constraints"])


def dof_region(cfg: SystemConfig) -> DofRegion:
    """The DoF region under delayed CSIT of qualities (alpha1, alpha2).

    Two constraints, one per ordering of the users: weighting user i's
    spatial dimension against the other user's enhanced dimension,

        d1 / min(N1 + alpha2*N2, M) + d2 / min(N2, M)            <= 1
        d1 / min(N1, M)             + d2 / min(N2 + alpha1*N1, M) <= 1
    """
    return DofRegion(
        [
            HalfPlane.from_intercepts(cfg.enhanced_dim(1), cfg.spatial_dim(2)),
            HalfPlane.from_intercepts(cfg.spatial_dim(1), cfg.enhanced_dim(2)),
        ]
    )


def no_csit_region(cfg: SystemConfig) -> DofRegion:
    """Same antenna counts, alpha1 = alpha2 = 0 (feedback carries nothing)."""
    return dof_region(cfg.with_quality(0, 0))


def delayed_csit_region(cfg: SystemConfig) -> DofRegion:
    """Same antenna counts, alpha1 = alpha2 = 1 (perfect delayed CSIT)."""
    return dof_region(cfg.with_quality(1, 1))


def corner_point(cfg: SystemConfig) -> DofPoint:
    """Closed-form intersection of the two boundary lines of ``dof_region``.

    With a = min(N1, M), b = min(N2 + alpha1*N1, M), c = min(N1 + alpha2*N2, M),
    d = min(N2, M), the lines d1/a + d2/b = 1 and d1/c + d2/d = 1 cross at

        ( a*c*(d - b) / (a*d - b*c),  b*d*(a - c) / (a*d - b*c) ).

    Raises DegenerateCorner when the two lines coincide (a = c and b = d),
    which happens exactly when both alphas contribute nothing, e.g.
    alpha1 = alpha2 = 0 or all the mins saturate at M.
    """
    a = cfg.spatial_dim(1)
    b = cfg.enhanced_dim(2)
    c = cfg.enhanced_dim(1)
    d = cfg.spatial_dim(2)
    det = a * d - b * c
    if det == 0:
        raise DegenerateCorner(
            "boundary lines coincide; the region has no off-axis corner"
        )
    return DofPoint(a * c * (d - b) / det, b * d * (a - c) / det)


def representative_corner(cfg: SystemConfig) -> DofPoint:
    """``corner_point`` with a continuity fallback for the degenerate case.

    When the two boundary lines coincide the region is a triangle; return the
    midpoint of its single off-axis edge, which is the limit of the moving
    corner as the qualities shrink (e.g. (1/2, 1/2) for M=2, N1=N2=1,
    alpha -> 0).
    """
    try:
        return corner_point(cfg)
    except DegenerateCorner:
        verts = dof_region(cfg).vertices()
        a, b = verts[-2], verts[-1]
        return DofPoint((a.d1 + b.d1) / 2, (a.d2 + b.d2) / 2)


def is_subset(inner: DofRegion, outer: DofRegion) -> bool:
    """Exact containment test for bounded convex regions (vertex check)."""
    return all(outer.contains(v) for v in inner.vertices())


def region_equal(a: DofRegion, b: DofRegion) -> bool:
    """True when the two regions are the same set of points."""
    return is_subset(a, b) and is_subset(b, a)
