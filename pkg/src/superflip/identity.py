"""Truncated sums for the super McShane identity and spectrum diagnostics.

Each simple closed curve (a complementary region of the dual tree with
super lambda-length ``a``, edge invariant ``W`` and semi-perimeter ``h``)
contributes

    1/(a h r) + W/(2 a h),       r = (a h - W + sqrt((a h - W)^2 - 4))/2,

equivalently, with super length ``l = 2 log r``,

    1/(e^l + 1) + (W/4) sinh(l/2) / cosh(l/2)^2 ,

and the sum over all curves is exactly one half.  The series is
absolutely convergent, so the summation order is mathematically free; it
is fixed (ascending body, then address) and accumulated with compensated
summation per Grassmann component so reports are reproducible to the
byte for any worker count.

The tail of a truncated sum is estimated from the pruned frontier:
``C = max ||summand|| sqrt(body)`` over the enumerated prefix, applied as
``C / sqrt(body)`` to each frontier region.  Body-soul comparison and
quadratic growth counting of ``N(L) = #{log||a|| < L}`` round out the
diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .grassmann import DomainError, GrassmannNumber
from .markoff import RegionNode, enumerate_regions, region_table_rows
from .torus import DecoratedTorusState, semi_perimeter

__all__ = [
    "IdentityReport",
    "InsufficientCutoffError",
    "summand_region",
    "summand_geodesic",
    "region_length",
    "verify_identity",
    "body_soul_report",
    "growth_count",
    "cutoff_from_length",
]


class InsufficientCutoffError(ValueError):
    """Enumeration cutoff too small for the requested count to be complete."""


def cutoff_from_length(body_length: float) -> float:
    """Translate a geodesic body-length cutoff into a cutoff on body(a h)."""
    return 2.0 * math.cosh(body_length / 2.0)


def _r_value(x: GrassmannNumber) -> GrassmannNumber:
    if x.body <= 2.0:
        raise DomainError(f"trace body {x.body:.6g} <= 2: not a hyperbolic class")
    return (x + (x * x - 4).sqrt()) * 0.5


def summand_region(lam: GrassmannNumber, h: GrassmannNumber, w: GrassmannNumber) -> GrassmannNumber:
    """Identity summand in region form, 1/(a h r) + W/(2 a h)."""
    ah = lam * h
    r = _r_value(ah - w)
    return (ah * r).inverse() + w * (ah * 2).inverse()


def summand_geodesic(ell: GrassmannNumber, w: GrassmannNumber) -> GrassmannNumber:
    """Identity summand in length form, 1/(e^l + 1) + (W/4) sinh(l/2)/cosh^2(l/2)."""
    if ell.body <= 0.0:
        raise DomainError("geodesic length needs positive body")
    half = ell * 0.5
    ch = half.cosh()
    return (ell.exp() + 1).inverse() + (w * 0.25) * half.sinh() * (ch * ch).inverse()


def region_length(lam: GrassmannNumber, h: GrassmannNumber, w: GrassmannNumber) -> GrassmannNumber:
    """Super length of the curve dual to the region: 2 log r."""
    return _r_value(lam * h - w).log() * 2.0


def _neumaier(values: list[float]) -> float:
    total = 0.0
    comp = 0.0
    for v in values:
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
    return total + comp


def _compensated_grassmann_sum(terms: list[GrassmannNumber], n: int) -> GrassmannNumber:
    coeffs = {}
    for mask in range(1 << n):
        vals = [t._c.get(mask, 0.0) for t in terms]
        if any(vals):
            coeffs[mask] = _neumaier(vals)
    return GrassmannNumber(n, coeffs)


@dataclass
class IdentityReport:
    """Everything a truncated identity run produces."""

    cutoff: float
    cutoff_length: float
    region_count: int
    partial_sum: GrassmannNumber
    deviation_body: float
    deviation_norm: float
    tail_bound: float
    tol_body: float
    tol_norm: float
    converged: bool
    spin_class: int
    workers: int
    body_soul_M: float
    body_soul_delta: float
    body_soul_violations: list = field(default_factory=list)
    growth: list = field(default_factory=list)
    rows: list = field(default_factory=list)

    def to_obj(self) -> dict:
        return {
            "cutoff": self.cutoff,
            "cutoff_length": self.cutoff_length,
            "region_count": self.region_count,
            "partial_sum": self.partial_sum.to_obj(),
            "deviation_body": self.deviation_body,
            "deviation_norm": self.deviation_norm,
            "tail_bound": self.tail_bound,
            "tol_body": self.tol_body,
            "tol_norm": self.tol_norm,
            "converged": self.converged,
            "spin_class": self.spin_class,
            "body_soul_M": self.body_soul_M,
            "body_soul_delta": self.body_soul_delta,
            "body_soul_violations": self.body_soul_violations,
            "growth": self.growth,
        }


def verify_identity(
    state: DecoratedTorusState,
    cutoff_length: float = 24.0,
    tol_body: float = 1e-6,
    tol_norm: float = 1e-5,
    delta: float = 0.5,
    workers: int = 1,
    growth_points: int = 10,
) -> IdentityReport:
    """Sum the identity over all curves below the cutoff and compare with 1/2.

    The deviation is reported for the body alone and for the full
    Grassmann norm; ``converged`` records whether each stays within its
    tolerance plus the calibrated tail bound.
    """
    cutoff = cutoff_from_length(cutoff_length)
    regions, frontier, sink = enumerate_regions(
        state, cutoff, workers=workers, return_frontier=True
    )
    h = sink.h
    n = state.n

    terms = [summand_region(r.lam, h, r.w) for r in regions]
    partial = _compensated_grassmann_sum(terms, n)
    dev = partial - 0.5
    deviation_body = abs(dev.body)
    deviation_norm = dev.norm()

    # tail: C fitted on the enumerated prefix, applied to the frontier
    c_fit = 0.0
    for r, t in zip(regions, terms):
        c_fit = max(c_fit, t.norm() * math.sqrt(r.body))
    tail = sum(c_fit / math.sqrt(fr.body) for fr in frontier)

    converged = deviation_body <= tol_body + tail and deviation_norm <= tol_norm + tail

    m_val, violations = body_soul_report(regions, delta)

    l_max = math.log(cutoff / h.body) / 2.0
    grid = [l_max * (i + 1) / growth_points for i in range(growth_points)]
    growth = growth_count(regions, grid, cutoff, h.body, safety=2.0)

    rows = region_table_rows(regions, h)
    for row, t in zip(rows, terms):
        row["summand_body"] = t.body
        row["summand_norm"] = t.norm()

    return IdentityReport(
        cutoff=cutoff,
        cutoff_length=cutoff_length,
        region_count=len(regions),
        partial_sum=partial,
        deviation_body=deviation_body,
        deviation_norm=deviation_norm,
        tail_bound=tail,
        tol_body=tol_body,
        tol_norm=tol_norm,
        converged=converged,
        spin_class=state.spin_class(),
        workers=workers,
        body_soul_M=m_val,
        body_soul_delta=delta,
        body_soul_violations=violations,
        growth=growth,
        rows=rows,
    )


def body_soul_report(regions: list[RegionNode], delta: float) -> tuple[float, list]:
    """Max of ||soul(a)|| / body(a)^(1+delta) plus a prefix sanity check.

    The first 100 regions in body order set a reference maximum; later
    regions exceeding ten times it are flagged (a diagnostic, not a
    theorem-level assertion).
    """
    if not regions:
        raise ValueError("empty region list")
    ordered = sorted(regions, key=RegionNode.sort_key)
    ratios = [r.lam.soul().norm() / r.body ** (1.0 + delta) for r in ordered]
    m_val = max(ratios)
    prefix_max = max(ratios[:100])
    violations = [
        {"address": r.address, "ratio": ratio, "prefix_max": prefix_max}
        for r, ratio in zip(ordered[100:], ratios[100:])
        if ratio > 10.0 * prefix_max
    ]
    return m_val, violations


def growth_count(
    regions: list[RegionNode],
    l_grid: list[float],
    cutoff: float,
    h_body: float,
    safety: float = 2.0,
) -> list[dict]:
    """Counts N(L) = #{log||a|| < L} together with the classical comparison.

    Refuses when the enumeration cannot be complete below max(L): every
    region with log body below L must have body(a h) within the cutoff,
    with a safety factor for the soul part of the norm.
    """
    l_max = max(l_grid)
    required = math.exp(l_max) * safety * h_body
    if cutoff < required:
        raise InsufficientCutoffError(
            f"cutoff {cutoff:.6g} insufficient for L_max={l_max:.4g}; "
            f"need body(a h) cutoff >= {required:.6g}"
        )
    out = []
    for L in l_grid:
        n_super = sum(1 for r in regions if math.log(r.lam.norm()) < L)
        n_body = sum(1 for r in regions if math.log(r.body) < L)
        out.append(
            {
                "L": L,
                "N_super": n_super,
                "N_body": n_body,
                "N_super_over_L2": n_super / (L * L) if L > 0 else float("nan"),
            }
        )
    return out
