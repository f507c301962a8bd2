"""The dual trivalent tree of triangulations and super Markoff maps.

Vertices of the tree are ideal triangulations of the torus; crossing an
edge flips one arc.  Complementary regions of the tree correspond to
simple closed curves, each carrying the super lambda-length of its dual
arc and a W-invariant; a super Markoff map is this assignment.  At every
vertex with regions (a, b, c) the vertex relation

    a^2 + b^2 + c^2 + a b W_c + a c W_b + b c W_a = h a b c

holds, and across every edge (regions a, d at the ends, b, c flanking)

    a + d + b W_c + c W_b = h b c.

Region identities are Stern-Brocot slopes p/q (the slope of the dual
simple closed curve): the three regions at the sink carry (0,1), (1,0)
and (1,1), and each new region is the mediant of the two flanking it.
The address of a region is the L/R word of its slope in the
Stern-Brocot tree ("L0"/"R0" for the two boundary slopes).

Edges are oriented by comparing the bodies of the two end regions;
walking body-decreasing directions from any start vertex reaches the
unique sink.  Enumeration of the bounded-trace regions
Omega(m) = {regions with body(lambda h) <= m} expands breadth-first from
the sink, pruning any branch as soon as its new region exceeds the
cutoff; bodies strictly increase away from the sink, so the pruned search
is exhaustive.  Pruned-off regions are kept as the frontier for tail
estimates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .grassmann import GrassmannNumber
from .torus import DecoratedTorusState, flip, semi_perimeter, w_invariants

__all__ = [
    "RegionNode",
    "TreeVertexState",
    "NonConvergenceError",
    "vertex_residual",
    "edge_residual",
    "psi",
    "subtree_sum",
    "orient_edge",
    "find_sink",
    "enumerate_regions",
    "region_table_rows",
    "neighbor_asymptotics_report",
    "FIND_SINK_STEP_BUDGET",
]

FIND_SINK_STEP_BUDGET = 10**6


class NonConvergenceError(RuntimeError):
    """The sink walk exceeded its step budget; input data is corrupt."""


@dataclass(frozen=True)
class RegionNode:
    """One complementary region: a simple closed curve with its super data."""

    address: str
    slope: tuple[int, int]
    lam: GrassmannNumber
    w: GrassmannNumber
    neighbors: tuple[GrassmannNumber, GrassmannNumber]

    @property
    def body(self) -> float:
        return self.lam.body

    def sort_key(self):
        return (self.lam.body, self.address)


@dataclass(frozen=True)
class TreeVertexState:
    """A tree vertex: the torus state there plus its three region identities."""

    state: DecoratedTorusState
    regions: tuple[RegionNode, RegionNode, RegionNode]
    h: GrassmannNumber
    steps: int = 0


def _slope_normalize(p: int, q: int) -> tuple[int, int]:
    if q < 0 or (q == 0 and p < 0):
        p, q = -p, -q
    return (p, q)


def _slope_child(
    kept1: tuple[int, int], kept2: tuple[int, int], old: tuple[int, int]
) -> tuple[int, int]:
    """Slope of the region replacing ``old`` across the edge flanked by the kept two.

    The two curves completing a pair of once-intersecting curves are the
    mediant and the co-mediant of their slopes; the flip exchanges them.
    """
    med = _slope_normalize(kept1[0] + kept2[0], kept1[1] + kept2[1])
    if med != old:
        return med
    return _slope_normalize(kept1[0] - kept2[0], kept1[1] - kept2[1])


def _slope_address(slope: tuple[int, int]) -> str:
    """L/R word of the slope in the (sign-extended) Stern-Brocot tree.

    Positive slopes get their usual word from the root 1/1; the boundary
    slopes 0/1 and 1/0 are marked L0 and R0; negative slopes mirror the
    positive tree under an N prefix.
    """
    p, q = slope
    if (p, q) == (0, 1):
        return "L0"
    if (p, q) == (1, 0):
        return "R0"
    prefix = ""
    if p < 0:
        prefix, p = "N", -p
    lo, hi = (0, 1), (1, 0)
    word = []
    cur = (1, 1)
    while cur != (p, q):
        if p * cur[1] < q * cur[0]:  # p/q < cur
            word.append("L")
            hi = cur
        else:
            word.append("R")
            lo = cur
        cur = (lo[0] + hi[0], lo[1] + hi[1])
        if len(word) > 4096:
            raise ValueError(f"slope {slope} is not reduced")
    return prefix + "".join(word)


# ----------------------------------------------------------------------
# relations
# ----------------------------------------------------------------------
def vertex_residual(state: DecoratedTorusState) -> GrassmannNumber:
    """LHS minus RHS of the vertex relation at the state's triangle."""
    a, b, c = state.lambdas()
    wa, wb, wc = w_invariants(state)
    h = semi_perimeter(state)
    return a * a + b * b + c * c + a * b * wc + a * c * wb + b * c * wa - h * a * b * c


def edge_residual(a, b, c, d, w_b, w_c, h) -> GrassmannNumber:
    """LHS minus RHS of the edge relation a + d + (b W_c + c W_b) = h b c."""
    return a + d + b * w_c + c * w_b - h * b * c


def psi(a, b, c, w_a, w_b, h) -> GrassmannNumber:
    """Edge weight for the oriented edge flanked by a, b pointing at region c.

    psi + psi(reversed) = 1 across each edge and the three inward edges at
    a vertex sum to 1.
    """
    return h.inverse() * (c / (a * b) + w_a / (a * 2) + w_b / (b * 2))


# ----------------------------------------------------------------------
# tree walking in (lambda, W) form
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class _R:
    lam: GrassmannNumber
    w: GrassmannNumber
    slope: tuple[int, int]


def _flip_entry(triple: Sequence[_R], i: int, h) -> _R:
    """Region data replacing entry i after the flip across its opposite edge."""
    j, k = [x for x in range(3) if x != i]
    lj, lk, li = triple[j].lam, triple[k].lam, triple[i].lam
    new_lam = (lj * lj + lk * lk + lj * lk * triple[i].w) / li
    return _R(new_lam, triple[i].w, _slope_child(triple[j].slope, triple[k].slope, triple[i].slope))


def _root_triple(state: DecoratedTorusState) -> tuple[_R, _R, _R]:
    lams = state.lambdas()
    ws = w_invariants(state)
    order = sorted(range(3), key=lambda i: (lams[i].body, i))
    slopes = [(0, 1), (1, 0), (1, 1)]
    out = [None, None, None]
    for rank, idx in enumerate(order):
        out[idx] = _R(lams[idx], ws[idx], slopes[rank])
    return tuple(out)


def orient_edge(a_val: GrassmannNumber, d_val: GrassmannNumber):
    """Orientation of the edge between end regions a and d by body comparison.

    Returns "a_to_d" when body(a) < body(d), "d_to_a" when it exceeds it,
    and "flexible" on exact equality.
    """
    if a_val.body < d_val.body:
        return "a_to_d"
    if a_val.body > d_val.body:
        return "d_to_a"
    return "flexible"


def find_sink(start: DecoratedTorusState, budget: int = FIND_SINK_STEP_BUDGET) -> TreeVertexState:
    """Walk body-decreasing flips until no strict decrease remains.

    Flexible directions (equal bodies) are never crossed, so the walk
    cannot oscillate; the terminal vertex has every edge incoming or
    flexible.
    """
    cur = start
    steps = 0
    while True:
        lams = cur.lambdas()
        ws = w_invariants(cur)
        best = None
        for i, edge in enumerate("abc"):
            j, k = [x for x in range(3) if x != i]
            new_body = (
                lams[j] * lams[j] + lams[k] * lams[k] + lams[j] * lams[k] * ws[i]
            ).body / lams[i].body
            if new_body < lams[i].body and (best is None or new_body < best[0]):
                best = (new_body, edge)
        if best is None:
            break
        cur = flip(cur, best[1])
        steps += 1
        if steps > budget:
            raise NonConvergenceError(
                f"sink not found within {budget} steps; state data is corrupt"
            )
    h = semi_perimeter(cur)
    triple = _root_triple(cur)
    regions = tuple(
        RegionNode(
            address=_slope_address(r.slope),
            slope=r.slope,
            lam=r.lam,
            w=r.w,
            neighbors=(triple[(i + 1) % 3].lam, triple[(i + 2) % 3].lam),
        )
        for i, r in enumerate(triple)
    )
    return TreeVertexState(state=cur, regions=regions, h=h, steps=steps)


def _explore(triple, parent, h, cutoff, regions, frontier, check_vertices):
    """Depth-first expansion; deterministic order, prune above the cutoff."""
    stack = [(triple, parent)]
    h_body = h.body
    while stack:
        tri, par = stack.pop()
        if check_vertices is not None:
            check_vertices.append(tri)
        for i in range(3):
            if i == par:
                continue
            newr = _flip_entry(tri, i, h)
            j, k = [x for x in range(3) if x != i]
            node = RegionNode(
                address=_slope_address(newr.slope),
                slope=newr.slope,
                lam=newr.lam,
                w=newr.w,
                neighbors=(tri[j].lam, tri[k].lam),
            )
            if newr.lam.body * h_body <= cutoff:
                if node.slope not in regions:
                    regions[node.slope] = node
                child = list(tri)
                child[i] = newr
                stack.append((tuple(child), i))
            else:
                if node.slope not in frontier:
                    frontier[node.slope] = node
    return regions, frontier


def enumerate_regions(
    state: DecoratedTorusState,
    cutoff: float,
    workers: int = 1,
    return_frontier: bool = False,
    _collect_vertices: list | None = None,
):
    """All regions with body(lambda h) <= cutoff, sorted by (body, address).

    The expansion runs from the sink of the start state.  ``workers``
    partitions the three top-level branches; results are merged and
    sorted, so the output is identical for any worker count.  With
    ``return_frontier`` the pruned boundary regions come back too (for
    tail estimates).
    """
    sink = find_sink(state)
    h = sink.h
    triple = tuple(_R(r.lam, r.w, r.slope) for r in sink.regions)
    regions: dict = {}
    frontier: dict = {}
    for r in sink.regions:
        if r.lam.body * h.body <= cutoff:
            regions[r.slope] = r

    jobs = []
    for i in range(3):
        newr = _flip_entry(triple, i, h)
        j, k = [x for x in range(3) if x != i]
        node = RegionNode(
            address=_slope_address(newr.slope),
            slope=newr.slope,
            lam=newr.lam,
            w=newr.w,
            neighbors=(triple[j].lam, triple[k].lam),
        )
        if newr.lam.body * h.body <= cutoff:
            if node.slope not in regions:
                regions[node.slope] = node
            child = list(triple)
            child[i] = newr
            jobs.append((tuple(child), i))
        else:
            frontier.setdefault(node.slope, node)

    if workers > 1 and len(jobs) > 1:
        from concurrent.futures import ThreadPoolExecutor

        parts = []
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futs = [
                pool.submit(_explore, tri, par, h, cutoff, {}, {}, _collect_vertices)
                for tri, par in jobs
            ]
            parts = [f.result() for f in futs]
        for regs, fron in parts:
            for s, node in regs.items():
                regions.setdefault(s, node)
            for s, node in fron.items():
                frontier.setdefault(s, node)
    else:
        for tri, par in jobs:
            _explore(tri, par, h, cutoff, regions, frontier, _collect_vertices)

    out = sorted(regions.values(), key=RegionNode.sort_key)
    if return_frontier:
        fr = sorted(frontier.values(), key=RegionNode.sort_key)
        return out, fr, sink
    return out


def region_table_rows(regions: Iterable[RegionNode], h: GrassmannNumber):
    """CSV-ready rows: address, slope, body, soul norm, body length."""
    import math

    rows = []
    for r in regions:
        x = r.lam.body * h.body
        body_len = 2.0 * math.acosh(x / 2.0) if x > 2.0 else float("nan")
        rows.append(
            {
                "address": r.address,
                "slope_p": r.slope[0],
                "slope_q": r.slope[1],
                "body_lambda": r.lam.body,
                "norm_soul": r.lam.soul().norm(),
                "body_length": body_len,
            }
        )
    return rows


def region_sidecar(regions: Iterable[RegionNode], h: GrassmannNumber) -> dict:
    """Full Grassmann values of a region list, for the JSON sidecar."""
    return {
        "h": h.to_obj(),
        "regions": [
            {
                "address": r.address,
                "slope": list(r.slope),
                "lambda": r.lam.to_obj(),
                "W": r.w.to_obj(),
                "neighbors": [r.neighbors[0].to_obj(), r.neighbors[1].to_obj()],
            }
            for r in regions
        ],
    }


# ----------------------------------------------------------------------
# finite subtree sums
# ----------------------------------------------------------------------
def subtree_sum(state: DecoratedTorusState, shape: Iterable[tuple[int, ...]]) -> GrassmannNumber:
    """Sum of psi over the oriented boundary edges of a finite subtree.

    ``shape`` lists vertices as direction words from the root vertex of
    ``state`` (the empty word): each step names which of the three
    regions the crossed edge replaces, with no immediate repetition.
    The shape must be connected and contain the root; the sum is 1.
    """
    shape = {tuple(p) for p in shape}
    if () not in shape:
        raise ValueError("subtree must contain the root vertex ()")
    for path in shape:
        if path and path[:-1] not in shape:
            raise ValueError(f"subtree is not connected at {path}")
        if any(path[i] == path[i + 1] for i in range(len(path) - 1)):
            raise ValueError(f"path {path} backtracks")

    h = semi_perimeter(state)
    root = _root_triple(state)

    def vertex_triple(path):
        tri = root
        for d in path:
            newr = _flip_entry(tri, d, h)
            lst = list(tri)
            lst[d] = newr
            tri = tuple(lst)
        return tri

    total = GrassmannNumber.zero(state.n)
    for path in sorted(shape):
        tri = vertex_triple(path)
        parent = path[-1] if path else None
        for d in range(3):
            if d == parent:
                continue
            if path + (d,) in shape:
                continue
            j, k = [x for x in range(3) if x != d]
            total = total + psi(
                tri[j].lam, tri[k].lam, tri[d].lam, tri[j].w, tri[k].w, h
            )
    return total


# ----------------------------------------------------------------------
# asymptotics of the neighbors of a region
# ----------------------------------------------------------------------
def neighbor_asymptotics_report(state: DecoratedTorusState, axis: str, depth: int) -> dict:
    """Growth-rate table for the two neighbor sequences of the axis region.

    b_i are the regions adjacent to the axis region (the twist orbit) and
    c_i the regions one edge farther, wedged between b_i and b_{i+1}.
    Tabulates ||s_2k(b_i)|| / (|i|^k R^|i|) and
    ||s_2k(c_i)|| / (|i|^{2k} R^{2|i|}) with R the body of the twist
    eigenvalue; the ratios stay bounded.
    """
    from .osp12 import eigen_r
    from .torus import _AXIS_TO_FRONT, _permuted, twist_sequence

    base = _permuted(state, _AXIS_TO_FRONT[axis])
    seq = twist_sequence(state, axis, depth + 1)
    aa = base.a
    w_axis = base.mu_product() * base.spin[0]
    h = semi_perimeter(base)
    r_body = eigen_r(aa, h, w_axis).body
    n = state.n
    kmax = n // 2
    rows = []
    for i in range(-depth, depth + 1):
        b_i = seq[i][0]
        c_i = (seq[i][0] ** 2 + seq[i + 1][0] ** 2 + seq[i][0] * seq[i + 1][0] * w_axis) / aa
        row = {"i": i}
        for k in range(1, kmax + 1):
            row[f"b_ratio_k{k}"] = b_i.degree_soul(2 * k).norm() / (
                max(abs(i), 1) ** k * r_body ** abs(i)
            )
            row[f"c_ratio_k{k}"] = c_i.degree_soul(2 * k).norm() / (
                max(abs(i), 1) ** (2 * k) * r_body ** (2 * abs(i))
            )
        rows.append(row)
    return {"R": r_body, "kmax": kmax, "rows": rows}
