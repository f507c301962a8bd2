import math
import random

import pytest

from superflip.grassmann import GrassmannNumber as G, allclose
from superflip import markoff as M
from superflip import torus as T

N = 2


def unit_state(sigma=None, theta=None, spin=(1, 1, 1)):
    sc = lambda v: G.scalar(N, v)
    return T.DecoratedTorusState(
        sc(1), sc(1), sc(1),
        sigma if sigma is not None else G.zero(N),
        theta if theta is not None else G.zero(N),
        spin=spin,
    )


def super_unit_state(spin=(1, 1, 1)):
    b1, b2 = G.generator(N, 1), G.generator(N, 2)
    return unit_state(sigma=b1 * 0.1, theta=b2 * 0.1, spin=spin)


# ----------------------------------------------------------------------
# vertex and edge relations
# ----------------------------------------------------------------------
def test_vertex_residual_classical():
    assert M.vertex_residual(unit_state()).norm() == 0.0


def test_edge_residual_classical_flip_instance():
    sc = lambda v: G.scalar(N, v)
    z = G.zero(N)
    # (a, d) = (1, 2) across the edge flanked by b = c = 1, h = 3
    res = M.edge_residual(sc(1), sc(1), sc(1), sc(2), z, z, sc(3))
    assert res.norm() == 0.0


def test_residuals_on_random_super_states(rng):
    for _ in range(60):
        st = T.random_state(rng)
        h = T.semi_perimeter(st)
        scale = (h * st.a * st.b * st.c).norm()
        assert M.vertex_residual(st).norm() <= 1e-11 * scale
        # edge relation across each flip
        lams = st.lambdas()
        ws = T.w_invariants(st)
        for i in range(3):
            j, k = [x for x in range(3) if x != i]
            d = (lams[j] ** 2 + lams[k] ** 2 + lams[j] * lams[k] * ws[i]) / lams[i]
            res = M.edge_residual(lams[i], lams[j], lams[k], d, ws[j], ws[k], h)
            assert res.norm() <= 1e-11 * (h * lams[j] * lams[k]).norm()


# ----------------------------------------------------------------------
# psi sums
# ----------------------------------------------------------------------
def test_psi_symmetric_point():
    one = G.one(N)
    z = G.zero(N)
    val = M.psi(one, one, one, z, z, G.scalar(N, 3))
    assert allclose(val, 1.0 / 3.0, 1e-15)


def test_psi_edge_pair_and_vertex_sums(rng):
    for _ in range(40):
        st = T.random_state(rng)
        h = T.semi_perimeter(st)
        tri = M._root_triple(st)
        total = G.zero(N)
        for d in range(3):
            j, k = [x for x in range(3) if x != d]
            total = total + M.psi(tri[j].lam, tri[k].lam, tri[d].lam, tri[j].w, tri[k].w, h)
        assert (total - 1).norm() <= 1e-12
        for d in range(3):
            j, k = [x for x in range(3) if x != d]
            other = M._flip_entry(tri, d, h)
            p1 = M.psi(tri[j].lam, tri[k].lam, tri[d].lam, tri[j].w, tri[k].w, h)
            p2 = M.psi(tri[j].lam, tri[k].lam, other.lam, tri[j].w, tri[k].w, h)
            assert (p1 + p2 - 1).norm() <= 1e-12


def random_shape(rng, depth):
    shape = {()}
    frontier = [()]
    while frontier:
        path = frontier.pop()
        if len(path) >= depth:
            continue
        for d in range(3):
            if path and d == path[-1]:
                continue
            if rng.random() < 0.45:
                child = path + (d,)
                shape.add(child)
                frontier.append(child)
    return shape


def test_subtree_sums(rng):
    st = super_unit_state()
    assert (M.subtree_sum(st, {()}) - 1).norm() <= 1e-12
    assert (M.subtree_sum(st, {(), (0,)}) - 1).norm() <= 1e-12
    for _ in range(100):
        s = T.random_state(rng)
        shape = random_shape(rng, 10)
        assert (M.subtree_sum(s, shape) - 1).norm() <= 1e-10


def test_subtree_validation():
    st = unit_state()
    with pytest.raises(ValueError):
        M.subtree_sum(st, {(0,)})  # missing root
    with pytest.raises(ValueError):
        M.subtree_sum(st, {(), (0, 0)})  # backtracking path
    with pytest.raises(ValueError):
        M.subtree_sum(st, {(), (0, 1)})  # disconnected


# ----------------------------------------------------------------------
# orientation and the sink
# ----------------------------------------------------------------------
def test_orient_edge():
    a, d = G.scalar(N, 1), G.scalar(N, 2)
    assert M.orient_edge(a, d) == "a_to_d"
    assert M.orient_edge(d, a) == "d_to_a"
    assert M.orient_edge(a, a) == "flexible"


def test_sink_at_unit_point():
    sink = M.find_sink(unit_state())
    assert sink.steps == 0
    assert sorted(r.body for r in sink.regions) == [1.0, 1.0, 1.0]


def test_sink_from_twisted_states(rng):
    base = super_unit_state()
    for k in (1, 2, 4, 6):
        start = T.dehn_twist(base, "a", power=k)
        sink = M.find_sink(start)
        assert sink.steps <= 2 * k
        assert max(r.body for r in sink.regions) <= 1.0 + 1e-9


def test_sink_budget_exceeded_raises():
    start = T.dehn_twist(super_unit_state(), "a", power=3)
    with pytest.raises(M.NonConvergenceError):
        M.find_sink(start, budget=1)


def test_flexible_edge_state_resolves():
    # a^2 = b^2 + c^2 makes the flip of a body-neutral (flexible edge);
    # the walk must terminate without oscillating (float rounding may
    # count the tie as one step, never more)
    sc = lambda v: G.scalar(N, v)
    st = T.DecoratedTorusState(
        sc(math.sqrt(2)), sc(1), sc(1), G.zero(N), G.zero(N)
    )
    sink = M.find_sink(st)
    assert sink.steps <= 1
    assert sorted(round(r.body, 12) for r in sink.regions) == [
        1.0,
        1.0,
        round(math.sqrt(2), 12),
    ]


# ----------------------------------------------------------------------
# enumeration
# ----------------------------------------------------------------------
def test_omega_three_nonempty_classical():
    regs = M.enumerate_regions(unit_state(), 3.0)
    assert len(regs) == 3
    assert all(abs(r.body - 1.0) <= 1e-12 for r in regs)


def test_enumeration_matches_markoff_numbers():
    regs = M.enumerate_regions(unit_state(), 15 * 3.0)
    values = sorted({round(r.body) for r in regs})
    assert values == [1, 2, 5, 13]
    # multiplicities: three curves per value at depth 1, six deeper
    from collections import Counter
    counts = Counter(round(r.body) for r in regs)
    assert counts[1] == 3 and counts[2] == 3 and counts[5] == 6 and counts[13] == 6


def test_enumeration_exhaustive_against_unpruned_walk(rng):
    st = super_unit_state(spin=(1, -1, 1))
    cutoff = 40.0
    regs = M.enumerate_regions(st, cutoff)
    got = {r.slope for r in regs}
    # unpruned depth-capped brute-force walk
    h = T.semi_perimeter(st)
    tri = M._root_triple(st)
    seen = {}
    stack = [(tri, None, 0)]
    while stack:
        t, parent, depth = stack.pop()
        for r in t:
            if r.lam.body * h.body <= cutoff:
                seen.setdefault(r.slope, r)
        if depth >= 8:
            continue
        for i in range(3):
            if i == parent:
                continue
            new = M._flip_entry(t, i, h)
            child = list(t)
            child[i] = new
            stack.append((tuple(child), i, depth + 1))
    assert got == set(seen)


def test_enumeration_connected(rng):
    # the region set below any cutoff forms a connected subcomplex:
    # every enumerated slope other than the sink three is the mediant of
    # two other enumerated-or-boundary slopes discovered before it
    st = super_unit_state()
    regs, frontier, sink = M.enumerate_regions(st, 300.0, return_frontier=True)
    assert len(regs) >= 3


def test_empty_below_minimum():
    regs = M.enumerate_regions(unit_state(), 0.5)
    assert regs == []


def test_worker_determinism():
    st = super_unit_state(spin=(1, -1, 1))
    r1 = M.enumerate_regions(st, 2 * math.cosh(12.0), workers=1)
    r4 = M.enumerate_regions(st, 2 * math.cosh(12.0), workers=4)
    assert len(r1) == len(r4)
    for x, y in zip(r1, r4):
        assert x.slope == y.slope and x.address == y.address
        assert (x.lam - y.lam).norm() == 0.0 and (x.w - y.w).norm() == 0.0


def test_addresses_and_slopes():
    regs = M.enumerate_regions(unit_state(), 15 * 3.0)
    by_addr = {r.address: r.slope for r in regs}
    assert by_addr[""] == (1, 1)
    assert by_addr["L0"] == (0, 1) and by_addr["R0"] == (1, 0)
    assert by_addr["L"] == (1, 2) and by_addr["R"] == (2, 1)
    assert by_addr["N"] == (-1, 1)
    # reduced addresses, sorted output
    assert all(r1.sort_key() <= r2.sort_key() for r1, r2 in zip(regs, regs[1:]))


# ----------------------------------------------------------------------
# neighbor asymptotics
# ----------------------------------------------------------------------
def test_neighbor_asymptotics_classical_zero():
    rep = M.neighbor_asymptotics_report(unit_state(), "a", 8)
    for row in rep["rows"]:
        assert row["b_ratio_k1"] == 0.0 and row["c_ratio_k1"] == 0.0


def test_neighbor_asymptotics_bounded(rng):
    st = super_unit_state()
    rep = M.neighbor_asymptotics_report(st, "a", 15)
    inner = [r["b_ratio_k1"] for r in rep["rows"] if 0 < abs(r["i"]) <= 3]
    outer = [r["b_ratio_k1"] for r in rep["rows"] if abs(r["i"]) > 3]
    assert max(outer) <= 10.0 * max(inner)
    c_inner = [r["c_ratio_k1"] for r in rep["rows"] if 0 < abs(r["i"]) <= 3]
    c_outer = [r["c_ratio_k1"] for r in rep["rows"] if abs(r["i"]) > 3]
    assert max(c_outer) <= 10.0 * max(c_inner)


def test_asymptotics_r_matches_eigen(rng):
    from superflip.osp12 import eigen_r

    st = T.random_state(rng)
    rep = M.neighbor_asymptotics_report(st, "a", 5)
    h = T.semi_perimeter(st)
    w = T.w_invariants(st)[0]
    assert abs(rep["R"] - eigen_r(st.a, h, w).body) <= 1e-12 * rep["R"]
