import json
import math
import random

import pytest

from superflip.grassmann import DomainError, GrassmannNumber as G, allclose
from superflip import identity as I
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
# summands
# ----------------------------------------------------------------------
def test_summand_region_values():
    sc = lambda v: G.scalar(N, v)
    z = G.zero(N)
    r = (3 + math.sqrt(5)) / 2
    assert abs(I.summand_region(sc(1), sc(3), z).body - 1 / (3 * r)) <= 1e-15
    assert abs(I.summand_region(sc(1), sc(3), z).body - 1 / (r * r + 1)) <= 1e-12
    r2 = 3 + 2 * math.sqrt(2)
    assert abs(I.summand_region(sc(2), sc(3), z).body - 1 / (6 * r2)) <= 1e-15
    with pytest.raises(DomainError):
        I.summand_region(sc(0.5), sc(3), z)


def test_summand_geodesic_values():
    sc = lambda v: G.scalar(N, v)
    z = G.zero(N)
    ell = sc(2 * math.acosh(1.5))
    r = (3 + math.sqrt(5)) / 2
    assert abs(I.summand_geodesic(ell, z).body - 1 / (r * r + 1)) <= 1e-12
    with pytest.raises(DomainError):
        I.summand_geodesic(sc(-1), z)


def test_w_term_vanishes_classically(rng):
    sc = lambda v: G.scalar(N, v)
    z = G.zero(N)
    for _ in range(20):
        lam = sc(rng.uniform(1, 5))
        s = I.summand_region(lam, sc(3), z)
        assert s.soul().is_zero()


def test_summand_forms_agree(rng):
    for _ in range(60):
        st = T.random_state(rng)
        h = T.semi_perimeter(st)
        for lam, w in zip(st.lambdas(), T.w_invariants(st)):
            if (lam * h).body <= 2.05:
                continue
            s1 = I.summand_region(lam, h, w)
            ell = I.region_length(lam, h, w)
            s2 = I.summand_geodesic(ell, w)
            assert (s1 - s2).norm() <= 1e-12


def test_summand_body_in_range(rng):
    regs = M.enumerate_regions(super_unit_state(), 2 * math.cosh(9.0))
    h = T.semi_perimeter(super_unit_state())
    for r in regs:
        s = I.summand_region(r.lam, h, r.w)
        assert 0.0 < s.body < 0.5


# ----------------------------------------------------------------------
# the identity
# ----------------------------------------------------------------------
def test_identity_classical():
    rep = I.verify_identity(unit_state(), cutoff_length=24.0)
    assert rep.deviation_body <= 1e-6
    assert rep.converged
    first = [row["summand_body"] for row in rep.rows[:3]]
    assert all(abs(v - 0.127322) <= 1e-6 for v in first)


@pytest.mark.parametrize("cls", [0, 1, 2, 3])
def test_identity_super_all_classes(cls):
    rep = I.verify_identity(super_unit_state(T.spin_for_class(cls)), cutoff_length=24.0)
    assert rep.deviation_norm <= 1e-5
    assert rep.deviation_body <= 1e-6


def test_identity_deviation_monotone_in_cutoff():
    st = super_unit_state()
    devs = [
        I.verify_identity(st, cutoff_length=L).deviation_norm for L in (12.0, 18.0, 24.0)
    ]
    assert devs[0] > devs[1] > devs[2]


def test_identity_report_invariant_under_global_mu_flip():
    st = super_unit_state()
    st2 = T.DecoratedTorusState(st.a, st.b, st.c, -st.sigma, -st.theta, st.spin)
    r1 = I.verify_identity(st, cutoff_length=16.0)
    r2 = I.verify_identity(st2, cutoff_length=16.0)
    assert json.dumps(r1.to_obj(), sort_keys=True) == json.dumps(r2.to_obj(), sort_keys=True)


def test_identity_byte_determinism_across_workers():
    st = super_unit_state(spin=(1, -1, 1))
    r1 = I.verify_identity(st, cutoff_length=20.0, workers=1)
    r4 = I.verify_identity(st, cutoff_length=20.0, workers=4)
    assert json.dumps(r1.to_obj(), sort_keys=True) == json.dumps(r4.to_obj(), sort_keys=True)


def test_identity_three_shortest_curves():
    rep = I.verify_identity(unit_state(), cutoff_length=24.0)
    partial3 = sum(row["summand_body"] for row in rep.rows[:3])
    assert abs(partial3 - 0.381966) <= 1e-5


# ----------------------------------------------------------------------
# diagnostics
# ----------------------------------------------------------------------
def test_body_soul_report_classical_zero():
    regs = M.enumerate_regions(unit_state(), 100.0)
    m_val, violations = I.body_soul_report(regs, 0.5)
    assert m_val == 0.0 and violations == []


def test_body_soul_report_super():
    regs = M.enumerate_regions(super_unit_state(), 1e4)
    m_val, violations = I.body_soul_report(regs, 0.5)
    assert math.isfinite(m_val) and m_val > 0
    assert violations == []


def test_body_soul_invariant_under_global_flip():
    st = super_unit_state()
    st2 = T.DecoratedTorusState(st.a, st.b, st.c, -st.sigma, -st.theta, st.spin)
    m1, _ = I.body_soul_report(M.enumerate_regions(st, 500.0), 0.5)
    m2, _ = I.body_soul_report(M.enumerate_regions(st2, 500.0), 0.5)
    assert m1 == m2


def test_growth_count():
    st = unit_state()
    cutoff = math.exp(math.log(15.0)) * 2 * 3.0 * 1.01
    regs = M.enumerate_regions(st, cutoff)
    table = I.growth_count(regs, [math.log(15.0)], cutoff, 3.0)
    # markoff numbers 1,1,1,2,5,13 with curve multiplicities 3+3+6+6
    assert table[0]["N_super"] == 18
    assert table[0]["N_super"] <= table[0]["N_body"]


def test_growth_super_dominated_by_body():
    st = super_unit_state()
    rep = I.verify_identity(st, cutoff_length=22.0)
    for row in rep.growth:
        assert row["N_super"] <= row["N_body"]


def test_growth_insufficient_cutoff():
    st = unit_state()
    regs = M.enumerate_regions(st, 10.0)
    with pytest.raises(I.InsufficientCutoffError):
        I.growth_count(regs, [10.0], 10.0, 3.0)


def test_growth_ratio_stabilizes():
    # N(L)/L^2 within +-20 percent over the last two doublings at desk scale
    st = unit_state()
    L = [5.0, 10.0, 20.0]
    cutoff = math.exp(L[-1]) * 2 * 3.0
    regs = M.enumerate_regions(st, cutoff)
    table = I.growth_count(regs, L, cutoff, 3.0)
    r1 = table[1]["N_super_over_L2"]
    r2 = table[2]["N_super_over_L2"]
    assert abs(r2 - r1) <= 0.2 * max(r1, r2)
