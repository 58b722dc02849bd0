import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bruteforce import brute_opt_sets, brute_opt_slots, has_vertex_cover
from hetpaging.core import (PageSetSequence, Request, RequestSequence, SlotSetFamily, WeightMap, schedule_cost,
                            set_schedule_cost, slot_mask, validate_schedule)
from hetpaging.errors import BudgetExceeded, CapExceeded, ParameterError
from hetpaging.generators import FAMILY_KINDS, motivating_instance, random_instance, random_page_laminar
from hetpaging.offline import (OracleCaps, VCInstance, opt_bruteforce, primal_dual_audit, relax_to_page_laminar,
                               repair_phases, vc_reduce, vc_solution_from_cover)
from hetpaging.offline.relax import virtual_pages
from hetpaging.offline.repair import sets_to_slots
from hetpaging.offline.vc import parse_graph
from hetpaging.online import WeightedAllOrOne
from hetpaging.online.registry import algorithm_names, input_kind, make_algorithm

BIG = OracleCaps(k=6, pages=1000, T=10000)


def general(k, pages):
    return RequestSequence(k, SlotSetFamily.standard(k), tuple(Request.general(p, k) for p in pages))


# ---- oracle

def test_oracle_standard_example():
    res = opt_bruteforce(general(2, "abcab"))
    assert res.cost == 4
    assert schedule_cost(res.schedule) == 4


def test_oracle_single_configuration_sequence():
    fam = SlotSetFamily.power_set(3)
    reqs = (Request.specific("a", 1), Request("b", slot_mask([2, 3])), Request.specific("a", 1))
    assert opt_bruteforce(RequestSequence(3, fam, reqs)).cost == 2


@pytest.mark.parametrize("rounds", [0, 1, 3, 5])
def test_oracle_motivating_instance(rounds):
    seq, w = motivating_instance(rounds)
    assert opt_bruteforce(seq, w).cost == rounds


def test_oracle_caps():
    with pytest.raises(CapExceeded):
        opt_bruteforce(general(5, "ab"))
    with pytest.raises(BudgetExceeded):
        opt_bruteforce(general(4, "abcdefgh" * 3), caps=OracleCaps(states=10))


@given(st.sampled_from(FAMILY_KINDS), st.integers(1, 3), st.integers(0, 10**6))
def test_oracle_matches_exhaustive_dp(kind, k, seed):
    seq = random_instance(k, kind, 4, 8, seed)
    res = opt_bruteforce(seq)
    assert res.cost == brute_opt_slots(seq)
    assert validate_schedule(seq, res.schedule) is None
    assert schedule_cost(res.schedule) == res.cost


@given(st.integers(1, 3), st.integers(0, 10**6))
def test_weighted_oracle_matches_exhaustive_dp(k, seed):
    rng = random.Random(seed)
    seq = random_instance(k, "aoo", 4, 8, seed)
    w = WeightMap({p: Fraction(rng.randint(0, 6), rng.randint(1, 3)) for p in range(1, 5)})
    res = opt_bruteforce(seq, w)
    assert res.cost == brute_opt_slots(seq, w)
    assert schedule_cost(res.schedule, w) == res.cost


@given(st.integers(1, 3), st.integers(2, 6), st.integers(0, 10**6))
def test_set_oracle_matches_exhaustive_dp(k, npages, seed):
    pseq = random_page_laminar(k, npages, 8, seed)
    assert opt_bruteforce(pseq).cost == brute_opt_sets(pseq)


@given(st.integers(0, 10**6))
def test_oracle_never_beaten_by_an_algorithm(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 3)
    for name in algorithm_names():
        kind = input_kind(name)
        if kind == "pageset":
            seq = random_page_laminar(k, 5, 10, seed)
        else:
            fam = {"slot": "random", "laminar": "laminar", "aoo": "aoo", "standard": "standard"}[kind]
            seq = random_instance(k, fam, 5, 10, seed)
        assert opt_bruteforce(seq).cost <= make_algorithm(name, seed).run(seq).cost, name


# ---- repair

def test_repair_on_singletons_is_identity():
    fam = tuple(frozenset([p]) for p in range(1, 4))
    pseq = PageSetSequence(2, fam, (fam[0], fam[1], fam[2], fam[0]))
    C = opt_bruteforce(pseq).schedule
    res = repair_phases(pseq, C)
    assert res.sigma == [1, 2, 3, 1]
    assert res.cost_after == res.cost_before
    assert res.schedule == [frozenset(p for p in c if p is not None) for c in C]


@given(st.integers(1, 3), st.integers(2, 6), st.integers(0, 10**6))
def test_repair_stays_valid_within_height_factor(k, npages, seed):
    pseq = random_page_laminar(k, npages, 12, seed)
    C = opt_bruteforce(pseq).schedule
    res = repair_phases(pseq, C)
    h = pseq.forest().height
    assert all(p in held for p, held in zip(res.sigma, res.schedule))
    assert res.cost_after <= h * res.cost_before
    if h == 1:
        assert res.cost_after <= res.cost_before
    slots = sets_to_slots(res.schedule, k)
    assert schedule_cost(slots) == set_schedule_cost(res.schedule)


# ---- relaxation

def test_relaxation_examples():
    fam = SlotSetFamily.all_or_one(3)
    seq = RequestSequence(3, fam, (Request("p", slot_mask([1, 2, 3])), Request.specific("p", 1)))
    pseq, times = relax_to_page_laminar(seq, slot_mask([1, 2, 3]))
    assert pseq.requests == (frozenset({("p", 1), ("p", 2), ("p", 3)}), frozenset({("p", 1)}))
    assert times == [0, 1]
    assert virtual_pages("p", slot_mask([1, 2])) == frozenset({("p", 1), ("p", 2)})
    with pytest.raises(ParameterError):
        relax_to_page_laminar(seq, slot_mask([1, 2]))


@given(st.integers(1, 3), st.integers(0, 10**6))
def test_relaxation_keeps_height_and_lowers_opt(k, seed):
    seq = random_instance(k, "laminar", 3, 8, seed)
    for S in seq.family.members:
        pseq, times = relax_to_page_laminar(seq, S)
        if not times:
            continue
        inner = SlotSetFamily(k, tuple(m for m in seq.family.members if m & S == m))
        assert pseq.forest().height == inner.forest().height
        sub = RequestSequence(k, seq.family, tuple(seq.requests[t] for t in times))
        assert opt_bruteforce(pseq, caps=BIG).cost <= opt_bruteforce(sub, caps=BIG).cost


# ---- vertex-cover reduction

TRIANGLE = ((0, 1), (1, 2), (0, 2))


def test_reduction_quantities():
    inst = VCInstance(3, TRIANGLE, 2)
    assert (inst.m, inst.P, inst.B, inst.F_prime) == (4, 3, 12, 72)
    assert inst.F == 72 + 7 * 3 * 3
    assert inst.theta(0) == inst.tau_end(0, 0) - 2


def test_reduction_timeline_layout():
    inst = VCInstance(3, TRIANGLE, 2)
    red = vc_reduce(inst)
    assert red.times == sorted(red.times) and len(set(red.times)) == len(red.times)
    n, B, P, m = inst.n, inst.B, inst.P, inst.m
    # two vertex requests per (bundle, vertex), two blocking requests per bundle, ten per gadget
    assert len(red.seq) == 2 * n * B + 2 * B + 10 * P * (m - 1)
    at = dict(zip(red.times, red.seq.requests))
    for b in range(B):
        for j in range(n):
            assert at[inst.tau(b, j)].page == at[inst.tau_end(b, j)].page
            assert at[inst.tau(b, j)].slots == (1 << (inst.k + 2)) - 1
        assert at[inst.theta(b)].slots == slot_mask([inst.k + 1])
        assert at[inst.theta_end(b)].slots == slot_mask([inst.k + 2])
        assert at[inst.theta(b)].page == at[inst.theta_end(b)].page


@pytest.mark.parametrize("n,edges,k,cover", [(3, TRIANGLE, 2, {0, 1}), (3, ((0, 1), (1, 2)), 1, {1})])
def test_cover_schedule_costs_exactly_threshold(n, edges, k, cover):
    inst = VCInstance(n, edges, k)
    red = vc_reduce(inst)
    sched = vc_solution_from_cover(inst, cover, red)
    assert validate_schedule(red.seq, sched) is None
    assert schedule_cost(sched) == inst.F


def test_non_cover_is_rejected():
    with pytest.raises(ParameterError):
        vc_solution_from_cover(VCInstance(3, TRIANGLE, 2), {0, 0})
    with pytest.raises(ParameterError):
        vc_solution_from_cover(VCInstance(3, ((0, 1), (1, 2)), 1), {0})


@pytest.mark.parametrize("n,edges,k", [(2, ((0, 1),), 1), (3, TRIANGLE, 1), (3, ((0, 1), (1, 2)), 1)])
def test_optimum_within_threshold_iff_cover_exists(n, edges, k):
    inst = VCInstance(n, edges, k)
    opt = opt_bruteforce(vc_reduce(inst).seq, caps=BIG, need_schedule=False).cost
    assert (opt <= inst.F) == has_vertex_cover(n, edges, k)


def test_graph_parser():
    inst = parse_graph("n 3\nk 2\n# triangle\ne 0 1\ne 1 2\ne 0 2\n")
    assert (inst.n, inst.k, len(inst.edges)) == (3, 2, 3)


# ---- primal-dual audit

def test_audit_on_empty_instance():
    seq = RequestSequence(2, SlotSetFamily.all_or_one(2), ())
    run = WeightedAllOrOne().run(seq, WeightMap({}))
    audit = primal_dual_audit(seq, WeightMap({}), [], run)
    assert audit.pseudo_cost == 0 and audit.reference_cost == 0


def test_audit_on_motivating_instance():
    seq, w = motivating_instance(3)
    opt = opt_bruteforce(seq, w)
    assert opt.cost == 3
    audit = primal_dual_audit(seq, w, opt.schedule, WeightedAllOrOne().run(seq, w))
    assert audit.pseudo_cost <= 2 * opt.cost


@given(st.integers(1, 3), st.integers(0, 10**6))
def test_audit_pseudo_cost_at_most_twice_opt(k, seed):
    rng = random.Random(seed)
    seq = random_instance(k, "aoo", 4, 10, seed)
    w = WeightMap({p: Fraction(rng.randint(0, 4), rng.randint(1, 2)) for p in range(1, 5)})
    opt = opt_bruteforce(seq, w)
    audit = primal_dual_audit(seq, w, opt.schedule, WeightedAllOrOne().run(seq, w))
    assert audit.pseudo_cost <= 2 * opt.cost
    assert all(r >= 0 for r in audit.residual)
