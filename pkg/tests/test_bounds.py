"""Certified bound machinery: interaction min-sum, split-bound calculus, the
four-step chain on random instances, level-set bounds, the radius series,
operator norm scans, and two-weight reports."""

import math
import random

import pytest

from treemax import bounds as bd
from treemax import exponents as ex
from treemax import functions as fn
from treemax import tree
from treemax.averages import spherical_average
from treemax.errors import ConfigError, DomainError
from treemax.tree import TreeParams

CFG = ex.derived_exponents(2, 2.0, 0.25)


def test_chain_constants_shape():
    cons = bd.certified_bilinear_constant(0.0, CFG, 3, j_max=6)
    assert cons.c1 >= 1.0
    assert cons.c2 >= 1.0 / (1.0 - 2.0**-1)
    # c3 = (p - delta)^(-(1 - 1/q)) + (p - delta)^(1/q) with p - delta = 3
    assert abs(cons.c3 - (3.0**-0.75 + 3.0**0.25)) < 1e-15
    assert cons.c_w == cons.c1 * cons.c2 * cons.c3
    # inside the admissible window the per-level constant is exactly 1
    assert bd.certified_bilinear_constant(0.75, CFG, 3, j_max=6).c1 == 1.0


def test_split_bound_minimum_closed_form():
    # min over rho of a k^(rho(p-delta)/2) + b k^(-rho/2) equals
    # c3 a^(1/q) b^(1-1/q); the stationary point has vanishing derivative
    c3 = bd.certified_bilinear_constant(0.0, CFG, 1, 1).c3
    rng = random.Random(271828)
    h = 1e-4
    for _ in range(100):
        a = 10.0 ** rng.uniform(-3, 3)
        b = 10.0 ** rng.uniform(-3, 3)
        rho, val = bd.split_bound_minimum(a, b, CFG)
        want = c3 * a ** (1.0 / CFG.q) * b ** (1.0 - 1.0 / CFG.q)
        assert abs(val - want) <= 1e-12 * want, (a, b)
        deriv = (bd.split_bound(a, b, rho + h, CFG) - bd.split_bound(a, b, rho - h, CFG)) / (2 * h)
        assert abs(deriv) <= 1e-6 * val, (a, b, deriv)
        # genuinely a minimum
        assert val <= bd.split_bound(a, b, rho + 0.3, CFG)
        assert val <= bd.split_bound(a, b, rho - 0.3, CFG)
    with pytest.raises(DomainError):
        bd.split_bound(0.0, 1.0, 0.0, CFG)
    with pytest.raises(DomainError):
        bd.split_bound_minimizer(1.0, -1.0, CFG)


def test_interaction_min_sum_identities():
    params = TreeParams(2, 3, 3)
    w = fn.Weight.radial(params, 0.5)
    rng = random.Random(55)
    for trial in range(15):
        E = fn.random_set(params, seed=900 + trial, density=0.4)
        F = fn.random_set(params, seed=1900 + trial, density=0.4)
        if not E or not F:
            continue
        for r in (0, 1, 3):
            rep = bd.interaction_min_sum(w, E, F, r, CFG)
            assert rep.value >= 0.0
            assert rep.power_sum_ok  # sum of w(E_j)^(q/p) <= w(E)^(q/p)
            assert rep.level_sum_exact  # sum of w(F_i) == w(F) bit for bit
    # hand case: root against root at radius 0 with the flat weight
    flat = fn.Weight.radial(params, 0.0)
    rep = bd.interaction_min_sum(flat, [()], [()], 0, CFG)
    assert rep.value == 1.0
    with pytest.raises(DomainError):
        bd.interaction_min_sum(w, [()], [()], -1, CFG)


def test_chain_verify_on_random_instances():
    rng = random.Random(616)
    checked = 0
    for trial in range(20):
        k = rng.choice([2, 3])
        cfg = ex.derived_exponents(k, 2.0, 0.25)
        depth = 3 if k == 2 else 2
        params = TreeParams(k, depth, depth)
        beta = rng.choice([0.0, 0.5, 1.0])
        w = fn.Weight.radial(params, beta)
        E = fn.random_set(params, seed=3000 + trial, density=0.5)
        F = fn.random_set(params, seed=4000 + trial, density=0.5)
        for r in range(0, 5):
            trace = bd.chain_verify(w, E, F, r, cfg)
            assert trace.passed, (k, beta, r, [(s.name, s.lhs, s.rhs) for s in trace.steps])
            assert [s.name for s in trace.steps] == list(bd.CHAIN_STEPS)
            if E and F:
                ident = trace.steps[2]
                assert abs(ident.lhs - ident.rhs) <= bd.EXACT_REL * ident.rhs
                checked += 1
    assert checked >= 50


def test_chain_verify_trivial_and_validation():
    params = TreeParams(2, 2, 2)
    w = fn.Weight.radial(params, 0.5)
    trace = bd.chain_verify(w, [], [()], 2, CFG)
    assert trace.passed and trace.constants is None
    tab = fn.Weight.from_function(params, lambda v: 1.0)
    with pytest.raises(ConfigError):
        bd.chain_verify(tab, [()], [()], 1, CFG)
    free_cfg = ex.derived_exponents(2, 2.0, 0.25, mode="free", q=3.0)
    with pytest.raises(ConfigError):
        bd.chain_verify(w, [()], [()], 1, free_cfg)


def _instance(seed=12, r=2, lam=0.05, beta=0.5, dyadic_beta=0.4, weight_beta=0.0,
              k=2, depth=3):
    cfg = ex.derived_exponents(k, 2.0, 0.25)
    params = TreeParams(k, depth, depth + r)
    f = fn.random_function(params, seed=seed, density=0.6)
    w = fn.Weight.radial(params, weight_beta)
    c_w = bd.certified_bilinear_constant(weight_beta, cfg, r, j_max=depth + r).c_w
    return bd.LevelSetInstance(w=w, f=f, r=r, lam=lam, dyadic_beta=dyadic_beta,
                               c_w=c_w, cfg=cfg)


def test_level_set_bound_radius_zero_hand_check():
    inst = _instance(r=0, lam=0.25)
    rep = bd.level_set_bound_verify(inst)
    assert rep.passed
    # radius 0: the average at x is f(x), so the superlevel set is {f > lam}
    want_level = tuple(v for v, x in inst.f.items() if x > inst.lam)
    assert rep.superlevel_size == len(want_level)
    assert rep.lhs == inst.w.weight_of_set(want_level)
    # single shell n = 0 at threshold lam / 2
    assert len(rep.shells) == 1
    shell = [v for v, x in inst.f.items() if x >= inst.lam / 2.0]
    q, p = inst.cfg.q, inst.cfg.p
    cw = inst.c_w
    c_l = (16.0 * cw) ** q / (2.0**inst.dyadic_beta - 1.0) ** q + cw**q
    want_rhs = c_l * inst.w.weight_of_set(shell) ** (q / p)
    assert abs(rep.rhs - want_rhs) <= 1e-12 * want_rhs


def test_level_set_bound_random_instances_both_domains():
    rng = random.Random(808)
    for trial in range(12):
        inst = _instance(seed=7000 + trial, r=rng.choice([0, 1, 2, 3]),
                         lam=rng.choice([0.01, 0.05, 0.2]),
                         dyadic_beta=rng.choice([0.1, 0.4, 0.8]),
                         weight_beta=rng.choice([0.0, 0.5]))
        region = bd.level_set_bound_verify(inst, restrict="region")
        nbhd = bd.level_set_bound_verify(inst, restrict="support_neighborhood")
        assert region.passed and nbhd.passed, trial
        # the full positivity set can only add superlevel weight
        assert region.lhs <= nbhd.lhs * (1.0 + 1e-12) or region.lhs == nbhd.lhs
        assert nbhd.rhs == region.rhs  # right side never references the domain
    with pytest.raises(ConfigError):
        bd.superlevel_set(_instance(), restrict="ball")


def test_level_set_scaling_invariance():
    # scaling f and lam together by a power of two changes nothing: shells
    # and the superlevel set are scale-invariant, thresholds stay exact
    inst = _instance(seed=21, r=2, lam=0.0625)
    scaled = bd.LevelSetInstance(
        w=inst.w, f=inst.f.scale(8.0), r=inst.r, lam=inst.lam * 8.0,
        dyadic_beta=inst.dyadic_beta, c_w=inst.c_w, cfg=inst.cfg,
    )
    a = bd.level_set_bound_verify(inst)
    b = bd.level_set_bound_verify(scaled)
    assert a.lhs == b.lhs and a.rhs == b.rhs
    assert a.superlevel_size == b.superlevel_size
    assert [t["shell_size"] for t in a.shells] == [t["shell_size"] for t in b.shells]


def test_level_set_boundary_threshold_gives_zero_lhs():
    inst = _instance(seed=5, r=1)
    table_max = 0.0
    for x in tree.vertices_up_to(2, inst.f.params.eval_depth):
        table_max = max(table_max, spherical_average(inst.f, x, inst.r, inst.cfg.alpha))
    top = bd.LevelSetInstance(w=inst.w, f=inst.f, r=inst.r, lam=table_max,
                              dyadic_beta=0.4, c_w=inst.c_w, cfg=inst.cfg)
    rep = bd.level_set_bound_verify(top)
    assert rep.lhs == 0.0 and rep.slack == math.inf and rep.passed


def test_level_set_instance_validation():
    inst = _instance()
    with pytest.raises(DomainError):
        bd.LevelSetInstance(w=inst.w, f=inst.f, r=1, lam=0.0, dyadic_beta=0.4,
                            c_w=1.0, cfg=inst.cfg)
    with pytest.raises(DomainError):
        bd.LevelSetInstance(w=inst.w, f=inst.f, r=1, lam=0.1, dyadic_beta=1.0,
                            c_w=1.0, cfg=inst.cfg)
    with pytest.raises(DomainError):
        bd.LevelSetInstance(w=inst.w, f=inst.f, r=-1, lam=0.1, dyadic_beta=0.4,
                            c_w=1.0, cfg=inst.cfg)
    bare = bd.LevelSetInstance(w=inst.w, f=inst.f, r=1, lam=0.1, dyadic_beta=0.4,
                               c_w=None, cfg=inst.cfg)
    with pytest.raises(ConfigError):
        bd.level_set_bound_rhs(bare)


def test_radius_series_verdicts_match_partials():
    boundary = ex.series_boundary(CFG)
    below = bd.radius_series_window(CFG, boundary - 0.1, checkpoints=(10, 50, 200))
    assert below.convergent and below.limit is not None
    # the 200-term partial is within a hair of the geometric limit
    n, tail = below.partial_sums[-1]
    assert n == 200
    assert abs(tail - below.limit) <= 1e-6 * below.limit
    above = bd.radius_series_window(CFG, boundary + 0.1, checkpoints=(10, 50, 200))
    assert not above.convergent and above.limit is None
    partials = [v for _, v in above.partial_sums]
    assert partials[0] < partials[1] < partials[2]
    # divergent growth keeps accelerating rather than flattening out
    assert partials[2] - partials[1] > partials[1] - partials[0]
    at_edge = bd.radius_series_window(CFG, boundary)
    assert not at_edge.convergent  # exponent 0 sums to n + 1, no limit


def test_operator_norm_scan_delta_closed_form():
    rep = bd.operator_norm_scan(CFG, "deltas", [2, 3, 4])
    for depth, got in zip(rep.depths, rep.ratios):
        want = (1.0 + (8.0 / 27.0) * sum(4.0**-j for j in range(1, depth + 1))) ** 0.25
        assert abs(got - want) <= 1e-12 * want, depth
    assert len(rep.diffs) == 2
    assert rep.diffs[1] < rep.diffs[0]  # truncation differences shrink


def test_operator_norm_scan_families_and_validation():
    for family in bd.SCAN_FAMILIES:
        rep = bd.operator_norm_scan(CFG, family, [2, 3], seed=9)
        assert len(rep.ratios) == 2 and all(r > 0 for r in rep.ratios)
    with pytest.raises(ConfigError):
        bd.operator_norm_scan(CFG, "spikes", [2, 3])
    with pytest.raises(DomainError):
        bd.operator_norm_scan(CFG, "deltas", [2, 3], weight_beta=-1.0)


def test_two_weight_level_set_report():
    params = TreeParams(2, 3, 3)
    u = fn.Weight.radial(params, 0.5)
    v = fn.Weight.radial(params, 0.0)
    f = fn.random_function(params, seed=99, density=0.6)
    lams = [0.05, 0.2, 100.0]
    rep = bd.two_weight_level_set_report(u, v, f, 2, lams, 0.4, CFG, seed=3)
    assert len(rep.rows) == 3
    assert all(row.passed for row in rep.rows)
    # measured constant is the search value raised to any observed pair ratio
    want = max([rep.search.constant] + [row.pair_ratio_max for row in rep.rows])
    assert rep.measured_constant == want
    for row in rep.rows:
        if row.lhs == 0.0:
            assert row.slack == math.inf
        else:
            assert row.slack >= 1.0
        assert row.search_covered == (
            row.pair_ratio_max <= rep.search.constant * (1.0 + bd.EXACT_REL)
        )
    # an impossible threshold empties the superlevel set
    assert rep.rows[-1].superlevel_size == 0
    with pytest.raises(DomainError):
        bd.two_weight_level_set_report(u, v, f, 2, [0.1], 1.5, CFG)
    with pytest.raises(DomainError):
        bd.two_weight_level_set_report(u, v, f, 2, [-0.1], 0.4, CFG)


def test_two_weight_report_one_weight_consistency():
    # with u = v the pair ratios the report measures agree with the
    # one-weight ratio route on the same sets
    params = TreeParams(2, 3, 3)
    w = fn.Weight.radial(params, 0.5)
    f = fn.random_function(params, seed=17, density=0.7)
    rep = bd.two_weight_level_set_report(w, w, f, 1, [0.1], 0.4, CFG, seed=0)
    row = rep.rows[0]
    assert row.passed
    assert rep.search.method in ("superlevel", "annealed")
    entry = bd.two_weight_constant(w, w, CFG, 1, seed=0)
    assert entry.constant == rep.search.constant
