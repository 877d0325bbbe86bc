"""End-to-end certified bounds: the interaction min-sum chain, the weighted
level-set bound for the single-radius average, the radius series window, the
operator norm scan, and two-weight reports.

Every inequality is verified numerically with explicit constants; numbers on
both sides are computed independently, never rearranged from one another.
"""

import math
from dataclasses import dataclass
from math import fsum
from typing import Optional

from . import tree
from .averages import DescendantSumTable, spherical_average, maximal_field
from .errors import ConfigError, DomainError
from .exponents import ExponentConfig, series_boundary, series_exponent
from .functions import (
    TreeFunction,
    Weight,
    _sum_levelwise,
    char_function,
    lp_norm,
    map_lp_norm,
    random_function,
    validate_set,
)
from .tree import TreeParams
from .util import kpow, klog
from .weight_class import (
    bilinear_form,
    best_constant_heuristic,
    per_level_condition_check,
    two_weight_ratio,
)

PASS_REL = 1e-12
EXACT_REL = 1e-9


@dataclass
class ChainConstants:
    c1: float
    c2: float
    c3: float

    @property
    def c_w(self):
        return self.c1 * self.c2 * self.c3


def certified_bilinear_constant(weight_beta, cfg, r, j_max):
    """Constants (c1, c2, c3) with bilinear <= c1 c2 c3 * k^((1-alpha p) r)
    * w(E)^(1/p) w(F)^(1-1/q) for the radial weight k^(beta depth).

    c1 is the measured worst per-level ratio at this radius (at least 1), c2
    sums the two geometric tails of the unit-spaced split grid, c3 is the
    exact value of the split bound at its minimizer.
    """
    p, q, d = cfg.p, cfg.q, cfg.delta
    lnk = math.log(cfg.k)
    worst = 0.0
    for j in range(j_max + 1):
        for m in range(min(j, r) + 1):
            i = j + r - 2 * m
            if i < 0:
                continue
            cnt = tree.level_sphere_count(cfg.k, j, r, m)
            if cnt == 0:
                continue
            gap = math.log(cnt) + weight_beta * i * lnk
            gap -= ((r - m) * (p - d) + r * d + weight_beta * j * q / p) * lnk
            worst = max(worst, gap)
    c1 = max(1.0, math.exp(worst))
    c2 = max(1.0 / (1.0 - kpow(cfg.k, -(p - d))), 1.0 / (1.0 - kpow(cfg.k, -1.0)))
    c3 = (p - d) ** -(1.0 - 1.0 / q) + (p - d) ** (1.0 / q)
    return ChainConstants(c1=c1, c2=c2, c3=c3)


def split_bound(a, b, rho, cfg):
    """a k^(rho (p - delta)/2) + b k^(-rho/2): the two-term bound whose
    minimum over rho collapses the min-sum."""
    if a <= 0 or b <= 0:
        raise DomainError(f"split bound needs a, b > 0, got a={a}, b={b}")
    p, d = cfg.p, cfg.delta
    return a * kpow(cfg.k, rho * (p - d) / 2.0) + b * kpow(cfg.k, -rho / 2.0)


def split_bound_minimizer(a, b, cfg):
    """Stationary point of the split bound: (2/(p+1-delta)) log_k(b/(a(p-delta)))."""
    if a <= 0 or b <= 0:
        raise DomainError(f"split bound needs a, b > 0, got a={a}, b={b}")
    p, d = cfg.p, cfg.delta
    return (2.0 / (p + 1.0 - d)) * klog(cfg.k, b / (a * (p - d)))


def split_bound_minimum(a, b, cfg):
    rho = split_bound_minimizer(a, b, cfg)
    return rho, split_bound(a, b, rho, cfg)


@dataclass
class MinSumReport:
    value: float
    level_weights_e: dict
    level_weights_f: dict
    power_sum_lhs: float
    power_sum_rhs: float
    power_sum_ok: bool
    weight_sum_lhs: float
    weight_sum_rhs: float
    level_sum_exact: bool


def interaction_min_sum(w, E, F, r, cfg):
    """M = sum over meeting offset m and center level j (partner level
    i = j + r - 2m) of min{k^((r-m)(p-delta)) k^(r delta) w(E_j)^(q/p),
    k^m w(F_i)}, together with the two per-level consistency checks."""
    if r < 0:
        raise DomainError(f"radius must be >= 0, got {r}")
    E = validate_set(w.params, E)
    F = validate_set(w.params, F)
    p, q, d = cfg.p, cfg.q, cfg.delta
    e_levels = {}
    for x in E:
        e_levels.setdefault(len(x), []).append(x)
    f_levels = {}
    for y in F:
        f_levels.setdefault(len(y), []).append(y)
    w_e = {j: w.weight_of_set(vs) for j, vs in sorted(e_levels.items())}
    w_f = {i: w.weight_of_set(vs) for i, vs in sorted(f_levels.items())}
    total = 0.0
    for m in range(r + 1):
        for j in sorted(w_e):
            i = j + r - 2 * m
            if i < 0 or i not in w_f:
                continue
            t1 = kpow(cfg.k, (r - m) * (p - d) + r * d) * w_e[j] ** (q / p)
            t2 = kpow(cfg.k, m) * w_f[i]
            total += min(t1, t2)
    power_lhs = fsum(w_e[j] ** (q / p) for j in sorted(w_e))
    power_rhs = w.weight_of_set(E) ** (q / p)
    weight_lhs = fsum(w_f[i] for i in sorted(w_f))
    weight_rhs = w.weight_of_set(F)
    return MinSumReport(
        value=total,
        level_weights_e=w_e,
        level_weights_f=w_f,
        power_sum_lhs=power_lhs,
        power_sum_rhs=power_rhs,
        power_sum_ok=power_lhs <= power_rhs * (1.0 + PASS_REL) or not E,
        weight_sum_lhs=weight_lhs,
        weight_sum_rhs=weight_rhs,
        level_sum_exact=weight_lhs == weight_rhs,
    )


@dataclass
class ChainStep:
    name: str
    lhs: float
    rhs: float
    slack: float
    passed: bool


@dataclass
class ChainTrace:
    r: int
    constants: Optional[ChainConstants]
    steps: list

    @property
    def passed(self):
        return all(s.passed for s in self.steps)


def _step(name, lhs, rhs):
    slack = math.inf if lhs == 0.0 else rhs / lhs
    return ChainStep(name=name, lhs=lhs, rhs=rhs, slack=slack, passed=lhs <= rhs * (1.0 + PASS_REL))


CHAIN_STEPS = ("bilinear_vs_minsum", "minsum_vs_split", "split_vs_final", "bilinear_vs_final")


def chain_verify(w, E, F, r, cfg, j_max=None):
    """Verify each link of bilinear <= c1 M <= c1 c2 phi(rho*) = c1 c2 c3
    * k^((1 - alpha p) r) w(E)^(1/p) w(F)^(1-1/q) on a concrete instance.

    Radial weight and sobolev target only; empty E or F passes trivially.
    """
    if w.kind != "radial":
        raise ConfigError("chain verification needs a radial weight")
    if not cfg.is_sobolev:
        raise ConfigError("chain verification is defined for sobolev mode only")
    E = validate_set(w.params, E)
    F = validate_set(w.params, F)
    if not E or not F:
        steps = [ChainStep(name, 0.0, 0.0, math.inf, True) for name in CHAIN_STEPS]
        return ChainTrace(r=r, constants=None, steps=steps)
    if j_max is None:
        j_max = max(len(x) for x in E)
    cons = certified_bilinear_constant(w.weight_beta, cfg, r, j_max)
    p, q, d, a = cfg.p, cfg.q, cfg.delta, cfg.alpha
    bil = bilinear_form(w, E, F, r)
    msum = interaction_min_sum(w, E, F, r, cfg).value
    we = w.weight_of_set(E)
    wf = w.weight_of_set(F)
    a0 = kpow(cfg.k, (p + d) * r / 2.0) * we ** (q / p)
    b0 = kpow(cfg.k, r / 2.0) * wf
    _, phi0 = split_bound_minimum(a0, b0, cfg)
    final = cons.c3 * kpow(cfg.k, (1.0 - a * p) * r) * we ** (1.0 / p) * wf ** (1.0 - 1.0 / q)
    # split_vs_final is a two-sided identity, not just an upper bound
    identity = ChainStep(
        name="split_vs_final",
        lhs=phi0,
        rhs=final,
        slack=final / phi0,
        passed=abs(phi0 - final) <= EXACT_REL * final,
    )
    steps = [
        _step("bilinear_vs_minsum", bil, cons.c1 * msum),
        _step("minsum_vs_split", msum, cons.c2 * phi0),
        identity,
        _step("bilinear_vs_final", bil, cons.c1 * cons.c2 * final),
    ]
    return ChainTrace(r=r, constants=cons, steps=steps)


@dataclass
class LevelSetInstance:
    w: Weight
    f: TreeFunction
    r: int
    lam: float
    dyadic_beta: float
    c_w: Optional[float]
    cfg: ExponentConfig

    def __post_init__(self):
        if self.lam <= 0:
            raise DomainError(f"level threshold must be > 0, got {self.lam}")
        if not 0 < self.dyadic_beta < 1:
            raise DomainError(f"dyadic_beta must lie in (0, 1), got {self.dyadic_beta}")
        if self.r < 0:
            raise DomainError(f"radius must be >= 0, got {self.r}")


def superlevel_set(inst, restrict="region"):
    """{x : average of f at radius r exceeds lam}, strict inequality.

    restrict "region": x runs over the evaluation region. restrict
    "support_neighborhood": x runs over every vertex at distance exactly r
    from some support vertex, the complete positivity set of the average.
    """
    f, r, lam = inst.f, inst.r, inst.lam
    alpha = inst.cfg.alpha
    table = DescendantSumTable(f)
    if restrict == "region":
        domain = tree.vertices_up_to(f.params.k, f.params.eval_depth)
    elif restrict == "support_neighborhood":
        seen = set()
        for s in f.support():
            seen.update(tree.sphere_members(f.params.k, s, r, f.params.support_depth + r))
        domain = tree.sort_vertices(seen)
    else:
        raise ConfigError(f"restrict must be region or support_neighborhood, got {restrict!r}")
    out = []
    for x in domain:
        if spherical_average(f, x, r, alpha, table=table) > lam:
            out.append(x)
    return tuple(out)


def level_set_bound_weight(inst, restrict="region"):
    """Left side of the bound: weight of the superlevel set."""
    return inst.w.weight_of_set(superlevel_set(inst, restrict=restrict))


def level_set_bound_rhs(inst):
    """Right side: the dyadic-shell sum

    C_L * sum over n >= 0 with 2^n <= k^r of
      2^(n q) (k^r / 2^n)^(q 'dyadic_beta') k^(r q (eps (1-alpha) - 1))
      * w({f >= 2^(n-1) lam / k^(r alpha)})^(q/p)

    with C_L = (16 c_w)^q / (2^'dyadic_beta' - 1)^q + c_w^q. Returns the value
    and the per-shell terms.
    """
    if inst.c_w is None:
        raise ConfigError(
            "level-set bound needs the certified bilinear constant c_w; "
            "compute it with certified_bilinear_constant first"
        )
    cfg = inst.cfg
    k, q, p = cfg.k, cfg.q, cfg.p
    alpha, eps = cfg.alpha, cfg.epsilon
    b = inst.dyadic_beta
    cw = inst.c_w
    c_l = (16.0 * cw) ** q / (2.0**b - 1.0) ** q + cw**q
    kr = kpow(k, inst.r)
    terms = []
    n = 0
    while 2.0**n <= kr * (1.0 + 1e-12):
        thresh = 2.0 ** (n - 1) * inst.lam / kpow(k, inst.r * alpha)
        shell = [v for v, x in inst.f.items() if x >= thresh]
        wsh = inst.w.weight_of_set(shell)
        term = (
            2.0 ** (n * q)
            * (kr / 2.0**n) ** (q * b)
            * kpow(k, inst.r * q * (eps * (1.0 - alpha) - 1.0))
            * wsh ** (q / p)
        )
        terms.append({"n": n, "threshold": thresh, "shell_size": len(shell), "term": term})
        n += 1
    return c_l * fsum(t["term"] for t in terms), terms


@dataclass
class LevelSetReport:
    lhs: float
    rhs: float
    slack: float
    passed: bool
    superlevel_size: int
    shells: list


def level_set_bound_verify(inst, restrict="region"):
    level = superlevel_set(inst, restrict=restrict)
    lhs = inst.w.weight_of_set(level)
    rhs, terms = level_set_bound_rhs(inst)
    slack = math.inf if lhs == 0.0 else rhs / lhs
    return LevelSetReport(
        lhs=lhs,
        rhs=rhs,
        slack=slack,
        passed=lhs <= rhs * (1.0 + PASS_REL),
        superlevel_size=len(level),
        shells=terms,
    )


@dataclass
class SeriesReport:
    dyadic_beta: float
    exponent: float
    boundary: float
    convergent: bool
    partial_sums: list  # (n_terms, value)
    limit: Optional[float]


def radius_series_window(cfg, dyadic_beta, r_partial=200, checkpoints=(10, 50, 200)):
    """Verdict for the radius series sum over r of k^(-r * exponent), with
    partial sums at the requested checkpoint lengths."""
    e = series_exponent(cfg, dyadic_beta)
    convergent = e > 0.0
    partials = []
    for n in checkpoints:
        n = min(n, r_partial)
        partials.append((n, fsum(kpow(cfg.k, -r * e) for r in range(n + 1))))
    limit = 1.0 / (1.0 - kpow(cfg.k, -e)) if convergent else None
    return SeriesReport(
        dyadic_beta=dyadic_beta,
        exponent=e,
        boundary=series_boundary(cfg),
        convergent=convergent,
        partial_sums=partials,
        limit=limit,
    )


SCAN_FAMILIES = ("deltas", "level-indicators", "sphere-indicators", "random")


def _scan_function(family, params, seed):
    if family == "deltas":
        return char_function(params, [tree.ROOT])
    if family == "level-indicators":
        return char_function(params, tree.level_vertices(params.k, params.support_depth))
    if family == "sphere-indicators":
        center = (0,) if params.support_depth >= 1 else tree.ROOT
        radius = max(params.support_depth - 1, 0)
        members = tree.sphere_members(params.k, center, radius, params.support_depth)
        return char_function(params, members)
    if family == "random":
        return random_function(params, seed, density=0.5)
    raise ConfigError(f"scan family must be one of {SCAN_FAMILIES}, got {family!r}")


@dataclass
class ScanReport:
    family: str
    depths: list
    ratios: list
    diffs: list


def operator_norm_scan(cfg, family, depths, seed=0, weight_beta=0.0, operator="sphere"):
    """Ratio of the weighted q-norm of the maximal function to the weighted
    p-norm of the input, recomputed on progressively deeper truncations.

    Rebuilds the tree region and the radial weight at every depth, so the
    sequence of ratios shows how the truncation converges.
    """
    if weight_beta < 0:
        raise DomainError(f"weight_beta must be >= 0, got {weight_beta}")
    ratios = []
    for depth in depths:
        params = TreeParams(cfg.k, depth, depth)
        w = Weight.radial(params, weight_beta)
        f = _scan_function(family, params, seed)
        denom = lp_norm(f, cfg.p, w)
        if denom == 0.0:
            raise DomainError(f"scan function is identically zero at depth {depth}")
        field = maximal_field(f, cfg.alpha, operator=operator)
        num = map_lp_norm(((x, mv.value) for x, mv in field), cfg.q, w)
        ratios.append(num / denom)
    diffs = [abs(ratios[i + 1] - ratios[i]) for i in range(len(ratios) - 1)]
    return ScanReport(family=family, depths=list(depths), ratios=ratios, diffs=diffs)


def two_weight_constant(u, v, cfg, r, region_depth=None, seed=0, starts=None, anneal_steps=None):
    """Heuristic best constant for the two-weight ratio at radius r."""
    return best_constant_heuristic(
        u, cfg, r, region_depth=region_depth, v=v, seed=seed, starts=starts,
        anneal_steps=anneal_steps,
    )


@dataclass
class TwoWeightRow:
    lam: float
    superlevel_size: int
    lhs: float
    rhs: float
    slack: float
    passed: bool
    pair_ratio_max: float
    search_covered: bool


@dataclass
class TwoWeightReport:
    search: object  # ConstantSearchEntry
    measured_constant: float
    rows: list


def two_weight_level_set_report(u, v, f, r, lam_list, dyadic_beta, cfg, seed=0):
    """Two-weight level-set check: v weighs the superlevel set of the
    radius-r average, u weighs the dyadic shells of f, and the constant is
    measured by the heuristic search (raised to any superlevel pair ratio
    that beats it; search_covered records whether raising was needed)."""
    if not 0 < dyadic_beta < 1:
        raise DomainError(f"dyadic_beta must lie in (0, 1), got {dyadic_beta}")
    params = f.params
    entry = best_constant_heuristic(u, cfg, r, region_depth=params.eval_depth, v=v, seed=seed)
    table = DescendantSumTable(f)
    domain = tree.vertices_up_to(params.k, params.eval_depth)
    field = [(x, spherical_average(f, x, r, cfg.alpha, table=table)) for x in domain]
    k, q, p, alpha, eps = cfg.k, cfg.q, cfg.p, cfg.alpha, cfg.epsilon
    kr = kpow(k, r)
    rows = []
    measured = entry.constant
    for lam in lam_list:
        if lam <= 0:
            raise DomainError(f"level threshold must be > 0, got {lam}")
        level = tuple(x for x, val in field if val > lam)
        lhs = v.weight_of_set(level)
        shells = []
        n = 0
        while 2.0**n <= kr * (1.0 + 1e-12):
            thresh = 2.0 ** (n - 1) * lam / kpow(k, r * alpha)
            shell = tuple(x for x, val in f.items() if val >= thresh)
            shells.append((n, shell))
            n += 1
        pair_max = 0.0
        for _, shell in shells:
            if level and shell:
                pair_max = max(pair_max, two_weight_ratio(u, v, level, shell, r, cfg))
        covered = pair_max <= entry.constant * (1.0 + EXACT_REL)
        measured = max(measured, pair_max)
        c_l = (16.0 * measured) ** q / (2.0**dyadic_beta - 1.0) ** q + measured**q
        total = fsum(
            2.0 ** (n * q)
            * (kr / 2.0**n) ** (q * dyadic_beta)
            * kpow(k, r * q * (eps * (1.0 - alpha) - 1.0))
            * u.weight_of_set(shell) ** (q / p)
            for n, shell in shells
        )
        rhs = c_l * total
        slack = math.inf if lhs == 0.0 else rhs / lhs
        rows.append(
            TwoWeightRow(
                lam=lam,
                superlevel_size=len(level),
                lhs=lhs,
                rhs=rhs,
                slack=slack,
                passed=lhs <= rhs * (1.0 + PASS_REL),
                pair_ratio_max=pair_max,
                search_covered=covered,
            )
        )
    return TwoWeightReport(search=entry, measured_constant=measured, rows=rows)
