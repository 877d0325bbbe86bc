"""Weighted bilinear sphere-pairing form, best-constant searches, and the
radial weight-class conditions with tri-state certification.

The bilinear form pairs a center set E with a partner set F at distance
exactly r and weighs the partners. Everything two-weight aware: search and
ratio routines take a partner-side weight u and a center-side weight v; the
one-weight entry points pass the same object for both, so one-weight results
are byte-identical to two-weight results with u = v.
"""

import math
import time
from array import array
from dataclasses import dataclass, field
from random import Random
from typing import Optional

from . import tree
from .errors import ConfigError, DomainError, GuardLimitError
from .exponents import per_level_window, radial_window
from .functions import _sum_levelwise, validate_set
from .util import kpow

RATIO_TOL = 1e-9
CLUSTER_REL = 1e-9
CLUSTER_CAP = 128


def bilinear_form(u, E, F, r):
    """Sum over y in F of u(y) * #{x in E : d(x, y) = r}, levelwise exact."""
    if r < 0:
        raise DomainError(f"radius must be >= 0, got {r}")
    E = validate_set(u.params, E)
    F = validate_set(u.params, F)
    pairs = []
    for y in F:
        c = sum(1 for x in E if tree.distance(x, y) == r)
        if c:
            pairs.append((y, u.value(y) * c))
    return _sum_levelwise(pairs)


def normalizer(u, v, E, F, r, cfg):
    """Denominator k^(eps r (1 - alpha)) * v(E)^(1/p) * u(F)^(1 - 1/q)."""
    return (
        kpow(cfg.k, cfg.epsilon * r * (1.0 - cfg.alpha))
        * v.weight_of_set(E) ** (1.0 / cfg.p)
        * u.weight_of_set(F) ** (1.0 - 1.0 / cfg.q)
    )


def two_weight_ratio(u, v, E, F, r, cfg):
    """Bilinear form over its normalizer; u weighs partners, v weighs centers."""
    E = validate_set(u.params, E)
    F = validate_set(u.params, F)
    if not E or not F:
        raise DomainError("bilinear ratio needs non-empty center and partner sets")
    return bilinear_form(u, E, F, r) / normalizer(u, v, E, F, r, cfg)


def bilinear_ratio(w, E, F, r, cfg):
    """One-weight ratio: partner and center weight are the same."""
    return two_weight_ratio(w, w, E, F, r, cfg)


@dataclass
class ConstantSearchEntry:
    r: int
    constant: float
    method: str
    e_size: int
    f_size: int
    e_witness: tuple
    f_witness: tuple
    evals: int
    millis: int

    def csv_row(self):
        return [
            self.r,
            self.constant,
            self.method,
            self.e_size,
            self.f_size,
            ";".join(tree.format_vertex(x) for x in self.e_witness),
            ";".join(tree.format_vertex(y) for y in self.f_witness),
            self.evals,
            self.millis,
        ]

    def to_json_dict(self):
        return {
            "r": self.r,
            "constant": self.constant,
            "method": self.method,
            "E_size": self.e_size,
            "F_size": self.f_size,
            "E_witness": [tree.format_vertex(x) for x in self.e_witness],
            "F_witness": [tree.format_vertex(y) for y in self.f_witness],
            "evals": self.evals,
            "millis": self.millis,
        }


CSV_HEADER = ["r", "constant", "method", "E_size", "F_size", "E_witness", "F_witness", "evals", "millis"]


@dataclass
class ConstantSearchReport:
    entries: list
    region_depth: int

    def csv_rows(self):
        return [e.csv_row() for e in self.entries]

    def to_json_dict(self):
        return {
            "region_depth": self.region_depth,
            "entries": [e.to_json_dict() for e in self.entries],
        }


def _witness_sets(region, e_mask, f_mask):
    E = tuple(region[i] for i in range(len(region)) if e_mask >> i & 1)
    F = tuple(region[i] for i in range(len(region)) if f_mask >> i & 1)
    return E, F


def best_constant_exhaustive(u, cfg, r, region_depth=None, v=None):
    """Exact maximum of the ratio over all non-empty set pairs in the region.

    Enumerates every (E, F) pair by subset masks with incremental partial
    sums, then recomputes the top cluster with the scalar evaluator so the
    reported constant carries no accumulated rounding.
    """
    t0 = time.perf_counter()
    v = u if v is None else v
    params = u.params
    if region_depth is None:
        region_depth = params.eval_depth
    region = tree.vertices_up_to(params.k, region_depth)
    n = len(region)
    if n > cfg.exhaustive_guard:
        raise GuardLimitError(
            f"exhaustive search over {n} vertices exceeds guard {cfg.exhaustive_guard}"
        )
    size = 1 << n
    uvals = [u.value(y) for y in region]
    vvals = [v.value(x) for x in region]
    hit = [
        [1 if tree.distance(region[xi], region[yi]) == r else 0 for yi in range(n)]
        for xi in range(n)
    ]
    # singles[x][F_mask] = u-weight of the partners of x inside F
    singles = []
    for xi in range(n):
        row = array("d", bytes(8 * size))
        hrow = hit[xi]
        for mask in range(1, size):
            low = mask & -mask
            yi = low.bit_length() - 1
            row[mask] = row[mask ^ low] + (uvals[yi] if hrow[yi] else 0.0)
        singles.append(row)
    # u(F)^(1-1/q) reciprocals for every partner mask
    theta = 1.0 - 1.0 / cfg.q
    inv_upow = array("d", bytes(8 * size))
    usum = array("d", bytes(8 * size))
    for mask in range(1, size):
        low = mask & -mask
        yi = low.bit_length() - 1
        usum[mask] = usum[mask ^ low] + uvals[yi]
        inv_upow[mask] = usum[mask] ** -theta
    inv_pe = 1.0 / cfg.p
    best = {"val": -1.0, "cluster": []}

    def consider(val, e_mask, f_mask):
        if val < best["val"] * (1.0 - CLUSTER_REL):
            return
        if val > best["val"]:
            best["val"] = val
            best["cluster"] = [
                c for c in best["cluster"] if c[0] >= val * (1.0 - CLUSTER_REL)
            ]
        if len(best["cluster"]) < CLUSTER_CAP:
            best["cluster"].append((val, e_mask, f_mask))

    def extend(parent_row, parent_vsum, first_bit, e_mask):
        for b in range(first_bit, n):
            bit = 1 << b
            srow = singles[b]
            row = array("d", parent_row)
            mask_e = e_mask | bit
            denom = (parent_vsum + vvals[b]) ** inv_pe
            top = -1.0
            top_f = 0
            for f_mask in range(1, size):
                x = row[f_mask] + srow[f_mask]
                row[f_mask] = x
                x *= inv_upow[f_mask]
                if x > top:
                    top = x
                    top_f = f_mask
            consider(top / denom, mask_e, top_f)
            extend(row, parent_vsum + vvals[b], b + 1, mask_e)

    extend(array("d", bytes(8 * size)), 0.0, 0, 0)
    # scalar recompute over the near-tie cluster
    final_val = -1.0
    final_pair = None
    cluster = [c for c in best["cluster"] if c[0] >= best["val"] * (1.0 - CLUSTER_REL)]
    for _, e_mask, f_mask in cluster:
        E, F = _witness_sets(region, e_mask, f_mask)
        val = two_weight_ratio(u, v, E, F, r, cfg)
        if val > final_val:
            final_val = val
            final_pair = (E, F)
    E, F = final_pair
    millis = int(round(1000.0 * (time.perf_counter() - t0)))
    return ConstantSearchEntry(
        r=r,
        constant=final_val,
        method="exhaustive",
        e_size=len(E),
        f_size=len(F),
        e_witness=E,
        f_witness=F,
        evals=(size - 1) ** 2,
        millis=millis,
    )


def superlevel_candidates(scores, weights, vertices):
    """Non-empty prefixes of the region ordered by score/weight descending,
    ties by weight descending, then canonical order. The prefix family is the
    structured candidate pool for one side of the ratio search."""
    order = sorted(
        vertices,
        key=lambda x: (-(scores[x] / weights[x]), -weights[x], tree.canonical_key(x)),
    )
    return [tuple(order[: i + 1]) for i in range(len(order))]


def best_constant_heuristic(
    u, cfg, r, region_depth=None, v=None, seed=0, starts=None, anneal_steps=None
):
    """Lower bound for the best constant: structured starts, alternating
    prefix ascent on each side, then a seeded annealing polish."""
    t0 = time.perf_counter()
    v = u if v is None else v
    params = u.params
    if region_depth is None:
        region_depth = params.eval_depth
    if starts is None:
        starts = cfg.heuristic_starts
    if anneal_steps is None:
        anneal_steps = cfg.anneal_steps
    region = tree.vertices_up_to(params.k, region_depth)
    n = len(region)
    idx = {x: i for i, x in enumerate(region)}
    uvals = [u.value(y) for y in region]
    vvals = [v.value(x) for x in region]
    partners = [
        [yi for yi in range(n) if tree.distance(region[xi], region[yi]) == r]
        for xi in range(n)
    ]
    scale = kpow(cfg.k, cfg.epsilon * r * (1.0 - cfg.alpha))
    theta = 1.0 - 1.0 / cfg.q
    inv_pe = 1.0 / cfg.p
    evals = 0

    def ratio_of(e_idx, f_idx):
        nonlocal evals
        evals += 1
        if not e_idx or not f_idx:
            return 0.0
        fset = set(f_idx)
        bil = 0.0
        for xi in e_idx:
            for yi in partners[xi]:
                if yi in fset:
                    bil += uvals[yi]
        if bil == 0.0:
            return 0.0
        ve = sum(vvals[xi] for xi in e_idx)
        uf = sum(uvals[yi] for yi in f_idx)
        return bil / (scale * ve**inv_pe * uf**theta)

    def ascend(e_idx, f_idx):
        cur = ratio_of(e_idx, f_idx)
        for _ in range(60):
            improved = False
            # better center set for fixed partners
            fset = set(f_idx)
            gain = [sum(uvals[yi] for yi in partners[xi] if yi in fset) for xi in range(n)]
            order = sorted(
                range(n), key=lambda xi: (-(gain[xi] / vvals[xi]), -vvals[xi], xi)
            )
            uf = sum(uvals[yi] for yi in f_idx)
            bsum = 0.0
            vsum = 0.0
            best_pref, best_val = None, cur
            for count, xi in enumerate(order, start=1):
                bsum += gain[xi]
                vsum += vvals[xi]
                if bsum == 0.0:
                    continue
                val = bsum / (scale * vsum**inv_pe * uf**theta)
                if val > best_val * (1.0 + 1e-12):
                    best_pref, best_val = count, val
            if best_pref is not None:
                e_idx = sorted(order[:best_pref])
                cur = best_val
                improved = True
            # better partner set for fixed centers
            count_in = [0] * n
            for xi in e_idx:
                for yi in partners[xi]:
                    count_in[yi] += 1
            order = sorted(range(n), key=lambda yi: (-count_in[yi], -uvals[yi], yi))
            bsum = 0.0
            usum = 0.0
            ve = sum(vvals[xi] for xi in e_idx)
            best_pref, best_val = None, cur
            for count, yi in enumerate(order, start=1):
                bsum += uvals[yi] * count_in[yi]
                usum += uvals[yi]
                if bsum == 0.0:
                    continue
                val = bsum / (scale * ve**inv_pe * usum**theta)
                if val > best_val * (1.0 + 1e-12):
                    best_pref, best_val = count, val
            if best_pref is not None:
                f_idx = sorted(order[:best_pref])
                cur = best_val
                improved = True
            if not improved:
                break
        return cur, e_idx, f_idx

    start_pairs = []
    # best partnered singleton pair
    best_single, best_pair = 0.0, None
    for xi in range(n):
        for yi in partners[xi]:
            val = uvals[yi] / (scale * vvals[xi] ** inv_pe * uvals[yi] ** theta)
            if val > best_single:
                best_single, best_pair = val, ([xi], [yi])
    if best_pair:
        start_pairs.append(best_pair)
    # whole-level pairs
    levels = {}
    for i, x in enumerate(region):
        levels.setdefault(len(x), []).append(i)
    for a in sorted(levels):
        for b in sorted(levels):
            start_pairs.append((list(levels[a]), list(levels[b])))
    # sphere around each partner
    for yi in range(n):
        if partners[yi]:
            start_pairs.append((list(partners[yi]), [yi]))
    # seeded random starts
    rng = Random(seed)
    for _ in range(starts):
        e_idx = [i for i in range(n) if rng.random() < 0.5] or [rng.randrange(n)]
        f_idx = [i for i in range(n) if rng.random() < 0.5] or [rng.randrange(n)]
        start_pairs.append((e_idx, f_idx))

    best_val, best_e, best_f = 0.0, [0], [0]
    for e_idx, f_idx in start_pairs:
        val, e_out, f_out = ascend(list(e_idx), list(f_idx))
        if val > best_val:
            best_val, best_e, best_f = val, e_out, f_out
    method = "superlevel"
    # annealing polish with strictly decreasing temperature
    cur_val, cur_e, cur_f = best_val, list(best_e), list(best_f)
    temp = 0.25
    decay = (1e-3 / temp) ** (1.0 / max(anneal_steps, 1))
    for _ in range(anneal_steps):
        side = rng.random() < 0.5
        pick = rng.randrange(n)
        e_idx, f_idx = list(cur_e), list(cur_f)
        target = e_idx if side else f_idx
        if pick in target:
            if len(target) == 1:
                continue
            target.remove(pick)
        else:
            target.append(pick)
            target.sort()
        val = ratio_of(e_idx, f_idx)
        accept = val > cur_val or (
            cur_val > 0 and rng.random() < math.exp((val - cur_val) / (temp * cur_val + 1e-300))
        )
        if accept:
            cur_val, cur_e, cur_f = val, e_idx, f_idx
            if val > best_val * (1.0 + 1e-12):
                best_val, best_e, best_f = val, e_idx, f_idx
                method = "annealed"
        temp *= decay
    E = tuple(region[i] for i in sorted(best_e))
    F = tuple(region[i] for i in sorted(best_f))
    constant = two_weight_ratio(u, v, E, F, r, cfg)
    millis = int(round(1000.0 * (time.perf_counter() - t0)))
    return ConstantSearchEntry(
        r=r,
        constant=constant,
        method=method,
        e_size=len(E),
        f_size=len(F),
        e_witness=E,
        f_witness=F,
        evals=evals,
        millis=millis,
    )


def search_constants(u, cfg, radii, method="both", region_depth=None, v=None, seed=0,
                     starts=None, anneal_steps=None):
    """Run the requested search(es) for each radius and collect the entries."""
    if method not in ("exhaustive", "heuristic", "both"):
        raise ConfigError(f"method must be exhaustive, heuristic, or both, got {method!r}")
    params = u.params
    if region_depth is None:
        region_depth = params.eval_depth
    entries = []
    for r in radii:
        if method in ("exhaustive", "both"):
            entries.append(best_constant_exhaustive(u, cfg, r, region_depth, v=v))
        if method in ("heuristic", "both"):
            entries.append(
                best_constant_heuristic(
                    u, cfg, r, region_depth, v=v, seed=seed, starts=starts,
                    anneal_steps=anneal_steps,
                )
            )
    return ConstantSearchReport(entries=entries, region_depth=region_depth)


@dataclass
class PerLevelReport:
    passed: bool
    max_ratio: float
    witness: Optional[tuple]  # (j, r, m, i)
    j_max: int
    r_max: int
    checked: int


def per_level_condition_check(weight_beta, cfg, j_max=12, r_max=12):
    """Check count * k^(beta i) <= k^((r-m)(p-delta)) k^(r delta) k^(beta j q/p)
    with constant 1 over every tree-valid (j, r, m) in range; log-domain."""
    if weight_beta < 0:
        raise DomainError(f"weight_beta must be >= 0, got {weight_beta}")
    p, q, d, beta = cfg.p, cfg.q, cfg.delta, weight_beta
    lnk = math.log(cfg.k)
    worst = None
    checked = 0
    for j in range(j_max + 1):
        for r in range(r_max + 1):
            for m in range(min(j, r) + 1):
                i = j + r - 2 * m
                if i < 0:
                    continue
                cnt = tree.level_sphere_count(cfg.k, j, r, m)
                if cnt == 0:
                    continue
                checked += 1
                log_lhs = math.log(cnt) + beta * i * lnk
                log_rhs = ((r - m) * (p - d) + r * d + beta * j * q / p) * lnk
                gap = log_lhs - log_rhs
                if worst is None or gap > worst[0]:
                    worst = (gap, (j, r, m, i))
    max_ratio = math.exp(worst[0])
    return PerLevelReport(
        passed=max_ratio <= 1.0 + RATIO_TOL,
        max_ratio=max_ratio,
        witness=worst[1],
        j_max=j_max,
        r_max=r_max,
        checked=checked,
    )


@dataclass
class ScalarConditionReport:
    passed: bool
    max_gap: float  # worst lhs - rhs in base-k exponent units
    max_ratio: float
    witness: Optional[tuple]  # (j, r, m, i)
    j_max: int
    r_max: int


def radial_exponent_condition(weight_beta, cfg, j_max=12, r_max=12):
    """Scalar exponent inequality equivalent to the per-level condition with
    the count majorized by k^(r-m):
    (r - m)(1 + 2 beta q/p - p + delta) <= r delta + r beta q/p - i beta (1 - q/p)."""
    if weight_beta < 0:
        raise DomainError(f"weight_beta must be >= 0, got {weight_beta}")
    p, q, d, beta = cfg.p, cfg.q, cfg.delta, weight_beta
    worst = None
    for j in range(j_max + 1):
        for r in range(r_max + 1):
            for m in range(min(j, r) + 1):
                i = j + r - 2 * m
                if i < 0:
                    continue
                lhs = (r - m) * (1.0 + 2.0 * beta * q / p - p + d)
                rhs = r * d + r * beta * q / p - i * (beta - beta * q / p)
                gap = lhs - rhs
                if worst is None or gap > worst[0]:
                    worst = (gap, (j, r, m, i))
    return ScalarConditionReport(
        passed=worst[0] <= RATIO_TOL,
        max_gap=worst[0],
        max_ratio=kpow(cfg.k, worst[0]),
        witness=worst[1],
        j_max=j_max,
        r_max=r_max,
    )


@dataclass
class ProbeResult:
    name: str
    r_values: list
    logk_ratios: list
    step_slopes: list
    overall_slope: float
    diverges: bool


SLOPE_TOL = 1e-6


def divergence_probe(weight_beta, cfg, r_max=12):
    """Measure the normalized ratio along two extreme set families and report
    the growth rate of log_k(ratio) per unit radius.

    level_partners: center set {root}, partner set = whole level at depth r.
    level_centers: center set = whole level at depth r, partner set {root}.
    Both ratios are evaluated through exact level counts, so arbitrarily deep
    levels cost nothing.
    """
    if weight_beta < 0:
        raise DomainError(f"weight_beta must be >= 0, got {weight_beta}")
    beta, a, p, q, e = weight_beta, cfg.alpha, cfg.p, cfg.q, cfg.epsilon
    probes = []
    for name in ("level_partners", "level_centers"):
        rs = list(range(r_max + 1))
        logs = []
        for r in rs:
            if name == "level_partners":
                # bilinear = w(T_r) * 1; w(E) = 1; w(F) = k^(r(1+beta))
                log_b = r * (1.0 + beta)
                log_we = 0.0
                log_wf = r * (1.0 + beta)
            else:
                # bilinear = w(root) * k^r; w(E) = k^(r(1+beta)); w(F) = 1
                log_b = float(r)
                log_we = r * (1.0 + beta)
                log_wf = 0.0
            logs.append(
                log_b - e * r * (1.0 - a) - log_we / p - log_wf * (1.0 - 1.0 / q)
            )
        steps = [logs[i + 1] - logs[i] for i in range(len(logs) - 1)]
        overall = (logs[-1] - logs[0]) / r_max if r_max > 0 else 0.0
        probes.append(
            ProbeResult(
                name=name,
                r_values=rs,
                logk_ratios=logs,
                step_slopes=steps,
                overall_slope=overall,
                diverges=overall > SLOPE_TOL,
            )
        )
    return probes


@dataclass
class RadialCertificate:
    weight_beta: float
    window: tuple
    in_window: bool
    admissible_window: tuple
    per_level: PerLevelReport
    scalar: ScalarConditionReport
    probes: Optional[list]
    verdict: str

    def to_json_dict(self):
        doc = {
            "weight_beta": self.weight_beta,
            "window": list(self.window),
            "in_window": self.in_window,
            "admissible_window": list(self.admissible_window),
            "per_level": {
                "passed": self.per_level.passed,
                "max_ratio": self.per_level.max_ratio,
                "witness": list(self.per_level.witness),
                "checked": self.per_level.checked,
            },
            "scalar": {
                "passed": self.scalar.passed,
                "max_gap": self.scalar.max_gap,
                "max_ratio": self.scalar.max_ratio,
                "witness": list(self.scalar.witness),
            },
            "verdict": self.verdict,
        }
        if self.probes is not None:
            doc["probes"] = [
                {
                    "name": pr.name,
                    "overall_slope": pr.overall_slope,
                    "diverges": pr.diverges,
                }
                for pr in self.probes
            ]
        return doc


def certify_radial_weight(weight_beta, cfg, j_max=12, r_max=12):
    """Tri-state certification of the power weight k^(beta depth).

    certified: the per-level condition holds with constant 1 over the scanned
    range. refuted: it fails and a probe family shows the normalized ratio
    growing without bound. unknown: it fails but neither probe diverges.
    """
    if not cfg.is_sobolev:
        raise ConfigError("radial certification is defined for sobolev mode only")
    window = radial_window(cfg)
    in_window = window[0] - RATIO_TOL <= weight_beta <= window[1] + RATIO_TOL
    per_level = per_level_condition_check(weight_beta, cfg, j_max, r_max)
    scalar = radial_exponent_condition(weight_beta, cfg, j_max, r_max)
    probes = None
    if per_level.passed:
        verdict = "certified"
    else:
        probes = divergence_probe(weight_beta, cfg, r_max=max(r_max, 12))
        verdict = "refuted" if any(pr.diverges for pr in probes) else "unknown"
    return RadialCertificate(
        weight_beta=weight_beta,
        window=window,
        in_window=in_window,
        admissible_window=per_level_window(cfg),
        per_level=per_level,
        scalar=scalar,
        probes=probes,
        verdict=verdict,
    )


@dataclass
class WindowAgreementReport:
    grid: list  # (beta, in_window, scalar_pass, per_level_pass)
    agree_scalar_window: bool
    agree_scalar_per_level: bool
    disagreements: list


def window_agreement(cfg, grid_points=100, j_max=12, r_max=12):
    """Compare, over an even beta grid on [0, 1.2 (p-1)], membership in the
    documented window against the scalar and per-level checks."""
    lo, hi = 0.0, 1.2 * (cfg.p - 1.0)
    window = radial_window(cfg)
    grid = []
    bad = []
    for t in range(grid_points):
        beta = lo + (hi - lo) * t / (grid_points - 1)
        in_win = window[0] - RATIO_TOL <= beta <= window[1] + RATIO_TOL
        sc = radial_exponent_condition(beta, cfg, j_max, r_max).passed
        pl = per_level_condition_check(beta, cfg, j_max, r_max).passed
        grid.append((beta, in_win, sc, pl))
        if sc != in_win or sc != pl:
            bad.append((beta, in_win, sc, pl))
    return WindowAgreementReport(
        grid=grid,
        agree_scalar_window=all(g[1] == g[2] for g in grid),
        agree_scalar_per_level=all(g[2] == g[3] for g in grid),
        disagreements=bad,
    )
