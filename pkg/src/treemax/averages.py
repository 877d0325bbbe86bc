"""Spherical sums, fractional spherical and ball averages, and their maximal
operators over the truncation region.

The fast route aggregates descendant slice sums along the ancestor path of the
centre; the naive route is a literal fsum over the sphere membership list in
canonical order. Both routes add the same numbers in the same order, so for
dyadic-valued functions they agree bit for bit.
"""

from math import fsum
from typing import NamedTuple

from . import tree
from .errors import DomainError
from .functions import _sum_levelwise
from .util import kpow, ordered_parallel_map


class DescendantSumTable:
    """Sums of f over the depth-(d) descendant slice below each vertex.

    get(v, d) = sum of f on {u >= v : depth(u) = depth(v) + d}. Eager mode
    fills the whole region by decreasing depth; lazy mode memoizes on demand.
    Both modes combine children in digit order, so results are bit-identical.
    """

    def __init__(self, f, lazy=False):
        self.f = f
        self.params = f.params
        self.depth_cap = f.params.support_depth
        self._memo = {}
        if not lazy:
            self._build()

    def _build(self):
        k = self.params.k
        cap = self.depth_cap
        for j in range(cap, -1, -1):
            for v in tree.level_vertices(k, j):
                self._memo[(v, 0)] = self.f.value(v)
                for d in range(1, cap - j + 1):
                    self._memo[(v, d)] = fsum(
                        self._memo[(v + (c,), d - 1)] for c in range(k)
                    )

    def get(self, v, d):
        if d < 0 or len(v) + d > self.depth_cap:
            return 0.0
        key = (v, d)
        memo = self._memo
        if key not in memo:
            if d == 0:
                memo[key] = self.f.value(v)
            else:
                k = self.params.k
                memo[key] = fsum(self.get(v + (c,), d - 1) for c in range(k))
        return memo[key]


def spherical_sum(f, x, r, method="fast", table=None):
    """Sum of f over the radius-r sphere around x, within the support region.

    fast: walk the ancestors a_m of x (m = 0..min(r, depth)) and add the
    descendant slice at distance r - m below a_m, minus the part already
    counted below a_{m-1}. naive: literal fsum over the membership list.
    """
    params = f.params
    tree.check_vertex(params.k, x)
    if r < 0:
        raise DomainError(f"radius must be >= 0, got {r}")
    if method == "naive":
        members = tree.sphere_members(params.k, x, r, params.support_depth)
        return fsum(f.value(u) for u in members)
    if method != "fast":
        raise DomainError(f"unknown spherical sum method {method!r}")
    if table is None:
        table = DescendantSumTable(f)
    j = len(x)
    total = []
    for m in range(min(r, j) + 1):
        anc = tree.ancestor(x, m)
        inner = table.get(tree.ancestor(x, m - 1), r - m - 1) if m >= 1 else 0.0
        total.append(table.get(anc, r - m) - inner)
    return fsum(total)


def spherical_average(f, x, r, alpha, method="fast", table=None):
    """Fractional spherical average: sphere sum / |S(x, r)|^(1 - alpha)."""
    if not 0 <= alpha < 1:
        raise DomainError(f"alpha must lie in [0, 1), got {alpha}")
    s = spherical_sum(f, x, r, method=method, table=table)
    size = tree.sphere_size(f.params.k, len(x), r)
    return s / float(size) ** (1.0 - alpha)


class MaximalValue(NamedTuple):
    value: float
    radius: int


def _radius_cap(f, x):
    """Largest radius that can still meet the support: max distance from x to
    any support vertex (0 for the zero function)."""
    return max((tree.distance(x, v) for v in f.support()), default=0)


def spherical_maximal(f, x, alpha, table=None):
    """sup over r >= 0 of the fractional spherical average at x.

    The supremum over r of a finitely supported function is attained at some
    r <= max distance to the support. Ties resolve to the smallest radius.
    """
    if table is None:
        table = DescendantSumTable(f)
    best = MaximalValue(0.0, 0)
    for r in range(_radius_cap(f, x) + 1):
        val = spherical_average(f, x, r, alpha, table=table)
        if val > best.value:
            best = MaximalValue(val, r)
    return best


def ball_maximal(f, x, alpha, table=None):
    """sup over r >= 0 of (sum of f over B(x, r)) / |B(x, r)|^(1 - alpha)."""
    if not 0 <= alpha < 1:
        raise DomainError(f"alpha must lie in [0, 1), got {alpha}")
    if table is None:
        table = DescendantSumTable(f)
    k = f.params.k
    j = len(x)
    best = MaximalValue(0.0, 0)
    shell_sums = []
    for r in range(_radius_cap(f, x) + 1):
        shell_sums.append(spherical_sum(f, x, r, table=table))
        total = fsum(shell_sums)
        val = total / float(tree.ball_size(k, j, r)) ** (1.0 - alpha)
        if val > best.value:
            best = MaximalValue(val, r)
    return best


def maximal_field(f, alpha, operator="sphere", threads=1):
    """Maximal operator evaluated at every vertex of the truncation region, in
    canonical order. Returns a list of (vertex, MaximalValue)."""
    if operator == "sphere":
        point = spherical_maximal
    elif operator == "ball":
        point = ball_maximal
    else:
        raise DomainError(f"unknown operator {operator!r}")
    table = DescendantSumTable(f)
    verts = tree.vertices_up_to(f.params.k, f.params.eval_depth)
    vals = ordered_parallel_map(lambda x: point(f, x, alpha, table=table), verts, threads)
    return list(zip(verts, vals))


def equivalence_constant(k, alpha):
    """c(k, alpha) with S_alpha <= 2^(1-alpha) M_alpha and
    M_alpha <= c(k, alpha) S_alpha: geometric tail over radii."""
    if not 0 <= alpha < 1:
        raise DomainError(f"alpha must lie in [0, 1), got {alpha}")
    return 2.0 ** (1.0 - alpha) / (1.0 - kpow(k, -(1.0 - alpha)))
