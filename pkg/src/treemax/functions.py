"""Finitely supported test functions, weights, set weights, and weighted norms.

Sums over vertex sets are computed levelwise (math.fsum per depth, then fsum
of the level totals), so a set weight always equals the sum of its per-level
weights bit for bit. Radial weights are evaluated in log-domain.
"""

import json
import math
import random
from math import fsum

from . import tree
from .errors import DomainError, RegionError
from .tree import TreeParams, canonical_key, sort_vertices

DYADIC_STEPS = 2**20


def _sum_levelwise(pairs):
    """Sum (vertex, value) pairs: fsum within each depth, fsum across depths."""
    by_level = {}
    for v, x in pairs:
        by_level.setdefault(len(v), []).append(x)
    return fsum(fsum(by_level[j]) for j in sorted(by_level))


class TreeFunction:
    """Nonnegative finitely supported function on vertices.

    Zeros are dropped at construction; negative, non-finite, or too-deep
    entries are rejected. The stored map never contains a zero.
    """

    def __init__(self, params, values):
        self.params = params
        clean = {}
        for v, x in values.items():
            tree.check_vertex(params.k, v)
            if len(v) > params.support_depth:
                raise RegionError(
                    f"support vertex at depth {len(v)} exceeds support_depth {params.support_depth}"
                )
            x = float(x)
            if not math.isfinite(x) or x < 0:
                raise DomainError(f"function values must be finite and >= 0, got {x} at {v}")
            if x > 0:
                clean[v] = x
        self._values = clean
        self._support = tuple(sort_vertices(clean))

    def value(self, v):
        return self._values.get(v, 0.0)

    def support(self):
        return self._support

    def items(self):
        return [(v, self._values[v]) for v in self._support]

    def max_support_depth(self):
        return max((len(v) for v in self._support), default=0)

    def scale(self, c):
        if c <= 0:
            raise DomainError(f"scale factor must be > 0, got {c}")
        return TreeFunction(self.params, {v: c * x for v, x in self._values.items()})

    def __eq__(self, other):
        return isinstance(other, TreeFunction) and self._values == other._values

    def to_json_dict(self):
        return {
            "k": self.params.k,
            "depth": self.params.support_depth,
            "values": {tree.format_vertex(v): x for v, x in self.items()},
        }

    @classmethod
    def from_json_dict(cls, doc, eval_depth=None):
        k = int(doc["k"])
        d = int(doc["depth"])
        params = TreeParams(k, d, d if eval_depth is None else eval_depth)
        values = {tree.parse_vertex(s): x for s, x in doc.get("values", {}).items()}
        return cls(params, values)

    @classmethod
    def load(cls, path, eval_depth=None):
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh), eval_depth=eval_depth)


def char_function(params, vertices, value=1.0):
    """Indicator function of a vertex set, scaled by value."""
    return TreeFunction(params, {v: value for v in vertices})


class Weight:
    """Strictly positive weight on the evaluation region.

    kind "radial": w(v) = k**(weight_beta * depth(v)), defined at every depth.
    kind "tabulated": explicit table covering the whole evaluation region.
    """

    def __init__(self, params, kind, weight_beta=None, table=None):
        self.params = params
        self.kind = kind
        if kind == "radial":
            if weight_beta is None or weight_beta < 0:
                raise DomainError(f"radial weight needs weight_beta >= 0, got {weight_beta}")
            self.weight_beta = float(weight_beta)
            self.table = None
        elif kind == "tabulated":
            if not table:
                raise DomainError("tabulated weight needs a non-empty table")
            clean = {}
            for v, x in table.items():
                tree.check_vertex(params.k, v)
                x = float(x)
                if not math.isfinite(x) or x <= 0:
                    raise DomainError(f"weights must be finite and > 0, got {x} at {v}")
                clean[v] = x
            for v in tree.vertices_up_to(params.k, params.eval_depth):
                if v not in clean:
                    raise RegionError(f"tabulated weight missing region vertex {v}")
            self.weight_beta = None
            self.table = clean
        else:
            raise DomainError(f"unknown weight kind {kind!r}")

    @classmethod
    def radial(cls, params, weight_beta):
        return cls(params, "radial", weight_beta=weight_beta)

    @classmethod
    def tabulated(cls, params, table):
        return cls(params, "tabulated", table=table)

    @classmethod
    def from_function(cls, params, fn):
        verts = tree.vertices_up_to(params.k, params.eval_depth)
        return cls(params, "tabulated", table={v: fn(v) for v in verts})

    def log_value(self, v):
        """ln w(v); exact route for radial weights at any depth."""
        if self.kind == "radial":
            return self.weight_beta * len(v) * math.log(self.params.k)
        return math.log(self.value(v))

    def value(self, v):
        if self.kind == "radial":
            return math.exp(self.weight_beta * len(v) * math.log(self.params.k))
        try:
            return self.table[v]
        except KeyError:
            raise RegionError(f"vertex {v} outside tabulated weight region") from None

    def scale(self, c):
        """The pointwise multiple c*w as a tabulated weight on the region."""
        if c <= 0:
            raise DomainError(f"scale factor must be > 0, got {c}")
        verts = tree.vertices_up_to(self.params.k, self.params.eval_depth)
        return Weight.tabulated(self.params, {v: c * self.value(v) for v in verts})

    def weight_of_set(self, vertices):
        """w(A) as a levelwise exact-order sum; 0 for the empty set."""
        vs = sort_vertices(set(vertices))
        return _sum_levelwise((v, self.value(v)) for v in vs)

    def to_json_dict(self):
        doc = {"k": self.params.k, "depth": self.params.eval_depth, "kind": self.kind}
        if self.kind == "radial":
            doc["beta"] = self.weight_beta
        else:
            doc["values"] = {tree.format_vertex(v): x for v, x in sorted(self.table.items(), key=lambda t: canonical_key(t[0]))}
        return doc

    @classmethod
    def from_json_dict(cls, doc, params=None):
        k = int(doc["k"])
        d = int(doc["depth"])
        if params is None:
            params = TreeParams(k, d, d)
        if doc["kind"] == "radial":
            return cls.radial(params, float(doc["beta"]))
        table = {tree.parse_vertex(s): x for s, x in doc["values"].items()}
        return cls.tabulated(params, table)

    @classmethod
    def load(cls, path, params=None):
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh), params=params)


def validate_set(params, vertices):
    """Normalize an iterable of vertices into a sorted, duplicate-free tuple
    inside the evaluation region."""
    seen = set()
    for v in vertices:
        tree.check_vertex(params.k, v)
        if len(v) > params.eval_depth:
            raise RegionError(f"set member at depth {len(v)} exceeds eval_depth {params.eval_depth}")
        seen.add(v)
    return tuple(sort_vertices(seen))


def weight_of_set(w, vertices):
    return w.weight_of_set(vertices)


def lp_norm(f, p, w):
    """(sum |f|^p w)^(1/p); equals w(E)^(1/p) for an indicator of E."""
    if p < 1:
        raise DomainError(f"exponent p must be >= 1, got {p}")
    total = _sum_levelwise((v, x**p * w.value(v)) for v, x in f.items())
    return total ** (1.0 / p)


def map_lp_norm(pairs, p, w):
    """lp_norm for a raw (vertex, value) map such as a maximal-operator field."""
    if p < 1:
        raise DomainError(f"exponent p must be >= 1, got {p}")
    total = _sum_levelwise((v, x**p * w.value(v)) for v, x in pairs if x > 0)
    return total ** (1.0 / p)


def layer_cake_norm(f, q, w):
    """Same value as lp_norm(f, q, w), but computed through the layer-cake
    identity: q * integral of lambda^(q-1) * w({f > lambda}) as an exact finite
    sum over the sorted distinct values of f."""
    if q < 1:
        raise DomainError(f"exponent q must be >= 1, got {q}")
    items = f.items()
    if not items:
        return 0.0
    distinct = sorted({x for _, x in items})
    # superlevel weights w({f >= v_i}) by accumulating from the top value down
    superlevel = {}
    acc = 0.0
    for val in reversed(distinct):
        acc += w.weight_of_set([v for v, x in items if x == val])
        superlevel[val] = acc
    total = 0.0
    prev = 0.0
    for val in distinct:
        total += (val**q - prev**q) * superlevel[val]
        prev = val
    return total ** (1.0 / q)


def random_function(params, seed, density, value_range=(0.0, 1.0)):
    """Reproducible random function with values on the dyadic grid.

    Values are multiples of vmax / 2^20 with vmax = value_range[1] a power of
    two, so any finite sum of them is exact in double precision. Same seed,
    same output.
    """
    if not 0 < density <= 1:
        raise DomainError(f"density must lie in (0, 1], got {density}")
    lo, vmax = value_range
    if lo != 0.0:
        raise DomainError(f"value_range must start at 0, got {lo}")
    exponent = math.log2(vmax)
    if vmax <= 0 or exponent != int(exponent):
        raise DomainError(f"value_range upper end must be a power of two, got {vmax}")
    rng = random.Random(seed)
    values = {}
    for v in tree.vertices_up_to(params.k, params.support_depth):
        if rng.random() < density:
            values[v] = rng.randrange(1, DYADIC_STEPS + 1) / DYADIC_STEPS * vmax
    return TreeFunction(params, values)


def random_set(params, seed, density):
    """Reproducible random vertex set over the evaluation region."""
    if not 0 < density <= 1:
        raise DomainError(f"density must lie in (0, 1], got {density}")
    rng = random.Random(seed)
    picked = [v for v in tree.vertices_up_to(params.k, params.eval_depth) if rng.random() < density]
    return tuple(picked)
