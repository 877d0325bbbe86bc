"""Implicit infinite rooted k-ary tree: exact geometry without node objects.

A vertex is a tuple of child digits; the root is the empty tuple and depth is
the tuple length. Spheres and balls refer to the tree metric (edge count of
the unique minimal path) under counting measure. All cardinalities are exact
integers; closed forms are for the infinite tree, enumeration is capped by an
explicit depth.
"""

from collections import deque
from dataclasses import dataclass
from itertools import product

from .errors import DomainError, GuardLimitError, OutOfTreeError

ROOT = ()

ORACLE_GUARD = 100_000


@dataclass(frozen=True)
class TreeParams:
    """Branching factor plus the two depth caps.

    support_depth bounds function supports; eval_depth bounds the vertices at
    which operators and norms are evaluated.
    """

    k: int
    support_depth: int
    eval_depth: int

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 2:
            raise DomainError(f"branching factor k must be an integer >= 2, got {self.k}")
        if self.support_depth < 0:
            raise DomainError(f"support_depth must be >= 0, got {self.support_depth}")
        if self.eval_depth < self.support_depth:
            raise DomainError(
                f"eval_depth must be >= support_depth, got {self.eval_depth} < {self.support_depth}"
            )

    def vertex_count_up_to(self, n):
        """Number of vertices at depth <= n."""
        return (self.k ** (n + 1) - 1) // (self.k - 1)


def depth(v):
    return len(v)


def is_valid_vertex(k, v):
    return isinstance(v, tuple) and all(isinstance(c, int) and 0 <= c < k for c in v)


def check_vertex(k, v):
    if not is_valid_vertex(k, v):
        raise OutOfTreeError(f"not a valid vertex for k={k}: {v!r}")
    return v


def parent(v):
    """Parent vertex, or None for the root."""
    if not v:
        return None
    return v[:-1]


def ancestor(v, m):
    """The ancestor m levels above v; ancestor(v, 0) is v itself."""
    if m < 0:
        raise DomainError(f"ancestor height must be >= 0, got {m}")
    if m > len(v):
        raise OutOfTreeError(f"ancestor height {m} exceeds depth {len(v)}")
    return v[: len(v) - m]


def distance(u, v):
    """Edge count of the unique minimal path between u and v."""
    a = 0
    for x, y in zip(u, v):
        if x != y:
            break
        a += 1
    return (len(u) - a) + (len(v) - a)


def canonical_key(v):
    return (len(v), v)


def sort_vertices(vs):
    return sorted(vs, key=canonical_key)


def format_vertex(v):
    """Encode a vertex as "depth,digits": root -> "0,", (0, 1) -> "2,01"."""
    if any(c >= 10 for c in v):
        raise DomainError("vertex string codec supports digits 0..9 only (k <= 10)")
    return f"{len(v)}," + "".join(str(c) for c in v)


def parse_vertex(s):
    head, sep, digits = s.partition(",")
    if not sep:
        raise DomainError(f"vertex string must look like 'depth,digits', got {s!r}")
    try:
        j = int(head)
    except ValueError:
        raise DomainError(f"bad depth in vertex string {s!r}") from None
    if len(digits) != j or not all(c.isdigit() for c in digits):
        raise DomainError(f"digit path does not match depth in vertex string {s!r}")
    return tuple(int(c) for c in digits)


def level_vertices(k, j):
    """All depth-j vertices in lexicographic order."""
    if j == 0:
        yield ROOT
        return
    for digits in product(range(k), repeat=j):
        yield digits


def vertices_up_to(k, n):
    """All vertices of depth <= n in canonical order (depth, then lex)."""
    out = []
    for j in range(n + 1):
        out.extend(level_vertices(k, j))
    return out


def dense_index(k, v):
    """Canonical dense index within a fixed truncation: level offset plus the
    base-k value of the path."""
    j = len(v)
    offset = (k**j - 1) // (k - 1)
    val = 0
    for c in v:
        val = val * k + c
    return offset + val


def vertex_from_dense(k, idx):
    if idx < 0:
        raise DomainError(f"dense index must be >= 0, got {idx}")
    j = 0
    offset = 0
    while offset + k**j <= idx:
        offset += k**j
        j += 1
    val = idx - offset
    digits = []
    for _ in range(j):
        digits.append(val % k)
        val //= k
    return tuple(reversed(digits))


def sphere_size(k, j, r):
    """|S(x, r)| for any vertex x at depth j in the infinite tree."""
    if k < 2:
        raise DomainError(f"k must be >= 2, got {k}")
    if j < 0 or r < 0:
        raise DomainError(f"depth and radius must be >= 0, got j={j}, r={r}")
    if r == 0:
        return 1
    total = k**r
    for m in range(1, min(j, r - 1) + 1):
        total += (k - 1) * k ** (r - m - 1)
    if r <= j:
        total += 1
    return total


def ball_size(k, j, r):
    """|B(x, r)| = sum of sphere sizes for radii 0..r."""
    return sum(sphere_size(k, j, s) for s in range(r + 1))


def level_sphere_count(k, j, r, m):
    """Size of the intersection of level i with S(x, r) for x at depth j,
    where i = j + r - 2m.

    m is the height of the common ancestor above x for that slice of the
    sphere; summing over m = 0..r reproduces sphere_size.
    """
    if m < 0 or m > r:
        raise DomainError(f"ancestor height m must satisfy 0 <= m <= r, got m={m}, r={r}")
    i = j + r - 2 * m
    if i < 0 or m > j:
        return 0
    if m == 0:
        return k**r
    if m == r:
        return 1
    return (k - 1) * k ** (r - m - 1)


def transpose_count_bound(k, i, j, r, m):
    """Exact count of x in T_j with d(x, y) = r for a fixed y in T_i, where
    i = j + r - 2m. The count is the mirrored level count and never exceeds k^m."""
    if m < 0 or m > r:
        raise DomainError(f"ancestor height m must satisfy 0 <= m <= r, got m={m}, r={r}")
    if i != j + r - 2 * m or i < 0 or j < 0:
        raise DomainError(f"inconsistent slice: need i = j + r - 2m >= 0, got i={i}, j={j}, r={r}, m={m}")
    # swapping the roles of the two levels mirrors the ancestor height r - m
    count = level_sphere_count(k, i, r, r - m)
    assert count <= k**m
    return count


def sphere_members(k, v, r, depth_cap):
    """All y with d(v, y) = r and depth(y) <= depth_cap, in canonical order
    (ancestor height m ascending, then lexicographic), no duplicates.

    Walks up m levels and descends r - m levels avoiding the return branch.
    """
    check_vertex(k, v)
    if r < 0 or depth_cap < 0:
        raise DomainError(f"radius and depth cap must be >= 0, got r={r}, cap={depth_cap}")
    j = len(v)
    out = []
    for m in range(0, min(r, j) + 1):
        i = j + r - 2 * m  # every member from this slice sits at depth i
        if i < 0 or i > depth_cap:
            continue
        anc = v[: j - m]
        down = r - m
        if down == 0:
            out.append(anc)
            continue
        avoid = v[j - m] if m >= 1 else None
        for first in range(k):
            if first == avoid:
                continue
            if down == 1:
                out.append(anc + (first,))
                continue
            for rest in product(range(k), repeat=down - 1):
                out.append(anc + (first,) + rest)
    return out


def sphere_bfs_oracle(k, v, r, depth_cap, guard=ORACLE_GUARD):
    """Independent sphere enumeration by breadth-first search from v.

    Explores the ball of radius r around v inside the tree truncated at depth
    depth_cap + r, so the enumeration region stays ball-sized. Refuses with
    GuardLimitError once more than `guard` vertices have been touched.
    Returns the set of vertices at BFS distance exactly r with depth <= depth_cap.
    """
    check_vertex(k, v)
    explore_cap = depth_cap + r
    dist = {v: 0}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        d = dist[u]
        if d == r:
            continue
        neighbors = []
        if u:
            neighbors.append(u[:-1])
        if len(u) < explore_cap:
            neighbors.extend(u + (c,) for c in range(k))
        for nb in neighbors:
            if nb not in dist:
                dist[nb] = d + 1
                if len(dist) > guard:
                    raise GuardLimitError(
                        f"BFS oracle region exceeds guard of {guard} vertices "
                        f"(k={k}, |v|={len(v)}, r={r}, cap={depth_cap})"
                    )
                queue.append(nb)
    return {u for u, d in dist.items() if d == r and len(u) <= depth_cap}
