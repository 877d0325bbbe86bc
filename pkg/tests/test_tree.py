"""Tree geometry: closed-form counts against the BFS oracle, vertex codec,
canonical ordering, and region enumeration."""

import random

import pytest

from treemax import tree
from treemax.errors import DomainError, GuardLimitError, OutOfTreeError


def test_params_validation():
    p = tree.TreeParams(2, 3, 4)
    assert p.vertex_count_up_to(4) == 31
    with pytest.raises(DomainError):
        tree.TreeParams(1, 3, 4)
    with pytest.raises(DomainError):
        tree.TreeParams(2, 5, 4)  # support deeper than region
    with pytest.raises(DomainError):
        tree.TreeParams(2, -1, 4)


def test_vertex_basics():
    assert tree.depth(tree.ROOT) == 0
    assert tree.parent(tree.ROOT) is None
    assert tree.parent((0, 1)) == (0,)
    assert tree.ancestor((0, 1, 1), 2) == (0,)
    with pytest.raises(OutOfTreeError):
        tree.ancestor((0,), 2)
    with pytest.raises(OutOfTreeError):
        tree.check_vertex(2, (0, 2))


def test_distance():
    assert tree.distance((), ()) == 0
    assert tree.distance((0,), (1,)) == 2
    assert tree.distance((0, 0), (0, 1)) == 2
    assert tree.distance((), (1, 0, 1)) == 3
    assert tree.distance((0, 1), (0, 1, 0, 0)) == 2
    # distance via explicit lowest common ancestor depth
    rng = random.Random(11)
    for _ in range(200):
        u = tuple(rng.randrange(3) for _ in range(rng.randrange(6)))
        v = tuple(rng.randrange(3) for _ in range(rng.randrange(6)))
        a = 0
        while a < min(len(u), len(v)) and u[a] == v[a]:
            a += 1
        assert tree.distance(u, v) == len(u) + len(v) - 2 * a


def test_vertex_codec_roundtrip():
    for v in [(), (0,), (1, 0), (0, 1, 1), (2, 0, 2)]:
        k = max(v, default=0) + 1
        s = tree.format_vertex(v)
        assert tree.parse_vertex(s) == v
    assert tree.format_vertex(()) == "0,"
    assert tree.format_vertex((0, 1)) == "2,01"
    with pytest.raises(DomainError):
        tree.format_vertex((10,))
    with pytest.raises(DomainError):
        tree.parse_vertex("not-a-vertex")


def test_level_and_region_enumeration():
    assert list(tree.level_vertices(2, 0)) == [()]
    assert list(tree.level_vertices(2, 2)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    region = tree.vertices_up_to(2, 3)
    assert len(region) == 15
    assert region == tree.sort_vertices(region)
    # dense index is a bijection onto 0..count-1 in canonical order
    for pos, v in enumerate(region):
        assert tree.dense_index(2, v) == pos
        assert tree.vertex_from_dense(2, pos) == v


def test_sphere_size_closed_form_vs_bfs():
    for k in (2, 3):
        for j in range(5):
            center = (0,) * j
            for r in range(7):
                oracle = tree.sphere_bfs_oracle(k, center, r, j + r)
                assert tree.sphere_size(k, j, r) == len(oracle), (k, j, r)
                by_depth = {}
                for u in oracle:
                    by_depth[len(u)] = by_depth.get(len(u), 0) + 1
                for m in range(r + 1):
                    i = j + r - 2 * m
                    want = tree.level_sphere_count(k, j, r, m) if i >= 0 else 0
                    assert by_depth.get(i, 0) == want or i < 0, (k, j, r, m)


def test_sphere_size_does_not_depend_on_center_choice():
    rng = random.Random(23)
    for k in (2, 3):
        for _ in range(30):
            j = rng.randrange(5)
            v = tuple(rng.randrange(k) for _ in range(j))
            r = rng.randrange(6)
            oracle = tree.sphere_bfs_oracle(k, v, r, j + r)
            assert len(oracle) == tree.sphere_size(k, j, r)


def test_ball_is_cumulative_spheres():
    for k in (2, 3):
        for j in range(4):
            total = 0
            for r in range(6):
                total += tree.sphere_size(k, j, r)
                assert tree.ball_size(k, j, r) == total


def test_size_sandwich_bounds():
    for k in (2, 3):
        for j in range(6):
            for r in range(8):
                s = tree.sphere_size(k, j, r)
                b = tree.ball_size(k, j, r)
                assert k**r <= s <= 2 * k**r
                assert 1.0 <= b / s <= 2.0


def test_deep_sphere_slice_formula():
    # at the center's own depth: k^(j-1) (k+1) points for j >= 1
    for k in (2, 3):
        for j in range(1, 7):
            assert tree.sphere_size(k, j, j) == k ** (j - 1) * (k + 1)


def test_level_sphere_count_edge_cases():
    assert tree.level_sphere_count(2, 3, 4, 0) == 16
    assert tree.level_sphere_count(2, 3, 3, 3) == 1
    assert tree.level_sphere_count(2, 2, 4, 3) == 0  # m > j
    with pytest.raises(DomainError):
        tree.level_sphere_count(2, 3, 4, -1)
    with pytest.raises(DomainError):
        tree.level_sphere_count(2, 3, 4, 5)


def test_transpose_count_vs_oracle():
    # number of centers at level j pairing with a fixed partner at level i
    for k in (2, 3):
        for i in range(4):
            y = (0,) * i
            for r in range(6):
                members = tree.sphere_bfs_oracle(k, y, r, i + r)
                for m in range(r + 1):
                    j = i - r + 2 * m
                    if j < 0:
                        continue
                    cnt = sum(1 for u in members if len(u) == j)
                    got = tree.transpose_count_bound(k, i, j, r, m)
                    assert got == cnt, (k, i, j, r, m)
                    assert cnt <= k**m


def test_sphere_members_match_oracle():
    rng = random.Random(5)
    for k in (2, 3):
        for _ in range(300):
            j = rng.randrange(4)
            v = tuple(rng.randrange(k) for _ in range(j))
            r = rng.randrange(6)
            cap = rng.randrange(j + r + 2)
            members = tree.sphere_members(k, v, r, cap)
            oracle = tree.sphere_bfs_oracle(k, v, r, cap)
            assert set(members) == set(oracle), (k, v, r, cap)
            assert len(set(members)) == len(members)


def test_bfs_oracle_guard():
    with pytest.raises(GuardLimitError):
        tree.sphere_bfs_oracle(3, (0,), 11, 12)


def test_parent_child_nbhd_consistency():
    # every sphere member at radius 1 is the parent or a child
    for k in (2, 3):
        v = (0, 1 % k)
        members = set(tree.sphere_members(k, v, 1, 4))
        expected = {v[:-1]} | {v + (c,) for c in range(k)}
        assert members == expected
