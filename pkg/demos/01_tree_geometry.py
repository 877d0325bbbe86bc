#!/usr/bin/env python3
"""Walk through the counting geometry of the rooted k-ary tree.

Spheres around a vertex split into slices indexed by how high the walk climbs
toward the root before descending. The closed-form counts are checked here
against a literal breadth-first search, and the two sandwich bounds that make
the tree "doubling-free" are printed for small radii.
"""

from treemax import tree

K = 2
CENTER = (0, 1)  # depth-2 vertex in the binary tree


def main():
    j = len(CENTER)
    print(f"k = {K}, center = {tree.format_vertex(CENTER)} at depth {j}")
    print()
    print(" r  sphere  ball  BFS  slices (m: count)")
    for r in range(7):
        oracle = tree.sphere_bfs_oracle(K, CENTER, r, j + r)
        sphere = tree.sphere_size(K, j, r)
        ball = tree.ball_size(K, j, r)
        slices = []
        for m in range(r + 1):
            cnt = tree.level_sphere_count(K, j, r, m)
            if cnt:
                slices.append(f"{m}:{cnt}")
        match = "ok" if sphere == len(oracle) else "MISMATCH"
        print(f"{r:2d}  {sphere:6d} {ball:5d} {len(oracle):4d}  {' '.join(slices):24s} {match}")
    print()
    print("sandwich bounds, r >= 1:")
    for r in range(1, 7):
        s = tree.sphere_size(K, j, r)
        b = tree.ball_size(K, j, r)
        print(
            f"  r={r}: k^r = {K**r:3d} <= |S| = {s:3d} <= 2 k^r = {2 * K**r:3d}, "
            f"|B|/|S| = {b / s:.4f} in [1, 2]"
        )
    print()
    # deep centers: the fraction of the sphere that lies below the center
    # stabilizes, which is what makes per-level bookkeeping tractable
    print("slice profile for a deep center (depth 12, r = 5):")
    for m in range(6):
        print(f"  m={m}: {tree.level_sphere_count(K, 12, 5, m)} vertices at level {12 + 5 - 2 * m}")


if __name__ == "__main__":
    main()
