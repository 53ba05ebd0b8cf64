"""
Building computation assignments: circular shifts, baselines, groups
====================================================================

A matrix-vector product W @ theta is distributed over K workers by cutting W
into row blocks and handing each worker a short list of coded tasks, where a
task is a known linear combination of block products.  This script builds
each construction the package offers and prints what every worker computes.
"""

import numpy as np

from codedcomp import (
    GroupPlan,
    build_generalized_rcs,
    build_mcc,
    build_rcs,
    build_rcs_assignment,
    build_uc_mmc,
    hybrid_example,
    partition_matrix,
)

# ---------------------------------------------------------------------------
# Partitioning: an 8x8 matrix into 4 row blocks of 2 rows each.
# ---------------------------------------------------------------------------
w = np.arange(64, dtype=float).reshape(8, 8)
part = partition_matrix(w, 4)
print("block shapes:", [b.shape for b in part.blocks])

# ---------------------------------------------------------------------------
# The randomized circular-shift construction.  Each worker stores one block
# per "order"; order j combines the degrees[j-1] blocks obtained by walking
# the circulant rows selected by a random set of shift offsets.  Fixing the
# offsets makes the construction reproducible, so we can print it exactly.
# ---------------------------------------------------------------------------
k = 20
degrees = [1, 2, 3]
matrix = build_rcs_assignment(k, degrees, offsets=[1, 4, 11, 15, 6, 18])
print("\ncirculant shift offsets (1-based):", matrix.offsets)
print("first worker's stored blocks by row:", [int(r[0]) for r in matrix.grid])

assignment = build_rcs(k, degrees, offsets=[1, 4, 11, 15, 6, 18])
print("tasks of worker 0:", [t.support for t in assignment.worker_tasks(0)])
print("tasks of worker 1:", [t.support for t in assignment.worker_tasks(1)])
print("message schedule (work units per message):", assignment.schedule())

# Without explicit offsets the offsets are drawn uniformly without
# replacement, which is the intended use:
rng = np.random.default_rng(7)
random_assignment = build_rcs(k, degrees, rng=rng)
print("a random draw, worker 0:", [t.support for t in random_assignment.worker_tasks(0)])

# ---------------------------------------------------------------------------
# Baselines on 4 workers:
#   * build_mcc    -- maximum-distance-separable tasks; the product is only
#                     decodable once some worker set finishes everything.
#   * build_uc_mmc -- uncoded blocks sent one at a time (multi-message).
#   * hybrid_example -- a hand-built hybrid of the two ideas.
# ---------------------------------------------------------------------------
for name, asn in [
    ("mds-style (kbar=2)", build_mcc(4, 2, [1, 2, 4, 8])),
    ("uncoded multi-message", build_uc_mmc(4, 2)),
    ("hybrid", hybrid_example()),
]:
    print(f"\n{name}:")
    for wk in range(asn.n_workers):
        combos = [
            (t.support, tuple(round(c, 3) for c in t.coefficients))
            for t in asn.worker_tasks(wk)
        ]
        print(f"  worker {wk}: {combos}")

# ---------------------------------------------------------------------------
# The grouped generalization cuts the matrix into groups * k blocks instead
# of k, so each block (and so each task) is cheaper by a factor of the group
# count.  Every row of the assignment matrix is tagged with a group and draws
# its shifted blocks from that group's range; a task may combine rows with
# different tags.
# ---------------------------------------------------------------------------
plan = GroupPlan(2, (1, 2, 1))  # one tag per row: sum([1, 2]) = 3 rows
grouped = build_generalized_rcs(8, plan, [1, 2], rng=np.random.default_rng(3))
print("\ngrouped construction (8 workers, 2 groups, 16 blocks):")
print("  task cost per unit:", grouped.task_cost)
for wk in (0, 1):
    print(f"  worker {wk} tasks:", [t.support for t in grouped.worker_tasks(wk)])
print("  rows 0 and 2 draw group-1 blocks 0..7; row 1 draws group-2 blocks 8..15")
