"""
A first walk through innate pairwise SERP ordering
==================================================

Two ranked result lists, reduced to binary relevance, can sometimes be
ordered before any effectiveness metric is chosen: if one list has at
least as many relevant documents in every prefix, every reasonable
metric must score it at least as highly.  This script walks the core
vocabulary: the four relationships, the per-depth trajectory, and the
five-group classification used when many topics are tabulated at once.
"""

from ipso.serp import Serp, classify_group, compare, trajectory

# A SERP is just a binary relevance vector, one value per rank.
run_a = Serp([1, 1, 0, 1, 0])
run_b = Serp([1, 0, 1, 0, 0])

print("A =", run_a.bitstring)
print("B =", run_b.bitstring)

# compare() answers: is A innately at-least-as-good (ni), at-most-as-good
# (ns), identical (==), or can metrics legitimately disagree (**)?
rel = compare(run_a, run_b, 5)
print("relationship at k=5:", rel.code)

# A's prefix counts are (1,2,2,3,3) against B's (1,1,2,2,2): A is never
# behind, so no metric that rewards earlier relevant documents may rank
# B above A.  Swapping the arguments mirrors the verdict.
print("flipped:", compare(run_b, run_a, 5).code)

# The trajectory shows the relationship at every evaluation depth.  It
# can only move forward: an equal prefix, then one directional phase,
# then permanent non-separability.
deep_a = [0, 1, 0, 1, 1, 0, 0, 0, 0, 0]
deep_b = [0, 1, 0, 0, 1, 0, 0, 1, 1, 0]
traj = trajectory(deep_a, deep_b)
print()
print("depth :", " ".join(f"{d:>2}" for d in range(1, 11)))
print("state :", " ".join(f"{c:>2}" for c in traj.codes()))
print("equal prefix =", traj.leading_equal_run(),
      "| first ** at depth", traj.first_non_separable_depth(),
      "| midpoint before **:", traj.midpoint())

# Non-separable does not mean "unknowable" — it means the verdict is
# up to the metric.  The canonical depth-3 example: one early hit
# against two later ones.
early = [1, 0, 0]
late = [0, 1, 1]
print()
print("early =", Serp(early).bitstring, " late =", Serp(late).bitstring,
      "->", compare(early, late, 3).code)
for depth in (1, 2, 3):
    print(f"  truncated to k={depth}:", compare(early[:depth], late[:depth], depth).code)

# When a whole topic set is tabulated, each pair lands in one of five
# groups: ** with an ns midpoint, ns, ==, ni, and ** with an ni
# midpoint.  Tables are sectioned in that order so the directional
# blocks sit together.
print()
for a, b in [(late, early), ([1, 0, 0], [1, 1, 0]), ([1, 0, 1], [1, 0, 1]),
             ([1, 1, 0], [1, 0, 0]), (early, late)]:
    group = classify_group(a, b, 3)
    print(f"{Serp(a).bitstring} vs {Serp(b).bitstring} -> group {group.label}")
