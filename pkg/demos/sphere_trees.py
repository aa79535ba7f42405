"""Trees realizable on the 3-sphere, and what breaks them.

The generator builds a tree whose central edge has weight n + 1, hung from
index-0 and index-3 singular ends.  The checker tests the tree condition, the
saddle inequalities and vertex balance.
"""

from nsflow.builders import build_lemma34
from nsflow.graph import Saddle, check_s3, nsf_balance_check

L = build_lemma34(2)
print(L)
for e in L.edges:
    print(f"  {e.id:>4}: {e.src:>2} -> {e.dst:<2} weight {e.weight}")

rep = check_s3(L)
print("passes:", rep.passed)

# Every single weight perturbation is caught.
for e in L.edges:
    for d in (-1, 1):
        M = L.with_weight(e.id, e.weight + d)
        caught = bool(nsf_balance_check(M)) or not check_s3(M).passed
        assert caught
print("all", 2 * len(L.edges), "weight perturbations rejected")

# Dropping k at one saddle violates the saddle inequalities there.
bad = L.with_label("u2", Saddle([[2]]))
for d in check_s3(bad).failures():
    print(" ", d)
