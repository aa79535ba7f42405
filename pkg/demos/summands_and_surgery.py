"""Forced S^1 x S^2 summands and the connected-sum gadget.

Pasting the singular ends of the tree together in pairs gives a nonsingular
graph with one independent cycle per pair.  The heaviest edge then forces
that many summands, certified by sphere edges whose removal keeps the graph
connected.
"""

import random

from nsflow.builders import build_prop35, build_section5, random_nsf_graph, surgery_connect
from nsflow.graph import cycle_rank, nsf_balance_check, summand_lower_bound

for n in range(1, 6):
    L = build_prop35(n)
    b = summand_lower_bound(L)
    print(f"n={n}: cycle rank {cycle_rank(L)}, forced summands {b.n}, certificate {list(b.certificate)}")

# The closed two-torus example is the n = 1 member.
L5 = build_section5().L
print("closed example:", summand_lower_bound(L5))

# Surgery adds cycle ranks and keeps every residual at zero.
rng = random.Random(1)
L1, L2 = random_nsf_graph(rng, 12), random_nsf_graph(rng, 12)
end = lambda L: next(e.id for e in L.edges if e.dst.startswith("A") and e.weight == 1)  # noqa: E731
G = surgery_connect(L1, end(L1), L2, end(L2))
print(f"ranks {cycle_rank(L1)} + {cycle_rank(L2)} -> {cycle_rank(G)}; balanced: {not nsf_balance_check(G)}")
