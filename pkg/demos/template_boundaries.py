"""Boundaries of thickened templates.

The Lorenz template has one joining and one splitting chart.  Its thickening
is bounded by a genus-2 surface split into an entrance pair of pants and an
exit pair of pants along three dividing curves.
"""

import itertools
from collections import Counter

from nsflow.template import (
    build_lorenz,
    check_lemma41,
    enumerate_small_templates,
    find_templates_with_signature,
    template_genus,
    thicken_boundary,
)

for tw in itertools.product((0, 1), repeat=3):
    rep = thicken_boundary(build_lorenz(tw))
    print(tw, "entrance", rep.entrance_genera(), "exit", rep.exit_genera(), "curves", rep.dividing_curves,
          "closed", rep.closed_genera)

# Template genus across all templates with up to four charts.
reps = [thicken_boundary(T) for T in enumerate_small_templates(4)]
print()
print("templates:", len(reps))
print("template genus histogram:", sorted(Counter(template_genus(r) for r in reps).items()))
print("entrance/exit identity holds everywhere:", all(check_lemma41(r) for r in reps))

# A template whose entrance is a torus piece plus a sphere piece and whose
# exit is one sphere piece, split along four curves.
T, rep = next(find_templates_with_signature([1, 0], [0], dividing_curves=4))
print()
print("example with entrance genera {1, 0}, exit {0}:")
for s in T.strips:
    print("  ", s.src, "->", s.dst, "twist", s.twist)
for c in rep.entrance + rep.exit:
    print("  ", c)
