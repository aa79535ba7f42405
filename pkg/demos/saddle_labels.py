"""Saddle labels and their mod-2 kernel dimension.

Every saddle vertex of a Lyapunov graph carries a nonnegative integer matrix.
The realizability checks only look at k = dim ker(I - B) over F_2 where B is
the matrix reduced mod 2.
"""

import numpy as np

from nsflow.gf2 import find_matrix_with_k, is_irreducible, mod2_reduce, ssft_k

# A few hand-picked matrices.
for A in ([[1]], [[2]], [[1, 2], [2, 1]], [[1, 1], [1, 1]], [[0, 1], [1, 0]], [[1, 0], [1, 1]]):
    print(f"{str(A):<18} B={mod2_reduce(A).to_array().tolist()!s:<18} k={ssft_k(A)}  irreducible={is_irreducible(A)}")

# The deterministic family used by the generators: 1 on the diagonal, 2 elsewhere.
print()
for k in range(5):
    A = find_matrix_with_k(k)
    print(k, A.tolist(), "->", ssft_k(A))

# How k is distributed over random 5x5 matrices with entries 0..3.
rng = np.random.default_rng(0)
ks = [ssft_k(rng.integers(0, 4, size=(5, 5))) for _ in range(2000)]
print()
print("k histogram over 2000 random 5x5 matrices:", np.bincount(ks).tolist())
