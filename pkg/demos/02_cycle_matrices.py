"""Cycle matrices: a closed-form solve in 3k - 1 multiplications.

A weight-2 column is an edge between its two rows. A cycle of such edges
gives a square matrix with one diagonal and one cyclic sub-diagonal, which is
nonsingular exactly when 1 + prod(beta_i / gamma_i) != 0. Over GF(2) that sum
is always 0.

Run: python demos/02_cycle_matrices.py
"""
import numpy as np

from blocktri_ldpc import CostProfile, SingularError, build_field, cycle_precompute, cycle_solve
from blocktri_ldpc.cyclegraph import build_associated_graph, cycle_matrix, cycle_submatrix_order, smallest_cycle
from blocktri_ldpc.oracle import dense_solve
from blocktri_ldpc.codegen import sample_proper_cycle_code

gf = build_field(3)
rng = np.random.default_rng(1)
k = 6
while True:
    gamma, beta = rng.integers(1, 8, size=(2, k)).tolist()
    c = cycle_matrix(gf, gamma, beta)
    try:
        pre = cycle_precompute(c)
        break
    except SingularError:
        pass
print(c.to_dense())
b = rng.integers(0, 8, size=k).tolist()
prof = CostProfile(q=8)
w = cycle_solve(pre, b, prof)
print("solution", w, "oracle", dense_solve(gf, c.to_dense(), b).tolist())
print(f"k={k}: {prof.mul_count} multiplications, {prof.add_count} additions")

gf2 = build_field(1)
try:
    cycle_precompute(cycle_matrix(gf2, [1] * k, [1] * k))
except SingularError as exc:
    print("binary cycle rejected:", exc)

# Shortest cycles in the associated graph of a cycle code.
h = sample_proper_cycle_code(40, 20, 8, seed=3)
g = build_associated_graph(h)
cyc = smallest_cycle(g)
rows, cols = cycle_submatrix_order(g, cyc)
print(f"graph with {g.num_vertices} vertices and {g.num_edges} edges; shortest cycle rows {rows}, columns {cols}")
