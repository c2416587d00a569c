"""Field arithmetic, sparse matrices and counted products.

Run: python demos/01_fields_and_sparse_matrices.py
"""
import numpy as np

from blocktri_ldpc import CostProfile, SparseMatrix, build_field, spmv_counted, weight_stats
from blocktri_ldpc.spmat import format_alist, parse_alist

gf = build_field(3)
print(f"GF({gf.q}) with reduction polynomial {gf.primitive_poly:#b}")
print("2 * 2 =", gf.mul(2, 2), "  5 * 5 =", gf.mul(5, 5), "  inv(3) =", gf.inv(3))

# Every product below is tallied: wt(M) multiplications, wt(M) - (rows touched) additions.
m = SparseMatrix.from_dense(np.array([[1, 0, 2], [0, 3, 3]]), gf)
prof = CostProfile(q=gf.q)
print("M v =", spmv_counted(m, [1, 1, 1], prof))
print("counted:", prof.mul_count, "multiplications,", prof.add_count, "additions")
print("weight stats:", weight_stats(m))

# Matrices travel as alist text; the header carries the field order.
text = format_alist(m)
print(text)
assert parse_alist(text) == m
