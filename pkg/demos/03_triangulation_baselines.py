"""The two baseline encoders on one E8 matrix.

Both start from the same greedy approximate triangulation of H. The first
solves through the gap matrix Phi; the second factors the whole parity block
into sparse L and U.

Run: python demos/03_triangulation_baselines.py
"""
from blocktri_ldpc import CostProfile, LUEncoder, RUEncoder
from blocktri_ldpc.codegen import sample_ensemble
from blocktri_ldpc.oracle import syndrome

h = sample_ensemble("e8", 1000, seed=11)
print(f"H: {h.m} x {h.n} over GF({h.q}), {h.wt} nonzeros")
u = [(7 * i) % 8 for i in range(h.n - h.m)]

for name, enc in (("gap solver", RUEncoder(h)), ("sparse LU", LUEncoder(h))):
    prof = CostProfile(q=h.q)
    x = enc.codeword(u, prof)
    assert not syndrome(h, x).any()
    mu, alpha = enc.costs()
    print(f"{name:10s} gap={enc.delta}  measured mu={prof.mu} alpha={prof.alpha}  predicted ({mu}, {alpha})")
