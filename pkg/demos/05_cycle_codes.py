"""Non-binary cycle codes encode in linear time.

For a connected cycle code the first block is a cycle and every later block
is diagonal, so the work per code bit stays flat as n grows.

Run: python demos/05_cycle_codes.py
"""
from blocktri_ldpc import CostProfile, preprocess
from blocktri_ldpc.codegen import sample_proper_cycle_code

for n in (500, 1000, 2000, 4000):
    h = sample_proper_cycle_code(n, n // 2, 8, seed=n)
    form = preprocess(h)
    prof = CostProfile(q=8)
    form.encode([3] * (n - n // 2), prof)
    kinds = form.kinds
    print(f"n={n:5d}  blocks={len(kinds):3d}  first={kinds[0]}  rest diagonal={set(kinds[1:]) == {'diagonal'}}"
          f"  (mu+alpha)/n={(prof.mu + prof.alpha) / n:.3f}")
