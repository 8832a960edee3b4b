"""Affine and restricted inequalities on a random body, and their affine invariance.

Run: python3 demos/03_affine_inequalities.py
"""
import numpy as np

from affine_lw.covers import lw_cover, partition_cover
from affine_lw.inequalities import (eval_affine_bt, eval_dual_bt, eval_fradelizi_bound, eval_local_lw,
                                    eval_restricted_dual, gl_transform)
from affine_lw.linalg import random_basis, span_subspace
from affine_lw.polytope import random_polytope

rng = np.random.default_rng(3)
K = random_polytope(3, 3)          # centred, so the origin is interior
B = random_basis(rng, 3)
print(f"body: {len(K.vertices)} vertices, volume {K.volume():.4f}; basis condition {B.condition():.2f}\n")

for v in (1, 2, 3, 4):
    a = eval_affine_bt(K, B, lw_cover(3), v)
    d = eval_dual_bt(K, B, lw_cover(3), v)
    print(f"variant {v}: projections ratio {a.ratio:8.4f}   sections ratio {d.ratio:8.4f}")

S = partition_cover(3, [1, 2])
print("\nrestricted to S = {1, 2}:")
for v in (1, 2, 3, 4):
    print(f"  variant {v}: local {eval_local_lw(K, B, S, v).ratio:8.4f}"
          f"   dual {eval_restricted_dual(K, B, S, v).ratio:8.4f}")

print("\nFradelizi bound, H = span{(1,1,0)}:", f"{eval_fradelizi_bound(K, span_subspace([[1, 1, 0]], 3)).ratio:.4f}")

T = rng.standard_normal((3, 3))
print("\nratios before/after a random linear map (K -> TK, basis moved per variant):")
for v in (1, 2, 3, 4):
    K2, B2 = gl_transform(K, B, T, v)
    print(f"  variant {v}: {eval_affine_bt(K, B, lw_cover(3), v).ratio:.12f}  "
          f"{eval_affine_bt(K2, B2, lw_cover(3), v).ratio:.12f}")
