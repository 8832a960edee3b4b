"""Brascamp-Lieb constants of a basis and a cover, and the duality between them.

Run: python3 demos/01_constants_and_duality.py
"""
import math

import numpy as np

from affine_lw.constants import bl1, bl2, bl_duality_check
from affine_lw.covers import all_equal_weight_covers, complement_cover, lw_cover, partition_cover
from affine_lw.linalg import Basis, dual_basis, random_basis

# A skew basis of the plane: w1 = e1, w2 at angle theta.
theta = math.pi / 6
B = Basis.from_vectors([[1, 0], [math.cos(theta), math.sin(theta)]])
print("skew basis, partition cover")
print(f"  BL1 = {bl1(B, partition_cover(2)):.6f}   expected 1/sin(theta) = {1 / math.sin(theta):.6f}")

# The complement of the LW cover is the partition into singletons.
print("\ncomplement of the LW cover on [4]:", complement_cover(lw_cover(4)).subsets)

# BL1 of the dual basis equals BL2 of the basis, for every cover.
rng = np.random.default_rng(0)
B = random_basis(rng, 4)
V = dual_basis(B)
print("\n<v_i, w_j> = delta_ij:", np.allclose(V.vectors @ B.vectors.T, np.eye(4)))
worst = 0.0
for cover in all_equal_weight_covers(4, 4):
    worst = max(worst, bl_duality_check(B, cover).max_residual)
print(f"max duality residual over {len(all_equal_weight_covers(4, 4))} covers: {worst:.2e}")
print(f"BL1(B, LW) = {bl1(B, lw_cover(4)):.6f}, BL2(B, LW) = {bl2(B, lw_cover(4)):.6f}")
