"""Log-concave functional forms: reductions, the min-integral Monte Carlo check,
the sharp unconditional density and Berwald monotonicity.

Run: python3 demos/04_functional_forms.py
"""
import math

import numpy as np

from affine_lw.covers import lw_cover
from affine_lw.functional import (berwald_monotone_check, bobkov_nazarov_check, cone, eval_functional_bt,
                                  eval_gn, eval_min_corollary, eval_reverse_family, exact_min_integral,
                                  exp_norm, indicator, min_corollary_functions, random_concave)
from affine_lw.inequalities import eval_affine_bt, eval_dual_bt
from affine_lw.linalg import random_basis
from affine_lw.polytope import random_polytope

rng = np.random.default_rng(4)
K = random_polytope(11, 3)
B = random_basis(rng, 3)
c = lw_cover(3)

print("exp_norm(K) reproduces the geometric reports:")
for v in (1, 2, 3, 4):
    f = eval_functional_bt(exp_norm(K), B, c, v).ratio
    g = eval_affine_bt(K, B, c, v).ratio
    r = eval_reverse_family(exp_norm(K), B, c, "reverse_powers", v).ratio
    d = eval_dual_bt(K, B, c, v).ratio
    print(f"  variant {v}: {f:.10f} vs {g:.10f}    {r:.10f} vs {d:.10f}")

print("\nother families (ratios >= 1):")
for fam in (indicator, cone):
    print(f"  {fam.__name__:9s} L^p form {eval_gn(fam(K), B, c, 1).ratio:.4f}"
          f"   reverse sections {eval_reverse_family(fam(K), B, c, 'reverse_sections', 1).ratio:.4f}")

print("\nmin of normalized pullbacks, Monte Carlo against the closed form:")
for fam in ("indicator", "exp_norm", "cone"):
    fns = min_corollary_functions(K, B, c, 1, fam)
    rep = eval_min_corollary(fns, B, c, 1, seed=0, samples=1_000_000)
    print(f"  {fam:9s} ratio {rep.ratio:.4f} +- {rep.sigma:.4f}   ({rep.notes[0]}, exact {exact_min_integral(fns):.6f})")

print("\nsharp unconditional density:")
for n in range(2, 6):
    print(f"  n = {n}: ratio {bobkov_nazarov_check(n).ratio:.12f}   (n!/n^n = {math.factorial(n) / n ** n:.6f})")

h = random_concave(rng)
rep = berwald_monotone_check(h)
print("\nBerwald Phi_gamma for a random concave h:")
print("  " + "  ".join(f"{g:+.2f}:{v:.4f}" for g, v in zip(rep.gammas, rep.values)))
