"""The classical inequalities as special cases, with their equality bodies.

Run: python3 demos/02_classical_equalities.py
"""
from affine_lw.inequalities import eval_classics
from affine_lw.polytope import standard_body

for name, body in [("cube [0,1]^3", standard_body("cube", 3)),
                   ("cross-polytope B_1^3", standard_body("cross", 3)),
                   ("box 1 x 2 x 3", standard_body("box", 3, sides=[1, 2, 3])),
                   ("cube [-1,1]^3", standard_body("ccube", 3))]:
    print(name)
    seen = {}
    for rep in eval_classics(body):
        lo = seen.get(rep.statement, (float("inf"), 0))
        seen[rep.statement] = (min(lo[0], rep.ratio), lo[1] + 1)
    for statement, (ratio, count) in seen.items():
        print(f"  {statement:36s} cases {count:3d}  min ratio {ratio:.9f}")
