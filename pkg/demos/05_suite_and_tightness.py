"""Batch verification over random instances and a sharpness probe.

Run: python3 demos/05_suite_and_tightness.py
"""
from affine_lw.covers import partition_cover
from affine_lw.harness import SuiteConfig, equality_regression, run_suite, tightness_search

cfg = SuiteConfig(dims=[2, 3], bodies_per_dim=5, mc_samples=50_000)
result = run_suite(cfg)
s = result.summary
print(f"{s['evaluations']} evaluations, {s['failures']} failures, digest {s['digest']}")
for key, e in sorted(s["min_ratio"].items()):
    print(f"  {key:30s} {e['count']:5d}  min ratio {e['min_ratio']:.6f}")

print("\nequality regression:")
for name, rep in equality_regression((2,)):
    print(f"  {name:6s} {rep.statement:34s} {rep.ratio:.12f}")

print("\ntightness search (ratio should approach 1 from above):")
for target in ("loomis_whitney", "meyer"):
    res = tightness_search(target, n=2, budget=400, seed=0)
    print(f"  {target:15s} best ratio {res.best_ratio:.6f} after {len(res.trace)} evaluations")
res = tightness_search("local_lw", 1, n=3, budget=200, restarts=5, cover=partition_cover(3, [1, 2]))
print(f"  local_lw n=3 S={{1,2}}: best ratio {res.best_ratio:.6f}")
