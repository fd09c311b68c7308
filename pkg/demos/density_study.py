"""How the stopband grid density changes the optimum.

The grid step is g/n radians.  Coarser grids can miss the true peak between
grid points, so the coefficient drifts; the differences shrink as g falls.

Run: python demos/density_study.py
"""

from fsfdesign import FilterSpec, grid_sweep

spec = FilterSpec(16, 4, 1)
prev = None
print(f"{'g':>8}  {'T1':>18}  {'PSL (dB)':>12}  {'change in T1':>12}")
for g, coeffs, level in grid_sweep(spec, [0.01, 0.001, 0.0001, 0.00001]):
    change = "" if prev is None else f"{abs(coeffs[0] - prev):.2e}"
    print(f"{g:8g}  {coeffs[0]:18.15f}  {level:12.6f}  {change:>12}")
    prev = coeffs[0]
