"""Design a 16-tap lowpass filter and inspect it.

Run: python demos/quickstart.py
"""

import numpy as np

from fsfdesign import FilterSpec, optimize, psl, synthesize

spec = FilterSpec(n=16, bw=4, t=1)
res = optimize(spec)
print(spec.describe())
print(f"optimal T1 = {res.coefficients[0]:.8f}, PSL = {res.psl_db:.4f} dB "
      f"({res.iterations} exchange iterations)")

# the taps are real and symmetric; their sum is the DC gain
taps = synthesize(spec, res.coefficients).taps
print("taps:", np.array2string(taps, precision=6, max_line_width=90))
print(f"DC gain = {taps.sum():.12f}")

# nudging T1 either way raises the peak sidelobe
for dt in (-0.01, 0.01):
    t = res.coefficients[0] + dt
    print(f"T1 = {t:.8f} -> PSL {psl(spec, [t]).psl_db:.4f} dB")
