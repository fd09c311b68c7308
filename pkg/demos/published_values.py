"""Re-measure published transition coefficients and compare with the optimum.

Run: python demos/published_values.py
"""

from fsfdesign import comparison_report, run_preset

# every published row for 16-tap filters with BW 4, plus the optimal row
print(comparison_report(run_preset("comparative", n=16, bw=4)))

# values quoted in running text: 32 taps, BW 6
print(comparison_report(run_preset("text", n=32, bw=6)))
