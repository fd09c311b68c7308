"""Symmetric versus independent transition coefficients in bandpass filters.

Letting the lower and upper band edges have their own coefficients never
hurts and sometimes helps a lot.

Run: python demos/bandpass_binding.py
"""

from fsfdesign import FilterSpec, optimize

cases = [(16, 3, 2, 1), (32, 3, 4, 3), (118, 11, 22, 1)]
for n, bw, m1, t in cases:
    sym = optimize(FilterSpec(n, bw, t, "bandpass", m1=m1))
    ind = optimize(FilterSpec(n, bw, t, "bandpass", m1=m1, binding="independent"))
    print(f"n={n} bw={bw} m1={m1} t={t}")
    print(f"  symmetric   {sym.psl_db:9.4f} dB  T = {', '.join(f'{v:.8f}' for v in sym.coefficients)}")
    print(f"  independent {ind.psl_db:9.4f} dB  T = {', '.join(f'{v:.8f}' for v in ind.coefficients)}")
    print(f"  gain {sym.psl_db - ind.psl_db:.2f} dB")
