"""Approximate identities and their radial majorants.

The odd difference kernel phi(t) = t/(t^2+1) - 1_{|t|>=1}/t integrates to 0,
so its dilates kill the slice in the limit; the Poisson kernel integrates to
1 and reproduces f(x) g(x).  Both need an integrable decreasing majorant.
"""

import math

from bilinear_hilbert import catalog, make_function
from bilinear_hilbert.kernels import lemma6_kernel, majorant_integral, majorant_psi, poisson_kernel
from bilinear_hilbert.operators import mollifier_sweep

k6, kp = lemma6_kernel(), poisson_kernel()
for x in (0.0, 0.5, 1.0, 2.0, 10.0):
    print(f"psi({x:4}) = {majorant_psi(k6, x):.6f}")
print(f"int psi = {majorant_integral(k6):.15f}  vs 1 + ln 2 = {1 + math.log(2):.15f}\n")

f = g = make_function(catalog.gaussian())
x, alpha = 0.3, 2.0
for k in (kp, k6):
    rep = mollifier_sweep(f, g, x, alpha, k)
    expected = f(x) * g(x) * k.integral
    print(f"{k.kind:8s} kernel: limit {rep.extrapolated: .10f}, expected {expected:.10f}, rate {rep.fitted_rate:.2f}")
