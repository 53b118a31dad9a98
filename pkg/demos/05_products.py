"""Lebesgue points of products and the exponent bookkeeping behind them.

With 1/p1 + 1/p2 = 1/p3, a common p1-Lebesgue point of f and p2-Lebesgue
point of g is a p3-Lebesgue point of f g.  Every piece of the estimate is
computed by quadrature and compared with its bound.
"""

import numpy as np

from bilinear_hilbert import catalog, make_function
from bilinear_hilbert.lebesgue import check_product, exponent_chain, product_profile

f = make_function(catalog.gaussian())
g = make_function(catalog.smooth_bump(support=2.0))
x = 0.3

for ps in ((2, 2), (4, 4), (6, 3)):
    print(f"p1, p2 = {ps}")
    for r in (0.1, 0.01, 0.001):
        res = check_product(f, g, x, r, *ps)
        margins = ", ".join(f"{k} {v:.2e}" for k, v in res.margins.items())
        print(f"  r = {r:6}: theta(fg) = {res.theta_product:.3e}   margins: {margins}")
    print()

# Several factors are handled pairwise; the exponents are tracked as fractions.
for ps in ((6, 6, 6), (3, 3, 3), (4, 8, 8, 4)):
    chain = " -> ".join(str(q) for q in exponent_chain(ps))
    print(f"exponents {ps}: {chain}")

fs = [make_function(catalog.gaussian(center=c)) for c in (0.0, 0.2, -0.3)]
prof = product_profile(fs, (3, 3, 3), x, 0.2 * 0.5 ** np.arange(10))
print(f"\nthree gaussians, ps = (3,3,3): slope {prof.fitted_slope:.2f}, {prof.classification}")
