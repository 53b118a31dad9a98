"""Local mean oscillation and the Lebesgue-point classification.

theta_p(f, x, r) averages |f(x - t) - f(x)|^p over |t| < r.  At a smooth point
it shrinks like r^p (or faster), at a cusp |t|^b like r^(b p), and at a jump
it does not shrink at all.
"""

import numpy as np

from bilinear_hilbert import catalog, make_function
from bilinear_hilbert.lebesgue import infinity_profile, lebesgue_profile

radii = 0.2 * 0.25 ** np.arange(12)
cases = [
    ("gaussian at 0.3", catalog.gaussian(), 0.3),
    ("gaussian at 0 (flat top)", catalog.gaussian(), 0.0),
    ("|t|^(1/2) at 0", catalog.power_cusp(0.5), 0.0),
    ("sign jump at 0", catalog.sign_jump(), 0.0),
    ("sign jump at 0.5", catalog.sign_jump(), 0.5),
]

for p in (1.0, 2.0):
    print(f"p = {p:g}")
    for label, spec, x in cases:
        prof = lebesgue_profile(make_function(spec), x, p, radii)
        print(f"  {label:26s} slope {prof.fitted_slope:7.3f}   final theta {prof.theta[-1]:9.2e}   {prof.classification}")
    print()

# There is no finite p for ess.sup; a large p together with the sampled local
# oscillation serves as the stand-in.
for label, spec, x in cases:
    ok, _, osc = infinity_profile(make_function(spec), x, radii)
    print(f"ess.sup-type point? {label:26s} {ok}   (last oscillation {osc[-1]:.2e})")
