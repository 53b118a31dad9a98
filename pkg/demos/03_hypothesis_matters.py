"""The Poisson average of the slice converges to f(x) g(x) only at good points.

Away from the jump of sign(t) the residual decays like eps.  At the jump the
Poisson average sees the two one-sided values -1 and +1, so it converges to
their mean 0 while f(0) = 1: the residual stays at -pi.
"""

import numpy as np

from bilinear_hilbert import catalog, make_function
from bilinear_hilbert.fitting import fit_rate
from bilinear_hilbert.operators import poisson_residual

jump = make_function(catalog.sign_jump())
gauss = make_function(catalog.gaussian())
one = make_function(catalog.constant(1.0))
eps = np.geomspace(1e-1, 1e-5, 9)

smooth = np.array([poisson_residual(gauss, one, 0.0, 1.0, e) for e in eps])
at_jump = np.array([poisson_residual(jump, one, 0.0, 1.0, e, R=1000.0) for e in eps])
near_jump = np.array([poisson_residual(jump, one, 0.05, 1.0, e, R=1000.0) for e in eps])

print(f"{'eps':>9}  {'gaussian, x=0':>14}  {'jump, x=0':>10}  {'jump, x=0.05':>13}")
for row in zip(eps, smooth, at_jump, near_jump):
    print("{:9.1e}  {:14.3e}  {:10.6f}  {:13.3e}".format(*row))

print(f"\nfitted slope, gaussian: {fit_rate(eps, np.abs(smooth)).slope:.3f}")
print(f"fitted slope, jump at 0.05: {fit_rate(eps[3:], np.abs(near_jump[3:])).slope:.3f}")
print("at the jump itself the residual sits at -pi for every eps")
