"""Draws from the two compound-Poisson limit laws and their variances."""

import numpy as np

from cpboot.limitlaw import LimitSpec, limit_spec_from_model, sample_limit, simulate_paths, variance_report
from cpboot.model import variance_table_model
from cpboot.randdist import Normal, StreamKey, derive_stream

spec = limit_spec_from_model(variance_table_model())
print(spec)

# one path, to see the structure: a negative-drift walk on each side of 0
paths = simulate_paths(spec, derive_stream(StreamKey(3)))
print("left jumps %d, right jumps %d, argmax %.3f at level %.3f"
      % (paths.left_times.size, paths.right_times.size, paths.draw.phi3, paths.max_value))

draws = sample_limit(spec, 5000, StreamKey(0))
print("Var(phi1) %.3f  Var(phi2) %.3f  (both should be near sigma^2 / 0.5 = 2)"
      % (draws[:, 0].var(ddof=1), draws[:, 1].var(ddof=1)))
print("phi3 quartiles:", np.percentile(draws[:, 2], [25, 50, 75]).round(3))

var_e, var_t = variance_report(spec, 5000, StreamKey(0))
print("Var of the estimator limit %.2f, of the ECDF-bootstrap limit %.2f, ratio %.2f" % (var_e, var_t, var_t / var_e))

# with a huge jump almost no increment is ever positive: the argmax is the first left jump time
big = LimitSpec(f_zeta0=spec.f_zeta0, sigma2=1.0, p_left=0.5, alpha0=-10.0, beta0=10.0, error=Normal())
phi3 = sample_limit(big, 5000, StreamKey(1))[:, 2]
print("huge gap: mean phi3 %.3f vs -1/f = %.3f" % (phi3.mean(), -1 / spec.f_zeta0))
