"""Fit a one-jump stump to simulated data and look at the profile criterion."""

import numpy as np

from cpboot.estimator import candidates, fit, fit_bruteforce
from cpboot.model import generate, study_models
from cpboot.randdist import StreamKey, derive_stream

model = study_models()["normal_normal"]
print("true (alpha, beta, zeta):", (model.alpha0, model.beta0, model.zeta0))
print("search interval [a, b] = [%.3f, %.3f]" % (model.a, model.b))

data = generate(model, 200, derive_stream(StreamKey(1).child("demo")))
res = fit(data, model.a, model.b)
print("fit:", res.theta_hat, "objective %.5f" % res.objective)

# the brute-force oracle scans every candidate with a fresh pass and must agree exactly
assert fit_bruteforce(data, model.a, model.b).theta_hat == res.theta_hat

# profile of the criterion over the candidate grid, near the estimate
zetas = candidates(data.z, model.a, model.b)
window = zetas[np.abs(zetas - res.theta_hat.zeta) < 0.15]
for zeta in window:
    left = data.z <= zeta
    sse = ((data.y[left] - data.y[left].mean()) ** 2).sum() + ((data.y[~left] - data.y[~left].mean()) ** 2).sum()
    mark = "  <- estimate" if zeta == res.theta_hat.zeta else ""
    print("zeta=%+.4f  M_n=%.5f%s" % (zeta, -sse / len(data), mark))

# the root n (zeta_hat - zeta0) lives on the n scale
print("n (zeta_hat - zeta0) = %.3f" % (len(data) * (res.theta_hat.zeta - model.zeta0)))
