"""Samples behind the histogram panels: limit law, sampling distribution, four bootstrap schemes."""

import numpy as np
from scipy import stats

from cpboot.harness import figure1_bundle
from cpboot.model import study_models
from cpboot.randdist import StreamKey

model = study_models()["beta_gamma"]
bundle = {h.tag: h.samples for h in figure1_bundle(model, 500, 1000, 2000, StreamKey(0))}

actual = bundle["actual"]
for tag, samples in bundle.items():
    ks = stats.ks_2samp(samples, actual).statistic
    print("%-11s n=%4d  median %+7.2f  IQR %6.2f  KS to actual %.3f"
          % (tag, samples.size, np.median(samples), np.subtract(*np.percentile(samples, [75, 25])), ks))

# text histograms on a common grid
edges = np.linspace(-42.5, 42.5, 18)  # zero sits mid-bin
for tag in ("actual", "smoothed", "ecdf"):
    counts, _ = np.histogram(bundle[tag], edges)
    bars = " ".join("%3d" % round(100 * c / bundle[tag].size) for c in counts)
    print("%-9s %s" % (tag, bars))
