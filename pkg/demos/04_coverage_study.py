"""A small coverage study.  The full-size version (reps=500, n=200) takes a few minutes per model."""

from cpboot.harness import ExperimentConfig, coverage_experiment
from cpboot.model import study_models
from cpboot.resampling import ECDF, RESIDUAL, SMOOTHED, m_out_of_n

cfg = ExperimentConfig(
    model=study_models()["normal_normal"],
    n_values=(100,),
    schemes=(ECDF, SMOOTHED, RESIDUAL, m_out_of_n(0.8)),
    reps=100,
    boot_B="4n",
    master_seed=11,
)
report = coverage_experiment(cfg, workers=2)
print(report.to_csv())
for row in report.rows:
    print("%-9s coverage %.2f +- %.2f" % (row.scheme, row.coverage, 2 * row.mc_se))
