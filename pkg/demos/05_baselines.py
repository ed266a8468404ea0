"""
Scoring generators against the sampler
======================================

Evaluates two cheap baselines against replacement-sampler output at the
full angle range: bound-uniform draws, and draws from the sampler's own
per-orientation angle distribution with neighbor correlations discarded.
The second baseline matches single-angle statistics yet still produces
intersections - the constraint lives in the correlations.

Run:  python demos/05_baselines.py
Writes report_uniform.json and report_marginal.json.
"""

import numpy as np

from kirigami import (
    LatticeSpec,
    evaluate,
    fit_marginal,
    generate_dataset,
    intersection_counts,
    marginal_set,
    uniform_set,
)
from kirigami.dataio import write_report_json

spec = LatticeSpec()
n = 2000
beta_max = 90.0

reference = generate_dataset(spec, beta_max, n, seed=11)
uniform = uniform_set(beta_max, n, 12, spec)
marginal = marginal_set(fit_marginal(reference), n, 13, spec)

for name, ss in (("sampler", reference), ("uniform", uniform),
                 ("marginal", marginal)):
    hits = intersection_counts(spec, ss)
    print(f"{name:8s}: mean intersections {hits.mean():6.3f}, "
          f"admissible {np.mean(hits == 0):6.1%}")

# full reports score each baseline against the sampler reference:
# tv_marginal compares pooled angle histograms, tv_pairs compares joint
# neighbor-pair histograms
for name, ss in (("uniform", uniform), ("marginal", marginal)):
    report = evaluate(spec, ss, reference=reference)
    print(f"{name:8s}: TV(angles)={report.tv_marginal:.3f}, "
          f"TV(pairs)={report.tv_pairs:.3f}")
    write_report_json(report, f"report_{name}.json")
    print(f"wrote report_{name}.json")
