"""
Three labeling regimes: adversarial, benign and agnostic
=========================================================

"""

# the labeler only chooses which pairs to label; here is one of each kind
import numpy as np
from pairbounds import LabelerSpec, sample_pairs
from pairbounds.labeler import er_sample, expected_degree
from pairbounds.pair_graph import degree_sequence, effective_training_size

n = 200
specs = [
    LabelerSpec("star", n, m=199),
    LabelerSpec("regular", n, k=2),
    LabelerSpec("uniform", n, m=2000, seed=1),
]
for spec in specs:
    g = sample_pairs(spec)
    eff = effective_training_size(g)
    print(f"{spec.variant:>8}: m={g.m:5d} rho={eff.rho:4d} m/rho={float(eff.ratio):8.2f}")

# under the uniform labeler every vertex has expected degree 2m/n, and the
# maximum degree concentrates not far above it
rng = np.random.default_rng(3)
maxdeg = [degree_sequence(er_sample(n, 2000, rng)).max() for _ in range(200)]
print("expected degree:", expected_degree(n, 2000))
print("max degree over 200 draws: mean %.1f, range %d..%d" % (np.mean(maxdeg), min(maxdeg), max(maxdeg)))

# specs are plain JSON, so a regime can be stored next to its results
print(LabelerSpec("uniform", n, m=2000, seed=1).to_json())
