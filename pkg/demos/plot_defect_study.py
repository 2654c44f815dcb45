"""
Risk versus bounds under three labelers
========================================

"""

# a few trials per regime; the full study lives behind the defect-study command
import numpy as np
from pairbounds.experiments import defect_study

common = {"n": 200, "trials": 5, "mc_samples": 5000, "seed": 0}
runs = {
    "star": defect_study({**common, "regime": "star", "m": 199}),
    "regular": defect_study({**common, "regime": "regular", "k": 2}),
    "er": defect_study({**common, "regime": "er", "m": 2000}),
}
cols = ("effective_size", "remp", "risk_mc", "bound_rademacher", "bound_stability")
print("regime   " + "  ".join(f"{c:>16}" for c in cols))
for name, rows in runs.items():
    means = [np.mean([r[c] for r in rows]) for c in cols]
    print(f"{name:<8} " + "  ".join(f"{v:16.4f}" for v in means))

# the uniform labeler also gets a bound stated in n alone
print("uniform-labeler bound:", np.mean([r["bound_uniform_labeler"] for r in runs["er"]]))
