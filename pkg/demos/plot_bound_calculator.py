"""
Evaluating the risk bounds term by term
========================================

"""

# every bound is empirical risk + complexity term + confidence term
import math
from pairbounds import (er_max_degree_bound, er_rad_kernel_bound, rad_generic_bound, rad_kernel_bound,
                        stab_generic_bound, stab_ramp_bound, stab_svm_bound)

reports = [
    rad_generic_bound(0.1, 0.2, rho=3, m=200, delta=0.05),
    rad_kernel_bound(0.0, B=1, gamma=1, rho=1, m=100, delta=0.5),
    stab_generic_bound(0.0, beta=0.005, rho=2, m=100, M=1, delta=math.exp(-1)),
    stab_ramp_bound(0.0, beta=0.005, gamma=0.5, rho=2, m=100, delta=math.exp(-1)),
    stab_svm_bound(0.0, B=1, lam=1, rho=2, m=100, delta=math.exp(-1)),
    er_rad_kernel_bound(0.0, B=1, gamma=1, n=100, m=500, delta=0.1),
]
for r in reports:
    terms = "  ".join(f"{k}={v:.4f}" for k, v in r.terms.items())
    print(f"{r.name:>34}: total={r.total:.4f}  {terms}")

print("max-degree cap for G(100, 500):", round(er_max_degree_bound(100, 500, 0.1), 4))

# the same m examples are worth much less when one instance is in all of them
for rho in (1, 2, 10, 100):
    print(f"rho={rho:3d}: kernel bound {rad_kernel_bound(0.0, 1, 1, rho, 100, 0.1).total:.3f}")

# reports serialize with a fixed field order
print(stab_svm_bound(0.0, 1, 1, 2, 100, 0.1).to_json(indent=1))
