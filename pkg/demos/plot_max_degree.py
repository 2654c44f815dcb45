"""
Concentration of the maximum degree in G(n, m)
===============================================

"""

# compare the observed maximum degree with the high-probability cap
from pairbounds.experiments import verify_maxdeg

for n, m in [(100, 500), (200, 2000), (500, 500)]:
    res = verify_maxdeg(n, m, delta=0.1, trials=300, seed=0)
    print(f"n={n:4d} m={m:5d}: mean degree {res['mean_vertex_degree']:.2f} (2m/n={res['expected_degree']:.2f}), "
          f"max degree {res['max_degree_mean']:.1f} avg / {res['max_degree_max']} worst, "
          f"cap {res['bound']:.2f}, exceedances {res['exceedances']}")
