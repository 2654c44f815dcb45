"""
Training graphs and their dependency structure
===============================================

"""

# a labeled pair shares an instance with every other pair touching the same
# vertex, so the maximum degree rho measures how dependent the examples are
import numpy as np
from pairbounds import (degree_sequence, dependency_partition, edge_coloring,
                        effective_training_size, from_edge_list, line_graph, prune_to_regular)
from pairbounds.labeler import regular_sample, star_sample

triangle = from_edge_list(3, [(0, 1), (1, 2), (0, 2)])
print("triangle degrees:", degree_sequence(triangle).tolist())
print("line graph neighbors:", line_graph(triangle).neighbors)

# a proper edge coloring splits the examples into matchings, i.e. sets of
# mutually independent pairs; Misra-Gries never needs more than rho + 1 colors
part = edge_coloring(triangle)
print("colors used:", part.num_colors, "classes:", part.classes())

star = star_sample(8, 7)
print("star classes:", [sorted(c) for c in dependency_partition(star)])

# m / rho acts like the number of independent examples
for name, g in [("star", star), ("6-cycle", regular_sample(6, 2)), ("circulant k=3", regular_sample(10, 3))]:
    eff = effective_training_size(g)
    print(f"{name:>14}: m={eff.m:3d} rho={eff.rho:2d} m/rho={eff.ratio}")

# pruning a graph down to a regular subgraph trades examples for independence
path = from_edge_list(4, [(0, 1), (1, 2), (2, 3)])
sub, report = prune_to_regular(path, 1)
print("pruned path:", sub.edges, "m/rho:", effective_training_size(path).ratio,
      "->", effective_training_size(sub).ratio)

rng = np.random.default_rng(0)
noisy = from_edge_list(12, sorted({tuple(sorted(rng.choice(12, 2, replace=False).tolist())) for _ in range(30)}))
sub, report = prune_to_regular(noisy, 2)
print("2-regular part keeps", sub.m, "of", noisy.m, "edges on", len(report.surviving_vertices), "vertices")
