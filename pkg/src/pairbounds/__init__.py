"""Graph-based generalization bounds for learned binary relations."""

__version__ = "0.1.0"

from .bounds import (
    BoundReport,
    chromatic_bound,
    empirical_rademacher_mc,
    er_max_degree_bound,
    er_rad_kernel_bound,
    kernel_rademacher_trace_bound,
    rad_generic_bound,
    rad_kernel_bound,
    stab_generic_bound,
    stab_ramp_bound,
    stab_svm_bound,
)
from .labeler import LabelerSpec, er_sample, regular_sample, sample_pairs, star_sample
from .learner import (
    HINGE,
    ZERO_ONE,
    Hypothesis,
    classification_stability_probe,
    empirical_risk,
    loss,
    ramp,
    train_svm,
    true_risk_mc,
)
from .pair_graph import (
    TrainingGraph,
    degree_sequence,
    dependency_partition,
    edge_coloring,
    effective_training_size,
    from_edge_list,
    line_graph,
    max_instance_frequency,
    prune_to_regular,
)
from .relations import InstanceDistribution, PairDataset, RelationSpec, build_dataset, sample_instances
