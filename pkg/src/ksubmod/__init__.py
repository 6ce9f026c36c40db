"""Greedy maximization of monotone k-submodular functions under matroid constraints."""

from .core import (
    BudgetExceeded,
    DomainMismatch,
    GroundSet,
    LabeledSet,
    PreconditionError,
    format_value,
    join,
    marginal_gain,
    meet,
    partial_leq,
    support,
    to_value,
)
from .exact import ExactResult, GuaranteeViolation, brute_force_opt, lemma1_check, ratio_harness
from .functions import (
    Check,
    KFunction,
    ModularFunction,
    TableFunction,
    WeightedCoverageFunction,
    characterization_check,
    is_k_submodular,
    is_monotone,
    is_orthant_submodular,
    is_pairwise_monotone,
    normalize,
)
from .greedy import GreedyTrace, greedy_maximize, guarantee_holds
from .instance import Instance, InstanceError, parse_instance, random_instance
from .matroids import (
    ExplicitMatroid,
    GraphicMatroid,
    LinearMatroidGF2,
    Matroid,
    PartitionMatroid,
    UniformMatroid,
    enumerate_independent_sets,
    exchange_witness,
    extend_to_base,
    rank,
    validate_axioms,
)

__version__ = "0.1.0"
