"""Dynamic coprime labelings of finite simple graphs.

Build graphs and initial labelings, evolve them under a map g with
f_{t+1} = g(f_t), verify that every edge stays coprime, and study the
periods that appear when labels are taken modulo n.
"""

from .errors import (
    DclError,
    FactorizationIncomplete,
    NotAUnitError,
    NotBipartiteError,
    OverflowPolicyError,
    ParameterError,
    ResourceError,
)
from .evolution import (
    DclRun,
    Frame,
    PeriodReport,
    PowerFormLabel,
    classify_boundedness,
    evolve,
    graph_period,
    verify_modular_period,
    verify_run,
    vertex_order_profile,
)
from .graphs import Bipartition, Graph, bipartition_of, build_family, from_edge_list
from .labelings import (
    Labeling,
    bipartite_prime_labeling,
    canonical_initial_labeling,
    solve_coprime_labeling,
    verify_coprime,
    verify_prime_labeling,
)
from .numtheory import (
    ModulusContext,
    carmichael_lambda,
    cyclic_subgroup,
    factorize,
    gcd,
    generates_full_group,
    korselt_check,
    multiplicative_order,
    nth_prime,
)
from .transforms import (
    TransformSpec,
    affine,
    affine_edge_hypothesis,
    additive_shift,
    apply,
    iterate_closed_form,
    modular_power,
    power,
    prime_index,
    sample_coprime_preservation,
)

__version__ = "0.1.0"
