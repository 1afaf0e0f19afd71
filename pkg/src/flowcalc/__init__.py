"""flowcalc: combinatorial flows on finite posets.

Posets and their bottom-to-top chain categories, truncated simplicial
sets with integer homology, flows with simplicial path spaces presented
by generators and relations, branching/merging homology, and an edge
subdivision invariance checker, with a line-oriented CLI on top.
"""

from .errors import (
    BudgetExceeded,
    CapMismatch,
    DegreeOutOfRange,
    EmptyComplex,
    FlowcalcError,
    MalformedFlow,
    MalformedSubdivision,
    NotABall,
    NotAnInclusion,
    NotBounded,
    NotComparable,
    NotJoinable,
    NotLoopless,
    ParseError,
    PartialOrderViolation,
    UnknownState,
)
from .branching import (
    BranchReport,
    InvarianceReport,
    branching_profile,
    branching_space,
    check_invariance,
    resultat1_check,
    t_subdivide,
)
from .flows import (
    BallDiagram,
    BallReport,
    Flow,
    FlowMorphism,
    FlowReport,
    ball_diagram,
    enumerate_flow_morphisms,
    flow_isomorphism,
    flow_isomorphisms,
    glob,
    is_full_directed_ball,
    poset_flow,
    product_flow,
    pullback,
    rename_flow_states,
    require_ball,
    restriction,
    state_flow,
    terminal_flow,
    validate_flow,
)
from .homology import (
    KERNEL_BACKEND,
    ChainComplex,
    HomologyGroup,
    SNFResult,
    homology,
    homology_list,
    is_homology_contractible,
    smith_normal_form,
)
from .poset import (
    ChainCategory,
    FinPoset,
    chain_category,
    order_complex,
    reedy_report,
    validate_poset,
)
from .presentation import (
    DEFAULT_BUDGET,
    FlowPresentation,
    LemmaProbeReport,
    accumulated_colimit,
    assemble_colimit,
    glob_tensor_witness,
    interval_join,
    join,
    latching_object,
    lemma_probe,
    mapping_cylinder,
    pushout,
    saturate,
    sequential_colimit,
    tensor,
    tensor_triple_witness,
    tensor_with_embeddings,
)
from .simplicial import (
    SimplicialMap,
    SimplicialSet,
    components,
    disjoint_union,
    enumerate_simplicial_isomorphisms,
    normalized_chains,
    product,
    quotient,
    simplicial_isomorphism,
)

from .textio import canonical_json, parse_flow, parse_poset, serialize_poset, sniff_parse

__version__ = "0.1.0"
