"""Universal operator algebras of finite directed graphs."""

from .errors import CapacityError, DescriptorError, GraphMismatchError, ParseError, PreconditionError, QuivoaError
from .free_algebra import AlgebraElement, Gauss, add, adjoint, ell1, mul, scale_edges
from .graph_core import (
    DirectedMultigraph,
    DoubledGraph,
    Edge,
    UndirectedMultigraph,
    directed_multiplicity,
    double,
    internal_edges,
    loop_partition,
    n_of,
    random_multigraph,
    relabel,
    shadow,
)
from .io_formats import dumps_report, format_expr, format_graph, parse_expr, parse_graph, read_graph
from .iso import IsoWitness, digraph_isomorphic, gcm_isomorphic, oa_isomorphic, udgraph_isomorphic
from .mispace import (
    BlindedDescriptor,
    Character,
    InvariantReport,
    MaxIdealDescriptor,
    blind,
    build_mispace,
    char_eval,
    ground_truth,
    invariants,
    mispace_of_gcm,
    recover_shadow,
)
from .norm_bounds import BoundConfig, NormBounds, gcm_norm_bounds, oa_norm_bounds
from .reps import (
    GraphRep,
    NestRep,
    lemma_suite,
    multiplicity_rank,
    nest_family,
    nest_rep,
    operator_norm,
    psd_check,
    random_graph_rep,
    random_star_rep,
    rep_eval,
)
from .word_semigroup import (
    NormalFormExplorer,
    WordSemigroup,
    enumerate_reduced,
    is_reduced,
    multiply,
    reduce,
    semigroup_identity,
    semigroup_of,
)

__version__ = "0.1.0"
