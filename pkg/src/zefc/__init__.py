"""Zero-error computation of a two-argument function over a relay.

Core objects: exact-rational problem instances, the support graph and
confusability graphs with their OR powers, minimum-entropy colorings,
graph entropy, rate-region bounds, and concrete prefix-free block schemes.
"""
from .coloring import (
    ColorCover,
    Coloring,
    chromatic_entropy,
    chromatic_entropy_bound,
    chromatic_entropy_product,
    enumerate_proper_colorings,
    independence_number,
    is_coloring,
    maximal_independent_sets,
    verify_color_cover,
)
from .entropy import (
    ConditionalDesign,
    binary_entropy,
    conditional_entropy_of_f,
    entropy,
    fractional_chromatic_lp,
    graph_entropy,
)
from .errors import (
    AmbiguityError,
    CapExceededError,
    InstanceFormatError,
    VerificationError,
    ZefcError,
)
from .graphs import (
    Graph,
    ProbabilisticGraph,
    ProductGraph,
    confusability_graphs,
    confusability_prob_graphs,
    edge_list_text,
    f_rook_graph,
    f_rook_prob_graph,
    or_product,
    product_distribution,
    rook_graph,
    to_dot,
)
from .model import (
    ProblemInstance,
    SupportSet,
    load_instance,
    marginals,
    store_instance,
    support,
)
from .protocol import (
    DecoderTables,
    RelayCheck,
    Scheme,
    build_decoders,
    build_scheme,
    huffman_code,
    load_scheme,
    measure_rates,
    relay_computability,
    store_scheme,
    verify_zero_error,
)
from .region import (
    RateRegionReport,
    RateTriple,
    chromatic_region_frontier,
    inner_bound_1,
    inner_bound_2,
    membership,
    outer_bound,
    rate_region_report,
)

__version__ = "0.1.0"
