"""Rainbow-free lattice workbench.

A library, HTTP service, and CLI for searching, classifying, and
certifying exact colorings of Boolean lattices that avoid rainbow or
monochromatic copies of small patterns, together with the exact
extremal machinery (Lubell bounds, level-window numbers, chain-packing
formulas) the threshold computations rest on.
"""

from .lattice import (
    Bounds,
    CapacityError,
    FamilyMask,
    LatticeError,
    OrderRelation,
    OrderViolation,
    PreconditionError,
    canonical_order,
    compare,
    comparable,
    down_family,
    format_subset,
    full_set,
    interval,
    level,
    levels,
    parse_subset,
    tl1_witness,
    up_family,
)
from .patterns import (
    Coloring,
    CopyMode,
    Embedding,
    PatternError,
    PatternPoset,
    antichain,
    boolean,
    chain,
    disjoint_chains,
    find_copy,
    find_induced_copy,
    find_mono_copy,
    find_rainbow_copy,
    find_weak_copy,
    fork,
    from_covers,
    make_pattern,
    max_rainbow_chain,
)
from .search import (
    AvoidanceSpec,
    BudgetExceeded,
    ExistsResult,
    NumberResult,
    Palette,
    UNBOUNDED,
    at_most_k,
    compute_gr,
    compute_ramsey,
    compute_rr,
    decode_model,
    exact_k,
    exists_coloring,
    export_dimacs,
    iter_avoiders,
    parse_model,
    solve_cnf,
)
from .structures import (
    C3Shape,
    Type1,
    Type2,
    Type3_1,
    Type3_2,
    Type4_1,
    Type4_2,
    Type5,
    V2Case1,
    V2Case2,
    blob_partition,
    check_c3_shape,
    classify_b2,
    classify_v2,
    generate_structure,
    lower_bound_gr_c3,
    lower_bound_gr_v2,
    matches_structure,
    type5_match,
)
from .extremal import (
    ClaimId,
    ExactRational,
    MissingSubvalue,
    color_cap_b2,
    color_cap_c3,
    e_poset,
    g_poset,
    gst,
    gst_verify,
    is_uilb,
    lu_max,
    lubell,
    rational_str,
    theorem_value,
)
from .documents import (
    SCHEMA_VERSION,
    coloring_from_json,
    coloring_to_json,
    content_hash,
    verify_claim,
    verify_document,
)

__version__ = "0.1.0"
