"""treemax: fractional averaging operators on the infinite rooted k-ary tree,
with numerically certified weighted bounds.

The package models the tree combinatorially (exact sphere and ball counts at
any depth), evaluates fractional spherical and ball maximal operators on
finitely supported functions, searches for best constants in the weighted
bilinear sphere-pairing inequality, certifies power weights through a
per-level counting condition, and verifies the full constant chain and the
weighted level-set bound instance by instance.
"""

from .averages import (
    DescendantSumTable,
    MaximalValue,
    ball_maximal,
    equivalence_constant,
    maximal_field,
    spherical_average,
    spherical_maximal,
    spherical_sum,
)
from .bounds import (
    ChainConstants,
    ChainTrace,
    LevelSetInstance,
    LevelSetReport,
    MinSumReport,
    ScanReport,
    SeriesReport,
    TwoWeightReport,
    certified_bilinear_constant,
    chain_verify,
    interaction_min_sum,
    level_set_bound_rhs,
    level_set_bound_verify,
    level_set_bound_weight,
    operator_norm_scan,
    radius_series_window,
    split_bound,
    split_bound_minimizer,
    split_bound_minimum,
    superlevel_set,
    two_weight_constant,
    two_weight_level_set_report,
)
from .errors import (
    ConfigError,
    DomainError,
    GuardLimitError,
    OutOfTreeError,
    RegionError,
    TreemaxError,
)
from .exponents import (
    ExponentConfig,
    derived_exponents,
    per_level_window,
    radial_window,
    series_boundary,
    series_exponent,
)
from .functions import (
    TreeFunction,
    Weight,
    char_function,
    layer_cake_norm,
    lp_norm,
    map_lp_norm,
    random_function,
    random_set,
    validate_set,
    weight_of_set,
)
from .tree import (
    ROOT,
    TreeParams,
    ball_size,
    depth,
    distance,
    level_sphere_count,
    level_vertices,
    parse_vertex,
    sphere_bfs_oracle,
    sphere_members,
    sphere_size,
    format_vertex,
    transpose_count_bound,
    vertices_up_to,
)
from .weight_class import (
    ConstantSearchEntry,
    ConstantSearchReport,
    PerLevelReport,
    ProbeResult,
    RadialCertificate,
    ScalarConditionReport,
    WindowAgreementReport,
    best_constant_exhaustive,
    best_constant_heuristic,
    bilinear_form,
    bilinear_ratio,
    certify_radial_weight,
    divergence_probe,
    per_level_condition_check,
    radial_exponent_condition,
    search_constants,
    superlevel_candidates,
    two_weight_ratio,
    window_agreement,
)

__version__ = "0.1.0"
