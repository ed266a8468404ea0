"""Bounded-angle cut patterns on a periodic lattice: geometry, samplers,
design-space analysis, evaluation, and dataset files."""

from .lattice import (
    DEFAULT_CUT_LENGTH,
    EPS,
    CutGrid,
    LatticeSpec,
    Segment,
    base_angle,
    base_angle_grid,
    count_intersections,
    cut_segment,
    is_admissible,
    neighbor_offsets,
    segments_intersect,
    wrap_angle,
)
from .sampling import (
    AngleMarginal,
    SampleSet,
    admissible_beta_set,
    fit_marginal,
    generate_dataset,
    marginal_grid,
    marginal_set,
    sweep_replace,
    uniform_grid,
    uniform_set,
)
from .analysis import (
    ChordStats,
    PathResult,
    SweepPoint,
    TwoCutMap,
    admissible_path,
    build_two_cut_map,
    euclidean_distance,
    nonadmissible_fraction,
    pair_intersects,
    path_crossing_probability,
    straight_path_crosses,
    sweep_curves,
)
from .evaluation import (
    EvalReport,
    Histogram1D,
    PairHistogram,
    evaluate,
    intersection_counts,
    marginal_histogram,
    neighbor_pair_histogram,
    tv_distance,
    zone_violation_rate,
)
from .dataio import (
    DatasetFormatError,
    HeaderError,
    PayloadError,
    ValueRangeError,
    read_dataset,
    write_dataset,
)

__version__ = "0.1.0"
