"""hexsep: hexagonal-partition thresholds, a random-geometric-graph
percolation lab, and a threshold-based anomaly detection pipeline."""

__version__ = "0.1.0"

from .geom import HexGrid, HexIndex, Point2, are_hex_neighbors, cells_touch, hamming
from .rgg import (
    MODE_CONTINUUM,
    MODE_HEX,
    ClusterSet,
    Graph,
    build_graph,
    connected_components,
    has_majority_cluster,
    largest_component_fraction,
    largest_fraction,
    occupied_hex_fraction,
)
from .thresh import (
    P_C,
    ThresholdParams,
    cell_diameter,
    circumradius,
    connectivity_radius_scale,
    critical_radius_estimate,
    expected_classes,
    hex_count,
    majority_n,
    threshold_interval_length,
)
from .mc import (
    DEFAULT_SEED,
    NodeProcessSpec,
    ProbEstimate,
    ThresholdCurve,
    compare_curves,
    compare_models,
    estimate_probability,
    estimate_quantile_radius,
    estimate_threshold_width,
    sample_points,
    threshold_curve,
)
from .pipeline import (
    AnomalyReport,
    Dataset,
    DetectorModel,
    Hyperplane,
    IngestError,
    NotSeparableError,
    PipelineResult,
    activation,
    activation_reflected,
    classify,
    cluster,
    compute_shift,
    detect,
    fit_hyperplane,
    ingest,
    run_detection,
    signed_distance,
)
from .sv import (
    SupportVectorSet,
    collect_support_vectors,
    equivalency_class,
    extract_anomaly_side,
    extract_regular_side,
)
