"""Density clustering of geo-tagged posts with keyword-aware core tests."""

from ._stclust import (  # noqa: F401
    Algorithm,
    AssembledData,
    AssembleOptions,
    BackendKind,
    BenchRegime,
    BenchReport,
    BenchRow,
    BenchSize,
    Blob,
    ClusteringResult,
    ClusterParams,
    Confusion,
    EmptyRelevantSet,
    Error,
    EvalOptions,
    EvalReport,
    FuzzyParams,
    FuzzyQuad,
    GenSpec,
    InstanceTooLarge,
    KTooLarge,
    LabeledDataset,
    MalformedText,
    NOISE_LABEL,
    OracleResult,
    OutOfRangeCoordinate,
    ParseError,
    PlanarPoint,
    PoiSpec,
    Projection,
    QueryRegion,
    RangeQueryBackend,
    RecordFormat,
    Relevance,
    SweepResult,
    SweepRow,
    SweepSpec,
    TweetRecord,
    algorithm_name,
    assemble_dataset,
    build_query_region,
    classify,
    classify_all,
    cluster_area,
    confusion,
    dbscan,
    dbstexc,
    default_bench_sizes,
    f1_of,
    f_dbstexc,
    filter_consecutive_posts,
    fit_loglog_slope,
    format_iso8601_utc,
    fuzzy_score,
    generate,
    is_core,
    is_valid_utf8,
    j_irre,
    j_re,
    knn_distance_profile,
    matches_any,
    metric_score,
    oracle_cluster,
    parse_iso8601_utc,
    parse_records_file,
    parse_records_text,
    precision_of,
    project,
    recall_of,
    run_bench,
    score,
    sweep,
    unproject,
    validate_cluster_params,
    validate_fuzzy_params,
    validate_record,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
