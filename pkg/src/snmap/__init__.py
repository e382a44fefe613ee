"""Pixelwise statistical comparison of two longitudinal image sequences.

The package turns two CSV-encoded image stacks into difference,
smoothed-difference, t and p maps with multiple-testing control,
after segmenting and rigidly aligning the inputs.  Use the CLI
(`snmap run`, `snmap serve`) or the functions re-exported here.
"""

__version__ = "0.1.0"

from .core import (
    Frame,
    PixelCoord,
    PolygonROI,
    RectROI,
    Sequence,
    validate_pair,
)
from .exceptions import (
    BindError,
    CoincidentPoints,
    DegenerateFit,
    EmptyGrid,
    InputError,
    NoContent,
    NoFramesFound,
    NonPositiveDf,
    NoValley,
    NumericError,
    OutOfBounds,
    ParseError,
    ShapeMismatch,
    SnmapError,
    TooShort,
    TruncatedFrame,
)
from .ingest import ScanSpec, export_sequence, scan_sequence
from .registration import (
    RigidTransform,
    TemporalAlignment,
    crop_roi,
    midline,
    polygon_mask,
    temporal_align,
    transform_from_midline,
    transform_from_points,
    warp,
)
from .segmentation import (
    GmmModel,
    Threshold,
    apply_threshold,
    find_threshold,
    fit_gmm,
    histogram,
    segment_frame,
)
from .smoothing import (
    Bandwidths,
    DiffField,
    pad_field,
    select_bandwidth,
    smooth_field,
    strip_margin,
)
from .snm import (
    DfEstimate,
    SnmConfig,
    SnmResult,
    StatMaps,
    bh_fdr,
    curated_difference,
    estimate_df,
    p_map,
    run_snm,
    t_map,
)
from .render import (
    ColorMapSpec,
    MovieSpec,
    decode_movie,
    encode_movie,
    height_field_json,
    overlay_check,
    render_heatmap,
)
from .pipeline import PipelineResult, RunConfig, run_pipeline

__all__ = [
    "__version__",
    "Frame",
    "PixelCoord",
    "PolygonROI",
    "RectROI",
    "Sequence",
    "validate_pair",
    "SnmapError",
    "InputError",
    "NumericError",
    "BindError",
    "ShapeMismatch",
    "ParseError",
    "TruncatedFrame",
    "NoFramesFound",
    "CoincidentPoints",
    "OutOfBounds",
    "EmptyGrid",
    "DegenerateFit",
    "NoValley",
    "TooShort",
    "NoContent",
    "NonPositiveDf",
    "ScanSpec",
    "scan_sequence",
    "export_sequence",
    "GmmModel",
    "Threshold",
    "fit_gmm",
    "find_threshold",
    "apply_threshold",
    "segment_frame",
    "histogram",
    "RigidTransform",
    "TemporalAlignment",
    "temporal_align",
    "midline",
    "transform_from_midline",
    "transform_from_points",
    "warp",
    "crop_roi",
    "polygon_mask",
    "Bandwidths",
    "DiffField",
    "smooth_field",
    "select_bandwidth",
    "pad_field",
    "strip_margin",
    "DfEstimate",
    "SnmConfig",
    "SnmResult",
    "StatMaps",
    "curated_difference",
    "estimate_df",
    "t_map",
    "p_map",
    "bh_fdr",
    "run_snm",
    "ColorMapSpec",
    "MovieSpec",
    "render_heatmap",
    "overlay_check",
    "encode_movie",
    "decode_movie",
    "height_field_json",
    "RunConfig",
    "PipelineResult",
    "run_pipeline",
]
