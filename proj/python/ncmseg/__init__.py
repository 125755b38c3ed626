"""Neutrosophic c-means clustering and IVOCT-style lumen segmentation."""

from ._ncmseg import (
    ConfigError,
    FcmState,
    IoError,
    NcmParams,
    NcmState,
    PipelineConfig,
    PipelineError,
    ad_area,
    ad_curve,
    compute_cimax,
    dice,
    evaluate,
    fcm_assign,
    fcm_fit,
    generate_phantom,
    hausdorff,
    jaccard,
    mean_filter,
    ncm_assign,
    ncm_fit,
    ncm_objective,
    ns_transform,
    pad,
    rasterize_contour,
    read_gray_image,
    read_mask,
    segment_lumen,
    trace_boundary,
    write_contour_csv,
    write_mask,
)

__all__ = [name for name in dir() if not name.startswith("_")]
