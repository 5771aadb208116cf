"""Numerical evidence: STFT, Zak and Bargmann transforms, frame operators."""

from .checks import CheckResult, relation_checks
from .frames import (
    FrameBoundsEstimate,
    TwoScaleResult,
    frame_bounds_dense,
    frame_bounds_estimate,
    frame_operator_apply,
    gram_matrix,
    gram_smallest_eig,
    two_scale_test,
)
from .signals import (
    GaussianWindow,
    SampledSignal,
    TFPoint,
    bargmann_point,
    stft,
    stft_point,
    window_eval,
)
from .zak import ZakBounds, ZakScan, zak_frame_bounds_integer, zak_grid, zak_min_scan, zak_point

__all__ = [
    "CheckResult", "relation_checks",
    "FrameBoundsEstimate", "TwoScaleResult", "frame_bounds_dense", "frame_bounds_estimate",
    "frame_operator_apply", "gram_matrix", "gram_smallest_eig", "two_scale_test",
    "GaussianWindow", "SampledSignal", "TFPoint", "bargmann_point", "stft", "stft_point",
    "window_eval",
    "ZakBounds", "ZakScan", "zak_frame_bounds_integer", "zak_grid", "zak_min_scan", "zak_point",
]
