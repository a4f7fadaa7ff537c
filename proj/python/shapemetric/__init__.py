# SPDX-License-Identifier: Apache-2.0
"""Reconstruction metrics for 3D shapes: sampling, signed distances, marching cubes, CD/NC/F-score/IoU."""

from ._core import (
    ShapemetricError,
    evaluate,
    evaluate_manifest,
    evaluate_points,
    load_mesh,
    marching_cubes,
    normalize_to_unit_cube,
    sample_pose,
    sample_surface,
    sampling_floor,
    save_mesh,
    sdf_grid,
    signed_distance,
    visible_mask,
)

__all__ = [
    "ShapemetricError",
    "evaluate",
    "evaluate_manifest",
    "evaluate_points",
    "load_mesh",
    "marching_cubes",
    "normalize_to_unit_cube",
    "sample_pose",
    "sample_surface",
    "sampling_floor",
    "save_mesh",
    "sdf_grid",
    "signed_distance",
    "visible_mask",
]
