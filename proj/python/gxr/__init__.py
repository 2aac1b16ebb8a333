"""Geodesic X-ray transform on constant-curvature disks."""

import json

from ._gxr import (
    DiskModel,
    FilterOverflow,
    FormatError,
    GxrError,
    IoError,
    ModelMismatch,
    NonpositiveRadius,
    OutOfDisk,
    Reconstruction,
    ResolutionTooLow,
    SimplicityViolation,
    check_names,
    curved_zernike_hat,
    max_threads,
    phantom,
    project,
    psi_hat,
    read_sinogram,
    reconstruct,
    set_max_threads,
    singular_value,
    sinogram_grid,
    write_sinogram,
    zernike,
)
from ._gxr import _verify_json


def verify(models=None, only=None, tolerance_scale=1.0, seed=20240601):
    """Run the check suite; returns the report as a dict.

    models is a list of (kappa, radius) pairs (default: the six standard models),
    only a list of check names.
    """
    pairs = [(float(k), float(r)) for k, r in (models or [])]
    return json.loads(_verify_json(pairs, list(only or []), float(tolerance_scale), int(seed)))


__all__ = [
    "DiskModel",
    "FilterOverflow",
    "FormatError",
    "GxrError",
    "IoError",
    "ModelMismatch",
    "NonpositiveRadius",
    "OutOfDisk",
    "Reconstruction",
    "ResolutionTooLow",
    "SimplicityViolation",
    "check_names",
    "curved_zernike_hat",
    "max_threads",
    "phantom",
    "project",
    "psi_hat",
    "read_sinogram",
    "reconstruct",
    "set_max_threads",
    "singular_value",
    "sinogram_grid",
    "verify",
    "write_sinogram",
    "zernike",
]
