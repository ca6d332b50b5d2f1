"""Dataset-doubling and image-preprocessing kernels for the steering net."""

from __future__ import annotations

import numpy as np

GRADIENT_AXES = ("horizontal", "vertical")


def hflip_negate(angles: np.ndarray) -> np.ndarray:
    """Steering targets for horizontally mirrored frames.

    Mirroring a road image flips left turns into right turns, so the
    matching label transform is plain negation. Applying it twice gives
    back the original.
    """
    return -np.asarray(angles, dtype=float)


def gradient_filter(image: np.ndarray, axis: str = "horizontal") -> np.ndarray:
    """Central-difference edge response x[i-1] - x[i+1] along one axis.

    Only the valid region is returned (no padding), so the filtered axis
    shrinks by two. The image must be 2-D with at least 3 entries along
    the chosen axis.
    """
    image = np.asarray(image, dtype=float)
    if image.ndim != 2:
        raise ValueError(f"expected a 2-D image, got shape {image.shape}")
    if axis not in GRADIENT_AXES:
        raise ValueError(f"axis must be one of {GRADIENT_AXES}, got {axis!r}")
    along = 1 if axis == "horizontal" else 0
    if image.shape[along] < 3:
        raise ValueError(
            f"need at least 3 samples along the {axis} axis, got {image.shape[along]}"
        )
    if axis == "horizontal":
        return image[:, :-2] - image[:, 2:]
    return image[:-2, :] - image[2:, :]


def normalize_image(image: np.ndarray) -> np.ndarray:
    """Affinely map the image's value range onto [-1, 1].

    A constant image has no range to stretch and maps to all zeros.
    """
    image = np.asarray(image, dtype=float)
    if image.size == 0:
        raise ValueError("cannot normalize an empty image")
    if not np.all(np.isfinite(image)):
        raise ValueError("image contains non-finite values")
    lo, hi = image.min(), image.max()
    if lo == hi:
        return np.zeros_like(image)
    return 2.0 * (image - lo) / (hi - lo) - 1.0
