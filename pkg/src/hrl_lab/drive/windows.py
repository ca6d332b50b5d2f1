"""Telemetry ingestion and fixed-width windowing."""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from pathlib import Path

import numpy as np

TELEMETRY_COLUMNS = ("timestamp", "angle", "brake", "throttle")


@dataclass
class TelemetrySeries:
    """Per-timestep driving signals, one entry per tick.

    All three arrays must be the same length and finite. Angles are in
    whatever unit the logger used; the pipeline never converts them.
    """

    angle: np.ndarray
    brake: np.ndarray
    throttle: np.ndarray

    def __post_init__(self) -> None:
        self.angle = np.asarray(self.angle, dtype=float)
        self.brake = np.asarray(self.brake, dtype=float)
        self.throttle = np.asarray(self.throttle, dtype=float)
        lengths = {self.angle.shape, self.brake.shape, self.throttle.shape}
        if len(lengths) != 1 or self.angle.ndim != 1:
            raise ValueError("angle, brake, throttle must be equal-length 1-D arrays")
        for name, arr in (("angle", self.angle), ("brake", self.brake), ("throttle", self.throttle)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"non-finite values in {name} series")

    def __len__(self) -> int:
        return len(self.angle)


@dataclass(frozen=True)
class TelemetryWindow:
    """One windowed sample: index tau and its flattened feature vector.

    The vector is the concatenation [angles | brake | throttle] over the
    window's m ticks, so its length is always 3*m.
    """

    tau: int
    vector: np.ndarray


def window_telemetry(series: TelemetrySeries, m: int) -> list[TelemetryWindow]:
    """Cut a series into floor(T/m) non-overlapping windows of m ticks.

    Window tau covers ticks [tau*m, (tau+1)*m). A trailing partial window
    is dropped rather than padded.
    """
    if m < 1:
        raise ValueError(f"window length must be >= 1, got {m}")
    n_windows = len(series) // m
    windows = []
    for tau in range(n_windows):
        lo, hi = tau * m, (tau + 1) * m
        vec = np.concatenate(
            [series.angle[lo:hi], series.brake[lo:hi], series.throttle[lo:hi]]
        )
        windows.append(TelemetryWindow(tau=tau, vector=vec))
    return windows


def load_telemetry(path: str | Path) -> TelemetrySeries:
    """Read a telemetry CSV with header timestamp,angle,brake,throttle.

    Rows must already be aligned on a shared clock: timestamps have to be
    strictly increasing, and nothing is interpolated. Out-of-order or
    duplicate timestamps raise a ValueError that lists the offenders.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != TELEMETRY_COLUMNS:
            raise ValueError(
                f"expected header {','.join(TELEMETRY_COLUMNS)}, got {reader.fieldnames}"
            )
        stamps: list[str] = []
        angle: list[float] = []
        brake: list[float] = []
        throttle: list[float] = []
        for row in reader:
            stamps.append(row["timestamp"])
            angle.append(float(row["angle"]))
            brake.append(float(row["brake"]))
            throttle.append(float(row["throttle"]))

    keys = _timestamp_keys(stamps)
    misaligned = [stamps[i] for i in range(1, len(keys)) if keys[i] <= keys[i - 1]]
    if misaligned:
        raise ValueError(f"misaligned timestamps (not strictly increasing): {misaligned}")
    return TelemetrySeries(
        angle=np.array(angle), brake=np.array(brake), throttle=np.array(throttle)
    )


def _timestamp_keys(stamps: list[str]) -> list:
    """Order timestamps numerically when they parse as numbers, else as text."""
    try:
        return [float(s) for s in stamps]
    except ValueError:
        return list(stamps)


class SignLabel(enum.Enum):
    NEGATIVE = "negative"
    NEAR_ZERO = "near_zero"
    POSITIVE = "positive"


def sign_label(window: TelemetryWindow, eps: float = 0.05) -> SignLabel:
    """Label a window by the mean of its angle block.

    The angle block is the first third of the vector. Means strictly above
    eps are positive, strictly below -eps negative, the closed band between
    them near-zero.
    """
    if eps < 0:
        raise ValueError(f"eps must be non-negative, got {eps}")
    m = len(window.vector) // 3
    if m == 0:
        raise ValueError("window vector is empty")
    mean = float(np.mean(window.vector[:m]))
    if mean > eps:
        return SignLabel.POSITIVE
    if mean < -eps:
        return SignLabel.NEGATIVE
    return SignLabel.NEAR_ZERO
