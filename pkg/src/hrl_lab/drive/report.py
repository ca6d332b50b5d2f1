"""Static CSV views of a fitted embedding.

The interactive centroid-inspection tooling is out of scope; these two
writers carry the same information as text.
"""

from __future__ import annotations

import io

import numpy as np

from hrl_lab.drive.cluster import CentroidSet
from hrl_lab.drive.windows import TelemetryWindow, sign_label

REPORT_HEADER = "centroid,rank,tau,t_start,t_end,sign_label,distance"
EMBEDDING_HEADER = "tau,x,y,centroid,sign_label"


def nearest_windows_report(
    embedding: np.ndarray,
    cs: CentroidSet,
    windows: list[TelemetryWindow],
    n_examples: int,
    eps: float = 0.05,
) -> str:
    """CSV listing each centroid's n_examples nearest member windows.

    Candidates are the windows assigned to that centroid, ranked by
    embedding-space distance (ties broken by lower tau), so a cluster
    smaller than n_examples contributes fewer rows. Timestep ranges are
    half-open [t_start, t_end).
    """
    if n_examples < 1:
        raise ValueError(f"n_examples must be >= 1, got {n_examples}")
    embedding = np.asarray(embedding, dtype=float)
    if embedding.shape[0] != len(windows) or embedding.shape[0] != len(cs.assignment):
        raise ValueError("embedding, windows, and assignment must cover the same taus")
    m = len(windows[0].vector) // 3 if windows else 0

    out = io.StringIO()
    out.write(REPORT_HEADER + "\n")
    for c in range(cs.k):
        member_idx = np.flatnonzero(cs.assignment == c)
        dists = np.linalg.norm(embedding[member_idx] - cs.centroids[c], axis=1)
        order = sorted(range(len(member_idx)), key=lambda i: (dists[i], member_idx[i]))
        for rank, i in enumerate(order[:n_examples]):
            w = windows[member_idx[i]]
            label = sign_label(w, eps=eps)
            out.write(
                f"{c},{rank},{w.tau},{w.tau * m},{(w.tau + 1) * m},"
                f"{label.value},{float(dists[i])!r}\n"
            )
    return out.getvalue()


def embedding_csv(
    embedding: np.ndarray,
    cs: CentroidSet,
    windows: list[TelemetryWindow],
    eps: float = 0.05,
) -> str:
    """One CSV row per window: coordinates, cluster, and sign label."""
    embedding = np.asarray(embedding, dtype=float)
    if embedding.shape[0] != len(windows) or embedding.shape[0] != len(cs.assignment):
        raise ValueError("embedding, windows, and assignment must cover the same taus")
    out = io.StringIO()
    out.write(EMBEDDING_HEADER + "\n")
    for i, w in enumerate(windows):
        label = sign_label(w, eps=eps)
        out.write(
            f"{w.tau},{float(embedding[i, 0])!r},{float(embedding[i, 1])!r},"
            f"{int(cs.assignment[i])},{label.value}\n"
        )
    return out.getvalue()
