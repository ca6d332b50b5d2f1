"""Aggregate statistics over run logs."""

from __future__ import annotations

import io

import numpy as np

from hrl_lab.harness.runlog import RunLog

SUMMARY_HEADER = "agent,mean,median,min,max,convergence_episode"


def convergence_episode(steps: "list[int] | np.ndarray") -> int:
    """First episode index after which steps never exceed the stable band.

    The band is 1.05x the mean of the final 10 episodes (or all of them
    for shorter logs). Equivalently: one past the last episode that pokes
    above the band, 0 if none ever does, len(steps) if the log ends above
    its own band.
    """
    steps = np.asarray(steps, dtype=float)
    if steps.size == 0:
        raise ValueError("empty steps series")
    threshold = 1.05 * steps[-10:].mean()
    above = np.flatnonzero(steps > threshold)
    return 0 if above.size == 0 else int(above[-1]) + 1


def summarize(logs: list[RunLog]) -> str:
    """Per-agent duration stats as CSV.

    Durations are the steps column pooled over every (seed, episode).
    The convergence column is the median over seeds of each seed's own
    convergence episode.
    """
    if not logs:
        raise ValueError("no run logs to summarize")
    out = io.StringIO()
    out.write(SUMMARY_HEADER + "\n")
    for log in logs:
        if not log.rows:
            raise ValueError(f"log for {log.agent!r} has no rows")
        durations = np.array([r.steps for r in log.rows], dtype=float)
        conv = np.median([convergence_episode(log.steps_series(s)) for s in log.seeds()])
        out.write(
            f"{log.agent},{float(durations.mean())!r},{float(np.median(durations))!r},"
            f"{float(durations.min())!r},{float(durations.max())!r},{float(conv)!r}\n"
        )
    return out.getvalue()
