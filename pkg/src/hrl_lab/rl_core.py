"""Shared tabular Q-learning machinery.

Q-tables keyed by discrete state ids, epsilon-greedy action selection with a
per-episode decay schedule, the one-step Q update, and the ring replay buffer
used by the deep-Q agent.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Hashable, Iterable

import numpy as np


class UnknownStateError(KeyError):
    """A strict QTable was asked about a state it has no row for."""


@dataclass
class LearningParams:
    """One-step update parameters: learning rate in (0,1], discount in [0,1)."""

    alpha: float = 0.1
    gamma: float = 0.95

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError(f"gamma must be in [0, 1), got {self.gamma}")


@dataclass
class ExplorationSchedule:
    """Per-episode epsilon: max(epsilon_min, epsilon0 * decay**episode)."""

    epsilon0: float = 1.0
    decay: float = 0.995
    epsilon_min: float = 0.05

    def __post_init__(self) -> None:
        if not 0.0 <= self.epsilon_min <= self.epsilon0 <= 1.0:
            raise ValueError(
                f"need 0 <= epsilon_min <= epsilon0 <= 1, got "
                f"({self.epsilon_min}, {self.epsilon0})"
            )
        if not 0.0 < self.decay <= 1.0:
            raise ValueError(f"decay must be in (0, 1], got {self.decay}")

    def epsilon(self, episode: int) -> float:
        return max(self.epsilon_min, self.epsilon0 * self.decay**episode)


@dataclass(frozen=True)
class Transition:
    """One interaction tuple: state, action, reward, next state, terminal flag."""

    s0: Hashable
    a: int
    r: float
    s: Hashable
    done: bool = False


class QTable:
    """Action-value rows keyed by discrete state id, zero-initialised.

    With ``states`` given the table is strict: touching any other state raises
    UnknownStateError. Without it the table grows lazily, creating a zero row
    on first contact.
    """

    def __init__(self, n_actions: int, states: Iterable[Hashable] | None = None):
        if n_actions < 1:
            raise ValueError(f"n_actions must be >= 1, got {n_actions}")
        self.n_actions = n_actions
        self._lazy = states is None
        self.rows: dict[Hashable, np.ndarray] = {}
        if states is not None:
            for s in states:
                self.rows[s] = np.zeros(n_actions)

    def __contains__(self, state: Hashable) -> bool:
        return state in self.rows

    def __len__(self) -> int:
        return len(self.rows)

    def row(self, state: Hashable) -> np.ndarray:
        r = self.rows.get(state)
        if r is None:
            if not self._lazy:
                raise UnknownStateError(state)
            r = self.rows[state] = np.zeros(self.n_actions)
        return r

    def to_csv(self, path) -> None:
        """Write ``state_id,action_id,value`` rows for inspection and fixtures."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["state_id", "action_id", "value"])
            for state in sorted(self.rows, key=repr):
                for a, v in enumerate(self.rows[state]):
                    w.writerow([repr(state), a, repr(float(v))])

    @classmethod
    def from_csv(cls, path, n_actions: int) -> "QTable":
        """Read a table written by to_csv; states come back as their repr strings."""
        table = cls(n_actions)
        with open(path, newline="") as fh:
            for rec in csv.DictReader(fh):
                table.row(rec["state_id"])[int(rec["action_id"])] = float(rec["value"])
        return table


def q_update(table: QTable, params: LearningParams, t: Transition) -> float:
    """Apply the one-step update Q(s0,a) += alpha*(r + gamma*max Q(s,.) - Q(s0,a)).

    Terminal transitions drop the bootstrap term. Returns the new Q(s0,a);
    no other cell changes.
    """
    if not np.isfinite(t.r):
        raise ValueError(f"non-finite reward: {t.r}")
    row0 = table.row(t.s0)
    if not 0 <= t.a < table.n_actions:
        raise IndexError(f"action {t.a} out of range for {table.n_actions} actions")
    target = t.r if t.done else t.r + params.gamma * float(table.row(t.s).max())
    row0[t.a] += params.alpha * (target - row0[t.a])
    return float(row0[t.a])


def select_action(
    table: QTable,
    state: Hashable,
    epsilon: float,
    rng: np.random.Generator | None = None,
) -> int:
    """Epsilon-greedy pick from the state's row; greedy ties break to the
    lowest action index. ``rng`` may be None when epsilon is 0."""
    row = table.row(state)
    if epsilon > 0.0 and rng.random() < epsilon:
        return int(rng.integers(table.n_actions))
    return int(np.argmax(row))


class ReplayBuffer:
    """Bounded ring of transitions; once full each push evicts the oldest."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self._storage: list[Transition] = []
        self._cursor = 0

    def __len__(self) -> int:
        return len(self._storage)

    def push(self, t: Transition) -> None:
        if len(self._storage) < self.capacity:
            self._storage.append(t)
        else:
            self._storage[self._cursor] = t
            self._cursor = (self._cursor + 1) % self.capacity

    def sample(self, rng: np.random.Generator) -> Transition:
        """Uniform draw from the stored transitions; the buffer is unchanged."""
        if not self._storage:
            raise IndexError("sample from empty replay buffer")
        return self._storage[int(rng.integers(len(self._storage)))]

    def snapshot(self) -> list[Transition]:
        """Stored transitions, oldest first."""
        return self._storage[self._cursor :] + self._storage[: self._cursor]
