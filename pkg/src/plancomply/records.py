"""Canonical trajectory records: one agent run as an ordered list of steps."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class ActionKind(str, Enum):
    FILE_VIEW = "file_view"
    FILE_SEARCH = "file_search"
    FILE_CREATE = "file_create"
    FILE_EDIT = "file_edit"
    SHELL_EXEC = "shell_exec"
    SUBMIT = "submit"
    MESSAGE = "message"
    OTHER = "other"


class Difficulty(str, Enum):
    EASY = "easy"
    MEDIUM = "medium"
    HARD = "hard"
    UNKNOWN = "unknown"


class TrajectoryError(Exception):
    """Base class for trajectory ingest/validation failures."""


class MalformedRecordError(TrajectoryError):
    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class EmptyTrajectoryError(TrajectoryError):
    pass


class DuplicateTrajectoryError(TrajectoryError):
    pass


@dataclass(frozen=True)
class StepRecord:
    """One trajectory step.

    index is the 1-based ordinal within the trajectory. target_path is
    repository-relative when present. output_excerpt is truncated on ingest.
    """

    index: int
    action_kind: ActionKind
    target_path: str | None = None
    command_text: str = ""
    output_excerpt: str = ""
    is_error: bool = False


@dataclass(frozen=True)
class TrajectoryRecord:
    trajectory_id: str
    steps: tuple[StepRecord, ...]
    instance_id: str = ""
    model_name: str = ""
    plan_setting_name: str = ""
    difficulty: Difficulty = Difficulty.UNKNOWN
    resolved: bool | None = None

    def __post_init__(self):
        if not self.steps:
            raise EmptyTrajectoryError(
                f"trajectory {self.trajectory_id!r} has no steps"
            )
        for pos, step in enumerate(self.steps, start=1):
            if step.index != pos:
                raise MalformedRecordError(
                    f"trajectory {self.trajectory_id!r}: step index {step.index} "
                    f"at position {pos}; indices must be contiguous from 1"
                )
        submits = [s for s in self.steps if s.action_kind is ActionKind.SUBMIT]
        if len(submits) > 1:
            raise MalformedRecordError(
                f"trajectory {self.trajectory_id!r}: multiple submit steps"
            )
        if submits and submits[0] is not self.steps[-1]:
            raise MalformedRecordError(
                f"trajectory {self.trajectory_id!r}: submit must be the final step"
            )


@dataclass
class Corpus:
    trajectories: list[TrajectoryRecord] = field(default_factory=list)
    provenance: str = ""

    def __post_init__(self):
        seen: dict[str, TrajectoryRecord] = {}
        for traj in self.trajectories:
            if traj.trajectory_id in seen:
                raise DuplicateTrajectoryError(
                    f"duplicate trajectory_id {traj.trajectory_id!r}"
                )
            seen[traj.trajectory_id] = traj

    def __len__(self) -> int:
        return len(self.trajectories)

    def __iter__(self):
        return iter(self.trajectories)
