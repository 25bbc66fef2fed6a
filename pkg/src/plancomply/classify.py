"""Map trajectory steps to plan phase letters.

The rulebook is declarative and temporal: reproduction vs. validation is
decided by whether the step precedes the first application-code edit, and
agent-created vs. pre-existing test files are tracked from file_create
events within the trajectory.
"""

from __future__ import annotations

import fnmatch
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable

from .records import ActionKind, StepRecord, TrajectoryRecord


class PhaseLetter(str, Enum):
    NAVIGATION = "N"
    REPRODUCTION = "R"
    PATCH = "P"
    VALIDATION = "V"
    REGRESSION_BEFORE = "RG"
    REGRESSION_AFTER = "VG"
    SUMMARY = "S"
    OUT_OF_PLAN = "O"


DEFAULT_TEST_PATTERNS = (
    "test_*",
    "*_test.*",
    "tests/**",
    "reproduce*",
    "repro*",
)

DEFAULT_SUMMARY_MARKERS = (
    "summary of changes",
    "changes made",
    "summarize",
    "in summary",
)

RuleOverride = tuple[Callable[[StepRecord], bool], PhaseLetter]


@dataclass
class ClassifierConfig:
    test_path_patterns: tuple[str, ...] = DEFAULT_TEST_PATTERNS
    rule_overrides: tuple[RuleOverride, ...] = ()
    summary_markers: tuple[str, ...] = DEFAULT_SUMMARY_MARKERS

    @classmethod
    def from_file(cls, path: str | Path) -> "ClassifierConfig":
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
        kwargs = {}
        if "test_path_patterns" in obj:
            kwargs["test_path_patterns"] = tuple(obj["test_path_patterns"])
        if "summary_markers" in obj:
            kwargs["summary_markers"] = tuple(obj["summary_markers"])
        return cls(**kwargs)


@dataclass
class ClassificationContext:
    """State threaded left-to-right through one trajectory."""

    app_edit_seen: bool = False
    created_files: set[str] = field(default_factory=set)
    last_edit_index: int = 0  # precomputed: index of the final edit/create step


def _norm(path: str) -> str:
    return path.lstrip("./")


def matches_test_pattern(path: str | None, patterns: tuple[str, ...]) -> bool:
    if not path:
        return False
    path = _norm(path)
    name = path.rsplit("/", 1)[-1]
    for pat in patterns:
        if fnmatch.fnmatch(path, pat) or fnmatch.fnmatch(name, pat):
            return True
        # tests/** should also catch direct children like tests/foo.py
        if pat.endswith("/**") and path.startswith(pat[:-2]):
            return True
    return False


def _command_paths(command_text: str) -> list[str]:
    return [_norm(tok) for tok in command_text.split()
            if "." in tok or "/" in tok]


def classify_step(step: StepRecord, context: ClassificationContext,
                  cfg: ClassifierConfig | None = None) -> PhaseLetter:
    """Classify one step; total and deterministic.

    Caller must update context afterwards (see classify_trajectory).
    """
    cfg = cfg or ClassifierConfig()
    for predicate, letter in cfg.rule_overrides:
        if predicate(step):
            return letter

    kind = step.action_kind
    if kind in (ActionKind.FILE_VIEW, ActionKind.FILE_SEARCH):
        return PhaseLetter.NAVIGATION

    is_test_path = matches_test_pattern(step.target_path, cfg.test_path_patterns)
    if kind in (ActionKind.FILE_CREATE, ActionKind.FILE_EDIT):
        created = kind is ActionKind.FILE_CREATE or (
            step.target_path and _norm(step.target_path) in context.created_files)
        if is_test_path and created:
            return (PhaseLetter.VALIDATION if context.app_edit_seen
                    else PhaseLetter.REPRODUCTION)
        if step.target_path and not is_test_path:
            return PhaseLetter.PATCH
        return PhaseLetter.OUT_OF_PLAN

    if kind is ActionKind.SHELL_EXEC:
        paths = _command_paths(step.command_text)
        if any(p in context.created_files and
               matches_test_pattern(p, cfg.test_path_patterns) for p in paths):
            return (PhaseLetter.VALIDATION if context.app_edit_seen
                    else PhaseLetter.REPRODUCTION)
        if any(p not in context.created_files and
               matches_test_pattern(p, cfg.test_path_patterns) for p in paths):
            return (PhaseLetter.REGRESSION_AFTER if context.app_edit_seen
                    else PhaseLetter.REGRESSION_BEFORE)
        # bare pytest/unittest invocations run the pre-existing suite
        head = step.command_text.split()[0].lower() if step.command_text.split() else ""
        if head in ("pytest", "tox", "unittest") or "-m pytest" in step.command_text:
            return (PhaseLetter.REGRESSION_AFTER if context.app_edit_seen
                    else PhaseLetter.REGRESSION_BEFORE)
        return PhaseLetter.OUT_OF_PLAN

    if kind is ActionKind.MESSAGE and step.index > context.last_edit_index:
        text = step.command_text.lower()
        if any(marker in text for marker in cfg.summary_markers):
            return PhaseLetter.SUMMARY

    return PhaseLetter.OUT_OF_PLAN


def classify_trajectory(traj: TrajectoryRecord,
                        cfg: ClassifierConfig | None = None
                        ) -> list[tuple[int, PhaseLetter]]:
    """One letter per step, in step order, single forward pass."""
    cfg = cfg or ClassifierConfig()
    last_edit = 0
    for step in traj.steps:
        if step.action_kind in (ActionKind.FILE_EDIT, ActionKind.FILE_CREATE):
            last_edit = step.index
    context = ClassificationContext(last_edit_index=last_edit)
    letters: list[tuple[int, PhaseLetter]] = []
    for step in traj.steps:
        letter = classify_step(step, context, cfg)
        letters.append((step.index, letter))
        if step.action_kind is ActionKind.FILE_CREATE and step.target_path:
            context.created_files.add(_norm(step.target_path))
        if letter is PhaseLetter.PATCH:
            context.app_edit_seen = True
    return letters
