"""Plan-setting prompt variants and the reminder-injection schedule.

Eight settings pair a prompt template with a plan specification: the
baseline plan, its removal, two phase reductions, two augmentations, a
reordering, and a periodic reminder variant.
"""

from __future__ import annotations

from dataclasses import dataclass

from .classify import PhaseLetter
from .langutory import PLAN_CATALOGUE, PlanSpec

PLAN_BLOCK_MARKER = "{{PLAN}}"

DEFAULT_REMINDER_PERIOD = 5


class MissingMarkerError(Exception):
    pass


PHASE_INSTRUCTIONS: dict[PhaseLetter, str] = {
    PhaseLetter.NAVIGATION:
        "Navigate the repository: search for, open, and read the files "
        "relevant to the issue.",
    PhaseLetter.REPRODUCTION:
        "Reproduce the bug: create and run a new test or script that fails "
        "on the current code.",
    PhaseLetter.PATCH:
        "Patch the application code to fix the bug.",
    PhaseLetter.VALIDATION:
        "Validate the patch: run your reproduction test and add further "
        "tests covering edge cases.",
    PhaseLetter.REGRESSION_BEFORE:
        "Run the repository's existing test suite first to record the "
        "baseline behavior.",
    PhaseLetter.REGRESSION_AFTER:
        "Run the repository's existing test suite again to check for "
        "regressions.",
    PhaseLetter.SUMMARY:
        "Summarize the changes you made before submitting.",
}


@dataclass(frozen=True)
class PlanSetting:
    name: str
    spec: PlanSpec | None
    prompt_template: str
    variation_kind: str


@dataclass(frozen=True)
class ReminderSchedule:
    period_steps: int = DEFAULT_REMINDER_PERIOD
    reminder_text: str = ""

    def __post_init__(self):
        if self.period_steps < 1:
            raise ValueError("period_steps must be >= 1")


def plan_block(spec: PlanSpec) -> str:
    """Numbered phase instructions in the plan's expected order."""
    lines = ["Follow this plan:"]
    for i, phase in enumerate(spec.expected_sequence, start=1):
        lines.append(f"{i}. {PHASE_INSTRUCTIONS[phase]}")
    return "\n".join(lines)


def _build_catalogue() -> dict[str, PlanSetting]:
    kinds = {
        "standard": "baseline",
        "no_plan": "reduction",
        "no_reproduction": "reduction",
        "no_validation": "reduction",
        "regression": "augmentation",
        "summary": "augmentation",
        "reordered": "reordering",
        "reminded": "repeating",
    }
    settings = {}
    for name, kind in kinds.items():
        spec = PLAN_CATALOGUE[name]
        if spec.is_empty:
            settings[name] = PlanSetting(name, None, "", kind)
        else:
            settings[name] = PlanSetting(name, spec, plan_block(spec), kind)
    return settings


SETTING_CATALOGUE: dict[str, PlanSetting] = _build_catalogue()


def render_prompt(setting: PlanSetting, base_prompt: str) -> str:
    """Replace the plan-block marker with the setting's instructions.

    The marker is consumed exactly once; all other text is unchanged.
    """
    if PLAN_BLOCK_MARKER not in base_prompt:
        raise MissingMarkerError(
            f"base prompt does not contain the marker {PLAN_BLOCK_MARKER!r}"
        )
    return base_prompt.replace(PLAN_BLOCK_MARKER, setting.prompt_template, 1)


def default_reminder_schedule() -> ReminderSchedule:
    return ReminderSchedule(
        period_steps=DEFAULT_REMINDER_PERIOD,
        reminder_text=plan_block(PLAN_CATALOGUE["standard"]),
    )


def reminder_positions(schedule: ReminderSchedule,
                       trajectory_length: int) -> list[int]:
    """Step indices where the plan is re-injected: period, 2*period, ..."""
    if trajectory_length < 0:
        raise ValueError("trajectory_length must be >= 0")
    return list(range(schedule.period_steps, trajectory_length + 1,
                      schedule.period_steps))
