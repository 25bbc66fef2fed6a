"""Parsing and serialization of trajectory logs.

Canonical format: line-delimited JSON. A trajectory starts with a header
record ({"record": "trajectory", ...trajectory metadata}) followed by one
step record per line ({"record": "step", ...step fields}). A file may hold
several trajectories back to back.

The swe-agent adapter is best-effort against the public scaffold's .traj
dump format (a JSON document with a "trajectory" list of action entries).
"""

from __future__ import annotations

import json
import re
from pathlib import Path

from .records import (
    ActionKind,
    Corpus,
    Difficulty,
    DuplicateTrajectoryError,
    EmptyTrajectoryError,
    MalformedRecordError,
    StepRecord,
    TrajectoryRecord,
)

DEFAULT_EXCERPT_BYTES = 4096

_STEP_FIELDS = ("index", "action_kind", "target_path", "command_text",
                "output_excerpt", "is_error")


def _truncate(text: str, budget: int) -> str:
    encoded = text.encode("utf-8")
    if len(encoded) <= budget:
        return text
    return encoded[:budget].decode("utf-8", errors="ignore")


def _step_from_obj(obj: dict, line_number: int, excerpt_bytes: int) -> StepRecord:
    try:
        kind = ActionKind(obj.get("action_kind", "other"))
    except ValueError:
        kind = ActionKind.OTHER
    try:
        return StepRecord(
            index=int(obj["index"]),
            action_kind=kind,
            target_path=obj.get("target_path") or None,
            command_text=str(obj.get("command_text", "")),
            output_excerpt=_truncate(str(obj.get("output_excerpt", "")), excerpt_bytes),
            is_error=bool(obj.get("is_error", False)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedRecordError(f"bad step record: {exc}", line_number) from exc


def _finish_trajectory(header: dict, steps: list[StepRecord],
                       line_number: int) -> TrajectoryRecord:
    if not steps:
        raise EmptyTrajectoryError(
            f"trajectory {header.get('trajectory_id')!r} has no steps"
        )
    try:
        difficulty = Difficulty(header.get("difficulty") or "unknown")
    except ValueError:
        difficulty = Difficulty.UNKNOWN
    resolved = header.get("resolved")
    if resolved is not None:
        resolved = bool(resolved)
    try:
        return TrajectoryRecord(
            trajectory_id=str(header["trajectory_id"]),
            instance_id=str(header.get("instance_id", "")),
            model_name=str(header.get("model_name", "")),
            plan_setting_name=str(header.get("plan_setting_name", "")),
            difficulty=difficulty,
            resolved=resolved,
            steps=tuple(steps),
        )
    except KeyError as exc:
        raise MalformedRecordError(f"header missing {exc}", line_number) from exc


def parse_canonical(raw_log: str,
                    excerpt_bytes: int = DEFAULT_EXCERPT_BYTES) -> list[TrajectoryRecord]:
    """Parse canonical line-delimited text into trajectory records."""
    trajectories: list[TrajectoryRecord] = []
    header: dict | None = None
    header_line = 0
    steps: list[StepRecord] = []
    for lineno, line in enumerate(raw_log.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedRecordError(f"invalid JSON: {exc.msg}", lineno) from exc
        if not isinstance(obj, dict) or "record" not in obj:
            raise MalformedRecordError("missing 'record' discriminator", lineno)
        if obj["record"] == "trajectory":
            if header is not None:
                trajectories.append(_finish_trajectory(header, steps, header_line))
            header, steps, header_line = obj, [], lineno
        elif obj["record"] == "step":
            if header is None:
                raise MalformedRecordError("step record before trajectory header", lineno)
            steps.append(_step_from_obj(obj, lineno, excerpt_bytes))
        else:
            raise MalformedRecordError(f"unknown record type {obj['record']!r}", lineno)
    if header is None:
        raise EmptyTrajectoryError("log contains no trajectory header")
    trajectories.append(_finish_trajectory(header, steps, header_line))
    return trajectories


_SWE_AGENT_COMMANDS = {
    "open": ActionKind.FILE_VIEW,
    "goto": ActionKind.FILE_VIEW,
    "scroll_up": ActionKind.FILE_VIEW,
    "scroll_down": ActionKind.FILE_VIEW,
    "cat": ActionKind.FILE_VIEW,
    "search_dir": ActionKind.FILE_SEARCH,
    "search_file": ActionKind.FILE_SEARCH,
    "find_file": ActionKind.FILE_SEARCH,
    "grep": ActionKind.FILE_SEARCH,
    "find": ActionKind.FILE_SEARCH,
    "create": ActionKind.FILE_CREATE,
    "edit": ActionKind.FILE_EDIT,
    "str_replace_editor": ActionKind.FILE_EDIT,
    "insert": ActionKind.FILE_EDIT,
    "submit": ActionKind.SUBMIT,
}

_PATH_TOKEN = re.compile(r"[\w./-]+\.\w+")


def _swe_agent_step(entry: dict, index: int, excerpt_bytes: int) -> StepRecord:
    action = str(entry.get("action", "")).strip()
    head = action.split()[0] if action.split() else ""
    kind = _SWE_AGENT_COMMANDS.get(head)
    if kind is None:
        kind = ActionKind.SHELL_EXEC if head else ActionKind.MESSAGE
    match = _PATH_TOKEN.search(action)
    return StepRecord(
        index=index,
        action_kind=kind,
        target_path=match.group(0) if match else None,
        command_text=action,
        output_excerpt=_truncate(str(entry.get("observation", "")), excerpt_bytes),
        is_error=False,
    )


def parse_swe_agent(raw_log: str, trajectory_id: str,
                    excerpt_bytes: int = DEFAULT_EXCERPT_BYTES) -> TrajectoryRecord:
    """Best-effort adapter for SWE-agent .traj dumps."""
    try:
        doc = json.loads(raw_log)
    except json.JSONDecodeError as exc:
        raise MalformedRecordError(f"invalid JSON: {exc.msg}") from exc
    entries = doc.get("trajectory") if isinstance(doc, dict) else None
    if not isinstance(entries, list) or not entries:
        raise EmptyTrajectoryError(f"{trajectory_id!r}: no trajectory entries")
    info = doc.get("info", {}) if isinstance(doc, dict) else {}
    steps = [_swe_agent_step(e, i, excerpt_bytes)
             for i, e in enumerate(entries, start=1)]
    return TrajectoryRecord(
        trajectory_id=trajectory_id,
        instance_id=str(info.get("instance_id", "")),
        model_name=str(info.get("model_name", "")),
        steps=tuple(steps),
    )


def parse_trajectory(raw_log: str, format_tag: str = "canonical",
                     trajectory_id: str = "trajectory",
                     excerpt_bytes: int = DEFAULT_EXCERPT_BYTES) -> TrajectoryRecord:
    """Parse one trajectory from raw log text in the declared format."""
    if format_tag == "canonical":
        records = parse_canonical(raw_log, excerpt_bytes)
        if len(records) != 1:
            raise MalformedRecordError(
                f"expected exactly one trajectory, found {len(records)}"
            )
        return records[0]
    if format_tag == "swe-agent":
        return parse_swe_agent(raw_log, trajectory_id, excerpt_bytes)
    raise ValueError(f"unknown format tag {format_tag!r}")


def serialize_trajectory(traj: TrajectoryRecord) -> str:
    """Render a trajectory in the canonical line-delimited format."""
    lines = [json.dumps({
        "record": "trajectory",
        "trajectory_id": traj.trajectory_id,
        "instance_id": traj.instance_id,
        "model_name": traj.model_name,
        "plan_setting_name": traj.plan_setting_name,
        "difficulty": traj.difficulty.value,
        "resolved": traj.resolved,
    }, sort_keys=True)]
    for step in traj.steps:
        lines.append(json.dumps({
            "record": "step",
            "index": step.index,
            "action_kind": step.action_kind.value,
            "target_path": step.target_path,
            "command_text": step.command_text,
            "output_excerpt": step.output_excerpt,
            "is_error": step.is_error,
        }, sort_keys=True))
    return "\n".join(lines) + "\n"


def serialize_corpus(corpus: Corpus) -> str:
    return "".join(serialize_trajectory(t) for t in corpus)


def load_corpus(paths: list[str | Path], format_tag: str = "canonical",
                excerpt_bytes: int = DEFAULT_EXCERPT_BYTES) -> Corpus:
    """Load trajectories from files; the result is sorted by trajectory_id."""
    seen: dict[str, str] = {}
    trajectories: list[TrajectoryRecord] = []
    for path in paths:
        path = Path(path)
        text = path.read_text(encoding="utf-8")
        if format_tag == "canonical":
            loaded = parse_canonical(text, excerpt_bytes)
        elif format_tag == "swe-agent":
            loaded = [parse_swe_agent(text, path.stem, excerpt_bytes)]
        else:
            raise ValueError(f"unknown format tag {format_tag!r}")
        for traj in loaded:
            if traj.trajectory_id in seen:
                raise DuplicateTrajectoryError(
                    f"trajectory_id {traj.trajectory_id!r} appears in both "
                    f"{seen[traj.trajectory_id]} and {path}"
                )
            seen[traj.trajectory_id] = str(path)
            trajectories.append(traj)
    trajectories.sort(key=lambda t: t.trajectory_id)
    return Corpus(trajectories=trajectories,
                  provenance=f"{len(paths)} file(s), format={format_tag}")
