"""Phase strings: the langutory of a trajectory and plan specifications."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from .classify import PhaseLetter

L = PhaseLetter  # local alias for catalogue literals


class EmptyLangutoryError(Exception):
    pass


@dataclass(frozen=True)
class PlanSpec:
    """A plan setting's phase alphabet and expected ordered sequence."""

    name: str
    alphabet: tuple[PhaseLetter, ...]
    expected_sequence: tuple[PhaseLetter, ...]

    def __post_init__(self):
        if sorted(self.alphabet, key=lambda p: p.value) != \
                sorted(set(self.expected_sequence), key=lambda p: p.value) or \
                len(self.expected_sequence) != len(set(self.expected_sequence)):
            raise ValueError(
                f"plan {self.name!r}: expected_sequence must contain each "
                f"alphabet letter exactly once"
            )

    @property
    def size(self) -> int:
        return len(self.alphabet)

    @property
    def is_empty(self) -> bool:
        return not self.alphabet


# Built-in catalogue of plan settings. The no_plan entry is an empty-alphabet
# sentinel: compliance metrics over it are not applicable, not zero.
PLAN_CATALOGUE: dict[str, PlanSpec] = {
    "standard": PlanSpec("standard", (L.NAVIGATION, L.REPRODUCTION, L.PATCH,
                                      L.VALIDATION),
                         (L.NAVIGATION, L.REPRODUCTION, L.PATCH, L.VALIDATION)),
    "no_plan": PlanSpec("no_plan", (), ()),
    "no_reproduction": PlanSpec("no_reproduction",
                                (L.NAVIGATION, L.PATCH, L.VALIDATION),
                                (L.NAVIGATION, L.PATCH, L.VALIDATION)),
    "no_validation": PlanSpec("no_validation",
                              (L.NAVIGATION, L.REPRODUCTION, L.PATCH),
                              (L.NAVIGATION, L.REPRODUCTION, L.PATCH)),
    "regression": PlanSpec("regression",
                           (L.REGRESSION_BEFORE, L.NAVIGATION, L.REPRODUCTION,
                            L.PATCH, L.VALIDATION, L.REGRESSION_AFTER),
                           (L.REGRESSION_BEFORE, L.NAVIGATION, L.REPRODUCTION,
                            L.PATCH, L.VALIDATION, L.REGRESSION_AFTER)),
    "summary": PlanSpec("summary",
                        (L.NAVIGATION, L.REPRODUCTION, L.PATCH, L.VALIDATION,
                         L.SUMMARY),
                        (L.NAVIGATION, L.REPRODUCTION, L.PATCH, L.VALIDATION,
                         L.SUMMARY)),
    "reordered": PlanSpec("reordered",
                          (L.NAVIGATION, L.PATCH, L.REPRODUCTION, L.VALIDATION),
                          (L.NAVIGATION, L.PATCH, L.REPRODUCTION, L.VALIDATION)),
    "reminded": PlanSpec("reminded",
                         (L.NAVIGATION, L.REPRODUCTION, L.PATCH, L.VALIDATION),
                         (L.NAVIGATION, L.REPRODUCTION, L.PATCH, L.VALIDATION)),
}


def load_plan_spec(path: str | Path) -> PlanSpec:
    """Load a custom PlanSpec from a JSON config file."""
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    seq = tuple(PhaseLetter(c) for c in obj["expected_sequence"])
    alphabet = tuple(PhaseLetter(c) for c in obj.get("alphabet", seq))
    return PlanSpec(name=obj["name"], alphabet=alphabet, expected_sequence=seq)


def compress_letters(letters: list[PhaseLetter] | tuple[PhaseLetter, ...]) -> str:
    """Run-length rendering: N,R,R,P,V,V,V,P,V -> "N R2 P V3 P V"."""
    parts: list[str] = []
    i = 0
    while i < len(letters):
        j = i
        while j < len(letters) and letters[j] == letters[i]:
            j += 1
        run = j - i
        parts.append(letters[i].value + (str(run) if run > 1 else ""))
        i = j
    return " ".join(parts)


_RUN_TOKEN = re.compile(r"^([A-Z]+?)(\d*)$")


def expand_compressed(compressed: str) -> list[PhaseLetter]:
    """Inverse of compress_letters."""
    letters: list[PhaseLetter] = []
    for token in compressed.split():
        match = _RUN_TOKEN.match(token)
        if not match:
            raise ValueError(f"bad run token {token!r}")
        letter = PhaseLetter(match.group(1))
        count = int(match.group(2)) if match.group(2) else 1
        letters.extend([letter] * count)
    return letters


@dataclass(frozen=True)
class Langutory:
    letters: tuple[PhaseLetter, ...]
    step_refs: tuple[int, ...]
    compressed: str

    def __len__(self) -> int:
        return len(self.letters)


def build_langutory(letters: list[tuple[int, PhaseLetter]]) -> Langutory:
    """Build the phase string from (step index, letter) pairs in step order."""
    if not letters:
        raise EmptyLangutoryError("cannot build a langutory from zero letters")
    seq = tuple(letter for _, letter in letters)
    refs = tuple(index for index, _ in letters)
    return Langutory(letters=seq, step_refs=refs, compressed=compress_letters(seq))


def first_occurrences(lang: Langutory, plan: PlanSpec
                      ) -> dict[PhaseLetter, int | None]:
    """1-based index of each plan letter's first appearance, or None."""
    result: dict[PhaseLetter, int | None] = {}
    for phase in plan.expected_sequence:
        try:
            result[phase] = lang.letters.index(phase) + 1
        except ValueError:
            result[phase] = None
    return result
