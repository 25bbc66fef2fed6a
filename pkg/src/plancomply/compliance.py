"""Per-trajectory plan compliance metrics: PPC, POC, PPF, and PC.

PPC = fraction of plan phases that appear at least once.
POC = LIS over first-occurrence indices (taken in expected order, absent
      phases skipped) divided by the alphabet size.
PPF = alphabet size / size of the union of alphabet and observed letters.
PC  = geometric mean of the three.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass

from .classify import ClassifierConfig, PhaseLetter, classify_trajectory
from .langutory import Langutory, PlanSpec, build_langutory, first_occurrences
from .records import TrajectoryRecord


class PlanNotApplicableError(Exception):
    """Raised for empty-alphabet plans (the no_plan setting)."""


@dataclass(frozen=True)
class ComplianceScores:
    ppc: float
    poc: float
    ppf: float
    pc: float
    missing_phases: frozenset[PhaseLetter]
    extra_phases: frozenset[PhaseLetter]
    first_occurrence_indices: tuple[int | None, ...]


def longest_increasing_subsequence(indices: list[int]) -> int:
    """Length of the longest strictly increasing subsequence.

    Patience sorting, O(k log k).
    """
    tails: list[int] = []
    for value in indices:
        pos = bisect_left(tails, value)
        if pos == len(tails):
            tails.append(value)
        else:
            tails[pos] = value
    return len(tails)


def _require_plan(plan: PlanSpec) -> None:
    if plan.is_empty:
        raise PlanNotApplicableError(
            f"compliance metrics are not applicable to plan {plan.name!r} "
            f"(empty alphabet)"
        )


def compute_ppc(lang: Langutory, plan: PlanSpec) -> float:
    _require_plan(plan)
    observed = set(lang.letters)
    return len(observed & set(plan.alphabet)) / plan.size


def compute_poc(lang: Langutory, plan: PlanSpec) -> float:
    _require_plan(plan)
    occurrences = first_occurrences(lang, plan)
    present = [occurrences[p] for p in plan.expected_sequence
               if occurrences[p] is not None]
    return longest_increasing_subsequence(present) / plan.size


def compute_ppf(lang: Langutory, plan: PlanSpec) -> float:
    _require_plan(plan)
    observed = set(lang.letters)
    return plan.size / len(observed | set(plan.alphabet))


def compute_pc(ppc: float, poc: float, ppf: float) -> float:
    product = ppc * poc * ppf
    if product == 0.0:
        return 0.0
    return product ** (1.0 / 3.0)


def score_langutory(lang: Langutory, plan: PlanSpec) -> ComplianceScores:
    _require_plan(plan)
    ppc = compute_ppc(lang, plan)
    poc = compute_poc(lang, plan)
    ppf = compute_ppf(lang, plan)
    observed = set(lang.letters)
    occurrences = first_occurrences(lang, plan)
    return ComplianceScores(
        ppc=ppc,
        poc=poc,
        ppf=ppf,
        pc=compute_pc(ppc, poc, ppf),
        missing_phases=frozenset(set(plan.alphabet) - observed),
        extra_phases=frozenset(observed - set(plan.alphabet)),
        first_occurrence_indices=tuple(occurrences[p]
                                       for p in plan.expected_sequence),
    )


def score_trajectory(traj: TrajectoryRecord, plan: PlanSpec,
                     cfg: ClassifierConfig | None = None) -> ComplianceScores:
    """Classify, build the langutory, and compute all four metrics."""
    _require_plan(plan)
    lang = build_langutory(classify_trajectory(traj, cfg))
    return score_langutory(lang, plan)
