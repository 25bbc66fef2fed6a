"""Corpus-level statistics: rank tests, correlation, paired outcomes,
set intersections, and grouped score summaries."""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from functools import lru_cache
from math import comb, sqrt

from scipy.stats import binom, chi2, norm, rankdata

from .records import Corpus

EXACT_MAX_SAMPLE = 20   # per-sample size cap for the exact U distribution
MCNEMAR_EXACT_MAX = 25  # discordant-count cap for the exact binomial test


class EmptySampleError(Exception):
    pass


class DegenerateVarianceError(Exception):
    pass


class InstanceSetMismatchError(Exception):
    pass


@lru_cache(maxsize=None)
def _u_count(u: int, n: int, m: int) -> int:
    """Number of rank arrangements of (n, m) samples with U statistic u."""
    if u < 0:
        return 0
    if n == 0 or m == 0:
        return 1 if u == 0 else 0
    return _u_count(u - m, n - 1, m) + _u_count(u, n, m - 1)


def mann_whitney_u(sample_a: list[float], sample_b: list[float]
                   ) -> tuple[float, float]:
    """Two-sided Mann-Whitney U; returns (U of sample_a, p-value).

    Exact distribution when both samples are small and tie-free, otherwise
    tie-corrected normal approximation with continuity correction.
    """
    if not sample_a or not sample_b:
        raise EmptySampleError("both samples must be non-empty")
    na, nb = len(sample_a), len(sample_b)
    pooled = list(sample_a) + list(sample_b)
    ranks = rankdata(pooled)
    u_a = float(sum(ranks[:na])) - na * (na + 1) / 2
    u_b = na * nb - u_a
    has_ties = len(set(pooled)) < len(pooled)

    if not has_ties and na <= EXACT_MAX_SAMPLE and nb <= EXACT_MAX_SAMPLE:
        u_lo = int(round(min(u_a, u_b)))
        total = comb(na + nb, na)
        hits = sum(_u_count(u, na, nb) for u in range(na * nb + 1)
                   if u <= u_lo or u >= na * nb - u_lo)
        return u_a, min(1.0, hits / total)

    mu = na * nb / 2
    tie_term = 0.0
    seen: dict[float, int] = {}
    for v in pooled:
        seen[v] = seen.get(v, 0) + 1
    for t in seen.values():
        tie_term += t ** 3 - t
    n = na + nb
    sigma2 = na * nb / 12 * ((n + 1) - tie_term / (n * (n - 1)))
    if sigma2 <= 0:
        return u_a, 1.0
    z = max(0.0, abs(u_a - mu) - 0.5) / sqrt(sigma2)
    return u_a, min(1.0, 2 * float(norm.sf(z)))


def pearson_r(x: list[float], y: list[float]) -> float:
    if len(x) != len(y) or len(x) < 2:
        raise ValueError("samples must have equal length >= 2")
    mx = sum(x) / len(x)
    my = sum(y) / len(y)
    sxx = sum((v - mx) ** 2 for v in x)
    syy = sum((v - my) ** 2 for v in y)
    if sxx == 0 or syy == 0:
        raise DegenerateVarianceError("zero variance in a sample")
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    return sxy / sqrt(sxx * syy)


def mcnemar(paired_outcomes: list[tuple[bool, bool]]) -> tuple[float, float]:
    """Paired-outcome test on discordant counts; (statistic, two-sided p).

    Exact binomial when discordants are few, else chi-square with
    continuity correction.
    """
    if not paired_outcomes:
        raise EmptySampleError("need at least one outcome pair")
    b = sum(1 for first, second in paired_outcomes if first and not second)
    c = sum(1 for first, second in paired_outcomes if not first and second)
    n = b + c
    if n == 0:
        return 0.0, 1.0
    if n < MCNEMAR_EXACT_MAX:
        k = min(b, c)
        return float(k), min(1.0, 2 * float(binom.cdf(k, n, 0.5)))
    stat = (abs(b - c) - 1) ** 2 / n
    return stat, float(chi2.sf(stat, 1))


def _resolved_map(corpus: Corpus) -> dict[str, bool | None]:
    return {t.instance_id: t.resolved for t in corpus}


def deterministic_subset(runs: list[Corpus]) -> set[str]:
    """Instance ids whose resolved flag is identical across all runs."""
    if len(runs) < 2:
        raise ValueError("need at least two runs")
    maps = [_resolved_map(run) for run in runs]
    base = set(maps[0])
    for i, m in enumerate(maps[1:], start=2):
        if set(m) != base:
            raise InstanceSetMismatchError(
                f"run 1 and run {i} cover different instance sets"
            )
    return {iid for iid in base
            if all(m[iid] == maps[0][iid] for m in maps)}


@dataclass
class IntersectionTable:
    settings: list[str]
    memberships: dict[str, frozenset[str]]
    intersection_counts: dict[frozenset[str], int]


def intersection_table(corpora: dict[str, Corpus]) -> IntersectionTable:
    """Exclusive set intersections of resolved instances per setting."""
    if not corpora:
        raise ValueError("need at least one corpus")
    maps = {name: _resolved_map(c) for name, c in corpora.items()}
    names = sorted(maps)
    base = set(maps[names[0]])
    for name in names[1:]:
        if set(maps[name]) != base:
            raise InstanceSetMismatchError(
                f"settings {names[0]!r} and {name!r} cover different instances"
            )
    memberships: dict[str, frozenset[str]] = {}
    counts: dict[frozenset[str], int] = {}
    for iid in base:
        resolved_in = frozenset(name for name in names if maps[name][iid])
        memberships[iid] = resolved_in
        if resolved_in:
            counts[resolved_in] = counts.get(resolved_in, 0) + 1
    return IntersectionTable(settings=names, memberships=memberships,
                             intersection_counts=counts)


METRIC_FIELDS = ("ppc", "poc", "ppf", "pc")


@dataclass
class GroupedScores:
    keys: dict[str, str]
    values: list[dict]
    summary: dict[str, dict[str, float]]


def _summarize(values: list[dict]) -> dict[str, dict[str, float]]:
    out: dict[str, dict[str, float]] = {}
    for metric in METRIC_FIELDS:
        series = [float(v[metric]) for v in values]
        out[metric] = {
            "mean": statistics.fmean(series),
            "median": statistics.median(series),
            "min": min(series),
            "max": max(series),
        }
    return out


def group_scores(records: list[dict], by: tuple[str, ...]) -> list[GroupedScores]:
    """Group score records by the given keys; deterministic key order."""
    buckets: dict[tuple[str, ...], list[dict]] = {}
    for rec in records:
        key = tuple(str(rec.get(k, "")) for k in by)
        buckets.setdefault(key, []).append(rec)
    groups = []
    for key in sorted(buckets):
        groups.append(GroupedScores(
            keys=dict(zip(by, key)),
            values=buckets[key],
            summary=_summarize(buckets[key]),
        ))
    return groups
