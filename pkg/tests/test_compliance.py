import itertools
import random

import pytest
from hypothesis import given, strategies as st

from plancomply.classify import PhaseLetter
from plancomply.compliance import (
    PlanNotApplicableError,
    compute_pc,
    compute_poc,
    compute_ppc,
    compute_ppf,
    longest_increasing_subsequence,
    score_langutory,
    score_trajectory,
)
from plancomply.langutory import PLAN_CATALOGUE, build_langutory

L = PhaseLetter
STANDARD = PLAN_CATALOGUE["standard"]


def lang_from(letters):
    return build_langutory(list(enumerate(letters, start=1)))


def brute_force_lis(values):
    best = 0
    for size in range(len(values), 0, -1):
        for combo in itertools.combinations(values, size):
            if all(a < b for a, b in zip(combo, combo[1:])):
                return size
    return best


def test_lis_worked_example():
    assert longest_increasing_subsequence([5, 1, 8, 10]) == 3


def test_lis_empty():
    assert longest_increasing_subsequence([]) == 0


def test_lis_mixed():
    values = [3, 1, 4, 1, 5, 9, 2, 6]
    assert longest_increasing_subsequence(values) == brute_force_lis(values)
    assert longest_increasing_subsequence(values) == 4


def test_lis_matches_brute_force_randomized():
    rng = random.Random(20240817)
    for _ in range(1000):
        values = [rng.randint(-20, 20) for _ in range(rng.randint(0, 10))]
        assert longest_increasing_subsequence(values) == brute_force_lis(values)


def test_ppc_skipping():
    lang = lang_from([L.NAVIGATION, L.NAVIGATION, L.NAVIGATION, L.PATCH])
    assert compute_ppc(lang, STANDARD) == 0.5


def test_ppc_full_coverage():
    lang = lang_from([L.NAVIGATION, L.REPRODUCTION, L.PATCH, L.VALIDATION])
    assert compute_ppc(lang, STANDARD) == 1.0


def test_ppc_no_plan_letters():
    assert compute_ppc(lang_from([L.OUT_OF_PLAN] * 3), STANDARD) == 0.0


def test_poc_out_of_order():
    letters = [L.REPRODUCTION] * 4 + [L.NAVIGATION] * 3 + [L.PATCH] * 2 + \
        [L.VALIDATION]
    assert compute_poc(lang_from(letters), STANDARD) == 0.75


def test_poc_compliant():
    letters = [L.NAVIGATION, L.REPRODUCTION, L.REPRODUCTION, L.PATCH,
               L.VALIDATION]
    assert compute_poc(lang_from(letters), STANDARD) == 1.0


def test_poc_with_absent_phases():
    # N at 1, P at 4; R and V absent contribute nothing but denominator stays 4
    lang = lang_from([L.NAVIGATION, L.NAVIGATION, L.NAVIGATION, L.PATCH])
    assert compute_poc(lang, STANDARD) == 0.5


def test_ppf_within_alphabet():
    lang = lang_from([L.NAVIGATION, L.REPRODUCTION, L.PATCH, L.VALIDATION])
    assert compute_ppf(lang, STANDARD) == 1.0


def test_ppf_one_extra_letter():
    lang = lang_from([L.NAVIGATION, L.OUT_OF_PLAN])
    assert compute_ppf(lang, STANDARD) == pytest.approx(0.8, abs=1e-12)


def test_ppf_regression_plan_two_extras():
    lang = lang_from([L.REGRESSION_BEFORE, L.SUMMARY, L.OUT_OF_PLAN])
    assert compute_ppf(lang, PLAN_CATALOGUE["regression"]) == \
        pytest.approx(0.75, abs=1e-12)


def test_pc_perfect():
    assert compute_pc(1.0, 1.0, 1.0) == 1.0


def test_pc_zero_factor():
    assert compute_pc(0.0, 0.5, 1.0) == 0.0


def test_pc_geometric_mean_value():
    # cube root of 0.25, checked against high-precision arithmetic
    assert compute_pc(0.5, 0.5, 1.0) == pytest.approx(
        0.6299605249474366, abs=1e-12)


def test_empty_plan_not_applicable():
    lang = lang_from([L.NAVIGATION])
    with pytest.raises(PlanNotApplicableError):
        compute_ppc(lang, PLAN_CATALOGUE["no_plan"])
    with pytest.raises(PlanNotApplicableError):
        score_langutory(lang, PLAN_CATALOGUE["no_plan"])


def test_score_compliant_trajectory(compliant_trajectory):
    scores = score_trajectory(compliant_trajectory, STANDARD)
    assert scores.ppc == 1.0
    assert scores.poc == 1.0
    assert scores.ppf == 1.0
    assert scores.pc == 1.0
    assert not scores.missing_phases
    assert not scores.extra_phases


def test_score_skipping_trajectory(skipping_trajectory):
    scores = score_trajectory(skipping_trajectory, STANDARD)
    assert scores.ppc == 0.5
    assert scores.missing_phases == {L.REPRODUCTION, L.VALIDATION}


def test_score_all_out_of_plan():
    lang = lang_from([L.OUT_OF_PLAN])
    scores = score_langutory(lang, STANDARD)
    assert scores.ppc == 0.0
    assert scores.poc == 0.0
    assert scores.ppf == pytest.approx(0.8, abs=1e-12)
    assert scores.pc == 0.0


NON_EMPTY_PLANS = [p for p in PLAN_CATALOGUE.values() if not p.is_empty]

letter_lists = st.lists(st.sampled_from(list(PhaseLetter)), min_size=1,
                        max_size=25)


@given(letter_lists, st.sampled_from(NON_EMPTY_PLANS))
def test_metric_bounds(letters, plan):
    scores = score_langutory(lang_from(letters), plan)
    assert 0.0 <= scores.ppc <= 1.0
    assert 0.0 <= scores.poc <= 1.0
    assert 0.0 < scores.ppf <= 1.0
    assert 0.0 <= scores.pc <= 1.0
    assert abs(scores.pc ** 3 - scores.ppc * scores.poc * scores.ppf) < 1e-12


@given(letter_lists, st.sampled_from(NON_EMPTY_PLANS))
def test_ppf_monotone_under_new_extra_letter(letters, plan):
    outside = [p for p in PhaseLetter if p not in plan.alphabet
               and p not in letters]
    if not outside:
        return
    before = compute_ppf(lang_from(letters), plan)
    after = compute_ppf(lang_from(letters + [outside[0]]), plan)
    assert after < before


@given(st.sampled_from(NON_EMPTY_PLANS), st.randoms(use_true_random=False))
def test_poc_permutation_floor(plan, rng):
    order = list(plan.expected_sequence)
    rng.shuffle(order)
    scores = score_langutory(lang_from(order), plan)
    assert scores.ppc == 1.0
    assert scores.poc >= 1.0 / plan.size


@given(st.sampled_from(NON_EMPTY_PLANS), st.randoms(use_true_random=False))
def test_pc_one_on_compliant_strings(plan, rng):
    letters = []
    for phase in plan.expected_sequence:
        letters.extend([phase] * rng.randint(1, 3))
    # trailing revisits of already-seen phases keep first occurrences intact
    for _ in range(rng.randint(0, 5)):
        letters.append(rng.choice(letters))
    scores = score_langutory(lang_from(letters), plan)
    assert scores.pc == 1.0
