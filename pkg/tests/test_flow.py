import json

from hypothesis import given, settings, strategies as st

from plancomply.classify import PhaseLetter
from plancomply.flow import (
    TERMINAL,
    build_flow,
    collapse_runs,
    emit_sankey,
    flow_records,
)
from plancomply.langutory import build_langutory

L = PhaseLetter


def lang_from(letters):
    return build_langutory(list(enumerate(letters, start=1)))


def test_collapse_runs():
    lang = lang_from([L.NAVIGATION, L.REPRODUCTION, L.REPRODUCTION, L.PATCH,
                      L.VALIDATION, L.VALIDATION, L.VALIDATION, L.PATCH,
                      L.VALIDATION])
    assert collapse_runs(lang) == [L.NAVIGATION, L.REPRODUCTION, L.PATCH,
                                   L.VALIDATION, L.PATCH, L.VALIDATION]


def test_collapse_single_letter():
    assert collapse_runs(lang_from([L.NAVIGATION])) == [L.NAVIGATION]


def test_collapse_alternating_unchanged():
    letters = [L.NAVIGATION, L.PATCH, L.NAVIGATION, L.PATCH]
    assert collapse_runs(lang_from(letters)) == letters


def test_collapse_idempotent():
    lang = lang_from([L.NAVIGATION] * 3 + [L.PATCH] * 2)
    collapsed = collapse_runs(lang)
    again = collapse_runs(lang_from(collapsed))
    assert again == collapsed


def test_build_flow_two_identical():
    langs = [lang_from([L.NAVIGATION, L.PATCH]) for _ in range(2)]
    table = build_flow(langs, max_stages=8)
    assert table.flows[(1, "N", "P")] == 2
    assert table.flows[(2, "P", TERMINAL)] == 2
    assert table.population == 2


def test_build_flow_four_stage_chain():
    table = build_flow([lang_from([L.NAVIGATION, L.REPRODUCTION, L.PATCH,
                                   L.VALIDATION])], max_stages=8)
    assert table.flows == {
        (1, "N", "R"): 1,
        (2, "R", "P"): 1,
        (3, "P", "V"): 1,
        (4, "V", TERMINAL): 1,
    }


def test_build_flow_mixed_corpus():
    langs = [lang_from([L.NAVIGATION, L.PATCH, L.VALIDATION]),
             lang_from([L.NAVIGATION, L.PATCH])]
    table = build_flow(langs, max_stages=8)
    assert table.flows[(2, "P", "V")] == 1
    assert table.flows[(2, "P", TERMINAL)] == 1


def test_horizon_folds_to_terminal():
    seq = [L.NAVIGATION, L.REPRODUCTION, L.PATCH, L.VALIDATION, L.PATCH]
    table = build_flow([lang_from(seq)], max_stages=2)
    assert table.flows == {(1, "N", "R"): 1, (2, "R", TERMINAL): 1}
    assert table.folded == {(2, "R", TERMINAL): 1}


def check_conservation(table):
    terminal_total = sum(count for (s, a, b), count in table.flows.items()
                         if b == TERMINAL)
    assert terminal_total == table.population
    stage1_out = sum(count for (s, a, b), count in table.flows.items()
                     if s == 1)
    assert stage1_out == table.population
    max_stage = max((k[0] for k in table.flows), default=0)
    for stage in range(2, max_stage + 1):
        inflow = sum(count for (s, a, b), count in table.flows.items()
                     if s == stage - 1 and b != TERMINAL)
        outflow = sum(count for (s, a, b), count in table.flows.items()
                      if s == stage)
        assert inflow == outflow


corpora = st.lists(
    st.lists(st.sampled_from(list(PhaseLetter)), min_size=1, max_size=14),
    min_size=1, max_size=40)


@settings(max_examples=200)
@given(corpora, st.integers(min_value=1, max_value=10))
def test_flow_conservation(letter_lists, max_stages):
    table = build_flow([lang_from(seq) for seq in letter_lists], max_stages)
    check_conservation(table)


@given(corpora)
def test_stratified_flows_sum_to_unstratified(letter_lists):
    langs = [lang_from(seq) for seq in letter_lists]
    whole = build_flow(langs, max_stages=6)
    half_a = build_flow(langs[::2], max_stages=6)
    half_b = build_flow(langs[1::2], max_stages=6)
    combined: dict = {}
    for part in (half_a, half_b):
        for key, count in part.flows.items():
            combined[key] = combined.get(key, 0) + count
    assert combined == whole.flows


def test_emit_sankey_empty_corpus(tmp_path):
    table = build_flow([], max_stages=4)
    emit_sankey(table, tmp_path / "flow.json", tmp_path / "flow.svg")
    data = json.loads((tmp_path / "flow.json").read_text())
    assert data["population"] == 0
    svg = (tmp_path / "flow.svg").read_text()
    assert svg.startswith("<svg")
    assert 'class="ribbon"' not in svg


def test_emit_sankey_one_ribbon_per_stage(tmp_path):
    table = build_flow([lang_from([L.NAVIGATION, L.REPRODUCTION, L.PATCH,
                                   L.VALIDATION])], max_stages=8)
    emit_sankey(table, tmp_path / "flow.json", tmp_path / "flow.svg")
    svg = (tmp_path / "flow.svg").read_text()
    assert svg.count('class="ribbon"') == 4  # stages 1-3 plus termination


def test_flow_records_deterministic_order():
    langs = [lang_from([L.PATCH, L.NAVIGATION]),
             lang_from([L.NAVIGATION, L.PATCH])]
    records = flow_records(build_flow(langs, max_stages=4))
    assert records == sorted(records, key=lambda r: (r["stage"], r["from"],
                                                     r["to"]))
