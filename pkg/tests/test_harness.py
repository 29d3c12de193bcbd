"""Suite machinery: check dispatch, catalogs, determinism, survey, probe."""

from __future__ import annotations

import json

import pytest

from verba.errors import PreconditionFailed, UnknownCheckId, UnknownSpec
from verba.harness import (
    CHECK_ID_SET,
    CHECK_IDS,
    CheckSpec,
    DEFAULT_CATALOG,
    _CHECK_TABLE,
    conjecture_probe,
    default_tuple_specs,
    parse_tuple_spec,
    resolve_group,
    resolve_word,
    run_check,
    run_suite,
    survey,
)
from verba.verbal import value_set
from verba.words import OcwTree, gamma

SMALL_CATALOG = ["cyc:6", "sym:3", "quat:8"]


def test_check_table_is_exhaustive():
    assert set(_CHECK_TABLE) == set(CHECK_ID_SET)
    assert len(CHECK_IDS) == 16
    assert [i for i, _ in CHECK_IDS] == list(CHECK_ID_SET)


def test_unknown_check_id():
    with pytest.raises(UnknownCheckId):
        run_check(CheckSpec("L9.9", "sym:3", "gamma:2", "G,G"))


def test_resolve_word_forms():
    tree, label = resolve_word("gamma:3")
    assert isinstance(tree, OcwTree) and label == "gamma:3"
    tree, label = resolve_word("[x1,x2]")
    assert isinstance(tree, OcwTree) and label == "[x1,x2]"
    word, label = resolve_word("x1^2")
    assert label == "x1^2"


def test_parse_tuple_spec_variants(sym4):
    tup = parse_tuple_spec("G,derived,center", sym4)
    assert [e.subgroup.order for e in tup.entries] == [24, 12, 1]
    assert tup.labels == ("G", "derived", "center")
    assert parse_tuple_spec("ncl(1)", sym4).entries[0].subgroup.order == 24
    with pytest.raises(UnknownSpec):
        parse_tuple_spec("wat", sym4)
    with pytest.raises(UnknownSpec):
        parse_tuple_spec("", sym4)


def test_parse_tuple_spec_quat_derived_center(quat8):
    tup = parse_tuple_spec("derived,center", quat8)
    assert [e.subgroup.order for e in tup.entries] == [2, 2]
    assert tup.entries[0].subgroup == tup.entries[1].subgroup


def test_parse_tuple_spec_ncl_three_cycle(sym4):
    idx = next(i for i in range(24) if sym4.element_order(i) == 3)
    tup = parse_tuple_spec(f"ncl({idx})", sym4)
    assert tup.entries[0].subgroup.order == 12


def test_parse_tuple_spec_set_entry():
    c8 = resolve_group("cyc:8")
    tup = parse_tuple_spec("set:(0,2,4,6);n=2", c8)
    entry = tup.entries[0]
    assert entry.subgroup.order == 4 and entry.subset.size == 4 and entry.exponent == 2


def test_default_tuple_specs_deterministic(sym4):
    a = default_tuple_specs(sym4, 2, seed=0)
    b = default_tuple_specs(sym4, 2, seed=0)
    assert a == b
    assert a[0] == "G,G"
    assert any(s.startswith("ncl(") for s in a)
    c = default_tuple_specs(sym4, 2, seed=1)
    assert c[0] == "G,G"  # fixed part independent of the seed


def test_default_tuple_specs_dedupe():
    c6 = resolve_group("cyc:6")
    specs = default_tuple_specs(c6, 2, seed=0)
    # abelian: center == G, so the center tuple collapses into the G tuple
    assert "center,center" not in specs


def test_run_check_vacuous_trivial_group():
    res = run_check(CheckSpec("T3.6", "cyc:1", "delta:1", "G,G"))
    assert res.status == "pass"


def test_run_check_alt4_tuple(sym4):
    res = run_check(CheckSpec("T2.10", "sym:4", "gamma:2", "derived,derived"))
    assert res.status == "pass"


def test_run_check_l23_transpositions():
    res = run_check(CheckSpec("L2.3", "sym:3", "gamma:2", "G,G"))
    assert res.status == "pass" and "3" in res.detail


def test_sampled_mode_never_reports_full_pass():
    res = run_check(CheckSpec("L2.3", "sym:3", "gamma:2", "G,G", mode="sampled", seed=1))
    assert res.status == "sampled-pass"
    res = run_check(CheckSpec("T2.10", "sym:3", "gamma:2", "G,G", mode="sampled", seed=1))
    assert res.status == "sampled-pass"


def test_run_suite_empty_catalog():
    report = run_suite([], ids=list(CHECK_ID_SET))
    assert report.rows == [] and report.all_pass


def test_run_suite_small_catalog_all_ids():
    report = run_suite(SMALL_CATALOG, seed=0)
    assert report.rows and report.all_pass, [r for r in report.failures][:3]


def test_run_suite_deterministic_across_workers():
    one = run_suite(SMALL_CATALOG, seed=0, workers=1)
    two = run_suite(SMALL_CATALOG, seed=0, workers=2)
    as_json = lambda rep: json.dumps([r.as_dict() for r in rep.rows])
    assert as_json(one) == as_json(two)


def test_run_suite_seed_changes_ncl_rows_only():
    one = run_suite(["sym:3"], ids=["L2.1"], seed=0)
    two = run_suite(["sym:3"], ids=["L2.1"], seed=99)
    fixed = [r.tuple_spec for r in one.rows if "ncl" not in r.tuple_spec]
    fixed2 = [r.tuple_spec for r in two.rows if "ncl" not in r.tuple_spec]
    assert fixed == fixed2


def test_survey_rows_quat_sym3():
    rows = survey(["quat:8", "sym:3"], "gamma:2", seed=0)
    full = {(r.group, r.tuple_spec): r for r in rows}
    q = full[("quat:8", "G,G")]
    assert (q.m, q.verbal_order) == (2, 2)
    s = full[("sym:3", "G,G")]
    assert (s.m, s.verbal_order) == (3, 3)
    assert [r.m for r in rows] == sorted(r.m for r in rows)


def test_survey_sanity_invariants():
    rows = survey(SMALL_CATALOG, "gamma:2", seed=0)
    for row in rows:
        assert row.mode == "exhaustive"
        G = resolve_group(row.group)
        assert G.order % row.verbal_order == 0
        tup = parse_tuple_spec(row.tuple_spec, G)
        vs = value_set(gamma(2), [e.subgroup for e in tup.entries])
        assert vs.size == row.m
        assert row.verbal_order >= 1


def test_survey_trivial_group_row():
    rows = survey(["cyc:1"], "gamma:2", seed=0)
    assert rows[0].m == 1 and rows[0].verbal_order == 1


def test_probe_words():
    rows = conjecture_probe(["sym:4"], "[[x1,x2],x3,x4]", seed=0)
    assert rows and all(r.mode == "exhaustive" for r in rows)
    full = {r.tuple_spec: r for r in rows}
    assert full["G,G,G,G"].verbal_order == 12


def test_probe_seven_leaf_word_small_groups():
    rows = conjecture_probe(["sym:3"], "[[x1,x2,x3],[[x4,x5],[x6,x7]]]", seed=0)
    assert rows
    assert {r.tuple_spec for r in rows if r.mode == "exhaustive"}


def test_probe_rejects_eight_leaves():
    with pytest.raises(PreconditionFailed):
        conjecture_probe(["sym:3"], "delta:3", seed=0)


def test_default_catalog_contents():
    assert "sym:4" in DEFAULT_CATALOG and "quat:8" in DEFAULT_CATALOG
    assert "heis:3" in DEFAULT_CATALOG
    assert len(DEFAULT_CATALOG) == 26
