import numpy as np
import pytest

from avgmix.errors import InvariantError, ParseError
from avgmix.graphs import HamiltonianKind, complete_graph, cycle_graph, enumerate_graphs, parse_graph6, path_graph
from avgmix.mixing import amm
from avgmix.survey import (SurveyConfig, SurveyRecord, builtin_corpus, extremal_trace, flag_counts,
                           graph6_adjacency_batch, rational_string, read_corpus, records_from_csv,
                           records_from_json, records_to_csv, records_to_json, survey_corpus, survey_graph,
                           verify_kn_dominance)

from conftest import corpus_path, isomorphic

A, L = HamiltonianKind.ADJACENCY, HamiltonianKind.LAPLACIAN


@pytest.fixture(scope="module")
def surveyed():
    return {n: survey_corpus(builtin_corpus(n)) for n in range(2, 7)}


def test_k2_record():
    (r,) = survey_corpus(["A_"])
    assert r.graph6 == "A_" and r.n == 2 and r.connected
    assert r.trace_A == pytest.approx(1.0) and r.trace_L == pytest.approx(1.0)
    assert r.constdiag_A and r.constdiag_L and r.walk_regular


def test_n4_flags(surveyed):
    recs = surveyed[4]
    assert len(recs) == 11
    assert flag_counts(recs).as_tuple() == (7, 5, 4)
    assert sum(r.connected for r in recs) == 6


def test_batched_matches_scalar(surveyed):
    for n in range(2, 7):
        texts = builtin_corpus(n)
        slow = [survey_graph(parse_graph6(t), graph6=t) for t in texts]
        fast = surveyed[n]
        for a, b in zip(slow, fast):
            assert (a.graph6, a.connected, a.constdiag_A, a.constdiag_L, a.walk_regular) == \
                   (b.graph6, b.connected, b.constdiag_A, b.constdiag_L, b.walk_regular)
            assert abs(a.trace_A - b.trace_A) <= 1e-12 and abs(a.trace_L - b.trace_L) <= 1e-12


def test_batched_traces_against_direct():
    for g in enumerate_graphs(5):
        (r,) = survey_corpus([g])
        assert r.trace_A == pytest.approx(amm(g, A).trace, abs=1e-12)
        assert r.trace_L == pytest.approx(amm(g, L).trace, abs=1e-12)


def test_adjacency_batch():
    b = graph6_adjacency_batch(["A_", "A?"], 2)
    assert b.shape == (2, 2, 2)
    assert b[0].tolist() == [[0, 1], [1, 0]] and not b[1].any()


def test_mixed_orders_keep_input_order():
    texts = ["A_", "Bw", "A?", cycle_graph(5)]
    recs = survey_corpus(texts)
    assert [r.n for r in recs] == [2, 3, 2, 5]
    assert [r.graph6 for r in recs][:3] == ["A_", "Bw", "A?"]


def test_workers_do_not_change_output():
    texts = builtin_corpus(6)
    one = records_to_csv(survey_corpus(texts, workers=1))
    four = records_to_csv(survey_corpus(texts, workers=4))
    assert one == four
    scalar = records_to_csv(survey_corpus(texts, workers=2, batched=False))
    assert [ln.split(",")[0] for ln in scalar.splitlines()] == [ln.split(",")[0] for ln in one.splitlines()]


def test_bad_lines_skipped_or_fatal():
    issues = []
    recs = survey_corpus(["A_", "not graph6 ~~", "Bw"], issues=issues)
    assert [r.graph6 for r in recs] == ["A_", "Bw"]
    assert issues and issues[0][0] == 2
    with pytest.raises(ParseError):
        survey_corpus(["A_", "A"], strict=True)
    with pytest.raises(ValueError):
        survey_corpus(["A_"], workers=0)


def test_read_corpus_gz(tmp_path):
    import gzip
    p = tmp_path / "g.g6.gz"
    with gzip.open(p, "wt") as fh:
        fh.write("A_\nBw\n")
    assert read_corpus(p) == ["A_", "Bw"]


def test_rational_string():
    assert rational_string(4 / 3) == "4/3"
    assert rational_string(1 + 29 / 185) == "214/185"
    assert rational_string(2.0) == "2"
    assert rational_string(np.sqrt(2)) is None


def test_extremal_small(surveyed):
    res = extremal_trace(surveyed[3], A, "max")
    assert res.value == pytest.approx(5 / 3) and res.witnesses == ["Bw"]
    res = extremal_trace(surveyed[3], L, "min")
    assert res.value_rational == "4/3"
    res = extremal_trace(surveyed[4], A, "min")
    assert res.value_rational == "6/5"
    assert [isomorphic(parse_graph6(w), path_graph(4)) for w in res.witnesses] == [True]
    everything = extremal_trace(surveyed[4], A, "max", connected_only=False)
    assert everything.value == pytest.approx(4) and everything.witnesses == ["C?"]
    js = extremal_trace(surveyed[5], "L", "min").to_json()
    assert js["value_rational"] == "7/5" and js["statistic"] == "trace_L"


def test_extremal_rejects_bad_input(surveyed):
    with pytest.raises(InvariantError):
        extremal_trace(surveyed[3] + surveyed[4], A, "max")
    with pytest.raises(InvariantError):
        extremal_trace([], A, "max")
    with pytest.raises(ValueError):
        extremal_trace(surveyed[3], A, "median")


def test_flag_counts_rejects_mixed(surveyed):
    with pytest.raises(InvariantError):
        flag_counts(surveyed[2] + surveyed[3])


def test_serialisation_round_trip(surveyed):
    recs = surveyed[5]
    text = records_to_csv(recs)
    assert text.splitlines()[0] == "graph6,n,connected,trace_A,trace_L,constdiag_A,constdiag_L,walk_regular"
    assert records_from_csv(text) == recs
    assert records_from_json(records_to_json(recs)) == recs
    assert all(v in ("true", "false") for v in text.splitlines()[1].split(",")[5:])


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_kn_dominance(n):
    rep = verify_kn_dominance(n)
    assert rep.passed, rep
    assert rep.connected_checked == {2: 1, 3: 2, 4: 6, 5: 21, 6: 112}[n]


def test_dominance_reports_wrong_order():
    with pytest.raises(InvariantError):
        verify_kn_dominance(4, [path_graph(3)])


def test_survey_config_passed_through():
    (r,) = survey_corpus([complete_graph(4)], SurveyConfig(tol_cluster=1e-6, tol_check=1e-6))
    assert isinstance(r, SurveyRecord) and r.constdiag_A


@pytest.mark.skipif(corpus_path(7) is None, reason="n=7 corpus not present")
def test_corpus_7_counts():
    recs = survey_corpus(read_corpus(corpus_path(7)))
    assert len(recs) == 1044
    assert flag_counts(recs).as_tuple() == (4, 4, 4)
