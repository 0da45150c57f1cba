import io
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from svo.composer import Triplet
from svo.errors import ArtifactError, DataError, OOVError, UndefinedCorrelationError
from svo.evaluation import (
    Aggregation,
    EvalItem,
    evaluate,
    format_table,
    load_dataset,
    spearman_rho,
)

from _reference import brute_spearman

AVG, NON = Aggregation.AVERAGED, Aggregation.NON_AVERAGED
CANON = "annotator\tsubj1\tverb1\tobj1\tsubj2\tverb2\tobj2\tscore\n"


class TestLoadDataset:
    def test_gs11_row(self):
        text = ("participant verb subject object landmark input hilo\n"
                "p1 draw man sword attract 2 LOW\n")
        (item,) = load_dataset(io.StringIO(text))
        assert item == EvalItem("p1", Triplet("man", "draw", "sword"),
                                Triplet("man", "attract", "sword"), 2.0)

    def test_ks14_row(self):
        text = CANON + "a1\tprogramme\toffer\tsupport\tservice\tprovide\thelp\t6\n"
        (item,) = load_dataset(io.StringIO(text))
        assert item.left == Triplet("programme", "offer", "support")
        assert item.right == Triplet("service", "provide", "help")
        assert item.human_score == 6.0

    def test_lowercases(self):
        text = CANON + "a1\tProgramme\tOFFER\tsupport\tservice\tprovide\thelp\t6\n"
        assert load_dataset(io.StringIO(text))[0].left.verb == "offer"

    def test_header_only(self):
        assert load_dataset(io.StringIO(CANON)) == []

    def test_missing_column(self):
        with pytest.raises(ArtifactError) as err:
            load_dataset(io.StringIO(CANON + "a1\tx\ty\tz\tu\tv\t6\n"))
        assert err.value.line == 2

    def test_bad_score(self):
        with pytest.raises(ArtifactError, match="unparseable"):
            load_dataset(io.StringIO(CANON + "a1\tx\ty\tz\tu\tv\tw\thigh\n"))

    def test_score_out_of_scale(self):
        with pytest.raises(ArtifactError, match="outside"):
            load_dataset(io.StringIO(CANON + "a1\tx\ty\tz\tu\tv\tw\t9\n"))

    def test_unknown_header(self):
        with pytest.raises(ArtifactError):
            load_dataset(io.StringIO("a b c\n"))


class TestSpearman:
    def test_identical(self):
        assert spearman_rho([1, 2, 3], [1, 2, 3]) == pytest.approx(1.0, abs=1e-12)

    def test_hand_permutation(self):
        assert spearman_rho([1, 2, 3], [3, 1, 2]) == pytest.approx(-0.5, abs=1e-9)

    def test_hand_ties(self):
        assert spearman_rho([1, 2, 2], [1, 2, 3]) == pytest.approx(0.866025, abs=1e-6)
        assert spearman_rho([1, 2, 2], [1, 2, 3]) == pytest.approx(math.sqrt(3) / 2, abs=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            spearman_rho([1, 2], [1, 2, 3])

    def test_constant_list(self):
        with pytest.raises(UndefinedCorrelationError):
            spearman_rho([1, 1, 1], [1, 2, 3])

    def test_too_short(self):
        with pytest.raises(UndefinedCorrelationError):
            spearman_rho([1], [1])


tie_rich = st.lists(st.integers(1, 5), min_size=3, max_size=25)


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_spearman_properties(data):
    xs = data.draw(tie_rich)
    ys = data.draw(st.lists(st.integers(1, 5), min_size=len(xs), max_size=len(xs)))
    if len(set(xs)) < 2 or len(set(ys)) < 2:
        return
    r = spearman_rho(xs, ys)
    assert abs(r - brute_spearman(xs, ys)) < 1e-12
    assert r == spearman_rho(ys, xs)
    assert -1 <= r <= 1
    for f in (lambda x: 2 * x + 1, lambda x: x ** 3):
        assert abs(spearman_rho([f(x) for x in xs], ys) - r) < 1e-12


T = [Triplet("a", "v", "b"), Triplet("c", "w", "d"), Triplet("e", "x", "f"),
     Triplet("g", "y", "h")]


def six_rows():
    """3 sentence pairs x 2 annotators."""
    a, b, c = (T[0], T[1]), (T[1], T[2]), (T[2], T[3])
    return [
        EvalItem("p1", *a, 2), EvalItem("p1", *b, 5), EvalItem("p1", *c, 6),
        EvalItem("p2", *a, 3), EvalItem("p2", *b, 4), EvalItem("p2", *c, 7),
    ], {a: 0.1, b: 0.5, c: 0.3}


def dict_scorer(scores):
    return lambda l, r: scores[(l, r)]


class TestEvaluate:
    def test_perfect_agreement(self):
        items, _ = six_rows()
        # a scorer equal to the human score needs a single annotator
        single = [it for it in items if it.annotator_id == "p1"]
        scorer = dict_scorer({it.pair: it.human_score for it in single})
        for agg in (AVG, NON):
            assert evaluate(single, scorer, agg).rho == pytest.approx(1.0, abs=1e-12)
        neg = dict_scorer({it.pair: -it.human_score for it in single})
        for agg in (AVG, NON):
            assert evaluate(single, neg, agg).rho == pytest.approx(-1.0, abs=1e-12)

    def test_hand_oracle(self):
        # averaged: human means 2.5, 4.5, 6.5 vs model .1 .5 .3 -> 1 - 6*2/24
        # non-averaged: ranks [1,4,5,2,3,6] vs [1.5,5.5,3.5,1.5,5.5,3.5] -> 8/sqrt(280)
        items, scores = six_rows()
        avg = evaluate(items, dict_scorer(scores), AVG, method="m")
        non = evaluate(items, dict_scorer(scores), NON, method="m")
        assert avg.rho == pytest.approx(0.5, abs=1e-12)
        assert non.rho == pytest.approx(8 / math.sqrt(280), abs=1e-12)
        assert (avg.n_items, non.n_items) == (3, 6)

    def test_scored_once_per_pair(self):
        items, scores = six_rows()
        calls = []

        def scorer(l, r):
            calls.append((l, r))
            return scores[(l, r)]

        evaluate(items, scorer, NON)
        assert len(calls) == 3

    def test_lenient_drops_and_counts(self):
        items, scores = six_rows()
        extra = [EvalItem("p1", T[0], T[3], 4), EvalItem("p2", T[0], T[3], 5)]

        def scorer(l, r):
            if (l, r) not in scores:
                raise OOVError("zzz")
            return scores[(l, r)]

        non = evaluate(items + extra, scorer, NON, strict=False)
        avg = evaluate(items + extra, scorer, AVG, strict=False)
        assert (non.n_items, non.n_skipped_oov) == (6, 2)
        assert (avg.n_items, avg.n_skipped_oov) == (3, 1)
        with pytest.raises(DataError, match="zzz"):
            evaluate(items + extra, scorer, NON, strict=True)

    def test_no_usable_rows(self):
        def scorer(l, r):
            raise OOVError("zzz")

        with pytest.raises(DataError):
            evaluate(six_rows()[0], scorer, NON, strict=False)

    def test_threads_do_not_change_result(self):
        items, scores = six_rows()
        a = evaluate(items, dict_scorer(scores), NON, workers=1)
        b = evaluate(items, dict_scorer(scores), NON, workers=4)
        assert a == b

    def test_report_line(self):
        items, scores = six_rows()
        r = evaluate(items, dict_scorer(scores), AVG, method="concat")
        assert r.line() == "concat\taveraged\t0.500000\t3\t0"
        assert "concat" in format_table([r])
