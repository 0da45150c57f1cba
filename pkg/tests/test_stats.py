import io
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from svo.errors import ArtifactError, EmptyModelError
from svo.ingest import DepPair, Role
from svo.stats import PairCountTable, PpmiModel, accumulate_counts, format_counts, parse_counts

from conftest import toy_pairs

S, O = Role.SUBJECT, Role.OBJECT


def test_toy_counts(toy_table):
    assert toy_table.total[S] == 4
    assert toy_table.noun_marginals[S]["dog"] == 3
    assert toy_table.verb_marginals[S]["chase"] == 3
    assert toy_table.total[O] == 4


def test_empty_stream():
    t = accumulate_counts([])
    assert t.total == {S: 0, O: 0}


def test_order_independent():
    pairs = toy_pairs()
    assert accumulate_counts(pairs) == accumulate_counts(list(reversed(pairs)))


def test_marginals_are_row_and_column_sums(toy_table):
    for role in (S, O):
        counts = toy_table.counts[role]
        for n, m in toy_table.noun_marginals[role].items():
            assert m == sum(c for (x, _), c in counts.items() if x == n)
        for v, m in toy_table.verb_marginals[role].items():
            assert m == sum(c for (_, y), c in counts.items() if y == v)
        assert toy_table.total[role] == sum(counts.values()) \
            == sum(toy_table.noun_marginals[role].values()) \
            == sum(toy_table.verb_marginals[role].values())


def test_merge_is_addition():
    pairs = toy_pairs()
    half = len(pairs) // 2
    assert accumulate_counts(pairs[:half]) + accumulate_counts(pairs[half:]) == \
        accumulate_counts(pairs)


class TestPpmi:
    def test_cat_chase(self, toy_table):
        assert PpmiModel(toy_table).ppmi("cat", "chase", S) == pytest.approx(math.log(4 / 3),
                                                                              abs=1e-12)
        assert math.log(4 / 3) == pytest.approx(0.287682, abs=1e-6)

    def test_negative_pmi_clamped(self, toy_table):
        assert PpmiModel(toy_table).ppmi("dog", "chase", S) == 0.0

    def test_zero_joint(self, toy_table):
        assert PpmiModel(toy_table).ppmi("cat", "eat", S) == 0.0

    def test_empty_model(self):
        with pytest.raises(EmptyModelError):
            PpmiModel(accumulate_counts([])).ppmi("a", "b", S)

    def test_base_two(self, toy_table):
        p2 = PpmiModel(toy_table, log_base=2).ppmi("cat", "chase", S)
        assert p2 == pytest.approx(math.log2(4 / 3), abs=1e-12)

    def test_column(self, toy_table):
        m = PpmiModel(toy_table)
        assert m.column("chase", O) == {"cat": pytest.approx(math.log(4 / 3))}
        assert m.column("nope", O) == {}

    def test_independence_cell_is_zero(self):
        # c(x,y)*T == c(x)*c(y): 2*8 == 4*4
        cells = {S: {("x", "y"): 2, ("x", "z"): 2, ("w", "y"): 2, ("w", "z"): 2}}
        t = PairCountTable.from_cells(cells)
        assert PpmiModel(t).ppmi("x", "y", S) == 0.0


cell_tables = st.dictionaries(
    st.tuples(st.sampled_from("abcd"), st.sampled_from("vwx")),
    st.integers(1, 50), min_size=1, max_size=12,
)


@settings(max_examples=80, deadline=None)
@given(cell_tables, st.sampled_from([2.0, 10.0, 1.5]))
def test_base_covariance(cells, base):
    t = PairCountTable.from_cells({S: cells})
    e, b = PpmiModel(t), PpmiModel(t, log_base=base)
    for (n, v) in cells:
        assert abs(b.ppmi(n, v, S) - e.ppmi(n, v, S) / math.log(base)) < 1e-12


@settings(max_examples=80, deadline=None)
@given(cell_tables, st.integers(1, 30))
def test_monotone_in_joint_count(cells, bump):
    """Raising c(x,y) while holding c(x), c(y) and T fixed cannot lower PPMI.

    With marginals pinned the model is a function of the joint count alone;
    evaluate the closed form directly through a table rebuilt around the cell.
    """
    (n, v), c = next(iter(cells.items()))
    # place the cell inside a 2x2 block whose marginals stay constant
    big = c + bump + 5
    base = {(n, v): c, (n, "_o"): big - c, ("_o", v): big - c, ("_o", "_o"): big}
    more = {(n, v): c + bump, (n, "_o"): big - c - bump, ("_o", v): big - c - bump,
            ("_o", "_o"): big + bump}
    t0 = PairCountTable.from_cells({S: base})
    t1 = PairCountTable.from_cells({S: more})
    assert t0.noun_marginals[S][n] == t1.noun_marginals[S][n]
    assert t0.verb_marginals[S][v] == t1.verb_marginals[S][v]
    assert t0.total[S] == t1.total[S]
    assert PpmiModel(t1).ppmi(n, v, S) >= PpmiModel(t0).ppmi(n, v, S)


class TestCountsArtifact:
    def test_round_trip(self, toy_table):
        text = format_counts(toy_table)
        assert text.splitlines()[0] == "#role subj total 4"
        assert parse_counts(io.StringIO(text)) == toy_table

    def test_empty_round_trip(self):
        t = accumulate_counts([])
        assert parse_counts(io.StringIO(format_counts(t))) == t

    def test_format_exact(self, toy_table):
        assert format_counts(toy_table) == (
            "#role subj total 4\ncat\tchase\t1\ndog\tchase\t2\ndog\teat\t1\n"
            "#role obj total 4\ncat\tchase\t2\ndog\tchase\t1\ndog\teat\t1\n"
        )

    def test_inconsistent_total(self, toy_table):
        text = format_counts(toy_table).replace("dog\tchase\t2", "dog\tchase\t3")
        with pytest.raises(ArtifactError) as err:
            parse_counts(io.StringIO(text))
        assert err.value.line == 1

    @pytest.mark.parametrize("line,bad", [
        (2, "cat\tchase"),
        (2, "cat\tchase\tx"),
        (2, "cat\tchase\t-1"),
        (1, "#role verb total 4"),
    ])
    def test_malformed_lines(self, toy_table, line, bad):
        lines = format_counts(toy_table).splitlines()
        lines[line - 1] = bad
        with pytest.raises(ArtifactError) as err:
            parse_counts(io.StringIO("\n".join(lines) + "\n"))
        assert err.value.line == line

    def test_duplicate_cell(self):
        text = "#role subj total 2\na\tv\t1\na\tv\t1\n#role obj total 0\n"
        with pytest.raises(ArtifactError, match="duplicate"):
            parse_counts(io.StringIO(text))


def test_pairs_with_counter_match_stream():
    from collections import Counter
    pairs = toy_pairs() + [DepPair("cat", "eat", O)]
    assert accumulate_counts(Counter(pairs)) == accumulate_counts(pairs)
