from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from zariski.delpezzo import (
    CURVE_COUNTS,
    CurveClass,
    DivisorClass,
    anticanonical,
    closed_form_entry,
    diophantine_classes,
    embed,
    format_divisor,
    generate_curves,
    intersection_matrix,
    pair,
    parse_divisor,
    star,
)
from zariski.exactalg import parse_matrix


def by_label(r):
    return {c.label: c for c in generate_curves(r)}


class TestStar:
    def test_examples(self):
        assert star((1,), (1,)) == 1
        assert star((-1,), (1,)) == -1
        assert star((1, 2), (2, 3)) == 1

    def test_zero_entry_rejected(self):
        with pytest.raises(ValueError):
            star((0,), (1,))

    @given(
        st.lists(st.integers(-8, 8).filter(bool), min_size=1, max_size=3),
        st.lists(st.integers(-8, 8).filter(bool), min_size=1, max_size=3),
    )
    def test_symmetric(self, a, b):
        assert star(a, b) == star(b, a)


class TestGenerateCurves:
    def test_small(self):
        assert [c.label for c in generate_curves(1)] == ["E1"]
        curves = generate_curves(2)
        assert [c.label for c in curves] == ["E1", "E2", "C1_12"]
        assert curves[2].vector == (1, 1, 1)

    @pytest.mark.parametrize("r", range(1, 9))
    def test_counts_and_equations(self, r):
        curves = generate_curves(r)
        assert len(curves) == CURVE_COUNTS[r]
        for c in curves:
            assert c.d**2 - sum(x * x for x in c.m) == -1
            assert 3 * c.d - sum(c.m) == 1
            if c.family == "E":
                assert c.d == 0 and sorted(c.m) == [-1] + [0] * (r - 1)
            else:
                assert c.d >= 1 and min(c.m) >= 0

    def test_family_split_r8(self):
        sizes = Counter(c.family for c in generate_curves(8))
        assert [sizes[f] for f in ("E", "C1", "C2", "C3", "C4", "C5", "C6")] == [8, 28, 56, 56, 56, 28, 8]

    @pytest.mark.parametrize(
        "r, split",
        [(5, {"E": 5, "C1": 10, "C2": 1}), (6, {"E": 6, "C1": 15, "C2": 6}), (7, {"E": 7, "C1": 21, "C2": 21, "C3": 7})],
    )
    def test_family_split(self, r, split):
        assert Counter(c.family for c in generate_curves(r)) == split

    def test_listing_order(self):
        labels = [c.label for c in generate_curves(8)]
        firsts = [labels.index(x) for x in ("E1", "C1_12", "C2_123", "C3_1_2", "C4_123", "C5_12", "C6_1")]
        assert firsts == sorted(firsts)
        assert labels[labels.index("C3_1_2") + 1] == "C3_1_3"
        assert labels[labels.index("C3_1_8") + 1] == "C3_2_1"

    def test_labels_and_classes(self):
        assert by_label(5)["C2"].vector == (2, 1, 1, 1, 1, 1)
        assert by_label(7)["C3_4"].vector == (3, 1, 1, 1, 2, 1, 1, 1)
        c = by_label(8)["C3_1_2"]  # 3H - E - E1 + E2
        assert c.vector == (3, 2, 0, 1, 1, 1, 1, 1, 1)
        assert by_label(8)["C6_1"].vector == (6, 3, 2, 2, 2, 2, 2, 2, 2)

    def test_nested_order_is_permutation(self):
        for r in range(1, 9):
            a = generate_curves(r, "listing")
            b = generate_curves(r, "nested")
            assert sorted(c.vector for c in a) == sorted(c.vector for c in b)

    @pytest.mark.parametrize("bad", [0, 9, -1, 2.0, True])
    def test_range(self, bad):
        with pytest.raises(ValueError):
            generate_curves(bad)
        with pytest.raises(ValueError):
            generate_curves(3, order="random")


class TestPair:
    def test_examples(self):
        L3 = by_label(3)
        assert pair(L3["E1"], L3["E1"]) == -1
        assert pair(L3["C1_12"], L3["C1_13"]) == 0
        assert pair(by_label(5)["C2"], by_label(5)["C2"]) == -1

    def test_mismatched_surfaces(self):
        with pytest.raises(ValueError):
            pair(by_label(2)["E1"], by_label(3)["E1"])

    def test_anticanonical(self):
        assert anticanonical(1) == DivisorClass(1, 3, (1,))
        assert pair(anticanonical(5), by_label(5)["C2"]) == 1
        assert pair(anticanonical(8), by_label(8)["C6_1"]) == 1
        for r in range(1, 9):
            assert all(pair(anticanonical(r), c) == 1 for c in generate_curves(r))


class TestClosedForms:
    def test_examples(self):
        L = by_label(8)
        assert closed_form_entry(L["E1"], L["E1"]) == -1
        assert closed_form_entry(L["C1_12"], L["C5_12"]) == 3
        assert closed_form_entry(L["C4_123"], L["C4_123"]) == -1

    def test_agree_with_pairing_on_all_of_a8(self):
        curves = generate_curves(8)
        assert all(pair(a, b) == closed_form_entry(a, b) for a in curves for b in curves)

    def test_only_x8(self):
        L = by_label(3)
        with pytest.raises(ValueError):
            closed_form_entry(L["E1"], L["E2"])

    def test_unknown_family(self):
        c = CurveClass(8, 1, (1, 1, 0, 0, 0, 0, 0, 0))
        with pytest.raises(RuntimeError):
            closed_form_entry(c, by_label(8)["E1"])


class TestIntersectionMatrix:
    def test_a2(self):
        model = intersection_matrix(2)
        assert model.labels == ["E1", "E2", "C1_12"]
        assert model.matrix.tolist() == [[-1, 0, 1], [0, -1, 1], [1, 1, -1]]

    def test_a6_structure(self):
        A = intersection_matrix(6).matrix
        assert A.n == 27
        for i, row in enumerate(A.rows):
            assert row[i] == -1
            assert row.count(1) == 10 and row.count(0) == 16
            assert sum(row) == 9

    def test_a6_matches_printed_matrix(self, reference_a6):
        assert intersection_matrix(6).matrix == reference_a6

    def test_a6_listing_order_is_a_relabelling(self, reference_a6):
        A = intersection_matrix(6, "listing").matrix
        assert sorted(map(sorted, A.rows)) == sorted(map(sorted, reference_a6.rows))

    def test_a8(self):
        A = intersection_matrix(8).matrix
        assert A.n == 240
        off = {A[i, j] for i in range(240) for j in range(240) if i != j}
        assert off == {0, 1, 2, 3}
        L = by_label(8)
        assert pair(L["C1_12"], L["C5_12"]) == 3

    @pytest.mark.parametrize("r", range(1, 8))
    def test_leading_block_of_a8(self, r):
        A8 = intersection_matrix(8).matrix
        Ar = intersection_matrix(r).matrix
        assert Ar.tolist() == [list(row[: Ar.n]) for row in A8.rows[: Ar.n]]

    @pytest.mark.parametrize("r", range(1, 8))
    def test_submatrix_under_embedding_listing(self, r):
        big = intersection_matrix(8, "listing")
        pos = {c.vector: i for i, c in enumerate(big.curves)}
        small = intersection_matrix(r, "listing")
        rows = [pos[embed(c, 8).vector] for c in small.curves]
        assert small.matrix.tolist() == [[big.matrix[i, j] for j in rows] for i in rows]

    def test_text_round_trip(self):
        model = intersection_matrix(3)
        assert parse_matrix(model.to_text()) == model.matrix
        assert model.sidecar_text().split() == model.labels

    def test_label_lookup(self):
        model = intersection_matrix(8)
        i = model.index_of("C3_1_2")
        assert model.curves[i - 1].label == "C3_1_2"
        assert model.support_from_labels(["C3_1_2", "E1"]) == tuple(sorted((i, model.index_of("E1"))))
        with pytest.raises(KeyError):
            model.index_of("C7_1")


class TestDiophantine:
    def test_small(self):
        assert [c.vector for c in diophantine_classes(1)] == [(0, -1)]
        assert sorted(c.vector for c in diophantine_classes(2)) == [(0, -1, 0), (0, 0, -1), (1, 1, 1)]
        assert len(diophantine_classes(5)) == 16

    @pytest.mark.parametrize("r", range(1, 9))
    def test_matches_generated(self, r):
        found = [c.vector for c in diophantine_classes(r)]
        assert len(found) == len(set(found))
        assert set(found) == {c.vector for c in generate_curves(r)}


class TestDivisorText:
    @pytest.mark.parametrize(
        "text, vector",
        [
            ("3H - E1 - E2", (3, 1, 1)),
            ("-K", (3, 1, 1)),
            ("2H-E", (2, 1, 1)),
            ("3; 1, 1", (3, 1, 1)),
            ("H", (1, 0, 0)),
            ("7/2H - 1/2E1", (Fraction(7, 2), Fraction(1, 2), 0)),
        ],
    )
    def test_parse(self, text, vector):
        assert parse_divisor(text, 2).vector == vector

    @pytest.mark.parametrize("text", ["", "3X", "E3", "3H E1"])
    def test_parse_errors(self, text):
        with pytest.raises(ValueError):
            parse_divisor(text, 2)

    def test_format(self):
        assert format_divisor(DivisorClass(2, 3, (0, 1))) == "3H - E2"
        assert format_divisor(DivisorClass(2, 0, (0, 0))) == "0"
        assert format_divisor(DivisorClass(2, Fraction(5, 2), (Fraction(-1, 2), 2))) == "(5/2)H + (1/2)E1 - 2E2"
