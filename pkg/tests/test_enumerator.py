import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import diagonally_heavy, random_symmetric, subsets
from zariski.delpezzo import intersection_matrix
from zariski.enumerator import (
    EnumerationStats,
    OracleLimitError,
    brute_force_posdef,
    count_posdef,
    enumerate_posdef,
    index_set,
    max_posdef_cardinality,
    set_less,
)
from zariski.exactalg import IntSymMatrix, is_positive_definite, principal_submatrix


def run(A, engine="incremental", **kw):
    seen = []
    stats = enumerate_posdef(A, seen.append, engine=engine, **kw)
    return seen, stats


def grown_family(A):
    """Positive definite sets by growing tuples and testing every minor (no determinant shortcut)."""
    found, frontier = [], [()]
    while frontier:
        T = frontier.pop()
        for j in range((T[-1] if T else 0) + 1, A.n + 1):
            S = T + (j,)
            if is_positive_definite(principal_submatrix(A, S)):
                found.append(S)
                frontier.append(S)
    return set(found)


def expected_det_evaluations(A, family=None):
    """Each positive definite prefix T (the empty one included) tests n - max T candidates."""
    family = grown_family(A) if family is None else family
    return A.n + sum(A.n - max(S) for S in family)


def neg_A(r, order="nested"):
    return -intersection_matrix(r, order).matrix


class TestSmallExamples:
    def test_one_by_one(self):
        seen, stats = run(IntSymMatrix([[1]]))
        assert seen == [(1,)]
        assert stats == EnumerationStats(1, 1, 1)

    def test_nothing_positive(self):
        seen, stats = run(IntSymMatrix.diagonal([-1, -1]))
        assert seen == [] and stats.sets_emitted == 0 and stats.max_cardinality == 0

    @pytest.mark.parametrize("engine", ["literal", "incremental"])
    def test_unit_block_order(self, engine):
        seen, stats = run(IntSymMatrix.diagonal([1, 1, -1]), engine)
        assert seen == [(1,), (1, 2), (2,)]
        assert stats.sets_emitted == 3 == 2**2 - 1
        # candidates: {1} {1,2} {1,2,3} {1,3} {2} {2,3} {3}
        assert stats.det_evaluations == 7

    def test_count_posdef_small_surfaces(self):
        assert count_posdef(neg_A(1)) == count_posdef(IntSymMatrix([[1]]))
        res = count_posdef(neg_A(1))
        assert (res.count, res.per_cardinality) == (1, {1: 1})
        res = count_posdef(neg_A(2))
        assert (res.count, res.per_cardinality) == (4, {1: 3, 2: 1})
        assert count_posdef(neg_A(4)).count == 75

    def test_count_unpacks(self):
        count, hist, stats = count_posdef(IntSymMatrix.identity(3))
        assert count == 7 and hist == {1: 3, 2: 3, 3: 1} and stats.det_evaluations == 7

    def test_max_cardinality(self):
        assert max_posdef_cardinality(IntSymMatrix.diagonal([-1, -1])) == 0
        assert max_posdef_cardinality(IntSymMatrix.diagonal([1, 1, -1])) == 2
        assert max_posdef_cardinality(neg_A(5)) == 5


class TestBruteForce:
    def test_examples(self):
        assert brute_force_posdef(IntSymMatrix([[1]])) == {(1,)}
        A = IntSymMatrix([[2, 1, 0], [1, 2, 0], [0, 0, -1]])
        assert brute_force_posdef(A) == {(1,), (2,), (1, 2)}
        assert len(brute_force_posdef(neg_A(3))) == 17

    def test_refuses_large_input(self):
        with pytest.raises(OracleLimitError):
            brute_force_posdef(IntSymMatrix.identity(21))
        with pytest.raises(OracleLimitError):
            brute_force_posdef(IntSymMatrix.identity(5), limit=4)


class TestOrder:
    def test_set_less_definition(self):
        assert set_less((1,), (1, 2))
        assert set_less((1, 2), (2,))
        assert set_less((1, 2), (1, 3))
        assert set_less((), (1,))
        assert not set_less((2,), (1, 5))
        assert not set_less((1, 2), (1, 2))

    @given(st.sets(st.integers(1, 6)), st.sets(st.integers(1, 6)))
    def test_set_less_is_strict_total(self, a, b):
        a, b = tuple(sorted(a)), tuple(sorted(b))
        if a == b:
            assert not set_less(a, b)
        else:
            assert set_less(a, b) != set_less(b, a)

    def test_index_set(self):
        assert index_set([3, 1]) == (1, 3)
        with pytest.raises(ValueError):
            index_set([1, 1])
        with pytest.raises(ValueError):
            index_set([0])
        with pytest.raises(ValueError):
            index_set([4], n=3)


class TestEngines:
    def test_literal_and_incremental_agree_on_random(self):
        rng = random.Random(11)
        for _ in range(60):
            n = rng.randint(1, 9)
            A = diagonally_heavy(rng, n) if rng.random() < 0.5 else random_symmetric(rng, n)
            assert run(A, "literal", check_assertions=True) == run(A)

    @pytest.mark.parametrize("r", [2, 3, 4, 5, 6])
    def test_agree_on_surfaces(self, r):
        assert run(neg_A(r), "literal", check_assertions=(r <= 5)) == run(neg_A(r))

    def test_unknown_engine(self):
        with pytest.raises(ValueError):
            enumerate_posdef(IntSymMatrix([[1]]), print, engine="fast")

    def test_callback_exception_propagates(self):
        def boom(S):
            raise KeyError(S)

        with pytest.raises(KeyError):
            enumerate_posdef(IntSymMatrix.identity(3), boom)

    def test_object_fallback_on_large_entries(self):
        rng = random.Random(5)
        for _ in range(20):
            base = diagonally_heavy(rng, 6)
            A = IntSymMatrix([[x * 10**12 for x in row] for row in base.rows])
            seen, stats = run(A)
            assert set(seen) == brute_force_posdef(A)
            assert seen == run(base)[0]

    def test_parallel_count_matches(self):
        A = neg_A(6)
        serial, parallel = count_posdef(A), count_posdef(A, workers=2)
        assert parallel.parallel and not serial.parallel
        assert (parallel.count, parallel.per_cardinality) == (serial.count, serial.per_cardinality)
        assert parallel.stats.det_evaluations == serial.stats.det_evaluations


class TestInvariants:
    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 9), st.integers(0, 2**32 - 1), st.booleans())
    def test_oracle_equivalence(self, n, seed, heavy):
        rng = random.Random(seed)
        A = diagonally_heavy(rng, n) if heavy else random_symmetric(rng, n)
        seen, stats = run(A)
        family = brute_force_posdef(A)
        assert set(seen) == family and len(seen) == len(family)
        assert stats.sets_emitted == len(family) <= stats.det_evaluations <= 2**n - 1
        assert stats.max_cardinality == max(map(len, family), default=0) <= n
        assert stats.det_evaluations == expected_det_evaluations(A, family)
        assert all(set_less(a, b) for a, b in zip(seen, seen[1:]))
        assert all(sub in family for S in family for sub in subsets(S))
        assert all(is_positive_definite(principal_submatrix(A, S)) for S in seen)

    def test_identity_exhausts_all_subsets(self):
        seen, stats = run(IntSymMatrix.identity(8))
        assert stats.det_evaluations == stats.sets_emitted == 2**8 - 1

    def test_deterministic(self):
        assert run(neg_A(5)) == run(neg_A(5))

    @pytest.mark.parametrize("order, expected", [("nested", 15907), ("listing", 17142)])
    def test_x6_det_evaluations(self, order, expected):
        # frozen from the prefix-count formula, checked here against both engines
        A = neg_A(6, order)
        assert expected_det_evaluations(A) == expected
        assert run(A)[1] == run(A, "literal")[1] == EnumerationStats(expected, 2763, 6)

    def test_printed_27_line_matrix(self, reference_a6):
        seen, stats = run(-reference_a6)
        assert set(seen) == grown_family(-reference_a6)
        assert stats == EnumerationStats(15907, 2763, 6)
        assert stats.det_evaluations < 2**27 // 8000
