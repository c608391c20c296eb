"""Backtracking enumeration of positive definite principal submatrices.

Two engines walk the same search tree and produce the same emissions in the
same order with the same statistics:

``literal``
    The loop exactly as written in the algorithm: a single set variable ``S``
    and a cursor ``k``, one fresh Bareiss determinant per test. Slow but
    transparent; optional runtime checks of both loop assertions.

``incremental``
    The same walk written as a depth-first recursion over positive definite
    prefixes ``T``. For a prefix it keeps ``det A_T``, the adjugate of ``A_T``
    and the bordered determinants ``det A_{T+j}`` for all later ``j``, and
    updates them with fraction-free (Sylvester identity) steps, vectorised
    with numpy. Each candidate still costs one determinant test.

In both engines the candidate ``S = T + {j}`` with ``T`` already positive
definite is decided by the sign of ``det A_S`` alone.
"""
from __future__ import annotations

import os
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .exactalg import IntSymMatrix, det_exact, is_positive_definite, principal_submatrix

__all__ = [
    "IndexSet",
    "EnumerationStats",
    "CountResult",
    "OracleLimitError",
    "index_set",
    "set_less",
    "enumerate_posdef",
    "count_posdef",
    "brute_force_posdef",
    "max_posdef_cardinality",
]

# Strictly increasing tuple of 1-based indices.
IndexSet = tuple[int, ...]
Visitor = Callable[[IndexSet], object]

_INT64_LIMIT = 2**31


class OracleLimitError(ValueError):
    pass


@dataclass(frozen=True)
class EnumerationStats:
    det_evaluations: int = 0
    sets_emitted: int = 0
    max_cardinality: int = 0


@dataclass(frozen=True)
class CountResult:
    count: int
    per_cardinality: dict[int, int] = field(default_factory=dict)
    stats: EnumerationStats = EnumerationStats()
    parallel: bool = False

    def __iter__(self):
        # allows ``count, hist, stats = count_posdef(A)``
        return iter((self.count, self.per_cardinality, self.stats))


def index_set(indices: Sequence[int], n: int | None = None) -> IndexSet:
    """Validate and normalise an index set (sorted, duplicate-free, 1-based)."""
    s = tuple(sorted(int(i) for i in indices))
    if len(set(s)) != len(s):
        raise ValueError(f"duplicate indices in {tuple(indices)}")
    if s and s[0] < 1:
        raise ValueError(f"indices are 1-based, got {s[0]}")
    if s and n is not None and s[-1] > n:
        raise ValueError(f"index {s[-1]} out of range 1..{n}")
    return s


def set_less(S: Sequence[int], T: Sequence[int]) -> bool:
    """The total order ``S < T`` used in the correctness argument.

    ``S < T`` iff for some l >= 0 both sets agree on {1..l} and
    min(S minus {1..l}) < min(T minus {1..l}), with min of the empty set being
    minus infinity.
    """
    S, T = set(S), set(T)
    top = max(S | T, default=0)
    neg_inf = float("-inf")
    for ell in range(top + 1):
        head = set(range(1, ell + 1))
        if S & head != T & head:
            break
        s_min = min(S - head, default=neg_inf)
        t_min = min(T - head, default=neg_inf)
        if s_min < t_min:
            return True
    return False


def enumerate_posdef(
    A: IntSymMatrix,
    visit: Visitor,
    *,
    engine: str = "incremental",
    check_assertions: bool = False,
) -> EnumerationStats:
    """Call ``visit(S)`` for every nonempty ``S`` with ``A_S`` positive definite.

    Sets arrive in increasing order for :func:`set_less`. ``det_evaluations``
    counts executions of the determinant-sign test. Exceptions raised by
    ``visit`` propagate and abandon the enumeration.
    """
    if engine == "literal":
        return _literal(A, visit, check_assertions)
    if engine == "incremental":
        return _Incremental(A).run(visit)
    raise ValueError(f"unknown engine {engine!r}")


def _literal(A: IntSymMatrix, visit: Visitor, check: bool) -> EnumerationStats:
    n = A.n
    rows = A.rows

    def det(S: list[int]) -> int:
        return det_exact([[rows[i - 1][j - 1] for j in S] for i in S])

    def posdef(S: list[int]) -> bool:
        return not S or is_positive_definite(principal_submatrix(A, S))

    evaluations = emitted = largest = 0
    k = 1
    S = [1]
    while S:
        if check:
            assert k == S[-1] and posdef(S[:-1]), (k, S)
        evaluations += 1
        if det(S) > 0:
            emitted += 1
            largest = max(largest, len(S))
            visit(tuple(S))
        else:
            S.remove(k)
        if check:
            assert (not S or k >= S[-1]) and posdef(S), (k, S)
        if k < n:
            k += 1
            S.append(k)
        else:
            if S and S[-1] == k:
                S.remove(k)
            if S:
                k = S.pop()
                k += 1
                S.append(k)
    return EnumerationStats(evaluations, emitted, largest)


class _Incremental:
    """Depth-first walk with fraction-free bordered-determinant updates.

    Node state for a positive definite prefix ``T`` (0-based, max ``t``):
    ``D = det A_T``, ``adj = adj(A_T)`` and ``d[j] = det A_{T+j}`` for
    ``j > t``. Passing to the child ``T + j`` uses, with ``u = adj A_{T,j}``
    and ``b_i = D a_ij - A_{i,T} u`` (the determinant of A with rows T+i and
    columns T+j),

        det A_{T+j+i} = (d[j] d[i] - b_i^2) / D
        adj(A_{T+j})  = [[(d[j] adj + u u^T) / D, -u], [-u^T, D]]

    and every division is exact.
    """

    def __init__(self, A: IntSymMatrix):
        self.n = A.n
        self.A = A.to_numpy()
        self.a_max = max(A.max_abs(), 1)
        if self._dtype_for(0, self.a_max) is object:
            self.A = self.A.astype(object)
        self.evaluations = 0
        self.emitted = 0
        self.hist: dict[int, int] = {}
        # branch-and-bound for the largest size only; counts are then partial
        self.bound_only = False
        self.best = 0

    def _dtype_for(self, m: int, peak: int):
        # keeps every intermediate of the child update below 2**63
        if peak * self.a_max * (1 + m * m * self.a_max) < _INT64_LIMIT:
            return np.int64
        return object

    def root(self):
        diag = np.diagonal(self.A).copy()
        return [], 1, np.zeros((0, 0), dtype=self.A.dtype), diag

    def run(self, visit: Visitor | None) -> EnumerationStats:
        T, D, adj, d = self.root()
        self._node(T, D, adj, d, 0, visit)
        return self.stats()

    def run_subtree(self, j: int) -> None:
        """Count the subtree below the root child ``{j}`` (0-based), excluding the root's own tests."""
        T, D, adj, d = self.root()
        if d[j] > 0:
            self._emit_and_descend(T, D, adj, d, 0, j, None)

    def stats(self) -> EnumerationStats:
        largest = max(self.hist, default=0)
        return EnumerationStats(self.evaluations, self.emitted, largest)

    def _node(self, T, D, adj, d, start, visit):
        self.evaluations += self.n - start
        positive = np.flatnonzero(d > 0)
        if self.bound_only and len(T) + len(positive) <= self.best:
            return
        for p in positive:
            self._emit_and_descend(T, D, adj, d, start, start + int(p), visit)

    def _emit_and_descend(self, T, D, adj, d, start, j, visit):
        size = len(T) + 1
        self.best = max(self.best, size)
        self.emitted += 1
        self.hist[size] = self.hist.get(size, 0) + 1
        if visit is not None:
            visit(tuple(i + 1 for i in T) + (j + 1,))
        if j == self.n - 1:
            return
        A = self.A
        p = j - start
        dj = d[p]
        m = len(T)
        later = slice(j + 1, self.n)
        if m:
            u = adj @ A[T, j]
            b = D * A[later, j] - A[later, T] @ u
        else:
            u = None
            b = A[later, j] * D
        child_d = (dj * d[p + 1:] - b * b) // D
        child_adj = np.empty((m + 1, m + 1), dtype=adj.dtype)
        if m:
            child_adj[:m, :m] = (dj * adj + np.outer(u, u)) // D
            child_adj[:m, m] = -u
            child_adj[m, :m] = -u
        child_adj[m, m] = D
        child_D = dj
        if adj.dtype != object:
            peak = max(
                abs(int(child_D)),
                int(np.abs(child_d).max()) if child_d.size else 0,
                int(np.abs(child_adj).max()),
            )
            if self._dtype_for(m + 1, peak) is object:
                child_adj = child_adj.astype(object)
                child_d = child_d.astype(object)
                child_D = int(child_D)
        self._node(T + [j], child_D, child_adj, child_d, j + 1, visit)


def _count_subtree(args) -> tuple[int, int, dict[int, int]]:
    rows, j = args
    eng = _Incremental(IntSymMatrix(rows))
    eng.run_subtree(j)
    return eng.evaluations, eng.emitted, eng.hist


def count_posdef(A: IntSymMatrix, *, workers: int = 1) -> CountResult:
    """Count positive definite principal submatrices, histogrammed by size.

    With ``workers > 1`` the search is split by the smallest element of S
    across processes; counts and histogram are unchanged, and the result is
    flagged ``parallel=True`` because emission order is then not observed.
    """
    if workers <= 1:
        eng = _Incremental(A)
        eng.run(None)
        hist = dict(sorted(eng.hist.items()))
        return CountResult(eng.emitted, hist, eng.stats())

    eng = _Incremental(A)
    _, _, _, diag = eng.root()
    firsts = [int(j) for j in np.flatnonzero(diag > 0)]
    evaluations = A.n
    emitted = 0
    hist: dict[int, int] = {}
    rows = A.tolist()
    workers = min(workers, os.cpu_count() or 1, max(len(firsts), 1))
    # heaviest subtrees (small first element) go out first
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for ev, em, h in pool.map(_count_subtree, [(rows, j) for j in firsts]):
            evaluations += ev
            emitted += em
            for size, c in h.items():
                hist[size] = hist.get(size, 0) + c
    hist = dict(sorted(hist.items()))
    stats = EnumerationStats(evaluations, emitted, max(hist, default=0))
    return CountResult(emitted, hist, stats, parallel=True)


def brute_force_posdef(A: IntSymMatrix, limit: int = 20) -> set[IndexSet]:
    """Test every nonempty subset with the full minor criterion (oracle)."""
    if A.n > limit:
        raise OracleLimitError(f"brute force refused: n = {A.n} exceeds limit {limit}")
    found: set[IndexSet] = set()
    idx = range(1, A.n + 1)
    for size in range(1, A.n + 1):
        for S in combinations(idx, size):
            if is_positive_definite(principal_submatrix(A, S)):
                found.add(S)
    return found


def max_posdef_cardinality(A: IntSymMatrix) -> int:
    """Largest |S| with A_S positive definite (0 if there is none).

    Same walk as the enumeration, but a prefix T whose positive candidates
    cannot lift it above the best size found so far is not expanded.
    """
    eng = _Incremental(A)
    eng.bound_only = True
    eng.run(None)
    return eng.best
