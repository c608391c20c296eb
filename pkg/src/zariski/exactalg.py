"""Exact integer and rational linear algebra.

Everything here works on Python integers (or :class:`fractions.Fraction`),
so determinant signs and definiteness decisions are never subject to
rounding.
"""
from __future__ import annotations

import re
from collections.abc import Iterable, Sequence
from fractions import Fraction

import numpy as np

__all__ = [
    "IntSymMatrix",
    "MatrixFormatError",
    "SingularMatrixError",
    "principal_submatrix",
    "det_exact",
    "leading_principal_minors",
    "is_positive_definite",
    "is_negative_definite",
    "solve_exact",
    "parse_matrix",
    "format_matrix",
]

_INT64_SAFE = 2**62


class SingularMatrixError(ValueError):
    pass


class MatrixFormatError(ValueError):
    """Malformed or asymmetric matrix text; carries a 1-based position."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class IntSymMatrix:
    """Immutable square symmetric matrix with unbounded integer entries.

    Indexing with ``M[i, j]`` is 0-based like numpy; index *sets* handed to
    :func:`principal_submatrix` and the enumerator are 1-based.
    """

    __slots__ = ("_rows", "_hash")

    def __init__(self, rows: Iterable[Iterable[int]]):
        data = tuple(tuple(_as_int(x) for x in row) for row in rows)
        n = len(data)
        if n < 1:
            raise ValueError("matrix must have dimension n >= 1")
        for i, row in enumerate(data):
            if len(row) != n:
                raise ValueError(f"row {i + 1} has {len(row)} entries, expected {n}")
        for i in range(n):
            for j in range(i + 1, n):
                if data[i][j] != data[j][i]:
                    raise ValueError(
                        f"matrix is not symmetric: entry ({i + 1},{j + 1}) = {data[i][j]} "
                        f"but ({j + 1},{i + 1}) = {data[j][i]}"
                    )
        self._rows = data
        self._hash = None

    @classmethod
    def diagonal(cls, values: Sequence[int]) -> IntSymMatrix:
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def identity(cls, n: int) -> IntSymMatrix:
        return cls.diagonal([1] * n)

    @classmethod
    def block_diagonal(cls, *blocks: IntSymMatrix) -> IntSymMatrix:
        n = sum(b.n for b in blocks)
        rows = [[0] * n for _ in range(n)]
        off = 0
        for b in blocks:
            for i in range(b.n):
                for j in range(b.n):
                    rows[off + i][off + j] = b[i, j]
            off += b.n
        return cls(rows)

    @property
    def n(self) -> int:
        return len(self._rows)

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self._rows

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        return self._rows[i][j]

    def __len__(self) -> int:
        return len(self._rows)

    def __neg__(self) -> IntSymMatrix:
        return IntSymMatrix([[-x for x in row] for row in self._rows])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntSymMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._rows)
        return self._hash

    def __repr__(self) -> str:
        return f"IntSymMatrix({[list(r) for r in self._rows]})"

    def max_abs(self) -> int:
        return max(abs(x) for row in self._rows for x in row)

    def to_numpy(self) -> np.ndarray:
        """int64 array when every entry fits comfortably, object array otherwise."""
        dtype = np.int64 if self.max_abs() < _INT64_SAFE else object
        return np.array(self._rows, dtype=dtype)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]


def _as_int(x) -> int:
    if isinstance(x, (bool, np.bool_)):
        raise TypeError("boolean matrix entries are not allowed")
    if isinstance(x, (int, np.integer)):
        return int(x)
    raise TypeError(f"matrix entries must be integers, got {type(x).__name__}")


def _check_index_set(S: Sequence[int], n: int) -> tuple[int, ...]:
    idx = tuple(S)
    if not idx:
        raise ValueError("index set must be nonempty")
    for a, b in zip(idx, idx[1:]):
        if a >= b:
            raise ValueError(f"index set must be strictly increasing: {idx}")
    if idx[0] < 1 or idx[-1] > n:
        raise ValueError(f"index set {idx} is out of range 1..{n}")
    return idx


def principal_submatrix(A: IntSymMatrix, S: Sequence[int]) -> IntSymMatrix:
    """The principal submatrix on the 1-based, ascending index set ``S``."""
    idx = [i - 1 for i in _check_index_set(S, A.n)]
    rows = A.rows
    return IntSymMatrix([[rows[i][j] for j in idx] for i in idx])


def _rows_of(A) -> list[list[int]]:
    if isinstance(A, IntSymMatrix):
        return [list(r) for r in A.rows]
    return [[int(x) for x in row] for row in A]


def det_exact(A) -> int:
    """Determinant by fraction-free (Bareiss) elimination with row pivoting.

    Accepts an :class:`IntSymMatrix` or any square nested sequence of ints.
    """
    M = _rows_of(A)
    n = len(M)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for p in range(k + 1, n):
                if M[p][k] != 0:
                    M[k], M[p] = M[p], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = M[k][k]
        row_k = M[k]
        for i in range(k + 1, n):
            row_i = M[i]
            f = row_i[k]
            for j in range(k + 1, n):
                # exact by Sylvester's identity
                row_i[j] = (pivot * row_i[j] - f * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * M[n - 1][n - 1]


def leading_principal_minors(A: IntSymMatrix) -> list[int]:
    """All n leading principal minors, each computed as its own determinant."""
    return [det_exact([row[:k] for row in A.rows[:k]]) for k in range(1, A.n + 1)]


def is_positive_definite(A: IntSymMatrix) -> bool:
    """Sylvester's criterion: every leading principal minor is > 0.

    Bareiss elimination without pivoting produces the leading principal
    minors as its successive pivots, so one pass suffices; it stops at the
    first pivot that is not positive (a zero minor counts as not definite).
    """
    M = _rows_of(A)
    n = len(M)
    prev = 1
    for k in range(n):
        pivot = M[k][k]
        if pivot <= 0:
            return False
        row_k = M[k]
        for i in range(k + 1, n):
            row_i = M[i]
            f = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - f * row_k[j]) // prev
        prev = pivot
    return True


def is_negative_definite(A: IntSymMatrix) -> bool:
    return is_positive_definite(-A)


def solve_exact(S, b: Sequence[int | Fraction]) -> list[Fraction]:
    """Solve ``S x = b`` over the rationals by Gauss-Jordan elimination.

    Raises :class:`SingularMatrixError` if ``S`` is singular.
    """
    rows = _rows_of(S)
    n = len(rows)
    if len(b) != n:
        raise ValueError(f"right-hand side has length {len(b)}, expected {n}")
    M = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        M[col] = [x / p for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]


_TOKEN = re.compile(r"\S+")


def parse_matrix(text: str) -> IntSymMatrix:
    """Parse the plain matrix format.

    The first token is the dimension n, followed by n*n integers in row-major
    order. Tokens are whitespace-separated and ``#`` starts a comment that runs
    to the end of the line, so the usual "one row per line" layout works too.
    """
    tokens: list[tuple[str, int, int]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        for m in _TOKEN.finditer(line):
            tokens.append((m.group(), lineno, m.start() + 1))
    if not tokens:
        raise MatrixFormatError("empty input, expected dimension n")

    def integer(tok: tuple[str, int, int]) -> int:
        s, line, col = tok
        try:
            return int(s)
        except ValueError:
            raise MatrixFormatError(f"expected an integer, got {s!r}", line, col) from None

    n = integer(tokens[0])
    if n < 1:
        raise MatrixFormatError(f"dimension must be >= 1, got {n}", tokens[0][1], tokens[0][2])
    body = tokens[1:]
    if len(body) != n * n:
        last = tokens[-1]
        raise MatrixFormatError(
            f"expected {n * n} matrix entries for n = {n}, found {len(body)}", last[1], None
        )
    values = [integer(t) for t in body]
    rows = [values[i * n:(i + 1) * n] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                _, line, col = body[j * n + i]
                raise MatrixFormatError(
                    f"matrix is not symmetric: entry ({j + 1},{i + 1}) = {rows[j][i]} "
                    f"differs from ({i + 1},{j + 1}) = {rows[i][j]}",
                    line,
                    col,
                )
    return IntSymMatrix(rows)


def format_matrix(A: IntSymMatrix) -> str:
    lines = [str(A.n)]
    lines.extend(" ".join(str(x) for x in row) for row in A.rows)
    return "\n".join(lines) + "\n"
