import random
from itertools import combinations
from pathlib import Path

import pytest

from zariski.exactalg import IntSymMatrix, parse_matrix

DATA = Path(__file__).parent / "data"


def random_symmetric(rng: random.Random, n: int, lo: int = -3, hi: int = 3) -> IntSymMatrix:
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = rng.randint(lo, hi)
    return IntSymMatrix(rows)


def diagonally_heavy(rng: random.Random, n: int) -> IntSymMatrix:
    """Random symmetric matrices with many definite principal submatrices."""
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = rng.randint(1, 4)
        for j in range(i + 1, n):
            rows[i][j] = rows[j][i] = rng.choice((-1, 0, 0, 1))
    return IntSymMatrix(rows)


def subsets(S):
    return [sub for k in range(1, len(S)) for sub in combinations(S, k)]


@pytest.fixture(scope="session")
def reference_a6() -> IntSymMatrix:
    return parse_matrix((DATA / "a6_27_lines.txt").read_text())
