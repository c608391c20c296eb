"""Negative curves on the blow-up X_r of P^2 in r <= 8 general points.

Divisor classes are written in the basis (H, E_1, ..., E_r) as ``d H - sum m_i E_i``
and stored as the pair ``(d, m)``. The pairing is ``H^2 = 1``, ``E_i^2 = -1``,
all other products zero, hence ``(d, m).(d', m') = d d' - sum m_i m'_i``.
The exceptional curve E_i therefore has ``d = 0`` and ``m = -e_i``.
"""
from __future__ import annotations

import re
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations

from .exactalg import IntSymMatrix, format_matrix

__all__ = [
    "CURVE_COUNTS",
    "DEGREE_BOUNDS",
    "FAMILIES",
    "ORDERS",
    "CurveClass",
    "DivisorClass",
    "SurfaceModel",
    "star",
    "pair",
    "generate_curves",
    "closed_form_entry",
    "intersection_matrix",
    "diophantine_classes",
    "anticanonical",
    "embed",
    "parse_divisor",
    "format_divisor",
]

CURVE_COUNTS = {1: 1, 2: 3, 3: 6, 4: 10, 5: 16, 6: 27, 7: 56, 8: 240}
# largest degree d of a non-exceptional (-1)-curve
DEGREE_BOUNDS = {1: 2, 2: 2, 3: 2, 4: 2, 5: 2, 6: 2, 7: 3, 8: 6}
FAMILIES = ("E", "C1", "C2", "C3", "C4", "C5", "C6")
ORDERS = ("nested", "listing")


def _check_r(r: int) -> int:
    if isinstance(r, bool) or not isinstance(r, int) or not 1 <= r <= 8:
        raise ValueError(f"r must be an integer in 1..8, got {r!r}")
    return r


@dataclass(frozen=True)
class DivisorClass:
    """A class ``d H - sum m_i E_i`` with integer or rational coordinates."""

    r: int
    d: int | Fraction
    m: tuple[int | Fraction, ...]

    def __post_init__(self):
        if len(self.m) != self.r:
            raise ValueError(f"expected {self.r} multiplicities, got {len(self.m)}")

    @property
    def vector(self) -> tuple:
        return (self.d, *self.m)

    def __add__(self, other: DivisorClass) -> DivisorClass:
        _same_r(self, other)
        return DivisorClass(self.r, self.d + other.d, tuple(a + b for a, b in zip(self.m, other.m)))

    def scale(self, c: int | Fraction) -> DivisorClass:
        return DivisorClass(self.r, c * self.d, tuple(c * x for x in self.m))

    def __str__(self) -> str:
        return format_divisor(self)


@dataclass(frozen=True)
class CurveClass:
    """A (-1)-curve class on X_r, tagged with its family and index tuple.

    ``family`` is one of :data:`FAMILIES`, or ``None`` for classes produced by
    the Diophantine search, which knows nothing about families.
    """

    r: int
    d: int
    m: tuple[int, ...]
    family: str | None = None
    indices: tuple[int, ...] = ()

    @property
    def vector(self) -> tuple[int, ...]:
        return (self.d, *self.m)

    @property
    def is_exceptional(self) -> bool:
        return self.d == 0

    @property
    def label(self) -> str:
        f, idx = self.family, self.indices
        if f is None:
            return "(" + str(self.d) + "; " + ",".join(map(str, self.m)) + ")"
        if f == "E":
            return f"E{idx[0]}"
        if f == "C3" and len(idx) == 2:
            return f"C3_{idx[0]}_{idx[1]}"
        if not idx:
            return f
        return f + "_" + "".join(map(str, idx))

    def as_divisor(self) -> DivisorClass:
        return DivisorClass(self.r, self.d, self.m)

    def __str__(self) -> str:
        return self.label


def _same_r(a, b) -> None:
    if a.r != b.r:
        raise ValueError(f"classes live on different surfaces (r = {a.r} and r = {b.r})")


def pair(c1, c2):
    """Intersection number ``d1 d2 - sum m1_i m2_i``."""
    _same_r(c1, c2)
    return c1.d * c2.d - sum(a * b for a, b in zip(c1.m, c2.m))


def star(a: Sequence[int], b: Sequence[int]) -> int:
    """``sum sign(a_mu) sign(b_nu) [|a_mu| == |b_nu|]`` over all index pairs."""
    if any(x == 0 for x in a) or any(y == 0 for y in b):
        raise ValueError("star product entries must be nonzero")
    return sum(
        (1 if x > 0 else -1) * (1 if y > 0 else -1)
        for x in a
        for y in b
        if abs(x) == abs(y)
    )


def _curve(r: int, d: int, m: list[int], family: str, indices: tuple[int, ...]) -> CurveClass:
    return CurveClass(r, d, tuple(m), family, indices)


def _listing(r: int) -> Iterator[CurveClass]:
    pts = range(1, r + 1)
    for i in pts:
        m = [0] * r
        m[i - 1] = -1
        yield _curve(r, 0, m, "E", (i,))
    for i, j in combinations(pts, 2):
        m = [0] * r
        m[i - 1] = m[j - 1] = 1
        yield _curve(r, 1, m, "C1", (i, j))
    if r >= 5:
        # conics 2H - E + (sum of E_i over the r - 5 points it misses)
        for idx in combinations(pts, r - 5):
            m = [1] * r
            for i in idx:
                m[i - 1] = 0
            yield _curve(r, 2, m, "C2", idx)
    if r == 7:
        for i in pts:
            m = [1] * r
            m[i - 1] = 2
            yield _curve(r, 3, m, "C3", (i,))
    if r == 8:
        for i, j in permutations(pts, 2):
            m = [1] * r
            m[i - 1], m[j - 1] = 2, 0
            yield _curve(r, 3, m, "C3", (i, j))
        for idx in combinations(pts, 3):
            m = [1] * r
            for i in idx:
                m[i - 1] = 2
            yield _curve(r, 4, m, "C4", idx)
        for i, j in combinations(pts, 2):
            m = [2] * r
            m[i - 1] = m[j - 1] = 1
            yield _curve(r, 5, m, "C5", (i, j))
        for i in pts:
            m = [2] * r
            m[i - 1] = 3
            yield _curve(r, 6, m, "C6", (i,))


def _level(c: CurveClass) -> int:
    """Largest point index the class involves (it lives on X_level)."""
    return max(i + 1 for i, x in enumerate(c.m) if x != 0)


def generate_curves(r: int, order: str = "listing") -> list[CurveClass]:
    """All (-1)-curves of X_r.

    ``order="listing"``: E_1..E_r, then the families C1, C2, ..., C6 present
    for this r, each with lexicographically ordered indices.

    ``order="nested"``: the same curves grouped by the largest blown-up point
    they involve (stable within a group). The curves of X_s then come first,
    so A_s is a leading principal block of A_r; this is the row order of the
    printed 27-line matrix.
    """
    _check_r(r)
    curves = list(_listing(r))
    if order == "listing":
        return curves
    if order == "nested":
        return sorted(curves, key=_level)
    raise ValueError(f"unknown curve order {order!r}; expected one of {ORDERS}")


# Closed forms for A_8, keyed by the ordered family pair. Each entry maps the
# index tuples (first curve, second curve) to the intersection number.
_CLOSED_FORMS = {
    ("E", "E"): lambda i, l: star((-i[0],), l),
    ("E", "C1"): lambda i, l: star(i, l),
    ("E", "C2"): lambda i, l: 1 - star(i, l),
    ("E", "C3"): lambda i, l: 1 + star(i, (l[0], -l[1])),
    ("E", "C4"): lambda i, l: 1 + star(i, l),
    ("E", "C5"): lambda i, l: 2 - star(i, l),
    ("E", "C6"): lambda i, l: 2 + star(i, l),
    ("C1", "C1"): lambda i, l: 1 - star(i, l),
    ("C1", "C2"): lambda i, l: star(i, l),
    ("C1", "C3"): lambda i, l: 1 + star(i, (-l[0], l[1])),
    ("C1", "C4"): lambda i, l: 2 - star(i, l),
    ("C1", "C5"): lambda i, l: 1 + star(i, l),
    ("C1", "C6"): lambda i, l: 2 - star(i, l),
    ("C2", "C2"): lambda i, l: 2 - star(i, l),
    ("C2", "C3"): lambda i, l: 1 + star(i, (l[0], -l[1])),
    ("C2", "C4"): lambda i, l: star(i, l),
    ("C2", "C5"): lambda i, l: 2 - star(i, l),
    ("C2", "C6"): lambda i, l: 1 + star(i, l),
    ("C3", "C3"): lambda i, l: 1 + star((-i[0], i[1]), (l[0], -l[1])),
    ("C3", "C4"): lambda i, l: 1 + star((-i[0], i[1]), l),
    ("C3", "C5"): lambda i, l: 1 + star((i[0], -i[1]), l),
    ("C3", "C6"): lambda i, l: 1 + star((-i[0], i[1]), l),
    ("C4", "C4"): lambda i, l: 2 - star(i, l),
    ("C4", "C5"): lambda i, l: star(i, l),
    ("C4", "C6"): lambda i, l: 1 - star(i, l),
    ("C5", "C5"): lambda i, l: 1 - star(i, l),
    ("C5", "C6"): lambda i, l: star(i, l),
    ("C6", "C6"): lambda i, l: star((-i[0],), l),
}


def closed_form_entry(c1: CurveClass, c2: CurveClass) -> int:
    """Intersection number on X_8 from the family-pair closed forms.

    Independent of :func:`pair`: only family tags and index tuples are used.
    """
    if c1.r != 8 or c2.r != 8:
        raise ValueError("closed forms are stated for X_8 only")
    key = (c1.family, c2.family)
    if key in _CLOSED_FORMS:
        return _CLOSED_FORMS[key](c1.indices, c2.indices)
    if key[::-1] in _CLOSED_FORMS:
        return _CLOSED_FORMS[key[::-1]](c2.indices, c1.indices)
    raise RuntimeError(f"no closed form for family pair {key}")


def embed(c, r: int):
    """The same class viewed on X_r (r >= c.r) by padding with zero multiplicities."""
    if r < c.r:
        raise ValueError(f"cannot embed a class of X_{c.r} into X_{r}")
    pad = (0,) * (r - c.r)
    if isinstance(c, CurveClass):
        return CurveClass(r, c.d, c.m + pad)
    return DivisorClass(r, c.d, tuple(c.m) + pad)


@dataclass(frozen=True)
class SurfaceModel:
    r: int
    curves: tuple[CurveClass, ...]
    matrix: IntSymMatrix
    order: str = "nested"

    @property
    def labels(self) -> list[str]:
        return [c.label for c in self.curves]

    @property
    def n(self) -> int:
        return len(self.curves)

    def index_of(self, label: str) -> int:
        """1-based row of the curve with the given label."""
        for i, c in enumerate(self.curves, start=1):
            if c.label == label:
                return i
        raise KeyError(f"no curve labelled {label!r} on X_{self.r}")

    def support_from_labels(self, labels: Sequence[str]) -> tuple[int, ...]:
        idx = sorted(self.index_of(s.strip()) for s in labels)
        if len(set(idx)) != len(idx):
            raise ValueError("support lists a curve twice")
        return tuple(idx)

    def labels_of(self, S: Sequence[int]) -> list[str]:
        return [self.curves[i - 1].label for i in S]

    def sidecar_text(self) -> str:
        return "\n".join(self.labels) + "\n"

    def to_text(self) -> str:
        """Matrix in the plain format; curve labels follow as comment lines."""
        out = [format_matrix(self.matrix).rstrip("\n")]
        out.append(f"# curves of X_{self.r}, one per row ({self.order} order)")
        out.extend(f"# {lab}" for lab in self.labels)
        return "\n".join(out) + "\n"


def _pairing_matrix(curves: Sequence[CurveClass]) -> IntSymMatrix:
    return IntSymMatrix([[pair(a, b) for b in curves] for a in curves])


@lru_cache(maxsize=None)
def intersection_matrix(r: int, order: str = "nested") -> SurfaceModel:
    """The intersection matrix A_r of all (-1)-curves of X_r.

    For r < 8 the result is checked against the principal submatrix of A_8
    on the curves whose classes involve only H, E_1, ..., E_r.
    """
    _check_r(r)
    curves = generate_curves(r, order)
    model = SurfaceModel(r, tuple(curves), _pairing_matrix(curves), order)
    if r < 8:
        big = intersection_matrix(8, order)
        where = {c.vector: i for i, c in enumerate(big.curves)}
        rows = [where[embed(c, 8).vector] for c in curves]
        for a, i in enumerate(rows):
            for b, j in enumerate(rows):
                if model.matrix[a, b] != big.matrix[i, j]:
                    raise RuntimeError(
                        f"A_{r} disagrees with A_8 at ({curves[a].label}, {curves[b].label})"
                    )
    return model


def diophantine_classes(r: int) -> list[CurveClass]:
    """Exhaustive solutions of d^2 - sum m_i^2 = -1, 3d - sum m_i = 1.

    Scans 1 <= d <= DEGREE_BOUNDS[r] and 0 <= m_i <= d, then appends the r
    exceptional classes. Independent of the family list.
    """
    _check_r(r)
    found: list[CurveClass] = []
    for d in range(1, DEGREE_BOUNDS[r] + 1):
        lin, quad = 3 * d - 1, d * d + 1
        m = [0] * r

        def fill(pos: int, s1: int, s2: int) -> None:
            if pos == r:
                if s1 == lin and s2 == quad:
                    found.append(CurveClass(r, d, tuple(m)))
                return
            slots = r - pos
            for x in range(d + 1):
                t1, t2 = s1 + x, s2 + x * x
                if t1 > lin or t2 > quad:
                    break
                # remaining entries are at most d each
                if t1 + (slots - 1) * d < lin:
                    continue
                m[pos] = x
                fill(pos + 1, t1, t2)
            m[pos] = 0

        fill(0, 0, 0)
    for i in range(r):
        m = [0] * r
        m[i] = -1
        found.append(CurveClass(r, 0, tuple(m)))
    return found


def anticanonical(r: int) -> DivisorClass:
    """-K = 3H - E_1 - ... - E_r."""
    _check_r(r)
    return DivisorClass(r, 3, (1,) * r)


def hyperplane(r: int) -> DivisorClass:
    return DivisorClass(r, 1, (0,) * r)


def _fmt_coeff(c, symbol: str, first: bool) -> str:
    sign = "-" if c < 0 else "+"
    a = abs(c)
    if a == 1:
        body = symbol
    elif isinstance(a, Fraction) and a.denominator != 1:
        body = f"({a}){symbol}"
    else:
        body = f"{a}{symbol}"
    if first:
        return body if sign == "+" else "-" + body
    return f" {sign} {body}"


def format_divisor(D) -> str:
    """Human-readable ``3H - E2`` style rendering; rationals in parentheses."""
    terms = [(D.d, "H")] + [(-x, f"E{i}") for i, x in enumerate(D.m, start=1)]
    out = ""
    for c, sym in terms:
        if c == 0:
            continue
        if isinstance(c, Fraction) and c.denominator == 1:
            c = int(c)
        out += _fmt_coeff(c, sym, not out)
    return out or "0"


_TERM = re.compile(r"([+-]?)\s*(\d+(?:/\d+)?)?\s*\*?\s*(H|K|E\d*)")


def parse_divisor(text: str, r: int) -> DivisorClass:
    """Parse ``3H - E1 - 2E2``, ``-K``, ``2H - E`` or the vector form ``d; m1,...,mr``.

    ``E`` alone means E_1 + ... + E_r and ``K`` the canonical class -3H + E.
    """
    _check_r(r)
    s = text.strip()
    if ";" in s:
        head, _, tail = s.partition(";")
        m = tuple(Fraction(x) for x in tail.replace(",", " ").split())
        return _normalise(DivisorClass(r, Fraction(head), m))
    d = Fraction(0)
    m = [Fraction(0)] * r
    pos = 0
    compact = s.replace(" ", "")
    if not compact:
        raise ValueError("empty divisor")
    while pos < len(compact):
        mt = _TERM.match(compact, pos)
        if not mt or mt.end() == pos:
            raise ValueError(f"cannot parse divisor {text!r} at {compact[pos:]!r}")
        sign = -1 if mt.group(1) == "-" else 1
        if pos > 0 and not mt.group(1):
            raise ValueError(f"missing sign before {compact[pos:]!r} in {text!r}")
        coeff = sign * Fraction(mt.group(2) or 1)
        sym = mt.group(3)
        if sym == "H":
            d += coeff
        elif sym == "K":
            d -= 3 * coeff
            m = [x - coeff for x in m]
        elif sym == "E":
            m = [x - coeff for x in m]
        else:
            i = int(sym[1:])
            if not 1 <= i <= r:
                raise ValueError(f"{sym} does not exist on X_{r}")
            m[i - 1] -= coeff
        pos = mt.end()
    return _normalise(DivisorClass(r, d, tuple(m)))


def _normalise(D: DivisorClass) -> DivisorClass:
    def f(x):
        x = Fraction(x)
        return int(x) if x.denominator == 1 else x

    return DivisorClass(D.r, f(D.d), tuple(f(x) for x in D.m))
