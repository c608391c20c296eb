"""Structural self-checks bundled with the ``verify`` command."""
from __future__ import annotations

from itertools import combinations

from .chambers import Report, chamber_representative
from .delpezzo import (
    CURVE_COUNTS,
    closed_form_entry,
    diophantine_classes,
    generate_curves,
    intersection_matrix,
    pair,
)
from .enumerator import brute_force_posdef, enumerate_posdef


def class_invariants(max_r: int = 8) -> Report:
    report = Report()
    for r in range(1, max_r + 1):
        curves = generate_curves(r)
        bad = [
            c.label
            for c in curves
            if c.d**2 - sum(x * x for x in c.m) != -1 or 3 * c.d - sum(c.m) != 1
        ]
        report.add(f"r={r} class equations", 0, len(bad), note=", ".join(bad[:5]))
        same = sorted(c.vector for c in curves) == sorted(c.vector for c in diophantine_classes(r))
        report.add(f"r={r} diophantine oracle", True, same)
    return report


def closed_forms() -> Report:
    curves = intersection_matrix(8).curves
    mismatches = sum(pair(a, b) != closed_form_entry(a, b) for a in curves for b in curves)
    report = Report()
    report.add("A_8 closed forms (mismatches)", 0, mismatches)
    return report


def twenty_seven_lines() -> Report:
    A = intersection_matrix(6).matrix
    rows = A.rows
    report = Report()
    report.add("A_6 diagonal all -1", True, all(rows[i][i] == -1 for i in range(A.n)))
    off = {rows[i][j] for i in range(A.n) for j in range(A.n) if i != j}
    report.add("A_6 off-diagonal in {0,1}", True, off <= {0, 1})
    report.add("A_6 ten 1's per row", True, all(row.count(1) == 10 for row in rows))
    return report


def oracle_equivalence(max_r: int = 8, limit: int = 16) -> Report:
    report = Report()
    for r in range(1, max_r + 1):
        if CURVE_COUNTS[r] > limit:
            break
        A = -intersection_matrix(r).matrix
        seen: list[tuple[int, ...]] = []
        enumerate_posdef(A, seen.append)
        report.add(f"r={r} enumerator == brute force", True, set(seen) == brute_force_posdef(A, limit))
    return report


def hereditary(max_r: int = 5) -> Report:
    report = Report()
    for r in range(1, max_r + 1):
        seen: list[tuple[int, ...]] = []
        enumerate_posdef(-intersection_matrix(r).matrix, seen.append)
        family = set(seen)
        closed = all(
            sub in family
            for S in family
            for k in range(1, len(S))
            for sub in combinations(S, k)
        )
        report.add(f"r={r} supports hereditary", True, closed)
    return report


def representatives(max_r: int = 4) -> Report:
    report = Report()
    for r in range(1, max_r + 1):
        seen: list[tuple[int, ...]] = []
        enumerate_posdef(-intersection_matrix(r).matrix, seen.append)
        failures = 0
        for S in seen:
            try:
                chamber_representative(r, S)
            except Exception:
                failures += 1
        report.add(f"r={r} representatives valid", len(seen), len(seen) - failures)
    return report


def run_all(max_r: int = 8, oracle_limit: int = 16) -> Report:
    report = Report()
    report.extend(class_invariants(max_r))
    report.extend(closed_forms())
    report.extend(twenty_seven_lines())
    report.extend(oracle_equivalence(max_r, oracle_limit))
    report.extend(hereditary(min(max_r, 5)))
    report.extend(representatives(min(max_r, 4)))
    return report
