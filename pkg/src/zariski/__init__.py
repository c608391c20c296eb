"""Zariski chambers on Del Pezzo surfaces.

Counts the Zariski chambers of the blow-up X_r of P^2 in r <= 8 general
points by enumerating negative definite principal submatrices of the
intersection matrix of its (-1)-curves, and builds exact interior
representatives of individual chambers.
"""
from .chambers import (
    ChamberCensus,
    NotAChamberError,
    NotAmpleError,
    ZariskiRepresentative,
    census,
    chamber_representative,
    chambers_on_subset,
    verify_tables,
)
from .delpezzo import (
    CurveClass,
    DivisorClass,
    SurfaceModel,
    anticanonical,
    closed_form_entry,
    diophantine_classes,
    generate_curves,
    intersection_matrix,
    pair,
    star,
)
from .enumerator import (
    EnumerationStats,
    brute_force_posdef,
    count_posdef,
    enumerate_posdef,
    max_posdef_cardinality,
)
from .exactalg import (
    IntSymMatrix,
    det_exact,
    is_negative_definite,
    is_positive_definite,
    principal_submatrix,
    solve_exact,
)

__version__ = "0.1.0"
