"""Monotone reweighted solver for nonsmooth nonconvex composite least squares.

The heavy lifting lives in the compiled extension; this package re-exports it.
"""

from ._monocomp import (  # noqa: F401
    CompositeProblem,
    ContinuationSchedule,
    FistaConfig,
    GistConfig,
    LinearSolveOptions,
    Penalty,
    PenaltyKind,
    SmoothedPenalty,
    SolveReport,
    SparseMatrix,
    StageTrace,
    continuation_solve,
    default_start,
    fista_solve,
    gallery,
    gist_solve,
    inner_solve,
)

__all__ = [
    "CompositeProblem",
    "ContinuationSchedule",
    "FistaConfig",
    "GistConfig",
    "LinearSolveOptions",
    "Penalty",
    "PenaltyKind",
    "SmoothedPenalty",
    "SolveReport",
    "SparseMatrix",
    "StageTrace",
    "continuation_solve",
    "default_start",
    "fista_solve",
    "gallery",
    "gist_solve",
    "inner_solve",
]
