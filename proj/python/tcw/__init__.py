"""Prime event structures, event-based logic and the true-concurrency spectrum."""

from ._tcw import (
    Pes,
    TcwError,
    check,
    classify,
    compile_term,
    distinguish,
    equiv,
    free_vars,
    load_pes,
    normalize_formula,
    parse_pes,
    spectrum,
)

__all__ = [
    "Pes",
    "TcwError",
    "check",
    "classify",
    "compile_term",
    "distinguish",
    "equiv",
    "free_vars",
    "load_pes",
    "normalize_formula",
    "parse_pes",
    "spectrum",
]
