"""Rank fusion by prestige propagation over a document-similarity graph."""

try:
    from ._simfuse import (
        SignificanceResult,
        average_precision,
        fuse,
        methods,
        precision_at,
        similarity,
        stem,
        tokenize,
        wilcoxon,
    )
except ImportError:  # module built outside the package, e.g. a plain CMake build
    from _simfuse import (
        SignificanceResult,
        average_precision,
        fuse,
        methods,
        precision_at,
        similarity,
        stem,
        tokenize,
        wilcoxon,
    )

__all__ = [
    "SignificanceResult",
    "average_precision",
    "fuse",
    "methods",
    "precision_at",
    "similarity",
    "stem",
    "tokenize",
    "wilcoxon",
]
