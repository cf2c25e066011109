"""Geometric and symbolic (n_k) configuration engine."""

from ._nkconf import (
    Configuration,
    Descriptor,
    NkError,
    SearchResult,
    construct,
    cross_ratio,
    evaluate,
    from_json,
    load,
    pencils,
    search,
    verify,
)

__all__ = [
    "Configuration",
    "Descriptor",
    "NkError",
    "SearchResult",
    "construct",
    "cross_ratio",
    "evaluate",
    "from_json",
    "load",
    "pencils",
    "search",
    "verify",
]
