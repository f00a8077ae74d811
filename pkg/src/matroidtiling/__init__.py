"""Matroid base polytopes, hypersimplex tilings, and their extension calculus."""

from .core import (
    Graph,
    Matroid,
    SetFamilyResult,
    SetMap,
    base_intersection,
    base_union,
    combine,
    direct_sum,
    direct_sum_all,
    ground_range,
    labels_of,
    mask_of,
    matroid_intersection,
    matroid_union,
    pullback,
    pushforward,
    transport,
)

__all__ = [
    "Graph",
    "Matroid",
    "SetFamilyResult",
    "SetMap",
    "base_intersection",
    "base_union",
    "combine",
    "direct_sum",
    "direct_sum_all",
    "ground_range",
    "labels_of",
    "mask_of",
    "matroid_intersection",
    "matroid_union",
    "pullback",
    "pushforward",
    "transport",
]
