"""Finite-category engine for span-based dualization of fibrations,
fibration taxonomy, straightening, and the mate calculus."""

from . import errors
from .fincat import (
    Budget,
    DEFAULT_BUDGET,
    Equivalence,
    FinCat,
    FinFunctor,
    NatTrans,
    core,
    enumerate_functors,
    equivalent_categories,
    equivalent_over_base,
    opposite,
    product,
    pullback,
)

__all__ = [
    "Budget",
    "DEFAULT_BUDGET",
    "Equivalence",
    "FinCat",
    "FinFunctor",
    "NatTrans",
    "core",
    "enumerate_functors",
    "equivalent_categories",
    "equivalent_over_base",
    "errors",
    "opposite",
    "product",
    "pullback",
]
