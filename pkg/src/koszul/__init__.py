"""Exact-arithmetic bar/cobar duality for finite dg categories and pointed
curved coalgebras, twisted chains of finite simplicial sets, dg nerves and
twisted (co)module functors.

All computations are over Q or F_p, with deterministic output suitable for
golden-file testing.
"""

from .exactlin import QQ, GF2, GF5, PrimeField, Rationals, GradedSpace, LinearMap, \
    FiniteComplex, koszul_tensor, kernel_and_rank, homology_dims

__all__ = [
    "QQ", "GF2", "GF5", "PrimeField", "Rationals", "GradedSpace", "LinearMap",
    "FiniteComplex", "koszul_tensor", "kernel_and_rank", "homology_dims",
]
