"""Exact-arithmetic engine for Auslander-Reiten quivers of finite acyclic
quivers: knitting, mesh categories, and standardness criteria."""

__version__ = "0.1.0"

from .exactlin import QQ, Field, Mat, PrimeField, kernel_basis, mat_mul, rank, solve
from .quiver import Quiver, Walk, family, validate
from .rep import Rep, Morph, HomBasis, hom_basis, end_report, projective, injective

__all__ = [
    "QQ",
    "Field",
    "Mat",
    "PrimeField",
    "kernel_basis",
    "mat_mul",
    "rank",
    "solve",
    "Quiver",
    "Walk",
    "family",
    "validate",
    "Rep",
    "Morph",
    "HomBasis",
    "hom_basis",
    "end_report",
    "projective",
    "injective",
]
