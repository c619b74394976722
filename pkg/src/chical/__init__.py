"""Exact symbolic calculus for the chiral de Rham vertex algebra of a relative affine space."""

from .superjet import DU, DX, PD, P, U, X, State, render
from .vertex import nprod, ope, wick_nprod

__all__ = ["State", "render", "X", "P", "DX", "PD", "U", "DU", "nprod", "wick_nprod", "ope"]
