"""Certified finite approximations of the Lagrange and Markov spectra L_K, M_K."""

from .contfrac import KContext, make_context
from .cylinders import CylinderSet, ResolutionTooSmall, build_cylinders
from .exact import FieldMismatch, Surd
from .graphs import ProductGraph, build_product
from .spectra import LAGRANGE, MARKOV, SpectrumApproximation, spectra_pair, spectrum

__all__ = [
    "FieldMismatch",
    "Surd",
    "KContext",
    "make_context",
    "CylinderSet",
    "ResolutionTooSmall",
    "build_cylinders",
    "ProductGraph",
    "build_product",
    "LAGRANGE",
    "MARKOV",
    "SpectrumApproximation",
    "spectrum",
    "spectra_pair",
]
