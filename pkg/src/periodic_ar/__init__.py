"""Exact F_p computations with m-periodic complexes of projectives, the
compression functor F_m, and Auslander-Reiten quivers."""

from .algebra import PathAlgebra, load_algebra, load_algebra_file
from .complexes import ChainMap, Complex, shift, stalk, j_complex
from .periodic import PeriodicComplex, compress, k_complex, unroll

__version__ = "0.1.0"

__all__ = ["PathAlgebra", "load_algebra", "load_algebra_file", "ChainMap", "Complex",
           "shift", "stalk", "j_complex", "PeriodicComplex", "compress", "k_complex",
           "unroll"]
