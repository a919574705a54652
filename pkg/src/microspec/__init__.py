"""Numerical microlocal analysis at desk scale.

Estimates wavefront sets of model distributions from the decay of
windowed, scaled Fourier transforms, and the analogous correlation
spectrum of n-point functionals given by translation-invariant kernels,
together with the structural checks (cone bounds, symmetry, inclusion)
that relate the two.
"""

__version__ = "0.1.0"

from .grids import (
    Grid,
    Window,
    LambdaLadder,
    DirectionSet,
    make_bump,
    make_ladder,
    make_direction_set,
    scaled_family,
)
from .decay import DecayFit, fit_decay, polynomial_prefactor_adjust

__all__ = [
    "Grid",
    "Window",
    "LambdaLadder",
    "DirectionSet",
    "make_bump",
    "make_ladder",
    "make_direction_set",
    "scaled_family",
    "DecayFit",
    "fit_decay",
    "polynomial_prefactor_adjust",
    "__version__",
]
