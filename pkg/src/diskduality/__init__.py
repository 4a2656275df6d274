"""Quantum duality maps for triangulated polygons.

The package computes in quantum tori over Z[w, w^-1] (with ``q = w^4``),
the Kauffman-bracket skein algebra of a marked disk, quantum cluster
charts attached to triangulations, tropical laminations, the duality maps
into the Poisson and double charts, and the quantum dilogarithm.
"""

from .coeff import OmegaLaurent, OmegaRational
from .duality import IAResult, IDResult, i_a_q, i_d_q, n_l, pi_q, structure_constants
from .lamination import ALamination, DLamination, enumerate_alaminations, phi
from .polygon import Triangulation, chord, enumerate_triangulations
from .skein import Multicurve, SkeinElement, superpose, to_chart
from .torus import SkewForm, TorusElement

__version__ = "0.1.0"

__all__ = [
    "ALamination",
    "DLamination",
    "IAResult",
    "IDResult",
    "Multicurve",
    "OmegaLaurent",
    "OmegaRational",
    "SkeinElement",
    "SkewForm",
    "TorusElement",
    "Triangulation",
    "chord",
    "enumerate_alaminations",
    "enumerate_triangulations",
    "i_a_q",
    "i_d_q",
    "n_l",
    "phi",
    "pi_q",
    "structure_constants",
    "superpose",
    "to_chart",
]
