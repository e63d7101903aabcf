"""Exact 2-isogeny descent, torsion and root numbers for quadratic twists.

The modules build on each other in this order::

    arith -> quadfield -> curves -> torsion -> local -> search
          -> descent -> families -> rootnum -> classify -> cli
"""
from .curves import CurveModel, Point, TwoTorsionModel, twist, two_isogeny, dual_isogeny
from .descent import rank_bounds, descent_images, torsor_solvable
from .families import construct_torsion_curves, family_model
from .torsion import torsion_over_Q, torsion_over_quadratic

__version__ = "0.1.0"

__all__ = [
    "CurveModel",
    "Point",
    "TwoTorsionModel",
    "twist",
    "two_isogeny",
    "dual_isogeny",
    "rank_bounds",
    "descent_images",
    "torsor_solvable",
    "construct_torsion_curves",
    "family_model",
    "torsion_over_Q",
    "torsion_over_quadratic",
]
