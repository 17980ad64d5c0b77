"""Exact computations with gradings of linear categories presented by quivers
with relations: validity and connectedness, smash products and their
covering properties, morphisms of gradings and universal gradings.
"""
from . import errors, grading, grpkit, linrep, morph, scalars, schur, smash
from .grading import Grading, validate_grading
from .grpkit import AbelianGroup, GroupHom
from .io import Model, parse_model
from .linrep import PresentedCategory, build_category

__version__ = "0.1.0"

__all__ = [
    "AbelianGroup",
    "Grading",
    "GroupHom",
    "Model",
    "PresentedCategory",
    "build_category",
    "errors",
    "grading",
    "grpkit",
    "linrep",
    "morph",
    "parse_model",
    "scalars",
    "schur",
    "smash",
    "validate_grading",
]
