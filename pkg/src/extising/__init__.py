"""Exact extended-Ising anyon models, braiding gates and surface-code twists."""

__version__ = "0.1.0"

from .cyclo import CycloNumber  # noqa: E402
from .model import AnyonModel, build_extended_ising, validate_model  # noqa: E402

__all__ = ["CycloNumber", "AnyonModel", "build_extended_ising", "validate_model", "__version__"]
