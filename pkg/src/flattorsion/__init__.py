"""Flat metric connections with skew or vectorial torsion: numerical verification toolkit."""

__version__ = "0.1.0"

from .errors import DegenerateInputError, InvalidInputError, NotFoundError, StencilError  # noqa: E402
from .multilinear import AltForm, hodge, inner, interior, wedge  # noqa: E402

__all__ = [
    "AltForm", "hodge", "inner", "interior", "wedge",
    "DegenerateInputError", "InvalidInputError", "NotFoundError", "StencilError",
    "__version__",
]
