"""Fixed point Floer homology of iterated Dehn twists, with product and coproduct."""

from ._core import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
