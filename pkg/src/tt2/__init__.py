"""tt2: a checker for a two-level type theory (strict equality with UIP
alongside fibrant equality with J and univalence), plus a generator for
the types of Reedy-fibrant n-truncated semi-simplicial types and spines.
"""

from .core import Context, Layer, Signature, Sort
from .elab import Config, Elaborator, elaborate_signature
from .prelude import initial_signature

__all__ = [
    "Config",
    "Context",
    "Elaborator",
    "Layer",
    "Signature",
    "Sort",
    "elaborate_signature",
    "initial_signature",
]
