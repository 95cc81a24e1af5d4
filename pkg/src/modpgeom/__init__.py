"""Mod-p multisets, incidence codes and linear sets in small Galois geometries."""

from .galois import (
    Field,
    FieldExtension,
    LinearizedPoly,
    Params,
    default_modulus,
    extension_field,
    gaussian_binomial,
    get_field,
    lucas_binom,
)

__version__ = "0.1.0"
