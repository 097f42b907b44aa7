"""Mixed-norm anisotropic Besov / Lizorkin-Triebel quasi-norms of
trigonometric polynomials, and empirical checks of the classical
Nikol'skij-Plancherel-Polya and Sobolev-type inequalities."""

from .grid import GridSpec, SampledField, from_spectrum, to_spectrum
from .io import read_field, write_field
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "GridSpec",
    "SampledField",
    "from_spectrum",
    "to_spectrum",
    "read_field",
    "write_field",
]
