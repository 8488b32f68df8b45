"""Exact computations around mod-p Hilbert modular form weights.

Submodules:
    embeddings      embedding sets Sigma, phi and nu
    weight_lattice  Hasse weights, cones, lattice index, character classes
    local_galois    inertial shapes and weight decisions for ramified quadratic fields
    kisin           rank-two Kisin module shapes, extension counts, phi-morphisms
    quadfield       exact real quadratic field arithmetic
    qexp            formal truncated q-expansions and Hecke-type operators
    acceptance      the acceptance suite behind ``hmf selftest``
    cli             the ``hmf`` command
"""

from .embeddings import EmbeddingIndex, EmbeddingSet, PrimeDatum, ramified_quadratic
from .errors import ConfigError, HmfError
from .weight_lattice import WeightVector

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "EmbeddingIndex",
    "EmbeddingSet",
    "HmfError",
    "PrimeDatum",
    "WeightVector",
    "ramified_quadratic",
    "__version__",
]
