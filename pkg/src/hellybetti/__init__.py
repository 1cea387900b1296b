"""Z2 homology, van Kampen obstructions, Helly numbers and constrained chain maps."""

from __future__ import annotations

from .chainmaps import SimplicialChainMap, is_homological_almost_embedding
from .complexes import SimplicialComplex, barycentric_subdivision, closure, deleted_product
from .config import Budget
from .construction import ConstrainedChainMap, build_ccm, verify_constrained
from .errors import (
    BudgetExceeded,
    DegenerateConfiguration,
    HellyBettiError,
    InputError,
    InsufficientFamily,
    InvariantViolation,
)
from .gf2 import betti, betti_numbers, is_boundary
from .helly import SetFamily, helly_number, hypothesis_audit
from .obstruction import obstruction_nonzero

__version__ = "0.1.0"

__all__ = [
    "Budget",
    "BudgetExceeded",
    "ConstrainedChainMap",
    "DegenerateConfiguration",
    "HellyBettiError",
    "InputError",
    "InsufficientFamily",
    "InvariantViolation",
    "SetFamily",
    "SimplicialChainMap",
    "SimplicialComplex",
    "barycentric_subdivision",
    "betti",
    "betti_numbers",
    "build_ccm",
    "closure",
    "deleted_product",
    "helly_number",
    "hypothesis_audit",
    "is_boundary",
    "is_homological_almost_embedding",
    "obstruction_nonzero",
    "verify_constrained",
]
