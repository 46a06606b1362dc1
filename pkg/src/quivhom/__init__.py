"""Homology of bound quiver algebras: Hochschild, cyclic, simplicial, pi_1."""

from .errors import QuivhomError, ValidationError, BudgetExceeded, TruncationError, ComputationError
from .quiver_core import (
    Quiver, Path, BoundQuiverAlgebra, parse_quiver_doc, complete_rewriting,
    algebra_from, load_algebra, load_corpus, corpus_doc, corpus_names, corner_algebra, semi_normed_basis,
)
from .hochschild import Blocks, Bimodule, HochschildComplexes, hochschild_dims
from .oriented import (
    OrientationWitness, verify_orientation, find_orientations, mv_hochschild, hochart_check,
    gerstenhaber_compat_check,
)
from .cyclic import cyclic_dims, connes_check, mv_cyclic, connes_mv_grid
from .simplicial import simplicial_homology, simplicial_cohomology, mv_simplicial
from .pi1 import minimal_relations, pi1_presentation, abelianization, vk_check, h1_schurian

__version__ = "0.1.0"
