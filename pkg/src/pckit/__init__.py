"""pckit: G-valued pseudocharacters of finite groups over finite rings."""

from .coeffring import (GF, RingElem, RingSpec, Zmod, dual_numbers, embed_extension, invert,
                        teichmueller)
from .cohomology import (GModule, ad_module, centralizer_points, cohomology_dims,
                         gl1_pseudo_tangent, rep_tangent_dim, sp_projection)
from .errors import PckitError
from .groups import FiniteGroup, Representation, named_group
from .invariants import InvariantSymbol, evaluate, generator_set, parse_symbol
from .io import Session, load_problem
from .matgroups import (GL, GSp, GO, O, SL, SO, GroupKind, MatElem, Sp, char_poly_coeffs,
                        membership, similitude, symplectic_transpose)
from .pseudochar import (PseudoChar, RawTable, det_law_eval, direct_sum, dual, emerson_lambda,
                         equals, from_rep, kernel, pair_type_embed, pushforward, quotient_factor,
                         restrict, sp_direct_sum, tensor, verify_axioms)
from .reconstruct import (brute_conjugacy, is_completely_reducible, jordan_holder, semisimplify,
                          symplectic_decompose)
from .words import FreeHom, Word, decompose_invgen, substitute

__version__ = "0.1.0"

__all__ = [
    "GF", "Zmod", "dual_numbers", "RingSpec", "RingElem", "invert", "teichmueller",
    "embed_extension",
    "GroupKind", "GL", "SL", "Sp", "GSp", "O", "SO", "GO", "MatElem", "membership",
    "char_poly_coeffs", "similitude", "symplectic_transpose",
    "Word", "FreeHom", "substitute", "decompose_invgen",
    "InvariantSymbol", "generator_set", "evaluate", "parse_symbol",
    "FiniteGroup", "Representation", "named_group",
    "PseudoChar", "RawTable", "from_rep", "equals", "verify_axioms", "kernel", "quotient_factor",
    "restrict", "dual", "direct_sum", "tensor", "sp_direct_sum", "pair_type_embed",
    "pushforward", "emerson_lambda", "det_law_eval",
    "brute_conjugacy", "jordan_holder", "semisimplify", "is_completely_reducible",
    "symplectic_decompose",
    "GModule", "ad_module", "cohomology_dims", "rep_tangent_dim", "centralizer_points",
    "gl1_pseudo_tangent", "sp_projection",
    "Session", "load_problem", "PckitError",
]
