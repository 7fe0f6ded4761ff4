"""Tight triangulations from spiderweb graphs and permutation decks."""

from __future__ import annotations

from .simplicial import FacetComplex, read_fct, write_fct
from .spiderweb import Params, PermutationPair, deck_conditions, make_deck, make_graph
from .assembly import build_complex, build_from_deck, boundary_of, orbit_representatives
from .zhomology import betti_z2, is_orientable, is_z2_tight_bruteforce
from .isomorphism import canonical_key, is_isomorphic
from .certify import certify_tight, betti_from_formula
from .search import SearchTask, search, family_count, family_generate

__version__ = "0.1.0"
