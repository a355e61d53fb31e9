"""Finite relational structures, arc consistency, width 1, and the
Banach-Tarski graph construction at desk scale."""

from .structures import (DEFAULT_GUARDS, Guards, Hom, SizeGuardError, Structure, StructureError,
                         gaifman_components, is_forest, is_hom, iso_check, make_structure, power,
                         quotient, validate)
from .dsl import DSLError, parse_structure, parse_word, read_structure, serialize_structure
from .solver import ac_lists, hom_lists, solve_hom
from .polywidth import (PolyWitness, cyclic_polymorphism, ts_polymorphism, u_structure,
                        width1_witness)
from .btlab import (Fragment, GeneratorTable, TreeWord, build_dset, build_fragment, collapse_check,
                    compute_b, invariant_point_hom, tree_hom)

__version__ = "0.1.0"
