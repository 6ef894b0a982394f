"""
associahedra

The associahedral operad K, its comparison with the Tamari poset,
An-monoidal coherence checking and rectification to a strict monoidal
category.
"""

from .categories import Category, DiscreteCategory, FinCat, PosetCategory
from .coherence import (AnAlgebra, AnData, KAlgebra, StrictAlgebra, an_from_theta,
                        check_action_compatibility, check_an_axioms, compare_an_data,
                        strict_algebra, theta_from_an)
from .directed import ainfty_from_directed, check_directed_hypotheses, check_right_nesting_identities
from .exceptions import (ActionAxiomViolation, AssociahedraError, CoherenceViolation,
                         CubeNotCommuting, HypothesisViolation)
from .kposet import KMorphism, covers, decompose, enumerate_words, f_vector, gamma, leq
from .rectify import MonoidalCategory, RootedKTree, build_MC, functor_E, functor_I
from .tamari import fiber, lambda_mor, lambda_obj, max_preimage, min_preimage, tamari_leq
from .wordtree import ID, ZERO, ParenWord, parse, render

__version__ = '1.0.0'

__all__ = [
    'Category', 'DiscreteCategory', 'FinCat', 'PosetCategory',
    'AnAlgebra', 'AnData', 'KAlgebra', 'StrictAlgebra', 'an_from_theta',
    'check_action_compatibility', 'check_an_axioms', 'compare_an_data',
    'strict_algebra', 'theta_from_an',
    'ainfty_from_directed', 'check_directed_hypotheses', 'check_right_nesting_identities',
    'ActionAxiomViolation', 'AssociahedraError', 'CoherenceViolation',
    'CubeNotCommuting', 'HypothesisViolation',
    'KMorphism', 'covers', 'decompose', 'enumerate_words', 'f_vector', 'gamma', 'leq',
    'MonoidalCategory', 'RootedKTree', 'build_MC', 'functor_E', 'functor_I',
    'fiber', 'lambda_mor', 'lambda_obj', 'max_preimage', 'min_preimage', 'tamari_leq',
    'ID', 'ZERO', 'ParenWord', 'parse', 'render'
]
