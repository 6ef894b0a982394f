"""
Exception hierarchy for associahedra

Every error raised by the package derives from AssociahedraError, which is a
ValueError so callers that only care about bad input can catch that.
"""

from typing import Any, Dict, Optional


class AssociahedraError(ValueError):
    """Base class for all package errors"""


class InvalidWordError(AssociahedraError):
    """A parenthesized word violates laminarity, cardinality or ordering"""


class ParseError(InvalidWordError):
    """Text could not be read as a parenthesized word"""


class InvalidTreeError(AssociahedraError):
    """A tree has a node with fewer than two children or bad leaf labels"""


class ArityMismatchError(AssociahedraError):
    """Argument count does not match the arity of an operation"""


class CapExceededError(AssociahedraError):
    """Requested size is above the configured enumeration cap"""


class BoundExceededError(AssociahedraError):
    """A multiplication or action was evaluated above the working bound"""


class MissingTableEntryError(AssociahedraError):
    """A finite table has no entry for a requested key"""


class CategoryError(AssociahedraError):
    """Category data is ill-typed or not composable"""


class CoherenceViolation(AssociahedraError):
    """A coherence condition failed; carries a replayable witness"""

    def __init__(self, message: str, witness: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.witness = witness or {}


class HypothesisViolation(CoherenceViolation):
    """Input to the directed-monoidal construction fails a hypothesis"""


class CubeNotCommuting(CoherenceViolation):
    """A factorization cube has two paths composing differently"""


class ActionAxiomViolation(CoherenceViolation):
    """An operad action is incompatible with units or composition"""
