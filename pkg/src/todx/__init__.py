"""todx: an index answering "which equalities does this substitution order?"

Unordered equalities sharing a left-hand side are compiled, lazily and
during retrieval, into term ordering diagrams: rooted dags whose nodes
are term comparisons and weight positivity checks under KBO or LPO.
Repeated queries reuse every check the earlier ones already paid for.
"""

from .index import (DuplicateEqualityError, IndexMode, MalformedEqualityError,
                    PostOrderingIndex, UnknownEqualityError,
                    canonicalize_equality, canonicalize_term)
from .ordering import (Cmp3, KboOrder, LpoOrder, TermOrder, closure_equal,
                       closure_weight, make_order)
from .forcing import (PartialOrdering, TpoInconsistencyError, TpoStore,
                      force_positivity_label, force_term_label, term_formula)
from .stats import NodeCounters, Stats
from .terms import (EMPTY_SUBST, ArityError, LinearExpr, Sign3, Signature,
                    SignatureError, Substitution, Symbol, Term,
                    UnknownSymbolError, occurrences, subst_linear, term_weight)
from .tod import (EdgeLabel, Equality, NodeKind, StepCapExceededError, Tod,
                  TodNode, TodStructureError, STEP_CAP)

__version__ = "0.1.0"

__all__ = [
    "ArityError", "Cmp3", "DuplicateEqualityError", "EMPTY_SUBST", "EdgeLabel",
    "Equality", "IndexMode", "KboOrder", "LinearExpr", "LpoOrder",
    "MalformedEqualityError", "NodeCounters", "NodeKind", "PartialOrdering",
    "PostOrderingIndex", "STEP_CAP", "Sign3", "Signature", "SignatureError",
    "Stats", "StepCapExceededError", "Substitution", "Symbol", "Term",
    "TermOrder", "Tod", "TodNode", "TodStructureError",
    "TpoInconsistencyError", "TpoStore", "UnknownEqualityError",
    "UnknownSymbolError", "canonicalize_equality", "canonicalize_term",
    "closure_equal", "closure_weight", "force_positivity_label",
    "force_term_label", "make_order", "occurrences", "subst_linear",
    "term_formula", "term_weight",
]
