"""relattice: a workbench for the two-operator lattice algebra of relations.

Relations with named attributes form a lattice under natural join and
inner union.  This package provides the concrete semantics, a catalogue
of algebraic laws with randomized checking, exhaustive counterexample
search over small abstract lattices, closure diagrams for concrete
generator sets, and constraint-aware elimination of redundant joins.
"""

from .errors import (
    ClosureCapError,
    ConstraintViolationError,
    ParseError,
    RelatticeError,
    RewriteVerificationError,
    SchemaError,
    SearchSpaceError,
    UnboundNameError,
    UniverseMismatchError,
    UniverseRequiredError,
    UnsatisfiableConstraintsError,
)
from .relations import (
    Relation,
    Universe,
    antijoin,
    dd_or,
    dd_or_pointwise,
    dee,
    dum,
    format_relation,
    inner_union,
    le,
    natural_join,
    project,
    relation,
    relation_from_json,
    relation_to_json,
    top_empty,
    universal,
    universe,
    universe_from_json,
    universe_to_json,
)
from .terms import (
    Equation,
    Implication,
    Term,
    equal_ac,
    evaluate,
    normalize_ac,
    parse_equation,
    parse_statement,
    parse_term,
    to_text,
)

__version__ = "0.1.0"
