"""The law catalogue: every algebraic statement the workbench knows about.

Each law carries a concrete-syntax statement, a status driving test
expectations (valid laws must survive randomized checking, invalid ones
must fall, the open one is reported without assertion), and bookkeeping
for the two checking modes:

* ``assumptions`` lists the law ids an abstract countermodel search may
  assume alongside the six lattice identities.  None marks an axiom of
  the system; a tuple (possibly empty) marks a statement derivable from
  the lattice identities plus the listed laws, which the finite-model
  consistency sweep re-checks by exhaustive search.
* ``groups`` bundles variables that should share a header on half of the
  random trials, so that premises which compare headers are exercised
  rather than left vacuous.

Invalid laws ship a stored witness over the 2x2 universe; tests replay
those witnesses through the evaluator.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .relations import Relation, Universe, relation, universe
from .terms import Implication, parse_statement

__all__ = ["LawStatus", "Witness", "Law", "law_catalogue", "law_by_id",
           "resolve_law_ids", "SLA_IDS", "AXIOM_ALIASES", "U2"]


class LawStatus(enum.Enum):
    VALID = "valid"
    INVALID = "invalid"
    OPEN = "open"


U2 = universe({"x": ["1", "2"], "y": ["a", "b"]})


@dataclass(frozen=True)
class Witness:
    """A concrete falsifying assignment, stored with its universe."""

    universe: Universe
    assignment: dict[str, Relation] = field(hash=False)


@dataclass(frozen=True)
class Law:
    id: str
    statement: Implication
    status: LawStatus
    note: str
    iff: bool = False
    assumptions: tuple[str, ...] | None = None
    groups: tuple[tuple[str, ...], ...] = ()
    witness: Witness | None = None

    @property
    def text(self) -> str:
        if self.iff:
            return f"{self.statement.premises[0]} <-> {self.statement.conclusion}"
        return str(self.statement)


def _w(assignment: dict[str, list[tuple[str, ...]]], headers: dict[str, list[str]]) -> Witness:
    return Witness(U2, {
        name: relation(headers[name], rows, U2) for name, rows in assignment.items()
    })


SLA_IDS = (
    "sla-meet-comm", "sla-meet-assoc", "sla-absorb-1",
    "sla-join-comm", "sla-join-assoc", "sla-absorb-2",
)

# id, statement, status, assumptions (None = axiom), groups, note
_ENTRIES: list[tuple] = [
    ("sla-meet-comm", "x ^ y = y ^ x", LawStatus.VALID, None, (),
     "lattice identity: natural join commutes"),
    ("sla-meet-assoc", "(x ^ y) ^ z = x ^ (y ^ z)", LawStatus.VALID, None, (),
     "lattice identity: natural join associates"),
    ("sla-absorb-1", "x ^ (x v y) = x", LawStatus.VALID, None, (),
     "lattice identity: join absorbs union"),
    ("sla-join-comm", "x v y = y v x", LawStatus.VALID, None, (),
     "lattice identity: inner union commutes"),
    ("sla-join-assoc", "(x v y) v z = x v (y v z)", LawStatus.VALID, None, (),
     "lattice identity: inner union associates"),
    ("sla-absorb-2", "x v (x ^ y) = x", LawStatus.VALID, None, (),
     "lattice identity: union absorbs join"),
    ("fda", "x = (x ^ R00) v (x ^ R11)", LawStatus.VALID, None, (),
     "axiom: every relation is the union of its header part and its content part"),
    ("fda-inv", "R00 ^ (x v R11) = x ^ R00", LawStatus.VALID, None, (),
     "axiom: projecting the domain completion recovers the header part"),
    ("cousin-1", "R11 v (x ^ R00) = x v R11", LawStatus.VALID, ("fda", "fda-inv"), (),
     "companion identity: domain completion seen from the header part"),
    ("cousin-2", "R00 v (x ^ R11) = x v R00", LawStatus.VALID, ("fda",), (),
     "companion identity: emptiness test seen from the content part"),
    ("bottom-join", "R00 v R11 = R01", LawStatus.VALID, ("fda",), (),
     "constant theorem: the two axiom constants meet at the bottom"),
    ("top-meet", "R00 ^ R11 = R10", LawStatus.VALID, ("fda-inv",), (),
     "constant theorem: the two axiom constants join at the top"),
    ("header-domain-equiv",
     "R00 ^ x = R00 ^ y <-> R11 v x = R11 v y", LawStatus.VALID,
     ("fda", "fda-inv"), (("x", "y"),),
     "a condition on headers holds exactly when the matching condition on domains does"),
    ("lh-meet-join", "(R00 ^ x) v (R00 ^ y) = R00 ^ (x v y)", LawStatus.VALID,
     ("fda", "fda-inv"), (),
     "the header-part map preserves inner union"),
    ("lh-meet-meet", "(R00 ^ x) ^ (R00 ^ y) = R00 ^ (x ^ y)", LawStatus.VALID, (), (),
     "the header-part map preserves natural join (pure lattice reasoning)"),
    ("lh-join-meet", "(R11 v x) ^ (R11 v y) = R11 v (x ^ y)", LawStatus.VALID,
     ("fda", "fda-inv"), (),
     "the domain-completion map preserves natural join"),
    ("sdc", "R00 ^ (x v y) = R00 ^ (x v z) -> x ^ (y v z) = (x ^ y) v (x ^ z)",
     LawStatus.VALID, None, (("y", "z"),),
     "axiom: join distributes over union when the stated header condition holds"),
    ("sdc-domain-form",
     "R11 v (x v y) = R11 v (x v z) -> x ^ (y v z) = (x ^ y) v (x ^ z)",
     LawStatus.VALID, ("sdc", "fda", "fda-inv"), (("y", "z"),),
     "the distributivity criterion restated as a condition on domains"),
    ("union-over-join-criterion",
     "R00 ^ (x v y) = R00 ^ (x v z) & R00 ^ (x v z) = R00 ^ (y v z)"
     " -> x v (y ^ z) = (x v y) ^ (x v z)",
     LawStatus.VALID, ("sdc", "fda", "fda-inv"), (("x", "y", "z"),),
     "union distributes over join when all three header conditions agree"),
    ("dch", "R00 ^ (x ^ (y v z)) = R00 ^ ((x ^ y) v (x ^ z))", LawStatus.VALID,
     None, (),
     "axiom: distributivity always holds at the header level"),
    ("dch-domain-form",
     "R11 v (x ^ (y v z)) = R11 v ((x ^ y) v (x ^ z))", LawStatus.VALID,
     ("dch", "fda", "fda-inv"), (),
     "the header-level distributivity restated on domains"),
    ("dch-dual", "R00 ^ (x v (y ^ z)) = R00 ^ ((x v y) ^ (x v z))", LawStatus.VALID,
     ("sdc", "dch"), (),
     "the dual distributivity also holds at the header level"),
    ("empty-dist-meet",
     "(x ^ R00) ^ ((y ^ R00) v (z ^ R00)) = ((x ^ R00) ^ (y ^ R00)) v ((x ^ R00) ^ (z ^ R00))",
     LawStatus.VALID, ("sdc", "dch"), (),
     "among empty relations, join distributes over union"),
    ("empty-dist-join",
     "(x ^ R00) v ((y ^ R00) ^ (z ^ R00)) = ((x ^ R00) v (y ^ R00)) ^ ((x ^ R00) v (z ^ R00))",
     LawStatus.VALID, ("sdc", "dch"), (),
     "among empty relations, union distributes over join"),
    ("or-assoc", "x + (y + z) = (x + y) + z", LawStatus.VALID,
     ("sdc-domain-form", "dch-domain-form", "fda", "fda-inv"), (),
     "the domain-completing disjunction is associative"),
    ("or-assoc-half",
     "(x + y) + z = ((x ^ ((y ^ z) v R11)) v (y ^ ((x ^ z) v R11))) v (z ^ ((x ^ y) v R11))",
     LawStatus.VALID, ("sdc-domain-form", "dch-domain-form", "fda", "fda-inv"), (),
     "half of the associativity argument: the symmetric three-way form"),
    ("meet-over-or", "x ^ (y + z) = (x ^ y) + (x ^ z)", LawStatus.VALID,
     ("sdc-domain-form", "dch-domain-form", "lh-join-meet"), (),
     "natural join distributes over the disjunction"),
    ("fda-dual", "x = (x v R00) ^ (x v R11)", LawStatus.INVALID, None, (),
     "the mirrored decomposition fails: a three-tuple relation rebuilds to the full product"),
    ("r00-join-not-hom", "(R00 v x) ^ (R00 v y) = R00 v (x ^ y)", LawStatus.INVALID,
     None, (),
     "the emptiness-test map does not preserve natural join"),
    ("r11-meet-not-hom", "(R11 ^ x) v (R11 ^ y) = R11 ^ (x v y)", LawStatus.INVALID,
     None, (),
     "the domain-filling map does not preserve inner union"),
    ("or-over-meet", "x + (y ^ z) = (x + y) ^ (x + z)", LawStatus.OPEN, None, (),
     "whether the disjunction distributes over join is unresolved; reported, never asserted"),
]

_WITNESSES = {
    "fda-dual": _w(
        {"x": [("1", "a"), ("1", "b"), ("2", "a")]},
        {"x": ["x", "y"]},
    ),
    "r00-join-not-hom": _w(
        {"x": [("1",)], "y": [("2",)]},
        {"x": ["x"], "y": ["x"]},
    ),
    "r11-meet-not-hom": _w(
        {"x": [("1",)], "y": [("a",)]},
        {"x": ["x"], "y": ["y"]},
    ),
}

AXIOM_ALIASES = {
    "SLA": SLA_IDS,
    "FDA": ("fda",),
    "FDA-INV": ("fda-inv",),
    "SDC": ("sdc",),
    "DCH": ("dch",),
}


def _build() -> dict[str, Law]:
    catalogue: dict[str, Law] = {}
    for law_id, text, status, assumptions, groups, note in _ENTRIES:
        statement, iff = parse_statement(text)
        if law_id in catalogue:
            raise ValueError(f"duplicate law id {law_id}")
        catalogue[law_id] = Law(
            id=law_id,
            statement=statement,
            status=status,
            note=note,
            iff=iff,
            assumptions=assumptions,
            groups=groups,
            witness=_WITNESSES.get(law_id),
        )
    return catalogue


_CATALOGUE = _build()


def law_catalogue() -> list[Law]:
    return list(_CATALOGUE.values())


def law_by_id(law_id: str) -> Law:
    try:
        return _CATALOGUE[law_id]
    except KeyError:
        raise KeyError(f"unknown law id {law_id!r}") from None


def resolve_law_ids(names) -> tuple[str, ...]:
    """Expand axiom-group aliases (SLA, FDA, FDA-INV, SDC, DCH) and law ids."""
    out: dict[str, None] = {}
    for name in names:
        alias = AXIOM_ALIASES.get(name.upper().replace("⁻¹", "-INV"))
        if alias is not None:
            for law_id in alias:
                out.setdefault(law_id)
        else:
            out.setdefault(law_by_id(name).id)
    return tuple(out)
