"""Relations with named attributes and the two operations that make them a lattice.

A relation is a header (a set of attribute names) together with a set of
tuples over exactly that header.  Headers are kept as sorted tuples and
rows as value tuples aligned with the sorted header, so structural
equality is set equality.

Two operations close the space of relations over a fixed universe:

* natural join (``^``): header union; a joined tuple exists wherever a
  tuple of each operand agrees on the shared attributes.
* inner union (``v``): header intersection; project both operands onto
  the shared header and take the set union.

Ordering follows the join: ``le(a, b)`` holds iff ``a ^ b == b``.  Under
that order DEE (empty header, one empty tuple) is the least element and
the empty relation on the full universe header is the greatest, natural
join is the least upper bound and inner union the greatest lower bound.

Four constants recur throughout: DUM and DEE are the two relations on the
empty header and need no universe, while ``top_empty`` and ``universal``
are the empty and the full relation on the full header of a universe.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Mapping

from .errors import SchemaError, UniverseMismatchError

__all__ = [
    "Universe",
    "Relation",
    "universe",
    "relation",
    "natural_join",
    "inner_union",
    "le",
    "dum",
    "dee",
    "top_empty",
    "universal",
    "project",
    "antijoin",
    "dd_or",
    "dd_or_pointwise",
    "universe_from_json",
    "universe_to_json",
    "relation_from_json",
    "relation_to_json",
    "format_relation",
]


@dataclass(frozen=True)
class Universe:
    """A finite attribute set with a finite, nonempty domain per attribute."""

    domains: tuple[tuple[str, tuple[str, ...]], ...]

    def __post_init__(self):
        seen = set()
        for attr, values in self.domains:
            if not isinstance(attr, str) or not attr:
                raise SchemaError(f"attribute name must be a nonempty string, got {attr!r}")
            if attr in seen:
                raise SchemaError(f"duplicate attribute {attr!r}")
            seen.add(attr)
            if not values:
                raise SchemaError(f"attribute {attr!r} has an empty domain")
            if len(set(values)) != len(values):
                raise SchemaError(f"attribute {attr!r} has duplicate domain values")
            for v in values:
                if not isinstance(v, str):
                    raise SchemaError(f"domain value {v!r} of {attr!r} is not a string")
        attrs = tuple(attr for attr, _ in self.domains)
        if attrs != tuple(sorted(attrs)):
            raise SchemaError("universe attributes must be sorted; use universe()")

    @property
    def attributes(self) -> tuple[str, ...]:
        return tuple(attr for attr, _ in self.domains)

    def domain(self, attr: str) -> tuple[str, ...]:
        for name, values in self.domains:
            if name == attr:
                return values
        raise SchemaError(f"unknown attribute {attr!r}")

    def product_count(self, header: Iterable[str]) -> int:
        count = 1
        for attr in header:
            count *= len(self.domain(attr))
        return count

    def rows_on(self, header: Iterable[str]) -> Iterator[tuple[str, ...]]:
        """All value tuples over the given attributes, in sorted header order."""
        attrs = sorted(header)
        return product(*(self.domain(a) for a in attrs))


def universe(domains: Mapping[str, Iterable[str]]) -> Universe:
    """Build a Universe from a mapping of attribute name to iterable of values."""
    normalized = tuple(
        (attr, tuple(sorted(domains[attr]))) for attr in sorted(domains)
    )
    return Universe(normalized)


@dataclass(frozen=True)
class Relation:
    """An immutable relation; construct through relation() or the operations.

    The universe tag is carried for validation and for universe-dependent
    constants, but it does not participate in equality: two relations are
    equal iff they have the same header and the same rows.
    """

    header: tuple[str, ...]
    rows: frozenset[tuple[str, ...]]
    universe: Universe | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.header != tuple(sorted(self.header)):
            raise SchemaError("relation header must be sorted; use relation()")
        if len(set(self.header)) != len(self.header):
            raise SchemaError("relation header has duplicate attributes")
        width = len(self.header)
        for row in self.rows:
            if len(row) != width:
                raise SchemaError(
                    f"row {row!r} has {len(row)} values for a {width}-attribute header"
                )

    @property
    def cardinality(self) -> int:
        return len(self.rows)

    def sorted_rows(self) -> list[tuple[str, ...]]:
        return sorted(self.rows)

    def __str__(self) -> str:
        return format_relation(self)


def relation(
    header: Iterable[str],
    rows: Iterable[Mapping[str, str] | Iterable[str]] = (),
    universe: Universe | None = None,
) -> Relation:
    """Build a relation, sorting the header and aligning rows to it.

    Sequence rows are read in the attribute order the caller passed for
    ``header``; mapping rows are read by name.  When a universe is given,
    the header and every value are validated against it.
    """
    given = tuple(header)
    if len(set(given)) != len(given):
        raise SchemaError(f"duplicate attribute in header {given!r}")
    attrs = tuple(sorted(given))
    perm = tuple(given.index(a) for a in attrs)

    out = set()
    for row in rows:
        if isinstance(row, Mapping):
            missing = [a for a in attrs if a not in row]
            if missing:
                raise SchemaError(f"row {row!r} is missing attributes {missing}")
            if len(row) != len(attrs):
                extra = sorted(set(row) - set(attrs))
                raise SchemaError(f"row {row!r} has attributes {extra} outside the header")
            out.add(tuple(str(row[a]) for a in attrs))
        else:
            values = tuple(row)
            if len(values) != len(attrs):
                raise SchemaError(
                    f"row {values!r} has {len(values)} values for header {given!r}"
                )
            out.add(tuple(str(values[i]) for i in perm))

    rel = Relation(attrs, frozenset(out), universe)
    if universe is not None:
        _validate_against(rel, universe)
    return rel


def _validate_against(rel: Relation, u: Universe) -> None:
    known = set(u.attributes)
    for attr in rel.header:
        if attr not in known:
            raise SchemaError(f"attribute {attr!r} is not in the universe")
    domains = [set(u.domain(a)) for a in rel.header]
    for row in rel.rows:
        for attr, dom, value in zip(rel.header, domains, row):
            if value not in dom:
                raise SchemaError(f"value {value!r} is outside the domain of {attr!r}")


def _merge_universe(a: Relation, b: Relation) -> Universe | None:
    if a.universe is None:
        return b.universe
    if b.universe is None:
        return a.universe
    if a.universe != b.universe:
        raise UniverseMismatchError("operands carry different universes")
    return a.universe


def _positions(header: tuple[str, ...], sub: tuple[str, ...]) -> tuple[int, ...]:
    return tuple(header.index(a) for a in sub)


def natural_join(a: Relation, b: Relation) -> Relation:
    """Header union; tuples that restrict to a tuple of each operand."""
    u = _merge_universe(a, b)
    if a.header == b.header:
        return Relation(a.header, a.rows & b.rows, u)

    shared = tuple(x for x in a.header if x in set(b.header))
    merged = tuple(sorted(set(a.header) | set(b.header)))
    a_shared = _positions(a.header, shared)
    b_shared = _positions(b.header, shared)

    by_key: dict[tuple[str, ...], list[tuple[str, ...]]] = {}
    for row in b.rows:
        by_key.setdefault(tuple(row[i] for i in b_shared), []).append(row)

    b_only = tuple(x for x in b.header if x not in set(a.header))
    b_only_pos = _positions(b.header, b_only)
    out = set()
    for row in a.rows:
        key = tuple(row[i] for i in a_shared)
        for match in by_key.get(key, ()):
            extended = dict(zip(a.header, row))
            for attr, pos in zip(b_only, b_only_pos):
                extended[attr] = match[pos]
            out.add(tuple(extended[x] for x in merged))
    return Relation(merged, frozenset(out), u)


def inner_union(a: Relation, b: Relation) -> Relation:
    """Header intersection; union of both projections onto it."""
    u = _merge_universe(a, b)
    if a.header == b.header:
        return Relation(a.header, a.rows | b.rows, u)
    shared = tuple(x for x in a.header if x in set(b.header))
    a_pos = _positions(a.header, shared)
    b_pos = _positions(b.header, shared)
    out = {tuple(row[i] for i in a_pos) for row in a.rows}
    out |= {tuple(row[i] for i in b_pos) for row in b.rows}
    return Relation(shared, frozenset(out), u)


def le(a: Relation, b: Relation) -> bool:
    """The lattice order: a precedes b iff joining b onto a gives b."""
    return natural_join(a, b) == b


def dum() -> Relation:
    """Empty header, no tuples."""
    return Relation((), frozenset())


def dee() -> Relation:
    """Empty header, one empty tuple."""
    return Relation((), frozenset({()}))


def top_empty(u: Universe) -> Relation:
    """The empty relation on the full universe header: the greatest element."""
    return Relation(u.attributes, frozenset(), u)


def universal(u: Universe) -> Relation:
    """Every tuple over the full universe header."""
    return Relation(u.attributes, frozenset(u.rows_on(u.attributes)), u)


def project(a: Relation, header: Iterable[str]) -> Relation:
    """Projection onto the part of ``header`` that a's header actually has."""
    keep = tuple(x for x in a.header if x in set(header))
    pos = _positions(a.header, keep)
    return Relation(keep, frozenset(tuple(r[i] for i in pos) for r in a.rows), a.universe)


def antijoin(e: Relation, d: Relation) -> Relation:
    """Tuples of e that agree with no tuple of d on the shared attributes."""
    u = _merge_universe(e, d)
    shared = tuple(x for x in e.header if x in set(d.header))
    e_pos = _positions(e.header, shared)
    d_pos = _positions(d.header, shared)
    d_keys = {tuple(row[i] for i in d_pos) for row in d.rows}
    kept = frozenset(r for r in e.rows if tuple(r[i] for i in e_pos) not in d_keys)
    return Relation(e.header, kept, u)


def _require_universe(a: Relation, b: Relation, u: Universe | None) -> Universe:
    from .errors import UniverseRequiredError

    merged = _merge_universe(a, b)
    if u is None:
        u = merged
    elif merged is not None and merged != u:
        raise UniverseMismatchError("operands carry a different universe than the one given")
    if u is None:
        raise UniverseRequiredError("this operation needs a universe")
    return u


def dd_or(a: Relation, b: Relation, u: Universe | None = None) -> Relation:
    """Disjunction on possibly different headers, as a lattice term.

    Computed literally as (a ^ (b v R11)) v (b ^ (a v R11)) where R11 is
    the universal relation.  See dd_or_pointwise for the set-builder
    reading used to cross-check this definition.
    """
    u = _require_universe(a, b, u)
    r11 = universal(u)
    return inner_union(
        natural_join(a, inner_union(b, r11)),
        natural_join(b, inner_union(a, r11)),
    )


def dd_or_pointwise(a: Relation, b: Relation, u: Universe | None = None) -> Relation:
    """Independent reading of dd_or: tuples over the header union whose
    restriction lands in a or in b."""
    u = _require_universe(a, b, u)
    merged = tuple(sorted(set(a.header) | set(b.header)))
    a_pos = _positions(merged, a.header)
    b_pos = _positions(merged, b.header)
    out = set()
    for row in u.rows_on(merged):
        if tuple(row[i] for i in a_pos) in a.rows or tuple(row[i] for i in b_pos) in b.rows:
            out.add(row)
    return Relation(merged, frozenset(out), u)


def universe_from_json(obj) -> Universe:
    if not isinstance(obj, Mapping) or "attributes" not in obj:
        raise SchemaError('universe JSON must be an object with an "attributes" key')
    attrs = obj["attributes"]
    if not isinstance(attrs, Mapping):
        raise SchemaError('"attributes" must map attribute names to value lists')
    return universe({str(k): [str(v) for v in vs] for k, vs in attrs.items()})


def universe_to_json(u: Universe) -> dict:
    return {"attributes": {attr: list(values) for attr, values in u.domains}}


def relation_from_json(obj, u: Universe | None = None) -> Relation:
    """Read the relation literal: values align positionally with the sorted header."""
    if not isinstance(obj, Mapping) or "header" not in obj or "tuples" not in obj:
        raise SchemaError('relation JSON must be an object with "header" and "tuples"')
    header = [str(a) for a in obj["header"]]
    return relation(sorted(header), [tuple(str(v) for v in row) for row in obj["tuples"]], u)


def relation_to_json(rel: Relation) -> dict:
    return {"header": list(rel.header), "tuples": [list(r) for r in rel.sorted_rows()]}


def format_relation(rel: Relation) -> str:
    """Compact one-line rendering, deterministic for a given relation."""
    head = "{" + ", ".join(rel.header) + "}"
    if not rel.rows:
        return f"{head} {{}}"
    body = ", ".join("(" + ", ".join(row) + ")" for row in rel.sorted_rows())
    return f"{head} {{{body}}}"
