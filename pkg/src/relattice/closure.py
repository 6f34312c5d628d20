"""Closure of a generator set under natural join and inner union.

The closure is computed as a round-based fixpoint: each round combines
every element discovered in the previous round with every element seen so
far, under both operations, then merges the results deterministically.
Elements are finally ordered by (header, sorted rows), which fixes node
ids, edge order, and DOT bytes across runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import ClosureCapError, SchemaError
from .relations import (
    Relation,
    Universe,
    dee,
    format_relation,
    inner_union,
    le,
    natural_join,
    relation_from_json,
    relation_to_json,
    top_empty,
    universe_from_json,
)
from .rng import SplitMix64

__all__ = [
    "Closure",
    "LatticeReport",
    "generate_closure",
    "verify_lattice",
    "export_dot",
    "find_pentagon",
    "closure_to_json",
    "closure_from_json",
    "generators_from_json",
]

DEFAULT_CAP = 10_000

# exhaustive triple checking is cubic; beyond this many elements, sample
EXHAUSTIVE_LIMIT = 50
SAMPLED_TRIPLES = 2_000


def _sort_key(r: Relation):
    return (r.header, sorted(r.rows))


@dataclass(frozen=True)
class Closure:
    elements: tuple[Relation, ...]
    generators: tuple[Relation, ...]
    universe: Universe
    hasse_edges: tuple[tuple[Relation, Relation], ...]

    def __len__(self) -> int:
        return len(self.elements)

    def index_of(self, r: Relation) -> int | None:
        key = (r.header, r.rows)
        return _index_map(self).get(key)

    def __contains__(self, r: Relation) -> bool:
        return self.index_of(r) is not None


def _index_map(c: Closure) -> dict:
    cached = getattr(c, "_index", None)
    if cached is None:
        cached = {(r.header, r.rows): i for i, r in enumerate(c.elements)}
        object.__setattr__(c, "_index", cached)
    return cached


def _op_tables(c: Closure) -> tuple[list[list[int | None]], list[list[int | None]]]:
    """Pairwise meet/join result indices; None marks a result outside the set."""
    cached = getattr(c, "_tables", None)
    if cached is not None:
        return cached
    idx = _index_map(c)
    n = len(c.elements)
    meets: list[list[int | None]] = [[None] * n for _ in range(n)]
    joins: list[list[int | None]] = [[None] * n for _ in range(n)]
    for i, a in enumerate(c.elements):
        for j in range(i, n):
            b = c.elements[j]
            m = natural_join(a, b)
            v = inner_union(a, b)
            mi = idx.get((m.header, m.rows))
            vi = idx.get((v.header, v.rows))
            meets[i][j] = meets[j][i] = mi
            joins[i][j] = joins[j][i] = vi
    object.__setattr__(c, "_tables", (meets, joins))
    return meets, joins


def _hasse(elements: Sequence[Relation]) -> tuple[tuple[Relation, Relation], ...]:
    n = len(elements)
    below = [[False] * n for _ in range(n)]
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            if i != j and le(a, b):
                below[i][j] = True
    edges = []
    for i in range(n):
        for j in range(n):
            if not below[i][j]:
                continue
            if any(below[i][k] and below[k][j] for k in range(n)):
                continue
            edges.append((elements[i], elements[j]))
    return tuple(edges)


def generate_closure(
    gens: Sequence[Relation], u: Universe, cap: int = DEFAULT_CAP
) -> Closure:
    """Fixpoint of pairwise natural join and inner union over ``gens``."""
    if not gens:
        raise SchemaError("at least one generator is required")
    seen: dict[tuple, Relation] = {}
    for g in gens:
        seen.setdefault((g.header, g.rows), g)
    frontier = sorted(seen.values(), key=_sort_key)
    known = list(frontier)
    while frontier:
        fresh: dict[tuple, Relation] = {}
        for a in frontier:
            for b in known:
                for r in (natural_join(a, b), inner_union(a, b)):
                    key = (r.header, r.rows)
                    if key not in seen and key not in fresh:
                        fresh[key] = r
        if len(seen) + len(fresh) > cap:
            raise ClosureCapError(
                cap,
                f"closure exceeded the cap of {cap} elements "
                f"({len(seen)} found plus {len(fresh)} pending)",
            )
        frontier = sorted(fresh.values(), key=_sort_key)
        seen.update(fresh)
        known.extend(frontier)
    elements = tuple(sorted(seen.values(), key=_sort_key))
    return Closure(
        elements=elements,
        generators=tuple(gens),
        universe=u,
        hasse_edges=_hasse(elements),
    )


@dataclass(frozen=True)
class LatticeReport:
    element_count: int
    closed: bool
    sla_ok: bool
    bottom_is_r01: bool
    top_is_r10: bool
    exhaustive: bool
    triples_checked: int
    issues: tuple[str, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return self.closed and self.sla_ok and self.bottom_is_r01 and self.top_is_r10

    def to_json(self) -> dict:
        return {
            "element_count": self.element_count,
            "closed": self.closed,
            "sla_ok": self.sla_ok,
            "bottom_is_r01": self.bottom_is_r01,
            "top_is_r10": self.top_is_r10,
            "exhaustive": self.exhaustive,
            "triples_checked": self.triples_checked,
            "ok": self.ok,
            "issues": list(self.issues),
        }


def _triples(n: int, exhaustive: bool) -> Iterable[tuple[int, int, int]]:
    if exhaustive:
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    yield (i, j, k)
        return
    rng = SplitMix64(0x10E)
    for _ in range(SAMPLED_TRIPLES):
        yield (rng.below(n), rng.below(n), rng.below(n))


def verify_lattice(c: Closure) -> LatticeReport:
    """Closure, lattice identities, and the identity of the two bounds."""
    issues: list[str] = []
    meets, joins = _op_tables(c)
    n = len(c.elements)

    closed = True
    for i in range(n):
        for j in range(n):
            if meets[i][j] is None or joins[i][j] is None:
                closed = False
                op = "meet" if meets[i][j] is None else "join"
                if len(issues) < 5:
                    issues.append(
                        f"{op} of elements {i} and {j} is missing from the set"
                    )

    sla_ok = True
    exhaustive = n <= EXHAUSTIVE_LIMIT
    triples_checked = 0
    if closed:
        for i, j, k in _triples(n, exhaustive):
            triples_checked += 1
            ok = (
                meets[i][j] == meets[j][i]
                and joins[i][j] == joins[j][i]
                and meets[meets[i][j]][k] == meets[i][meets[j][k]]
                and joins[joins[i][j]][k] == joins[i][joins[j][k]]
                and meets[i][joins[i][j]] == i
                and joins[i][meets[i][j]] == i
            )
            if not ok:
                sla_ok = False
                if len(issues) < 5:
                    issues.append(f"lattice identity fails on triple ({i},{j},{k})")
    else:
        sla_ok = False

    bottom = min(c.elements, key=_sort_key)
    top = bottom
    for r in c.elements:
        if le(r, bottom):
            bottom = r
        if le(top, r):
            top = r
    bottom_ok = all(le(bottom, r) for r in c.elements) and bottom == dee()
    top_ok = all(le(r, top) for r in c.elements) and top == top_empty(c.universe)
    if not bottom_ok:
        issues.append("least element is not R01")
    if not top_ok:
        issues.append("greatest element is not R10")

    return LatticeReport(
        element_count=n,
        closed=closed,
        sla_ok=sla_ok,
        bottom_is_r01=bottom_ok,
        top_is_r10=top_ok,
        exhaustive=exhaustive,
        triples_checked=triples_checked,
        issues=tuple(issues),
    )


def find_pentagon(c: Closure) -> tuple[Relation, ...] | None:
    """A five-element sublattice shaped like the pentagon, if one exists.

    Uses the standard witness: v < w with some u incomparable to both such
    that u's bounds with v and with w coincide; then
    {glb, v, w, u, lub} is closed under both operations.
    """
    meets, joins = _op_tables(c)
    n = len(c.elements)
    if not all(meets[i][j] is not None and joins[i][j] is not None
               for i in range(n) for j in range(n)):
        return None
    # under le, the lub of a pair sits in the meet table
    for v in range(n):
        for w in range(n):
            if v == w or meets[v][w] != w:  # need v < w strictly
                continue
            for u in range(n):
                if meets[u][v] in (u, v) or meets[u][w] in (u, w):
                    continue  # u comparable to v or to w
                if meets[u][v] == meets[u][w] and joins[u][v] == joins[u][w]:
                    picks = (joins[u][v], v, w, u, meets[u][v])
                    return tuple(c.elements[p] for p in picks)
    return None


def export_dot(c: Closure) -> str:
    """Hasse diagram as DOT text, byte-identical for identical input."""
    idx = _index_map(c)
    lines = ["digraph closure {", "  rankdir=BT;", '  node [shape=box, fontname="monospace"];']
    for i, r in enumerate(c.elements):
        header = "{" + ", ".join(r.header) + "}"
        lines.append(f'  n{i} [label="{header}|{len(r.rows)}"];')
    for lo, hi in c.hasse_edges:
        lines.append(f"  n{idx[(lo.header, lo.rows)]} -> n{idx[(hi.header, hi.rows)]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def closure_to_json(c: Closure) -> dict:
    from .relations import universe_to_json

    return {
        "universe": universe_to_json(c.universe),
        "element_count": len(c.elements),
        "elements": [relation_to_json(r) for r in c.elements],
    }


def generators_from_json(
    data: object, u: Universe | None = None
) -> tuple[tuple[Relation, ...], Universe]:
    """Accepts either a bare list of relation literals (universe required)
    or an object carrying both "universe" and "generators" keys."""
    if isinstance(data, Mapping):
        if "universe" in data:
            u = universe_from_json(data["universe"])
        gens_raw = data.get("generators")
        if gens_raw is None:
            raise SchemaError('expected a "generators" key')
    elif isinstance(data, Sequence):
        gens_raw = data
    else:
        raise SchemaError("generators input must be a list or an object")
    if u is None:
        raise SchemaError("a universe is required to read generators")
    gens = tuple(relation_from_json(g, u) for g in gens_raw)
    return gens, u


def closure_from_json(text: str, u: Universe | None = None) -> Closure:
    gens, u = generators_from_json(json.loads(text), u)
    return generate_closure(list(gens), u)


def describe(c: Closure) -> str:
    lines = [f"{len(c.elements)} elements, {len(c.hasse_edges)} cover edges"]
    for i, r in enumerate(c.elements):
        lines.append(f"  n{i}: {format_relation(r)}")
    return "\n".join(lines)
