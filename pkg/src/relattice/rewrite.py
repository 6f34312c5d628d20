"""Constraint-aware rewriting and equational anti-join solving.

A foreign key (E, D) is the lattice equation ``EmD v R00 = R00`` (the
anti-join of E and D holds no tuples); a projection (E0, E) is
``(E ^ E0) ^ R00 = E ^ R00`` (E0's header is contained in E's).  Under
those two, a union operand ``E ^ D`` sitting next to E0 is a redundant
join and collapses to ``E``.

Every emitted rewrite step is re-verified by randomized evaluation over
instances that satisfy the constraints by construction, so the rewriter
never returns a transformation it could not check.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter
from typing import Mapping, Sequence

from .checking import Falsified, Holds, Verdict, random_relation
from .errors import (
    ConstraintViolationError,
    SchemaError,
    SearchSpaceError,
    UnboundNameError,
    UniverseRequiredError,
    UnsatisfiableConstraintsError,
    RewriteVerificationError,
)
from .relations import (
    Relation,
    Universe,
    antijoin,
    dum,
    inner_union,
    natural_join,
    project,
)
from .rng import SplitMix64
from .terms import Ground, Join, Meet, OrOp, Term, evaluate, free_grounds, to_text

__all__ = [
    "ConstraintSet",
    "RewriteStep",
    "check_constraints",
    "eliminate_redundant_joins",
    "verify_rewrite",
    "solve_antijoin",
    "MAX_CANDIDATE_TUPLES",
]

MAX_CANDIDATE_TUPLES = 20


@dataclass(frozen=True)
class ConstraintSet:
    foreign_keys: tuple[tuple[str, str], ...] = ()
    projections: tuple[tuple[str, str], ...] = ()
    require_empty_projection: bool = False

    @classmethod
    def from_json(cls, data: Mapping) -> "ConstraintSet":
        if not isinstance(data, Mapping):
            raise SchemaError("constraints must be an object")
        fks = tuple(tuple(pair) for pair in data.get("foreign_keys", ()))
        projs = tuple(tuple(pair) for pair in data.get("projections", ()))
        for pair in (*fks, *projs):
            if len(pair) != 2 or not all(isinstance(x, str) for x in pair):
                raise SchemaError(f"constraint pairs must be two names, got {pair!r}")
        return cls(
            foreign_keys=fks,
            projections=projs,
            require_empty_projection=bool(data.get("require_empty_projection", False)),
        )

    @classmethod
    def from_file(cls, path: str) -> "ConstraintSet":
        with open(path, encoding="utf-8") as f:
            return cls.from_json(json.load(f))

    def to_json(self) -> dict:
        out: dict = {
            "foreign_keys": [list(p) for p in self.foreign_keys],
            "projections": [list(p) for p in self.projections],
        }
        if self.require_empty_projection:
            out["require_empty_projection"] = True
        return out

    def names(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for a, b in (*self.foreign_keys, *self.projections):
            seen.setdefault(a)
            seen.setdefault(b)
        return tuple(seen)


@dataclass(frozen=True)
class RewriteStep:
    before: Term
    after: Term
    rule: str
    justification: ConstraintSet

    def __str__(self) -> str:
        return f"{to_text(self.before)}  =>  {to_text(self.after)}  [{self.rule}]"


def check_constraints(
    c: ConstraintSet, env: Mapping[str, Relation]
) -> list[str]:
    """Evaluate each declared constraint equation literally against env."""
    violations = []
    r00 = dum()
    for e, d in c.foreign_keys:
        missing = [n for n in (e, d) if n not in env]
        if missing:
            raise UnboundNameError(missing)
        if inner_union(antijoin(env[e], env[d]), r00) != r00:
            violations.append(f"foreign key ({e}, {d})")
    for e0, e in c.projections:
        missing = [n for n in (e0, e) if n not in env]
        if missing:
            raise UnboundNameError(missing)
        lhs = natural_join(natural_join(env[e], env[e0]), r00)
        if lhs != natural_join(env[e], r00):
            violations.append(f"projection ({e0}, {e})")
        if c.require_empty_projection and natural_join(env[e0], r00) != env[e0]:
            violations.append(f"empty projection ({e0})")
    return violations


def _flatten(term: Term, node_type) -> list[Term]:
    if isinstance(term, node_type):
        return _flatten(term.left, node_type) + _flatten(term.right, node_type)
    return [term]


def _rebuild(parts: Sequence[Term], node_type) -> Term:
    out = parts[0]
    for p in parts[1:]:
        out = node_type(out, p)
    return out


def _meet_pair(term: Term) -> tuple[str, str] | None:
    parts = _flatten(term, Meet)
    if len(parts) == 2 and all(isinstance(p, Ground) for p in parts):
        return (parts[0].name, parts[1].name)
    return None


def _rewrite_once(
    term: Term, fks: frozenset, projs: frozenset
) -> tuple[Term, ConstraintSet] | None:
    """First redundant-join match in a deterministic traversal, or None."""
    if isinstance(term, Join):
        parts = _flatten(term, Join)
        ground_names = [p.name for p in parts if isinstance(p, Ground)]
        for j, cand in enumerate(parts):
            pair = _meet_pair(cand)
            if pair is None:
                continue
            for e, d in (pair, pair[::-1]):
                if (e, d) not in fks:
                    continue
                for e0 in ground_names:
                    if (e0, e) in projs:
                        new_parts = list(parts)
                        new_parts[j] = Ground(e)
                        used = ConstraintSet(
                            foreign_keys=((e, d),), projections=((e0, e),)
                        )
                        return _rebuild(new_parts, Join), used
    if isinstance(term, (Meet, Join, OrOp)):
        for side in ("left", "right"):
            child = getattr(term, side)
            hit = _rewrite_once(child, fks, projs)
            if hit is not None:
                new_child, used = hit
                if side == "left":
                    return type(term)(new_child, term.right), used
                return type(term)(term.left, new_child), used
    return None


def eliminate_redundant_joins(
    t: Term,
    c: ConstraintSet,
    env: Mapping[str, Relation],
    u: Universe | None = None,
    trials: int = 1000,
    seed: int = 2024,
) -> tuple[Term, list[RewriteStep]]:
    """Collapse every union operand ``E ^ D`` beside E0 to ``E``, to fixpoint.

    The environment must satisfy every declared constraint; each step is
    then verified by randomized evaluation before it is trusted.
    """
    if u is None:
        u = next((r.universe for r in env.values() if r.universe is not None), None)
    if u is None:
        raise UniverseRequiredError("rewrite verification needs a universe")
    violations = check_constraints(c, env)
    if violations:
        raise ConstraintViolationError(violations)
    fks = frozenset(c.foreign_keys)
    projs = frozenset(c.projections)
    steps: list[RewriteStep] = []
    current = t
    while True:
        hit = _rewrite_once(current, fks, projs)
        if hit is None:
            break
        new_term, used = hit
        step = RewriteStep(
            before=current,
            after=new_term,
            rule="redundant-join-elimination",
            justification=used,
        )
        verdict = verify_rewrite(current, new_term, c, u, trials=trials, seed=seed)
        if verdict.found:
            raise RewriteVerificationError(
                f"step {to_text(current)} => {to_text(new_term)} failed verification "
                f"on trial {verdict.trial}"
            )
        steps.append(step)
        current = new_term
    return current, steps


def _build_order(names: Sequence[str], c: ConstraintSet) -> list[str]:
    """Build-before users: FK filters need D first, projections need E first."""
    graph: dict[str, set[str]] = {n: set() for n in names}
    for e, d in c.foreign_keys:
        if e in graph and d in graph:
            graph[e].add(d)
    for e0, e in c.projections:
        if e0 in graph and e in graph:
            graph[e0].add(e)
    try:
        order = list(TopologicalSorter(graph).static_order())
    except CycleError as exc:
        raise UnsatisfiableConstraintsError(
            f"constraint dependencies contain a cycle: {exc.args[1]}"
        ) from exc
    return order


def _noise_rows(u: Universe, header: tuple[str, ...], rng: SplitMix64) -> frozenset:
    space = list(u.rows_on(header))
    mask = rng.bits(len(space)) if space else 0
    return frozenset(t for i, t in enumerate(space) if (mask >> i) & 1)


def _generate_env(
    names: Sequence[str],
    order: Sequence[str],
    c: ConstraintSet,
    u: Universe,
    rng: SplitMix64,
    noisy: bool,
) -> dict[str, Relation]:
    proj_sources = {}
    for e0, e in c.projections:
        proj_sources.setdefault(e0, []).append(e)
    env: dict[str, Relation] = {}
    for name in order:
        sources = [env[s] for s in proj_sources.get(name, []) if s in env]
        if sources:
            shared = set(sources[0].header)
            for s in sources[1:]:
                shared &= set(s.header)
            shared = tuple(sorted(shared))
            pick = rng.bits(len(shared)) if shared else 0
            header = tuple(a for i, a in enumerate(shared) if (pick >> i) & 1)
            # header containment is all the constraint demands of the
            # content; alternate between the pure projection and a noisy
            # partial one so both readings get exercised
            rows: frozenset = frozenset()
            for s in sources:
                kept = sorted(s.rows)
                if noisy:
                    keep_mask = rng.bits(len(kept)) if kept else 0
                    kept = [t for i, t in enumerate(kept) if (keep_mask >> i) & 1]
                rows |= project(Relation(s.header, frozenset(kept), u), header).rows
            if noisy and not c.require_empty_projection:
                rows |= _noise_rows(u, header, rng)
            if c.require_empty_projection:
                rows = frozenset()
            rel = Relation(header, rows, u)
        else:
            rel = random_relation(u, rng=rng)
        for e, d in c.foreign_keys:
            if e == name and d in env:
                rel = Relation(
                    rel.header, rel.rows - antijoin(rel, env[d]).rows, u
                )
        env[name] = rel
    return env


def verify_rewrite(
    before: Term,
    after: Term,
    c: ConstraintSet,
    u: Universe,
    trials: int = 1000,
    seed: int = 2024,
) -> Verdict:
    """Randomized equivalence check over constraint-satisfying instances.

    Instances are built directly: dependency-free names get random
    relations, foreign-key sources drop their dangling tuples, and
    projection targets get a projection of their source plus, on odd
    trials, noise tuples over the same header.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    names: dict[str, None] = {}
    for n in (*free_grounds(before), *free_grounds(after), *c.names()):
        names.setdefault(n)
    order = _build_order(tuple(names), c)
    rng = SplitMix64(seed)
    for trial in range(trials):
        env = _generate_env(tuple(names), order, c, u, rng, noisy=trial % 2 == 1)
        left = evaluate(before, env, u)
        right = evaluate(after, env, u)
        if left != right:
            return Falsified(trial=trial, assignment=dict(env), vacuous=0,
                             backend="object")
    return Holds(trials=trials, vacuous=0, backend="object")


def solve_antijoin(e: Relation, d: Relation, u: Universe) -> frozenset[Relation]:
    """All relations with e's header satisfying the two anti-join equations.

    The pair of equations states that e splits disjointly into (e join d)
    and the unknown; the full solution set is returned so uniqueness is an
    observable fact rather than an assumption.
    """
    space = list(u.rows_on(e.header))
    if len(space) > MAX_CANDIDATE_TUPLES:
        raise SearchSpaceError(
            f"{len(space)} candidate tuples over header {e.header} means "
            f"2**{len(space)} relations to try; the bound is "
            f"2**{MAX_CANDIDATE_TUPLES}"
        )
    ed = natural_join(e, d)
    empty_ed = natural_join(ed, dum())
    solutions = []
    for mask in range(1 << len(space)):
        rows = frozenset(t for i, t in enumerate(space) if (mask >> i) & 1)
        cand = Relation(e.header, rows, u)
        if inner_union(ed, cand) == e and natural_join(ed, cand) == empty_ed:
            solutions.append(cand)
    return frozenset(solutions)
