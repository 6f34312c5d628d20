"""Randomized law checking over concrete universes.

A check draws random assignments, skips trials whose premises fail, and
compares both sides of the conclusion.  Three execution paths produce
identical verdicts for a given (seed, trials) pair: compiled kernels,
pure-Python kernels, and an object-level evaluator used for universes too
large for the word-sized mask encoding.  The object path exists mostly to
keep honesty: it shares no evaluation code with the kernels, so the
engine parity tests can compare them on common ground.

The default sweep covers one universe per attribute-count/domain-size
shape with at most 3 attributes of at most 3 values; since values are
opaque text, any universe of such a shape is isomorphic to a sweep entry.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from . import engine
from .engine.tables import UniverseTables, decode_rows
from .errors import UnboundNameError
from .laws import Law
from .relations import Relation, Universe, universe
from .rng import SplitMix64
from .terms import Implication, evaluate

__all__ = [
    "Holds",
    "Falsified",
    "Verdict",
    "check_law",
    "check_statement",
    "random_relation",
    "default_universe",
    "sweep_universes",
    "universe_label",
    "run_catalogue",
    "CatalogueReport",
]


@dataclass(frozen=True)
class Holds:
    trials: int
    vacuous: int  # trials whose premises did not all hold
    backend: str

    @property
    def found(self) -> bool:
        return False


@dataclass(frozen=True)
class Falsified:
    trial: int
    assignment: dict[str, Relation]
    vacuous: int
    backend: str

    @property
    def found(self) -> bool:
        return True


Verdict = Holds | Falsified

_TABLES_CACHE: dict[Universe, UniverseTables] = {}


def tables_for(u: Universe) -> UniverseTables:
    tables = _TABLES_CACHE.get(u)
    if tables is None:
        tables = _TABLES_CACHE[u] = UniverseTables(u)
    return tables


def default_universe() -> Universe:
    """The 2x2 universe used by the worked examples: x in {1,2}, y in {a,b}."""
    return universe({"x": ["1", "2"], "y": ["a", "b"]})


_SWEEP_ATTRS = ("x", "y", "z")
_SWEEP_VALUES = {"x": ("1", "2", "3"), "y": ("a", "b", "c"), "z": ("p", "q", "r")}


def sweep_universes(max_attrs: int = 3, max_values: int = 3) -> list[Universe]:
    """One universe per (attribute count, domain-size multiset) shape."""
    if max_attrs > len(_SWEEP_ATTRS):
        raise ValueError(f"sweep supports at most {len(_SWEEP_ATTRS)} attributes")
    shapes: list[tuple[int, ...]] = [()]
    for k in range(1, max_attrs + 1):
        def grow(prefix: tuple[int, ...], lo: int):
            if len(prefix) == k:
                shapes.append(prefix)
                return
            for size in range(lo, max_values + 1):
                grow(prefix + (size,), size)
        grow((), 1)
    out = []
    for shape in shapes:
        domains = {}
        for attr, size in zip(_SWEEP_ATTRS, shape):
            domains[attr] = _SWEEP_VALUES[attr][:size]
        out.append(universe(domains))
    return out


def universe_label(u: Universe) -> str:
    if not u.domains:
        return "empty"
    return ",".join(f"{attr}:{len(values)}" for attr, values in u.domains)


def random_relation(
    u: Universe,
    header: Iterable[str] | None = None,
    seed: int | None = None,
    rng: SplitMix64 | None = None,
) -> Relation:
    """Uniform random subset of the product over header; random header if None.

    Consumes the shared draw discipline: one word for the header when it
    is drawn, then one word per 64 tuple-count bits for the body.
    """
    if rng is None:
        rng = SplitMix64(0 if seed is None else seed)
    attrs = u.attributes
    if header is None:
        bits = rng.next_u64() & ((1 << len(attrs)) - 1)
        header = tuple(a for i, a in enumerate(attrs) if (bits >> i) & 1)
    else:
        header = tuple(sorted(header))
    size = u.product_count(header)
    mask = _draw_mask(rng, size)
    return Relation(header, decode_rows(u, header, mask), u)


def _draw_mask(rng: SplitMix64, size: int) -> int:
    if size >= 64:
        return rng.bits(size)
    return rng.next_u64() & ((1 << size) - 1)


def _direction_pair(law_statement: Implication, iff: bool) -> tuple[Implication, ...]:
    if not iff:
        return (law_statement,)
    forward = law_statement
    backward = Implication((law_statement.conclusion,), law_statement.premises[0])
    return (forward, backward)


def check_statement(
    imp: Implication,
    u: Universe,
    trials: int = 1000,
    seed: int = 42,
    env: Mapping[str, Relation] | None = None,
    groups: Sequence[Sequence[str]] = (),
    backend: str | None = None,
) -> Verdict:
    """Check one implication over one universe."""
    tables = tables_for(u)
    if tables.eligible and backend != "object":
        plan = engine.compile_plan(imp, tables, env, groups)
        found, stop, witness, hits = engine.run_check(tables, plan, trials, seed, backend)
        used = backend or engine.active_backend()
        if found:
            assignment = {
                name: tables.relation_of(h, m)
                for name, (h, m) in zip(plan.var_names, witness)
            }
            return Falsified(stop, assignment, stop + 1 - hits, used)
        return Holds(trials, trials - hits, used)
    return _check_objects(imp, u, trials, seed, env, groups)


def check_law(
    law: Law,
    u: Universe,
    trials: int = 1000,
    seed: int = 42,
    env: Mapping[str, Relation] | None = None,
    backend: str | None = None,
) -> Verdict:
    """Check a catalogue law; equivalences run both directions on one seed."""
    worst_vacuous = 0
    trials_seen = 0
    used = backend or engine.active_backend()
    for direction in _direction_pair(law.statement, law.iff):
        verdict = check_statement(direction, u, trials, seed, env, law.groups, backend)
        if isinstance(verdict, Falsified):
            return verdict
        worst_vacuous = max(worst_vacuous, verdict.vacuous)
        trials_seen = verdict.trials
        used = verdict.backend
    return Holds(trials_seen, worst_vacuous, used)


def _check_objects(
    imp: Implication,
    u: Universe,
    trials: int,
    seed: int,
    env: Mapping[str, Relation] | None,
    groups: Sequence[Sequence[str]],
) -> Verdict:
    """Object-level fallback sharing the kernel draw discipline exactly."""
    from .terms import free_grounds, free_vars

    env = dict(env or {})
    var_names: dict[str, None] = {}
    for eq in (*imp.premises, imp.conclusion):
        for side in (eq.lhs, eq.rhs):
            for name in free_vars(side):
                var_names.setdefault(name)
            missing = [g for g in free_grounds(side) if g not in env]
            if missing:
                raise UnboundNameError(missing)
    names = tuple(var_names)

    group_of: dict[str, int] = {}
    next_group = 0
    for bundle in groups:
        members = [n for n in bundle if n in var_names]
        if len(members) < 2:
            continue
        for n in members:
            group_of.setdefault(n, next_group)
        next_group += 1
    grouped = next_group > 0
    slot_group = []
    for n in names:
        if n in group_of:
            slot_group.append(group_of[n])
        else:
            slot_group.append(next_group)
            next_group += 1

    rng = SplitMix64(seed)
    attrs = u.attributes
    k = len(attrs)
    vacuous = 0
    headers: list[tuple[str, ...]] = [()] * len(names)

    for trial in range(trials):
        if grouped and trial % 2 == 0:
            gh = [rng.next_u64() & ((1 << k) - 1) for _ in range(next_group)]
            hbits = [gh[g] for g in slot_group]
        else:
            hbits = [rng.next_u64() & ((1 << k) - 1) for _ in names]
        for i, hb in enumerate(hbits):
            headers[i] = tuple(a for j, a in enumerate(attrs) if (hb >> j) & 1)
        assignment = dict(env)
        for name, header in zip(names, headers):
            mask = _draw_mask(rng, u.product_count(header))
            assignment[name] = Relation(header, decode_rows(u, header, mask), u)

        ok = True
        for eq in imp.premises:
            if evaluate(eq.lhs, assignment, u) != evaluate(eq.rhs, assignment, u):
                ok = False
                break
        if not ok:
            vacuous += 1
            continue
        eq = imp.conclusion
        if evaluate(eq.lhs, assignment, u) != evaluate(eq.rhs, assignment, u):
            witness = {name: assignment[name] for name in names}
            return Falsified(trial, witness, vacuous, "object")
    return Holds(trials, vacuous, "object")


@dataclass(frozen=True)
class CatalogueReport:
    """Verdicts for a set of laws across a sweep of universes."""

    trials: int
    seed: int
    backend: str
    rows: tuple[tuple[str, str, Verdict], ...]  # (law id, universe label, verdict)

    def verdicts_for(self, law_id: str) -> list[tuple[str, Verdict]]:
        return [(label, v) for lid, label, v in self.rows if lid == law_id]

    def law_ok(self, law: Law) -> bool:
        """Whether the observed verdicts agree with the law's status."""
        verdicts = [v for lid, _, v in self.rows if lid == law.id]
        if law.status.value == "valid":
            return all(not v.found for v in verdicts)
        if law.status.value == "invalid":
            return any(v.found for v in verdicts)
        return True

    def to_json(self) -> dict:
        from .relations import relation_to_json

        rows = []
        for law_id, label, v in self.rows:
            entry = {"law": law_id, "universe": label, "holds": not v.found,
                     "vacuous_trials": v.vacuous, "backend": v.backend}
            if isinstance(v, Falsified):
                entry["trial"] = v.trial
                entry["assignment"] = {
                    n: relation_to_json(r) for n, r in sorted(v.assignment.items())
                }
            else:
                entry["trials"] = v.trials
            rows.append(entry)
        return {"trials": self.trials, "seed": self.seed, "backend": self.backend,
                "results": rows}


def run_catalogue(
    laws: Sequence[Law],
    universes: Sequence[Universe] | None = None,
    trials: int = 1000,
    seed: int = 42,
    backend: str | None = None,
) -> CatalogueReport:
    if universes is None:
        universes = sweep_universes()
    rows = []
    for law in laws:
        for u in universes:
            verdict = check_law(law, u, trials, seed, backend=backend)
            rows.append((law.id, universe_label(u), verdict))
    return CatalogueReport(trials, seed, backend or engine.active_backend(), tuple(rows))
