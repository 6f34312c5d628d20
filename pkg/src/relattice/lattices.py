"""Enumeration of small abstract lattices and separating-model search.

Lattices are generated as partial orders on labeled elements (a depth
first search over pair decisions with transitive-closure propagation),
then filtered to those where every pair has a least upper bound and a
greatest lower bound.  Operation tables follow the concrete orientation:
the meet table holds least upper bounds (mirroring natural join) and the
join table greatest lower bounds (mirroring inner union), so R01 denotes
the order's bottom and R10 its top.

R00 and R11 have no structural meaning in an abstract lattice; a
designation picks two elements to stand for them.  Separating-model
search tries every designation of every lattice, smallest sizes first;
within one size, lattices with fewer comparable pairs come first and the
generation order breaks remaining ties, which keeps results stable across
runs.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterator, Sequence

from . import engine
from .errors import SearchSpaceError
from .laws import SLA_IDS, law_by_id
from .terms import Const, Ground, Implication, Join, Meet, OrOp, Term, Var, expand_or

__all__ = [
    "FiniteLattice",
    "Counterexample",
    "enumerate_lattices",
    "lattice_count",
    "validate_lattice",
    "check_model",
    "find_separating_model",
    "replay",
    "is_diamond",
    "is_pentagon",
    "model_report",
    "model_dot",
    "MAX_SIZE",
]

MAX_SIZE = 7


@dataclass(frozen=True)
class FiniteLattice:
    """Operation tables plus the order they came from.

    ``leq`` holds one bitmask per element: bit j of leq[i] means i <= j.
    ``meet``/``join`` are flat n*n tables of element indices (meet = least
    upper bound under leq, matching the concrete orientation).
    """

    n: int
    leq: tuple[int, ...]
    meet: tuple[int, ...]
    join: tuple[int, ...]
    r00: int | None = None
    r11: int | None = None

    def meet_at(self, i: int, j: int) -> int:
        return self.meet[i * self.n + j]

    def join_at(self, i: int, j: int) -> int:
        return self.join[i * self.n + j]

    def le(self, i: int, j: int) -> bool:
        return bool((self.leq[i] >> j) & 1)

    @property
    def bottom(self) -> int:
        full = (1 << self.n) - 1
        for i in range(self.n):
            if self.leq[i] == full:
                return i
        raise ValueError("no bottom element")

    @property
    def top(self) -> int:
        for i in range(self.n):
            if self.leq[i] == (1 << i):
                return i
        raise ValueError("no top element")

    @property
    def designated(self) -> bool:
        return self.r00 is not None and self.r11 is not None

    def designate(self, r00: int, r11: int) -> "FiniteLattice":
        return replace(self, r00=r00, r11=r11)

    def comparabilities(self) -> int:
        return sum(bin(row).count("1") for row in self.leq)

    def covers(self) -> list[tuple[int, int]]:
        """Hasse diagram edges (lower, upper), deterministic order."""
        out = []
        for i in range(self.n):
            for j in range(self.n):
                if i == j or not self.le(i, j):
                    continue
                strictly_between = self.leq[i] & ~(1 << i) & ~(1 << j)
                if any(
                    k != i and k != j and self.le(i, k) and self.le(k, j)
                    for k in range(self.n)
                    if (strictly_between >> k) & 1
                ):
                    continue
                out.append((i, j))
        return out


@dataclass(frozen=True)
class Counterexample:
    lattice: FiniteLattice
    law_id: str
    assignment: dict[str, int]


def _lub(up: Sequence[int], i: int, j: int) -> int | None:
    common = up[i] & up[j]
    if not common:
        return None
    probe = common
    while probe:
        m = (probe & -probe).bit_length() - 1
        if common & ~up[m] == 0:
            return m
        probe &= probe - 1
    return None


def _enumerate_orders(n: int) -> Iterator[tuple[int, ...]]:
    """All partial orders on n labeled elements, as up-set bitmask rows."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    index_of = {pair: k for k, pair in enumerate(pairs)}
    up = [1 << i for i in range(n)]
    down = [1 << i for i in range(n)]

    def related(i: int, j: int) -> bool:
        return bool((up[i] >> j) & 1 or (up[j] >> i) & 1)

    def try_add(a: int, b: int, idx: int) -> list[tuple[int, int]] | None:
        """Close a <= b transitively; fail on conflicts with earlier decisions."""
        added: list[tuple[int, int]] = []
        lows = down[a]
        highs = up[b]
        probe_low = lows
        while probe_low:
            x = (probe_low & -probe_low).bit_length() - 1
            probe_low &= probe_low - 1
            probe_high = highs
            while probe_high:
                y = (probe_high & -probe_high).bit_length() - 1
                probe_high &= probe_high - 1
                if (up[x] >> y) & 1:
                    continue
                if (up[y] >> x) & 1:  # would create a cycle
                    _rollback(added)
                    return None
                key = (x, y) if x < y else (y, x)
                if index_of[key] < idx:  # that pair was fixed incomparable
                    _rollback(added)
                    return None
                up[x] |= 1 << y
                down[y] |= 1 << x
                added.append((x, y))
        return added

    def _rollback(added: list[tuple[int, int]]) -> None:
        for x, y in reversed(added):
            up[x] &= ~(1 << y)
            down[y] &= ~(1 << x)

    def rec(idx: int) -> Iterator[tuple[int, ...]]:
        if idx == len(pairs):
            yield tuple(up)
            return
        i, j = pairs[idx]
        if related(i, j):
            yield from rec(idx + 1)
            return
        yield from rec(idx + 1)  # leave incomparable
        for a, b in ((i, j), (j, i)):
            added = try_add(a, b, idx)
            if added is not None:
                yield from rec(idx + 1)
                _rollback(added)

    yield from rec(0)


def _lattice_from_order(up: tuple[int, ...]) -> FiniteLattice | None:
    n = len(up)
    down = [0] * n
    for i in range(n):
        row = up[i]
        while row:
            j = (row & -row).bit_length() - 1
            row &= row - 1
            down[j] |= 1 << i
    meet = [0] * (n * n)
    join = [0] * (n * n)
    for i in range(n):
        for j in range(i, n):
            m = _lub(up, i, j)
            if m is None:
                return None
            g = _lub(down, i, j)  # glb is the lub of the reversed order
            if g is None:
                return None
            meet[i * n + j] = meet[j * n + i] = m
            join[i * n + j] = join[j * n + i] = g
    return FiniteLattice(n, tuple(up), tuple(meet), tuple(join))


_CACHE: dict[int, tuple[FiniteLattice, ...]] = {}


def _lattices_of_size(n: int) -> tuple[FiniteLattice, ...]:
    if n not in _CACHE:
        found = []
        for up in _enumerate_orders(n):
            lat = _lattice_from_order(up)
            if lat is not None:
                found.append(lat)
        order = sorted(range(len(found)),
                       key=lambda k: (found[k].comparabilities(), k))
        _CACHE[n] = tuple(found[k] for k in order)
    return _CACHE[n]


def enumerate_lattices(n: int, dedup: bool = False) -> Iterator[FiniteLattice]:
    """Every lattice order on n labeled elements, fewest comparabilities first.

    With dedup, one representative per isomorphism class is kept (brute
    force over relabelings; intended for n <= 5).
    """
    if not 1 <= n <= MAX_SIZE:
        raise SearchSpaceError(f"size must be between 1 and {MAX_SIZE}, got {n}")
    lattices = _lattices_of_size(n)
    if not dedup:
        yield from lattices
        return
    from itertools import permutations

    seen = set()
    for lat in lattices:
        best = None
        for perm in permutations(range(n)):
            relabeled = tuple(
                _apply_perm_row(lat.leq[perm.index(i)], perm) for i in range(n)
            )
            if best is None or relabeled < best:
                best = relabeled
        if best not in seen:
            seen.add(best)
            yield lat


def _apply_perm_row(row: int, perm: Sequence[int]) -> int:
    out = 0
    i = 0
    while row:
        if row & 1:
            out |= 1 << perm[i]
        row >>= 1
        i += 1
    return out


def lattice_count(n: int) -> int:
    return len(_lattices_of_size(n))


def validate_lattice(lat: FiniteLattice) -> list[str]:
    """Re-check the lattice identities directly from the tables."""
    issues = []
    n = lat.n
    for i in range(n):
        for j in range(n):
            if lat.meet_at(i, j) != lat.meet_at(j, i):
                issues.append(f"meet not commutative at ({i},{j})")
            if lat.join_at(i, j) != lat.join_at(j, i):
                issues.append(f"join not commutative at ({i},{j})")
            if lat.meet_at(i, lat.join_at(i, j)) != i:
                issues.append(f"meet-absorption fails at ({i},{j})")
            if lat.join_at(i, lat.meet_at(i, j)) != i:
                issues.append(f"join-absorption fails at ({i},{j})")
            for k in range(n):
                if lat.meet_at(lat.meet_at(i, j), k) != lat.meet_at(i, lat.meet_at(j, k)):
                    issues.append(f"meet not associative at ({i},{j},{k})")
                if lat.join_at(lat.join_at(i, j), k) != lat.join_at(i, lat.join_at(j, k)):
                    issues.append(f"join not associative at ({i},{j},{k})")
    return issues


def _needs_designation(term: Term) -> bool:
    if isinstance(term, Const):
        return term.symbol in ("R00", "R11")
    if isinstance(term, (Meet, Join, OrOp)):
        return _needs_designation(term.left) or _needs_designation(term.right)
    return False


def _abstract_consts(lat: FiniteLattice, imp: Implication) -> tuple[int, int, int, int]:
    needs = any(
        _needs_designation(side)
        for eq in (*imp.premises, imp.conclusion)
        for side in (eq.lhs, eq.rhs)
    )
    if needs and not lat.designated:
        raise ValueError("law mentions R00/R11 but the lattice has no designation")
    r00 = lat.r00 if lat.r00 is not None else 0
    r11 = lat.r11 if lat.r11 is not None else 0
    return (r00, lat.bottom, lat.top, r11)


def check_model(
    lat: FiniteLattice,
    law_ids: Sequence[str],
    backend: str | None = None,
) -> Counterexample | None:
    """Exhaustively check laws over all assignments; first violation wins."""
    for law_id in law_ids:
        law = law_by_id(law_id)
        directions = [law.statement]
        if law.iff:
            directions.append(
                Implication((law.statement.conclusion,), law.statement.premises[0])
            )
        for imp in directions:
            consts = _abstract_consts(lat, imp)
            plan = engine.compile_abstract(imp, consts)
            hit = engine.lattice_violation(lat.n, lat.meet, lat.join, plan, backend)
            if hit is not None:
                assignment = dict(zip(plan.var_names, hit))
                return Counterexample(lat, law.id, assignment)
    return None


def find_separating_model(
    assume: Sequence[str],
    refute: str,
    max_size: int = 5,
    backend: str | None = None,
) -> tuple[FiniteLattice, Counterexample] | None:
    """Smallest designated lattice satisfying ``assume`` and falsifying ``refute``.

    Ties inside one size resolve by enumeration order, then by designation
    order (r00 index, then r11 index).  The six lattice identities hold by
    construction and are skipped when listed.
    """
    if max_size > MAX_SIZE:
        raise SearchSpaceError(f"max_size is capped at {MAX_SIZE}")
    law_by_id(refute)
    assumed = [a for a in assume if a not in SLA_IDS]
    for a in assumed:
        law_by_id(a)
    for n in range(1, max_size + 1):
        for lat in enumerate_lattices(n):
            for r00 in range(n):
                for r11 in range(n):
                    cand = lat.designate(r00, r11)
                    if check_model(cand, assumed, backend) is not None:
                        continue
                    hit = check_model(cand, [refute], backend)
                    if hit is not None:
                        return cand, hit
    return None


def _eval_abstract(term: Term, lat: FiniteLattice, assignment: dict[str, int]) -> int:
    """Independent recursive evaluator used to replay counterexamples."""
    term = expand_or(term)

    def rec(t: Term) -> int:
        if isinstance(t, Var):
            return assignment[t.name]
        if isinstance(t, Ground):
            raise ValueError("ground names have no abstract meaning")
        if isinstance(t, Const):
            if t.symbol == "R00":
                assert lat.r00 is not None
                return lat.r00
            if t.symbol == "R01":
                return lat.bottom
            if t.symbol == "R10":
                return lat.top
            assert lat.r11 is not None
            return lat.r11
        if isinstance(t, Meet):
            return lat.meet_at(rec(t.left), rec(t.right))
        if isinstance(t, Join):
            return lat.join_at(rec(t.left), rec(t.right))
        raise TypeError(f"not an abstract term: {t!r}")

    return rec(term)


def replay(cx: Counterexample) -> bool:
    """True when the stored assignment genuinely falsifies the law."""
    law = law_by_id(cx.law_id)
    directions = [law.statement]
    if law.iff:
        directions.append(
            Implication((law.statement.conclusion,), law.statement.premises[0])
        )
    for imp in directions:
        premises_hold = all(
            _eval_abstract(eq.lhs, cx.lattice, cx.assignment)
            == _eval_abstract(eq.rhs, cx.lattice, cx.assignment)
            for eq in imp.premises
        )
        if not premises_hold:
            continue
        eq = imp.conclusion
        if _eval_abstract(eq.lhs, cx.lattice, cx.assignment) != _eval_abstract(
            eq.rhs, cx.lattice, cx.assignment
        ):
            return True
    return False


def _degree_multiset(lat: FiniteLattice) -> list[int]:
    return sorted(bin(row).count("1") for row in lat.leq)


def is_diamond(lat: FiniteLattice) -> bool:
    """Five elements: bottom, top, and three mutually incomparable middles."""
    return lat.n == 5 and _degree_multiset(lat) == [1, 2, 2, 2, 5]


def is_pentagon(lat: FiniteLattice) -> bool:
    """Five elements: bottom, top, a two-element chain, and one loner."""
    return lat.n == 5 and _degree_multiset(lat) == [1, 2, 2, 3, 5]


def model_report(lat: FiniteLattice, cx: Counterexample | None = None) -> str:
    """Text rendering: order edges, designation, and any counterexample."""
    lines = [f"elements: {lat.n} (0..{lat.n - 1})"]
    edges = lat.covers()
    if edges:
        lines.append("order (cover edges, lower < upper):")
        for i, j in edges:
            lines.append(f"  {i} < {j}")
    else:
        lines.append("order: trivial (single element)")
    shape = "diamond" if is_diamond(lat) else "pentagon" if is_pentagon(lat) else None
    if shape:
        lines.append(f"shape: {shape}")
    if lat.designated:
        lines.append(f"designation: R00 = {lat.r00}, R11 = {lat.r11}")
        lines.append(f"constants: R01 (bottom) = {lat.bottom}, R10 (top) = {lat.top}")
    if cx is not None:
        assign = ", ".join(f"{k} = {v}" for k, v in sorted(cx.assignment.items()))
        lines.append(f"falsifies: {cx.law_id} with {assign or 'the empty assignment'}")
    return "\n".join(lines)


def model_dot(lat: FiniteLattice) -> str:
    """Hasse diagram in DOT, bottom drawn below top."""
    lines = ["digraph lattice {", "  rankdir=BT;"]
    for i in range(lat.n):
        marks = []
        if lat.r00 == i:
            marks.append("R00")
        if lat.r11 == i:
            marks.append("R11")
        label = str(i) if not marks else f"{i} ({','.join(marks)})"
        lines.append(f'  n{i} [label="{label}"];')
    for i, j in lat.covers():
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
