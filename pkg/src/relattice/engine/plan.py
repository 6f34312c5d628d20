"""Compilation of statements into postfix programs for the kernels.

A program is a pair of parallel tuples (ops, args).  Opcodes:

    LOADV i   push variable slot i
    LOADF i   push fixed operand i (a ground name resolved ahead of time)
    CONST c   push constant c (what c means is up to the kernel family)
    MEET      pop two, push their natural join
    JOIN      pop two, push their inner union

The + operator never reaches a program; it is macro-expanded into its
defining lattice term first.

Two kernel families share this format.  The mask kernels interpret values
as (header bits, tuple mask) pairs over a UniverseTables; CONST arguments
are 0..3 for R00, R01, R10, R11.  The abstract-lattice kernels interpret
values as element indices of a finite lattice, and CONST arguments are
element indices resolved during compilation.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ..errors import UnboundNameError
from ..terms import (
    Const,
    Equation,
    Ground,
    Implication,
    Join,
    Meet,
    Term,
    Var,
    expand_or,
    free_grounds,
    free_vars,
)

__all__ = ["LOADV", "LOADF", "CONST", "MEET", "JOIN", "Program", "Plan",
           "compile_plan", "compile_abstract", "CONST_ORDER"]

LOADV, LOADF, CONST, MEET, JOIN = range(5)

CONST_ORDER = ("R00", "R01", "R10", "R11")
_CONST_CODE = {s: i for i, s in enumerate(CONST_ORDER)}


@dataclass(frozen=True)
class Program:
    ops: tuple[int, ...]
    args: tuple[int, ...]


def _emit(term: Term, var_slot, fixed_slot, const_arg, ops, args) -> None:
    if isinstance(term, Var):
        ops.append(LOADV)
        args.append(var_slot[term.name])
    elif isinstance(term, Ground):
        ops.append(LOADF)
        args.append(fixed_slot[term.name])
    elif isinstance(term, Const):
        ops.append(CONST)
        args.append(const_arg(term.symbol))
    elif isinstance(term, (Meet, Join)):
        _emit(term.left, var_slot, fixed_slot, const_arg, ops, args)
        _emit(term.right, var_slot, fixed_slot, const_arg, ops, args)
        ops.append(MEET if isinstance(term, Meet) else JOIN)
        args.append(0)
    else:
        raise TypeError(f"cannot compile {term!r}; expand + first")


def _compile_term(term: Term, var_slot, fixed_slot, const_arg) -> Program:
    ops: list[int] = []
    args: list[int] = []
    _emit(expand_or(term), var_slot, fixed_slot, const_arg, ops, args)
    return Program(tuple(ops), tuple(args))


def _statement_names(imp: Implication) -> tuple[tuple[str, ...], tuple[str, ...]]:
    vs: dict[str, None] = {}
    gs: dict[str, None] = {}
    for eq in (*imp.premises, imp.conclusion):
        for side in (eq.lhs, eq.rhs):
            for name in free_vars(side):
                vs.setdefault(name)
            for name in free_grounds(side):
                gs.setdefault(name)
    return tuple(vs), tuple(gs)


@dataclass
class Plan:
    """A compiled statement for the mask kernels.

    Programs come in lhs/rhs pairs, premises first, conclusion last.
    Variable slots are numbered by first occurrence.  groups[i] is the
    header-group id of slot i; when grouped is true, even-numbered trials
    draw one header per group instead of one per variable, which keeps
    premises that relate headers satisfiable often enough to matter.
    """

    var_names: tuple[str, ...]
    groups: tuple[int, ...]
    n_groups: int
    grouped: bool
    fixed: tuple[tuple[int, int], ...]
    programs: tuple[Program, ...]
    _flat: dict = field(default_factory=dict, repr=False)

    @property
    def n_vars(self) -> int:
        return len(self.var_names)

    @property
    def n_equations(self) -> int:
        return len(self.programs) // 2

    def flat(self):
        """Arrays for the compiled kernel, built on first use."""
        if not self._flat:
            ops = array("b")
            args = array("i")
            bounds = array("i", [0])
            for prog in self.programs:
                ops.extend(prog.ops)
                args.extend(prog.args)
                bounds.append(len(ops))
            self._flat["ops"] = ops
            self._flat["args"] = args
            self._flat["bounds"] = bounds
            self._flat["groups"] = array("i", self.groups or [0])
            self._flat["fixed_h"] = array("i", [h for h, _ in self.fixed] or [0])
            self._flat["fixed_m"] = array("Q", [m for _, m in self.fixed] or [0])
        return self._flat


def compile_plan(
    imp: Implication,
    tables,
    env: Mapping[str, "object"] | None = None,
    groups: Sequence[Sequence[str]] = (),
) -> Plan:
    """Compile a statement against a universe's tables.

    ``groups`` lists variable names whose headers should coincide on the
    grouped trials; unnamed variables each get their own group.
    """
    var_names, ground_names = _statement_names(imp)
    env = env or {}
    missing = [g for g in ground_names if g not in env]
    if missing:
        raise UnboundNameError(missing)

    var_slot = {name: i for i, name in enumerate(var_names)}
    fixed_slot = {name: i for i, name in enumerate(ground_names)}
    fixed = tuple(tables.mask_of(env[name]) for name in ground_names)

    group_of: dict[str, int] = {}
    next_group = 0
    for bundle in groups:
        members = [name for name in bundle if name in var_slot]
        if len(members) < 2:
            continue
        for name in members:
            if name not in group_of:
                group_of[name] = next_group
        next_group += 1
    grouped = next_group > 0
    slot_groups = []
    for name in var_names:
        if name in group_of:
            slot_groups.append(group_of[name])
        else:
            slot_groups.append(next_group)
            next_group += 1
    n_groups = next_group if var_names else 0

    programs = []
    for eq in (*imp.premises, imp.conclusion):
        for side in (eq.lhs, eq.rhs):
            programs.append(_compile_term(side, var_slot, fixed_slot, _CONST_CODE.__getitem__))
    return Plan(var_names, tuple(slot_groups), n_groups, grouped, fixed, tuple(programs))


def compile_abstract(imp: Implication, consts: tuple[int, int, int, int]) -> Plan:
    """Compile for the abstract-lattice kernels.

    ``consts`` gives the element indices standing for R00, R01, R10, R11.
    Ground names are not meaningful in an abstract lattice.
    """
    var_names, ground_names = _statement_names(imp)
    if ground_names:
        raise UnboundNameError(ground_names)
    var_slot = {name: i for i, name in enumerate(var_names)}
    const_arg = lambda symbol: consts[_CONST_CODE[symbol]]
    programs = []
    for eq in (*imp.premises, imp.conclusion):
        for side in (eq.lhs, eq.rhs):
            programs.append(_compile_term(side, var_slot, {}, const_arg))
    return Plan(var_names, tuple(range(len(var_names))), len(var_names), False, (), tuple(programs))
