"""Pure-Python kernels: the reference implementation of the hot loops.

The compiled module _kernels mirrors these functions exactly, including
random-stream consumption, so a (seed, trials) pair names the same
experiment on either engine.

Draw discipline per trial, shared by both engines and by the
object-level evaluator in checking.py:

    1. headers: one next_u64 per group on grouped trials (trial index
       even and the plan has groups), otherwise one per variable slot,
       masked to the header-bit width;
    2. masks: one next_u64 per variable slot, masked to the tuple count
       of the slot's header (a full word when the count is 64).

Grouped trials exist so that premises which compare headers, such as the
conditional distributivity criterion, are exercised rather than left
vacuous.
"""

from __future__ import annotations

from ..rng import SplitMix64
from .plan import CONST, JOIN, LOADF, LOADV, MEET

__all__ = ["run_check", "lattice_violation"]


def _eval_mask(prog, h, m, fixed, tables):
    sizes = tables.sizes
    sh: list[int] = []
    sm: list[int] = []
    for op, arg in zip(prog.ops, prog.args):
        if op == LOADV:
            sh.append(h[arg])
            sm.append(m[arg])
        elif op == LOADF:
            fh, fm = fixed[arg]
            sh.append(fh)
            sm.append(fm)
        elif op == CONST:
            if arg == 0:
                sh.append(0); sm.append(0)
            elif arg == 1:
                sh.append(0); sm.append(1)
            elif arg == 2:
                sh.append(tables.full); sm.append(0)
            else:
                sh.append(tables.full); sm.append(tables.all_mask)
        elif op == MEET:
            h2 = sh.pop(); m2 = sm.pop()
            h1 = sh[-1]; m1 = sm[-1]
            hu = h1 | h2
            if h1 == h2:
                r = m1 & m2
            else:
                p1 = tables.proj(hu, h1)
                p2 = tables.proj(hu, h2)
                r = 0
                for t in range(sizes[hu]):
                    if (m1 >> p1[t]) & 1 and (m2 >> p2[t]) & 1:
                        r |= 1 << t
            sh[-1] = hu; sm[-1] = r
        else:  # JOIN
            h2 = sh.pop(); m2 = sm.pop()
            h1 = sh[-1]; m1 = sm[-1]
            hi = h1 & h2
            if h1 == h2:
                r = m1 | m2
            else:
                d1 = tables.down(h1, hi)
                d2 = tables.down(h2, hi)
                r = 0
                for s in range(sizes[hi]):
                    if (m1 & d1[s]) or (m2 & d2[s]):
                        r |= 1 << s
            sh[-1] = hi; sm[-1] = r
    return sh[0], sm[0]


def run_check(tables, plan, trials: int, seed: int):
    """Randomized search for a statement violation over one universe.

    Returns (found, trials_run, witness, premise_hits) where witness is a
    list of (header bits, tuple mask) per variable slot on failure, and
    premise_hits counts trials whose premises all held.
    """
    rng = SplitMix64(seed)
    nv = plan.n_vars
    hmask = tables.H - 1
    sizes = tables.sizes
    programs = plan.programs
    n_eq = plan.n_equations
    fixed = plan.fixed
    groups = plan.groups

    h = [0] * nv
    m = [0] * nv
    gh = [0] * plan.n_groups
    premise_hits = 0

    for trial in range(trials):
        if plan.grouped and trial % 2 == 0:
            for g in range(plan.n_groups):
                gh[g] = rng.next_u64() & hmask
            for i in range(nv):
                h[i] = gh[groups[i]]
        else:
            for i in range(nv):
                h[i] = rng.next_u64() & hmask
        for i in range(nv):
            s = sizes[h[i]]
            if s >= 64:
                m[i] = rng.next_u64()
            else:
                m[i] = rng.next_u64() & ((1 << s) - 1)

        ok = True
        for e in range(n_eq - 1):
            if _eval_mask(programs[2 * e], h, m, fixed, tables) != _eval_mask(
                programs[2 * e + 1], h, m, fixed, tables
            ):
                ok = False
                break
        if not ok:
            continue
        premise_hits += 1
        if _eval_mask(programs[-2], h, m, fixed, tables) != _eval_mask(
            programs[-1], h, m, fixed, tables
        ):
            return True, trial, list(zip(h, m)), premise_hits
    return False, trials, None, premise_hits


def _eval_lattice(prog, a, meet, join, n):
    stack: list[int] = []
    for op, arg in zip(prog.ops, prog.args):
        if op == LOADV:
            stack.append(a[arg])
        elif op == CONST:
            stack.append(arg)
        elif op == MEET:
            y = stack.pop()
            stack[-1] = meet[stack[-1] * n + y]
        elif op == JOIN:
            y = stack.pop()
            stack[-1] = join[stack[-1] * n + y]
        else:
            raise ValueError("ground operands have no abstract meaning")
    return stack[0]


def lattice_violation(n: int, meet, join, plan):
    """Exhaustive assignment search on an n-element lattice.

    meet and join are flat n*n element-index tables following the concrete
    orientation (meet = least upper bound, join = greatest lower bound).
    Returns the first violating assignment as a tuple, or None.
    """
    nv = plan.n_vars
    programs = plan.programs
    n_eq = plan.n_equations
    a = [0] * nv
    total = n ** nv
    for code in range(total):
        c = code
        for i in range(nv):
            a[i] = c % n
            c //= n
        ok = True
        for e in range(n_eq - 1):
            if _eval_lattice(programs[2 * e], a, meet, join, n) != _eval_lattice(
                programs[2 * e + 1], a, meet, join, n
            ):
                ok = False
                break
        if not ok:
            continue
        if _eval_lattice(programs[-2], a, meet, join, n) != _eval_lattice(
            programs[-1], a, meet, join, n
        ):
            return tuple(a)
    return None
