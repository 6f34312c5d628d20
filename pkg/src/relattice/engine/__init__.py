"""Kernel engine selection.

The randomized law checker and the exhaustive lattice checker each exist
twice: once as compiled Cython (built at install time when a C compiler
is around) and once in pure Python.  Import picks the compiled module
when it is present unless RELATTICE_PURE=1 forces the fallback.  Both
implementations consume identical random streams, so verdicts do not
depend on which one is active; run_check and lattice_violation accept a
``backend`` override so the tests and the benchmark can pin one side.
"""

from __future__ import annotations

import os

from . import _kernels_py
from .plan import Plan, compile_abstract, compile_plan
from .tables import UniverseTables

__all__ = [
    "COMPILED_AVAILABLE",
    "active_backend",
    "available_backends",
    "run_check",
    "lattice_violation",
    "UniverseTables",
    "Plan",
    "compile_plan",
    "compile_abstract",
]

_compiled = None
if not os.environ.get("RELATTICE_PURE"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:
        _compiled = None

COMPILED_AVAILABLE = _compiled is not None


def active_backend() -> str:
    return "compiled" if COMPILED_AVAILABLE else "pure"


def available_backends() -> tuple[str, ...]:
    return ("compiled", "pure") if COMPILED_AVAILABLE else ("pure",)


def _resolve(backend: str | None):
    if backend is None:
        backend = active_backend()
    if backend == "pure":
        return None
    if backend == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return _compiled
    raise ValueError(f"unknown backend {backend!r}")


def run_check(tables: UniverseTables, plan: Plan, trials: int, seed: int,
              backend: str | None = None):
    """Randomized violation search; see _kernels_py.run_check for the contract."""
    impl = _resolve(backend)
    if impl is None:
        return _kernels_py.run_check(tables, plan, trials, seed)
    sizes, pair_off, proj_data = tables.dense()
    flat = plan.flat()
    return impl.run_check(
        tables.k, sizes, pair_off, proj_data,
        flat["ops"], flat["args"], flat["bounds"], plan.n_equations,
        plan.n_vars, plan.n_groups, plan.grouped, flat["groups"],
        flat["fixed_h"], flat["fixed_m"],
        trials, seed,
    )


def lattice_violation(n: int, meet, join, plan: Plan, backend: str | None = None):
    """Exhaustive assignment search; see _kernels_py.lattice_violation."""
    impl = _resolve(backend)
    if impl is None:
        return _kernels_py.lattice_violation(n, meet, join, plan)
    from array import array

    flat = plan.flat()
    return impl.lattice_violation(
        n, array("i", meet), array("i", join),
        flat["ops"], flat["args"], flat["bounds"], plan.n_equations, plan.n_vars,
    )
