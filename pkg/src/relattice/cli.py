"""Command line front end.

Subcommands: eval, law (list | check | check-all), model find, closure,
rewrite.  Every command first builds a result dictionary, then renders it
as text or, with --json, dumps it verbatim, so both forms always carry
the same verdict.

Exit codes: 0 when the checked property holds in the tested scope (or the
rewrite verifies, or the requested model is found), 1 when a
counterexample or violation is found (or a bound is exceeded without a
result), 2 for usage and input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from enum import IntEnum

from .checking import (
    Falsified,
    default_universe,
    check_law,
    run_catalogue,
    sweep_universes,
    universe_label,
)
from .closure import (
    DEFAULT_CAP,
    closure_to_json,
    export_dot,
    generate_closure,
    generators_from_json,
    verify_lattice,
)
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
from .lattices import find_separating_model, model_dot, model_report
from .laws import LawStatus, law_by_id, law_catalogue, resolve_law_ids
from .relations import (
    Relation,
    format_relation,
    relation_from_json,
    relation_to_json,
    universe_from_json,
)
from .rewrite import ConstraintSet, eliminate_redundant_joins
from .terms import evaluate, parse_term, to_text

__all__ = ["main", "ExitStatus"]


class ExitStatus(IntEnum):
    OK = 0
    FOUND = 1
    USAGE = 2


DEFAULT_TRIALS = 1000
DEFAULT_SEED = 42


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc


def _load_universe(path: str | None):
    if path is None:
        return None
    return universe_from_json(_load_json(path))


def _load_env(path: str | None, u):
    """Environment files: {"universe": ..., "bindings": {name: literal}}
    or a flat {name: literal} object (universe supplied separately)."""
    if path is None:
        return {}, u
    data = _load_json(path)
    if not isinstance(data, dict):
        raise SchemaError("environment file must be a JSON object")
    if "bindings" in data or "universe" in data:
        if "universe" in data:
            u = universe_from_json(data["universe"])
        raw = data.get("bindings", {})
    else:
        raw = data
    if u is None:
        raise UniverseRequiredError(
            "no universe: pass --universe or embed one in the environment file"
        )
    env = {name: relation_from_json(lit, u) for name, lit in raw.items()}
    return env, u


def _emit(result: dict, as_json: bool, text_lines) -> None:
    if as_json:
        print(json.dumps(result, indent=2))
    else:
        for line in text_lines:
            print(line)


def _assignment_json(assignment) -> dict:
    return {
        name: relation_to_json(rel) if isinstance(rel, Relation) else rel
        for name, rel in sorted(assignment.items())
    }


def _witness_lines(assignment) -> list[str]:
    out = []
    for name, rel in sorted(assignment.items()):
        shown = format_relation(rel) if isinstance(rel, Relation) else str(rel)
        out.append(f"    {name} = {shown}")
    return out


# ---------------------------------------------------------------- eval


def _cmd_eval(args) -> ExitStatus:
    u = _load_universe(args.universe)
    env, u = _load_env(args.env, u)
    term = parse_term(args.term)
    value = evaluate(term, env, u)
    result = {
        "term": to_text(term),
        "result": relation_to_json(value),
    }
    _emit(result, args.json, [format_relation(value)])
    return ExitStatus.OK


# ---------------------------------------------------------------- law


def _law_json(law) -> dict:
    return {
        "id": law.id,
        "status": law.status.value,
        "statement": law.text,
        "iff": law.iff,
        "assumptions": list(law.assumptions) if law.assumptions is not None else None,
        "note": law.note,
    }


def _cmd_law_list(args) -> ExitStatus:
    laws = law_catalogue()
    result = {"laws": [_law_json(law) for law in laws]}
    lines = [f"{law.id:28s} [{law.status.value:7s}] {law.text}" for law in laws]
    _emit(result, args.json, lines)
    return ExitStatus.OK


def _verdict_json(verdict) -> dict:
    out = {
        "found": verdict.found,
        "vacuous": verdict.vacuous,
        "backend": verdict.backend,
    }
    if isinstance(verdict, Falsified):
        out["trial"] = verdict.trial
        out["assignment"] = _assignment_json(verdict.assignment)
    else:
        out["trials"] = verdict.trials
    return out


def _cmd_law_check(args) -> ExitStatus:
    law = law_by_id(args.id)
    if args.sweep:
        universes = sweep_universes()
    elif args.universe:
        universes = [_load_universe(args.universe)]
    else:
        universes = [default_universe()]

    rows = []
    any_found = False
    total_clean_trials = 0
    for u in universes:
        verdict = check_law(law, u, trials=args.trials, seed=args.seed)
        rows.append((u, verdict))
        if verdict.found:
            any_found = True
        else:
            total_clean_trials += verdict.trials

    lines = []
    result_rows = []
    for u, verdict in rows:
        label = universe_label(u)
        result_rows.append({"universe": label, **_verdict_json(verdict)})
        if verdict.found:
            lines.append(
                f"{law.id} on {label}: counterexample at trial {verdict.trial}"
            )
            lines.extend(_witness_lines(verdict.assignment))
        else:
            lines.append(
                f"{law.id} on {label}: holds in {verdict.trials} trials "
                f"({verdict.vacuous} vacuous)"
            )

    if law.status is LawStatus.OPEN:
        if any_found:
            summary = "OPEN: counterexample found"
        else:
            summary = f"OPEN: no counterexample found in {total_clean_trials} trials"
        code = ExitStatus.OK
    elif any_found:
        summary = f"counterexample found for {law.id}"
        code = ExitStatus.FOUND
    else:
        summary = f"{law.id} holds in the tested scope"
        code = ExitStatus.OK
    lines.append(summary)

    result = {
        "law": args.id,
        "status": law.status.value,
        "results": result_rows,
        "summary": summary,
        "exit": int(code),
    }
    _emit(result, args.json, lines)
    return code


def _cmd_law_check_all(args) -> ExitStatus:
    universes = [_load_universe(args.universe)] if args.universe else None
    laws = law_catalogue()
    report = run_catalogue(laws, universes=universes, trials=args.trials, seed=args.seed)
    lines = []
    all_ok = True
    for law in laws:
        expectation_met = report.law_ok(law)
        verdicts = report.verdicts_for(law.id)
        hit = next(((label, v) for label, v in verdicts if v.found), None)
        if hit is None:
            summary = f"holds on {len(verdicts)} universes"
        else:
            summary = f"counterexample on {hit[0]} at trial {hit[1].trial}"
        mark = "ok" if expectation_met else "UNEXPECTED"
        lines.append(f"{law.id:28s} [{law.status.value:7s}] {mark:10s} {summary}")
        all_ok = all_ok and expectation_met
    lines.append(
        f"{'all laws behave as catalogued' if all_ok else 'catalogue mismatch'} "
        f"({report.trials} trials per universe, seed {report.seed}, "
        f"{report.backend} backend)"
    )
    result = report.to_json()
    result["all_ok"] = all_ok
    _emit(result, args.json, lines)
    return ExitStatus.OK if all_ok else ExitStatus.FOUND


# ---------------------------------------------------------------- model


def _cmd_model_find(args) -> ExitStatus:
    assume = resolve_law_ids(args.assume.split(",")) if args.assume else []
    refute = resolve_law_ids([args.refute])[0]
    found = find_separating_model(assume, refute, max_size=args.max_size)
    if found is None:
        msg = (
            f"no model of size <= {args.max_size} satisfies the assumptions "
            f"while falsifying {refute}"
        )
        result = {"found": False, "message": msg, "max_size": args.max_size}
        _emit(result, args.json, [msg])
        return ExitStatus.FOUND
    lat, cx = found
    report = model_report(lat, cx)
    result = {
        "found": True,
        "size": lat.n,
        "r00": lat.r00,
        "r11": lat.r11,
        "leq": [[j for j in range(lat.n) if lat.le(i, j)] for i in range(lat.n)],
        "law": cx.law_id,
        "assignment": {k: v for k, v in sorted(cx.assignment.items())},
        "report": report,
    }
    lines = [report]
    if args.dot is not None:
        dot = model_dot(lat)
        if args.dot == "-":
            lines.append(dot.rstrip("\n"))
        else:
            with open(args.dot, "w", encoding="utf-8") as f:
                f.write(dot)
            lines.append(f"dot written to {args.dot}")
    _emit(result, args.json, lines)
    return ExitStatus.OK


# ---------------------------------------------------------------- closure


def _cmd_closure(args) -> ExitStatus:
    u = _load_universe(args.universe)
    gens, u = generators_from_json(_load_json(args.generators), u)
    c = generate_closure(list(gens), u, cap=args.cap)
    report = verify_lattice(c)
    result = {
        "universe": universe_label(u),
        "verify": report.to_json(),
        **closure_to_json(c),
    }
    lines = [
        f"closure of {len(gens)} generators: {len(c.elements)} elements, "
        f"{len(c.hasse_edges)} cover edges",
        f"verified: {'ok' if report.ok else 'FAILED'} "
        f"(closed={report.closed}, lattice={report.sla_ok}, "
        f"bottom R01={report.bottom_is_r01}, top R10={report.top_is_r10})",
    ]
    lines.extend(f"  issue: {issue}" for issue in report.issues)
    if args.dot is not None:
        dot = export_dot(c)
        if args.dot == "-":
            lines.append(dot.rstrip("\n"))
        else:
            with open(args.dot, "w", encoding="utf-8") as f:
                f.write(dot)
            lines.append(f"dot written to {args.dot}")
        result["dot"] = dot
    _emit(result, args.json, lines)
    return ExitStatus.OK if report.ok else ExitStatus.FOUND


# ---------------------------------------------------------------- rewrite


def _cmd_rewrite(args) -> ExitStatus:
    u = _load_universe(args.universe)
    env, u = _load_env(args.env, u)
    constraints = (
        ConstraintSet.from_json(_load_json(args.constraints))
        if args.constraints
        else ConstraintSet()
    )
    term = parse_term(args.term)
    out, steps = eliminate_redundant_joins(
        term, constraints, env, u, trials=args.trials, seed=args.seed
    )
    result = {
        "input": to_text(term),
        "output": to_text(out),
        "steps": [
            {
                "before": to_text(s.before),
                "after": to_text(s.after),
                "rule": s.rule,
                "justification": s.justification.to_json(),
            }
            for s in steps
        ],
        "verified_trials": args.trials if steps else 0,
    }
    lines = []
    for i, s in enumerate(steps, 1):
        lines.append(f"step {i}: {s}")
    if steps:
        lines.append(f"each step verified in {args.trials} trials")
    else:
        lines.append("no redundant joins found")
    lines.append(to_text(out))
    _emit(result, args.json, lines)
    return ExitStatus.OK


# ---------------------------------------------------------------- parser


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="relattice",
        description="Workbench for the lattice of relations: evaluate terms, "
        "check laws, find separating models, build closures, rewrite queries.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, trials=False, seed=False):
        sp.add_argument("--json", action="store_true", help="machine readable output")
        if trials:
            sp.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
        if seed:
            sp.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)

    sp = sub.add_parser("eval", help="evaluate a term to a relation literal")
    sp.add_argument("term")
    sp.add_argument("--env", help="JSON file binding ground names to relations")
    sp.add_argument("--universe", help="JSON universe file")
    common(sp)
    sp.set_defaults(func=_cmd_eval)

    lp = sub.add_parser("law", help="work with the law catalogue")
    lsub = lp.add_subparsers(dest="law_command", required=True)

    sp = lsub.add_parser("list", help="print the catalogue")
    common(sp)
    sp.set_defaults(func=_cmd_law_list)

    sp = lsub.add_parser("check", help="randomized check of one law")
    sp.add_argument("id")
    sp.add_argument("--universe", help="JSON universe file")
    sp.add_argument("--sweep", action="store_true",
                    help="run over every universe with <=3 attributes, <=3 values")
    common(sp, trials=True, seed=True)
    sp.set_defaults(func=_cmd_law_check)

    sp = lsub.add_parser("check-all", help="check the whole catalogue")
    sp.add_argument("--universe", help="restrict to one universe file")
    common(sp, trials=True, seed=True)
    sp.set_defaults(func=_cmd_law_check_all)

    mp = sub.add_parser("model", help="finite abstract lattice models")
    msub = mp.add_subparsers(dest="model_command", required=True)

    sp = msub.add_parser("find", help="search for a separating model")
    sp.add_argument("--assume", default="",
                    help="comma separated law ids or group names (SLA, FDA, ...)")
    sp.add_argument("--refute", required=True, help="law id to falsify")
    sp.add_argument("--max-size", type=int, default=5)
    sp.add_argument("--dot", nargs="?", const="-",
                    help="write the model's Hasse diagram (default stdout)")
    common(sp)
    sp.set_defaults(func=_cmd_model_find)

    sp = sub.add_parser("closure", help="close a generator set under ^ and v")
    sp.add_argument("generators", help="JSON file with generators (and universe)")
    sp.add_argument("--universe", help="JSON universe file")
    sp.add_argument("--cap", type=int, default=DEFAULT_CAP)
    sp.add_argument("--dot", nargs="?", const="-",
                    help="write the Hasse diagram (default stdout)")
    common(sp)
    sp.set_defaults(func=_cmd_closure)

    sp = sub.add_parser("rewrite", help="eliminate redundant joins, verified")
    sp.add_argument("term")
    sp.add_argument("--constraints", help="JSON constraints file")
    sp.add_argument("--env", required=True,
                    help="JSON file binding ground names to relations")
    sp.add_argument("--universe", help="JSON universe file")
    common(sp, trials=True, seed=True)
    sp.set_defaults(func=_cmd_rewrite)

    return p


_USAGE_ERRORS = (
    ParseError,
    UnboundNameError,
    SchemaError,
    UniverseMismatchError,
    UniverseRequiredError,
    SearchSpaceError,
    KeyError,
)
_FOUND_ERRORS = (
    ConstraintViolationError,
    RewriteVerificationError,
    ClosureCapError,
    UnsatisfiableConstraintsError,
)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return int(args.func(args))
    except _FOUND_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return int(ExitStatus.FOUND)
    except _USAGE_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return int(ExitStatus.USAGE)
    except RelatticeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return int(ExitStatus.USAGE)


if __name__ == "__main__":
    sys.exit(main())
