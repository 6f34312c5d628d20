"""Acceptance gate: nine observable criteria, one verdict line each.

Each test prints exactly one PASS/FAIL line (past pytest's capture, so the
lines survive into piped logs) and then asserts, so a red criterion is
visible both in the line and in the pytest summary.
"""

import time
from pathlib import Path

from relattice.checking import (
    check_law,
    default_universe,
    random_relation,
    sweep_universes,
    universe_label,
)
from relattice.closure import export_dot, find_pentagon, generate_closure, verify_lattice
from relattice.lattices import (
    find_separating_model,
    is_diamond,
    is_pentagon,
    replay,
)
from relattice.laws import SLA_IDS, LawStatus, law_by_id, law_catalogue
from relattice.relations import (
    antijoin,
    dee,
    dum,
    inner_union,
    natural_join,
    relation,
    top_empty,
    universal,
    universe,
)
from relattice.rewrite import ConstraintSet, eliminate_redundant_joins, solve_antijoin, verify_rewrite
from relattice.rng import SplitMix64
from relattice.terms import evaluate, parse_term, to_text

GOLDEN = Path(__file__).parent / "golden"
U2 = universe({"x": ["1", "2"], "y": ["a", "b"]})
SLA = list(SLA_IDS)


def report(capsys, n: int, passed: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"{'PASS' if passed else 'FAIL'} criterion {n}: {detail}")
    assert passed, f"criterion {n}: {detail}"


def test_criterion_1_valid_laws_hold_everywhere(capsys):
    laws = [l for l in law_catalogue() if l.status is LawStatus.VALID]
    universes = sweep_universes()
    start = time.monotonic()
    failures = []
    for law in laws:
        for u in universes:
            verdict = check_law(law, u, trials=1000, seed=42)
            if verdict.found:
                failures.append((law.id, universe_label(u), verdict.trial))
    elapsed = time.monotonic() - start
    ok = len(laws) >= 24 and len(universes) == 20 and not failures and elapsed < 60.0
    report(
        capsys, 1, ok,
        f"{len(laws)} valid laws x 1000 trials x {len(universes)} universes, "
        f"{len(failures)} counterexamples, {elapsed:.1f}s (budget 60s)",
    )


def test_criterion_2_distributivity_failure_witness(capsys):
    x = relation(["x", "y"], [("1", "a"), ("1", "b"), ("2", "a")], U2)
    lo = inner_union(x, dum())
    hi = inner_union(x, universal(U2))
    recombined = natural_join(lo, hi)
    ok = (
        lo == dee()
        and hi == universal(U2)
        and recombined == universal(U2)
        and recombined != x
    )
    report(
        capsys, 2, ok,
        "x v R00 = R01, x v R11 = R11, (x v R00) ^ (x v R11) = R11 != x "
        "for the three-tuple witness",
    )


def test_criterion_3_constant_identities_on_every_universe(capsys):
    universes = sweep_universes() + [universe({})]
    bad = []
    for u in universes:
        if inner_union(dum(), universal(u)) != dee():
            bad.append(("R00 v R11", universe_label(u)))
        if natural_join(dum(), universal(u)) != top_empty(u):
            bad.append(("R00 ^ R11", universe_label(u)))
    ok = not bad
    report(
        capsys, 3, ok,
        f"R00 v R11 = R01 and R00 ^ R11 = R10 on {len(universes)} universes "
        f"including the degenerate one ({len(bad)} failures)",
    )


def test_criterion_4_separating_models_found_and_replayed(capsys):
    cases = [
        ("fda", SLA, lambda lat: lat.n == 2),
        ("fda-inv", SLA + ["fda"], lambda lat: lat.n == 2),
        ("sdc", SLA + ["fda", "fda-inv"], is_diamond),
        ("dch", SLA + ["fda", "fda-inv", "sdc"], is_pentagon),
    ]
    problems = []
    worst = 0.0
    for refute, assume, shape_ok in cases:
        start = time.monotonic()
        got = find_separating_model(assume, refute, max_size=5)
        elapsed = time.monotonic() - start
        worst = max(worst, elapsed)
        if got is None:
            problems.append(f"{refute}: not found")
            continue
        lat, cx = got
        if not shape_ok(lat):
            problems.append(f"{refute}: wrong shape (n={lat.n})")
        if not replay(cx):
            problems.append(f"{refute}: replay failed")
        if elapsed >= 120.0:
            problems.append(f"{refute}: {elapsed:.1f}s")
    ok = not problems
    report(
        capsys, 4, ok,
        "2-chain, 2-chain, diamond, pentagon separations found and "
        f"independently replayed, worst case {worst:.2f}s (budget 120s each)"
        + ("" if ok else f"; problems: {problems}"),
    )


def test_criterion_5_derived_laws_consistent_with_assumptions(capsys):
    derived = [
        l for l in law_catalogue()
        if l.status is LawStatus.VALID and l.assumptions is not None
    ]
    leaks = []
    for law in derived:
        got = find_separating_model(list(law.assumptions), law.id, max_size=5)
        if got is not None:
            leaks.append(law.id)
    ok = len(derived) == 17 and not leaks
    report(
        capsys, 5, ok,
        f"no lattice of size <= 5 satisfies the assumptions of any of the "
        f"{len(derived)} derived laws while falsifying it"
        + ("" if not leaks else f"; leaks: {leaks}"),
    )


def test_criterion_6_antijoin_is_the_unique_solution(capsys):
    rng = SplitMix64(0xACCE55)
    mismatches = 0
    pairs = 200
    for _ in range(pairs):
        e = random_relation(U2, rng=rng)
        d = random_relation(U2, rng=rng)
        if solve_antijoin(e, d, U2) != frozenset({antijoin(e, d)}):
            mismatches += 1
    emp = universe({"deptno": ["10", "20"], "ename": ["JONES", "SMITH"]})
    e = relation(["deptno", "ename"], [("10", "SMITH"), ("20", "JONES")], emp)
    d = relation(["deptno"], [("20",)], emp)
    smith = relation(["deptno", "ename"], [("10", "SMITH")], emp)
    named_ok = solve_antijoin(e, d, emp) == frozenset({smith})
    ok = mismatches == 0 and named_ok
    report(
        capsys, 6, ok,
        f"{pairs} random (E, D) pairs solved to exactly the anti-join "
        f"({mismatches} mismatches); unmatched SMITH row is the unique "
        f"named solution: {named_ok}",
    )


def test_criterion_7_rewrite_verified_and_falsifiable(capsys):
    before = parse_term("E0 v (E ^ D)")
    after = parse_term("E0 v E")
    with_fk = ConstraintSet(foreign_keys=(("E", "D"),), projections=(("E0", "E"),))
    emp = universe({"deptno": ["10", "20"], "ename": ["JONES", "SMITH"]})
    env = {
        "E": relation(["deptno", "ename"], [("10", "SMITH"), ("20", "JONES")], emp),
        "D": relation(["deptno"], [("10",), ("20",)], emp),
        "E0": relation(["ename"], [("SMITH",)], emp),
    }
    rewritten, steps = eliminate_redundant_joins(
        before, with_fk, env, emp, trials=1000
    )
    positive_ok = to_text(rewritten) == "E0 v E" and len(steps) == 1

    no_fk = ConstraintSet(projections=(("E0", "E"),))
    control = verify_rewrite(before, after, no_fk, U2, trials=1000)
    control_ok = control.found and evaluate(before, control.assignment, U2) != (
        evaluate(after, control.assignment, U2)
    )
    ok = positive_ok and control_ok
    report(
        capsys, 7, ok,
        "E0 v (E ^ D) rewrites to E0 v E under the foreign key (1000 verified "
        "trials); dropping the foreign key is falsified at trial "
        f"{getattr(control, 'trial', None)} of 1000",
    )


def test_criterion_8_closure_of_the_four_generators(capsys):
    a = relation(["x"], [("1",)], U2)
    b = relation(["x"], [("1",), ("2",)], U2)
    c0 = relation(["y"], [("a",)], U2)
    d = relation(["y"], [("a",), ("b",)], U2)
    gens = [a, b, c0, d, dum()]
    c = generate_closure(gens, U2)
    rep = verify_lattice(c)
    ad = natural_join(a, d)
    checks = {
        "closed": rep.closed,
        "lattice": rep.sla_ok,
        "bottom R01": rep.bottom_is_r01,
        "top R10": rep.top_is_r10,
        "contains A ^ D": ad in c and ad.rows == {("1", "a"), ("1", "b")},
        "R11 = B ^ D": natural_join(b, d) == universal(U2) and universal(U2) in c,
        "pentagon": find_pentagon(c) is not None,
        "dot stable": export_dot(c)
        == export_dot(generate_closure(list(gens), U2))
        == (GOLDEN / "closure14.dot").read_text(),
    }
    failed = [k for k, v in checks.items() if not v]
    ok = not failed
    report(
        capsys, 8, ok,
        f"{len(c)}-element closure verifies ({', '.join(checks)})"
        + ("" if ok else f"; failed: {failed}"),
    )


def test_criterion_9_open_law_reported_without_judgement(capsys):
    law = law_by_id("or-over-meet")
    verdict = check_law(law, default_universe(), trials=1000, seed=42)
    if verdict.found:
        random_part = f"random search found a counterexample at trial {verdict.trial}"
    else:
        random_part = f"no counterexample in {verdict.trials} random trials"
    axioms = SLA + ["fda", "fda-inv", "sdc", "dch"]
    got = find_separating_model(axioms, "or-over-meet", max_size=6)
    if got is None:
        model_part = "no axiom-satisfying countermodel of size <= 6"
    else:
        model_part = f"axiom-satisfying countermodel of size {got[0].n} found"
    ok = law.status is LawStatus.OPEN
    report(
        capsys, 9, ok,
        f"open question surveyed, not judged: {random_part}; {model_part}",
    )
