"""Timing comparison of the pure and compiled kernels.

Two workloads: randomized checking of the whole valid catalogue, and the
exhaustive abstract-lattice search.  Both backends consume identical
random streams, so the script also cross-checks that every verdict
agrees before it prints a speedup.

Run from the repository root:

    python3 benchmarks/bench_engines.py
    python3 benchmarks/bench_engines.py --trials 20000 --max-size 6
"""

import argparse
import time

from relattice.checking import check_law, default_universe, sweep_universes
from relattice.engine import available_backends
from relattice.lattices import find_separating_model
from relattice.laws import SLA_IDS, LawStatus, law_catalogue


def bench_randomized(backend: str, trials: int, seed: int):
    laws = [l for l in law_catalogue() if l.status is LawStatus.VALID]
    universes = [default_universe(), sweep_universes()[-1]]
    verdicts = []
    start = time.perf_counter()
    for law in laws:
        for u in universes:
            v = check_law(law, u, trials=trials, seed=seed, backend=backend)
            verdicts.append((law.id, type(v).__name__, v.vacuous))
    elapsed = time.perf_counter() - start
    return elapsed, verdicts


def bench_lattice(backend: str, max_size: int):
    axioms = list(SLA_IDS) + ["fda", "fda-inv", "sdc", "dch"]
    start = time.perf_counter()
    got = find_separating_model(axioms, "or-over-meet", max_size=max_size,
                                backend=backend)
    elapsed = time.perf_counter() - start
    summary = "none" if got is None else f"size {got[0].n}"
    return elapsed, summary


def fmt_row(name: str, times: dict) -> str:
    cells = [f"{name:34s}"]
    for backend in ("pure", "compiled"):
        cells.append(f"{times[backend]:>10.3f}s" if backend in times else f"{'-':>11s}")
    if "pure" in times and "compiled" in times:
        cells.append(f"{times['pure'] / times['compiled']:>7.1f}x")
    return "  ".join(cells)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=5000,
                    help="randomized trials per law per universe")
    ap.add_argument("--max-size", type=int, default=5,
                    help="lattice size bound for the exhaustive search")
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    if "compiled" not in backends:
        print("compiled kernels not built; timing the pure backend only")

    rand_times: dict[str, float] = {}
    rand_verdicts: dict[str, list] = {}
    for backend in backends:
        rand_times[backend], rand_verdicts[backend] = bench_randomized(
            backend, args.trials, args.seed
        )
    if len(backends) == 2:
        assert rand_verdicts["pure"] == rand_verdicts["compiled"], (
            "backends disagree on randomized verdicts"
        )

    lat_times: dict[str, float] = {}
    lat_results: dict[str, str] = {}
    for backend in backends:
        lat_times[backend], lat_results[backend] = bench_lattice(
            backend, args.max_size
        )
    if len(backends) == 2:
        assert lat_results["pure"] == lat_results["compiled"], (
            "backends disagree on the lattice search"
        )

    header = f"{'workload':34s}  {'pure':>11s}  {'compiled':>11s}  {'speedup':>7s}"
    print()
    print(header)
    print("-" * len(header))
    print(fmt_row(f"valid catalogue x {args.trials} trials", rand_times))
    print(fmt_row(f"lattice search <= {args.max_size}", lat_times))
    print()
    print(f"verdicts agree across backends; search result: {lat_results[backends[0]]}")


if __name__ == "__main__":
    main()
