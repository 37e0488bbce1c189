"""End-to-end acceptance criteria.

Each test records one PASS/FAIL line in ``RESULTS``; conftest.py prints
them after the run.  ``python3 tests/test_acceptance.py`` runs the same
checks without pytest.
"""
import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

from novikov.complexes import (betti_numbers, euler_characteristic, mapping_torus, vanishes_at, vanishing_set,
                               verify_positive_vanishing)
from novikov.conegeometry import (IntegralSubset, lattice_point, subset_complement, subset_equal,
                                  subset_intersect, subset_is_empty, subset_union)
from novikov.foxfront import FIGURE_EIGHT, KNOT_5_2, TREFOIL, knot_presentation, presentation_complex
from novikov.grouprings import character

sys.path.insert(0, str(Path(__file__).resolve().parent))
from generators import (random_character, random_complex, random_mapping_torus_input,  # noqa: E402
                        random_rational_point, random_subset)

RESULTS: dict[int, str] = {}

N_COMPLEXES = 250
N_PROBES = 50
N_SUBSETS = 120
N_POINTS = 1000
N_TORI = 60
SCALES = (2, 3, 7)
CORPUS = sorted((Path(__file__).resolve().parent.parent / "corpus").glob("*.json"))


def record(n, ok, detail):
    RESULTS[n] = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    print(RESULTS[n])
    return ok


@pytest.fixture(scope="module")
def complex_workload():
    rng = random.Random(20240601)
    items = []
    for _ in range(N_COMPLEXES):
        C = random_complex(rng)
        probes = [random_character(rng, C.rank) for _ in range(N_PROBES)]
        items.append((C, vanishing_set(C).vanishing_set, probes))
    return items


@pytest.fixture(scope="module")
def subset_workload():
    rng = random.Random(777)
    items = []
    for _ in range(N_SUBSETS):
        r = rng.randint(1, 4)
        U = random_subset(rng, r, max_cones=3, max_constraints=3)
        V = random_subset(rng, r, max_cones=3, max_constraints=3)
        points = [random_rational_point(rng, r) for _ in range(N_POINTS)]
        items.append((U, V, points))
    return items


def test_oracle_equivalence(complex_workload):
    start = time.perf_counter()
    bad = total = 0
    for C, U, probes in complex_workload:
        for xi in probes:
            total += 1
            bad += U.contains(xi) != vanishes_at(C, xi)
    elapsed = time.perf_counter() - start
    ok = bad == 0 and total >= 200 * 50
    assert record(1, ok, f"{len(complex_workload)} complexes x {N_PROBES} probes, {bad}/{total} disagreements"
                         f" ({elapsed:.1f}s)")


def test_subset_algebra(subset_workload):
    bad = checks = 0
    for U, V, points in subset_workload:
        comp, inter, union = subset_complement(U), subset_intersect(U, V), subset_union(U, V)
        double, comp_v = subset_complement(comp), subset_complement(V)
        for p in points:
            u, v = U.contains(p), V.contains(p)
            checks += 5
            bad += comp.contains(p) == u
            bad += inter.contains(p) != (u and v)
            bad += union.contains(p) != (u or v)
            bad += double.contains(p) != u
            bad += comp_v.contains(p) == v
    ok = bad == 0 and len(subset_workload) >= 100
    assert record(2, ok, f"{len(subset_workload)} subset pairs x {N_POINTS} points, {bad}/{checks} mismatches")


def test_lattice_points_of_nonempty_subsets(subset_workload):
    bad = n = 0
    for U, V, _ in subset_workload:
        for W in (U, V, subset_complement(U), subset_intersect(U, V), subset_union(U, V)):
            n += 1
            p = lattice_point(W)
            empty = subset_is_empty(W)
            if p is None:
                bad += not empty
            else:
                bad += empty or not all(isinstance(x, int) for x in p) or not W.contains(p)
    assert record(3, bad == 0, f"{n} subsets, {bad} failures")


def test_fibered_vanishing():
    rng = random.Random(4242)
    bad = 0
    for _ in range(N_TORI):
        mono, dims, bds = random_mapping_torus_input(rng, max_dim=4)
        C = mapping_torus(mono, dims, bds)
        U = vanishing_set(C).vanishing_set
        for v in (-3, -2, -1, 1, 2, 3):
            xi = character(v)
            bad += not (U.contains(xi) and vanishes_at(C, xi))
    assert record(4, bad == 0, f"{N_TORI} mapping tori, {bad} failures at nonzero xi in [-3, 3]")


def test_knot_regressions():
    nonzero = subset_union(IntegralSubset.half_space((1,), True), IntegralSubset.half_space((-1,), True))
    notes, ok = [], True
    for name, knot, fibered in (("trefoil", TREFOIL, True), ("figure-eight", FIGURE_EIGHT, True),
                                ("5_2", KNOT_5_2, False)):
        start = time.perf_counter()
        C = presentation_complex(knot_presentation(*knot))
        verdict = verify_positive_vanishing(C, [(1,)])
        if fibered:
            good = subset_equal(vanishing_set(C).vanishing_set, nonzero) and verdict.vanishes
        else:
            good = (not verdict.vanishes and verdict.witness[0] > 0 and not vanishes_at(C, verdict.witness))
        elapsed = time.perf_counter() - start
        good = good and elapsed < 5
        ok = ok and good
        notes.append(f"{name} {verdict} {elapsed:.2f}s")
    assert record(5, ok, ", ".join(notes))


def test_euler_betti_consistency(complex_workload):
    bad = nonempty = 0
    for C, U, _ in complex_workload:
        b = betti_numbers(C)
        chi = euler_characteristic(C)
        bad += sum((-1) ** i * x for i, x in enumerate(b)) != chi
        if not subset_is_empty(U):
            nonempty += 1
            bad += any(b) or chi != 0
    assert record(6, bad == 0, f"{len(complex_workload)} complexes ({nonempty} with nonempty vanishing set), "
                               f"{bad} failures")


def test_scaling_invariance(complex_workload):
    bad = n = 0
    for C, U, probes in complex_workload:
        for xi in probes:
            base = vanishes_at(C, xi)
            for lam in SCALES:
                n += 1
                scaled = tuple(lam * x for x in xi)
                bad += vanishes_at(C, scaled) != base or U.contains(scaled) != U.contains(xi)
    assert record(7, bad == 0, f"{n} scaled probes, {bad} mismatches")


def _cli(args):
    return subprocess.run([sys.executable, "-m", "novikov", *args], capture_output=True)


def test_cli_determinism():
    runs = mismatches = 0
    for path in CORPUS:
        text = path.read_text()
        payload = "torus" if '"torus"' in text else ("fox" if '"presentation"' in text else None)
        commands = ["vanish", "check", "betti", "euler", "positive"] + ([payload] if payload else [])
        for cmd in commands:
            outs = []
            for jobs in ("1", "1", "0"):  # repeat, then every CPU
                r = _cli([cmd, "--input", str(path), "--jobs", jobs])
                outs.append((r.returncode, r.stdout))
                runs += 1
            mismatches += len(set(outs)) != 1 or outs[0][0] != 0
    ok = mismatches == 0 and len(CORPUS) > 0
    assert record(8, ok, f"{len(CORPUS)} documents, {runs} runs, {mismatches} non-identical or failing commands")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
