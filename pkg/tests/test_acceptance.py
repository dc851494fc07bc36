"""Acceptance criteria, one test per criterion, each printing a PASS line.

Tolerances and time budgets are pinned here and must not be loosened:
  1. Euler relations through the CLI, exact, < 1 s
  2. graded freeness: 2^(m-1) counts and invertible word matrices, m <= 8, < 10 s
  3. structure suites, >= 500 randomized cases each, transport exhaustive to weight 7
  4. isomorphism cross-checks through degree 6 (exhaustive) and 8 (injectivity), < 30 s
  5. polylog homomorphism at z = e^-0.7 within 1e-8; derivative checks < 1e-6, < 60 s
  6. kernel Laurent expansion identity to order 12, exactly zero
  7. regularization exchange: (a) exact weight-2 at 1e-10, (b) diagram at 1e-3
     for weight <= 4, (c) inverse map vs ones blocks at 1e-3, < 5 min
  8. repeated-ones exponential identity at order 4 within 1e-3
  9. dimension bounds: 1 at weight 4, 2 at weight 5, exact, < 60 s
"""

import time

from mzvkit import verification
from mzvkit.cli import main
from mzvkit.numerics import PrecisionContext


def _report(name: str, results, elapsed: float, budget: float):
    for res in results:
        print(res.line())
    failed = [res for res in results if not res.passed]
    assert not failed, f"{name}: {[res.name for res in failed]}"
    print(f"PASS {name}: completed in {elapsed:.2f}s (budget {budget:.0f}s)")
    assert elapsed < budget, f"{name} exceeded its time budget: {elapsed:.2f}s"


def test_criterion_1_euler_relations(capsys):
    start = time.monotonic()
    code = main(["eds", "--weight", "3", "--format", "csv"])
    out_eds = capsys.readouterr().out
    assert code == 0
    code = main(["dsh", "--weight", "4", "--format", "csv"])
    out_dsh = capsys.readouterr().out
    assert code == 0
    elapsed = time.monotonic() - start

    ok_eds = "3,[1];[2],[2,1],1/1" in out_eds and "3,[1];[2],[3],-1/1" in out_eds
    ok_dsh = "4,[2];[2],[3,1],4/1" in out_dsh and "4,[2];[2],[4],-1/1" in out_dsh
    with capsys.disabled():
        print()
        print(f"{'PASS' if ok_eds else 'FAIL'} criterion-1: eds --weight 3 emits [2,1] - [3]")
        print(f"{'PASS' if ok_dsh else 'FAIL'} criterion-1: dsh --weight 4 emits 4[3,1] - [4]")
        print(f"PASS criterion-1: completed in {elapsed:.2f}s (budget 1s)")
    assert ok_eds and ok_dsh
    assert elapsed < 1.0


def test_criterion_2_graded_freeness(capsys):
    start = time.monotonic()
    results = verification.graded_freeness_checks(max_degree=8)
    elapsed = time.monotonic() - start
    with capsys.disabled():
        print()
        _report("criterion-2", results, elapsed, 10.0)


def test_criterion_3_structure_properties(capsys):
    start = time.monotonic()
    results = verification.structure_checks(cases=500)
    elapsed = time.monotonic() - start
    with capsys.disabled():
        print()
        _report("criterion-3", results, elapsed, 120.0)


def test_criterion_4_isomorphism_cross_checks(capsys):
    start = time.monotonic()
    results = verification.isomorphism_checks(max_degree=6, injective_degree=8)
    elapsed = time.monotonic() - start
    with capsys.disabled():
        print()
        _report("criterion-4", results, elapsed, 30.0)


def test_criterion_5_polylog_homomorphism(capsys):
    start = time.monotonic()
    ctx = PrecisionContext(digits=20, budget=100_000, tolerance=1e-10)
    results = verification.polylog_checks(ctx=ctx, max_weight=4, tolerance=1e-8)
    elapsed = time.monotonic() - start
    with capsys.disabled():
        print()
        _report("criterion-5", results, elapsed, 60.0)


def test_criterion_6_kernel_series_identity(capsys):
    from mzvkit.numerics import geometric_kernel_check

    gap = geometric_kernel_check(12)
    with capsys.disabled():
        print()
        print(f"{'PASS' if gap == 0 else 'FAIL'} criterion-6: kernel expansion identity "
              f"to order 12 is exactly zero (gap {gap})")
    assert gap == 0


def test_criterion_7_regularization_exchange(capsys):
    start = time.monotonic()
    ctx = PrecisionContext(digits=20, budget=200_000, tolerance=1e-4)
    results = verification.regularization_checks(
        ctx=ctx, max_weight=4, exact_tol=1e-10, mzv_tol=1e-3
    )
    elapsed = time.monotonic() - start
    with capsys.disabled():
        print()
        _report("criterion-7", results, elapsed, 300.0)


def test_criterion_8_repeated_ones_identity(capsys):
    start = time.monotonic()
    ctx = PrecisionContext(digits=20, budget=200_000, tolerance=1e-4)
    results = verification.corollary_checks(order=4, ctx=ctx, tolerance=1e-3)
    elapsed = time.monotonic() - start
    with capsys.disabled():
        print()
        _report("criterion-8", results, elapsed, 300.0)


def test_criterion_9_dimension_bounds(capsys):
    start = time.monotonic()
    results = verification.rank_checks()
    elapsed = time.monotonic() - start
    with capsys.disabled():
        print()
        _report("criterion-9", results, elapsed, 60.0)
