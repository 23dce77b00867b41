"""Acceptance battery: one test per verification criterion, at full scope.

Every test runs the corresponding check from ddbvp.verification with the
same arguments the full battery uses, prints a one-line scoreboard entry
(visible under ``pytest -s``), and fails with the check's detail text.
The stencil pool is the three named stencils plus twenty fixed-seed random
ones in the supported regime, built once per module.
"""

import pytest

from ddbvp.verification import (
    check_boundary_rank_cases,
    check_constraint_counts,
    check_image_codimension,
    check_index_estimates,
    check_kernel_certificates,
    check_membership_theorem,
    check_oracle_convergence,
    check_spectrum_containment,
    check_structure_equivalence,
    check_worked_solution,
    named_stencils,
    random_regime_stencils,
    run_battery,
)


@pytest.fixture(scope="module")
def pool():
    stencils = named_stencils() + random_regime_stencils()
    assert len(stencils) >= 23, (
        "expected 3 named stencils plus at least 20 random supported-regime "
        "ones, found %d total" % len(stencils)
    )
    return stencils


def _report(result):
    verdict = "PASS" if result.passed else "FAIL"
    print("criterion %d (%s): %s -- %s" % (result.number, result.name, verdict, result.detail))
    assert result.passed, "criterion %d (%s) failed: %s" % (
        result.number, result.name, result.detail)


def test_criterion_01_image_membership(pool):
    # exact rational check, k in {1, 2, 3}, both directions of the mapping
    _report(check_membership_theorem(pool))


def test_criterion_02_image_codimension(pool):
    # rank 2(k+2) independent / k+3 dependent, k in {0, 1, 2}, exact integers
    _report(check_image_codimension())


def test_criterion_03_constraint_counts(pool):
    # post-elimination counts 2(k+1) or k+1 per variant, k in {0, 1}
    _report(check_constraint_counts())


def test_criterion_04_kernel_certificates(pool):
    # boundary system rank 2, kernel dimension 0, on every pooled stencil
    _report(check_kernel_certificates(pool))


def test_criterion_05_worked_solution(pool):
    # stencil (1, 0, 1), f0 = 1: closed-form v with derivative jump 2 at t = 1
    _report(check_worked_solution())


def test_criterion_06_boundary_rank_cases(pool):
    # kernel dimension and constraint count both equal 2 - rank of the
    # boundary matrix, shown by explicit kernel bases and violating data
    _report(check_boundary_rank_cases())


def test_criterion_07_spectrum_containment(pool):
    # discrete operator eigenvalues match the stencil symbol within 1e-8
    # at n = 8 and n = 16
    _report(check_spectrum_containment(pool))


def test_criterion_08_oracle_convergence(pool):
    # grid solutions of the model problem reproduce the exact solution below
    # 1e-3 at n = 128; the quartic companion shows observed order >= 1.8
    _report(check_oracle_convergence())


def test_criterion_09_index_estimates(pool):
    # numerical kernel and cokernel dimensions agree at n = 64 for
    # a(t) in {0, 1, t}
    _report(check_index_estimates())


def test_criterion_10_structure_equivalence(pool):
    # functional stacks from the two interior structures have equal rank,
    # separately and stacked, k in {1, 2}
    _report(check_structure_equivalence(pool))


def test_fast_battery_wiring():
    results = run_battery("fast")
    assert [r.number for r in results] == [1, 2, 3, 4, 5, 10]
    assert all(r.passed for r in results), [r.detail for r in results if not r.passed]
    with pytest.raises(ValueError):
        run_battery("sideways")
