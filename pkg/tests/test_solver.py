"""Boundary value solver: exactness invariants, kernels, extensions, reports."""

import random
from fractions import Fraction

import pytest

from ddbvp.piecewise import (
    PiecewisePoly,
    apply_difference,
    apply_shifted_sum,
    in_zero_trace_class,
    smoothness_defects,
)
from ddbvp.solver import (
    BVPProblem,
    SolveStatus,
    hermite_extension,
    index_report,
    kernel_certificate,
    solve_homogeneous,
    solve_nonhomogeneous,
)
from ddbvp.structure import Stencil, analyze
from ddbvp.verification import named_stencils, random_zero_trace_function

F = Fraction

RANK_ONE = Stencil.from_coeffs((1, 0, -1))


def _solution_invariants(problem, family):
    """The properties every successful solve must satisfy exactly."""
    n = problem.stencil.N
    v, w = family.v, family.w
    # the equation itself: w = R v and -w'' = f0
    assert apply_difference(problem.stencil, v).same(w)
    assert (w.derivative(2) + problem.f0).is_zero()
    # Dirichlet part of the generalized problem (homogeneous data here)
    assert v.trace(0, 0, 1) == 0
    assert v.trace(n + 1, 0, -1) == 0
    # v is continuous: a W^1 function cannot jump
    for t in v.breaks[1:-1]:
        assert v.jump(t, 0) == 0


def test_solve_homogeneous_invariants_on_named_stencils():
    for s in named_stencils():
        f0 = PiecewisePoly.from_global((1, 1), (0, s.N + 1))
        problem = BVPProblem(stencil=s, k=0, f0=f0)
        family = solve_homogeneous(problem)
        assert family.status is SolveStatus.UNIQUE
        assert family.boundary_rank == 2
        assert family.kernel == ()
        _solution_invariants(problem, family)


def test_solver_recovers_a_constructed_smooth_solution_exactly():
    # manufacture data from a function in the order-(k+2) zero-trace class;
    # with a rank-2 boundary matrix the solver must return that function bit
    # for bit, and the smoothness report must notice the data is solvable
    rng = random.Random(41)
    for s in named_stencils():
        for k in (0, 1):
            v_true = random_zero_trace_function(s.N + 1, k + 2, rng)
            w_true = apply_difference(s, v_true)
            f0 = -w_true.derivative(2)
            problem = BVPProblem(stencil=s, k=k, f0=f0)
            family = solve_homogeneous(problem)
            assert family.status is SolveStatus.UNIQUE
            assert family.v.same(v_true)
            assert family.w.same(w_true)
            report = family.smoothness
            assert report.zero_trace_solvable is True
            assert report.minimal_solvable is True
            assert report.smooth_interior
            assert all(value == 0 for _, _, value in report.node_jumps)
            assert in_zero_trace_class(family.v, k + 2)


def test_generic_data_breaks_smoothness_but_solves():
    # f0 = 1: the worked problem's jump appears and both solvable flags go off
    problem = BVPProblem(
        stencil=Stencil.from_coeffs((1, 0, 1)), k=0, f0=PiecewisePoly.constant(1, 0, 2)
    )
    family = solve_homogeneous(problem)
    _solution_invariants(problem, family)
    assert family.smoothness.zero_trace_solvable is False
    assert family.smoothness.minimal_solvable is False
    assert family.smoothness.node_jumps == ((F(1), 1, F(2)),)


def test_offgrid_data_breaks_stay_out_of_the_tracked_orders():
    # an f0 jump off the node grid moves into derivatives of v beyond order
    # k+1, so the report records no off-grid defects and v stays C^1 there
    f0 = PiecewisePoly.from_pieces((0, F(1, 2), 2), [(1,), (3,)])
    problem = BVPProblem(stencil=Stencil.from_coeffs((1, 0, 1)), k=0, f0=f0)
    family = solve_homogeneous(problem)
    _solution_invariants(problem, family)
    assert family.smoothness.offgrid_defects == ()
    assert family.v.jump(F(1, 2), 0) == 0
    assert family.v.jump(F(1, 2), 1) == 0
    assert family.v.jump(F(3, 2), 1) == 0


def test_problem_validation():
    s = Stencil.from_coeffs((1, 0, 1))
    with pytest.raises(ValueError, match="k must be >= 0"):
        BVPProblem(stencil=s, k=-1, f0=PiecewisePoly.constant(1, 0, 2))
    with pytest.raises(ValueError, match="must live on"):
        BVPProblem(stencil=s, k=0, f0=PiecewisePoly.constant(1, 0, 3))

    # breakpoints are refined onto the node grid at construction
    problem = BVPProblem(stencil=s, k=0, f0=PiecewisePoly.constant(1, 0, 2))
    assert problem.f0.breaks == (0, 1, 2)

    with pytest.raises(ValueError, match="solve_nonhomogeneous"):
        solve_homogeneous(
            BVPProblem(stencil=s, k=0, f0=PiecewisePoly.constant(1, 0, 2), f1=(1,))
        )


def test_infeasible_problem_reports_exact_residuals():
    problem = BVPProblem(stencil=RANK_ONE, k=0, f0=PiecewisePoly.constant(1, 0, 2))
    family = solve_homogeneous(problem)
    assert family.status is SolveStatus.INFEASIBLE
    assert family.boundary_rank == 1
    assert family.v is None and family.w is None and family.d is None
    assert family.residuals
    for _, value in family.residuals:
        assert value != 0


def test_affine_family_with_explicit_kernel_direction():
    # f0 = t - 1 satisfies the one solvability constraint of the rank-1
    # boundary matrix, so the solution set is a line; its direction is the
    # hat function, the preimage of w = t - 1
    f0 = PiecewisePoly.from_global((-1, 1), (0, 2))
    problem = BVPProblem(stencil=RANK_ONE, k=0, f0=f0)
    family = solve_homogeneous(problem)
    assert family.status is SolveStatus.AFFINE
    assert family.boundary_rank == 1
    assert len(family.kernel) == 1
    _solution_invariants(problem, family)

    direction = family.kernel[0]
    vk = direction.v
    # the direction solves the homogeneous problem: R vk is linear with the
    # recorded coefficients, vk is continuous and has zero endpoint traces
    wk = apply_difference(RANK_ONE, vk)
    assert wk.same(
        PiecewisePoly.from_global((direction.c[1], direction.c[0]), (0, 2))
    )
    assert wk.derivative(2).is_zero()
    assert vk.trace(0, 0, 1) == 0 and vk.trace(2, 0, -1) == 0
    assert vk.jump(1, 0) == 0
    assert vk.jump(1, 1) != 0  # a genuine hat: the kink is what keeps it nontrivial

    # shifting the particular solution along the kernel keeps the equation
    shifted = family.v + vk.scaled(F(7, 3))
    assert (apply_difference(RANK_ONE, shifted).derivative(2) + problem.f0).is_zero()


def test_kernel_certificate_ranks():
    for s in named_stencils():
        cert = kernel_certificate(analyze(s))
        assert cert.rank == 2
        assert cert.dim_kernel == 0
        assert cert.kernel_basis == ()
        assert len(cert.conditions) == len(cert.matrix) == 2 + 2 * s.N

    # the rank-1 boundary matrix stencil still has a trivial smooth-class
    # kernel: its lone generalized kernel element is a hat, which the order-1
    # jump row rules out of the order-(k+2) class
    cert = kernel_certificate(analyze(RANK_ONE))
    assert cert.rank == 2
    assert cert.dim_kernel == 0


def test_hermite_extension_matches_data_and_stays_smooth():
    s = Stencil.from_coeffs((0, 1, 1, 1, 2))
    f1 = (F(1), F(2))          # 1 + 2t
    f2 = (F(3), F(0), F(-1))   # 3 - t^2
    for k in (0, 1):
        psi = hermite_extension(s, k, f1, f2)
        assert (psi.start, psi.end) == (F(-2), F(5))
        # data regions reproduce f1 / f2 verbatim
        assert psi.value(F(-1)) == -1
        assert psi.value(F(9, 2)) == 3 - F(81, 4)
        # dead middle
        assert psi.restricted(1, 2).is_zero()
        # globally of order k+2: no jumps anywhere, including the seams
        assert smoothness_defects(psi, k + 2) == []


def test_solve_nonhomogeneous_satisfies_the_full_problem():
    s = Stencil.from_coeffs((1, 0, 1))
    f0 = PiecewisePoly.constant(1, 0, 2)
    problem = BVPProblem(stencil=s, k=0, f0=f0, f1=(1,), f2=(0, F(1, 2)))
    family = solve_nonhomogeneous(problem)
    assert family.status is SolveStatus.UNIQUE

    y = family.extension
    assert (y.start, y.end) == (F(-1), F(3))
    # y carries the prescribed data outside (0, 2)
    assert y.value(F(-1, 2)) == 1
    assert y.value(F(5, 2)) == F(5, 4)
    # boundary values of the solution come from the data
    assert family.v.trace(0, 0, 1) == 1
    assert family.v.trace(2, 0, -1) == F(1, 2) * 2
    # the equation holds with the full shifted sum of y
    w_full = apply_shifted_sum(s, y)
    assert w_full.same(family.w)
    assert (w_full.derivative(2) + f0).is_zero()
    # v is the interior part of y and continuous
    assert family.v.same(y.restricted(0, 2))
    for t in family.v.breaks[1:-1]:
        assert family.v.jump(t, 0) == 0


def test_solve_nonhomogeneous_with_zero_data_matches_homogeneous():
    s = Stencil.from_coeffs((1, 1, 2, 4, 4))
    f0 = PiecewisePoly.from_global((0, 1), (0, 3))
    problem = BVPProblem(stencil=s, k=0, f0=f0)
    a = solve_homogeneous(problem)
    b = solve_nonhomogeneous(problem)
    assert a.status is b.status is SolveStatus.UNIQUE
    assert a.d == b.d
    assert a.v.same(b.v)
    assert a.w.same(b.w)


def test_index_report_checks_out_on_named_stencils():
    for s in named_stencils():
        for k in (0, 1, 2):
            problem = BVPProblem(
                stencil=s, k=k, f0=PiecewisePoly.constant(1, 0, s.N + 1)
            )
            report = index_report(problem)
            assert report.all_ok, [
                (row.name, row.expected, row.got) for row in report.rows if not row.ok
            ]
            assert report.boundary_rank == 2
            assert report.table.k == k
