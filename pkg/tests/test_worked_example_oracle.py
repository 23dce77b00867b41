"""Independent re-derivation of the N=1 model problem, then solver cross-check.

The model problem: stencil (1, 0, 1), -(Rv)'' = 1 on (0, 2), zero extension
data, smoothness order k = 0.  Everything here is derived with sympy from the
definition of the operator alone (shift relations written out by hand for
this stencil), without calling the solver.  Only after the oracle has pinned
down the unique solution do we require the package to reproduce it exactly.
"""

from fractions import Fraction

import sympy as sp

from ddbvp.piecewise import PiecewisePoly
from ddbvp.solver import BVPProblem, SolveStatus, solve_homogeneous
from ddbvp.structure import Stencil


def _frac(x) -> Fraction:
    r = sp.Rational(x)
    return Fraction(int(r.p), int(r.q))


def _derive_oracle():
    """Solve the model problem from first principles with sympy.

    On (0, 2) with zero extension, (Rv)(t) = v(t-1) + v(t+1) collapses to
    w(t) = v2(t+1) for t in (0, 1) and w(t) = v1(t-1) for t in (1, 2), where
    v1/v2 are the restrictions of v to (0, 1)/(1, 2).  Equivalently
    v1(s) = w(s+1) and v2(s) = w(s-1).  The conditions v1(0) = 0, v2(2) = 0
    and v1(1) = v2(1) close the system.
    """
    t, tau, d1, d2 = sp.symbols("t tau d1 d2")
    f0 = sp.Integer(1)
    second = sp.integrate((t - tau) * f0.subs(t, tau), (tau, 0, t))
    w = d1 * t + d2 - second
    assert sp.simplify(-sp.diff(w, t, 2) - f0) == 0

    v1 = sp.expand(w.subs(t, t + 1))
    v2 = sp.expand(w.subs(t, t - 1))
    conditions = [
        sp.Eq(v1.subs(t, 0), 0),
        sp.Eq(v2.subs(t, 2), 0),
        sp.Eq(v1.subs(t, 1), v2.subs(t, 1)),
    ]
    sols = sp.solve(conditions, [d1, d2], dict=True)
    assert len(sols) == 1
    sol = sols[0]
    v1 = sp.expand(v1.subs(sol))
    v2 = sp.expand(v2.subs(sol))
    w = sp.expand(w.subs(sol))

    # the assembled Rv really satisfies the equation on both unit intervals
    assert sp.simplify(-sp.diff(v2.subs(t, t + 1), t, 2) - f0) == 0
    assert sp.simplify(-sp.diff(v1.subs(t, t - 1), t, 2) - f0) == 0
    return t, sol[d1], sol[d2], v1, v2, w


def test_oracle_matches_the_known_closed_form():
    t, d1, d2, v1, v2, w = _derive_oracle()
    assert d1 == 1
    assert d2 == sp.Rational(-1, 2)
    assert sp.expand(v1 + t**2 / 2) == 0
    assert sp.expand(v2 - ((t - 1) - sp.Rational(1, 2) - (t - 1) ** 2 / 2)) == 0
    assert sp.expand(w - (t - sp.Rational(1, 2) - t**2 / 2)) == 0
    # derivative jump of v across the interior node
    jump = sp.diff(v2, t).subs(t, 1) - sp.diff(v1, t).subs(t, 1)
    assert jump == 2


def test_oracle_boundary_matrix():
    # the boundary system in (d1, d2): conditions applied to w = d1*t + d2
    t = sp.symbols("t")
    edge = lambda expr: expr.subs(t, 2) - expr.subs(t, 0)  # noqa: E731
    interior = lambda expr: expr.subs(t, 1)  # noqa: E731
    matrix = [[fn(t), fn(sp.Integer(1))] for fn in (edge, interior)]
    assert matrix == [[2, 0], [1, 1]]


def test_solver_reproduces_the_oracle_exactly():
    t, d1, d2, v1, v2, w = _derive_oracle()
    problem = BVPProblem(
        stencil=Stencil.from_coeffs([1, 0, 1]),
        k=0,
        f0=PiecewisePoly.constant(1, 0, 2),
    )
    family = solve_homogeneous(problem)

    assert family.status is SolveStatus.UNIQUE
    assert family.boundary_rank == 2
    assert family.boundary_matrix == (
        (Fraction(2), Fraction(0)),
        (Fraction(1), Fraction(1)),
    )
    assert family.rhs == (Fraction(2), Fraction(1, 2))
    assert family.d == (_frac(d1), _frac(d2))
    assert family.kernel == ()

    for point in (Fraction(1, 3), Fraction(1, 2), Fraction(2, 3)):
        assert family.v.value(point) == _frac(v1.subs(t, sp.Rational(point.numerator, point.denominator)))
    for point in (Fraction(4, 3), Fraction(3, 2), Fraction(5, 3)):
        assert family.v.value(point) == _frac(v2.subs(t, sp.Rational(point.numerator, point.denominator)))
    for point in (Fraction(1, 4), Fraction(1), Fraction(7, 4)):
        assert family.w.value(point) == _frac(w.subs(t, sp.Rational(point.numerator, point.denominator)))

    assert family.v.jump(1, 0) == 0
    assert family.v.jump(1, 1) == 2
    assert family.v.trace(0, 0, +1) == 0
    assert family.v.trace(2, 0, -1) == 0


def test_solver_smoothness_report_for_the_model_problem():
    problem = BVPProblem(
        stencil=Stencil.from_coeffs([1, 0, 1]),
        k=0,
        f0=PiecewisePoly.constant(1, 0, 2),
    )
    family = solve_homogeneous(problem)
    report = family.smoothness

    assert report.data_smooth
    assert report.node_jumps == ((Fraction(1), 1, Fraction(2)),)
    assert report.offgrid_defects == ()
    assert not report.smooth_interior

    # the solution is unique, so the nonzero derivative jump certifies that
    # no solution lies in either smooth class; the report must agree
    assert report.zero_trace_solvable is False
    assert report.minimal_solvable is False
    assert report.zero_trace_residuals
    assert report.minimal_residuals

    # the zero extension of v keeps order-0 matching at the seams but the
    # first derivative jumps there (v'(0+) = 0 actually; check exact values)
    seam = {(node, order): value for node, order, value in report.extension_jumps}
    assert seam[(Fraction(0), 0)] == 0
    assert seam[(Fraction(2), 0)] == 0
