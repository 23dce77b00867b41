"""Exact solution of the second-order differential-difference boundary value problem.

The problem solved here is

    -(R v)''(t) = f0(t)        on (0, N+1),
    v = f1 on [-N, 0],         v = f2 on [N+1, 2N+1],

with R the integer-shift difference operator of a stencil in the supported
(singular-minor) regime.  Writing w = R v, every solution of -w'' = f0 is

    w(t) = d1*t + d2 - I(t),        I = double antiderivative of f0,

so the boundary value problem collapses to a 2 x 2 rational linear system for
(d1, d2): the two order-zero node relations of the structure data applied to
w.  Depending on the rank of that boundary matrix the solution is unique, an
affine family (the kernel directions are preimages of linear functions), or
nonexistent; all three cases are decided exactly and reported with exact
residuals.

Inhomogeneous extension data is folded in by subtracting a smooth extension
psi that matches f1 / f2 to the required derivative order and is supported in
the two outermost unit intervals of (0, N+1) (a two-point Hermite match of
degree 2k+3).  The reduced problem for w = y - psi has zero extension data and
right-hand side f0 + (R psi)''.

Beyond the solve itself the module certifies the structure theory on the
instance: triviality of the kernel of the order-k operator, the codimension
counts of the admissible-data subspaces, and the resulting index table.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from . import exactla
from .exactla import to_fraction
from .functionals import (
    DataConstraints,
    image_functionals,
    membership_functionals,
    rank_of_functionals,
    solvability_constraints,
)
from .piecewise import (
    PiecewisePoly,
    apply_difference_inverse,
    apply_shifted_sum,
    concat,
    double_antiderivative,
    in_smooth_class,
    pder,
    peval,
    ptrim,
    smoothness_defects,
    two_point_hermite,
    zero_extension,
)
from .structure import IndexTable, Stencil, StructureReport, analyze


class SolveStatus(Enum):
    UNIQUE = "unique"
    AFFINE = "affine family"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class BVPProblem:
    """Problem data; f1/f2 are global-coordinate polynomial coefficient tuples.

    f0 is refined on construction so its breakpoints include every interior
    integer node; this changes nothing about the function, it only aligns the
    piece structure with the node grid the theory works on.
    """

    stencil: Stencil
    k: int
    f0: PiecewisePoly
    f1: tuple[Fraction, ...] = (Fraction(0),)
    f2: tuple[Fraction, ...] = (Fraction(0),)

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("smoothness order k must be >= 0")
        n = self.stencil.N
        if (self.f0.start, self.f0.end) != (Fraction(0), Fraction(n + 1)):
            raise ValueError("f0 must live on (0, %d)" % (n + 1))
        object.__setattr__(self, "f0", self.f0.refined(range(1, n + 1)))
        object.__setattr__(self, "f1", ptrim([to_fraction(c) for c in self.f1]))
        object.__setattr__(self, "f2", ptrim([to_fraction(c) for c in self.f2]))

    @property
    def homogeneous_extension(self) -> bool:
        return self.f1 == (Fraction(0),) and self.f2 == (Fraction(0),)


@dataclass(frozen=True)
class KernelDirection:
    """A kernel element: preimage of the linear function c1 + c2*t."""

    c: tuple[Fraction, Fraction]
    v: PiecewisePoly


@dataclass(frozen=True)
class SmoothnessReport:
    """Where (and whether) the solution loses smoothness at order k.

    ``node_jumps`` lists the exact jumps of v', ..., v^(k+1) at the interior
    integer nodes; ``offgrid_defects`` every other nonzero jump, meaning
    breaks the data introduced off the node grid, or a continuity failure at
    a node (the solve construction rules the latter out).  Single pieces of a
    piecewise polynomial are smooth, so ``piece_verdicts`` is all True by
    construction and recorded only for completeness.  ``extension_jumps``
    measures the assembled extension y across the seams at 0 and N+1 (orders
    0..k+1).  The two solvable flags report whether the data admits *some*
    solution in the zero-trace class of order k+2, respectively in the
    minimal domain, with the exact residuals of the violated constraints.
    """

    k: int
    data_smooth: bool
    data_defects: tuple[tuple[Fraction, int, Fraction], ...]
    node_jumps: tuple[tuple[Fraction, int, Fraction], ...]
    offgrid_defects: tuple[tuple[Fraction, int, Fraction], ...]
    smooth_interior: bool
    extension_jumps: tuple[tuple[Fraction, int, Fraction], ...]
    smooth_extension: bool
    piece_verdicts: tuple[bool, ...]
    zero_trace_solvable: bool | None
    zero_trace_residuals: tuple[tuple[str, Fraction], ...]
    minimal_solvable: bool | None
    minimal_residuals: tuple[tuple[str, Fraction], ...]


@dataclass(frozen=True)
class SolutionFamily:
    """Outcome of a solve: exact particular solution plus kernel directions."""

    status: SolveStatus
    boundary_matrix: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
    boundary_rank: int
    rhs: tuple[Fraction, Fraction]
    d: tuple[Fraction, Fraction] | None
    v: PiecewisePoly | None
    w: PiecewisePoly | None
    kernel: tuple[KernelDirection, ...]
    residuals: tuple[tuple[str, Fraction], ...]
    extension: PiecewisePoly | None
    smoothness: SmoothnessReport | None


def boundary_matrix(structure: StructureReport) -> list[list[Fraction]]:
    """The 2 x 2 matrix of the order-zero node relations acting on d1*t + d2."""
    f_edge, f_int = membership_functionals(structure.gamma, 1)
    return [
        [f_edge.on_monomial(1), f_edge.on_monomial(0)],
        [f_int.on_monomial(1), f_int.on_monomial(0)],
    ]


def _poly_derivs_at(coeffs: tuple[Fraction, ...], t: Fraction, count: int) -> list[Fraction]:
    out = []
    c = coeffs
    for _ in range(count):
        out.append(peval(c, t))
        c = pder(c)
    return out


def hermite_extension(stencil: Stencil, k: int, f1: tuple[Fraction, ...], f2: tuple[Fraction, ...]) -> PiecewisePoly:
    """Smooth extension psi on (-N, 2N+1): f1 left, f2 right, bump inside.

    psi equals f1 on (-N, 0) and f2 on (N+1, 2N+1); inside (0, N+1) it decays
    from the f1-matching derivative data at 0 to zero across (0, 1), stays
    zero in the middle, and grows into the f2-matching data across (N, N+1).
    Matching covers orders 0..k+1, so psi has order k+2 across every seam.
    """
    n = stencil.N
    count = k + 2
    zero = [Fraction(0)] * count
    left_pad = PiecewisePoly.from_global(f1, (-n, 0))
    right_pad = PiecewisePoly.from_global(f2, (n + 1, 2 * n + 1))
    h1 = two_point_hermite(_poly_derivs_at(f1, Fraction(0), count), zero)
    h2 = two_point_hermite(zero, _poly_derivs_at(f2, Fraction(n + 1), count))
    parts = [left_pad, PiecewisePoly.from_pieces((0, 1), [h1])]
    if n > 1:
        parts.append(PiecewisePoly.zero(1, n))
    parts.append(PiecewisePoly.from_pieces((n, n + 1), [h2]))
    parts.append(right_pad)
    psi = concat(parts)
    if smoothness_defects(psi, k + 2):
        raise RuntimeError("extension construction produced a non-smooth seam")
    return psi


def _evaluate_constraints(dc: DataConstraints, second_antiderivative: PiecewisePoly) -> tuple[bool, tuple[tuple[str, Fraction], ...]]:
    bad = []
    for fn in dc.residuals:
        value = fn.evaluate(second_antiderivative)
        if value != 0:
            bad.append((fn.label, value))
    return not bad, tuple(bad)


def _smoothness(
    structure: StructureReport,
    k: int,
    v: PiecewisePoly,
    data: PiecewisePoly,
    y: PiecewisePoly,
    second_antiderivative: PiecewisePoly,
) -> SmoothnessReport:
    n = structure.stencil.N
    data_defects = tuple(smoothness_defects(data, k))
    data_smooth = not data_defects

    integer_nodes = {Fraction(i) for i in range(1, n + 1)}
    node_jumps = []
    offgrid = []
    for t in v.breaks[1:-1]:
        for mu in range(0, k + 2):
            jump = v.jump(t, mu)
            if t in integer_nodes and mu >= 1:
                node_jumps.append((t, mu, jump))
            elif jump != 0:
                offgrid.append((t, mu, jump))
    smooth_interior = in_smooth_class(v, k + 2)

    extension_jumps = []
    for t in (Fraction(0), Fraction(n + 1)):
        for mu in range(0, k + 2):
            extension_jumps.append((t, mu, y.jump(t, mu)))
    smooth_extension = in_smooth_class(y, k + 2)

    if data_smooth:
        zt_ok, zt_bad = _evaluate_constraints(
            solvability_constraints(structure, k, "zero_trace"), second_antiderivative
        )
        mn_ok, mn_bad = _evaluate_constraints(
            solvability_constraints(structure, k, "minimal"), second_antiderivative
        )
    else:
        zt_ok, zt_bad = False, tuple(
            ("data jump at %s, order %d" % (t, mu), val) for t, mu, val in data_defects
        )
        mn_ok, mn_bad = False, zt_bad

    return SmoothnessReport(
        k=k,
        data_smooth=data_smooth,
        data_defects=data_defects,
        node_jumps=tuple(node_jumps),
        offgrid_defects=tuple(offgrid),
        smooth_interior=smooth_interior,
        extension_jumps=tuple(extension_jumps),
        smooth_extension=smooth_extension,
        piece_verdicts=tuple(True for _ in v.pieces),
        zero_trace_solvable=zt_ok,
        zero_trace_residuals=zt_bad,
        minimal_solvable=mn_ok,
        minimal_residuals=mn_bad,
    )


def _solve_reduced(structure: StructureReport, k: int, data: PiecewisePoly) -> tuple:
    """Shared core: boundary system for -(R v)'' = data with zero extension.

    Returns (status, M, rank, rhs, d, null, residuals, I).  The particular d
    minimizes d1^2 + d2^2 over the solution set; when the data is smooth
    enough for the zero-trace constraint stack of order k and that stack is
    feasible, d is taken from the stack's solution set instead, so the
    returned representative is as smooth as the data allows.
    """
    second = double_antiderivative(data)
    f_edge, f_int = membership_functionals(structure.gamma, 1)
    matrix = [
        [f_edge.on_monomial(1), f_edge.on_monomial(0)],
        [f_int.on_monomial(1), f_int.on_monomial(0)],
    ]
    rank = exactla.rank(matrix)
    rhs = [f_edge.evaluate(second), f_int.evaluate(second)]
    solution = exactla.min_norm_solution(matrix, rhs)
    if solution is None:
        residuals = []
        for j, u in enumerate(exactla.left_nullspace(matrix)):
            value = u[0] * rhs[0] + u[1] * rhs[1]
            if value != 0:
                residuals.append(("boundary constraint %d" % j, value))
        return (SolveStatus.INFEASIBLE, matrix, rank, rhs, None, [], tuple(residuals), second)

    d, null = solution
    if in_smooth_class(data, k):
        stack = membership_functionals(structure.gamma, k + 2)
        full_rows = [[fn.on_monomial(1), fn.on_monomial(0)] for fn in stack]
        full_rhs = [fn.evaluate(second) for fn in stack]
        refined = exactla.min_norm_solution(full_rows, full_rhs)
        if refined is not None:
            d = refined[0]
    status = SolveStatus.UNIQUE if not null else SolveStatus.AFFINE
    return (status, matrix, rank, rhs, d, null, (), second)


def _assemble_particular(structure: StructureReport, d, second: PiecewisePoly):
    n = structure.stencil.N
    w = PiecewisePoly.from_global((d[1], d[0]), (0, n + 1)) - second
    v = apply_difference_inverse(structure.stencil, w)
    return v, w


def _kernel_directions(structure: StructureReport, null) -> tuple[KernelDirection, ...]:
    n = structure.stencil.N
    out = []
    for c in null:
        w_c = PiecewisePoly.from_global((c[1], c[0]), (0, n + 1))
        out.append(KernelDirection(c=(c[0], c[1]), v=apply_difference_inverse(structure.stencil, w_c)))
    return tuple(out)


def _as_pair_rows(matrix) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
    return (tuple(matrix[0]), tuple(matrix[1]))


def solve_homogeneous(problem: BVPProblem) -> SolutionFamily:
    """Solve with zero extension data (f1 = f2 = 0)."""
    if not problem.homogeneous_extension:
        raise ValueError("extension data is nonzero; use solve_nonhomogeneous")
    structure = analyze(problem.stencil)
    n = problem.stencil.N
    status, matrix, rank, rhs, d, null, residuals, second = _solve_reduced(structure, problem.k, problem.f0)
    if status is SolveStatus.INFEASIBLE:
        return SolutionFamily(
            status=status,
            boundary_matrix=_as_pair_rows(matrix),
            boundary_rank=rank,
            rhs=tuple(rhs),
            d=None, v=None, w=None,
            kernel=(),
            residuals=residuals,
            extension=None,
            smoothness=None,
        )
    v, w = _assemble_particular(structure, d, second)
    y = zero_extension(v, -n, 2 * n + 1)
    report = _smoothness(structure, problem.k, v, problem.f0, y, second)
    return SolutionFamily(
        status=status,
        boundary_matrix=_as_pair_rows(matrix),
        boundary_rank=rank,
        rhs=tuple(rhs),
        d=(d[0], d[1]),
        v=v, w=w,
        kernel=_kernel_directions(structure, null),
        residuals=(),
        extension=y,
        smoothness=report,
    )


def solve_nonhomogeneous(problem: BVPProblem) -> SolutionFamily:
    """Solve with polynomial extension data f1 / f2.

    Reduces to a zero-extension problem for w = y - psi with right-hand side
    f0 + (R psi)'', where psi is the Hermite extension of the data.  With
    f1 = f2 = 0 this is exactly ``solve_homogeneous``.
    """
    structure = analyze(problem.stencil)
    n = problem.stencil.N
    psi = hermite_extension(problem.stencil, problem.k, problem.f1, problem.f2)
    shifted = apply_shifted_sum(problem.stencil, psi)
    reduced = problem.f0 + shifted.derivative(2)
    status, matrix, rank, rhs, d, null, residuals, second = _solve_reduced(structure, problem.k, reduced)
    if status is SolveStatus.INFEASIBLE:
        return SolutionFamily(
            status=status,
            boundary_matrix=_as_pair_rows(matrix),
            boundary_rank=rank,
            rhs=tuple(rhs),
            d=None, v=None, w=None,
            kernel=(),
            residuals=residuals,
            extension=None,
            smoothness=None,
        )
    v, w = _assemble_particular(structure, d, second)
    mid = v + psi.restricted(0, n + 1)
    y = concat([
        PiecewisePoly.from_global(problem.f1, (-n, 0)),
        mid,
        PiecewisePoly.from_global(problem.f2, (n + 1, 2 * n + 1)),
    ])
    report = _smoothness(structure, problem.k, mid, reduced, y, second)
    return SolutionFamily(
        status=status,
        boundary_matrix=_as_pair_rows(matrix),
        boundary_rank=rank,
        rhs=tuple(rhs),
        d=(d[0], d[1]),
        v=mid, w=w + shifted,
        kernel=_kernel_directions(structure, null),
        residuals=(),
        extension=y,
        smoothness=report,
    )


@dataclass(frozen=True)
class KernelCertificate:
    """Exact rank certificate for the kernel of the order-k operator.

    A kernel element must be a preimage of a linear function c1 + c2*t; it is
    admissible only if it has zero endpoint traces and no order-0/1 interior
    jumps (a piecewise-linear function of order 2 cannot kink).  Rank 2 of
    the listed conditions in (c1, c2) certifies that only c = 0 survives.
    """

    rank: int
    dim_kernel: int
    conditions: tuple[str, ...]
    matrix: tuple[tuple[Fraction, Fraction], ...]
    kernel_basis: tuple[KernelDirection, ...]


def kernel_certificate(structure: StructureReport) -> KernelCertificate:
    n = structure.stencil.N
    v_one = apply_difference_inverse(structure.stencil, PiecewisePoly.constant(1, 0, n + 1))
    v_lin = apply_difference_inverse(structure.stencil, PiecewisePoly.from_global((0, 1), (0, n + 1)))
    rows = []
    labels = []
    rows.append([v_one.trace(0, 0, 1), v_lin.trace(0, 0, 1)])
    labels.append("trace at 0")
    rows.append([v_one.trace(n + 1, 0, -1), v_lin.trace(n + 1, 0, -1)])
    labels.append("trace at %d" % (n + 1))
    for node in range(1, n + 1):
        for mu in (0, 1):
            rows.append([v_one.jump(node, mu), v_lin.jump(node, mu)])
            labels.append("jump at %d, order %d" % (node, mu))
    rank = exactla.rank(rows)
    basis = []
    if rank < 2:
        for c in exactla.nullspace(rows):
            combo = v_one.scaled(c[0]) + v_lin.scaled(c[1])
            basis.append(KernelDirection(c=(c[0], c[1]), v=combo))
    return KernelCertificate(
        rank=rank,
        dim_kernel=2 - rank,
        conditions=tuple(labels),
        matrix=tuple((r[0], r[1]) for r in rows),
        kernel_basis=tuple(basis),
    )


@dataclass(frozen=True)
class CheckRow:
    name: str
    expected: object
    got: object

    @property
    def ok(self) -> bool:
        return self.expected == self.got


@dataclass(frozen=True)
class IndexReport:
    """Instance-level verification of the codimension and index counts."""

    stencil: Stencil
    k: int
    dependent: bool
    table: IndexTable
    boundary_rank: int
    rows: tuple[CheckRow, ...]

    @property
    def all_ok(self) -> bool:
        return all(r.ok for r in self.rows)


def index_report(problem: BVPProblem) -> IndexReport:
    structure = analyze(problem.stencil)
    k = problem.k
    table = structure.index_table(k)
    image_rank = rank_of_functionals(image_functionals(structure, k))
    zero_trace = solvability_constraints(structure, k, "zero_trace")
    minimal = solvability_constraints(structure, k, "minimal")
    cert = kernel_certificate(structure)
    rows = (
        CheckRow("image codimension at order k", table.codim_difference_image, image_rank),
        CheckRow("zero-trace data constraints", table.codim_zero_trace_domain, zero_trace.count),
        CheckRow("minimal-domain data constraints", table.codim_minimal_domain, minimal.count),
        CheckRow("kernel dimension", 0, cert.dim_kernel),
        CheckRow("index, zero-trace problem", table.index_zero_trace, cert.dim_kernel - zero_trace.count),
        CheckRow("index, minimal-domain problem", table.index_minimal, cert.dim_kernel - minimal.count),
    )
    return IndexReport(
        stencil=problem.stencil,
        k=k,
        dependent=structure.ends.dependent,
        table=table,
        boundary_rank=exactla.rank(boundary_matrix(structure)),
        rows=rows,
    )
