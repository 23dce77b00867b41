"""Finite-difference cross-check for the exact machinery.

Everything in this module is double-precision evidence, deliberately kept
apart from the rational computations: grids validate spectra, convergence
rates and index claims numerically, and they are the only place a nonzero
zeroth-order coefficient a(t) is handled.  Nothing here feeds back into an
exact result.

The grid puts n subdivisions on each unit interval of (0, N+1), so there are
M - 1 interior points t_i = i/n with M = n(N+1).  Dirichlet zeros at t_0 and
t_M are eliminated structurally (interior unknowns only).  The difference
operator is applied in extended form: from interior samples of v it produces
(Rv) at all grid points 0..M (zero fill outside), and only then is the
negative second difference taken back down to the interior points.  Composing
the two square interior matrices instead would silently impose (Rv)(0) =
(Rv)(M) = 0, which is a condition on Rv that the problem never asks for.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .piecewise import PiecewisePoly
from .structure import Stencil, build_shift_matrix, spectrum


@dataclass(frozen=True)
class GridOperator:
    """One dense double-precision grid matrix."""

    description: str
    n: int
    size: int
    matrix: np.ndarray


@dataclass(frozen=True)
class GridOperators:
    """The assembled operator family for one stencil and resolution."""

    stencil: Stencil
    n: int
    size: int
    shift: GridOperator
    shift_extended: GridOperator
    second_difference: GridOperator
    operator: GridOperator
    a_samples: np.ndarray | None

    @property
    def points(self) -> list[Fraction]:
        return [Fraction(i, self.n) for i in range(1, self.size + 1)]


def _sample(f: PiecewisePoly, t: Fraction) -> float:
    """Sample value, averaging the one-sided limits across a jump."""
    if t in f.breaks[1:-1]:
        left = f.trace(t, 0, -1)
        right = f.trace(t, 0, +1)
        return float((left + right) / 2)
    return float(f.value(t))


def grid_samples(f: PiecewisePoly, ops: GridOperators) -> np.ndarray:
    return np.array([_sample(f, t) for t in ops.points], dtype=float)


def assemble(stencil: Stencil, n: int, a: PiecewisePoly | None = None) -> GridOperators:
    """Assemble the grid operators at resolution n (n >= 4 per unit interval)."""
    if n < 4:
        raise ValueError("need at least 4 subdivisions per unit interval")
    big = stencil.N
    m_total = n * (big + 1)
    size = m_total - 1

    offsets = [(j, float(stencil.b(j))) for j in range(-big, big + 1) if stencil.b(j) != 0]

    shift_sq = np.zeros((size, size))
    shift_ext = np.zeros((m_total + 1, size))
    for j, weight in offsets:
        for i in range(0, m_total + 1):
            col = i + j * n
            if 1 <= col <= size:
                shift_ext[i, col - 1] += weight
                if 1 <= i <= size:
                    shift_sq[i - 1, col - 1] += weight

    h2 = (1.0 / n) ** 2
    second = np.zeros((size, m_total + 1))
    for i in range(1, m_total):
        second[i - 1, i - 1] = 1.0 / h2
        second[i - 1, i] = -2.0 / h2
        second[i - 1, i + 1] = 1.0 / h2

    full = -(second @ shift_ext)
    a_samples = None
    if a is not None:
        a_samples = np.array(
            [float(a.trace(Fraction(i, n), 0, +1)) for i in range(1, m_total)], dtype=float
        )
        full = full + np.diag(a_samples)

    return GridOperators(
        stencil=stencil,
        n=n,
        size=size,
        shift=GridOperator("difference operator, interior to interior", n, size, shift_sq),
        shift_extended=GridOperator("difference operator, interior to all grid points", n, size, shift_ext),
        second_difference=GridOperator("second difference, all grid points to interior", n, size, second),
        operator=GridOperator("boundary value operator", n, size, full),
        a_samples=a_samples,
    )


@dataclass(frozen=True)
class GridSolution:
    values: np.ndarray
    condition: float
    ill_conditioned: bool
    least_squares: bool


def solve_grid(ops: GridOperators, f0_samples: np.ndarray) -> GridSolution:
    """Direct solve of the grid system; least squares when near-singular."""
    a = ops.operator.matrix
    rhs = np.asarray(f0_samples, dtype=float)
    if rhs.shape != (ops.size,):
        raise ValueError("right-hand side must have one sample per interior point")
    condition = float(np.linalg.cond(a))
    ill = not math.isfinite(condition) or condition > 1e12
    if ill:
        values = np.linalg.lstsq(a, rhs, rcond=None)[0]
    else:
        values = np.linalg.solve(a, rhs)
    return GridSolution(values=values, condition=condition, ill_conditioned=ill, least_squares=ill)


@dataclass(frozen=True)
class SpectrumCheck:
    """Distances between exact and grid spectra.

    ``containment_distance`` is the largest distance from an eigenvalue of R1
    to the nearest eigenvalue of the interior grid shift matrix; the grid
    matrix block-decomposes by residue class mod n into n-1 copies of R1 and
    one copy of R2, so ``block_distance`` (largest distance from a grid
    eigenvalue to the union of the R1 and R2 spectra) should be tiny as well.
    """

    n: int
    containment_distance: float
    block_distance: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.containment_distance <= self.tolerance


def spectrum_check(stencil: Stencil, n: int, tolerance: float = 1e-8) -> SpectrumCheck:
    sm = build_shift_matrix(stencil)
    exact_r1 = spectrum(sm)
    r2 = np.array([[float(x) for x in row] for row in sm.r2_lists()], dtype=float)
    exact_r2 = np.linalg.eigvals(r2) if sm.stencil.N >= 1 and r2.size else np.array([])
    ops = assemble(stencil, n)
    grid_eigs = np.linalg.eigvals(ops.shift.matrix)

    containment = max(float(np.abs(grid_eigs - lam).min()) for lam in exact_r1)
    union = np.concatenate([exact_r1, exact_r2]) if exact_r2.size else exact_r1
    block = max(float(np.abs(union - mu).min()) for mu in grid_eigs)
    return SpectrumCheck(n=n, containment_distance=containment, block_distance=block, tolerance=tolerance)


@dataclass(frozen=True)
class IndexEstimate:
    """Numerical kernel and cokernel dimensions from singular values."""

    kernel_dim: int
    cokernel_dim: int
    threshold: float
    smallest_forward: float
    smallest_adjoint: float

    @property
    def index(self) -> int:
        return self.kernel_dim - self.cokernel_dim

    @property
    def balanced(self) -> bool:
        return self.kernel_dim == self.cokernel_dim


def index_estimate(ops: GridOperators, relative_threshold: float = 1e-8) -> IndexEstimate:
    a = ops.operator.matrix
    forward = np.linalg.svd(a, compute_uv=False)
    adjoint = np.linalg.svd(a.T.copy(), compute_uv=False)
    top = max(forward.max(), adjoint.max())
    cut = relative_threshold * top if top > 0 else relative_threshold
    return IndexEstimate(
        kernel_dim=int((forward < cut).sum()),
        cokernel_dim=int((adjoint < cut).sum()),
        threshold=cut,
        smallest_forward=float(forward.min()),
        smallest_adjoint=float(adjoint.min()),
    )


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    max_error: float


@dataclass(frozen=True)
class ConvergenceStudy:
    """Max-node errors against an exact solution over a resolution sweep.

    When the scheme happens to be exact for the instance (the truncation
    error of the second difference vanishes on polynomials of degree <= 3),
    all errors sit at rounding level and an observed order is meaningless;
    ``exact_reproduction`` flags that case and ``orders`` is empty.
    """

    rows: tuple[ConvergenceRow, ...]
    orders: tuple[float, ...]
    exact_reproduction: bool

    @property
    def observed_order(self) -> float | None:
        return min(self.orders) if self.orders else None


def convergence_study(
    stencil: Stencil,
    f0: PiecewisePoly,
    exact_v: PiecewisePoly,
    resolutions: tuple[int, ...] = (32, 64, 128),
    a: PiecewisePoly | None = None,
    rounding_floor: float = 1e-10,
) -> ConvergenceStudy:
    rows = []
    for n in resolutions:
        ops = assemble(stencil, n, a)
        sol = solve_grid(ops, grid_samples(f0, ops))
        exact = np.array([float(exact_v.value(t)) for t in ops.points])
        rows.append(ConvergenceRow(n=n, max_error=float(np.abs(sol.values - exact).max())))

    exact_reproduction = all(r.max_error < rounding_floor for r in rows)
    orders = []
    if not exact_reproduction:
        for prev, nxt in zip(rows, rows[1:]):
            if nxt.max_error == 0 or prev.max_error == 0:
                continue
            ratio = math.log(prev.max_error / nxt.max_error)
            step = math.log(nxt.n / prev.n)
            orders.append(ratio / step)
    return ConvergenceStudy(rows=tuple(rows), orders=tuple(orders), exact_reproduction=exact_reproduction)
