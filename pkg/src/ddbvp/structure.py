"""Structure of an integer-shift difference operator on a bounded interval.

The operator studied here is

    (R v)(t) = sum_{j=-N}^{N} b_j v(t + j),

applied to functions on the interval Q = (0, N+1) that are extended by zero
outside.  Cutting Q into the N+1 unit intervals (k-1, k) and stacking the
restrictions turns R into multiplication by the constant (N+1) x (N+1)
Toeplitz matrix

    R1[i][k] = b_{k-i}          (1-based i, k),

so every structural question about R reduces to linear algebra over the
stencil entries.  R2 denotes the leading principal N x N minor of R1.

The package handles the degenerate regime det R1 != 0, det R2 = 0.  There the
operator is invertible on L2(Q) but does not preserve higher smoothness: its
image inside the order-k Sobolev space is a proper subspace cut out by
finitely many rational node conditions.  This module computes the data those
conditions are built from:

* an interior node m and coefficients gamma expressing one row dependency of
  R2 (and its mirror image), which generate the node conditions;
* the two "end columns" of R1 (first column without its first entry, last
  column without its last entry), whose linear dependence or independence
  decides between two different condition counts;
* cofactors of R1 and the resulting codimension/index table.

All of this is exact rational arithmetic.  Only ``spectrum`` leaves the
rationals, returning floating-point eigenvalues for diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import exactla
from .exactla import Fraction as _F  # noqa: F401  (re-export convenience in doctests)


class UnsupportedRegimeError(ValueError):
    """Stencil falls outside the det R1 != 0, det R2 = 0 regime.

    The nonsingular-minor case is covered by the classical theory of elliptic
    functional differential equations (Skubachevskii, "Elliptic Functional
    Differential Equations and Applications", Birkhauser 1997); a singular R1
    breaks invertibility of the difference operator altogether.  Neither is
    handled here.
    """


class StructureError(RuntimeError):
    """An exact rank assumption of the supported regime failed to hold."""


@dataclass(frozen=True)
class Stencil:
    """Integer-shift stencil b_{-N}, ..., b_N with rational entries."""

    N: int
    coeffs: tuple[Fraction, ...]

    @classmethod
    def from_coeffs(cls, coeffs: Sequence) -> "Stencil":
        entries = tuple(exactla.to_fraction(c) for c in coeffs)
        if len(entries) % 2 == 0 or len(entries) < 3:
            raise ValueError("stencil needs an odd number >= 3 of coefficients")
        return cls(N=(len(entries) - 1) // 2, coeffs=entries)

    def b(self, j: int) -> Fraction:
        """Coefficient of the shift by j; zero outside [-N, N]."""
        if -self.N <= j <= self.N:
            return self.coeffs[j + self.N]
        return Fraction(0)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coeffs) + ")"


@dataclass(frozen=True)
class ShiftMatrix:
    """The Toeplitz matrix R1 of the vectorized operator, with cached minors."""

    stencil: Stencil
    r1: tuple[tuple[Fraction, ...], ...]
    det_r1: Fraction
    det_r2: Fraction

    @property
    def size(self) -> int:
        return self.stencil.N + 1

    def r1_lists(self) -> exactla.Mat:
        return [list(row) for row in self.r1]

    def r2_lists(self) -> exactla.Mat:
        n = self.stencil.N
        return [list(row[:n]) for row in self.r1[:n]]

    def entry(self, i: int, k: int) -> Fraction:
        """1-based entry R1[i][k] = b_{k-i}."""
        return self.r1[i - 1][k - 1]


class Regime(Enum):
    """Classification of a stencil by the two determinants."""

    SINGULAR_MINOR = "singular minor"        # det R1 != 0, det R2 == 0: handled here
    NONSINGULAR_BOTH = "nonsingular both"    # classical smooth theory applies
    SINGULAR_FULL = "singular full matrix"   # det R1 == 0: operator not invertible


@dataclass(frozen=True)
class RegimeReport:
    regime: Regime
    det_r1: Fraction
    det_r2: Fraction

    @property
    def supported(self) -> bool:
        return self.regime is Regime.SINGULAR_MINOR


@dataclass(frozen=True)
class GammaData:
    """Node-relation coefficients generated by the row dependency of R2.

    ``variant`` records which end of the interval the edge relation closes at:

    * ``"right_edge"``: u(N+1) = sum_{i != m+1} gamma1[i] * u(i-1) together
      with u(m) = sum_{i != m} gamma2[i] * u(i);
    * ``"left_edge"`` (the mirrored construction): u(0) = sum_{i != m}
      gamma1[i] * u(i) together with the same interior relation.

    Keys of gamma1 run over 1..N+1 minus the excluded index, keys of gamma2
    over 1..N minus m.  Relations hold for the operator image derivative by
    derivative, which is what makes them usable at every smoothness order.
    """

    N: int
    m: int
    gamma1: dict[int, Fraction]
    gamma2: dict[int, Fraction]
    variant: str = "right_edge"


@dataclass(frozen=True)
class EndColumnData:
    """The two clipped end columns of R1 and their dependency data.

    ``first_inner`` is the first column without its first entry, i.e.
    (b_{-1}, ..., b_{-N}); ``last_inner`` the last column without its last
    entry, (b_N, ..., b_1).  When they are linearly dependent, ``alpha`` holds
    the dependency (alpha1, alpha2) normalized so its first nonzero component
    is 1, and ``l`` is the smallest column index in 1..N for which R2 with row
    m and column l removed is nonsingular (the empty 0 x 0 case counts as
    nonsingular).
    """

    first_inner: tuple[Fraction, ...]
    last_inner: tuple[Fraction, ...]
    dependent: bool
    alpha: tuple[Fraction, Fraction] | None
    l: int | None


@dataclass(frozen=True)
class IndexTable:
    """Codimensions and indices implied by the end-column alternative at order k.

    ``codim_difference_image``: codimension of the difference operator's image
    inside the order-(k+2) space of functions with matching node relations.
    ``codim_minimal_domain`` / ``codim_zero_trace_domain``: codimension of the
    image of -(R v)'' over, respectively, the minimal domain (solution and
    image both of order k+2) and the zero-trace domain.  The two index rows
    are for the boundary value problem with inhomogeneous extension data,
    posed with zero-trace (whole-interval smooth) and minimal-domain targets.
    """

    k: int
    dependent: bool
    codim_difference_image: int
    codim_minimal_domain: int
    codim_zero_trace_domain: int
    index_zero_trace: int
    index_minimal: int

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (
            self.codim_difference_image,
            self.codim_minimal_domain,
            self.codim_zero_trace_domain,
            self.index_zero_trace,
            self.index_minimal,
        )


def build_shift_matrix(stencil: Stencil) -> ShiftMatrix:
    """Assemble R1[i][k] = b_{k-i} and its two determinants."""
    n = stencil.N
    r1 = tuple(tuple(stencil.b(k - i) for k in range(1, n + 2)) for i in range(1, n + 2))
    det_r1 = exactla.det([list(row) for row in r1])
    det_r2 = exactla.det([list(row[:n]) for row in r1[:n]])
    return ShiftMatrix(stencil=stencil, r1=r1, det_r1=det_r1, det_r2=det_r2)


def classify_regime(sm: ShiftMatrix) -> RegimeReport:
    if sm.det_r1 == 0:
        regime = Regime.SINGULAR_FULL
    elif sm.det_r2 == 0:
        regime = Regime.SINGULAR_MINOR
    else:
        regime = Regime.NONSINGULAR_BOTH
    return RegimeReport(regime=regime, det_r1=sm.det_r1, det_r2=sm.det_r2)


def _require_supported(sm: ShiftMatrix) -> None:
    report = classify_regime(sm)
    if report.supported:
        return
    if report.regime is Regime.NONSINGULAR_BOTH:
        raise UnsupportedRegimeError(
            "det R1 = %s and det R2 = %s: both minors nonsingular, so the operator "
            "preserves smoothness and the classical theory applies (see Skubachevskii, "
            "Elliptic Functional Differential Equations and Applications); this package "
            "only handles the singular-minor regime" % (report.det_r1, report.det_r2)
        )
    raise UnsupportedRegimeError(
        "det R1 = 0: the vectorized difference operator is not invertible on the "
        "interval and none of the structure theory here applies"
    )


def _interior_dependency(sm: ShiftMatrix) -> tuple[int, list[Fraction]]:
    """The (unique up to scale) dependency among the rows of R2.

    Returns (m, c) with sum_i c_i * row_i(R2) = 0, c normalized so that its
    first nonzero entry c_m equals 1.  In the supported regime the left null
    space of R2 is exactly one-dimensional; anything else is an internal error.
    """
    basis = exactla.left_nullspace(sm.r2_lists())
    if len(basis) != 1:
        raise StructureError(
            "left null space of R2 has dimension %d, expected 1; rank structure "
            "of the supported regime violated" % len(basis)
        )
    c = basis[0]
    m = next(i for i, x in enumerate(c, start=1) if x != 0)
    scale = 1 / c[m - 1]
    return m, [x * scale for x in c]


def find_structure(sm: ShiftMatrix) -> GammaData:
    """Node-relation coefficients with the edge relation closing at the right end.

    gamma2 comes from the row dependency of R2: row m of R2 equals
    sum_{i != m} gamma2[i] * row_i.  gamma1 solves the expansion of the last
    row of R1 (without its last entry) in the rows of R1 with first entry
    removed, skipping row m+1; those rows are a basis exactly because
    det R1 != 0 while R2 is singular.
    """
    _require_supported(sm)
    n = sm.stencil.N
    m, c = _interior_dependency(sm)
    gamma2 = {i: -c[i - 1] for i in range(1, n + 1) if i != m}

    # e_i = row i of R1 without its first entry; g_{N+1} = last row without its last entry.
    e_rows = {i: [sm.entry(i, k) for k in range(2, n + 2)] for i in range(1, n + 2)}
    target = [sm.entry(n + 1, k) for k in range(1, n + 1)]
    indices = [i for i in range(1, n + 2) if i != m + 1]
    system = exactla.transpose([e_rows[i] for i in indices])
    try:
        coeffs = exactla.solve_unique(system, target)
    except ValueError as exc:
        raise StructureError("edge relation rows failed to form a basis: %s" % exc) from exc
    gamma1 = {i: coeffs[pos] for pos, i in enumerate(indices)}
    return GammaData(N=n, m=m, gamma1=gamma1, gamma2=gamma2, variant="right_edge")


def find_alt_structure(sm: ShiftMatrix) -> GammaData:
    """Mirrored node relations, the edge relation closing at the left end.

    Expands the first row of R1 (without its first entry) in the rows of R1
    with last entry removed, skipping row m.  Together with the unchanged
    interior relation this cuts out the same constraint space as
    ``find_structure``; the rank equality is exercised in the test suite.
    """
    _require_supported(sm)
    n = sm.stencil.N
    m, c = _interior_dependency(sm)
    gamma2 = {i: -c[i - 1] for i in range(1, n + 1) if i != m}

    # g_i = row i of R1 without its last entry; e_1 = first row without its first entry.
    g_rows = {i: [sm.entry(i, k) for k in range(1, n + 1)] for i in range(1, n + 2)}
    target = [sm.entry(1, k) for k in range(2, n + 2)]
    indices = [i for i in range(1, n + 2) if i != m]
    system = exactla.transpose([g_rows[i] for i in indices])
    try:
        coeffs = exactla.solve_unique(system, target)
    except ValueError as exc:
        raise StructureError("mirrored edge relation rows failed to form a basis: %s" % exc) from exc
    gamma1 = {i: coeffs[pos] for pos, i in enumerate(indices)}
    return GammaData(N=n, m=m, gamma1=gamma1, gamma2=gamma2, variant="left_edge")


def cofactor(sm: ShiftMatrix, i: int, k: int) -> Fraction:
    """Signed cofactor of the 1-based (i, k) entry of R1."""
    size = sm.size
    if not (1 <= i <= size and 1 <= k <= size):
        raise ValueError("cofactor indices out of range")
    minor = [
        [sm.r1[r][c] for c in range(size) if c != k - 1]
        for r in range(size)
        if r != i - 1
    ]
    sign = -1 if (i + k) % 2 else 1
    return sign * exactla.det(minor)


def end_columns(sm: ShiftMatrix) -> EndColumnData:
    """Clipped end columns of R1 and, if dependent, their normalized relation."""
    _require_supported(sm)
    n = sm.stencil.N
    first = tuple(sm.entry(i, 1) for i in range(2, n + 2))
    last = tuple(sm.entry(i, n + 1) for i in range(1, n + 1))
    pair = [[first[i], last[i]] for i in range(n)]
    null = exactla.nullspace(pair)
    if not null:
        return EndColumnData(first_inner=first, last_inner=last, dependent=False, alpha=None, l=None)
    if len(null) > 1:
        # Both columns zero cannot happen when det R1 != 0, det R2 = 0.
        raise StructureError("end columns are both zero; regime invariant violated")
    alpha = null[0]
    lead = next(x for x in alpha if x != 0)
    alpha = tuple(x / lead for x in alpha)

    m, _ = _interior_dependency(sm)
    l = None
    for cand in range(1, n + 1):
        sub = [
            [sm.r1[r][c] for c in range(n) if c != cand - 1]
            for r in range(n)
            if r != m - 1
        ]
        if exactla.det(sub) != 0:
            l = cand
            break
    if l is None:
        raise StructureError("no admissible column index l found; rank structure violated")
    return EndColumnData(first_inner=first, last_inner=last, dependent=True, alpha=alpha, l=l)


def spectrum(sm: ShiftMatrix) -> np.ndarray:
    """Eigenvalues of R1 in double precision, sorted by (real, imag).

    The spectrum of the difference operator on L2(0, N+1) is exactly the
    spectrum of R1, so this doubles as a diagnostic for the discrete operator
    built in :mod:`ddbvp.grid`.
    """
    dense = np.array([[float(x) for x in row] for row in sm.r1], dtype=float)
    eigs = np.linalg.eigvals(dense)
    order = np.lexsort((eigs.imag, eigs.real))
    return eigs[order]


def index_table(ends: EndColumnData, k: int) -> IndexTable:
    """Codimension and index counts at smoothness order k >= 0."""
    if k < 0:
        raise ValueError("order k must be >= 0")
    if ends.dependent:
        codim_rq = k + 3
        codim_minimal = k + 1
    else:
        codim_rq = 2 * (k + 2)
        codim_minimal = 2 * (k + 1)
    codim_zero_trace = 2 * (k + 1)
    return IndexTable(
        k=k,
        dependent=ends.dependent,
        codim_difference_image=codim_rq,
        codim_minimal_domain=codim_minimal,
        codim_zero_trace_domain=codim_zero_trace,
        index_zero_trace=-2 * (k + 1),
        index_minimal=-codim_minimal,
    )


@dataclass(frozen=True)
class StructureReport:
    """Bundled structural data for one stencil in the supported regime."""

    stencil: Stencil
    matrix: ShiftMatrix
    regime: RegimeReport
    gamma: GammaData
    alt_gamma: GammaData
    ends: EndColumnData

    def index_table(self, k: int) -> IndexTable:
        return index_table(self.ends, k)


def analyze(stencil: Stencil) -> StructureReport:
    """Full structural analysis; raises UnsupportedRegimeError outside the regime."""
    sm = build_shift_matrix(stencil)
    _require_supported(sm)
    return StructureReport(
        stencil=stencil,
        matrix=sm,
        regime=classify_regime(sm),
        gamma=find_structure(sm),
        alt_gamma=find_alt_structure(sm),
        ends=end_columns(sm),
    )
