"""Exact piecewise polynomial calculus on an interval.

Functions are stored as a strictly increasing tuple of rational breakpoints
and one polynomial per piece, written in the local coordinate x = t - (left
breakpoint of the piece).  Local coordinates make translation free (only the
breakpoints move) and keep coefficients small.

Besides the usual algebra and calculus this module implements the operator
plumbing used everywhere else:

* ``vectorize`` / ``devectorize``: cut a function on (0, s) into s unit
  restrictions on (0, 1) and paste them back;
* ``apply_difference`` / ``apply_difference_inverse``: the shift operator
  sum_j b_j f(t + j) of a :class:`~ddbvp.structure.Stencil` on (0, N+1) with
  zero extension, realized as multiplication of the vectorization by the
  shift matrix (or its inverse);
* ``apply_shifted_sum``: the same operator applied to a function given on the
  enlarged interval (-N, 2N+1), restricted back to (0, N+1);
* one-sided traces, jump tables and the zero-trace / interior-smoothness
  class tests that define the Sobolev-type memberships used by the solvers.

Coefficients are Fractions throughout; floating point only ever appears in
``sample_floats`` output.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import exactla
from .structure import Stencil, build_shift_matrix

DEGREE_CAP = 64


class DegreeCapError(ValueError):
    """Polynomial degree exceeded DEGREE_CAP (runaway antidifferentiation guard)."""


def _frac(x) -> Fraction:
    return exactla.to_fraction(x)


# ---------------------------------------------------------------------------
# plain polynomial helpers on coefficient tuples (c0, c1, ...) = sum c_d x^d


def ptrim(c: Sequence[Fraction]) -> tuple[Fraction, ...]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c) if c else (Fraction(0),)


def padd(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[Fraction, ...]:
    n = max(len(a), len(b))
    return ptrim([
        (a[i] if i < len(a) else Fraction(0)) + (b[i] if i < len(b) else Fraction(0))
        for i in range(n)
    ])


def pscale(a: Sequence[Fraction], s: Fraction) -> tuple[Fraction, ...]:
    return ptrim([s * x for x in a])


def pmul(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[Fraction, ...]:
    if (len(a) - 1) + (len(b) - 1) > DEGREE_CAP:
        raise DegreeCapError("product degree %d exceeds cap %d" % ((len(a) - 1) + (len(b) - 1), DEGREE_CAP))
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return ptrim(out)


def pder(c: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return ptrim([c[d] * d for d in range(1, len(c))]) if len(c) > 1 else (Fraction(0),)


def pint(c: Sequence[Fraction], const: Fraction) -> tuple[Fraction, ...]:
    if len(c) > DEGREE_CAP:
        raise DegreeCapError("antiderivative degree %d exceeds cap %d" % (len(c), DEGREE_CAP))
    return ptrim([const] + [c[d] / (d + 1) for d in range(len(c))])


def peval(c: Sequence[Fraction], x: Fraction) -> Fraction:
    out = Fraction(0)
    for coef in reversed(c):
        out = out * x + coef
    return out


def pshift(c: Sequence[Fraction], s: Fraction) -> tuple[Fraction, ...]:
    """Coefficients of p(x + s): the Taylor expansion of p around s."""
    out = []
    work = list(c)  # holds p^(d) / d!
    d = 0
    while work:
        out.append(peval(work, s))
        d += 1
        work = [work[i] * i / d for i in range(1, len(work))]
    return ptrim(out)


def two_point_hermite(left: Sequence[Fraction], right: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Coefficients on local (0, 1) matching derivative jets at both ends.

    ``left[mu]`` and ``right[mu]`` prescribe the mu-th derivative at x = 0
    and x = 1; both jets must have the same length r, and the interpolant has
    degree at most 2r - 1.  Two-point Hermite interpolation is unisolvent, so
    the system always has exactly one solution.
    """
    if len(left) != len(right):
        raise ValueError("end jets must have equal length")
    count = len(left)
    size = 2 * count
    rows = []
    rhs = []
    for mu in range(count):
        row = [Fraction(0)] * size
        fall = 1
        for i in range(mu):
            fall *= mu - i
        row[mu] = Fraction(fall)
        rows.append(row)
        rhs.append(_frac(left[mu]))
    for mu in range(count):
        row = []
        for d in range(size):
            fall = 1
            for i in range(mu):
                fall *= d - i
            row.append(Fraction(fall))
        rows.append(row)
        rhs.append(_frac(right[mu]))
    return ptrim(exactla.solve_unique(rows, rhs))


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PiecewisePoly:
    """Piecewise polynomial with rational breakpoints, local-coordinate pieces."""

    breaks: tuple[Fraction, ...]
    pieces: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.breaks) < 2 or len(self.pieces) != len(self.breaks) - 1:
            raise ValueError("need n+1 breakpoints for n pieces")
        for a, b in zip(self.breaks, self.breaks[1:]):
            if not a < b:
                raise ValueError("breakpoints must be strictly increasing")
        for c in self.pieces:
            if len(c) - 1 > DEGREE_CAP:
                raise DegreeCapError("piece degree %d exceeds cap %d" % (len(c) - 1, DEGREE_CAP))

    # -- construction -------------------------------------------------------

    @classmethod
    def from_pieces(cls, breaks: Iterable, pieces: Iterable[Sequence]) -> "PiecewisePoly":
        bks = tuple(_frac(b) for b in breaks)
        pcs = tuple(ptrim([_frac(x) for x in piece]) for piece in pieces)
        return cls(breaks=bks, pieces=pcs)

    @classmethod
    def from_global(cls, coeffs: Sequence, breaks: Iterable) -> "PiecewisePoly":
        """A single global-coordinate polynomial, rebased onto each piece."""
        bks = tuple(_frac(b) for b in breaks)
        glob = ptrim([_frac(x) for x in coeffs])
        pcs = tuple(pshift(glob, a) for a in bks[:-1])
        return cls(breaks=bks, pieces=pcs)

    @classmethod
    def zero(cls, a, b) -> "PiecewisePoly":
        return cls.from_pieces((a, b), ((0,),))

    @classmethod
    def constant(cls, value, a, b) -> "PiecewisePoly":
        return cls.from_pieces((a, b), ((value,),))

    # -- basic queries -------------------------------------------------------

    @property
    def start(self) -> Fraction:
        return self.breaks[0]

    @property
    def end(self) -> Fraction:
        return self.breaks[-1]

    @property
    def degree(self) -> int:
        return max(len(c) - 1 for c in self.pieces)

    def is_zero(self) -> bool:
        return all(c == (Fraction(0),) for c in self.pieces)

    def __repr__(self) -> str:
        rng = "(%s, %s)" % (self.start, self.end)
        return "PiecewisePoly(%d pieces on %s, degree %d)" % (len(self.pieces), rng, self.degree)

    # -- refinement and alignment -------------------------------------------

    def refined(self, extra: Iterable) -> "PiecewisePoly":
        """Same function with additional breakpoints inserted."""
        pts = sorted(set(self.breaks) | {_frac(x) for x in extra})
        if pts[0] < self.start or pts[-1] > self.end:
            raise ValueError("refinement points outside the domain")
        pieces = []
        for lo, hi in zip(pts, pts[1:]):
            idx = self._piece_index(lo)
            base = self.breaks[idx]
            pieces.append(pshift(self.pieces[idx], lo - base))
        return PiecewisePoly(breaks=tuple(pts), pieces=tuple(pieces))

    def _piece_index(self, t: Fraction) -> int:
        """Index of the piece whose half-open interval [b_i, b_{i+1}) contains t."""
        if not self.start <= t < self.end:
            raise ValueError("point %s outside domain" % t)
        lo, hi = 0, len(self.pieces) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.breaks[mid] <= t:
                lo = mid
            else:
                hi = mid - 1
        return lo

    def aligned_with(self, other: "PiecewisePoly") -> tuple["PiecewisePoly", "PiecewisePoly"]:
        if (self.start, self.end) != (other.start, other.end):
            raise ValueError("domains differ: %s vs %s" % ((self.start, self.end), (other.start, other.end)))
        pts = set(self.breaks) | set(other.breaks)
        return self.refined(pts), other.refined(pts)

    # -- algebra --------------------------------------------------------------

    def __add__(self, other: "PiecewisePoly") -> "PiecewisePoly":
        a, b = self.aligned_with(other)
        return PiecewisePoly(a.breaks, tuple(padd(x, y) for x, y in zip(a.pieces, b.pieces)))

    def __sub__(self, other: "PiecewisePoly") -> "PiecewisePoly":
        return self + other.scaled(Fraction(-1))

    def __neg__(self) -> "PiecewisePoly":
        return self.scaled(Fraction(-1))

    def scaled(self, s) -> "PiecewisePoly":
        s = _frac(s)
        return PiecewisePoly(self.breaks, tuple(pscale(c, s) for c in self.pieces))

    def times(self, other: "PiecewisePoly") -> "PiecewisePoly":
        a, b = self.aligned_with(other)
        return PiecewisePoly(a.breaks, tuple(pmul(x, y) for x, y in zip(a.pieces, b.pieces)))

    def times_global(self, coeffs: Sequence) -> "PiecewisePoly":
        """Multiply by a polynomial given in the global coordinate t."""
        glob = ptrim([_frac(x) for x in coeffs])
        pcs = tuple(pmul(c, pshift(glob, a)) for c, a in zip(self.pieces, self.breaks[:-1]))
        return PiecewisePoly(self.breaks, pcs)

    def same(self, other: "PiecewisePoly") -> bool:
        """Exact equality as functions (up to breakpoint refinement)."""
        if (self.start, self.end) != (other.start, other.end):
            return False
        a, b = self.aligned_with(other)
        return all(x == y for x, y in zip(a.pieces, b.pieces))

    # -- calculus --------------------------------------------------------------

    def derivative(self, order: int = 1) -> "PiecewisePoly":
        out = self
        for _ in range(order):
            out = PiecewisePoly(out.breaks, tuple(pder(c) for c in out.pieces))
        return out

    def antiderivative(self, value_at_start=0) -> "PiecewisePoly":
        """The continuous antiderivative F with F(start) = value_at_start."""
        acc = _frac(value_at_start)
        pcs = []
        for c, lo, hi in zip(self.pieces, self.breaks, self.breaks[1:]):
            F = pint(c, acc)
            pcs.append(F)
            acc = peval(F, hi - lo)
        return PiecewisePoly(self.breaks, tuple(pcs))

    def integral(self) -> Fraction:
        total = Fraction(0)
        for c, lo, hi in zip(self.pieces, self.breaks, self.breaks[1:]):
            total += peval(pint(c, Fraction(0)), hi - lo)
        return total

    def integral_over(self, a, b) -> Fraction:
        return self.restricted(a, b).integral()

    # -- geometry ---------------------------------------------------------------

    def shifted(self, s) -> "PiecewisePoly":
        """The translate t -> f(t - s); local pieces are untouched."""
        s = _frac(s)
        return PiecewisePoly(tuple(b + s for b in self.breaks), self.pieces)

    def restricted(self, a, b) -> "PiecewisePoly":
        a, b = _frac(a), _frac(b)
        if not (self.start <= a < b <= self.end):
            raise ValueError("restriction (%s, %s) outside domain" % (a, b))
        ref = self.refined({a, b})
        lo = ref.breaks.index(a)
        hi = ref.breaks.index(b)
        return PiecewisePoly(ref.breaks[lo:hi + 1], ref.pieces[lo:hi])

    # -- traces -------------------------------------------------------------------

    def limit(self, t, side: int) -> Fraction:
        """One-sided limit; side +1 from the right, -1 from the left."""
        return self.trace(t, 0, side)

    def trace(self, t, order: int, side: int) -> Fraction:
        t = _frac(t)
        if side not in (1, -1):
            raise ValueError("side must be +1 or -1")
        if side == 1:
            if not self.start <= t < self.end:
                raise ValueError("no right limit at %s" % t)
            idx = self._piece_index(t)
        else:
            if not self.start < t <= self.end:
                raise ValueError("no left limit at %s" % t)
            idx = len(self.pieces) - 1 if t == self.end else self._piece_index(t) - (1 if t in self.breaks else 0)
        c = self.pieces[idx]
        for _ in range(order):
            c = pder(c)
        return peval(c, t - self.breaks[idx])

    def value(self, t) -> Fraction:
        """Value at a point of continuity; raises if the two limits disagree."""
        t = _frac(t)
        if t == self.start:
            return self.trace(t, 0, 1)
        if t == self.end:
            return self.trace(t, 0, -1)
        left, right = self.trace(t, 0, -1), self.trace(t, 0, 1)
        if left != right:
            raise ValueError("function jumps at %s (left %s, right %s)" % (t, left, right))
        return right

    def jump(self, t, order: int = 0) -> Fraction:
        """Right minus left limit of the order-th derivative at an interior point."""
        return self.trace(t, order, 1) - self.trace(t, order, -1)

    def interior_jumps(self, order: int = 0) -> list[tuple[Fraction, Fraction]]:
        return [(t, self.jump(t, order)) for t in self.breaks[1:-1]]

    # -- output -----------------------------------------------------------------

    def sample_floats(self, step: Fraction) -> list[tuple[float, float]]:
        """(t, value) samples at start, start+step, ...; breakpoints skipped."""
        step = _frac(step)
        if step <= 0:
            raise ValueError("step must be positive")
        out = []
        t = self.start
        while t <= self.end:
            if t not in self.breaks:
                out.append((float(t), float(self.trace(t, 0, 1))))
            t += step
        return out


# ---------------------------------------------------------------------------
# operator plumbing


def align_many(funcs: Sequence[PiecewisePoly]) -> list[PiecewisePoly]:
    if not funcs:
        return []
    span = (funcs[0].start, funcs[0].end)
    pts: set[Fraction] = set()
    for f in funcs:
        if (f.start, f.end) != span:
            raise ValueError("cannot align functions on different domains")
        pts |= set(f.breaks)
    return [f.refined(pts) for f in funcs]


def concat(parts: Sequence[PiecewisePoly]) -> PiecewisePoly:
    """Paste functions on adjacent intervals into one; local pieces carry over."""
    breaks: list[Fraction] = list(parts[0].breaks)
    pieces: list[tuple[Fraction, ...]] = list(parts[0].pieces)
    for part in parts[1:]:
        if part.start != breaks[-1]:
            raise ValueError("parts are not adjacent: %s != %s" % (part.start, breaks[-1]))
        breaks.extend(part.breaks[1:])
        pieces.extend(part.pieces)
    return PiecewisePoly(tuple(breaks), tuple(pieces))


def zero_extension(f: PiecewisePoly, a, b) -> PiecewisePoly:
    """Extend by zero from f's domain to the larger interval (a, b)."""
    a, b = _frac(a), _frac(b)
    if a > f.start or b < f.end:
        raise ValueError("extension interval must contain the domain")
    parts = []
    if a < f.start:
        parts.append(PiecewisePoly.zero(a, f.start))
    parts.append(f)
    if b > f.end:
        parts.append(PiecewisePoly.zero(f.end, b))
    return concat(parts)


def vectorize(f: PiecewisePoly, segments: int) -> list[PiecewisePoly]:
    """Unit-interval restrictions of a function on (0, segments), each moved to (0, 1)."""
    if (f.start, f.end) != (Fraction(0), Fraction(segments)):
        raise ValueError("vectorize expects the domain (0, %d)" % segments)
    return [f.restricted(k, k + 1).shifted(-k) for k in range(segments)]


def devectorize(components: Sequence[PiecewisePoly]) -> PiecewisePoly:
    """Inverse of :func:`vectorize`: paste unit components side by side."""
    parts = []
    for k, comp in enumerate(components):
        if (comp.start, comp.end) != (Fraction(0), Fraction(1)):
            raise ValueError("component %d is not on (0, 1)" % k)
        parts.append(comp.shifted(k))
    return concat(parts)


def _apply_matrix(matrix: Sequence[Sequence[Fraction]], components: Sequence[PiecewisePoly]) -> list[PiecewisePoly]:
    comps = align_many(components)
    out = []
    for row in matrix:
        acc = PiecewisePoly(comps[0].breaks, tuple((Fraction(0),) for _ in comps[0].pieces))
        for coef, comp in zip(row, comps):
            if coef:
                acc = acc + comp.scaled(coef)
        out.append(acc)
    return out


def apply_difference(stencil: Stencil, f: PiecewisePoly) -> PiecewisePoly:
    """sum_j b_j f(t + j) on (0, N+1), f extended by zero outside."""
    sm = build_shift_matrix(stencil)
    comps = vectorize(f, stencil.N + 1)
    return devectorize(_apply_matrix(sm.r1_lists(), comps))


def apply_difference_inverse(stencil: Stencil, w: PiecewisePoly) -> PiecewisePoly:
    """The unique zero-extended f on (0, N+1) with apply_difference(f) == w."""
    sm = build_shift_matrix(stencil)
    if sm.det_r1 == 0:
        raise ValueError("shift matrix is singular; the operator is not invertible")
    comps = vectorize(w, stencil.N + 1)
    return devectorize(_apply_matrix(exactla.invert(sm.r1_lists()), comps))


def apply_shifted_sum(stencil: Stencil, y: PiecewisePoly) -> PiecewisePoly:
    """sum_j b_j y(t + j) restricted to (0, N+1), for y given on (-N, 2N+1)."""
    n = stencil.N
    if (y.start, y.end) != (Fraction(-n), Fraction(2 * n + 1)):
        raise ValueError("expected a function on (-%d, %d)" % (n, 2 * n + 1))
    total = PiecewisePoly.zero(0, n + 1)
    for j in range(-n, n + 1):
        coef = stencil.b(j)
        if coef:
            total = total + y.shifted(-j).restricted(0, n + 1).scaled(coef)
    return total


# ---------------------------------------------------------------------------
# trace tables and smoothness classes


@dataclass(frozen=True)
class NodeTraces:
    """One-sided derivative limits at each breakpoint, per requested order.

    ``left``/``right``/``jump`` map (node, order) to a Fraction, or None where
    the side does not exist (outer side of the endpoints); jump is defined at
    interior nodes only.
    """

    nodes: tuple[Fraction, ...]
    orders: tuple[int, ...]
    left: dict[tuple[Fraction, int], Fraction | None]
    right: dict[tuple[Fraction, int], Fraction | None]
    jump: dict[tuple[Fraction, int], Fraction | None]


def node_traces(f: PiecewisePoly, orders: Sequence[int]) -> NodeTraces:
    left: dict[tuple[Fraction, int], Fraction | None] = {}
    right: dict[tuple[Fraction, int], Fraction | None] = {}
    jump: dict[tuple[Fraction, int], Fraction | None] = {}
    for t in f.breaks:
        for mu in orders:
            lv = f.trace(t, mu, -1) if t > f.start else None
            rv = f.trace(t, mu, 1) if t < f.end else None
            left[(t, mu)] = lv
            right[(t, mu)] = rv
            jump[(t, mu)] = rv - lv if lv is not None and rv is not None else None
    return NodeTraces(nodes=f.breaks, orders=tuple(orders), left=left, right=right, jump=jump)


def trace_defects(f: PiecewisePoly, k: int) -> list[tuple[str, Fraction, int, Fraction]]:
    """Defects against the zero-trace class of order k.

    Membership means: one-sided traces of orders 0..k-1 vanish at both
    endpoints and the jumps of orders 0..k-1 vanish at every interior
    breakpoint (so the zero extension keeps the same smoothness order).
    Returns a list of (kind, node, order, value) with nonzero values only.
    """
    out = []
    for mu in range(k):
        v = f.trace(f.start, mu, 1)
        if v != 0:
            out.append(("endpoint", f.start, mu, v))
        v = f.trace(f.end, mu, -1)
        if v != 0:
            out.append(("endpoint", f.end, mu, v))
        for t in f.breaks[1:-1]:
            j = f.jump(t, mu)
            if j != 0:
                out.append(("jump", t, mu, j))
    return out


def in_zero_trace_class(f: PiecewisePoly, k: int) -> bool:
    return not trace_defects(f, k)


def smoothness_defects(f: PiecewisePoly, k: int) -> list[tuple[Fraction, int, Fraction]]:
    """Nonzero interior jumps of orders 0..k-1 (order-k smoothness on the open interval)."""
    out = []
    for mu in range(k):
        for t in f.breaks[1:-1]:
            j = f.jump(t, mu)
            if j != 0:
                out.append((t, mu, j))
    return out


def in_smooth_class(f: PiecewisePoly, k: int) -> bool:
    return not smoothness_defects(f, k)


# ---------------------------------------------------------------------------
# integral functionals


def moment(f: PiecewisePoly, i) -> Fraction:
    """The second-antiderivative moment integral_0^i (i - tau) f(tau) dtau."""
    i = _frac(i)
    if i == 0:
        return Fraction(0)
    return f.restricted(0, i).times_global((i, -1)).integral()


def double_antiderivative(f: PiecewisePoly) -> PiecewisePoly:
    """I with I(start) = I'(start) = 0 and I'' = f; I(t) = integral (t - tau) f."""
    return f.antiderivative(0).antiderivative(0)


def inner_product(f: PiecewisePoly, g: PiecewisePoly) -> Fraction:
    return f.times(g).integral()
