"""Node functionals carving out images and admissible data.

Everything the structure theory produces downstream is a finite linear
combination of one-point derivative evaluations

    F(w) = sum over terms of  weight * w^(order)(node).

This module provides that as a small value type plus the three families the
analysis needs:

* ``membership_functionals``: the 2k functionals whose simultaneous vanishing
  characterizes the image of the order-k zero-trace class under the
  difference operator (both the right-edge and the mirrored left-edge
  variants of the node relations are supported);
* ``image_functionals``: the conditions cutting out the image of the
  difference operator acting between order-(k+2) spaces; their number is
  2(k+2) when the clipped end columns of the shift matrix are independent and
  k+3 when they are dependent, in which case the higher-order conditions are
  built from cofactor weights;
* ``solvability_elimination``: the data-side constraints for the second-order
  problem -(R v)'' = f, obtained by writing every solution of -w'' = f as
  w = d1*t + d2 - I (I the double antiderivative of f) and eliminating
  (d1, d2) from the functional stack exactly.

Ranks are certified on monomial probes in exact arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import exactla
from .piecewise import PiecewisePoly
from .structure import GammaData, StructureReport, cofactor


@dataclass(frozen=True)
class NodeFunctional:
    """A finite sum of weighted one-point derivative evaluations."""

    terms: tuple[tuple[Fraction, int, Fraction], ...]  # (node, order, weight)
    label: str

    @property
    def max_order(self) -> int:
        return max((mu for _, mu, _ in self.terms), default=0)

    def evaluate(self, f: PiecewisePoly) -> Fraction:
        """Apply to a piecewise polynomial, using one-sided limits.

        Interior nodes require the two one-sided limits of the touched
        derivative order to agree (the functional is only defined on
        functions continuous there at that order); endpoints use the inner
        limit.
        """
        total = Fraction(0)
        for node, mu, weight in self.terms:
            if weight == 0:
                continue
            if node == f.start:
                value = f.trace(node, mu, 1)
            elif node == f.end:
                value = f.trace(node, mu, -1)
            else:
                left = f.trace(node, mu, -1)
                right = f.trace(node, mu, 1)
                if left != right:
                    raise ValueError(
                        "derivative of order %d jumps at node %s (left %s, right %s); "
                        "functional %r is undefined there" % (mu, node, left, right, self.label)
                    )
                value = right
            total += weight * value
        return total

    def on_monomial(self, d: int) -> Fraction:
        """Exact value on t^d (global coordinate)."""
        total = Fraction(0)
        for node, mu, weight in self.terms:
            if mu > d:
                continue
            fall = 1
            for i in range(mu):
                fall *= d - i
            total += weight * fall * node ** (d - mu)
        return total

    def scaled(self, s: Fraction) -> "NodeFunctional":
        return NodeFunctional(
            terms=tuple((node, mu, s * w) for node, mu, w in self.terms),
            label=self.label,
        )


def combine(weighted: Sequence[tuple[Fraction, NodeFunctional]], label: str) -> NodeFunctional:
    """Linear combination of functionals with merged, zero-pruned terms."""
    acc: dict[tuple[Fraction, int], Fraction] = {}
    for coef, fn in weighted:
        if coef == 0:
            continue
        for node, mu, weight in fn.terms:
            key = (node, mu)
            acc[key] = acc.get(key, Fraction(0)) + coef * weight
    terms = tuple(
        (node, mu, w)
        for (node, mu), w in sorted(acc.items(), key=lambda kv: (kv[0][0], kv[0][1]))
        if w != 0
    )
    return NodeFunctional(terms=terms, label=label)


def membership_functionals(gamma: GammaData, k: int) -> list[NodeFunctional]:
    """The 2k node conditions defining the image of the order-k zero-trace class.

    For each derivative order mu < k there is one edge relation and one
    interior relation.  With the right-edge variant these read

        w^(mu)(N+1) = sum_{i != m+1} gamma1[i] * w^(mu)(i-1),
        w^(mu)(m)   = sum_{i != m}   gamma2[i] * w^(mu)(i),

    and the left-edge variant replaces the first by
    w^(mu)(0) = sum_{i != m} gamma1[i] * w^(mu)(i).
    """
    if k < 0:
        raise ValueError("order k must be >= 0")
    n_plus_1 = gamma.N + 1
    out = []
    for mu in range(k):
        if gamma.variant == "right_edge":
            terms = [(Fraction(n_plus_1), mu, Fraction(1))]
            terms += [(Fraction(i - 1), mu, -w) for i, w in sorted(gamma.gamma1.items()) if w]
            out.append(NodeFunctional(tuple(terms), "edge[mu=%d]" % mu))
        elif gamma.variant == "left_edge":
            terms = [(Fraction(0), mu, Fraction(1))]
            terms += [(Fraction(i), mu, -w) for i, w in sorted(gamma.gamma1.items()) if w]
            out.append(NodeFunctional(tuple(terms), "edge'[mu=%d]" % mu))
        else:
            raise ValueError("unknown variant %r" % gamma.variant)
        terms = [(Fraction(gamma.m), mu, Fraction(1))]
        terms += [(Fraction(i), mu, -w) for i, w in sorted(gamma.gamma2.items()) if w]
        out.append(NodeFunctional(tuple(terms), "interior[mu=%d]" % mu))
    return out


def image_functionals(structure: StructureReport, k: int) -> list[NodeFunctional]:
    """Conditions cutting out the image of the difference operator at order k+2.

    A function w of order k+2 on (0, N+1) is the image of an order-(k+2)
    function with matching extension traces iff w satisfies the full
    membership set of order k+2 (2(k+2) functionals).  When the clipped end
    columns are dependent the higher orders collapse: only the two mu = 0
    relations survive verbatim, and for each mu in 1..k+1 a single cofactor
    relation

        B[1][l+1] w^(mu)(0)
        + sum_{i=1..N} (B[i+1][l+1] - B[i][l]) w^(mu)(i)
        - B[N+1][l] w^(mu)(N+1) = 0

    takes their place, for a total of k+3.  Here B[i][j] is the (i, j)
    cofactor of the shift matrix and l the admissible column index from the
    end-column data; that relation is exactly det(R1) times the jump of the
    mu-th derivative of the preimage's vectorization at node l, which is the
    identity the tests exercise.
    """
    if k < 0:
        raise ValueError("order k must be >= 0")
    if not structure.ends.dependent:
        return membership_functionals(structure.gamma, k + 2)
    n = structure.stencil.N
    l = structure.ends.l
    assert l is not None
    sm = structure.matrix
    b_last_l = cofactor(sm, n + 1, l)
    if b_last_l == 0:
        # The admissible column index guarantees this cofactor is nonzero;
        # hitting zero means the end-column data is inconsistent.
        raise ValueError("cofactor B[N+1][l] vanished for l = %d; end-column data inconsistent" % l)
    out = membership_functionals(structure.gamma, 1)
    for mu in range(1, k + 2):
        terms = [(Fraction(0), mu, cofactor(sm, 1, l + 1))]
        for i in range(1, n + 1):
            terms.append((Fraction(i), mu, cofactor(sm, i + 1, l + 1) - cofactor(sm, i, l)))
        terms.append((Fraction(n + 1), mu, -b_last_l))
        pruned = tuple((node, order, w) for node, order, w in terms if w != 0)
        out.append(NodeFunctional(pruned, "cofactor[mu=%d]" % mu))
    return out


def rank_of_functionals(fns: Sequence[NodeFunctional], probe_degree: int | None = None) -> int:
    """Exact rank of a functional family, certified on monomial probes.

    The probe space is span{1, t, ..., t^D}.  D defaults to
    len(fns) + max order + 2; a caller-supplied D smaller than
    len(fns) + max order - 1 cannot certify independence and is rejected.
    """
    if not fns:
        return 0
    max_order = max(fn.max_order for fn in fns)
    needed = len(fns) + max_order
    if probe_degree is None:
        probe_degree = needed + 2
    if probe_degree + 1 < len(fns) or probe_degree < max_order:
        raise ValueError(
            "probe degree %d cannot certify the rank of %d functionals of order <= %d"
            % (probe_degree, len(fns), max_order)
        )
    matrix = [[fn.on_monomial(d) for d in range(probe_degree + 1)] for fn in fns]
    return exactla.rank(matrix)


@dataclass(frozen=True)
class DataConstraints:
    """Constraints on the right-hand side f after eliminating (d1, d2).

    Every solution of -w'' = f is w = d1*t + d2 - I with I the double
    antiderivative of f.  Stacking the node functionals that characterize the
    wanted solution class and eliminating the two constants leaves pure data
    constraints: each residual functional, applied to I, must vanish.
    ``d_rank`` is the rank of the eliminated (d1, d2) block; the residual
    count is len(stack) - d_rank.
    """

    stack: tuple[NodeFunctional, ...]
    d_rank: int
    residuals: tuple[NodeFunctional, ...]

    @property
    def count(self) -> int:
        return len(self.residuals)


def eliminate_constants(stack: Sequence[NodeFunctional]) -> DataConstraints:
    """Eliminate (d1, d2) from a functional stack applied to w = d1 t + d2 - I."""
    d_block = [[fn.on_monomial(1), fn.on_monomial(0)] for fn in stack]
    left_null = exactla.left_nullspace(d_block)
    residuals = tuple(
        combine(list(zip(u, stack)), "data constraint %d" % j)
        for j, u in enumerate(left_null)
    )
    return DataConstraints(
        stack=tuple(stack),
        d_rank=exactla.rank(d_block),
        residuals=residuals,
    )


def solvability_constraints(structure: StructureReport, k: int, domain: str) -> DataConstraints:
    """Data constraints of -(R v)'' = f for the two solution classes of order k.

    ``domain`` selects what is demanded of the solution v:

    * ``"zero_trace"``: v of order k+2 with vanishing extension traces (so
      the zero-extended solution stays order k+2 across the endpoints); the
      stack is the full membership set of order k+2;
    * ``"minimal"``: v in the operator's minimal domain (v and R v of order
      k+2 on the open interval, zero-trace only at order 1); the stack is
      ``image_functionals``, which is the same set in the independent
      end-column case and the smaller cofactor set in the dependent one.
    """
    if domain == "zero_trace":
        stack = membership_functionals(structure.gamma, k + 2)
    elif domain == "minimal":
        stack = image_functionals(structure, k)
    else:
        raise ValueError("domain must be 'zero_trace' or 'minimal'")
    return eliminate_constants(stack)
