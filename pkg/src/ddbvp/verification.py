"""Acceptance battery: every numbered property the package promises.

Each check returns a :class:`CheckResult` instead of raising, so the CLI can
print one line per criterion and the test suite can assert on them
individually.  Random instances are drawn from a fixed-seed generator: the
battery is deterministic from run to run.

The random function constructors double as reusable test utilities:

* ``random_zero_trace_function``: a piecewise polynomial in the zero-trace
  class of order k (C^{k-1} across interior nodes, derivatives 0..k-1
  vanishing at both endpoints), built from random node jets glued by
  two-point Hermite interpolation plus x^k(1-x)^k bumps;
* ``random_order_k_function``: same gluing with free endpoint jets (order-k
  smoothness only);
* ``random_image_member``: a random order-k function corrected by a global
  polynomial so that all image membership conditions vanish exactly.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from . import exactla
from .functionals import (
    image_functionals,
    membership_functionals,
    rank_of_functionals,
    solvability_constraints,
)
from .grid import assemble, convergence_study, index_estimate, spectrum_check
from .piecewise import (
    PiecewisePoly,
    apply_difference,
    apply_difference_inverse,
    in_zero_trace_class,
    pmul,
    two_point_hermite,
)
from .solver import BVPProblem, SolveStatus, boundary_matrix, kernel_certificate, solve_homogeneous
from .structure import Regime, Stencil, StructureReport, analyze, build_shift_matrix, classify_regime

DEFAULT_SEED = 20260816

NAMED_COEFFS = ((1, 0, 1), (0, 1, 1, 1, 2), (1, 1, 2, 4, 4))


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str


def _b_text(stencil: Stencil) -> str:
    return "(%s)" % ", ".join(str(c) for c in stencil.coeffs)


def named_stencils() -> tuple[Stencil, ...]:
    return tuple(Stencil.from_coeffs(c) for c in NAMED_COEFFS)


def random_regime_stencils(
    count: int = 20,
    max_shift: int = 3,
    bound: int = 3,
    seed: int = DEFAULT_SEED,
    max_tries: int = 50000,
) -> tuple[Stencil, ...]:
    """Fixed-seed rejection sampling for supported-regime stencils.

    Draws integer stencils with N <= max_shift and |b_j| <= bound and keeps
    those with det R1 != 0, det R2 = 0.  Returns fewer than ``count`` only
    when the box is too small (e.g. bound = 0), which callers must report.
    """
    rng = random.Random(seed)
    found: list[Stencil] = []
    seen: set[tuple[int, ...]] = set()
    tries = 0
    while len(found) < count and tries < max_tries:
        tries += 1
        n = rng.randint(1, max_shift)
        coeffs = tuple(rng.randint(-bound, bound) for _ in range(2 * n + 1))
        if coeffs in seen:
            continue
        seen.add(coeffs)
        try:
            stencil = Stencil.from_coeffs(coeffs)
        except ValueError:
            continue
        if classify_regime(build_shift_matrix(stencil)).regime is Regime.SINGULAR_MINOR:
            found.append(stencil)
    return tuple(found)


# ---------------------------------------------------------------------------
# random function constructors


def _ppow(base: tuple, power: int) -> tuple:
    out = (Fraction(1),)
    for _ in range(power):
        out = pmul(out, base)
    return out


def _random_poly(rng: random.Random, degree: int, bound: int = 3) -> tuple:
    return tuple(Fraction(rng.randint(-bound, bound)) for _ in range(degree + 1))


def _hermite_glued(length: int, k: int, rng: random.Random, zero_end_jets: bool) -> PiecewisePoly:
    jets = {}
    for node in range(length + 1):
        if zero_end_jets and node in (0, length):
            jets[node] = [Fraction(0)] * k
        else:
            jets[node] = [Fraction(rng.randint(-4, 4)) for _ in range(k)]
    bump_shape = pmul(_ppow((Fraction(0), Fraction(1)), k), _ppow((Fraction(1), Fraction(-1)), k))
    pieces = []
    for i in range(length):
        if k == 0:
            piece = _random_poly(rng, 2)
        else:
            piece = two_point_hermite(jets[i], jets[i + 1])
        bump = pmul(bump_shape, _random_poly(rng, 2))
        merged = [Fraction(0)] * max(len(piece), len(bump))
        for idx, c in enumerate(piece):
            merged[idx] += c
        for idx, c in enumerate(bump):
            merged[idx] += c
        pieces.append(tuple(merged))
    return PiecewisePoly.from_pieces(range(length + 1), pieces)


def random_zero_trace_function(interval_count: int, k: int, rng: random.Random) -> PiecewisePoly:
    """Random member of the order-k zero-trace class on (0, interval_count)."""
    return _hermite_glued(interval_count, k, rng, zero_end_jets=True)


def random_order_k_function(interval_count: int, k: int, rng: random.Random) -> PiecewisePoly:
    """Random piecewise polynomial of interior smoothness order k."""
    return _hermite_glued(interval_count, k, rng, zero_end_jets=False)


def random_image_member(structure: StructureReport, k: int, rng: random.Random) -> PiecewisePoly:
    """Random order-k function satisfying all image membership conditions.

    Takes a random order-k function and subtracts the global polynomial that
    matches its values under the membership functionals; since the
    functionals have full rank on polynomials, the correction always exists.
    """
    stencil = structure.stencil
    w0 = random_order_k_function(stencil.N + 1, k, rng)
    fns = membership_functionals(structure.gamma, k)
    if not fns:
        return w0
    degree = len(fns) + max(fn.max_order for fn in fns) + 2
    rows = [[fn.on_monomial(d) for d in range(degree)] for fn in fns]
    rhs = [fn.evaluate(w0) for fn in fns]
    solution = exactla.min_norm_solution(rows, rhs)
    if solution is None:
        raise RuntimeError("membership functionals lost rank on the polynomial probe")
    correction = PiecewisePoly.from_global(solution[0], (0, stencil.N + 1))
    return w0 - correction


# ---------------------------------------------------------------------------
# the numbered checks


def check_membership_theorem(pool: tuple[Stencil, ...], orders=(1, 2, 3), seed: int = DEFAULT_SEED) -> CheckResult:
    """Criterion 1: the difference operator maps the zero-trace class onto
    the functional-characterized image, in both directions, exactly."""
    if not pool:
        return CheckResult(1, "image membership", True, "no supported-regime stencils in the pool; nothing to test")
    rng = random.Random(seed + 1)
    instances = 0
    for stencil in pool:
        structure = analyze(stencil)
        for k in orders:
            fns = membership_functionals(structure.gamma, k)

            v = random_zero_trace_function(stencil.N + 1, k, rng)
            if not in_zero_trace_class(v, k):
                return CheckResult(1, "image membership", False,
                                   "constructor failed the zero-trace test (N=%d, k=%d)" % (stencil.N, k))
            w = apply_difference(stencil, v)
            bad = [fn.label for fn in fns if fn.evaluate(w) != 0]
            if bad:
                return CheckResult(1, "image membership", False,
                                   "forward conditions violated: %s (b=%s, k=%d)" % (bad, _b_text(stencil), k))

            w2 = random_image_member(structure, k, rng)
            bad = [fn.label for fn in fns if fn.evaluate(w2) != 0]
            if bad:
                return CheckResult(1, "image membership", False,
                                   "image constructor left nonzero conditions: %s" % bad)
            v2 = apply_difference_inverse(stencil, w2)
            if not in_zero_trace_class(v2, k):
                return CheckResult(1, "image membership", False,
                                   "preimage left the zero-trace class (b=%s, k=%d)" % (_b_text(stencil), k))
            instances += 1
    return CheckResult(1, "image membership", True,
                       "%d stencils x %s, forward and inverse, exact" % (len(pool), list(orders)))


def check_image_codimension(orders=(0, 1, 2)) -> CheckResult:
    """Criterion 2: functional rank matches the image codimension table."""
    for stencil in named_stencils():
        structure = analyze(stencil)
        dependent = structure.ends.dependent
        for k in orders:
            got = rank_of_functionals(image_functionals(structure, k))
            expected = (k + 3) if dependent else 2 * (k + 2)
            if got != expected:
                return CheckResult(2, "image codimension counts", False,
                                   "b=%s k=%d: rank %d, expected %d" % (_b_text(stencil), k, got, expected))
    return CheckResult(2, "image codimension counts", True,
                       "named stencils, k in %s, exact integer match" % (list(orders),))


def check_constraint_counts(orders=(0, 1)) -> CheckResult:
    """Criterion 3: post-elimination solvability constraint counts."""
    for stencil in named_stencils():
        structure = analyze(stencil)
        dependent = structure.ends.dependent
        for k in orders:
            minimal = solvability_constraints(structure, k, "minimal").count
            zero_trace = solvability_constraints(structure, k, "zero_trace").count
            expect_min = (k + 1) if dependent else 2 * (k + 1)
            expect_zt = 2 * (k + 1)
            if (minimal, zero_trace) != (expect_min, expect_zt):
                return CheckResult(3, "solvability constraint counts", False,
                                   "b=%s k=%d: got (%d, %d), expected (%d, %d)"
                                   % (_b_text(stencil), k, minimal, zero_trace, expect_min, expect_zt))
    return CheckResult(3, "solvability constraint counts", True,
                       "named stencils, k in %s, both domain variants" % (list(orders),))


def check_kernel_certificates(pool: tuple[Stencil, ...]) -> CheckResult:
    """Criterion 4: the order-k operator kernel is trivial on every stencil."""
    if not pool:
        return CheckResult(4, "trivial kernel certificates", True, "no supported-regime stencils in the pool; nothing to test")
    for stencil in pool:
        cert = kernel_certificate(analyze(stencil))
        if cert.rank != 2 or cert.dim_kernel != 0:
            return CheckResult(4, "trivial kernel certificates", False,
                               "b=%s: rank %d" % (_b_text(stencil), cert.rank))
    return CheckResult(4, "trivial kernel certificates", True,
                       "rank 2 on all %d stencils, exact" % len(pool))


def check_worked_solution() -> CheckResult:
    """Criterion 5: the model problem reproduces its closed-form solution."""
    stencil = Stencil.from_coeffs([1, 0, 1])
    family = solve_homogeneous(BVPProblem(stencil=stencil, k=0, f0=PiecewisePoly.constant(1, 0, 2)))
    expected_v = PiecewisePoly.from_pieces(
        (0, 1, 2),
        [(0, 0, Fraction(-1, 2)), (Fraction(-1, 2), 1, Fraction(-1, 2))],
    )
    problems = []
    if family.status is not SolveStatus.UNIQUE:
        problems.append("status %s" % family.status.value)
    if family.d != (Fraction(1), Fraction(-1, 2)):
        problems.append("d = %s" % (family.d,))
    if family.boundary_matrix != ((Fraction(2), Fraction(0)), (Fraction(1), Fraction(1))):
        problems.append("boundary matrix %s" % (family.boundary_matrix,))
    if family.v is None or not family.v.same(expected_v):
        problems.append("solution differs from the closed form")
    if family.v is not None and family.v.jump(1, 1) != 2:
        problems.append("derivative jump %s" % family.v.jump(1, 1))
    if problems:
        return CheckResult(5, "worked solution", False, "; ".join(problems))
    return CheckResult(5, "worked solution", True,
                       "v = (-t^2/2; (t-1) - 1/2 - (t-1)^2/2), jump 2 at t = 1, exact")


def _violating_data(stencil: Stencil, count_expected: int):
    """Monomial data violating each residual constraint of the boundary system."""
    structure = analyze(stencil)
    matrix = boundary_matrix(structure)
    null_left = exactla.left_nullspace(matrix)
    if len(null_left) != count_expected:
        return None
    witnesses = []
    domain = (0, stencil.N + 1)
    for u in null_left:
        witness = None
        for degree in range(0, 6):
            coeffs = tuple(Fraction(0) for _ in range(degree)) + (Fraction(1),)
            f0 = PiecewisePoly.from_global(coeffs, domain)
            family = solve_homogeneous(BVPProblem(stencil=stencil, k=0, f0=f0))
            value = u[0] * family.rhs[0] + u[1] * family.rhs[1]
            if value != 0:
                witness = (degree, value, family.status)
                break
        if witness is None:
            return None
        witnesses.append(witness)
    return witnesses


def check_boundary_rank_cases(bound: int = 3) -> CheckResult:
    """Criterion 6: boundary matrix rank cases with explicit witnesses.

    Scans the full N = 1 integer box |b_j| <= bound for supported-regime
    stencils, classifies them by boundary matrix rank, and for one
    representative of each observed rank verifies dim ker = 2 - rank (by
    solving with f0 = 0) and #constraints = 2 - rank (by exhibiting monomial
    data that violates each constraint).  Ranks absent from the box are
    reported as absent, which is not a failure.
    """
    representatives: dict[int, Stencil] = {}
    counts = {0: 0, 1: 0, 2: 0}
    for coeffs in itertools.product(range(-bound, bound + 1), repeat=3):
        try:
            stencil = Stencil.from_coeffs(coeffs)
        except ValueError:
            continue
        if classify_regime(build_shift_matrix(stencil)).regime is not Regime.SINGULAR_MINOR:
            continue
        rank = exactla.rank(boundary_matrix(analyze(stencil)))
        counts[rank] += 1
        representatives.setdefault(rank, stencil)

    if 2 not in representatives:
        return CheckResult(6, "boundary rank cases", False,
                           "no full-rank instance found in the box, which contradicts the named examples")

    notes = ["box scan |b_j| <= %d, N = 1: rank counts %s" % (bound, {r: counts[r] for r in (2, 1, 0)})]
    for rank, stencil in sorted(representatives.items(), reverse=True):
        expected_dim = 2 - rank
        zero = PiecewisePoly.zero(0, stencil.N + 1)
        family = solve_homogeneous(BVPProblem(stencil=stencil, k=0, f0=zero))
        if len(family.kernel) != expected_dim:
            return CheckResult(6, "boundary rank cases", False,
                               "b=%s: kernel dim %d, expected %d" % (_b_text(stencil), len(family.kernel), expected_dim))
        for direction in family.kernel:
            v = direction.v
            if not (v.trace(0, 0, +1) == 0 and v.trace(stencil.N + 1, 0, -1) == 0
                    and all(v.jump(i, 0) == 0 for i in range(1, stencil.N + 1))):
                return CheckResult(6, "boundary rank cases", False,
                                   "b=%s: kernel direction fails the trace test" % (_b_text(stencil),))
        if expected_dim > 0:
            witnesses = _violating_data(stencil, expected_dim)
            if witnesses is None:
                return CheckResult(6, "boundary rank cases", False,
                                   "b=%s: could not exhibit violating data for all %d constraints"
                                   % (_b_text(stencil), expected_dim))
            notes.append("rank %d witness b=%s, violating monomial degrees %s"
                         % (rank, _b_text(stencil), [w[0] for w in witnesses]))
        else:
            notes.append("rank 2 witness b=%s, kernel trivial, no constraints" % (_b_text(stencil),))
    for rank in (1, 0):
        if rank not in representatives:
            notes.append("no rank-%d instance in the box (reported, not failed)" % rank)
    return CheckResult(6, "boundary rank cases", True, "; ".join(notes))


def check_spectrum_containment(pool: tuple[Stencil, ...], resolutions=(8, 16), tolerance: float = 1e-8) -> CheckResult:
    """Criterion 7: exact shift-matrix spectrum sits inside the grid spectrum."""
    if not pool:
        return CheckResult(7, "spectrum containment", True, "no supported-regime stencils in the pool; nothing to test")
    worst = 0.0
    for stencil in pool:
        for n in resolutions:
            chk = spectrum_check(stencil, n, tolerance)
            worst = max(worst, chk.containment_distance)
            if not chk.ok:
                return CheckResult(7, "spectrum containment", False,
                                   "b=%s n=%d: distance %.3e" % (_b_text(stencil), n, chk.containment_distance))
    return CheckResult(7, "spectrum containment", True,
                       "%d stencils, n in %s, worst distance %.2e" % (len(pool), list(resolutions), worst))


def check_oracle_convergence() -> CheckResult:
    """Criterion 8: grid solutions converge to the exact ones, order >= 1.8.

    The model problem has a piecewise-quadratic solution, which the
    second-difference scheme reproduces to rounding; an order cannot be
    observed there, so the criterion is tightened to exact reproduction plus
    an order measurement on a companion problem whose solution is quartic.
    """
    stencil = Stencil.from_coeffs([1, 0, 1])
    f_const = PiecewisePoly.constant(1, 0, 2)
    exact_const = solve_homogeneous(BVPProblem(stencil=stencil, k=0, f0=f_const))
    study_const = convergence_study(stencil, f_const, exact_const.v)
    last_error = study_const.rows[-1].max_error
    if last_error >= 1e-3:
        return CheckResult(8, "oracle convergence", False,
                           "model problem error %.3e at n=%d" % (last_error, study_const.rows[-1].n))
    if not study_const.exact_reproduction and (study_const.observed_order or 0) < 1.8:
        return CheckResult(8, "oracle convergence", False,
                           "model problem observed order %.2f" % (study_const.observed_order or float("nan")))

    f_quad = PiecewisePoly.from_global((0, 0, 1), (0, 2))
    exact_quad = solve_homogeneous(BVPProblem(stencil=stencil, k=0, f0=f_quad))
    study_quad = convergence_study(stencil, f_quad, exact_quad.v)
    order = study_quad.observed_order
    if study_quad.exact_reproduction or order is None or order < 1.8:
        return CheckResult(8, "oracle convergence", False,
                           "companion problem order %s" % (order,))
    detail = ("model problem reproduced to %.1e at n=128; companion (quartic solution) order %.3f"
              % (last_error, order))
    return CheckResult(8, "oracle convergence", True, detail)


def check_index_estimates(resolution: int = 64) -> CheckResult:
    """Criterion 9: numerical kernel and cokernel dimensions agree."""
    stencils = named_stencils() + (Stencil.from_coeffs([1, 0, -1]),)
    cases = 0
    for stencil in stencils:
        domain = (0, stencil.N + 1)
        for label, a in (("0", None),
                         ("1", PiecewisePoly.constant(1, *domain)),
                         ("t", PiecewisePoly.from_global((0, 1), domain))):
            est = index_estimate(assemble(stencil, resolution, a))
            if not est.balanced:
                return CheckResult(9, "discrete index balance", False,
                                   "b=%s a=%s: kernel %d, cokernel %d"
                                   % (_b_text(stencil), label, est.kernel_dim, est.cokernel_dim))
            cases += 1
    return CheckResult(9, "discrete index balance", True,
                       "%d stencil/coefficient cases at n=%d, all balanced" % (cases, resolution))


def check_structure_equivalence(pool: tuple[Stencil, ...], orders=(1, 2)) -> CheckResult:
    """Criterion 10: mirrored node relations cut out the same constraint space."""
    if not pool:
        return CheckResult(10, "mirrored structure equivalence", True, "no supported-regime stencils in the pool; nothing to test")
    for stencil in pool:
        structure = analyze(stencil)
        for k in orders:
            std = membership_functionals(structure.gamma, k)
            alt = membership_functionals(structure.alt_gamma, k)
            r_std = rank_of_functionals(std)
            r_alt = rank_of_functionals(alt)
            r_both = rank_of_functionals(tuple(std) + tuple(alt))
            if not (r_std == r_alt == r_both):
                return CheckResult(10, "mirrored structure equivalence", False,
                                   "b=%s k=%d: ranks %d / %d / stacked %d"
                                   % (_b_text(stencil), k, r_std, r_alt, r_both))
    return CheckResult(10, "mirrored structure equivalence", True,
                       "%d stencils, k in %s, equal-rank stacks" % (len(pool), list(orders)))


# ---------------------------------------------------------------------------


def run_battery(level: str = "fast") -> list[CheckResult]:
    """Run the acceptance checks; 'full' adds random stencils and the grid."""
    if level not in ("fast", "full"):
        raise ValueError("level must be 'fast' or 'full'")
    named = named_stencils()
    results = []
    if level == "fast":
        results.append(check_membership_theorem(named, orders=(1, 2)))
        results.append(check_image_codimension())
        results.append(check_constraint_counts())
        results.append(check_kernel_certificates(named))
        results.append(check_worked_solution())
        results.append(check_structure_equivalence(named))
        return results

    pool = named + random_regime_stencils()
    pool_note = "" if len(pool) >= 23 else " (random pool smaller than requested)"
    results.append(check_membership_theorem(pool))
    results.append(check_image_codimension())
    results.append(check_constraint_counts())
    results.append(check_kernel_certificates(pool))
    results.append(check_worked_solution())
    results.append(check_boundary_rank_cases())
    results.append(check_spectrum_containment(pool))
    results.append(check_oracle_convergence())
    results.append(check_index_estimates())
    results.append(check_structure_equivalence(pool))
    if pool_note:
        results.append(CheckResult(0, "random stencil pool", True,
                                   "only %d supported-regime stencils found%s" % (len(pool), pool_note)))
    return results
