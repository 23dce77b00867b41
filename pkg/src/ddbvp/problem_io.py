"""Problem files, solve reports and solution CSV output.

A problem file is a JSON document:

    {
      "N": 1,
      "b": ["1", "0", "1"],
      "k": 0,
      "f0": [{"interval": ["0", "2"], "coeffs": ["1"], "basis": "local"}],
      "f1": ["0"],
      "f2": ["0"],
      "oracle": {"n_values": [32, 64], "a": [ ...pieces like f0... ]}
    }

Every number that feeds the exact computation is an integer or a "p/q"
string; floats are rejected so no rounding can sneak in through an input
file.  f1/f2/oracle are optional.  Piece coefficients are in the local
coordinate of the piece (x = t - left endpoint).

Reports embed the canonical re-serialization of their input between marker
lines, so a solution can be reproduced byte-for-byte from the report alone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .piecewise import PiecewisePoly
from .solver import BVPProblem, SolutionFamily, SolveStatus
from .structure import Stencil

INPUT_BEGIN = "--- canonical problem input ---"
INPUT_END = "--- end problem input ---"

CSV_HEADER = "t,v,dv,w,f0"


class ProblemFileError(ValueError):
    """Problem file rejected; the message names the offending field."""

    def __init__(self, where: str, message: str):
        self.where = where
        super().__init__("%s: %s" % (where, message))


@dataclass(frozen=True)
class OracleRequest:
    n_values: tuple[int, ...]
    a: PiecewisePoly | None


@dataclass(frozen=True)
class ParsedProblem:
    stencil: Stencil
    problem: BVPProblem
    oracle: OracleRequest | None


def _rational(value, where: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ProblemFileError(where, "expected an integer or a 'p/q' string, got %r" % (value,))
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ProblemFileError(where, "not a rational: %r (%s)" % (value, exc)) from None
    raise ProblemFileError(where, "expected an integer or a 'p/q' string, got %r" % (value,))


def _integer(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ProblemFileError(where, "expected an integer, got %r" % (value,))
    return value


def _pieces(value, where: str) -> PiecewisePoly:
    if not isinstance(value, list) or not value:
        raise ProblemFileError(where, "expected a nonempty list of pieces")
    breaks = []
    polys = []
    for idx, piece in enumerate(value):
        here = "%s[%d]" % (where, idx)
        if not isinstance(piece, dict):
            raise ProblemFileError(here, "expected an object with interval/coeffs")
        unknown = set(piece) - {"interval", "coeffs", "basis"}
        if unknown:
            raise ProblemFileError(here, "unknown keys: %s" % ", ".join(sorted(unknown)))
        basis = piece.get("basis", "local")
        if basis != "local":
            raise ProblemFileError(here + ".basis", "only 'local' coefficients are supported")
        interval = piece.get("interval")
        if not isinstance(interval, list) or len(interval) != 2:
            raise ProblemFileError(here + ".interval", "expected [left, right]")
        left = _rational(interval[0], here + ".interval[0]")
        right = _rational(interval[1], here + ".interval[1]")
        if right <= left:
            raise ProblemFileError(here + ".interval", "must be increasing")
        coeffs = piece.get("coeffs")
        if not isinstance(coeffs, list) or not coeffs:
            raise ProblemFileError(here + ".coeffs", "expected a nonempty list")
        poly = tuple(_rational(c, "%s.coeffs[%d]" % (here, j)) for j, c in enumerate(coeffs))
        if idx == 0:
            breaks.append(left)
        elif left != breaks[-1]:
            raise ProblemFileError(here + ".interval", "pieces must be adjacent (previous piece ends at %s)" % breaks[-1])
        breaks.append(right)
        polys.append(poly)
    return PiecewisePoly.from_pieces(breaks, polys)


def _coeff_list(value, where: str) -> tuple[Fraction, ...]:
    if not isinstance(value, list) or not value:
        raise ProblemFileError(where, "expected a nonempty list of coefficients")
    return tuple(_rational(c, "%s[%d]" % (where, j)) for j, c in enumerate(value))


def parse_problem(text: str) -> ParsedProblem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError("line %d, column %d" % (exc.lineno, exc.colno), exc.msg) from None
    if not isinstance(doc, dict):
        raise ProblemFileError("document", "expected a JSON object")
    unknown = set(doc) - {"N", "b", "k", "f0", "f1", "f2", "oracle"}
    if unknown:
        raise ProblemFileError("document", "unknown keys: %s" % ", ".join(sorted(unknown)))
    for key in ("N", "b", "k", "f0"):
        if key not in doc:
            raise ProblemFileError(key, "missing required field")

    big = _integer(doc["N"], "N")
    if big < 1:
        raise ProblemFileError("N", "must be >= 1")
    raw_b = doc["b"]
    if not isinstance(raw_b, list):
        raise ProblemFileError("b", "expected a list of 2N+1 rationals")
    if len(raw_b) != 2 * big + 1:
        raise ProblemFileError("b", "expected 2N+1 = %d entries, got %d" % (2 * big + 1, len(raw_b)))
    coeffs = [_rational(x, "b[%d]" % j) for j, x in enumerate(raw_b)]
    try:
        stencil = Stencil.from_coeffs(coeffs)
    except ValueError as exc:
        raise ProblemFileError("b", str(exc)) from None

    k = _integer(doc["k"], "k")
    if k < 0:
        raise ProblemFileError("k", "must be >= 0")

    f0 = _pieces(doc["f0"], "f0")
    f1 = _coeff_list(doc["f1"], "f1") if "f1" in doc else (Fraction(0),)
    f2 = _coeff_list(doc["f2"], "f2") if "f2" in doc else (Fraction(0),)

    oracle = None
    if "oracle" in doc:
        raw = doc["oracle"]
        if not isinstance(raw, dict):
            raise ProblemFileError("oracle", "expected an object")
        unknown = set(raw) - {"n_values", "a"}
        if unknown:
            raise ProblemFileError("oracle", "unknown keys: %s" % ", ".join(sorted(unknown)))
        ns = raw.get("n_values", [])
        if not isinstance(ns, list):
            raise ProblemFileError("oracle.n_values", "expected a list of integers")
        n_values = tuple(_integer(x, "oracle.n_values[%d]" % j) for j, x in enumerate(ns))
        for j, n in enumerate(n_values):
            if n < 4:
                raise ProblemFileError("oracle.n_values[%d]" % j, "grid resolution must be >= 4")
        a = _pieces(raw["a"], "oracle.a") if "a" in raw else None
        oracle = OracleRequest(n_values=n_values, a=a)

    try:
        problem = BVPProblem(stencil=stencil, k=k, f0=f0, f1=f1, f2=f2)
    except ValueError as exc:
        raise ProblemFileError("f0", str(exc)) from None
    return ParsedProblem(stencil=stencil, problem=problem, oracle=oracle)


def load_problem(path: str) -> ParsedProblem:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_problem(handle.read())


def _format_rational(x: Fraction) -> str:
    return str(x)


def _pieces_doc(f: PiecewisePoly) -> list:
    out = []
    for i, piece in enumerate(f.pieces):
        out.append({
            "interval": [_format_rational(f.breaks[i]), _format_rational(f.breaks[i + 1])],
            "coeffs": [_format_rational(c) for c in piece],
            "basis": "local",
        })
    return out


def canonical_problem_text(parsed: ParsedProblem) -> str:
    """Canonical serialization: fixed key order, reduced 'p/q' rationals."""
    stencil = parsed.stencil
    problem = parsed.problem
    doc = {
        "N": stencil.N,
        "b": [_format_rational(stencil.b(j)) for j in range(-stencil.N, stencil.N + 1)],
        "k": problem.k,
        "f0": _pieces_doc(problem.f0),
    }
    if problem.f1 != (Fraction(0),):
        doc["f1"] = [_format_rational(c) for c in problem.f1]
    if problem.f2 != (Fraction(0),):
        doc["f2"] = [_format_rational(c) for c in problem.f2]
    if parsed.oracle is not None:
        oracle = {}
        if parsed.oracle.n_values:
            oracle["n_values"] = list(parsed.oracle.n_values)
        if parsed.oracle.a is not None:
            oracle["a"] = _pieces_doc(parsed.oracle.a)
        doc["oracle"] = oracle
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


# ---------------------------------------------------------------------------
# solution CSV


def _fmt(x: float) -> str:
    return "%.17g" % x


def solution_csv(family: SolutionFamily, f0: PiecewisePoly, step: Fraction) -> str:
    """Sampled solution table: t,v,dv,w,f0 with one-sided rows at breaks.

    Regular rows sample the open interval at multiples of ``step``, skipping
    any breakpoint; every breakpoint of v, w or f0 contributes one row per
    existing one-sided limit (left first).  Infeasible problems produce just
    the header.
    """
    lines = [CSV_HEADER]
    if family.v is None:
        return "\n".join(lines) + "\n"
    if step <= 0:
        raise ValueError("sample step must be positive")
    v = family.v
    dv = v.derivative(1)
    w = family.w
    start, end = v.start, v.end
    breaks = sorted(set(v.breaks) | set(w.breaks) | set(f0.breaks))
    break_set = set(breaks)

    rows = []
    for b in breaks:
        if b > start:
            rows.append((b, 0, tuple(g.trace(b, 0, -1) for g in (v, dv, w, f0))))
        if b < end:
            rows.append((b, 2, tuple(g.trace(b, 0, +1) for g in (v, dv, w, f0))))
    t = start
    while t <= end:
        if t not in break_set:
            rows.append((t, 1, tuple(g.value(t) for g in (v, dv, w, f0))))
        t += step
    rows.sort(key=lambda r: (r[0], r[1]))
    for t, _, values in rows:
        lines.append(",".join([_fmt(float(t))] + [_fmt(float(x)) for x in values]))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# solve report


def _matrix_lines(family: SolutionFamily) -> list[str]:
    out = []
    for row in family.boundary_matrix:
        out.append("  [%s, %s]" % (row[0], row[1]))
    return out


def _smoothness_lines(family: SolutionFamily) -> list[str]:
    report = family.smoothness
    if report is None:
        return ["smoothness: not applicable (no solution)"]
    out = ["smoothness report (order k = %d):" % report.k]
    out.append("  data in W^k: %s" % ("yes" if report.data_smooth else "no"))
    if report.data_defects:
        for node, order, value in report.data_defects:
            out.append("    data jump at t = %s, order %d: %s" % (node, order, value))
    if report.node_jumps:
        out.append("  interior node jumps of the solution:")
        for node, order, value in report.node_jumps:
            out.append("    t = %s, derivative order %d: %s" % (node, order, value))
    if report.offgrid_defects:
        out.append("  off-node jumps of the solution:")
        for node, order, value in report.offgrid_defects:
            out.append("    t = %s, derivative order %d: %s" % (node, order, value))
    out.append("  solution in W^{k+2} inside the interval: %s" % ("yes" if report.smooth_interior else "no"))
    out.append("  extension in W^{k+2} across the seams: %s" % ("yes" if report.smooth_extension else "no"))
    for name, ok, residuals in (
        ("zero-trace class", report.zero_trace_solvable, report.zero_trace_residuals),
        ("minimal domain", report.minimal_solvable, report.minimal_residuals),
    ):
        verdict = {True: "yes", False: "no", None: "not determined"}[ok]
        out.append("  solvable in the %s: %s" % (name, verdict))
        for label, value in residuals:
            out.append("    violated: %s, residual %s" % (label, value))
    return out


def solve_report(parsed: ParsedProblem, family: SolutionFamily) -> str:
    stencil = parsed.stencil
    lines = []
    lines.append("second-order difference boundary value problem")
    lines.append("stencil: N = %d, b = (%s)" % (
        stencil.N, ", ".join(str(stencil.b(j)) for j in range(-stencil.N, stencil.N + 1))))
    lines.append("smoothness order k = %d" % parsed.problem.k)
    lines.append("")
    lines.append("status: %s" % family.status.value)
    lines.append("boundary matrix (rows: edge relation, interior relation):")
    lines.extend(_matrix_lines(family))
    lines.append("rank: %d" % family.boundary_rank)
    lines.append("right-hand side: (%s, %s)" % family.rhs)
    if family.d is not None:
        lines.append("integration constants: d1 = %s, d2 = %s" % family.d)
    if family.kernel:
        lines.append("kernel directions (w = c1*t + c2):")
        for direction in family.kernel:
            lines.append("  c = (%s, %s)" % direction.c)
    elif family.status is not SolveStatus.INFEASIBLE:
        lines.append("kernel: trivial")
    if family.residuals:
        lines.append("violated solvability constraints:")
        for label, value in family.residuals:
            lines.append("  %s, residual %s" % (label, value))
    lines.append("")
    lines.extend(_smoothness_lines(family))
    lines.append("")
    lines.append(INPUT_BEGIN)
    lines.append(canonical_problem_text(parsed).rstrip("\n"))
    lines.append(INPUT_END)
    return "\n".join(lines) + "\n"


def extract_problem_text(report_text: str) -> str:
    """Pull the canonical problem input back out of a report."""
    try:
        head = report_text.index(INPUT_BEGIN) + len(INPUT_BEGIN)
        tail = report_text.index(INPUT_END)
    except ValueError:
        raise ValueError("report carries no embedded problem input") from None
    return report_text[head:tail].strip() + "\n"
