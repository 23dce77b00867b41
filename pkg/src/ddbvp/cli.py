"""Command line interface.

Four commands on JSON problem files (format documented in ``problem_io``):

* ``analyze``  - structure of the difference operator: regime, node
  relations, end columns, spectrum, index table.
* ``solve``    - exact solve; writes ``<prefix>-report`` and
  ``<prefix>-solution.csv``.
* ``spectrum`` - eigenvalues of the shift matrix, with optional grid
  containment checks.
* ``verify``   - the acceptance battery (fast or full).

Exit codes: 0 success, 1 unreadable or invalid input, 2 stencil outside the
supported regime, 3 infeasible problem (report still written), 4 verification
failures.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .problem_io import (
    ParsedProblem,
    ProblemFileError,
    load_problem,
    solution_csv,
    solve_report,
)
from .solver import SolveStatus, boundary_matrix, solve_nonhomogeneous
from .structure import UnsupportedRegimeError, analyze, build_shift_matrix, classify_regime, spectrum
from . import exactla

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_REGIME = 2
EXIT_INFEASIBLE = 3
EXIT_VERIFY = 4


def _fmt_complex(z) -> str:
    if z.imag == 0:
        return "%.17g" % z.real
    return "%.17g%+.17gj" % (z.real, z.imag)


def _print_stencil(parsed: ParsedProblem, out) -> None:
    stencil = parsed.stencil
    coeffs = ", ".join(str(stencil.b(j)) for j in range(-stencil.N, stencil.N + 1))
    print("stencil: N = %d, b = (%s)" % (stencil.N, coeffs), file=out)


def cmd_analyze(args, out) -> int:
    parsed = load_problem(args.file)
    sm = build_shift_matrix(parsed.stencil)
    regime = classify_regime(sm)
    _print_stencil(parsed, out)
    print("shift matrix R1:", file=out)
    for row in sm.r1:
        print("  [%s]" % ", ".join(str(x) for x in row), file=out)
    print("det R1 = %s" % regime.det_r1, file=out)
    print("det R2 = %s" % regime.det_r2, file=out)
    print("regime: %s" % regime.regime.value, file=out)
    try:
        report = analyze(parsed.stencil)
    except UnsupportedRegimeError as exc:
        print("unsupported: %s" % exc, file=out)
        return EXIT_REGIME

    gamma = report.gamma
    print("anchor node m = %d" % gamma.m, file=out)
    print("edge relation gamma1: %s" % _gamma_text(gamma.gamma1), file=out)
    print("interior relation gamma2: %s" % _gamma_text(gamma.gamma2), file=out)
    print("mirrored edge relation gamma1': %s" % _gamma_text(report.alt_gamma.gamma1), file=out)

    ends = report.ends
    print("end columns: first inner = (%s), last inner = (%s)" % (
        ", ".join(str(x) for x in ends.first_inner),
        ", ".join(str(x) for x in ends.last_inner)), file=out)
    if ends.dependent:
        print("end columns dependent: yes, alpha = (%s, %s), minor column l = %d"
              % (ends.alpha[0], ends.alpha[1], ends.l), file=out)
    else:
        print("end columns dependent: no", file=out)

    print("spectrum of R1:", file=out)
    for eig in spectrum(sm):
        print("  %s" % _fmt_complex(eig), file=out)

    k = parsed.problem.k
    table = report.index_table(k)
    print("index table at k = %d:" % k, file=out)
    print("  codimension of the difference image: %d" % table.codim_difference_image, file=out)
    print("  codimension, minimal domain: %d" % table.codim_minimal_domain, file=out)
    print("  codimension, zero-trace domain: %d" % table.codim_zero_trace_domain, file=out)
    print("  index, zero-trace problem: %d" % table.index_zero_trace, file=out)
    print("  index, minimal-domain problem: %d" % table.index_minimal, file=out)
    print("boundary matrix rank: %d" % exactla.rank(boundary_matrix(report)), file=out)
    return EXIT_OK


def _gamma_text(coeffs: dict) -> str:
    if not coeffs:
        return "(empty)"
    return ", ".join("[%d] = %s" % (i, c) for i, c in sorted(coeffs.items()))


def cmd_solve(args, out) -> int:
    try:
        step = Fraction(args.samples)
    except (ValueError, ZeroDivisionError):
        print("error: --samples must be a positive rational like 1/8", file=sys.stderr)
        return EXIT_PARSE
    if step <= 0:
        print("error: --samples must be positive", file=sys.stderr)
        return EXIT_PARSE

    parsed = load_problem(args.file)
    try:
        analyze(parsed.stencil)
    except UnsupportedRegimeError as exc:
        print("unsupported: %s" % exc, file=out)
        return EXIT_REGIME

    family = solve_nonhomogeneous(parsed.problem)
    report_path = args.out + "-report"
    csv_path = args.out + "-solution.csv"
    with open(report_path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(solve_report(parsed, family))
    with open(csv_path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(solution_csv(family, parsed.problem.f0, step))
    print("status: %s" % family.status.value, file=out)
    print("wrote %s and %s" % (report_path, csv_path), file=out)
    if family.status is SolveStatus.INFEASIBLE:
        for label, value in family.residuals:
            print("violated: %s, residual %s" % (label, value), file=out)
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_spectrum(args, out) -> int:
    parsed = load_problem(args.file)
    sm = build_shift_matrix(parsed.stencil)
    _print_stencil(parsed, out)
    print("spectrum of R1:", file=out)
    for eig in spectrum(sm):
        print("  %s" % _fmt_complex(eig), file=out)

    resolutions = tuple(args.grid or ())
    if not resolutions and parsed.oracle is not None:
        resolutions = parsed.oracle.n_values
    if resolutions:
        from .grid import spectrum_check

        for n in resolutions:
            chk = spectrum_check(parsed.stencil, n)
            print("grid n = %d: containment distance %.3e, block distance %.3e, %s"
                  % (n, chk.containment_distance, chk.block_distance,
                     "ok" if chk.ok else "MISMATCH"), file=out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    from .verification import run_battery

    results = run_battery(level=args.level)
    failed = 0
    for res in results:
        line = "criterion %2d %-38s %s" % (res.number, res.name + ":", "PASS" if res.passed else "FAIL")
        print(line, file=out)
        if res.detail:
            print("    %s" % res.detail, file=out)
        if not res.passed:
            failed += 1
    print("%d of %d checks passed" % (len(results) - failed, len(results)), file=out)
    return EXIT_OK if failed == 0 else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ddbvp",
        description="Exact analysis and solution of second-order differential-difference boundary value problems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="structure report for a problem file")
    p_analyze.add_argument("file", help="JSON problem file")
    p_analyze.set_defaults(func=cmd_analyze)

    p_solve = sub.add_parser("solve", help="solve a problem file exactly")
    p_solve.add_argument("file", help="JSON problem file")
    p_solve.add_argument("--samples", default="1/8", help="sample step for the CSV, a positive rational (default 1/8)")
    p_solve.add_argument("--out", required=True, help="output prefix for <prefix>-report and <prefix>-solution.csv")
    p_solve.set_defaults(func=cmd_solve)

    p_spec = sub.add_parser("spectrum", help="eigenvalues of the shift matrix")
    p_spec.add_argument("file", help="JSON problem file")
    p_spec.add_argument("--grid", type=int, action="append", help="also check containment in the grid operator at this resolution (repeatable)")
    p_spec.set_defaults(func=cmd_spectrum)

    p_verify = sub.add_parser("verify", help="run the acceptance battery")
    p_verify.add_argument("--level", choices=("fast", "full"), default="fast")
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, sys.stdout)
    except ProblemFileError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
