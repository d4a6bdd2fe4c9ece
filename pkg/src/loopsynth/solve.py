"""Searching a synthesis system for rational or integer solutions.

Four independent routes, kept deliberately separate so they can
cross-check each other: an SMT-LIB2 back end driven through an external
solver binary, exact linear solving for degree-1 systems, rational root
isolation for univariate members, and a brute-force integer box search.
classify_finiteness tells apart finitely and infinitely many solutions
over the algebraic closure.

Everything a solver claims is re-verified in exact arithmetic before it
is reported; a model that does not check out raises SolverOutputError
rather than being passed along.
"""

from __future__ import annotations

import itertools
import os
import shlex
import shutil
import subprocess
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .budget import Budget, BudgetExceeded
from .groebner import buchberger, is_zero_dimensional
from .polyring import DEGREVLEX, MonomialOrder, Polynomial, as_rational
from .synthesis import SynthesisSystem

NONZERO_VECTOR = "vector"
NONZERO_NONE = "none"

DEFAULT_SOLVE_SECONDS = 60.0
ENV_SOLVER = "LOOPSYNTH_SOLVER"
ENUMERATION_CAP = 2_000_000


class SolverOutputError(RuntimeError):
    """The external solver produced no status or an unusable model."""


class EnumerationCapError(RuntimeError):
    """A brute-force box was larger than the configured cap."""


@dataclass(frozen=True)
class SolveRequest:
    """What to solve: the system, the coefficient domain ('integers' or
    'rationals'), the nonzero policy ('vector', 'none', or one coefficient
    name that must be nonzero), and a wall-clock budget in seconds."""

    system: SynthesisSystem
    domain: str = "integers"
    nonzero: str = NONZERO_VECTOR
    budget_seconds: float = DEFAULT_SOLVE_SECONDS

    def __post_init__(self):
        if self.domain not in ("integers", "rationals"):
            raise ValueError(f"domain must be integers|rationals, not {self.domain!r}")
        if self.nonzero not in (NONZERO_VECTOR, NONZERO_NONE):
            if self.nonzero not in self.system.context.names:
                raise ValueError(
                    f"nonzero policy {self.nonzero!r} is neither vector|none "
                    f"nor a coefficient name")
        if self.budget_seconds <= 0:
            raise ValueError("budget_seconds must be positive")


@dataclass
class SolveOutcome:
    """status: sat | unsat | unknown | solver-unavailable.  A sat outcome
    always carries an assignment that was re-verified exactly."""

    status: str
    assignment: dict[str, Fraction] | None = None
    diagnostics: str = ""

    @property
    def integral(self) -> bool | None:
        if self.assignment is None:
            return None
        return all(v.denominator == 1 for v in self.assignment.values())


# ---------------------------------------------------------------------------
# SMT-LIB2 emission.


def _int_cleared(p: Polynomial) -> list[tuple[tuple, int]]:
    # terms with denominators multiplied out and content removed
    q = p.primitive_part()
    return [(e, int(c)) for e, c in q.sorted_terms()]


def _smt_term(names: Sequence[str], expo: tuple, coeff: int) -> str:
    factors: list[str] = []
    if coeff != 1 or not any(expo):
        factors.append(str(coeff) if coeff > 0 else f"(- {-coeff})")
    for i, e in enumerate(expo):
        factors.extend([names[i]] * e)
    if len(factors) == 1:
        return factors[0]
    return "(* " + " ".join(factors) + ")"


def _smt_poly(names: Sequence[str], p: Polynomial) -> str:
    terms = [_smt_term(names, e, c) for e, c in _int_cleared(p)]
    if not terms:
        return "0"
    if len(terms) == 1:
        return terms[0]
    return "(+ " + " ".join(terms) + ")"


def emit_smtlib(request: SolveRequest) -> str:
    """SMT-LIB2 script for the request: QF_NIA over Int or QF_NRA over
    Real, one equation per system polynomial (coefficients cleared to
    integers), the nonzero policy as a disjunction of distinct-from-zero
    atoms, then (check-sat)(get-model)."""
    system = request.system
    if not system.polys:
        raise ValueError("emit_smtlib: empty system (every vector is a solution)")
    names = system.context.names
    logic, sort = (("QF_NIA", "Int") if request.domain == "integers"
                   else ("QF_NRA", "Real"))
    lines = ["(set-option :produce-models true)", f"(set-logic {logic})"]
    lines.extend(f"(declare-const {n} {sort})" for n in names)
    for p in system.polys:
        lines.append(f"(assert (= {_smt_poly(names, p)} 0))")
    if request.nonzero == NONZERO_VECTOR:
        atoms = " ".join(f"(distinct {n} 0)" for n in names)
        lines.append(f"(assert (or {atoms}))")
    elif request.nonzero != NONZERO_NONE:
        lines.append(f"(assert (distinct {request.nonzero} 0))")
    lines.append("(check-sat)")
    lines.append("(get-model)")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# S-expression reading (solver output, and script round-trip in tests).


def parse_sexprs(text: str) -> list:
    """All toplevel s-expressions: atoms as strings, lists as Python lists.
    Comments (; to end of line) and |quoted| symbols are handled."""
    tokens: list[str] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch == "|":
            j = text.find("|", i + 1)
            if j < 0:
                raise SolverOutputError("unterminated |symbol|")
            tokens.append(text[i:j + 1])
            i = j + 1
        elif ch == '"':
            j = i + 1
            while j < n and text[j] != '"':
                j += 1
            if j >= n:
                raise SolverOutputError("unterminated string literal")
            tokens.append(text[i:j + 1])
            i = j + 1
        elif ch in "()":
            tokens.append(ch)
            i += 1
        elif ch.isspace():
            i += 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "();|":
                j += 1
            tokens.append(text[i:j])
            i = j
    out: list = []
    stack: list[list] = []
    for tok in tokens:
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if not stack:
                raise SolverOutputError("unbalanced ')'")
            done = stack.pop()
            (stack[-1] if stack else out).append(done)
        else:
            (stack[-1] if stack else out).append(tok)
    if stack:
        raise SolverOutputError("unbalanced '('")
    return out


def _sexpr_value(sx) -> Fraction:
    """Numeric model value: 3, 1.5, (- 3), (/ 1 2), and nestings thereof."""
    if isinstance(sx, str):
        try:
            return Fraction(sx)
        except ValueError:
            raise SolverOutputError(f"unreadable numeral {sx!r}") from None
    if isinstance(sx, list) and sx:
        if sx[0] == "-" and len(sx) == 2:
            return -_sexpr_value(sx[1])
        if sx[0] == "/" and len(sx) == 3:
            den = _sexpr_value(sx[2])
            if den == 0:
                raise SolverOutputError("zero denominator in model value")
            return _sexpr_value(sx[1]) / den
    raise SolverOutputError(f"unreadable model value {sx!r}")


def _model_assignment(sexprs: list, names: Sequence[str]) -> dict[str, Fraction]:
    defs: dict[str, Fraction] = {}
    def walk(items):
        for sx in items:
            if not isinstance(sx, list) or not sx:
                continue
            if sx[0] == "model":
                walk(sx[1:])
            elif sx[0] == "define-fun" and len(sx) >= 5:
                name = sx[1]
                if isinstance(name, str) and name.startswith("|") and name.endswith("|"):
                    name = name[1:-1]
                if name in names and sx[2] == []:
                    defs[name] = _sexpr_value(sx[4])
            else:
                walk(sx)
    walk(sexprs)
    # solvers may omit don't-care variables; zero-fill and let the exact
    # re-verification decide whether that is acceptable
    return {n: defs.get(n, Fraction(0)) for n in names}


def _policy_holds(assignment: Mapping[str, Fraction], nonzero: str,
                  names: Sequence[str]) -> bool:
    if nonzero == NONZERO_VECTOR:
        return any(assignment[n] != 0 for n in names)
    if nonzero == NONZERO_NONE:
        return True
    return assignment[nonzero] != 0


def verify_assignment(request: SolveRequest,
                      assignment: Mapping[str, Fraction]) -> bool:
    """Exact check: every system polynomial vanishes, the nonzero policy
    holds, and integer domain really got integers."""
    names = request.system.context.names
    point = {n: as_rational(assignment[n]) for n in names}
    if request.domain == "integers" and any(v.denominator != 1 for v in point.values()):
        return False
    if not _policy_holds(point, request.nonzero, names):
        return False
    return all(p.evaluate(point) == 0 for p in request.system.polys)


# ---------------------------------------------------------------------------
# External solver driver.


def discover_solver(env: Mapping[str, str] | None = None) -> list[str] | None:
    """argv template for a usable solver, or None.  LOOPSYNTH_SOLVER is a
    shell-style command where {file} marks the script path (appended when
    absent); otherwise z3/cvc5 on PATH are tried."""
    env = os.environ if env is None else env
    configured = env.get(ENV_SOLVER)
    if configured:
        argv = shlex.split(configured)
        if argv:
            return argv if "{file}" in argv else argv + ["{file}"]
    for name in ("z3", "cvc5"):
        path = shutil.which(name)
        if path:
            return [path, "{file}"]
    return None


def run_external_solver(script: str, budget_seconds: float = DEFAULT_SOLVE_SECONDS,
                        command: Sequence[str] | None = None,
                        request: SolveRequest | None = None) -> SolveOutcome:
    """Feed the script to an external SMT solver and interpret its stdout.

    The status is read from the output stream, never from the exit code.
    A timeout maps to unknown.  When a request is supplied, sat models are
    re-verified exactly and a failing model raises SolverOutputError.
    """
    argv_template = list(command) if command is not None else discover_solver()
    if not argv_template:
        return SolveOutcome("solver-unavailable",
                            diagnostics="no solver configured and none on PATH")
    with tempfile.NamedTemporaryFile("w", suffix=".smt2", delete=False) as fh:
        fh.write(script)
        path = fh.name
    try:
        argv = [a.replace("{file}", path) for a in argv_template]
        try:
            proc = subprocess.run(argv, capture_output=True, text=True,
                                  timeout=budget_seconds)
        except FileNotFoundError:
            return SolveOutcome("solver-unavailable",
                                diagnostics=f"cannot execute {argv[0]!r}")
        except subprocess.TimeoutExpired:
            return SolveOutcome("unknown",
                                diagnostics=f"solver timeout after {budget_seconds:g}s")
        transcript = proc.stdout + (("\n[stderr]\n" + proc.stderr) if proc.stderr else "")
        status = None
        rest_lines: list[str] = []
        for line in proc.stdout.splitlines():
            word = line.strip()
            if status is None and word in ("sat", "unsat", "unknown"):
                status = word
                continue
            rest_lines.append(line)
        if status is None:
            raise SolverOutputError(
                f"no sat/unsat/unknown in solver output: {transcript[:500]!r}")
        if status != "sat":
            return SolveOutcome(status, diagnostics=transcript)
        assignment = None
        if request is not None:
            names = request.system.context.names
            assignment = _model_assignment(parse_sexprs("\n".join(rest_lines)), names)
            if not verify_assignment(request, assignment):
                raise SolverOutputError(
                    f"solver model failed exact re-verification: {assignment}")
        return SolveOutcome("sat", assignment=assignment, diagnostics=transcript)
    finally:
        os.unlink(path)


def solve(request: SolveRequest, command: Sequence[str] | None = None) -> SolveOutcome:
    """End-to-end: emit the script, run the solver, verify the model.

    An empty system is satisfied by every vector, so a policy-conforming
    assignment is returned directly without invoking any solver.
    """
    system = request.system
    if not system.polys:
        names = system.context.names
        assignment = {n: Fraction(0) for n in names}
        if request.nonzero == NONZERO_VECTOR and names:
            assignment[names[0]] = Fraction(1)
        elif request.nonzero not in (NONZERO_VECTOR, NONZERO_NONE):
            assignment[request.nonzero] = Fraction(1)
        return SolveOutcome("sat", assignment=assignment,
                            diagnostics="empty system: every vector is a solution")
    script = emit_smtlib(request)
    return run_external_solver(script, request.budget_seconds, command, request)


# ---------------------------------------------------------------------------
# Exact linear systems.


@dataclass(frozen=True)
class LinearSolution:
    """Affine solution set particular + span(basis); empty when
    particular is None (inconsistent system)."""

    variables: tuple[str, ...]
    particular: tuple[Fraction, ...] | None
    basis: tuple[tuple[Fraction, ...], ...] = ()

    @property
    def is_empty(self) -> bool:
        return self.particular is None

    @property
    def dimension(self) -> int:
        return -1 if self.is_empty else len(self.basis)

    def point(self, params: Sequence = ()) -> tuple[Fraction, ...]:
        if self.is_empty:
            raise ValueError("empty solution set has no points")
        params = [as_rational(p) for p in params]
        if len(params) != len(self.basis):
            raise ValueError(f"need {len(self.basis)} parameters")
        out = list(self.particular)
        for lam, vec in zip(params, self.basis):
            for i, v in enumerate(vec):
                out[i] += lam * v
        return tuple(out)


def solve_linear(system: SynthesisSystem) -> LinearSolution | None:
    """Exact parametric solution when every polynomial has degree <= 1;
    None when the system is not linear."""
    names = system.context.names
    l = len(names)
    if any(p.total_degree() > 1 for p in system.polys):
        return None
    rows: list[list[Fraction]] = []
    for p in system.polys:
        row = [Fraction(0)] * (l + 1)
        for expo, c in p.terms.items():
            deg = sum(expo)
            if deg == 0:
                row[l] -= c  # constant moves to the right-hand side
            else:
                row[expo.index(1)] += c
        rows.append([Fraction(v) for v in row])
    # Gauss-Jordan to reduced row echelon form
    pivots: list[int] = []
    r = 0
    for col in range(l):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    for i in range(r, len(rows)):
        if rows[i][l] != 0:
            return LinearSolution(tuple(names), None)
    free = [c for c in range(l) if c not in pivots]
    particular = [Fraction(0)] * l
    for i, col in enumerate(pivots):
        particular[col] = rows[i][l]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * l
        vec[fc] = Fraction(1)
        for i, col in enumerate(pivots):
            vec[col] = -rows[i][fc]
        basis.append(tuple(vec))
    return LinearSolution(tuple(names), tuple(particular), tuple(basis))


# ---------------------------------------------------------------------------
# Univariate rational roots.


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def rational_roots(p: Polynomial) -> list[Fraction]:
    """All rational roots of a univariate polynomial, ascending.

    Candidates are +-(divisor of trailing coefficient)/(divisor of leading
    coefficient) after integer clearing; every candidate is verified by
    exact evaluation.  Nonzero constants have no roots; the zero
    polynomial is rejected.
    """
    if p.is_zero:
        raise ValueError("every rational is a root of the zero polynomial")
    used = [n for n in p.context.names if p.uses(n)]
    if len(used) > 1:
        raise ValueError(f"not univariate: uses {used}")
    if not used:
        return []
    i = p.context.index(used[0])
    cleared = p.primitive_part()
    coeffs: dict[int, int] = {}
    for expo, c in cleared.terms.items():
        coeffs[expo[i]] = int(c)
    degs = sorted(coeffs)
    roots = []
    low = degs[0]
    if low > 0:
        roots.append(Fraction(0))  # x^low factors out
    trailing = coeffs[low]
    leading = coeffs[degs[-1]]

    def value(x: Fraction) -> Fraction:
        return sum((c * x ** (d - low) for d, c in coeffs.items()), Fraction(0))

    seen = set(roots)
    for num in _divisors(trailing):
        for den in _divisors(leading):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if cand not in seen and value(cand) == 0:
                    roots.append(cand)
                    seen.add(cand)
    return sorted(roots)


# ---------------------------------------------------------------------------
# Brute-force integer box search.


def brute_force_box(system: SynthesisSystem, bound: int,
                    cap: int = ENUMERATION_CAP) -> list[tuple[int, ...]]:
    """All integer solutions with every coordinate in [-bound, bound],
    in ascending lexicographic order.  Refuses boxes whose total work
    l * (2*bound+1)^l exceeds the cap."""
    if bound < 0:
        raise ValueError("bound must be >= 0")
    names = system.context.names
    l = len(names)
    width = 2 * bound + 1
    work = l * width ** l
    if work > cap:
        raise EnumerationCapError(
            f"box of {width}^{l} points exceeds enumeration cap {cap}")
    compiled = [list(p.terms.items()) for p in system.polys]
    hits = []
    for point in itertools.product(range(-bound, bound + 1), repeat=l):
        ok = True
        for terms in compiled:
            total = 0
            for expo, c in terms:
                v = c
                for x, e in zip(point, expo):
                    if e:
                        v *= x ** e
                total += v
            if total != 0:
                ok = False
                break
        if ok:
            hits.append(point)
    return hits


# ---------------------------------------------------------------------------
# Finiteness of the solution set.


def classify_finiteness(system: SynthesisSystem,
                        order: MonomialOrder = DEGREVLEX,
                        budget: Budget | None = None) -> str:
    """'finite' | 'infinite' | 'unknown' for the solution count over the
    algebraic closure: a basis {1} or a full staircase means finite (the
    empty set counts), a missing pure power means a positive-dimensional
    component, budget exhaustion means unknown."""
    names = system.context.names
    if not system.polys:
        return "finite" if not names else "infinite"
    try:
        basis = buchberger(list(system.polys), order, budget)
    except BudgetExceeded:
        return "unknown"
    return "finite" if is_zero_dimensional(basis, names) else "infinite"
