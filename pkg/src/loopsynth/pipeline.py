"""End-to-end pipeline: parse, synthesize, classify, solve, verify, report.

run_pipeline drives a single synthesis problem through generate_loops,
finiteness classification, SMT-LIB emission, the external solver (when one
is available), and exact re-verification of any model by simulation plus
the invariant-set criterion.  run_benchmarks maps that over a directory,
isolating per-file failures into report rows, and renders CSV and a plain
text table.  Budget exhaustion is reported as status TL with solver column
NI (no input), never as a crash.
"""

from __future__ import annotations

import csv
import glob
import io
import itertools
import os
import shlex
import time
from dataclasses import dataclass, field, asdict
from typing import Sequence

from .budget import Budget, BudgetExceeded
from .polyring import ParseError, Polynomial, VarContext
from .problemfile import ProblemDoc, Settings, parse_problem
from .solve import (SolveOutcome, SolveRequest, discover_solver, emit_smtlib,
                    classify_finiteness, solve)
from .synthesis import (InvariantSpec, LoopTemplate, SynthesisSystem,
                        check_invariants, generate_loops, instantiate, simulate)

SIMULATION_STEPS = 10


@dataclass
class RunReport:
    """Flat record of one pipeline run (synthesis or check form)."""

    name: str
    mode: str = "synth"               # synth | check
    status: str = "ok"                # ok | TL | error
    n: int | None = None              # program variables
    m: int | None = None              # invariants
    l: int | None = None              # template coefficients
    d: int | None = None              # max invariant degree
    s: int | None = None              # system size
    q_count: int | None = None
    rounds: int | None = None
    finiteness: str | None = None
    synth_seconds: float | None = None
    solve_seconds: float | None = None
    solver_status: str | None = None  # sat|unsat|unknown|solver-unavailable|NI
    assignment: dict[str, str] | None = None
    verified: bool | None = None
    error: str | None = None
    system: list[str] = field(default_factory=list)
    smt_path: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)


CSV_FIELDS = ["name", "mode", "status", "n", "m", "l", "d", "s", "q_count",
              "rounds", "finiteness", "synth_seconds", "solve_seconds",
              "solver_status", "verified", "error"]


def _resolve(settings: Settings, **overrides) -> Settings:
    kept = {k: v for k, v in overrides.items() if v is not None}
    return Settings(**{**settings.__dict__, **kept}) if kept else settings


def _solver_command(settings: Settings) -> list[str] | None:
    if settings.solver:
        argv = shlex.split(settings.solver)
        return argv if "{file}" in argv else argv + ["{file}"]
    return discover_solver()


def run_pipeline(doc: ProblemDoc, *, emit_smt: str | None = None,
                 domain: str | None = None, nonzero: str | None = None,
                 solver: str | None = None, solve_budget: float | None = None,
                 synth_budget: float | None = None,
                 max_rounds: int | None = None) -> RunReport:
    """Synthesis pipeline for one problem; check-form docs are delegated to
    run_check.  Keyword arguments override the file's option lines."""
    settings = _resolve(doc.settings, domain=domain, nonzero=nonzero,
                        solver=solver, solve_budget=solve_budget,
                        synth_budget=synth_budget, max_rounds=max_rounds)
    if doc.is_concrete:
        return run_check(doc, synth_budget=settings.synth_budget,
                         max_rounds=settings.max_rounds)

    tpl = doc.template
    report = RunReport(doc.name, n=tpl.context.arity, m=len(doc.invariants.polys),
                       l=tpl.coeff_count,
                       d=max(g.total_degree() for g in doc.invariants.polys))
    budget = Budget(seconds=settings.synth_budget)
    t0 = time.perf_counter()
    try:
        system = generate_loops(tpl, doc.invariants,
                                max_rounds=settings.max_rounds, budget=budget)
    except BudgetExceeded as exc:
        report.status = "TL"
        report.solver_status = "NI"
        report.error = str(exc)
        report.synth_seconds = time.perf_counter() - t0
        return report
    report.synth_seconds = time.perf_counter() - t0
    report.s = system.s
    report.q_count = system.q_count
    report.rounds = system.rounds
    report.system = system.as_strings()

    try:
        report.finiteness = classify_finiteness(
            system, budget=Budget(seconds=settings.synth_budget))
    except BudgetExceeded:
        report.finiteness = "unknown"

    request = SolveRequest(system, domain=settings.domain,
                           nonzero=settings.nonzero,
                           budget_seconds=settings.solve_budget)
    if emit_smt is not None and system.polys:
        with open(emit_smt, "w") as fh:
            fh.write(emit_smtlib(request))
        report.smt_path = emit_smt

    t0 = time.perf_counter()
    outcome = solve(request, command=_solver_command(settings))
    report.solve_seconds = time.perf_counter() - t0
    report.solver_status = outcome.status
    if outcome.status == "sat":
        assignment = outcome.assignment
        report.assignment = {k: str(v) for k, v in assignment.items()}
        loop = instantiate(tpl, assignment)
        ok_sim = simulate(loop, doc.invariants, SIMULATION_STEPS)
        try:
            ok_exact = check_invariants(loop, doc.invariants,
                                        max_rounds=settings.max_rounds,
                                        budget=Budget(seconds=settings.synth_budget))
        except BudgetExceeded:
            ok_exact = False
        report.verified = ok_sim and ok_exact
    return report


def run_check(doc: ProblemDoc, *, steps: int = SIMULATION_STEPS,
              synth_budget: float | None = None,
              max_rounds: int | None = None) -> RunReport:
    """Verify a concrete loop: simulation evidence plus the exact
    invariant-set criterion."""
    if not doc.is_concrete:
        raise ValueError("run_check needs a concrete (update-form) problem")
    settings = _resolve(doc.settings, synth_budget=synth_budget,
                        max_rounds=max_rounds)
    loop = doc.loop
    report = RunReport(doc.name, mode="check", n=loop.context.arity,
                       m=len(doc.invariants.polys),
                       d=max(g.total_degree() for g in doc.invariants.polys))
    t0 = time.perf_counter()
    ok_sim = simulate(loop, doc.invariants, steps)
    try:
        ok_exact = check_invariants(loop, doc.invariants,
                                    max_rounds=settings.max_rounds,
                                    budget=Budget(seconds=settings.synth_budget))
    except BudgetExceeded as exc:
        report.status = "TL"
        report.error = str(exc)
        report.synth_seconds = time.perf_counter() - t0
        report.verified = False
        return report
    report.synth_seconds = time.perf_counter() - t0
    report.verified = ok_sim and ok_exact
    if ok_sim != ok_exact:
        # simulation can only under-approximate; exact says invariant fails
        report.error = f"simulation={ok_sim} exact={ok_exact}"
        report.verified = False
    return report


# ---------------------------------------------------------------------------
# Benchmark harness.


def grid_template(tpl_or_doc, D: int, l: int) -> LoopTemplate:
    """Replace a template's generators by the derived (D, l) structure:
    variable i draws from [x_i, monomials of degree 1..D by (degree, index
    combination), constant 1 last]; l is split evenly with the remainder
    going to the leading variables."""
    tpl: LoopTemplate = tpl_or_doc.template if isinstance(tpl_or_doc, ProblemDoc) else tpl_or_doc
    if tpl is None:
        raise ValueError("grid mode needs a synthesis-form problem")
    if D < 1:
        raise ValueError("D must be >= 1")
    ctx = tpl.context
    n = ctx.arity
    if l < n:
        raise ValueError(f"l must be >= {n} (one generator per variable)")
    monos: list[Polynomial] = []
    for d in range(1, D + 1):
        for combo in itertools.combinations_with_replacement(range(n), d):
            expo = [0] * n
            for i in combo:
                expo[i] += 1
            monos.append(Polynomial(ctx, {tuple(expo): 1}))
    one = Polynomial.one(ctx)
    xs = Polynomial.variables(ctx)
    counts = [l // n + (1 if i < l % n else 0) for i in range(n)]
    gens = []
    for i, c in enumerate(counts):
        pool = [xs[i]] + [m for m in monos if m != xs[i]] + [one]
        if c > len(pool):
            raise ValueError(f"l={l} too large for D={D} with {n} variables")
        gens.append(tuple(pool[:c]))
    return LoopTemplate(ctx, tpl.init, tpl.guard, tuple(gens))


def collect_problem_files(target: str) -> list[str]:
    if os.path.isdir(target):
        return sorted(glob.glob(os.path.join(target, "*.loop")))
    return [target]


def run_benchmarks(targets: Sequence[str], *, grid: Sequence[tuple[int, int]] | None = None,
                   **overrides) -> list[RunReport]:
    """One report per problem file (times the grid cells, when given);
    parse errors, budget exhaustion, and crashes become rows, not
    exceptions."""
    paths: list[str] = []
    for target in targets:
        paths.extend(collect_problem_files(target))
    reports: list[RunReport] = []
    for path in paths:
        name = os.path.splitext(os.path.basename(path))[0]
        try:
            with open(path) as fh:
                doc = parse_problem(fh.read(), name=name)
        except (OSError, ParseError) as exc:
            reports.append(RunReport(name, status="error", error=str(exc)))
            continue
        cells = [None] if not grid or doc.is_concrete else list(grid)
        for cell in cells:
            cell_name = name if cell is None else f"{name}[D={cell[0]},l={cell[1]}]"
            try:
                if cell is None:
                    cell_doc = doc
                else:
                    cell_doc = ProblemDoc(cell_name, doc.invariants,
                                          template=grid_template(doc, *cell),
                                          settings=doc.settings)
                report = run_pipeline(cell_doc, **overrides)
                report.name = cell_name
            except BudgetExceeded as exc:
                report = RunReport(cell_name, status="TL", solver_status="NI",
                                   error=str(exc))
            except Exception as exc:  # isolate rows from each other
                report = RunReport(cell_name, status="error", error=str(exc))
            reports.append(report)
    return reports


def render_csv(reports: Sequence[RunReport]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, extrasaction="ignore")
    writer.writeheader()
    for r in reports:
        row = r.to_dict()
        for k in ("synth_seconds", "solve_seconds"):
            if row.get(k) is not None:
                row[k] = f"{row[k]:.3f}"
        writer.writerow(row)
    return buf.getvalue()


def render_table(reports: Sequence[RunReport]) -> str:
    cols = ["name", "mode", "status", "s", "rounds", "finiteness",
            "synth_seconds", "solver_status", "solve_seconds", "verified"]
    head = ["problem", "mode", "status", "s", "rounds", "finite",
            "synth(s)", "solver", "solve(s)", "ok"]

    def cell(r: RunReport, c: str) -> str:
        v = getattr(r, c)
        if v is None:
            return "-"
        if isinstance(v, float):
            return f"{v:.2f}"
        if isinstance(v, bool):
            return "yes" if v else "no"
        return str(v)

    rows = [[cell(r, c) for c in cols] for r in reports]
    widths = [max(len(h), *(len(row[i]) for row in rows)) if rows else len(h)
              for i, h in enumerate(head)]
    out = ["  ".join(h.ljust(w) for h, w in zip(head, widths)).rstrip()]
    out.append("  ".join("-" * w for w in widths))
    for row in rows:
        out.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    errors = [(r.name, r.error) for r in reports if r.error]
    if errors:
        out.append("")
        out.extend(f"{n}: {e}" for n, e in errors)
    return "\n".join(out) + "\n"
