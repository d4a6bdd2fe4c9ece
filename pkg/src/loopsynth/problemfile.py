"""Line-oriented problem files describing synthesis and check problems.

    # comment                       (blank lines and # comments ignored)
    vars x1 x2 x3                   required, first directive
    init 1 1 -1                     required, one rational per variable
    guard x2                        optional, repeatable (product), default 1
    invariant x2^2 - x1             at least one
    gen x1: x1^3, x2^2              synthesis form: generators per variable
    update x1: -3*x1^3 + 3*x2^2     check form: one concrete update each
    option domain integers          integers | rationals
    option nonzero vector           vector | none | <coefficient name>
    option solver z3 {file}         external solver command template
    option solve_budget 60          seconds
    option synth_budget 300         seconds
    option rounds 32                invariant-set round cap

A file uses either gen lines (every variable needs at least one) or
update lines (exactly one per variable), never both.  Repeated gen lines
for one variable accumulate; vars and init accept commas as separators;
init values are exact rationals (1, -1, 1/2, 0.25).  Polynomials follow
the grammar documented in the polynomial module; errors carry line:col.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .polyring import (ParseError, Polynomial, VarContext, as_rational,
                       parse_polynomial)
from .synthesis import ConcreteLoop, InvariantSpec, LoopTemplate

DEFAULT_SOLVE_BUDGET = 60.0
DEFAULT_SYNTH_BUDGET = 300.0
DEFAULT_MAX_ROUNDS = 32


@dataclass(frozen=True)
class Settings:
    domain: str = "integers"
    nonzero: str = "vector"
    solver: str | None = None
    solve_budget: float = DEFAULT_SOLVE_BUDGET
    synth_budget: float = DEFAULT_SYNTH_BUDGET
    max_rounds: int = DEFAULT_MAX_ROUNDS


@dataclass(frozen=True)
class ProblemDoc:
    """A parsed problem: a template (synthesis form) or a concrete loop
    (check form), the target invariants, and per-file settings."""

    name: str
    invariants: InvariantSpec
    template: LoopTemplate | None = None
    loop: ConcreteLoop | None = None
    settings: Settings = field(default_factory=Settings)

    @property
    def is_concrete(self) -> bool:
        return self.loop is not None


def _fail(msg: str, line: int, col: int = 1):
    raise ParseError(msg, line, col)


def _reparse(text: str, ctx: VarContext, line: int, col: int) -> Polynomial:
    try:
        return parse_polynomial(text, ctx)
    except ParseError as exc:
        raise ParseError(exc.message, line, col + exc.col - 1) from None


def parse_problem(text: str, name: str = "<string>") -> ProblemDoc:
    ctx: VarContext | None = None
    init: tuple | None = None
    guards: list[Polynomial] = []
    invariants: list[Polynomial] = []
    gens: dict[str, list[Polynomial]] = {}
    updates: dict[str, Polynomial] = {}
    opts: dict = {}
    nonzero_pos = (1, 1)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        word = line.split(None, 1)[0]
        word_col = line.index(word) + 1
        rest = line[word_col - 1 + len(word):]
        rest_col = word_col + len(word) + (len(rest) - len(rest.lstrip()))
        rest = rest.strip()

        if word == "vars":
            if ctx is not None:
                _fail("duplicate vars line", lineno, word_col)
            names = rest.replace(",", " ").split()
            if not names:
                _fail("vars needs at least one name", lineno, rest_col)
            try:
                ctx = VarContext(tuple(names))
            except ValueError as exc:
                _fail(str(exc), lineno, rest_col)
            continue
        if ctx is None:
            _fail("the first directive must be vars", lineno, word_col)

        if word == "init":
            if init is not None:
                _fail("duplicate init line", lineno, word_col)
            vals = rest.replace(",", " ").split()
            if len(vals) != ctx.arity:
                _fail(f"init needs {ctx.arity} values, got {len(vals)}",
                      lineno, rest_col)
            try:
                init = tuple(as_rational(v) for v in vals)
            except (ValueError, TypeError) as exc:
                _fail(str(exc), lineno, rest_col)
        elif word == "guard":
            guards.append(_reparse(rest, ctx, lineno, rest_col))
        elif word == "invariant":
            invariants.append(_reparse(rest, ctx, lineno, rest_col))
        elif word in ("gen", "update"):
            if ":" not in rest:
                _fail(f"{word} syntax: {word} <var>: <polynomial>", lineno, rest_col)
            head, _, body = rest.partition(":")
            var = head.strip()
            if var not in ctx:
                _fail(f"unknown variable {var!r}", lineno, rest_col)
            body_col = rest_col + rest.index(":") + 1
            if word == "gen":
                bucket = gens.setdefault(var, [])
                offset = body_col
                for piece in body.split(","):
                    pad = len(piece) - len(piece.lstrip())
                    if not piece.strip():
                        _fail("empty generator", lineno, offset + pad)
                    bucket.append(_reparse(piece.strip(), ctx, lineno, offset + pad))
                    offset += len(piece) + 1
            else:
                if var in updates:
                    _fail(f"duplicate update for {var!r}", lineno, word_col)
                pad = len(body) - len(body.lstrip())
                if not body.strip():
                    _fail("empty update", lineno, body_col)
                updates[var] = _reparse(body.strip(), ctx, lineno, body_col + pad)
        elif word == "option":
            parts = rest.split(None, 1)
            if not parts:
                _fail("option needs a key", lineno, rest_col)
            key = parts[0]
            val = parts[1].strip() if len(parts) > 1 else ""
            if not val:
                _fail(f"option {key} needs a value", lineno, rest_col)
            if key == "domain":
                if val not in ("integers", "rationals"):
                    _fail("domain must be integers or rationals", lineno, rest_col)
                opts["domain"] = val
            elif key == "nonzero":
                opts["nonzero"] = val
                nonzero_pos = (lineno, rest_col)
            elif key == "solver":
                opts["solver"] = val
            elif key in ("solve_budget", "synth_budget"):
                try:
                    seconds = float(val)
                except ValueError:
                    _fail(f"{key} needs a number of seconds", lineno, rest_col)
                if seconds <= 0:
                    _fail(f"{key} must be positive", lineno, rest_col)
                opts[key] = seconds
            elif key == "rounds":
                if not val.isdigit() or int(val) < 1:
                    _fail("rounds needs a positive integer", lineno, rest_col)
                opts["max_rounds"] = int(val)
            else:
                _fail(f"unknown option {key!r}", lineno, rest_col)
        else:
            _fail(f"unknown directive {word!r}", lineno, word_col)

    if ctx is None:
        _fail("missing vars line", 1)
    if init is None:
        _fail("missing init line", 1)
    if not invariants:
        _fail("need at least one invariant", 1)
    if gens and updates:
        _fail("gen and update lines cannot be mixed", 1)
    if not gens and not updates:
        _fail("need gen lines (synthesis) or update lines (check)", 1)

    guard = Polynomial.one(ctx)
    for g in guards:
        guard = guard * g
    spec = InvariantSpec(tuple(invariants))

    pol = opts.get("nonzero", "vector")
    if gens:
        missing = [n for n in ctx.names if n not in gens]
        if missing:
            _fail(f"no generators for {', '.join(missing)}", 1)
        template = LoopTemplate(ctx, init, guard,
                                tuple(tuple(gens[n]) for n in ctx.names))
        if pol not in ("vector", "none") and pol not in template.coefficient_names:
            _fail(f"nonzero option {pol!r} is not a template coefficient "
                  f"(have {', '.join(template.coefficient_names)})", *nonzero_pos)
        return ProblemDoc(name, spec, template=template,
                          settings=Settings(**opts))
    if pol not in ("vector", "none"):
        _fail(f"nonzero option {pol!r} needs a synthesis-form problem",
              *nonzero_pos)
    missing = [n for n in ctx.names if n not in updates]
    if missing:
        _fail(f"no update for {', '.join(missing)}", 1)
    loop = ConcreteLoop(ctx, init, guard, tuple(updates[n] for n in ctx.names))
    return ProblemDoc(name, spec, loop=loop, settings=Settings(**opts))


def format_problem(doc: ProblemDoc) -> str:
    """Canonical text for a ProblemDoc; parse_problem inverts it."""
    obj = doc.template if doc.template is not None else doc.loop
    ctx = obj.context
    lines = ["vars " + " ".join(ctx.names),
             "init " + " ".join(str(v) for v in obj.init)]
    if obj.guard != Polynomial.one(ctx):
        lines.append(f"guard {obj.guard}")
    lines.extend(f"invariant {g}" for g in doc.invariants.polys)
    if doc.template is not None:
        for n, gs in zip(ctx.names, doc.template.generators):
            lines.append(f"gen {n}: " + ", ".join(str(f) for f in gs))
    else:
        for n, u in zip(ctx.names, doc.loop.update):
            lines.append(f"update {n}: {u}")
    s = doc.settings
    defaults = Settings()
    if s.domain != defaults.domain:
        lines.append(f"option domain {s.domain}")
    if s.nonzero != defaults.nonzero:
        lines.append(f"option nonzero {s.nonzero}")
    if s.solver is not None:
        lines.append(f"option solver {s.solver}")
    if s.solve_budget != defaults.solve_budget:
        lines.append(f"option solve_budget {s.solve_budget:g}")
    if s.synth_budget != defaults.synth_budget:
        lines.append(f"option synth_budget {s.synth_budget:g}")
    if s.max_rounds != defaults.max_rounds:
        lines.append(f"option rounds {s.max_rounds}")
    return "\n".join(lines) + "\n"
