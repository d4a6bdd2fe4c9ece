"""Exact multivariate polynomial arithmetic over the rationals.

Coefficients are arbitrary-precision rationals (`fractions.Fraction`; plain
ints are accepted everywhere and kept as ints internally for speed, floats
are rejected).  A VarContext fixes an ordered variable universe split into
blocks: program variables first, then coefficient variables, then an
optional guard flag and an optional auxiliary variable, which always sits
last.  Monomials are dense exponent tuples indexed by that order, and
polynomials are immutable dicts from exponent tuple to nonzero coefficient.

The text format read by parse_polynomial and produced by str()/
format_polynomial is:

    expr     := ['-' | '+'] term (('+' | '-') term)*
    term     := factor (('*' factor) | ('/' INT))*
    factor   := atom ['^' INT]
    atom     := INT | NAME | '(' expr ')'

Multiplication is always explicit, exponents are nonnegative integers, and
division is only allowed by a nonzero integer literal (x/2, 3/4*x).
Printing uses the degrevlex order, largest term first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence, Union

Rational = Fraction
Coeff = Union[int, Fraction]


class ContextMismatchError(ValueError):
    """Operands belong to different variable contexts."""


class ParseError(ValueError):
    """Text did not match the polynomial (or problem file) grammar."""

    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


def as_rational(value) -> Fraction:
    """Coerce int, Fraction, or a string like '-3/4' to Fraction.

    Floats are rejected on purpose: this package is exact end to end.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {value!r}") from exc
    raise TypeError(f"not a rational: {value!r} (floats are rejected; use Fraction)")


def _coeff(value) -> Coeff:
    # Internal coefficient normal form: int when integral, Fraction otherwise.
    if isinstance(value, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    raise TypeError(f"bad coefficient {value!r} (floats are rejected; use Fraction)")


_IDENT_OK = str.isidentifier


@dataclass(frozen=True)
class VarContext:
    """Ordered, block-structured variable universe shared by polynomials.

    Blocks, in order: x_names (program variables), y_names (coefficient
    variables), z_name (guard flag), t_name (auxiliary, e.g. the radical
    membership witness).  Names are unique identifiers; the total order is
    fixed at construction and indexes every exponent tuple.
    """

    x_names: tuple[str, ...]
    y_names: tuple[str, ...] = ()
    z_name: str | None = None
    t_name: str | None = None

    def __post_init__(self):
        names = self.names
        for n in names:
            if not isinstance(n, str) or not _IDENT_OK(n):
                raise ValueError(f"bad variable name: {n!r}")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")

    @property
    def names(self) -> tuple[str, ...]:
        tail = tuple(n for n in (self.z_name, self.t_name) if n is not None)
        return tuple(self.x_names) + tuple(self.y_names) + tail

    @property
    def arity(self) -> int:
        return len(self.names)

    def __len__(self) -> int:
        return self.arity

    def __contains__(self, name: str) -> bool:
        return name in self.names

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r} in context {self.names}") from None

    def with_t(self, base: str = "t") -> "VarContext":
        """Extend with a fresh trailing auxiliary variable."""
        if self.t_name is not None:
            raise ValueError("context already has an auxiliary variable")
        return VarContext(self.x_names, self.y_names, self.z_name,
                          fresh_name(base, self.names))

    def restrict(self, keep: Iterable[str]) -> "VarContext":
        """Sub-context with only the given names, block roles preserved."""
        keep = set(keep)
        unknown = keep - set(self.names)
        if unknown:
            raise KeyError(f"unknown variables {sorted(unknown)}")
        return VarContext(
            tuple(n for n in self.x_names if n in keep),
            tuple(n for n in self.y_names if n in keep),
            self.z_name if self.z_name in keep else None,
            self.t_name if self.t_name in keep else None,
        )


def fresh_name(base: str, taken: Iterable[str]) -> str:
    """base, then base_, base__, ... until it avoids every taken name."""
    taken = set(taken)
    name = base
    while name in taken:
        name += "_"
    return name


# ---------------------------------------------------------------------------
# Monomial helpers.  A monomial is a dense tuple of nonnegative ints.

Monomial = tuple

def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(i + j for i, j in zip(a, b))

def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(i <= j for i, j in zip(a, b))

def mono_div(a: Monomial, b: Monomial) -> Monomial:
    # a / b; caller guarantees divisibility
    return tuple(i - j for i, j in zip(a, b))

def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(i, j) for i, j in zip(a, b))

def mono_degree(a: Monomial) -> int:
    return sum(a)


@dataclass(frozen=True)
class MonomialOrder:
    """Admissible term order, exposed as an ascending sort key on exponents.

    kinds: 'degrevlex' (default everywhere), 'lex', and 'elim_last', a block
    order in which the trailing context variable (by convention the
    auxiliary t) dominates, with degrevlex inside the remaining block.
    Keys are flat int tuples, so elementwise negation inverts the order.
    """

    kind: str

    def key(self, expo: Monomial) -> tuple:
        kind = self.kind
        if kind == "degrevlex":
            return (sum(expo), *[-e for e in reversed(expo)])
        if kind == "lex":
            return tuple(expo)
        if kind == "elim_last":
            head = expo[:-1]
            return (expo[-1], sum(head), *[-e for e in reversed(head)])
        raise ValueError(f"unknown order kind {kind!r}")


DEGREVLEX = MonomialOrder("degrevlex")
LEX = MonomialOrder("lex")
ELIM_LAST = MonomialOrder("elim_last")


class Polynomial:
    """Immutable sparse polynomial over a VarContext.

    terms maps exponent tuples to nonzero coefficients; treat it as
    read-only.  All arithmetic is exact.
    """

    __slots__ = ("context", "terms", "_hash")

    def __init__(self, context: VarContext, terms: Mapping[Monomial, Coeff] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        arity = context.arity
        clean: dict = {}
        for expo, c in items:
            expo = tuple(expo)
            if len(expo) != arity:
                raise ValueError(f"exponent tuple {expo} does not match arity {arity}")
            if any((not isinstance(e, int)) or e < 0 for e in expo):
                raise ValueError(f"exponents must be nonnegative ints: {expo}")
            c = _coeff(c)
            if c:
                prev = clean.get(expo)
                if prev is None:
                    clean[expo] = c
                else:
                    s = prev + c
                    if s:
                        clean[expo] = s
                    else:
                        del clean[expo]
        object.__setattr__(self, "context", context)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(context: VarContext) -> "Polynomial":
        return Polynomial(context)

    @staticmethod
    def one(context: VarContext) -> "Polynomial":
        return Polynomial.constant(context, 1)

    @staticmethod
    def constant(context: VarContext, c) -> "Polynomial":
        return Polynomial(context, {(0,) * context.arity: _coeff_or_rat(c)})

    @staticmethod
    def variable(context: VarContext, name: str) -> "Polynomial":
        i = context.index(name)
        expo = tuple(1 if j == i else 0 for j in range(context.arity))
        return Polynomial(context, {expo: 1})

    @staticmethod
    def variables(context: VarContext) -> list["Polynomial"]:
        return [Polynomial.variable(context, n) for n in context.names]

    # -- basic queries ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def total_degree(self) -> int:
        """Max term degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        i = self.context.index(name)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def uses(self, name: str) -> bool:
        i = self.context.index(name)
        return any(e[i] for e in self.terms)

    def constant_value(self) -> Fraction:
        """Value of a constant polynomial (degree <= 0)."""
        if self.total_degree() > 0:
            raise ValueError(f"not a constant polynomial: {self}")
        zero = (0,) * self.context.arity
        return Fraction(self.terms.get(zero, 0))

    def sorted_terms(self, order: MonomialOrder = DEGREVLEX, reverse: bool = True):
        return sorted(self.terms.items(), key=lambda kv: order.key(kv[0]), reverse=reverse)

    def leading_monomial(self, order: MonomialOrder = DEGREVLEX) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order: MonomialOrder = DEGREVLEX) -> Coeff:
        return self.terms[self.leading_monomial(order)]

    # -- equality / hashing -------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.context == other.context and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.context, other)
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.context, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # -- ring operations ----------------------------------------------------

    def _check_context(self, other: "Polynomial"):
        if self.context != other.context:
            raise ContextMismatchError(
                f"contexts differ: {self.context.names} vs {other.context.names}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.context, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_context(other)
        terms = dict(self.terms)
        for expo, c in other.terms.items():
            s = terms.get(expo, 0) + c
            if s:
                terms[expo] = s
            else:
                terms.pop(expo, None)
        return self._wrap(terms)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.context, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c0 = _coeff(other)
            if not c0:
                return Polynomial.zero(self.context)
            return self._wrap({e: c * c0 for e, c in self.terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_context(other)
        acc: dict = {}
        get = acc.get
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(i + j for i, j in zip(e1, e2))
                s = get(e, 0) + c1 * c2
                if s:
                    acc[e] = s
                else:
                    acc.pop(e, None)
        return self._wrap(acc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if not q:
                raise ZeroDivisionError("division of polynomial by zero")
            return self * Fraction(q.denominator, q.numerator)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers take nonnegative int exponents")
        result = Polynomial.one(self.context)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def _wrap(self, terms: dict) -> "Polynomial":
        # Internal: terms already normalized (no zeros, right arity).
        p = Polynomial.__new__(Polynomial)
        object.__setattr__(p, "context", self.context)
        object.__setattr__(p, "terms", terms)
        object.__setattr__(p, "_hash", None)
        return p

    # -- evaluation and substitution ----------------------------------------

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        """Exact value at a fully specified rational point."""
        vals = []
        for n in self.context.names:
            if n not in point:
                raise KeyError(f"evaluate: no value for variable {n!r}")
            v = point[n]
            vals.append(v if isinstance(v, int) else as_rational(v))
        total = 0
        for expo, c in self.terms.items():
            term = c
            for v, e in zip(vals, expo):
                if e:
                    term *= v ** e
            total += term
        return Fraction(total)

    def substitute(self, bindings: Mapping[str, object]) -> "Polynomial":
        """Bind some variables to rationals; result lives in the remaining
        sub-context (an empty context when everything is bound)."""
        if not bindings:
            return self
        names = self.context.names
        vals: dict[int, Coeff] = {}
        for n, v in bindings.items():
            i = self.context.index(n)
            vals[i] = v if isinstance(v, int) and not isinstance(v, bool) else _coeff(as_rational(v))
        keep = [i for i in range(len(names)) if i not in vals]
        new_ctx = self.context.restrict(names[i] for i in keep)
        acc: dict = {}
        for expo, c in self.terms.items():
            for i, v in vals.items():
                e = expo[i]
                if e:
                    c = c * v ** e
            if not c:
                continue
            key = tuple(expo[i] for i in keep)
            s = acc.get(key, 0) + c
            if s:
                acc[key] = s
            else:
                acc.pop(key, None)
        return Polynomial(new_ctx, acc)

    def compose(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute a polynomial for every variable (one image per context
        variable, all images over one common target context)."""
        images = list(images)
        if len(images) != self.context.arity:
            raise ValueError(
                f"compose needs {self.context.arity} images, got {len(images)}")
        if not images:
            raise ValueError("compose is not defined over an empty context")
        tgt = images[0].context
        for im in images:
            if im.context != tgt:
                raise ContextMismatchError("compose images must share one context")
        powers: list[list[Polynomial]] = [[Polynomial.one(tgt), im] for im in images]

        def power(i: int, e: int) -> Polynomial:
            cache = powers[i]
            while len(cache) <= e:
                cache.append(cache[-1] * images[i])
            return cache[e]

        acc: dict = {}
        for expo, c in self.terms.items():
            prod = Polynomial.constant(tgt, c)
            for i, e in enumerate(expo):
                if e:
                    prod = prod * power(i, e)
            for e2, c2 in prod.terms.items():
                s = acc.get(e2, 0) + c2
                if s:
                    acc[e2] = s
                else:
                    acc.pop(e2, None)
        return Polynomial(tgt, acc)

    def extend_context(self, new_context: VarContext) -> "Polynomial":
        """Re-express over a larger context containing all current names."""
        old = self.context.names
        try:
            pos = [new_context.index(n) for n in old]
        except KeyError as exc:
            raise ContextMismatchError(str(exc)) from None
        arity = new_context.arity
        acc = {}
        for expo, c in self.terms.items():
            e2 = [0] * arity
            for p, e in zip(pos, expo):
                e2[p] = e
            acc[tuple(e2)] = c
        return Polynomial(new_context, acc)

    # -- normal forms for output --------------------------------------------

    def content(self) -> Fraction:
        """Positive rational content: gcd of numerators / lcm of denominators."""
        if not self.terms:
            return Fraction(0)
        nums = []
        dens = []
        for c in self.terms.values():
            f = Fraction(c)
            nums.append(abs(f.numerator))
            dens.append(f.denominator)
        g = 0
        for n in nums:
            g = gcd(g, n)
        l = 1
        for d in dens:
            l = lcm(l, d)
        return Fraction(g, l)

    def primitive_part(self, order: MonomialOrder = DEGREVLEX) -> "Polynomial":
        """Divide by the content and fix the sign so the leading coefficient
        is positive; integer coefficients with gcd 1 result."""
        if not self.terms:
            return self
        c = self.content()
        if self.leading_coefficient(order) < 0:
            c = -c
        return self / c

    normalized = primitive_part

    def monic(self, order: MonomialOrder = DEGREVLEX) -> "Polynomial":
        if not self.terms:
            return self
        return self / Fraction(self.leading_coefficient(order))

    # -- printing ------------------------------------------------------------

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"<poly {self} over {self.context.names}>"


def _coeff_or_rat(c) -> Coeff:
    if isinstance(c, str):
        return _coeff(as_rational(c))
    return _coeff(c)


# ---------------------------------------------------------------------------
# Text rendering and parsing (grammar in the module docstring).


def format_polynomial(p: Polynomial, order: MonomialOrder = DEGREVLEX) -> str:
    if p.is_zero:
        return "0"
    names = p.context.names
    out = []
    for expo, c in p.sorted_terms(order):
        neg = c < 0
        mag = -c if neg else c
        factors = [f"{names[i]}^{e}" if e > 1 else names[i]
                   for i, e in enumerate(expo) if e]
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


_TOKEN_OPS = set("+-*^()/")


def _tokenize(text: str):
    """Yield (kind, value, line, col) with 1-based positions."""
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch in _TOKEN_OPS:
            yield ("op", ch, line, col)
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            yield ("int", text[i:j], line, col)
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            yield ("name", text[i:j], line, col)
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    yield ("end", "", line, col)


class _Parser:
    def __init__(self, text: str, context: VarContext):
        self.tokens = list(_tokenize(text))
        self.pos = 0
        self.context = context

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, val, line, col = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", line, col)

    def parse(self) -> Polynomial:
        kind, _, line, col = self.peek()
        if kind == "end":
            raise ParseError("empty polynomial", line, col)
        p = self.expr()
        kind, val, line, col = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", line, col)
        return p

    def expr(self) -> Polynomial:
        sign = 1
        kind, val, _, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        p = self.term() * sign
        while True:
            kind, val, _, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                q = self.term()
                p = p + q if val == "+" else p - q
            else:
                return p

    def term(self) -> Polynomial:
        p = self.factor()
        while True:
            kind, val, _, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                p = p * self.factor()
            elif kind == "op" and val == "/":
                self.take()
                kind, val, line, col = self.take()
                if kind != "int" or int(val) == 0:
                    raise ParseError("divisor must be a nonzero integer",
                                     line, col)
                p = p / int(val)
            else:
                return p

    def factor(self) -> Polynomial:
        p = self.atom()
        kind, val, _, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, line, col = self.take()
            if kind != "int":
                raise ParseError("exponent must be a nonnegative integer", line, col)
            p = p ** int(val)
        return p

    def atom(self) -> Polynomial:
        kind, val, line, col = self.take()
        if kind == "int":
            num = int(val)
            k2, v2, _, _ = self.peek()
            if k2 == "op" and v2 == "/":
                self.take()
                k3, v3, l3, c3 = self.take()
                if k3 != "int":
                    raise ParseError("denominator must be an integer", l3, c3)
                if int(v3) == 0:
                    raise ParseError("zero denominator", l3, c3)
                return Polynomial.constant(self.context, Fraction(num, int(v3)))
            return Polynomial.constant(self.context, num)
        if kind == "name":
            if val not in self.context:
                raise ParseError(f"unknown variable {val!r}", line, col)
            return Polynomial.variable(self.context, val)
        if kind == "op" and val == "(":
            p = self.expr()
            self.expect_op(")")
            return p
        raise ParseError(f"unexpected {val!r}" if val else "unexpected end of input",
                         line, col)


def parse_polynomial(text: str, context: VarContext) -> Polynomial:
    """Parse the documented grammar; raises ParseError with line:col."""
    return _Parser(text, context).parse()
