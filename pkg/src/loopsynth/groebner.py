"""Groebner bases over Q: division, Buchberger's algorithm, membership.

The engine is deliberately plain: normal-strategy pair selection with the
product and chain criteria, content-normalized intermediate polynomials,
and a step budget so runaway computations abort with BudgetExceeded
instead of hanging.  Reduced bases are unique per (ideal, order), so
identical inputs give identical outputs.

Radical membership uses the auxiliary-variable trick: f lies in the
radical of <S> iff 1 lies in <S, 1 - t*f> for a fresh trailing t.  Two
exactness-preserving shortcuts run first: f is reduced modulo a basis of
<S> (answering True on remainder 0, or on a vanishing square), and a
variable w is divided out when every term of every input carries w to
the first power exactly (V(w*u_1,...) = V(w) u V(u_1,...)).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .budget import Budget, BudgetExceeded
from .polyring import (DEGREVLEX, ContextMismatchError, Monomial, MonomialOrder,
                       Polynomial, VarContext, mono_div, mono_divides, mono_lcm,
                       mono_mul)

__all__ = [
    "GroebnerBasis", "s_polynomial", "divide", "normal_form", "buchberger",
    "in_ideal", "in_radical", "all_in_radical", "is_zero_dimensional",
    "BudgetExceeded",
]


def _ratio(a, b) -> Fraction | int:
    # exact a/b for int|Fraction operands, int result demoted
    if isinstance(a, int) and isinstance(b, int):
        f = Fraction(a, b)
    else:
        f = Fraction(a) / Fraction(b)
    return f.numerator if f.denominator == 1 else f


def _neg_key(key: tuple) -> tuple:
    return tuple(-v for v in key)


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Groebner basis: monic, interreduced, sorted by leading
    monomial (ascending in the basis order)."""

    context: VarContext
    order: MonomialOrder
    generators: tuple[Polynomial, ...]

    @property
    def is_unit(self) -> bool:
        return len(self.generators) == 1 and self.generators[0].total_degree() == 0

    def normal_form(self, f: Polynomial, budget: Budget | None = None) -> Polynomial:
        return normal_form(f, self.generators, self.order, budget)

    def __contains__(self, f: Polynomial) -> bool:
        return self.normal_form(f).is_zero

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder = DEGREVLEX) -> Polynomial:
    lmf = f.leading_monomial(order)
    lmg = g.leading_monomial(order)
    l = mono_lcm(lmf, lmg)
    return (_term_mul(f, mono_div(l, lmf), _ratio(1, f.leading_coefficient(order)))
            - _term_mul(g, mono_div(l, lmg), _ratio(1, g.leading_coefficient(order))))


def _term_mul(p: Polynomial, mono: Monomial, coeff) -> Polynomial:
    return Polynomial(p.context, {mono_mul(e, mono): c * coeff for e, c in p.terms.items()})


def _reduce(f: Polynomial, gens: Sequence[Polynomial], order: MonomialOrder,
            budget: Budget | None, track: bool):
    """Full multivariate division.  Reducer choice is by list position, so
    the result is deterministic for a fixed generator list."""
    key = order.key
    reducers = [(g.leading_monomial(order), g.leading_coefficient(order), g)
                for g in gens if not g.is_zero]
    quotients = [dict() for _ in reducers] if track else None
    work = dict(f.terms)
    rem: dict = {}
    heap = [(_neg_key(key(m)), m) for m in work]
    heapq.heapify(heap)
    while heap:
        _, m = heapq.heappop(heap)
        c = work.pop(m, 0)
        if not c:
            continue
        for idx, (lm, lc, g) in enumerate(reducers):
            if mono_divides(lm, m):
                if budget is not None:
                    budget.tick()
                q = mono_div(m, lm)
                coef = _ratio(c, lc)
                for m2, c2 in g.terms.items():
                    if m2 == lm:
                        continue
                    mm = mono_mul(m2, q)
                    old = work.get(mm, 0)
                    new = old - coef * c2
                    if new:
                        work[mm] = new
                        if not old:
                            heapq.heappush(heap, (_neg_key(key(mm)), mm))
                    else:
                        work.pop(mm, None)
                if track:
                    quotients[idx][q] = quotients[idx].get(q, 0) + coef
                break
        else:
            rem[m] = c
    remainder = Polynomial(f.context, rem)
    if not track:
        return remainder
    return [Polynomial(f.context, qd) for qd in quotients], remainder


def normal_form(f: Polynomial, gens: Sequence[Polynomial],
                order: MonomialOrder = DEGREVLEX,
                budget: Budget | None = None) -> Polynomial:
    """Remainder of f on division by gens; zero iff f is in the ideal when
    gens is a Groebner basis."""
    return _reduce(f, gens, order, budget, track=False)


def divide(f: Polynomial, gens: Sequence[Polynomial],
           order: MonomialOrder = DEGREVLEX):
    """(quotients, remainder) with sum(q_i * g_i) + remainder == f exactly.
    Zero generators get a zero quotient."""
    nonzero = [g for g in gens if not g.is_zero]
    quots, rem = _reduce(f, nonzero, order, None, track=True)
    out = []
    it = iter(quots)
    for g in gens:
        out.append(next(it) if not g.is_zero else Polynomial.zero(f.context))
    return out, rem


def buchberger(gens: Sequence[Polynomial], order: MonomialOrder = DEGREVLEX,
               budget: Budget | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of <gens>.

    Normal strategy (minimal lcm in the order, ties by pair index), product
    and chain criteria, content division after every reduction, and an early
    exit to the basis {1} as soon as any reduction produces a nonzero
    constant.  budget.tick() runs once per treated pair.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("buchberger needs a nonempty generator list")
    ctx = gens[0].context
    for g in gens:
        if g.context != ctx:
            raise ContextMismatchError("generators must share one context")
    key = order.key

    def unit_basis() -> GroebnerBasis:
        return GroebnerBasis(ctx, order, (Polynomial.one(ctx),))

    G: list[Polynomial] = []
    lms: list[Monomial] = []
    for g in gens:
        if g.is_zero:
            continue
        if g.total_degree() == 0:
            return unit_basis()
        g = g.primitive_part(order)
        G.append(g)
        lms.append(g.leading_monomial(order))
    if not G:
        return GroebnerBasis(ctx, order, ())

    pq: list = []
    pending: set[tuple[int, int]] = set()

    def push_pairs(j: int):
        for i in range(j):
            heapq.heappush(pq, (key(mono_lcm(lms[i], lms[j])), i, j))
            pending.add((i, j))

    for j in range(len(G)):
        push_pairs(j)

    while pq:
        _, i, j = heapq.heappop(pq)
        if (i, j) not in pending:
            continue
        pending.discard((i, j))
        if budget is not None:
            budget.tick()
        lcm_ij = mono_lcm(lms[i], lms[j])
        if lcm_ij == mono_mul(lms[i], lms[j]):
            continue  # product criterion: coprime leading monomials
        skip = False
        for k in range(len(G)):
            if k == i or k == j or not mono_divides(lms[k], lcm_ij):
                continue
            a = (i, k) if i < k else (k, i)
            b = (j, k) if j < k else (k, j)
            if a not in pending and b not in pending:
                skip = True  # chain criterion: both companion pairs treated
                break
        if skip:
            continue
        r = normal_form(s_polynomial(G[i], G[j], order), G, order, budget)
        if r.is_zero:
            continue
        if r.total_degree() == 0:
            return unit_basis()
        r = r.primitive_part(order)
        G.append(r)
        lms.append(r.leading_monomial(order))
        push_pairs(len(G) - 1)

    # minimalize: drop generators whose leading monomial another one divides
    by_key = sorted(range(len(G)), key=lambda i: key(lms[i]))
    kept: list[int] = []
    for i in by_key:
        if not any(mono_divides(lms[k], lms[i]) for k in kept):
            kept.append(i)
    basis = [G[i] for i in kept]

    # interreduce tails until stable
    changed = True
    while changed:
        changed = False
        for idx in range(len(basis)):
            others = basis[:idx] + basis[idx + 1:]
            r = normal_form(basis[idx], others, order, budget)
            r = r.primitive_part(order)
            if r != basis[idx]:
                basis[idx] = r
                changed = True

    basis = [b.monic(order) for b in basis]
    basis.sort(key=lambda b: key(b.leading_monomial(order)))
    return GroebnerBasis(ctx, order, tuple(basis))


def in_ideal(f: Polynomial, basis: GroebnerBasis, budget: Budget | None = None) -> bool:
    return basis.normal_form(f, budget).is_zero


# ---------------------------------------------------------------------------
# Radical membership.

_SQUARE_TERM_CAP = 120  # skip the cheap square probe on huge remainders


def _strippable(polys: Iterable[Polynomial], arity: int) -> tuple[int, ...]:
    # variables carried to the first power exactly by every term everywhere
    cand = set(range(arity))
    for p in polys:
        for e in p.terms:
            cand = {i for i in cand if e[i] == 1}
            if not cand:
                return ()
    return tuple(sorted(cand))


def _strip(p: Polynomial, idxs: tuple[int, ...]) -> Polynomial:
    drop = set(idxs)
    return Polynomial(p.context, {
        tuple(0 if i in drop else e for i, e in enumerate(expo)): c
        for expo, c in p.terms.items()})


def _radical_member(f: Polynomial, basis: GroebnerBasis, order: MonomialOrder,
                    budget: Budget | None) -> bool:
    r = basis.normal_form(f, budget)
    if r.is_zero:
        return True
    if not basis.generators:
        return False  # zero ideal, nonzero f
    if len(r) <= _SQUARE_TERM_CAP and basis.normal_form(r * r, budget).is_zero:
        return True  # f^2 in <S> certainly puts f in the radical
    ctx_t = f.context.with_t()
    t = Polynomial.variable(ctx_t, ctx_t.t_name)
    gens_t = [g.extend_context(ctx_t) for g in basis.generators]
    gens_t.append(Polynomial.one(ctx_t) - t * r.extend_context(ctx_t))
    return buchberger(gens_t, order, budget).is_unit


def in_radical(f: Polynomial, S: Sequence[Polynomial],
               order: MonomialOrder = DEGREVLEX,
               budget: Budget | None = None) -> bool:
    """Exact membership of f in the radical of <S> (S nonempty)."""
    return all_in_radical([f], S, order, budget)


def all_in_radical(fs: Sequence[Polynomial], S: Sequence[Polynomial],
                   order: MonomialOrder = DEGREVLEX,
                   budget: Budget | None = None) -> bool:
    """True iff every f in fs lies in the radical of <S>.  The basis of <S>
    is computed once and shared; evaluation short-circuits on the first
    failure."""
    fs = list(fs)
    S = list(S)
    if not S:
        raise ValueError("all_in_radical needs a nonempty S")
    ctx = S[0].context
    idxs = _strippable(S + fs, ctx.arity)
    if idxs:
        S = [_strip(p, idxs) for p in S]
        fs = [_strip(p, idxs) for p in fs]
    basis = buchberger(S, order, budget)
    return all(_radical_member(f, basis, order, budget) for f in fs)


def is_zero_dimensional(basis: GroebnerBasis, names: Iterable[str] | None = None) -> bool:
    """Staircase test: every requested variable shows up as a pure power
    among the leading monomials (then only finitely many common zeros exist
    over the algebraic closure, projected to those coordinates)."""
    ctx = basis.context
    wanted = list(names) if names is not None else list(ctx.names)
    if not basis.generators:
        return not wanted
    if basis.is_unit:
        return True
    lms = [g.leading_monomial(basis.order) for g in basis.generators]
    for name in wanted:
        i = ctx.index(name)
        if not any(lm[i] > 0 and all(e == 0 for k, e in enumerate(lm) if k != i)
                   for lm in lms):
            return False
    return True
