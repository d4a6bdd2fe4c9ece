import random
from fractions import Fraction

import pytest

from loopsynth import (ContextMismatchError, ParseError, Polynomial,
                       VarContext, parse_polynomial,
                       DEGREVLEX, LEX, ELIM_LAST)
from loopsynth.polyring import as_rational, format_polynomial, fresh_name

CTX = VarContext(("x", "y", "z"))


def P(s, ctx=CTX):
    return parse_polynomial(s, ctx)


class TestContext:
    def test_blocks_and_order(self):
        ctx = VarContext(("x1", "x2"), ("y1",), "w")
        assert ctx.names == ("x1", "x2", "y1", "w")
        assert ctx.arity == 4
        assert "y1" in ctx and "q" not in ctx
        assert ctx.index("w") == 3

    def test_duplicate_names_rejected(self):
        with pytest.raises(ValueError):
            VarContext(("x", "x"))
        with pytest.raises(ValueError):
            VarContext(("x",), ("x",))

    def test_with_t_avoids_clashes(self):
        ctx = VarContext(("t", "t_"))
        ext = ctx.with_t()
        assert ext.t_name == "t__"
        assert ext.names == ("t", "t_", "t__")

    def test_restrict_keeps_roles(self):
        ctx = VarContext(("x1",), ("y1", "y2"), "z")
        sub = ctx.restrict(("y1", "y2"))
        assert sub.names == ("y1", "y2")
        assert sub.y_names == ("y1", "y2")
        assert sub.z_name is None

    def test_fresh_name(self):
        assert fresh_name("z", ("x",)) == "z"
        assert fresh_name("z", ("z", "z_")) == "z__"


class TestRationalBoundary:
    def test_accepts_int_fraction_string(self):
        assert as_rational(3) == 3
        assert as_rational(Fraction(1, 2)) == Fraction(1, 2)
        assert as_rational("-7/2") == Fraction(-7, 2)

    def test_rejects_float_and_bool(self):
        with pytest.raises(TypeError):
            as_rational(0.5)
        with pytest.raises(TypeError):
            as_rational(True)

    def test_polynomial_rejects_float_coeff(self):
        with pytest.raises(TypeError):
            Polynomial(CTX, {(1, 0, 0): 0.5})


class TestArithmetic:
    def test_hand_sum(self):
        assert P("x^2 + 2*x*y") + P("x*y - 3") == P("x^2 + 3*x*y - 3")

    def test_hand_product(self):
        assert P("x + y") * P("x - y") == P("x^2 - y^2")
        assert P("x + 1") * P("x + 2") == P("x^2 + 3*x + 2")

    def test_cancellation_drops_terms(self):
        q = P("x*y + 1") - P("x*y")
        assert q == 1 and len(q) == 1

    def test_cross_term_cancellation_in_product(self):
        # (x+y)(x-y): the x*y monomial appears twice and sums to zero
        q = P("x + y") * P("x - y")
        assert (1, 1, 0) not in q.terms

    def test_scalar_ops(self):
        assert P("x") * Fraction(1, 2) == P("x/2")
        assert P("3*x") / 3 == P("x")
        assert 2 - P("x") == P("2 - x")

    def test_pow(self):
        assert P("x + y") ** 3 == P("x^3 + 3*x^2*y + 3*x*y^2 + y^3")
        assert P("x") ** 0 == 1
        with pytest.raises(ValueError):
            P("x") ** -1

    def test_zero_degree_conventions(self):
        assert Polynomial.zero(CTX).total_degree() == -1
        assert P("5").total_degree() == 0
        assert P("x*y^2").total_degree() == 3
        assert P("x*y^2").degree_in("y") == 2

    def test_context_mismatch(self):
        other = VarContext(("x", "y"))
        with pytest.raises(ContextMismatchError):
            P("x") + parse_polynomial("x", other)

    def test_immutable(self):
        p = P("x")
        with pytest.raises(AttributeError):
            p.terms = {}


class TestOrders:
    def test_degrevlex_leading(self):
        # x^2*y vs x*y^2: degrevlex prefers the one with lower last exponent
        assert P("x^2*y + x*y^2").leading_monomial(DEGREVLEX) == (2, 1, 0)
        assert P("x*z + y^2").leading_monomial(DEGREVLEX) == (0, 2, 0)

    def test_lex_leading(self):
        assert P("x*z + y^2").leading_monomial(LEX) == (1, 0, 1)

    def test_elim_last_groups_by_trailing_variable(self):
        # any power of z dominates everything without z
        assert P("x^5 + z").leading_monomial(ELIM_LAST) == (0, 0, 1)
        assert P("x^5 + y").leading_monomial(ELIM_LAST) == (5, 0, 0)

    def test_keys_are_total(self):
        monos = [(2, 1, 0), (1, 2, 0), (0, 0, 3), (3, 0, 0), (1, 1, 1)]
        for order in (DEGREVLEX, LEX, ELIM_LAST):
            keys = [order.key(m) for m in monos]
            assert len(set(keys)) == len(monos)


class TestEvaluateSubstituteCompose:
    def test_evaluate_exact(self):
        p = P("x^2*y - z/2")
        v = p.evaluate({"x": Fraction(1, 2), "y": 4, "z": 1})
        assert v == Fraction(1, 2)

    def test_substitute_partial(self):
        p = P("x^2*y + z")
        q = p.substitute({"x": 2})
        assert q.context.names == ("y", "z")
        assert q == parse_polynomial("4*y + z", q.context)

    def test_substitute_all_yields_constant(self):
        q = P("x + y + z").substitute({"x": 1, "y": 2, "z": 3})
        assert q.constant_value() == 6

    def test_compose_known(self):
        ctx = VarContext(("x1", "x2"))
        g = parse_polynomial("x1^2 - x2^2 + x1*x2", ctx)
        F = [parse_polynomial("2*x1 - 3*x2", ctx),
             parse_polynomial("x1 + x2", ctx)]
        gF = g.compose(F)
        assert gF == parse_polynomial("5*x1^2 - 15*x1*x2 + 5*x2^2", ctx)
        gFF = gF.compose(F)
        assert gFF == parse_polynomial("-5*x1^2 - 35*x1*x2 + 95*x2^2", ctx)

    def test_compose_evaluate_homomorphism(self):
        rng = random.Random(7)
        ctx = VarContext(("x1", "x2"))
        g = parse_polynomial("x1^3 - 2*x1*x2 + 7", ctx)
        F = [parse_polynomial("x1*x2 - 1", ctx),
             parse_polynomial("x2^2 + x1", ctx)]
        gF = g.compose(F)
        for _ in range(25):
            pt = {"x1": rng.randint(-5, 5), "x2": rng.randint(-5, 5)}
            mid = {"x1": F[0].evaluate(pt), "x2": F[1].evaluate(pt)}
            assert gF.evaluate(pt) == g.evaluate(mid)

    def test_extend_context(self):
        small = VarContext(("x", "y"))
        big = VarContext(("x", "y"), ("u",))
        p = parse_polynomial("x*y - 2", small).extend_context(big)
        assert p.context is big
        assert p == parse_polynomial("x*y - 2", big)


class TestContentPrimitive:
    def test_content(self):
        assert P("6*x + 9*y").content() == 3
        assert P("x/2 + y/3").content() == Fraction(1, 6)

    def test_primitive_part_sign(self):
        p = P("-4*x^2 + 6*y")
        q = p.primitive_part()
        assert q == P("2*x^2 - 3*y")

    def test_monic(self):
        assert P("3*x + 6").monic() == P("x + 2")


class TestFormat:
    @pytest.mark.parametrize("text", [
        "0", "1", "-1", "x", "-x", "3*x^2*y - 1/2",
        "x^2 - 15*x*y + 5*y^2", "y^3 + x - y", "x*y*z - x - 1",
    ])
    def test_round_trip(self, text):
        p = P(text)
        assert P(str(p)) == p

    def test_golden_strings(self):
        assert str(P("y + x")) == "x + y"
        assert str(P("- x*y*3 + 1/2")) == "-3*x*y + 1/2"
        assert str(Polynomial.zero(CTX)) == "0"
        assert format_polynomial(P("x + z^5")) == "z^5 + x"

    def test_random_round_trip(self):
        rng = random.Random(20240817)
        for _ in range(150):
            terms = {}
            for _ in range(rng.randint(1, 6)):
                mono = tuple(rng.randint(0, 3) for _ in range(3))
                c = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
                if c:
                    terms[mono] = c
            p = Polynomial(CTX, terms)
            assert P(str(p)) == p


class TestParser:
    def test_explicit_multiplication_required(self):
        with pytest.raises(ParseError):
            P("2x")

    def test_power_must_be_nonneg_int(self):
        with pytest.raises(ParseError):
            P("x^-1")
        with pytest.raises(ParseError):
            P("x^y")

    def test_unknown_variable_position(self):
        with pytest.raises(ParseError) as exc:
            P("x + w^2")
        assert exc.value.line == 1 and exc.value.col == 5
        assert "w" in exc.value.message

    def test_multiline_position(self):
        with pytest.raises(ParseError) as exc:
            P("x +\n  )")
        assert exc.value.line == 2 and exc.value.col == 3

    def test_division_only_between_integers(self):
        assert P("3/4*x") == P("x*3/4")
        with pytest.raises(ParseError):
            P("x/y")

    def test_parenthesized_expressions(self):
        assert P("(x + y)^2") == P("x^2 + 2*x*y + y^2")
        assert P("-(x - y)*(x + y)") == P("y^2 - x^2")

    def test_unbalanced(self):
        with pytest.raises(ParseError):
            P("(x + y")
        with pytest.raises(ParseError):
            P("x + y)")


class TestRingAxioms:
    def rand_poly(self, rng):
        terms = {}
        for _ in range(rng.randint(0, 4)):
            mono = tuple(rng.randint(0, 2) for _ in range(3))
            terms[mono] = terms.get(mono, 0) + Fraction(rng.randint(-6, 6),
                                                        rng.randint(1, 4))
        return Polynomial(CTX, {m: c for m, c in terms.items() if c})

    def test_axioms_random(self):
        rng = random.Random(99)
        for _ in range(200):
            a, b, c = (self.rand_poly(rng) for _ in range(3))
            assert a + b == b + a
            assert a * b == b * a
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a + Polynomial.zero(CTX) == a
            assert a * Polynomial.one(CTX) == a
            assert a - a == Polynomial.zero(CTX)
