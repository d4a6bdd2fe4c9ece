import random

import pytest

from loopsynth import (Budget, BudgetExceeded, Polynomial, VarContext,
                       all_in_radical, buchberger, divide, in_ideal,
                       in_radical, is_zero_dimensional, normal_form,
                       parse_polynomial, s_polynomial, DEGREVLEX, LEX)

CTX = VarContext(("x", "y", "z"))


def P(s, ctx=CTX):
    return parse_polynomial(s, ctx)


def spolys_reduce_to_zero(basis):
    gens = list(basis)
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            s = s_polynomial(gens[i], gens[j], basis.order)
            if not normal_form(s, gens, basis.order).is_zero:
                return False
    return True


class TestDivision:
    def test_normal_form_hand(self):
        gens = [P("x - y"), P("y^2 - 1")]
        assert normal_form(P("x^2"), gens) == P("1")
        assert normal_form(P("x*y + y"), gens) == P("y + 1")

    def test_divide_identity_exact(self):
        rng = random.Random(3)
        gens = [P("x^2 + y"), P("x*y - z"), P("z^2 - y")]
        for _ in range(30):
            terms = {tuple(rng.randint(0, 3) for _ in range(3)):
                     rng.randint(-8, 8) for _ in range(5)}
            f = Polynomial(CTX, terms)
            qs, r = divide(f, gens)
            recombined = sum((q * g for q, g in zip(qs, gens)),
                             Polynomial.zero(CTX)) + r
            assert recombined == f
            # no term of r is divisible by any leading monomial
            for g in gens:
                lm = g.leading_monomial()
                assert all(any(e < l for e, l in zip(m, lm)) for m in r.terms)

    def test_s_polynomial_cancels_leads(self):
        f, g = P("x^2 + y"), P("x*y + z")
        s = s_polynomial(f, g)
        assert s == P("y^2 - x*z")


class TestBuchberger:
    def test_twisted_cubic_lex(self):
        gb = buchberger([P("y - x^2"), P("z - x^3")], LEX)
        assert set(gb) == {P("x^2 - y"), P("x*y - z"),
                           P("x*z - y^2"), P("y^3 - z^2")}

    def test_unit_ideal(self):
        gb = buchberger([P("x"), P("x + 1")])
        assert gb.is_unit
        assert list(gb) == [Polynomial.one(CTX)]

    def test_single_generator(self):
        gb = buchberger([P("2*x^2 - 4*y")])
        assert list(gb) == [P("x^2 - 2*y")]

    def test_deterministic_under_shuffle(self):
        gens = [P("x^2 + y^2 + z^2 - 1"), P("x*y - z"), P("x - y + z")]
        reference = list(buchberger(gens))
        rng = random.Random(11)
        for _ in range(6):
            shuffled = gens[:]
            rng.shuffle(shuffled)
            assert list(buchberger(shuffled)) == reference

    def test_buchberger_criterion_on_random_bases(self):
        rng = random.Random(5)
        for _ in range(15):
            gens = []
            for _ in range(rng.randint(1, 3)):
                terms = {tuple(rng.randint(0, 2) for _ in range(3)):
                         rng.randint(-4, 4) for _ in range(3)}
                p = Polynomial(CTX, terms)
                if not p.is_zero:
                    gens.append(p)
            if not gens:
                continue
            basis = buchberger(gens)
            assert spolys_reduce_to_zero(basis)
            for g in gens:
                assert in_ideal(g, basis)

    def test_rejects_empty_input(self):
        with pytest.raises(ValueError):
            buchberger([])

    def test_budget_raises(self):
        gens = [P("x^3*y^2 - z"), P("x*y^4 + y*z^2 - 1"), P("x^2*z^3 - y")]
        with pytest.raises(BudgetExceeded):
            buchberger(gens, DEGREVLEX, Budget(max_steps=2))


class TestIdealMembership:
    def test_in_ideal(self):
        basis = buchberger([P("x - y"), P("y^2 - 1")])
        assert in_ideal(P("x^2 - 1"), basis)
        assert in_ideal(P("x*y^2 - x"), basis)
        assert not in_ideal(P("x + 1"), basis)
        assert P("x^2 - y^2") in basis


class TestRadical:
    def test_nilpotent_cases(self):
        assert in_radical(P("x"), [P("x^2")])
        assert in_radical(P("x*y"), [P("x^3*y^2")])
        assert not in_radical(P("x + 1"), [P("x^2")])
        assert not in_radical(P("y"), [P("x")])

    def test_needs_rabinowitsch(self):
        # (x+y)^4 lands in the ideal only radically
        assert in_radical(P("x + y"), [P("(x + y)^4 + z"), P("z")])

    def test_one_not_in_proper_radical(self):
        assert not in_radical(P("1"), [P("x*y - 1")])

    def test_all_in_radical_batch(self):
        S = [P("x*y"), P("x*z")]
        assert all_in_radical([P("x^2*y"), P("x^2*z^3")], S)
        assert not all_in_radical([P("x^2*y"), P("y*z")], S)

    def test_flag_variable_strip_agrees_with_direct(self):
        # radical membership of w*f in <w*g_i> equals membership of f in
        # <g_i> when w appears to power exactly 1 everywhere
        ctx = VarContext(("x", "y"), (), "w")
        Q = lambda s: parse_polynomial(s, ctx)
        rng = random.Random(17)
        pool = ["x", "y", "x + y", "x^2", "x*y - 1", "y^2 + x", "x - 1"]
        for _ in range(40):
            gs = [rng.choice(pool) for _ in range(rng.randint(1, 3))]
            f = rng.choice(pool)
            base_ctx = VarContext(("x", "y"))
            direct = in_radical(parse_polynomial(f, base_ctx),
                                [parse_polynomial(g, base_ctx) for g in gs])
            flagged = all_in_radical([Q(f) * Q("w")],
                                     [Q(g) * Q("w") for g in gs])
            assert flagged == direct


class TestZeroDimensional:
    def test_point_ideal(self):
        assert is_zero_dimensional(buchberger([P("x - 1"), P("y + 2"), P("z")]))

    def test_positive_dimension(self):
        assert not is_zero_dimensional(buchberger([P("x - y")]))

    def test_unit_is_zero_dimensional(self):
        assert is_zero_dimensional(buchberger([P("x"), P("x - 1")]))

    def test_staircase_with_mixed_leads(self):
        gb = buchberger([P("x^2"), P("x*y"), P("y^3"), P("z - 1")])
        assert is_zero_dimensional(gb)

    def test_subset_of_variables(self):
        ctx = VarContext(("u", "v"))
        gb = buchberger([parse_polynomial("u^2 - 1", ctx)])
        assert is_zero_dimensional(gb, names=["u"])
        assert not is_zero_dimensional(gb, names=["u", "v"])
