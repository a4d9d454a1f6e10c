import json
import math
import random
from fractions import Fraction

import pytest

from leopoldt import independence
from leopoldt.arith import ZpFixed, make_field
from leopoldt.chars import conductor, enumerate_chars, euler_phi
from leopoldt.errors import HypothesisViolated, InvalidParameter
from leopoldt.independence import (PseudoPoly, UnitExpr, char_matrix_kernel, corrupt, eigencomponent_split,
                                   is_pseudo_poly_rational, qstar_class, sinnott_check, telescope,
                                   telescope_instance, truncated_independence, vandermonde_squares_det)
from leopoldt.iwasawa import make_context
from leopoldt.pseries import RationalFn, binomial_power, op_D

F3, F5, F7, F9 = make_field(3), make_field(5), make_field(7), make_field(3, 2)


def test_is_pseudo_poly_rational_examples():
    den = [math.comb(5, k) for k in range(6)]
    assert is_pseudo_poly_rational(RationalFn(F7, [3, 1], den)) == (True, 5)
    assert is_pseudo_poly_rational(RationalFn(F7, [1], [0, 1])) == (False, None)
    for p, d in [(5, 3), (7, 4), (3, 5)]:
        ctx = make_field(p)
        one_minus = [1 - math.comb(d, 0)] + [-math.comb(d, k) for k in range(1, d + 1)]
        assert is_pseudo_poly_rational(RationalFn(ctx, [1], one_minus))[0] is False
    assert is_pseudo_poly_rational(RationalFn(F5, [1, 2, 3])) == (True, 0)
    # a common factor (1+T) cancels before the test
    assert is_pseudo_poly_rational(RationalFn(F5, [1, 1], [1, 2, 1])) == (True, 1)


def test_qstar_examples():
    p = 7
    one = UnitExpr(p, Fraction(1), 0)
    assert qstar_class(UnitExpr(p, Fraction(1), 0, b=2)) == qstar_class(one)
    assert qstar_class(UnitExpr(p, Fraction(1), (p - 1) // 2)) == qstar_class(one)
    assert qstar_class(UnitExpr(p, Fraction(1), 0, sign=-1)) == qstar_class(one)
    assert qstar_class(UnitExpr(p, Fraction(1), 1)) != qstar_class(one)
    assert qstar_class(UnitExpr(p, Fraction(3, 2), 0)) == qstar_class(one)
    with pytest.raises(InvalidParameter):
        UnitExpr(p, Fraction(7), 0)
    with pytest.raises(InvalidParameter):
        UnitExpr(p, Fraction(-1), 0)


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_qstar_class_is_a_congruence(p):
    rng = random.Random(p)
    for _ in range(200):
        u, v = independence.random_unit(p, rng), independence.random_unit(p, rng)
        half = (p - 1) // 2
        assert qstar_class(u * v) == (qstar_class(u) + qstar_class(v)) % half


@pytest.mark.parametrize("p", [5, 7])
def test_qstar_matches_value_ratio(p):
    # u ~ v iff (u/v)^2 is a rational number times a power of kappa0: the
    # omega-part of u/v must be +-1, visible in the values mod p
    rng = random.Random(3 * p)
    for _ in range(100):
        u, v = independence.random_unit(p, rng), independence.random_unit(p, rng)
        ratio = (u.value(3) * v.value(3).inverse()).residue
        rat = (u.rational / v.rational)
        rat_mod = rat.numerator * pow(rat.denominator, -1, p) % p
        omega_part = ratio * pow(rat_mod, -1, p) % p
        assert (qstar_class(u) == qstar_class(v)) == (omega_part in (1, p - 1))


def test_unit_value():
    u = UnitExpr(5, Fraction(1), 0, b=1)
    assert u.value(3, kappa0=6).residue == 6
    w = UnitExpr(5, Fraction(1), 2)  # omega(2)^2 = -1
    assert w.value(3).residue == 124


def test_sinnott_telescope():
    ctx = F5
    r = RationalFn(ctx, [1, 2], [1, 0, 3])
    c = UnitExpr(5, Fraction(2), 1)
    rep = sinnott_check(telescope(r, c, 3))
    assert rep["verdict"] and len(rep["classes"]) == 1
    assert rep["classes"][0]["value"] == [0]
    with pytest.raises(InvalidParameter):
        telescope(r, c, 5)


def test_sinnott_constant_terms_in_two_classes():
    c1, c2 = UnitExpr(7, Fraction(1), 0), UnitExpr(7, Fraction(1), 1)
    inst = [(RationalFn(F7, [3]), c1), (RationalFn(F7, [-3]), c2)]
    rep = sinnott_check(inst)
    assert rep["verdict"] and [k["value"] for k in rep["classes"]] == [[3], [4]]


def test_sinnott_refuses_nonzero_hypothesis():
    inst = [(RationalFn(F5, [0, 1]), UnitExpr(5, Fraction(1), 0))]
    with pytest.raises(HypothesisViolated):
        sinnott_check(inst)


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("classes", [1, 2])
def test_sinnott_generated_instances(p, classes):
    ctx = make_field(p)
    rng = random.Random(p * 10 + classes)
    for _ in range(25):
        inst = telescope_instance(ctx, rng, classes)
        rep = sinnott_check(inst)
        assert rep["verdict"]
        bad = corrupt(inst, rng)
        try:
            assert not sinnott_check(bad)["verdict"]
        except HypothesisViolated:
            pass


def test_char_matrix_example():
    chars = [c for c in enumerate_chars(5, F9) if conductor(c) == 5]
    rep = char_matrix_kernel(3, 5, chars)
    assert rep["rank_C"] == 4 and rep["ker_C_basis_verified"] and rep["ker_B_trivial"]
    assert rep["phi_d"] == 4


@pytest.mark.parametrize("p,d", [(3, 4), (3, 5), (5, 3), (5, 4), (5, 7), (7, 8)])
def test_char_matrix_rank(p, d):
    ctx = make_context(p, d).ctx
    chars = [c for c in enumerate_chars(d, ctx) if conductor(c) == d]
    rep = char_matrix_kernel(p, d, chars)
    assert rep["rank_C"] == euler_phi(d)
    assert rep["ker_C_basis_verified"] and rep["ker_B_trivial"]


def test_char_matrix_duplicates():
    c = [c for c in enumerate_chars(5, F9) if conductor(c) == 5][0]
    with pytest.raises(HypothesisViolated):
        char_matrix_kernel(3, 5, [c, c])
    rep = char_matrix_kernel(3, 5, [c, c], check=False)
    assert not rep["ker_B_trivial"] and rep["ker_B_dim"] == 1
    with pytest.raises(HypothesisViolated):
        char_matrix_kernel(3, 5, enumerate_chars(5, F9)[:1])  # trivial character, conductor 1


def test_vandermonde_examples():
    assert vandermonde_squares_det(3) == 1
    assert vandermonde_squares_det(5) == 3
    assert vandermonde_squares_det(7) == 1


def test_vandermonde_product_formula():
    for p in [q for q in range(3, 98) if all(q % r for r in range(2, q))]:
        alphas = [a * a % p for a in range(1, (p - 1) // 2 + 1)]
        prod = 1
        for s in range(len(alphas)):
            for r in range(s):
                prod = prod * (alphas[s] - alphas[r]) % p
        det = vandermonde_squares_det(p)
        assert det == prod and det != 0


def test_eigencomponent_examples():
    H = PseudoPoly(F3, [(2, 1), (3, 1)])
    assert eigencomponent_split(H, 2) == PseudoPoly(F3, [(2, 1)])
    P = PseudoPoly(F5, [(5, 1)])
    assert eigencomponent_split(P, 0) == P
    with pytest.raises(InvalidParameter):
        eigencomponent_split(PseudoPoly(F5, [(ZpFixed(5, 3, 7), 1)]), 2)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_eigencomponents(p):
    ctx = make_field(p)
    rng = random.Random(p)
    N = 3 * p
    for _ in range(10):
        H = PseudoPoly(ctx, [(rng.randrange(-20, 40), rng.randrange(1, p)) for _ in range(6)])
        parts = [eigencomponent_split(H, b) for b in range(p)]
        total = PseudoPoly(ctx)
        for part in parts:
            total = total + part
        assert total == H
        for b, part in enumerate(parts):
            X = part.expand(N)
            assert op_D(X) == X.truncate(N - 1).scale(b)


def test_pseudo_poly_ring():
    rng = random.Random(9)
    N = 30

    def rand():
        return PseudoPoly(F5, [(rng.randrange(-3, 4), rng.randrange(5)) for _ in range(3)])

    for _ in range(20):
        a, b, c = rand(), rand(), rand()
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert (a * b).expand(N) == a.expand(N) * b.expand(N)
        assert (a - a).is_zero()
    x, y = ZpFixed(5, 4, 7), ZpFixed(5, 4, 13)
    lhs = PseudoPoly.monomial(F5, x) * PseudoPoly.monomial(F5, y)
    assert lhs == PseudoPoly.monomial(F5, x + y)
    assert lhs.expand(N) == binomial_power(F5, 20, N)
    json.dumps(lhs.to_json())


def test_truncated_independence_examples():
    rep = truncated_independence(5, 1, m=2)
    assert rep["rank"] == rep["expected_rank"] == 3
    assert rep["verdict"] == "consistent-with-independence"
    assert rep["levels"][-1]["kernel_dim"] == 0
    rep = truncated_independence(3, 5, [1, 2, 3], m=2)
    assert rep["rank"] == 4 and rep["verdict"] == "consistent-with-independence"
    assert set(rep) == {"check", "params", "rank", "expected_rank", "kernel_dim", "levels", "witnesses",
                        "verdict"}
    json.dumps(rep)


def test_truncated_independence_refusals():
    with pytest.raises(HypothesisViolated):
        truncated_independence(3, 5, [1, 1], m=2)
    with pytest.raises(HypothesisViolated):
        truncated_independence(3, 5, [0], m=2)
    with pytest.raises(InvalidParameter):
        truncated_independence(3, 5, [], m=2)


def test_planted_relation_persists(monkeypatch):
    # duplicating a family member is a genuine relation; it must survive every level
    original = independence._family

    def doubled(*args):
        fam = original(*args)
        return fam + [fam[-1]]

    monkeypatch.setattr(independence, "_family", doubled)
    rep = truncated_independence(5, 1, m=2, exponents=[0, 1])
    assert rep["verdict"] == "persisted-relation"
    assert rep["witnesses"] and all(lv["kernel_dim"] > 0 for lv in rep["levels"])


def test_exponent_dedupe():
    rep = truncated_independence(5, 1, m=2, exponents=[0, 25, 1, 26])
    assert rep["params"]["exponents"] == [0, 1]
