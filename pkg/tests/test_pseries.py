import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from leopoldt.arith import ZpFixed, make_field, teichmuller
from leopoldt.errors import NotAPowerSeries, PrecisionError
from leopoldt.independence import PseudoPoly
from leopoldt.iwasawa import make_context
from leopoldt.pseries import (RationalFn, TruncSeries, binomial_power, compose_unit_exponent, div_exact,
                              expand_rational, from_x_basis, involution, mul_trunc, op_D, op_gamma, op_U,
                              op_U_projection, t_act, taylor_shift)

F3, F5, F7, F9 = make_field(3), make_field(5), make_field(7), make_field(3, 2)


def series(ctx, values, prec=None):
    return TruncSeries.from_list(ctx, values, prec)


def binom_poly(k, p, prec):
    # (1+T)^k for integer k >= 0 straight from math.comb
    return [math.comb(k, i) % p for i in range(prec)]


def schoolbook(ctx, a, b, n):
    # O(N^2) product over F_q using FqElem arithmetic only
    out = [ctx.zero() for _ in range(n)]
    for i in range(n):
        for j in range(n - i):
            out[i + j] = out[i + j] + a.coeff(i) * b.coeff(j)
    return out


def test_mul_examples():
    F = series(F5, [1, 2, 3, 4])
    assert F * TruncSeries.one(F5, 4) == F
    assert mul_trunc(series(F3, [1, 1, 0]), series(F3, [1, -1, 0])) == series(F3, [1, 0, -1])
    assert (series(F5, [1, 1], 5) * series(F5, [1, 1], 3)).prec == 3


@pytest.mark.parametrize("ctx", [F3, F5, F9], ids=["F3", "F5", "F9"])
def test_mul_against_schoolbook(ctx):
    rng = np.random.default_rng(1)
    for n in (1, 7, 30):
        a, b = TruncSeries.random(ctx, n, rng), TruncSeries.random(ctx, n, rng)
        assert list((a * b).codes()) == [x.code for x in schoolbook(ctx, a, b, n)]


def test_large_product_matches_schoolbook_prefix():
    # the FFT path kicks in above a few thousand terms
    rng = np.random.default_rng(2)
    a, b = TruncSeries.random(F7, 5000, rng), TruncSeries.random(F7, 5000, rng)
    prod = a * b
    head = schoolbook(F7, a.truncate(60), b.truncate(60), 60)
    assert list(prod.truncate(60).codes()) == [x.code for x in head]


def test_div_examples():
    T2, T = TruncSeries.monomial(F5, 2, 6), TruncSeries.monomial(F5, 1, 6)
    assert div_exact(T2, T) == TruncSeries.monomial(F5, 1, 5)
    q = div_exact(series(F5, [1, 0, -1, 0]), series(F5, [1, -1, 0, 0]))
    assert q == series(F5, [1, 1, 0, 0])
    num = series(F3, [a - b for a, b in zip(binom_poly(1, 3, 4), binom_poly(3, 3, 4))])
    den = series(F3, [a - b for a, b in zip([1, 0, 0, 0], binom_poly(4, 3, 4))])
    assert div_exact(num, den).coeff(0) == 2
    with pytest.raises(NotAPowerSeries):
        div_exact(T, T2)


@pytest.mark.parametrize("ctx", [F5, F9], ids=["F5", "F9"])
def test_div_inverts_mul(ctx):
    rng = np.random.default_rng(3)
    for n in (5, 40, 200):
        G = TruncSeries.random(ctx, n, rng)
        if G.coeff(0) == 0:
            G = G + TruncSeries.one(ctx, n)
        H = TruncSeries.random(ctx, n, rng)
        assert div_exact(H * G, G) == H


def test_div_long_sparse_divisor():
    rng = np.random.default_rng(4)
    n = 400
    G = TruncSeries.from_list(F5, [1, -1], n) * TruncSeries.from_list(F5, [1] + [0] * 9 + [2], n)
    H = TruncSeries.random(F5, n, rng)
    assert div_exact(H * G, G) == H


def test_taylor_shift_examples():
    assert taylor_shift(series(F5, [1, 1, 1])) == [1, -1, 1]
    for k in range(6):
        mu = taylor_shift(series(F7, binom_poly(k, 7, 6)))
        assert mu == [1 if b == k else 0 for b in range(6)]


@pytest.mark.parametrize("ctx,n", [(F3, 10), (F5, 26), (F9, 9), (F7, 50)])
def test_taylor_shift_round_trip(ctx, n):
    F = TruncSeries.random(ctx, n, np.random.default_rng(n))
    assert from_x_basis(ctx, taylor_shift(F), n) == F


def test_taylor_shift_against_binomial_oracle():
    # mu_b = sum_k a_k C(k, b) (-1)^(k-b)
    p, n = 5, 12
    F = TruncSeries.random(F5, n, np.random.default_rng(5))
    a = [int(x) for x in F.codes()]
    mu = [sum(a[k] * math.comb(k, b) * (-1) ** (k - b) for k in range(b, n)) % p for b in range(n)]
    assert taylor_shift(F) == mu


def test_compose_examples():
    T = TruncSeries.monomial(F5, 1, 6)
    assert compose_unit_exponent(T, -1) == series(F5, [0, -1, 1, -1, 1, -1])
    assert compose_unit_exponent(T, 5) == TruncSeries.monomial(F5, 5, 6)
    w2 = teichmuller(2, 5, 2)
    assert w2.residue == 7
    assert compose_unit_exponent(TruncSeries.monomial(F5, 1, 5), w2) == series(F5, [0, 2, 1, 0, 0])
    with pytest.raises(PrecisionError):
        compose_unit_exponent(TruncSeries.monomial(F5, 1, 30), ZpFixed(5, 1, 2))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_compose_integer_matches_polynomial_composition(p):
    ctx = make_field(p)
    n = p * p + 3
    F = TruncSeries.random(ctx, n, np.random.default_rng(p))
    for k in (2, 3, p + 1, 2 * p - 1):
        g = series(ctx, [0] + binom_poly(k, p, n)[1:])
        acc = TruncSeries.zero(ctx, n)
        power = TruncSeries.one(ctx, n)
        for i in range(n):
            acc = acc + power.scale(F.coeff(i))
            power = power * g
        assert compose_unit_exponent(F, k) == acc


@pytest.mark.parametrize("p", [3, 5])
def test_binomial_power_agrees_with_compose(p):
    ctx = make_field(p)
    n = p ** 3
    T = TruncSeries.monomial(ctx, 1, n)
    for c in (-1, 2, p + 2, ZpFixed(p, 4, 1 + p + 3 * p * p)):
        lhs = binomial_power(ctx, c, n) - TruncSeries.one(ctx, n)
        assert lhs == compose_unit_exponent(T, c)


def test_compose_is_multiplicative_in_exponent():
    rng = np.random.default_rng(6)
    F = TruncSeries.random(F5, 40, rng)
    for a, b in [(2, 3), (-1, 7), (6, 11)]:
        assert compose_unit_exponent(compose_unit_exponent(F, a), b) == compose_unit_exponent(F, a * b)


def test_op_D_examples():
    assert op_D(TruncSeries.one(F5, 4)).is_zero()
    assert op_D(TruncSeries.monomial(F5, 1, 4)) == series(F5, [1, 1, 0])
    cube = series(F7, binom_poly(3, 7, 5))
    assert op_D(cube) == cube.truncate(4).scale(3)
    with pytest.raises(PrecisionError):
        op_D(TruncSeries.one(F5, 1))


def test_op_U_examples():
    p = 5
    assert op_U(TruncSeries.one(F5, 10)).is_zero()
    assert op_U(series(F5, binom_poly(p, p, 10))).is_zero()
    sq = series(F5, binom_poly(2, p, p + 2))
    assert op_U(sq) == sq.truncate(3)
    with pytest.raises(PrecisionError):
        op_U(TruncSeries.one(F5, 4))


@pytest.mark.parametrize("ctx", [F3, F5, F7, F9], ids=["F3", "F5", "F7", "F9"])
def test_op_U_matches_projection(ctx):
    p = ctx.p
    F = TruncSeries.random(ctx, p * p + p, np.random.default_rng(p))
    U = op_U(F)
    assert U == op_U_projection(F).truncate(U.prec)


def test_op_gamma_example():
    assert op_gamma(0, series(F3, [1, 1, 0])) == series(F3, [1, 0, 2])


@pytest.mark.parametrize("ctx", [F3, F5, F7], ids=["F3", "F5", "F7"])
def test_op_gamma_idempotents(ctx):
    p = ctx.p
    F = TruncSeries.random(ctx, p * p + p, np.random.default_rng(10 + p))
    parts = [op_gamma(delta, F) for delta in range(p - 1)]
    total = TruncSeries.zero(ctx, F.prec)
    for part in parts:
        total = total + part
    assert total == F
    for i, part in enumerate(parts):
        for j in range(p - 1):
            image = op_gamma(j, part)
            assert image == part if i == j else image.is_zero()


def test_op_gamma_against_direct_sum():
    # -(sum_eta eta^delta F((1+T)^eta - 1)) with explicit lifts
    p, n = 5, 20
    F = TruncSeries.random(F5, n, np.random.default_rng(11))
    for delta in range(p - 1):
        acc = TruncSeries.zero(F5, n)
        for a in range(1, p):
            acc = acc + compose_unit_exponent(F, teichmuller(a, p, 3)).scale(pow(a, delta, p))
        assert op_gamma(delta, F) == -acc


def test_involution_examples():
    T = TruncSeries.monomial(F5, 1, 5)
    assert involution(T) == series(F5, [0, -1, 1, -1, 1])
    assert involution(TruncSeries.one(F5, 5)) == TruncSeries.one(F5, 5)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([3, 5, 7]), st.integers(1, 60), st.integers(0, 2 ** 32 - 1))
def test_involution_is_involution(p, n, seed):
    F = TruncSeries.random(make_field(p), n, np.random.default_rng(seed))
    assert involution(involution(F)) == F


def test_t_act_examples():
    ictx = make_context(5, 1)
    T = TruncSeries.monomial(F5, 1, 5)
    assert t_act(PseudoPoly(F5, [(0, 1)]), T, ictx) == T
    H = PseudoPoly(F5, [(1, 1), (0, 1)])
    expected = series(F5, [0] + binom_poly(6, 5, 5)[1:]) + T
    assert t_act(H, T, ictx) == expected


def test_t_act_linear():
    ictx = make_context(5, 3)
    rng = np.random.default_rng(12)
    F = TruncSeries.random(F5, 30, rng)
    H1 = PseudoPoly(F5, [(1, 2), (-2, 3)])
    H2 = PseudoPoly(F5, [(0, 4), (2, 1), (ZpFixed(5, 4, 7), 1)])
    assert t_act(H1 + H2, F, ictx) == t_act(H1, F, ictx) + t_act(H2, F, ictx)
    # (H1 H2)(t) = H1(t) H2(t)
    assert t_act(H1 * H2, F, ictx) == t_act(H1, t_act(H2, F, ictx), ictx)


def test_expand_rational_examples():
    assert expand_rational(RationalFn(F5, [1], [1, -1]), 7) == TruncSeries.from_list(F5, [1] * 7)
    with pytest.raises(NotAPowerSeries):
        expand_rational(RationalFn(F5, [1], [0, 1]), 4)
    assert expand_rational(RationalFn(F5, [0, 3], [0, 1]), 4) == series(F5, [3, 0, 0, 0])


def test_rational_arithmetic_and_composition():
    rng = random.Random(7)
    n = 20
    for _ in range(10):
        num = [rng.randrange(5) for _ in range(4)]
        den = [1] + [rng.randrange(5) for _ in range(3)]
        R = RationalFn(F5, num, den)
        S = RationalFn(F5, [rng.randrange(5) for _ in range(3)], [1, rng.randrange(5)])
        assert (R + S).expand(n) == R.expand(n) + S.expand(n)
        assert (R * S).expand(n) == R.expand(n) * S.expand(n)
        for k in (2, 3, -1, -2):
            assert R.compose_power(k).expand(n) == compose_unit_exponent(R.expand(n), k)


def test_rational_is_reduced():
    R = RationalFn(F5, [1, 2, 1], [2, 2])  # (1+T)^2 / (2(1+T))
    assert R.num == (3, 3) and R.den == (1,)


def test_json_round_trip():
    F = TruncSeries.random(F9, 12, np.random.default_rng(13))
    assert TruncSeries.from_json(F.to_json()) == F
    G = series(F5, [1, 2, 3])
    assert TruncSeries.from_json(G.to_json()) == G


def test_series_basics():
    F = series(F5, [0, 0, 3, 1])
    assert F.valuation() == 2
    assert F.shift(1) == series(F5, [0, 0, 0, 3, 1])
    assert not F.is_constant() and series(F5, [2, 0, 0]).is_constant()
    assert F.agrees(series(F5, [0, 0, 3]), 3)
    assert TruncSeries.zero(F5, 4).valuation() == 4
