"""Property batteries behind ``leopoldt verify``.

Each suite yields ``Case`` records; a case fails when an identity does not hold
exactly or an unexpected error is raised.  Suites accept optional prime and
modulus filters and a seed for the randomized inputs.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import FqElem, ell_exponent, make_field, odd_primes_upto, teichmuller_residues
from .chars import ThetaChar, char_from_index, conductor, default_field, distinct_mod_pi, enumerate_chars, is_odd
from .errors import HypothesisViolated, LeopoldtError
from .independence import (PseudoPoly, char_matrix_kernel, corrupt, sinnott_check,
                           telescope_instance, truncated_independence, vandermonde_squares_det)
from .iwasawa import (constant_term_oracle, f_bar, f_chi_rational, f_chi_series,
                      f_chi_tilde_rational, f_chi_tilde_series, f_chi_tilde_t_action,
                      iwasawa_series, make_context)
from .pseries import (TruncSeries, binomial_power, compose_unit_exponent, div_exact,
                      from_x_basis, involution, op_D, op_gamma, op_U, op_U_projection,
                      t_act, taylor_shift)
from .transform import gamma_transform


@dataclass
class Case:
    suite: str
    name: str
    params: dict
    ok: bool
    detail: str = ""

    def to_json(self) -> dict:
        out = {"suite": self.suite, "name": self.name, "params": self.params, "ok": self.ok}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Filters:
    p: int | None = None
    d: int | None = None
    seed: int = 0
    extra: dict = field(default_factory=dict)

    def primes(self, default):
        return [self.p] if self.p is not None else list(default)

    def moduli(self, default):
        return [self.d] if self.d is not None else list(default)


def _run(suite, name, params, fn):
    try:
        ok = bool(fn())
        return Case(suite, name, params, ok, "" if ok else "identity does not hold")
    except LeopoldtError as exc:
        return Case(suite, name, params, False, f"{type(exc).__name__}: {exc}")


# -- operators -------------------------------------------------------------------------

def suite_operators(flt: Filters, count: int = 50):
    rng = np.random.default_rng(flt.seed)
    for p in flt.primes((3, 5, 7)):
        N = p * p + p
        for k in range(count):
            ctx = make_field(p, 1 + k % 2)
            F = TruncSeries.random(ctx, N, rng)
            d1, d2 = (int(x) for x in rng.choice(p - 1, size=2, replace=False)) if p > 3 else (0, 1)
            prm = {"p": p, "f": ctx.f, "case": k}
            g1 = op_gamma(d1, F)
            yield _run("operators", "gamma_orthogonal", {**prm, "deltas": [d1, d2]},
                       lambda: op_gamma(d2, g1).is_zero())
            yield _run("operators", "gamma_idempotent", {**prm, "delta": d1},
                       lambda: op_gamma(d1, g1) == g1)
            yield _run("operators", "gamma_sum_identity", prm,
                       lambda: sum((op_gamma(d, F) for d in range(1, p - 1)), op_gamma(0, F)) == F)
            U = op_U(F)
            yield _run("operators", "U_idempotent", prm, lambda: op_U(U).agrees(U))
            yield _run("operators", "DU_equals_UD", prm, lambda: op_D(U).agrees(op_U(op_D(F))))
            yield _run("operators", "D_gamma_shift", {**prm, "delta": d1},
                       lambda: op_D(g1).agrees(op_gamma(d1 + 1, op_D(F))))
            yield _run("operators", "gamma_U_commute", {**prm, "delta": d1},
                       lambda: op_gamma(d1, U).agrees(op_U(g1)))
            yield _run("operators", "U_matches_projection", prm, lambda: U.agrees(op_U_projection(F)))
            c1, c2 = (int(x) * p + int(y) for x, y in rng.integers(1, p, size=(2, 2)))
            yield _run("operators", "composition_cocycle", {**prm, "c": [c1, c2]},
                       lambda: compose_unit_exponent(compose_unit_exponent(F, c1), c2)
                       == compose_unit_exponent(F, c1 * c2))
            yield _run("operators", "involution_twice", prm, lambda: involution(involution(F)) == F)
            yield _run("operators", "taylor_round_trip", prm,
                       lambda: from_x_basis(ctx, taylor_shift(F), N) == F)


# -- Leopoldt transform ----------------------------------------------------------------

def _random_pseudo_poly(ctx, rng):
    return PseudoPoly(ctx, [(b, FqElem(ctx, int(rng.integers(ctx.q))))
                            for b in range(-2, 3) if rng.random() < 0.7])


def suite_leopoldt(flt: Filters, count: int = 4):
    rng = np.random.default_rng(flt.seed)
    for p in flt.primes((3, 5)):
        for m in flt.extra.get("levels", (1, 2)):
            ictx = make_context(p, flt.d or 1, m, f=2)
            ctx = ictx.ctx
            n_in, n_out = p ** (m + 1), p ** m
            for k in range(count):
                delta = int(rng.integers(p - 1))
                F = TruncSeries.random(ctx, n_in + p, rng)
                G = gamma_transform(delta, F, ictx, m)
                prm = {"p": p, "m": m, "delta": delta, "case": k}
                yield _run("leopoldt", "projection_invariance", prm,
                           lambda: G == gamma_transform(delta, op_gamma(-delta, F), ictx, m)
                           == gamma_transform(delta, op_gamma(-delta, op_U(F)), ictx, m))
                yield _run("leopoldt", "derivative_shift", prm,
                           lambda: gamma_transform(delta + 1, F, ictx, m) == gamma_transform(delta, op_D(F), ictx, m))
                H = _random_pseudo_poly(ctx, rng)
                yield _run("leopoldt", "t_action_commutes", {**prm, "H": repr(H)},
                           lambda: H.expand(n_out) * G == gamma_transform(delta, t_act(H, F, ictx), ictx, m))
                P = TruncSeries.random(ctx, p, rng).shift(n_in)
                yield _run("leopoldt", "continuity", prm,
                           lambda: gamma_transform(delta, F + P, ictx, m) == G)
                b = int(rng.choice([x for x in range(2, 4 * p) if x % p]))
                twist = binomial_power(ctx, ell_exponent(b, ictx, m), n_out).scale(pow(b, delta, p))
                yield _run("leopoldt", "twist_law", {**prm, "b": b},
                           lambda: gamma_transform(delta, compose_unit_exponent(F, b), ictx, m) == twist * G)


# -- F_chi -----------------------------------------------------------------------------

def conductor_chars(p: int, d: int, ctx=None):
    ctx = default_field(p, d) if ctx is None else ctx
    return [c for c in enumerate_chars(d, ctx) if conductor(c) == d]


def suite_fchi(flt: Filters, N: int = 40):
    for p in flt.primes((3, 5)):
        for d in flt.moduli((3, 4, 5, 7)):
            if d % p == 0 or d < 2:
                continue
            for chi in conductor_chars(p, d):
                prm = {"p": p, "d": d, "chi": chi.index}
                F = f_chi_series(chi, N)
                eps = 1 if is_odd(chi) else -1
                yield _run("fchi", "exact_division", prm, lambda: _division_is_exact(chi, N))
                yield _run("fchi", "parity_functional_equation", {**prm, "epsilon": eps},
                           lambda: involution(F) == F.scale(eps))
                yield _run("fchi", "modulus_stability", prm, lambda: f_chi_series(chi, N, g=d) == F)
        ctx = make_field(p)
        R = f_chi_rational(ctx)
        yield _run("fchi", "d1_functional_equation", {"p": p},
                   lambda: R.compose_power(-1) == -R - type(R)(ctx, [1]))


def _division_is_exact(chi, N):
    p, d = chi.p, chi.d
    g = d * p
    n = N + p
    mu = [chi.value(a) for a in range(g + 1)]
    mu[0] = chi.ctx.zero()
    num = from_x_basis(chi.ctx, mu, n)
    den = TruncSeries.one(chi.ctx, n) - binomial_power(chi.ctx, g, n)
    H = div_exact(num, den)
    return (H * den).agrees(num, N) and num.valuation() >= den.valuation()


# -- regularized series (d = 1) --------------------------------------------------------

def integral_regularized_coefficients(p: int, N: int):
    """Coefficients of the characteristic-zero regularized series, as Fractions."""
    X = [math.comb(p + 1, k) for k in range(p + 2)]
    num = list(X)
    num[0] -= 1
    num[1] -= p + 1
    den = list(X)
    den[0] -= 1
    # numerator / (T * den); both num and T * den have valuation exactly 2
    if num[:2] != [0, 0] or num[2] == 0 or den[0] != 0 or den[1] == 0:
        return None
    a, b = num[2:], den[1:]
    out = []
    a = a + [0] * (N + len(b))
    for k in range(N):
        c = Fraction(a[k], b[0])
        out.append(c)
        for i, bi in enumerate(b):
            a[k + i] -= c * bi
    # the trailing -p of the closed form
    out[0] -= p
    return out


def regularization_oracle(theta, ictx, m):
    """T * Gamma(gamma_{-delta} U(-1/T - 1)), the pole cancelled by hand.

    U(-1/T - 1) = 1/T^p - 1/T mod p; composing with (1+T)^eta - 1 = T u_eta
    turns 1/T^p into T^{-p} u_eta(T^p)^{-1} (Frobenius), so everything is a
    power series after multiplying by T^p.
    """
    p, ctx = ictx.p, ictx.ctx
    N = p ** (m + 1) + p
    acc = np.zeros(N, dtype=np.int64)
    for a, term in enumerate(_polar_terms(p, N), start=1):
        acc += pow(a, (-theta.delta) % (p - 1), p) * term
    acc = (-acc) % p
    if acc[:p].any():
        return None
    G = TruncSeries.from_list(ctx, [int(x) for x in acc[p:]])
    return gamma_transform(theta.delta, G, ictx, m).shift(1).truncate(p ** m)


@lru_cache(maxsize=8)
def _polar_terms(p: int, N: int):
    """T^p * (1/((1+T)^eta - 1)^p - 1/((1+T)^eta - 1)) for each Teichmuller eta."""
    ctx = make_field(p)
    K = 1
    while p ** K < N + 1:
        K += 1
    out = []
    for eta in teichmuller_residues(p, K):
        u = binomial_power(ctx, eta, N + 1)
        u = TruncSeries(ctx, u.coeffs[1:])  # ((1+T)^eta - 1) / T
        inv = div_exact(TruncSeries.one(ctx, N), u).coeffs[:, 0]
        frob = np.zeros(N, dtype=np.int64)
        frob[::p] = inv[: (N + p - 1) // p]
        shifted = np.zeros(N, dtype=np.int64)
        shifted[p - 1:] = inv[: N - p + 1]
        out.append((frob - shifted) % p)
    return out


def suite_lemma5(flt: Filters, N: int = 60):
    for p in flt.primes((3, 5, 37)):
        ictx = make_context(p, 1)
        ctx = ictx.ctx
        closed = f_chi_tilde_series(ictx, N)
        yield _run("lemma5", "closed_form_equals_t_action", {"p": p},
                   lambda: closed == f_chi_tilde_t_action(ictx, N))

        def integral():
            coeffs = integral_regularized_coefficients(p, N)
            if coeffs is None or any(c.denominator % p == 0 for c in coeffs):
                return False
            red = [c.numerator * pow(c.denominator, -1, p) % p for c in coeffs]
            return TruncSeries.from_list(ctx, red) == closed
        yield _run("lemma5", "integrality", {"p": p}, integral)
        yield _run("lemma5", "odd_functional_equation", {"p": p}, lambda: involution(closed) == -closed)
        R = f_chi_tilde_rational(ctx)
        yield _run("lemma5", "rational_expansion", {"p": p}, lambda: R.expand(N) == closed)
        chi = char_from_index(1, 0, ctx)
        for j in range(1, (p - 1) // 2):
            th = ThetaChar(chi, j)
            S = iwasawa_series(th, ictx, 1).S
            prm = {"p": p, "j": j}
            yield _run("lemma5", "zero_constant_term", prm, lambda: S.coeff(0) == 0)
            yield _run("lemma5", "T_f_identity", prm, lambda: regularization_oracle(th, ictx, 1) == S)


# -- constant terms, routes, level stability -------------------------------------------

def _thetas(p, d, ctx):
    chars = [char_from_index(1, 0, ctx)] if d == 1 else conductor_chars(p, d, ctx)
    return [ThetaChar(chi, j) for chi in chars for j in range((p - 1) // 2)]


def _public_route(theta, ictx, m):
    p = ictx.p
    n = p ** (m + 1) + p - 1
    base = f_chi_tilde_series(ictx, n) if ictx.d == 1 else f_chi_series(theta.chi, n)
    return gamma_transform(theta.delta, op_gamma(-theta.delta, op_U(base)), ictx, m)


def suite_oracle(flt: Filters):
    for p in flt.primes((3, 5)):
        for d in flt.moduli((1, 3, 4, 5)):
            if d % p == 0:
                continue
            ictx = make_context(p, d)
            for th in _thetas(p, d, ictx.ctx):
                prm = {"p": p, "d": d, "chi": th.chi.index, "j": th.j}
                if th.is_trivial():
                    continue
                yield _run("oracle", "constant_term", prm,
                           lambda: f_bar(iwasawa_series(th, ictx, 1)).coeff(0) == constant_term_oracle(th))
                yield _run("oracle", "route_equivalence", prm,
                           lambda: _public_route(th, ictx, 1) == iwasawa_series(th, ictx, 1).S)
                yield _run("oracle", "level_stability", prm,
                           lambda: iwasawa_series(th, ictx, 2).S.truncate(p) == iwasawa_series(th, ictx, 1).S)


# -- character matrices and the Vandermonde determinant --------------------------------

def maximal_distinct_chars(p: int, d: int):
    """Greedy largest set of conductor-d characters, distinct after reduction."""
    out = []
    for chi in conductor_chars(p, d):
        if distinct_mod_pi(out + [chi]):
            out.append(chi)
    return out


def vandermonde_oracle(p: int) -> int:
    alphas = [a * a % p for a in range(1, (p - 1) // 2 + 1)]
    out = 1
    for s in range(len(alphas)):
        for r in range(s + 1, len(alphas)):
            out = out * (alphas[r] - alphas[s]) % p
    return out


MATRIX_CASES = ((3, 4), (3, 5), (5, 3), (5, 4), (3, 7))


def suite_matrix(flt: Filters):
    for p, d in MATRIX_CASES:
        if (flt.p is not None and p != flt.p) or (flt.d is not None and d != flt.d):
            continue
        chars = maximal_distinct_chars(p, d)
        rep = char_matrix_kernel(p, d, chars)
        prm = {"p": p, "d": d, "chars": [c.index for c in chars], "rank_C": rep["rank_C"]}
        yield Case("matrix", "rank_C_is_phi", prm, rep["rank_C"] == rep["phi_d"])
        yield Case("matrix", "ker_C_basis", prm, rep["ker_C_basis_verified"])
        yield Case("matrix", "ker_B_trivial", prm, rep["ker_B_trivial"])
        dup = char_matrix_kernel(p, d, chars + chars[:1], check=False)
        yield Case("matrix", "duplicate_gives_kernel", prm, not dup["ker_B_trivial"])
        yield _run("matrix", "duplicate_refused", prm, lambda: _refused(p, d, chars + chars[:1]))
    for p in flt.primes(odd_primes_upto(97)):
        v = vandermonde_squares_det(p)
        yield Case("matrix", "vandermonde", {"p": p, "det": v.code},
                   bool(v) and v.code == vandermonde_oracle(p))


def _refused(p, d, chars):
    try:
        char_matrix_kernel(p, d, chars)
    except HypothesisViolated:
        return True
    return False


# -- class-sum conclusion --------------------------------------------------------------

def suite_sinnott(flt: Filters, count: int = 100):
    rng = random.Random(flt.seed)
    for p in flt.primes((3, 5)):
        ctx = make_field(p)
        for k in range(count):
            classes = 1 + k % 2
            inst = telescope_instance(ctx, rng, classes)
            prm = {"p": p, "case": k, "telescopes": classes}
            yield _run("sinnott", "telescope_passes", prm, lambda: sinnott_check(inst)["verdict"])
            bad = corrupt(inst, rng)
            yield _run("sinnott", "corruption_rejected", prm, lambda: _rejected(bad))


def _rejected(instance):
    try:
        return not sinnott_check(instance)["verdict"]
    except HypothesisViolated:
        return True


# -- truncated independence ------------------------------------------------------------

INDEPENDENCE_CASES = ((5, 1, None), (7, 1, None), (3, 5, (1, 2, 3)), (5, 3, (1,)))


def suite_independence(flt: Filters):
    for p, d, chars in INDEPENDENCE_CASES:
        if (flt.p is not None and p != flt.p) or (flt.d is not None and d != flt.d):
            continue
        for m in (2, 3):
            rep = truncated_independence(p, d, chars, m)
            prm = {"p": p, "d": d, "level": m, "rank": rep["rank"], "levels": rep["levels"]}
            yield Case("independence", "full_rank_no_relation", prm,
                       rep["verdict"] == "consistent-with-independence",
                       "" if rep["verdict"] == "consistent-with-independence" else rep["verdict"])


SUITES = {
    "operators": suite_operators,
    "leopoldt": suite_leopoldt,
    "fchi": suite_fchi,
    "lemma5": suite_lemma5,
    "oracle": suite_oracle,
    "matrix": suite_matrix,
    "sinnott": suite_sinnott,
    "independence": suite_independence,
}


def run_suite(name: str, flt: Filters) -> list[Case]:
    if name == "all":
        return [c for key in SUITES for c in SUITES[key](flt)]
    return list(SUITES[name](flt))
