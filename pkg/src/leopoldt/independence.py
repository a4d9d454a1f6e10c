"""Pseudo-polynomials, Q*-classes of units, and finite checks of linear independence.

Infinite-precision independence over the pseudo-rational functions cannot be
decided by computation.  What is checked here are finite consequences: the
truncated family has full rank over F_q, and no relation with
pseudo-polynomial coefficients drawn from a small exponent set survives
when the precision is raised.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .arith import (FieldCtx, FqElem, ZpFixed, fq_root_of_unity, make_field, teichmuller)
from .chars import (ThetaChar, char_from_index, conductor, distinct_mod_pi,
                    euler_phi, roots_of_unity_field_degree, _least_primitive_root)
from .errors import HypothesisViolated, InvalidParameter
from .iwasawa import f_bar, iwasawa_series, make_context, to_Tf
from .pseries import (RationalFn, TruncSeries, _padded_size, binomial_power,
                      compose_unit_exponent, expand_rational, mul_trunc)

log = logging.getLogger(__name__)


# -- the ring A of pseudo-polynomials --------------------------------------------------

def _exp_key(a):
    if isinstance(a, ZpFixed):
        return ("zp", a.prec, a.residue)
    return ("int", int(a))


def _exp_add(a, b):
    if isinstance(a, ZpFixed) or isinstance(b, ZpFixed):
        return a + b if isinstance(a, ZpFixed) else b + a
    return int(a) + int(b)


class PseudoPoly:
    """sum c_i (1+T)^{a_i} with exponents in Z (int) or Z_p (ZpFixed)."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: FieldCtx, terms=()):
        merged = {}
        exps = {}
        for a, c in terms:
            c = ctx.element(c) if not isinstance(c, FqElem) else c
            k = _exp_key(a)
            merged[k] = merged.get(k, ctx.zero()) + c
            exps[k] = a
        self.ctx = ctx
        self.terms = tuple(sorted(((exps[k], c) for k, c in merged.items() if c),
                                  key=lambda t: _exp_key(t[0])))

    @classmethod
    def monomial(cls, ctx, a, c=1):
        return cls(ctx, [(a, c)])

    def __add__(self, other):
        return PseudoPoly(self.ctx, self.terms + other.terms)

    def __neg__(self):
        return PseudoPoly(self.ctx, [(a, -c) for a, c in self.terms])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PseudoPoly):
            return PseudoPoly(self.ctx, [(_exp_add(a, b), c * e)
                                         for a, c in self.terms for b, e in other.terms])
        return PseudoPoly(self.ctx, [(a, c * other) for a, c in self.terms])

    def __eq__(self, other):
        if not isinstance(other, PseudoPoly):
            return NotImplemented
        return self.ctx == other.ctx and [(_exp_key(a), c) for a, c in self.terms] == \
            [(_exp_key(a), c) for a, c in other.terms]

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def expand(self, prec: int) -> TruncSeries:
        out = TruncSeries.zero(self.ctx, prec)
        for a, c in self.terms:
            out = out + binomial_power(self.ctx, a, prec).scale(c)
        return out

    def to_json(self) -> dict:
        return {"terms": [[str(a) if isinstance(a, ZpFixed) else a, list(c.coeffs)] for a, c in self.terms]}

    def __repr__(self):
        return "PseudoPoly(" + " + ".join(f"{c}*(1+T)^{a}" for a, c in self.terms) + ")"


def is_pseudo_poly_rational(H: RationalFn) -> tuple[bool, int | None]:
    """Whether H lies in A, with the least m such that (1+T)^m H is a polynomial."""
    ctx = H.ctx
    m = len(H.den) - 1
    target = [math.comb(m, k) % ctx.p for k in range(m + 1)]
    if list(H.den) == target:
        return True, m
    return False, None


def eigencomponent_split(H: PseudoPoly, b: int) -> PseudoPoly:
    """Terms of H whose exponent is congruent to b mod p."""
    p = H.ctx.p
    out = []
    for a, c in H.terms:
        if isinstance(a, ZpFixed):
            raise InvalidParameter("eigencomponents are defined for integer exponents")
        if (a - b) % p == 0:
            out.append((a, c))
    return PseudoPoly(H.ctx, out)


# -- units up to Q* --------------------------------------------------------------------

@dataclass(frozen=True)
class UnitExpr:
    """sign * rational * omega(g)^t * kappa0^b, g the least primitive root mod p."""

    p: int
    rational: Fraction
    t: int
    b: int = 0
    sign: int = 1

    def __post_init__(self):
        r = Fraction(self.rational)
        if r <= 0:
            raise InvalidParameter("rational part must be positive; use sign")
        if r.numerator % self.p == 0 or r.denominator % self.p == 0:
            raise InvalidParameter("rational part must be a p-adic unit")
        if self.sign not in (1, -1):
            raise InvalidParameter("sign must be +1 or -1")
        t = self.t
        if self.sign == -1:
            t += (self.p - 1) // 2  # -1 = omega(g)^{(p-1)/2}
        object.__setattr__(self, "rational", r)
        object.__setattr__(self, "t", t % (self.p - 1))
        object.__setattr__(self, "sign", 1)

    def __mul__(self, other: UnitExpr) -> UnitExpr:
        return UnitExpr(self.p, self.rational * other.rational, self.t + other.t, self.b + other.b)

    def value(self, prec: int, kappa0: int | None = None) -> ZpFixed:
        p = self.p
        kappa0 = 1 + p if kappa0 is None else kappa0
        mod = p ** prec
        g = teichmuller(_least_primitive_root(p), p, prec).residue
        r = self.rational.numerator * pow(self.rational.denominator, -1, mod)
        return ZpFixed(p, prec, r * pow(g, self.t, mod) * pow(kappa0, self.b, mod))

    def to_json(self) -> dict:
        return {"rational": str(self.rational), "t": self.t, "b": self.b}


def qstar_class(u: UnitExpr) -> int:
    """Class of u modulo Q*: the omega-exponent modulo (p-1)/2."""
    return u.t % ((u.p - 1) // 2)


def _compose(r: RationalFn, c: UnitExpr, N: int, kappa0: int | None) -> TruncSeries:
    K, _ = _padded_size(N, r.ctx.p)
    return compose_unit_exponent(expand_rational(r, N), c.value(max(K, 1), kappa0))


def sinnott_check(instance, N: int | None = None, kappa0: int | None = None) -> dict:
    """Check the class-sum conclusion for sum_i r_i((1+T)^{c_i} - 1) = 0 mod T^N.

    The default N is the total of the term sizes, so a single altered
    coefficient stays visible even when reduction shortens the altered term.
    """
    instance = list(instance)
    if not instance:
        raise InvalidParameter("empty instance")
    if N is None:
        N = sum(max(len(r.num), len(r.den)) for r, _ in instance) + 1
    ctx = instance[0][0].ctx
    parts = [_compose(r, c, N, kappa0) for r, c in instance]
    total = TruncSeries.zero(ctx, N)
    for s in parts:
        total = total + s
    if not total.is_zero():
        raise HypothesisViolated(f"hypothesis sum is nonzero (first nonzero index {total.valuation()})")
    classes = {}
    for i, (_, c) in enumerate(instance):
        classes.setdefault(qstar_class(c), []).append(i)
    report = {"N": N, "classes": [], "verdict": True}
    for cls in sorted(classes):
        s = TruncSeries.zero(ctx, N)
        for i in classes[cls]:
            s = s + parts[i]
        ok = s.is_constant()
        report["classes"].append({"class": cls, "indices": classes[cls], "constant": ok,
                                  "value": list(s.coeff(0).coeffs)})
        report["verdict"] = report["verdict"] and ok
    return report


def random_rational(ctx: FieldCtx, rng: random.Random, degree: int = 3) -> RationalFn:
    """A random element of F(T) with no pole at T = 0."""
    num = [rng.randrange(ctx.q) for _ in range(degree + 1)]
    if not any(num):
        num[0] = 1
    den = [rng.randrange(1, ctx.q)] + [rng.randrange(ctx.q) for _ in range(degree)]
    return RationalFn(ctx, num, den)


def random_unit(p: int, rng: random.Random) -> UnitExpr:
    def unit_int():
        while True:
            v = rng.randrange(1, 4 * p)
            if v % p:
                return v
    return UnitExpr(p, Fraction(unit_int(), unit_int()), rng.randrange(p - 1), rng.randrange(-2, 3),
                    rng.choice((1, -1)))


def telescope(r: RationalFn, c: UnitExpr, k: int) -> list:
    """{(r, k c), (-r((1+T)^k - 1), c)}: the two terms cancel identically."""
    if k < 2 or k % r.ctx.p == 0:
        raise InvalidParameter("k must be an integer >= 2 prime to p")
    kc = UnitExpr(c.p, c.rational * k, c.t, c.b)
    return [(r, kc), (-r.compose_power(k), c)]


def telescope_instance(ctx: FieldCtx, rng: random.Random, classes: int = 1) -> list:
    """One or two certified telescopes; with two, units are drawn from distinct classes when possible."""
    p = ctx.p
    out, used = [], set()
    for _ in range(classes):
        c = random_unit(p, rng)
        if (p - 1) // 2 > 1:
            while qstar_class(c) in used:
                c = random_unit(p, rng)
        used.add(qstar_class(c))
        k = rng.choice([k for k in range(2, 2 * p + 2) if k % p])
        out += telescope(random_rational(ctx, rng), c, k)
    return out


def corrupt(instance, rng: random.Random) -> list:
    """Alter one numerator coefficient of one term."""
    instance = list(instance)
    i = rng.randrange(len(instance))
    r, c = instance[i]
    num = list(r.num) or [0]
    k = rng.randrange(len(num))
    num[k] = int(r.ctx.add(num[k], 1))
    instance[i] = (RationalFn(r.ctx, num, r.den), c)
    return instance


# -- character matrices ----------------------------------------------------------------

@dataclass
class CharMatrices:
    ctx: FieldCtx
    C: np.ndarray
    E: np.ndarray
    B: np.ndarray


def char_matrices(p: int, d: int, chars) -> CharMatrices:
    ctx = make_field(p, roots_of_unity_field_degree(p, d))
    chars = [c.over(ctx) for c in chars]
    zeta = fq_root_of_unity(ctx, d)
    prim = [c for c in range(1, d + 1) if math.gcd(c, d) == 1]
    C = np.array([[(zeta ** (c * h)).code for h in range(d)] for c in prim], dtype=np.int64)
    E = np.array([[chi.value(h).code for chi in chars] for h in range(d)], dtype=np.int64).reshape(d, len(chars))
    return CharMatrices(ctx, C, E, linalg.matmul(ctx, C, E))


def char_matrix_kernel(p: int, d: int, chars, check: bool = True) -> dict:
    """rank C, the explicit basis of ker C, and whether ker B is trivial."""
    chars = list(chars)
    if d < 2 or d % p == 0:
        raise InvalidParameter(f"need d >= 2 prime to p, got d = {d}")
    if check:
        bad = [c.index for c in chars if conductor(c) != d]
        if bad:
            raise HypothesisViolated(f"characters {bad} do not have conductor {d}")
        if len(chars) > euler_phi(d) - 1:
            raise HypothesisViolated("more characters than phi(d) - 1")
        rep = distinct_mod_pi(chars)
        if not rep:
            raise HypothesisViolated(f"characters not distinct mod pi: pairs {rep.failing_pairs}")
    mats = char_matrices(p, d, chars)
    ctx = mats.ctx
    rank_C = linalg.rank(ctx, mats.C)
    zeta = fq_root_of_unity(ctx, d)
    nonprim = [c for c in range(d) if math.gcd(c, d) != 1]
    K = np.array([[(zeta ** (c * h)).code for h in range(d)] for c in nonprim], dtype=np.int64)
    in_kernel = not linalg.matmul(ctx, mats.C, K.T).any()
    basis_ok = bool(in_kernel and linalg.rank(ctx, K) == len(nonprim) == d - rank_C)
    ker_B = linalg.nullspace(ctx, mats.B)
    return {
        "check": "char_matrix_kernel",
        "params": {"p": p, "d": d, "chars": [c.index for c in chars], "field": ctx.to_json()},
        "rank_C": rank_C,
        "phi_d": euler_phi(d),
        "ker_C_basis_verified": basis_ok,
        "ker_B_dim": int(len(ker_B)),
        "ker_B_trivial": len(ker_B) == 0,
    }


def vandermonde_squares_det(p: int) -> FqElem:
    ctx = make_field(p)
    n = (p - 1) // 2
    alphas = [a * a % p for a in range(1, n + 1)]
    M = np.array([[pow(a, k, p) for k in range(n)] for a in alphas], dtype=np.int64).reshape(n, n)
    if n == 0:
        return ctx.one()
    return FqElem(ctx, linalg.det(ctx, M))


# -- truncated independence ------------------------------------------------------------

def default_exponents(p: int, d: int, prec: int = 8) -> list:
    kappa0 = 1 + d * p
    inv = ZpFixed(p, prec, kappa0).inverse()
    return [0, 1, -1, 2, -2, kappa0, inv]


def _thetas(p: int, d: int, chars):
    half = (p - 3) // 2
    return [ThetaChar(chi, j) for chi in chars for j in range(half + 1)]


def _family(p: int, d: int, thetas, ictx, m: int) -> list[TruncSeries]:
    ctx = ictx.ctx
    N = p ** m
    if d == 1:
        fam = [TruncSeries.monomial(ctx, 1, N)]
        fam += [to_Tf(iwasawa_series(th, ictx, m)) for th in thetas]
    else:
        fam = [TruncSeries.one(ctx, N)]
        fam += [f_bar(iwasawa_series(th, ictx, m)) for th in thetas]
    return [s.truncate(min(x.prec for x in fam)) for s in fam]


def _relation_rows(family, exponents, ctx) -> np.ndarray:
    N = family[0].prec
    powers = [binomial_power(ctx, e, N) for e in exponents]
    rows = [mul_trunc(x, P).codes() for x in family for P in powers]
    return np.array(rows, dtype=np.int64)


def _dedupe(exponents, p: int, m: int) -> list:
    seen, out = set(), []
    for e in exponents:
        r = int(e.residue if isinstance(e, ZpFixed) else e) % p ** m
        if r not in seen:
            seen.add(r)
            out.append(e)
    return out


def truncated_independence(p: int, d: int, chars=None, m: int = 2, exponents=None,
                           max_extra_levels: int = 3) -> dict:
    """Rank of the truncated family and refutation of small pseudo-polynomial relations.

    The family is {T} u {T f(T, theta)} for d = 1 and {1} u {f(T, theta)} for
    d >= 2, theta running over chi omega^e for each chi and 0 <= j <= (p-3)/2.
    Kernel vectors of the relation matrix at level m are re-tested at higher
    levels, at least once and until the coefficient count exceeds the number of
    unknowns, so that dimension-forced kernels are not mistaken for relations.
    """
    ictx = make_context(p, d, m)
    ctx = ictx.ctx
    if d == 1:
        chars = [char_from_index(1, 0, ctx)]
    else:
        if not chars:
            raise InvalidParameter("at least one character is required for d >= 2")
        chars = [char_from_index(d, c, ctx) if isinstance(c, int) else c.over(ctx) for c in chars]
        bad = [c.index for c in chars if conductor(c) != d]
        if bad:
            raise HypothesisViolated(f"characters {bad} do not have conductor {d}")
        rep = distinct_mod_pi(chars)
        if not rep:
            raise HypothesisViolated(f"characters not distinct mod pi: pairs {rep.failing_pairs}")
    thetas = _thetas(p, d, chars)
    exps = _dedupe(default_exponents(p, d) if exponents is None else list(exponents), p, m)
    family = _family(p, d, thetas, ictx, m)
    n_fam = len(family)
    rank = linalg.rank(ctx, np.array([s.codes() for s in family], dtype=np.int64))
    expected = 1 + len(chars) * (p - 1) // 2
    unknowns = n_fam * len(exps)

    rows = _relation_rows(family, exps, ctx)
    kernel = linalg.left_kernel(ctx, rows)
    levels = [{"level": m, "coefficients": family[0].prec, "kernel_dim": int(len(kernel))}]
    level = m
    while len(kernel) and level < m + max_extra_levels:
        level += 1
        fam_l = _family(p, d, thetas, ictx, level)
        rows_l = _relation_rows(fam_l, exps, ctx)
        # restrict to the span of the surviving vectors
        image = linalg.matmul(ctx, kernel, rows_l)
        coeffs = linalg.left_kernel(ctx, image)
        kernel = linalg.matmul(ctx, coeffs, kernel) if len(coeffs) else np.zeros((0, unknowns), np.int64)
        levels.append({"level": level, "coefficients": fam_l[0].prec, "kernel_dim": int(len(kernel))})
        if fam_l[0].prec > unknowns:
            break
    persisted = len(kernel) > 0
    witnesses = [[int(x) for x in v] for v in kernel[:4]]
    verdict = "consistent-with-independence" if rank == expected and not persisted else (
        "persisted-relation" if persisted else "rank-deficient")
    return {
        "check": "truncated_independence",
        "params": {
            "p": p, "d": d, "chars": [c.index for c in chars], "level": m,
            "exponents": [f"{e.residue} mod {p}^{e.prec}" if isinstance(e, ZpFixed) else e for e in exps],
            "family": ["T" if d == 1 else "1"] + [f"{'T*' if d == 1 else ''}f(chi={t.chi.index},j={t.j})" for t in thetas],
            "field": ctx.to_json(),
        },
        "rank": rank,
        "expected_rank": expected,
        "kernel_dim": levels[0]["kernel_dim"],
        "levels": levels,
        "witnesses": witnesses,
        "verdict": verdict,
    }
