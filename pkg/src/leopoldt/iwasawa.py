"""Reduced Iwasawa series f(T, theta) mod p and their lambda-invariants.

For a character chi of conductor d >= 2 the generating function
F_chi = sum_{a=1}^{g} chi(a)(1+T)^a / (1 - (1+T)^g) is a power series, and
Gamma_delta gamma_{-delta} U F_chi = f((1+T)^{-1} - 1, theta) with
theta = chi omega^{delta+1}.  For d = 1, F_chi = -1/T - 1 has a pole; the
regularized series t.F_chi = F_chi((1+T)^{kappa0} - 1) - F_chi(T) is used
instead and produces T f((1+T)^{-1} - 1, theta).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import FieldCtx, FqElem, is_prime, make_field, teichmuller_residues
from .chars import DirichletChar, ThetaChar, char_from_index, conductor, default_field
from .errors import InvalidParameter, NotInDomain, PartialResult
from .pseries import (RationalFn, TruncSeries, _to_t_basis, _to_x_basis,
                      binomial_power, div_exact, expand_rational, from_x_basis,
                      gamma_x_basis, involution, op_U)
from .transform import transform_x_basis

log = logging.getLogger(__name__)

DIRECT = "direct"
T_REGULARIZED = "t_regularized"


@dataclass(frozen=True)
class IwasawaContext:
    p: int
    d: int
    ctx: FieldCtx
    m: int = 1

    def __post_init__(self):
        if self.p < 3 or not is_prime(self.p):
            raise InvalidParameter(f"p must be an odd prime, got {self.p}")
        if self.d < 1 or self.d % self.p == 0:
            raise InvalidParameter(f"modulus d = {self.d} must be positive and prime to p = {self.p}")
        if self.ctx.p != self.p:
            raise InvalidParameter("field characteristic differs from p")
        if self.m < 1:
            raise InvalidParameter("level must be at least 1")

    @property
    def kappa0(self) -> int:
        return 1 + self.d * self.p

    def at_level(self, m: int) -> IwasawaContext:
        return IwasawaContext(self.p, self.d, self.ctx, m)

    def to_json(self) -> dict:
        return {"p": self.p, "d": self.d, "kappa0": self.kappa0, "level": self.m,
                "field": self.ctx.to_json()}


def make_context(p: int, d: int, m: int = 1, f: int | None = None) -> IwasawaContext:
    if p < 3 or not is_prime(p):
        raise InvalidParameter(f"p must be an odd prime, got {p}")
    if d < 1 or d % p == 0:
        raise InvalidParameter(f"modulus d = {d} must be positive and prime to p = {p}")
    ctx = default_field(p, d) if f is None else make_field(p, f)
    return IwasawaContext(p, d, ctx, m)


@dataclass(frozen=True)
class IwasawaSeries:
    theta: ThetaChar
    ictx: IwasawaContext
    S: TruncSeries
    relation: str

    @property
    def m(self) -> int:
        return self.ictx.m

    def to_json(self) -> dict:
        return {
            "p": self.ictx.p,
            "d": self.ictx.d,
            "kappa0": self.ictx.kappa0,
            "theta": self.theta.to_json(),
            "level": self.m,
            "relation": self.relation,
            "field": self.ictx.ctx.to_json(),
            "coeffs": [[int(x) for x in row] for row in self.S.coeffs],
        }


# -- generating functions --------------------------------------------------------------

def f_chi_series(chi: DirichletChar, N: int, g: int | None = None) -> TruncSeries:
    """sum_{a=1}^{g} chi(a)(1+T)^a / (1 - (1+T)^g) mod T^N, by default with g = dp."""
    p, d = chi.p, chi.d
    if d == 1:
        raise InvalidParameter("conductor 1 has no power-series F_chi; use f_chi_tilde_series")
    if conductor(chi) != d:
        raise InvalidParameter(f"character has conductor {conductor(chi)}, not {d}")
    g = d * p if g is None else g
    if g % d:
        raise InvalidParameter(f"g = {g} must be a multiple of the conductor {d}")
    v = p ** _pval_int(g, p)  # valuation of 1 - (1+T)^g mod p
    n = N + v
    mu = [chi.value(a) for a in range(g + 1)]
    mu[0] = chi.ctx.zero()
    num = from_x_basis(chi.ctx, mu, n)
    den = TruncSeries.one(chi.ctx, n) - binomial_power(chi.ctx, g, n)
    return div_exact(num, den)


def _pval_int(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def f_chi_rational(ctx: FieldCtx) -> RationalFn:
    """F_chi for the trivial character mod 1: -1/T - 1 = -(1 + T)/T."""
    return RationalFn(ctx, [-1, -1], [0, 1])


def f_chi_tilde_rational(ctx: FieldCtx) -> RationalFn:
    """((1+T)^{p+1} - (p+1)T - 1) / (T((1+T)^{p+1} - 1)) mod p."""
    p = ctx.p
    X = [math.comb(p + 1, k) % p for k in range(p + 2)]
    num = list(X)
    num[0] -= 1
    num[1] -= (p + 1) % p
    den = [0] + X
    den[1] -= 1
    return RationalFn(ctx, num, den)


def f_chi_tilde_series(ictx: IwasawaContext, N: int) -> TruncSeries:
    if ictx.d != 1:
        raise InvalidParameter("the regularized series is defined for d = 1")
    return expand_rational(f_chi_tilde_rational(ictx.ctx), N)


def f_chi_tilde_t_action(ictx: IwasawaContext, N: int) -> TruncSeries:
    """The same series as F_chi((1+T)^{kappa0} - 1) - F_chi(T), built from -1/T - 1."""
    F = f_chi_rational(ictx.ctx)
    return expand_rational(F.compose_power(ictx.kappa0) - F, N)


# -- the pipeline ----------------------------------------------------------------------

@lru_cache(maxsize=64)
def _u_base_x_basis(ictx: IwasawaContext, chi: DirichletChar | None):
    """(1+T)-basis coefficients of U(base) mod T^{p^(m+1)}; shared by all twists."""
    p, m = ictx.p, ictx.m
    n = p ** (m + 1) + p - 1
    base = f_chi_tilde_series(ictx, n) if chi is None else f_chi_series(chi, n)
    U = op_U(base)
    mu = _to_x_basis(U.coeffs, p, p ** (m + 1))
    mu.setflags(write=False)
    return mu


def _theta_in(theta: ThetaChar, ictx: IwasawaContext) -> ThetaChar:
    if theta.chi.d != ictx.d:
        raise InvalidParameter(f"character modulus {theta.chi.d} differs from context d = {ictx.d}")
    if theta.p != ictx.p:
        raise InvalidParameter("character field characteristic differs from p")
    if theta.chi.ctx != ictx.ctx:
        theta = ThetaChar(theta.chi.over(ictx.ctx), theta.j)
    return theta


def iwasawa_series(theta: ThetaChar, ictx: IwasawaContext, m: int | None = None) -> IwasawaSeries:
    """S = Gamma_delta gamma_{-delta} U(base) mod T^{p^m}."""
    if m is not None:
        ictx = ictx.at_level(m)
    theta = _theta_in(theta, ictx)
    p, m = ictx.p, ictx.m
    delta = theta.delta
    chi = None if ictx.d == 1 else theta.chi
    log.debug("pipeline p=%d d=%d index=%d j=%d level=%d", p, ictx.d, theta.chi.index, theta.j, m)
    mu = _u_base_x_basis(ictx, chi)
    mu = gamma_x_basis(-delta, mu, p)
    nu = transform_x_basis(delta, mu, p, ictx.kappa0, m)
    S = TruncSeries(ictx.ctx, _to_t_basis(nu, p))
    return IwasawaSeries(theta, ictx, S, T_REGULARIZED if ictx.d == 1 else DIRECT)


def to_Tf(s: IwasawaSeries) -> TruncSeries:
    """T f(T, theta) mod T^{p^m}."""
    inv = involution(s.S)
    if s.relation == T_REGULARIZED:
        one_plus_T = TruncSeries.from_list(inv.ctx, [1, 1], inv.prec)
        return -(one_plus_T * inv)
    return inv.shift(1).truncate(inv.prec)


def f_bar(s: IwasawaSeries) -> TruncSeries:
    """f(T, theta) mod p; precision p^m (d >= 2) or p^m - 1 (d = 1)."""
    if s.theta.is_trivial():
        raise NotInDomain("f(T, omega^0) has a pole at T = 0; only T f is available")
    if s.relation == DIRECT:
        return involution(s.S)
    Tf = to_Tf(s)
    return div_exact(Tf, TruncSeries.monomial(Tf.ctx, 1, Tf.prec))


def lambda_invariant(theta: ThetaChar, ictx: IwasawaContext, cap: int = 3) -> int | None:
    """Least k with a_k(f(T, theta)) != 0, confirmed at the next level; None if not found below cap."""
    if theta.is_trivial():
        raise NotInDomain("lambda is undefined for the trivial character (regularized series only)")
    for m in range(1, cap):
        f = f_bar(iwasawa_series(theta, ictx, m))
        k = f.valuation()
        if k >= f.prec:
            continue
        check = f_bar(iwasawa_series(theta, ictx, m + 1))
        k2 = check.valuation()
        if k2 != k or not check.agrees(f, f.prec):
            raise AssertionError(f"levels {m} and {m + 1} disagree: {k} vs {k2}")
        return k
    return None


def lambda_minus(p: int, cap: int = 3, detail: bool = False):
    """sum of lambda(omega^{2i}) for i = 1 .. (p-3)/2."""
    ictx = make_context(p, 1)
    chi = char_from_index(1, 0, ictx.ctx)
    values = {}
    for i in range(1, (p - 3) // 2 + 1):
        lam = lambda_invariant(ThetaChar(chi, i), ictx, cap)
        if lam is None:
            raise PartialResult(f"lambda(omega^{2 * i}) not determined below level {cap}", i)
        values[i] = lam
    total = sum(values.values())
    return (total, values) if detail else total


def fw_expectation(p: int) -> Fraction:
    """Expected lambda^- when each coefficient is an independent uniform residue."""
    if p < 3 or not is_prime(p):
        raise InvalidParameter(f"p must be an odd prime, got {p}")
    return Fraction(p - 3, 2 * (p - 1))


# -- Bernoulli oracle ------------------------------------------------------------------

def bernoulli_b1(chi: DirichletChar, t: int) -> FqElem:
    """B_{1, psi} mod pi for psi = chi omega^t, computed from exact integer sums.

    With psi of conductor dp, B = (1/dp) sum_{a <= dp, p !| a} psi(a) a.  The
    omega-part is an integer mod p^2 (Teichmuller lifts); grouping by a mod d
    gives sums S_r that agree mod p, so sum_r chi(r)(S_r - s)/p only needs
    chi mod pi.
    """
    p, d, ctx = chi.p, chi.d, chi.ctx
    t %= p - 1
    if t == 0:
        if chi.is_trivial():
            raise NotInDomain("trivial character: B_1 is not attached to an L-value here")
        total = ctx.zero()
        for a in range(1, d + 1):
            total = total + chi.value(a) * a
        return total * pow(d, -1, p)
    P2 = p * p
    lifts = teichmuller_residues(p, 2)
    sums = {}
    for a in range(1, d * p + 1):
        if a % p == 0 or math.gcd(a, d) != 1:
            continue
        w = pow(lifts[a % p - 1], t, P2) * a % P2
        r = a % d
        sums[r] = (sums.get(r, 0) + w) % P2
    if d == 1:
        (S,) = sums.values()
        if S % p:
            raise NotInDomain("psi = omega^{-1}: B_1 is not p-integral")
        return ctx.element(S // p)
    s = next(iter(sums.values())) % p
    if any(v % p != s for v in sums.values()):
        raise AssertionError("class sums must agree mod p")
    total = ctx.zero()
    for r, v in sorted(sums.items()):
        total = total + chi.value(r) * ((v - s) // p % p)
    return total * pow(d, -1, p)


def constant_term_oracle(theta: ThetaChar) -> FqElem:
    """a_0(f(T, theta)) = -(1 - psi(p)) B_{1, psi} with psi = theta omega^{-1}."""
    chi, p = theta.chi, theta.p
    t = (theta.e - 1) % (p - 1)
    psi_p = chi.value(p) if t == 0 else chi.ctx.zero()
    return -((chi.ctx.one() - psi_p) * bernoulli_b1(chi, t))


__all__ = [
    "DIRECT", "T_REGULARIZED", "IwasawaContext", "IwasawaSeries", "make_context",
    "f_chi_series", "f_chi_rational", "f_chi_tilde_rational", "f_chi_tilde_series",
    "f_chi_tilde_t_action", "iwasawa_series", "to_Tf", "f_bar", "lambda_invariant",
    "lambda_minus", "fw_expectation", "bernoulli_b1", "constant_term_oracle",
]
