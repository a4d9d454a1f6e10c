"""Truncated power series over F_q and the operators D, U, gamma_delta.

A ``TruncSeries`` of precision N holds c_0 .. c_{N-1} as an (N, f) array of
F_p digits.  Most operators go through the "(1+T)-basis": writing X = 1 + T,
F(T) = sum mu_b X^b mod T^N.  Over F_p the change of basis factors over the
base-p digits of the index because (X - 1)^{p^i} = X^{p^i} - 1, so it costs
O(N p log_p N) and lets compositions F((1+T)^c - 1) act as index maps
b -> c b mod p^K.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .arith import FieldCtx, FqElem, ZpFixed, padic_digits, teichmuller_residues
from .errors import InvalidParameter, NotAPowerSeries, PrecisionError

FFT_THRESHOLD = 4096


class TruncSeries:
    """An element of F_q[[T]] known modulo T^prec."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs):
        arr = np.asarray(coeffs, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2 or arr.shape[1] != ctx.f:
            raise InvalidParameter(f"coefficients must have shape (N, {ctx.f})")
        arr = arr % ctx.p
        arr.setflags(write=False)
        self.ctx = ctx
        self.coeffs = arr

    # construction ---------------------------------------------------------
    @classmethod
    def zero(cls, ctx, prec):
        return cls(ctx, np.zeros((prec, ctx.f), dtype=np.int64))

    @classmethod
    def one(cls, ctx, prec):
        return cls.monomial(ctx, 0, prec)

    @classmethod
    def monomial(cls, ctx, k, prec, coeff=1):
        arr = np.zeros((prec, ctx.f), dtype=np.int64)
        if k < prec:
            arr[k] = _digits(ctx, coeff)
        return cls(ctx, arr)

    @classmethod
    def from_list(cls, ctx, values, prec=None):
        """Coefficients given as ints (prime field), digit tuples or FqElems."""
        values = list(values)
        prec = len(values) if prec is None else prec
        arr = np.zeros((prec, ctx.f), dtype=np.int64)
        for k, v in enumerate(values[:prec]):
            arr[k] = _digits(ctx, v)
        return cls(ctx, arr)

    @classmethod
    def from_codes(cls, ctx, codes):
        codes = np.asarray(codes, dtype=np.int64)
        if ctx.f == 1:
            return cls(ctx, codes[:, None])
        return cls(ctx, ctx.digit_table[codes])

    @classmethod
    def random(cls, ctx, prec, rng):
        return cls(ctx, rng.integers(0, ctx.p, size=(prec, ctx.f)))

    # basic protocol -------------------------------------------------------
    @property
    def prec(self) -> int:
        return self.coeffs.shape[0]

    @property
    def p(self) -> int:
        return self.ctx.p

    def codes(self) -> np.ndarray:
        if self.ctx.f == 1:
            return self.coeffs[:, 0].copy()
        return self.coeffs @ self.ctx.powers

    def coeff(self, k: int) -> FqElem:
        if k >= self.prec:
            raise PrecisionError(f"coefficient {k} lies beyond precision {self.prec}")
        return FqElem(self.ctx, int(self.coeffs[k] @ self.ctx.powers))

    def __getitem__(self, k):
        return self.coeff(k)

    def __len__(self):
        return self.prec

    def valuation(self) -> int:
        nz = np.flatnonzero(self.coeffs.any(axis=1))
        return int(nz[0]) if len(nz) else self.prec

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def is_constant(self) -> bool:
        return not self.coeffs[1:].any()

    def truncate(self, prec: int) -> TruncSeries:
        if prec > self.prec:
            raise PrecisionError(f"cannot raise precision {self.prec} to {prec}")
        return TruncSeries(self.ctx, self.coeffs[:prec])

    def _check(self, other):
        if not isinstance(other, TruncSeries):
            return False
        if other.ctx != self.ctx:
            raise InvalidParameter("series over different fields")
        return True

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.ctx == other.ctx and self.prec == other.prec and np.array_equal(self.coeffs, other.coeffs)

    __hash__ = None

    def agrees(self, other: TruncSeries, n: int | None = None) -> bool:
        """Equality of the first n coefficients (default: common precision)."""
        self._check(other)
        n = min(self.prec, other.prec) if n is None else n
        if n > min(self.prec, other.prec):
            raise PrecisionError("comparison window exceeds known precision")
        return np.array_equal(self.coeffs[:n], other.coeffs[:n])

    def __add__(self, other):
        if not self._check(other):
            return NotImplemented
        n = min(self.prec, other.prec)
        return TruncSeries(self.ctx, self.coeffs[:n] + other.coeffs[:n])

    def __sub__(self, other):
        if not self._check(other):
            return NotImplemented
        n = min(self.prec, other.prec)
        return TruncSeries(self.ctx, self.coeffs[:n] - other.coeffs[:n])

    def __neg__(self):
        return TruncSeries(self.ctx, -self.coeffs)

    def scale(self, c) -> TruncSeries:
        """Multiply by a scalar from F_q (FqElem, digit tuple or int)."""
        if isinstance(c, (int, np.integer)) or _in_prime_field(self.ctx, c):
            return TruncSeries(self.ctx, self.coeffs * (_code(self.ctx, c) % self.p))
        codes = self.ctx.mul(self.codes(), _code(self.ctx, c))
        return TruncSeries.from_codes(self.ctx, codes)

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            return mul_trunc(self, other)
        if isinstance(other, (int, np.integer, FqElem)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def shift(self, k: int) -> TruncSeries:
        """Multiply by T^k (precision grows by k)."""
        arr = np.zeros((self.prec + k, self.ctx.f), dtype=np.int64)
        arr[k:] = self.coeffs
        return TruncSeries(self.ctx, arr)

    def to_list(self):
        """Coefficients as ints (prime field) or digit tuples."""
        if self.ctx.f == 1:
            return [int(c) for c in self.coeffs[:, 0]]
        return [tuple(int(x) for x in row) for row in self.coeffs]

    def to_json(self) -> dict:
        return {**self.ctx.to_json(), "prec": self.prec,
                "coeffs": [[int(x) for x in row] for row in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> TruncSeries:
        from .arith import make_field

        ctx = make_field(data["p"], data["f"])
        if list(ctx.modulus) != list(data["modulus"]):
            raise InvalidParameter("serialized field modulus differs from the canonical one")
        arr = np.asarray(data["coeffs"], dtype=np.int64).reshape(data["prec"], ctx.f)
        return cls(ctx, arr)

    def __repr__(self):
        shown = self.to_list()[:8]
        more = ", ..." if self.prec > 8 else ""
        return f"TruncSeries({shown}{more} + O(T^{self.prec}))"


def _code(ctx, v) -> int:
    if isinstance(v, FqElem):
        return v.code
    if isinstance(v, (tuple, list)):
        return ctx.element(v).code
    return int(v) % ctx.p


def _digits(ctx, v):
    c = _code(ctx, v)
    return [(c // ctx.p ** i) % ctx.p for i in range(ctx.f)]


def _in_prime_field(ctx, v) -> bool:
    return _code(ctx, v) < ctx.p


# -- multiplication and division -------------------------------------------------------

def _convolve_mod(a: np.ndarray, b: np.ndarray, n: int, p: int) -> np.ndarray:
    a, b = a[:n], b[:n]
    if min(len(a), len(b)) < FFT_THRESHOLD:
        return np.convolve(a, b)[:n] % p
    size = 1 << (len(a) + len(b) - 1).bit_length()
    fa = np.fft.rfft(a.astype(np.float64), size)
    fb = np.fft.rfft(b.astype(np.float64), size)
    out = np.rint(np.fft.irfft(fa * fb, size)[:n]).astype(np.int64)
    return out % p


def _mul_arrays(ctx, a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    p, f = ctx.p, ctx.f
    if f == 1:
        return _convolve_mod(a[:, 0], b[:, 0], n, p)[:, None]
    layers = np.zeros((2 * f - 1, n), dtype=np.int64)
    for i in range(f):
        for j in range(f):
            layers[i + j] += _convolve_mod(a[:, i], b[:, j], n, p)
    mod = np.asarray(ctx.modulus, dtype=np.int64)
    for top in range(2 * f - 2, f - 1, -1):
        c = layers[top] % p
        for k in range(f):
            layers[top - f + k] -= c * mod[k]
        layers[top] = 0
    return (layers[:f].T % p).astype(np.int64)


def mul_trunc(F: TruncSeries, G: TruncSeries) -> TruncSeries:
    F._check(G)
    n = min(F.prec, G.prec)
    return TruncSeries(F.ctx, _mul_arrays(F.ctx, F.coeffs, G.coeffs, n))


def _inverse_prime_field(g: np.ndarray, n: int, p: int) -> np.ndarray:
    """1/g mod T^n for a prime-field series with g[0] != 0 (Newton iteration)."""
    h = np.array([pow(int(g[0]), -1, p)], dtype=np.int64)
    k = 1
    while k < n:
        k = min(2 * k, n)
        gh = _convolve_mod(g[:k], h, k, p)
        corr = (-gh) % p
        corr[0] = (corr[0] + 2) % p
        h = _convolve_mod(h, corr, k, p)
    return h[:n]


def div_exact(F: TruncSeries, G: TruncSeries) -> TruncSeries:
    """H with H * G = F, to precision min(prec F, prec G) - val(G)."""
    F._check(G)
    ctx, p = F.ctx, F.p
    vG = G.valuation()
    if vG >= G.prec:
        raise ZeroDivisionError("divisor is zero to its known precision")
    vF = F.valuation()
    if vF < vG:
        raise NotAPowerSeries(f"valuation {vF} of the dividend is below valuation {vG} of the divisor")
    n = min(F.prec, G.prec) - vG
    f = F.coeffs[vG:vG + n]
    g = G.coeffs[vG:vG + n]
    if not g[:, 1:].any():
        g0 = g[:, 0]
        nz = np.flatnonzero(g0[1:]) + 1
        if len(nz) <= 32:
            # sparse divisor: run the linear recurrence directly
            inv0 = pow(int(g0[0]), -1, p)
            taps = [(int(i), int(g0[i])) for i in nz]
            out = np.zeros((n, ctx.f), dtype=np.int64)
            for c in range(ctx.f):
                src = [int(x) for x in f[:, c]]
                h = [0] * n
                for k in range(n):
                    acc = src[k]
                    for i, gi in taps:
                        if i > k:
                            break
                        acc -= gi * h[k - i]
                    h[k] = acc * inv0 % p
                out[:, c] = h
            return TruncSeries(ctx, out)
        inv = _inverse_prime_field(g0, n, p)
        out = np.stack([_convolve_mod(f[:, c], inv, n, p) for c in range(ctx.f)], axis=1)
        return TruncSeries(ctx, out)
    # general F_q divisor: schoolbook recurrence on codes
    fc = f @ ctx.powers
    gc = g @ ctx.powers
    inv0 = int(ctx.inv(int(gc[0])))
    h = np.zeros(n, dtype=np.int64)
    for k in range(n):
        acc = int(fc[k])
        if k:
            prods = ctx.mul(gc[1:k + 1], h[k - 1::-1][:k])
            for v in np.atleast_1d(prods):
                acc = int(ctx.sub(acc, int(v)))
        h[k] = int(ctx.mul(acc, inv0))
    return TruncSeries.from_codes(ctx, h)


# -- the (1+T)-basis -------------------------------------------------------------------

@lru_cache(maxsize=None)
def _binomial_matrix(p: int, sign: int) -> np.ndarray:
    """M[a, b] = coefficient of Y^b in (Y + sign)^a, reduced mod p."""
    m = np.zeros((p, p), dtype=np.int64)
    for a in range(p):
        for b in range(a + 1):
            m[a, b] = math.comb(a, b) * sign ** (a - b) % p
    m.setflags(write=False)
    return m


def _padded_size(n: int, p: int) -> tuple[int, int]:
    K, size = 0, 1
    while size < n:
        K += 1
        size *= p
    return K, size


def _digitwise(arr: np.ndarray, p: int, sign: int) -> np.ndarray:
    """Apply the substitution Y -> Y + sign to an (p^K, f) coefficient array."""
    size, f = arr.shape
    K, padded = _padded_size(size, p)
    if padded != size:
        raise AssertionError("length must be a power of p")
    m = _binomial_matrix(p, sign)
    x = arr.reshape((p,) * K + (f,))
    for axis in range(K):
        x = np.moveaxis(np.tensordot(x, m, axes=([axis], [0])), -1, axis) % p
    return x.reshape(size, f)


def _to_x_basis(coeffs: np.ndarray, p: int, size: int) -> np.ndarray:
    """T-coefficients (padded to ``size`` = p^K) -> (1+T)-basis coefficients."""
    arr = np.zeros((size, coeffs.shape[1]), dtype=np.int64)
    arr[: len(coeffs)] = coeffs[:size]
    return _digitwise(arr, p, -1)


def _to_t_basis(mu: np.ndarray, p: int) -> np.ndarray:
    return _digitwise(mu, p, 1)


def taylor_shift(F: TruncSeries) -> list[FqElem]:
    """mu_0 .. mu_{N-1} with F = sum mu_b (1+T)^b mod T^N."""
    _, size = _padded_size(F.prec, F.p)
    mu = _to_x_basis(F.coeffs, F.p, size)[: F.prec]
    return [FqElem(F.ctx, int(row @ F.ctx.powers)) for row in mu]


def from_x_basis(ctx: FieldCtx, mu, prec: int) -> TruncSeries:
    """sum_b mu_b (1+T)^b truncated to T^prec, for b < len(mu)."""
    arr = np.asarray([_digits(ctx, m) for m in mu], dtype=np.int64).reshape(-1, ctx.f)
    _, size = _padded_size(max(len(arr), prec, 1), ctx.p)
    padded = np.zeros((size, ctx.f), dtype=np.int64)
    padded[: len(arr)] = arr
    return TruncSeries(ctx, _to_t_basis(padded, ctx.p)[:prec])


def _exponent_mod(c, p: int, K: int) -> int:
    if isinstance(c, ZpFixed):
        if c.p != p:
            raise InvalidParameter("exponent lives in Z_q for a different prime")
        if c.prec < K:
            raise PrecisionError(f"exponent known to {c.prec} digits, {K} needed")
        return c.residue % p ** K
    return int(c) % p ** K


def _map_exponents(mu: np.ndarray, c: int, size: int) -> np.ndarray:
    idx = (np.arange(size, dtype=np.int64) * c) % size
    out = np.zeros_like(mu)
    np.add.at(out, idx, mu)
    return out


def compose_unit_exponent(F: TruncSeries, c) -> TruncSeries:
    """F((1+T)^c - 1) for c in Z_p (int or ZpFixed), to the precision of F.

    (1+T)^c mod T^N only depends on c mod p^K with p^K >= N, so in the
    (1+T)-basis the substitution is the index map b -> c b mod p^K.
    """
    p = F.p
    K, size = _padded_size(F.prec, p)
    cm = _exponent_mod(c, p, K)
    mu = _to_x_basis(F.coeffs, p, size)
    mu = _map_exponents(mu, cm, size) % p
    return TruncSeries(F.ctx, _to_t_basis(mu, p)[: F.prec])


def binomial_power(ctx: FieldCtx, c, prec: int) -> TruncSeries:
    """(1+T)^c mod T^prec via prod_i (1 + T^{p^i})^{c_i} over the base-p digits of c."""
    p = ctx.p
    K, _ = _padded_size(prec, p)
    cm = _exponent_mod(c, p, K)
    digits = padic_digits(ZpFixed(p, K, cm))
    out = np.zeros(prec, dtype=np.int64)
    out[0] = 1
    for i, ci in enumerate(digits):
        step = p ** i
        if ci == 0 or step >= prec:
            continue
        acc = np.zeros(prec, dtype=np.int64)
        for k in range(ci + 1):
            shift = k * step
            if shift >= prec:
                break
            acc[shift:] += math.comb(ci, k) * out[: prec - shift]
        out = acc % p
    arr = np.zeros((prec, ctx.f), dtype=np.int64)
    arr[:, 0] = out
    return TruncSeries(ctx, arr)


def involution(F: TruncSeries) -> TruncSeries:
    """F((1+T)^{-1} - 1)."""
    return compose_unit_exponent(F, -1)


# -- operators -------------------------------------------------------------------------

def op_D(F: TruncSeries) -> TruncSeries:
    """(1+T) dF/dT; loses one coefficient of precision."""
    n = F.prec
    if n < 2:
        raise PrecisionError("D needs precision at least 2")
    k = np.arange(1, n, dtype=np.int64)[:, None]
    der = (F.coeffs[1:] * k) % F.p
    out = der.copy()
    out[1:] += der[:-1]
    return TruncSeries(F.ctx, out)


def op_U(F: TruncSeries) -> TruncSeries:
    """U = D^{p-1}: keeps the (1+T)^a components with p not dividing a."""
    if F.prec < F.p:
        raise PrecisionError(f"U needs precision at least p = {F.p}")
    for _ in range(F.p - 1):
        F = op_D(F)
    return F


def op_U_projection(F: TruncSeries) -> TruncSeries:
    """U computed by discarding mu_b for p | b; no precision loss."""
    p = F.p
    _, size = _padded_size(F.prec, p)
    mu = _to_x_basis(F.coeffs, p, size)
    mu[::p] = 0
    return TruncSeries(F.ctx, _to_t_basis(mu, p)[: F.prec])


def op_gamma(delta: int, F: TruncSeries) -> TruncSeries:
    """gamma_delta(F) = 1/(p-1) sum_eta eta^delta F((1+T)^eta - 1) over the (p-1)th roots of unity."""
    p = F.p
    _, size = _padded_size(F.prec, p)
    mu = _to_x_basis(F.coeffs, p, size)
    return TruncSeries(F.ctx, _to_t_basis(gamma_x_basis(delta, mu, p), p)[: F.prec])


def gamma_x_basis(delta: int, mu: np.ndarray, p: int) -> np.ndarray:
    """gamma_delta on (1+T)-basis coefficients of length p^K."""
    size = len(mu)
    K, _ = _padded_size(size, p)
    lifts = teichmuller_residues(p, max(K, 1))
    idx = np.arange(size, dtype=np.int64)
    acc = np.zeros_like(mu)
    for a, eta in zip(range(1, p), lifts):
        w = pow(a, delta % (p - 1), p)
        acc[(idx * (eta % size)) % size] += w * mu
        acc %= p
    # 1/(p-1) = -1 in F_p
    return (-acc) % p


def t_act(H, F: TruncSeries, ictx) -> TruncSeries:
    """H(t) F = sum_b H_b F((1+T)^{kappa0^b} - 1) for a pseudo-polynomial H."""
    p = F.p
    K, size = _padded_size(F.prec, p)
    mu = _to_x_basis(F.coeffs, p, size)
    acc = np.zeros_like(mu)
    for b, coeff in H.terms:
        c = _kappa_power(ictx.kappa0, b, p, K)
        part = _map_exponents(mu, c, size) % p
        term = TruncSeries(F.ctx, part)
        acc += term.scale(coeff).coeffs
    return TruncSeries(F.ctx, _to_t_basis(acc % p, p)[: F.prec])


def _kappa_power(kappa0: int, b, p: int, K: int) -> int:
    """kappa0^b mod p^K; kappa0 is 1 mod p so b is only needed mod p^(K-1)."""
    mod = p ** K
    if isinstance(b, ZpFixed):
        need = max(K - 1, 0)
        if b.prec < need:
            raise PrecisionError(f"exponent known to {b.prec} digits, {need} needed")
        return pow(kappa0, b.residue % p ** need if need else 0, mod)
    return pow(kappa0, int(b), mod)


# -- polynomials and rational functions over F_q ---------------------------------------

def _ptrim(a):
    a = [int(x) for x in a]
    while a and a[-1] == 0:
        a.pop()
    return a


def _padd(ctx, a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _ptrim(int(ctx.add(x, y)) for x, y in zip(a, b))


def _pneg(ctx, a):
    return [int(ctx.neg(x)) for x in a]


def _pmul(ctx, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = int(ctx.add(out[i + j], int(ctx.mul(x, y))))
    return _ptrim(out)


def _pscale(ctx, a, c):
    return _ptrim(int(ctx.mul(x, c)) for x in a)


def _pdivmod(ctx, a, b):
    a, b = _ptrim(a), _ptrim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = int(ctx.inv(b[-1]))
    quot = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = int(ctx.mul(a[-1], inv))
        s = len(a) - len(b)
        quot[s] = c
        for i, y in enumerate(b):
            a[s + i] = int(ctx.sub(a[s + i], int(ctx.mul(c, y))))
        a = _ptrim(a)
    return _ptrim(quot), a


def _pgcd(ctx, a, b):
    a, b = _ptrim(a), _ptrim(b)
    while b:
        a, b = b, _pdivmod(ctx, a, b)[1]
    return a


def _pcompose(ctx, a, g):
    out = []
    for c in reversed(_ptrim(a)):
        out = _padd(ctx, _pmul(ctx, out, g), [c])
    return out


def _ppow(ctx, a, e):
    out = [1]
    for _ in range(e):
        out = _pmul(ctx, out, a)
    return out


def _x_power_minus_one(ctx, k):
    """(1+T)^k - 1 as a polynomial in T, k >= 0."""
    return _padd(ctx, _ppow(ctx, [1, 1], k), [int(ctx.neg(1))])


def _pval(a):
    for i, x in enumerate(a):
        if x:
            return i
    return math.inf


class RationalFn:
    """numerator / denominator in F_q(T), reduced, with monic denominator."""

    __slots__ = ("ctx", "num", "den")

    def __init__(self, ctx: FieldCtx, num, den=(1,)):
        num, den = _ptrim(_code(ctx, c) for c in num), _ptrim(_code(ctx, c) for c in den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        g = _pgcd(ctx, num, den) if num else den
        num = _pdivmod(ctx, num, g)[0]
        den = _pdivmod(ctx, den, g)[0]
        lead = int(ctx.inv(den[-1]))
        self.ctx = ctx
        self.num = tuple(_pscale(ctx, num, lead))
        self.den = tuple(_pscale(ctx, den, lead))

    def __eq__(self, other):
        if not isinstance(other, RationalFn):
            return NotImplemented
        return (self.ctx, self.num, self.den) == (other.ctx, other.num, other.den)

    def __hash__(self):
        return hash((self.ctx, self.num, self.den))

    def __add__(self, other):
        if not isinstance(other, RationalFn):
            return NotImplemented
        ctx = self.ctx
        num = _padd(ctx, _pmul(ctx, self.num, other.den), _pmul(ctx, other.num, self.den))
        return RationalFn(ctx, num, _pmul(ctx, self.den, other.den))

    def __neg__(self):
        return RationalFn(self.ctx, _pneg(self.ctx, self.num), self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, RationalFn):
            return RationalFn(self.ctx, _pmul(self.ctx, self.num, other.num),
                              _pmul(self.ctx, self.den, other.den))
        if isinstance(other, (int, np.integer, FqElem)):
            return RationalFn(self.ctx, _pscale(self.ctx, self.num, _code(self.ctx, other)), self.den)
        return NotImplemented

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.num

    def compose_power(self, k: int) -> RationalFn:
        """R((1+T)^k - 1) for an integer k."""
        ctx = self.ctx
        if k >= 0:
            g = _x_power_minus_one(ctx, k)
            return RationalFn(ctx, _pcompose(ctx, self.num, g), _pcompose(ctx, self.den, g))
        # (1+T)^{-k'} - 1 = (1 - X^{k'}) / X^{k'}; clear X-powers from both sides
        kk = -k
        top = _pneg(ctx, _x_power_minus_one(ctx, kk))
        xk = _ppow(ctx, [1, 1], kk)
        deg = max(len(self.num), len(self.den)) - 1

        def homogenise(poly):
            out = []
            for i, c in enumerate(poly):
                term = _pmul(ctx, _ppow(ctx, top, i), _ppow(ctx, xk, deg - i))
                out = _padd(ctx, out, _pscale(ctx, term, c))
            return out

        return RationalFn(ctx, homogenise(self.num), homogenise(self.den))

    def expand(self, prec: int) -> TruncSeries:
        return expand_rational(self, prec)

    def to_json(self) -> dict:
        return {**self.ctx.to_json(), "numerator": list(self.num), "denominator": list(self.den)}

    def __repr__(self):
        return f"RationalFn(num={list(self.num)}, den={list(self.den)})"


def _poly_series(ctx, poly, prec):
    codes = np.zeros(prec, dtype=np.int64)
    codes[: min(len(poly), prec)] = poly[:prec]
    return TruncSeries.from_codes(ctx, codes)


def expand_rational(R: RationalFn, prec: int) -> TruncSeries:
    vn, vd = _pval(R.num), _pval(R.den)
    if vn < vd:
        raise NotAPowerSeries("rational function has a pole at T = 0")
    if not R.num:
        return TruncSeries.zero(R.ctx, prec)
    n = prec + vd
    return div_exact(_poly_series(R.ctx, R.num, n), _poly_series(R.ctx, R.den, n))
