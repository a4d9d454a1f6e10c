"""Finite fields F_q = F_p[x]/(P) and fixed-precision p-adic integers.

Field elements are encoded as integers ``c_0 + c_1 p + ... + c_{f-1} p^{f-1}``
where ``c_i`` is the coefficient of ``x^i``.  ``FieldCtx`` offers vectorized
operations on numpy arrays of such codes; ``FqElem`` is the scalar wrapper.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import InvalidParameter, NotInDomain, OrderUnavailable, PrecisionError

MAX_FIELD_SIZE = 1 << 22


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    k = 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


def odd_primes_upto(n: int) -> list[int]:
    return [k for k in range(3, n + 1) if is_prime(k)]


# -- polynomials over F_p as coefficient lists, low degree first -----------------------

def _ptrim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, m, p):
    a = _ptrim(a)
    m = _ptrim(m)
    inv = pow(m[-1], -1, p)
    while len(a) >= len(m):
        c = a[-1] * inv % p
        shift = len(a) - len(m)
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a = _ptrim(a)
    return a


def _pmulmod(a, b, m, p):
    prod = [0] * (len(a) + len(b))
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    return _pmod(prod, m, p)


def _ppowmod(a, e, m, p):
    result = [1]
    base = _pmod(a, m, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a, b = _ptrim(a), _ptrim(b)
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def is_irreducible(modulus, p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p (coefficients low to high)."""
    m = _ptrim([c % p for c in modulus])
    f = len(m) - 1
    if f < 1:
        return False
    if f == 1:
        return True
    x = [0, 1]
    if _ppowmod(x, p ** f, m, p) != _pmod(x, m, p):
        return False
    for r in prime_factors(f):
        h = _ppowmod(x, p ** (f // r), m, p)
        diff = _ptrim([(hi - xi) % p for hi, xi in itertools.zip_longest(h, x, fillvalue=0)])
        if len(_pgcd(m, diff, p)) != 1:
            return False
    return True


# -- the field -------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldCtx:
    p: int
    f: int
    modulus: tuple  # c_0 .. c_f, monic

    @property
    def q(self) -> int:
        return self.p ** self.f

    def __repr__(self):
        return f"FieldCtx(p={self.p}, f={self.f}, modulus={list(self.modulus)})"

    def to_json(self) -> dict:
        return {"p": self.p, "f": self.f, "modulus": list(self.modulus)}

    @cached_property
    def powers(self) -> np.ndarray:
        return self.p ** np.arange(self.f, dtype=np.int64)

    @cached_property
    def digit_table(self) -> np.ndarray:
        codes = np.arange(self.q, dtype=np.int64)
        return (codes[:, None] // self.powers[None, :]) % self.p

    def _mul_slow(self, a: int, b: int) -> int:
        da = [(a // self.p ** i) % self.p for i in range(self.f)]
        db = [(b // self.p ** i) % self.p for i in range(self.f)]
        r = _pmulmod(da, db, list(self.modulus), self.p)
        return sum(c * self.p ** i for i, c in enumerate(r))

    @cached_property
    def generator(self) -> int:
        """Least primitive element, ordering elements by (c_0, c_1, ...)."""
        q = self.q
        cofactors = [(q - 1) // r for r in prime_factors(q - 1)]
        for digits in itertools.product(range(self.p), repeat=self.f):
            code = sum(c * self.p ** i for i, c in enumerate(digits))
            if code == 0:
                continue
            if all(self._pow_slow(code, e) != 1 for e in cofactors):
                return code
        raise AssertionError("multiplicative group of a finite field is cyclic")

    def _pow_slow(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self._mul_slow(result, base)
            base = self._mul_slow(base, base)
            e >>= 1
        return result

    @cached_property
    def _exp_log(self):
        q = self.q
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        if self.f == 1:
            g = self.generator
            x = 1
            for i in range(q - 1):
                exp[i] = x
                x = x * g % self.p
        else:
            # multiplication by g is F_p-linear on digit vectors
            g = self.generator
            mat = np.zeros((self.f, self.f), dtype=np.int64)
            for i in range(self.f):
                col = self._mul_slow(g, self.p ** i)
                mat[:, i] = [(col // self.p ** k) % self.p for k in range(self.f)]
            v = np.zeros(self.f, dtype=np.int64)
            v[0] = 1
            for i in range(q - 1):
                exp[i] = int(v @ self.powers)
                v = (mat @ v) % self.p
        exp[q - 1:] = exp[: q - 1]
        log[exp[: q - 1]] = np.arange(q - 1)
        if len(set(exp[: q - 1].tolist())) != q - 1:
            raise AssertionError("generator is not primitive")
        return exp, log

    # vectorized operations on code arrays (ints work too)
    def add(self, a, b):
        if self.f == 1:
            return (np.asarray(a) + b) % self.p
        dt = self.digit_table
        return ((dt[a] + dt[b]) % self.p) @ self.powers

    def neg(self, a):
        if self.f == 1:
            return (-np.asarray(a)) % self.p
        return ((-self.digit_table[a]) % self.p) @ self.powers

    def sub(self, a, b):
        if self.f == 1:
            return (np.asarray(a) - b) % self.p
        dt = self.digit_table
        return ((dt[a] - dt[b]) % self.p) @ self.powers

    def mul(self, a, b):
        if self.f == 1:
            return (np.asarray(a) * b) % self.p
        exp, log = self._exp_log
        a = np.asarray(a)
        b = np.asarray(b)
        la, lb = log[a], log[b]
        out = exp[np.where(la < 0, 0, la) + np.where(lb < 0, 0, lb)]
        return np.where((la < 0) | (lb < 0), 0, out)

    def inv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in F_q")
        if self.f == 1:
            return np.vectorize(lambda v: pow(int(v), -1, self.p), otypes=[np.int64])(a)
        exp, log = self._exp_log
        return exp[(self.q - 1 - log[a]) % (self.q - 1)]

    def power(self, a: int, e: int) -> int:
        a = int(a)
        if a == 0:
            if e <= 0:
                raise ZeroDivisionError("0 ** non-positive")
            return 0
        if self.f == 1:
            return pow(a, e % (self.p - 1), self.p)
        exp, log = self._exp_log
        return int(exp[(int(log[a]) * e) % (self.q - 1)])

    def from_int(self, n: int) -> int:
        """Code of the image of an integer in the prime field."""
        return n % self.p

    def element(self, value) -> FqElem:
        if isinstance(value, FqElem):
            return value
        if isinstance(value, (list, tuple)):
            if len(value) > self.f:
                raise InvalidParameter("too many coefficients for this field")
            code = sum((int(c) % self.p) * self.p ** i for i, c in enumerate(value))
            return FqElem(self, code)
        return FqElem(self, int(value) % self.p)

    def zero(self) -> FqElem:
        return FqElem(self, 0)

    def one(self) -> FqElem:
        return FqElem(self, 1)

    def elements(self):
        return [FqElem(self, c) for c in range(self.q)]


@dataclass(frozen=True)
class FqElem:
    ctx: FieldCtx
    code: int

    @property
    def coeffs(self) -> tuple:
        p = self.ctx.p
        return tuple((self.code // p ** i) % p for i in range(self.ctx.f))

    def _other(self, other):
        if isinstance(other, FqElem):
            if other.ctx != self.ctx:
                raise InvalidParameter("field mismatch")
            return other.code
        if isinstance(other, (int, np.integer)):
            return int(other) % self.ctx.p
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FqElem(self.ctx, int(self.ctx.add(self.code, o)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FqElem(self.ctx, int(self.ctx.sub(self.code, o)))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FqElem(self.ctx, int(self.ctx.sub(o, self.code)))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FqElem(self.ctx, int(self.ctx.mul(self.code, o)))

    __rmul__ = __mul__

    def __neg__(self):
        return FqElem(self.ctx, int(self.ctx.neg(self.code)))

    def inverse(self) -> FqElem:
        return FqElem(self.ctx, int(self.ctx.inv(self.code)))

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self * FqElem(self.ctx, o).inverse()

    def __pow__(self, e: int):
        return FqElem(self.ctx, self.ctx.power(self.code, e))

    def __eq__(self, other):
        if isinstance(other, FqElem):
            return self.ctx == other.ctx and self.code == other.code
        if isinstance(other, (int, np.integer)):
            return self.code == int(other) % self.ctx.p
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx, self.code))

    def __bool__(self):
        return self.code != 0

    def order(self) -> int:
        if self.code == 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        n = self.ctx.q - 1
        k = n
        for r in prime_factors(n):
            while k % r == 0 and self.ctx.power(self.code, k // r) == 1:
                k //= r
        return k

    def __repr__(self):
        if self.ctx.f == 1:
            return f"{self.code}"
        return f"Fq{self.coeffs}"


@lru_cache(maxsize=None)
def make_field(p: int, f: int = 1) -> FieldCtx:
    """F_{p^f} modelled with the least monic irreducible modulus.

    Candidates are compared on their coefficient vectors from the constant
    term upwards, so ``make_field(3, 2)`` uses ``x^2 + 1``.
    """
    if not isinstance(p, int) or not is_prime(p) or p == 2:
        raise InvalidParameter(f"p must be an odd prime, got {p!r}")
    if not isinstance(f, int) or f < 1:
        raise InvalidParameter(f"extension degree must be >= 1, got {f!r}")
    if p ** f > MAX_FIELD_SIZE:
        raise InvalidParameter(f"field of size {p}^{f} is beyond the supported range")
    for low in itertools.product(range(p), repeat=f):
        cand = list(low) + [1]
        if is_irreducible(cand, p):
            return FieldCtx(p, f, tuple(cand))
    raise AssertionError("irreducible polynomials exist in every degree")


def multiplicative_order(a: int, n: int) -> int:
    if n == 1:
        return 1
    k, x = 1, a % n
    while x != 1:
        x = x * a % n
        k += 1
    return k


def fq_root_of_unity(ctx: FieldCtx, m: int) -> FqElem:
    """The canonical element g^((q-1)/m) of order exactly m."""
    if m < 1 or (ctx.q - 1) % m:
        raise OrderUnavailable(f"{m} does not divide q - 1 = {ctx.q - 1}")
    return FqElem(ctx, ctx.power(ctx.generator, (ctx.q - 1) // m))


# -- fixed precision p-adic integers ---------------------------------------------------

@dataclass(frozen=True)
class ZpFixed:
    """An element of Z_p known modulo p^prec."""

    p: int
    prec: int
    residue: int

    def __post_init__(self):
        if self.prec < 0:
            raise PrecisionError("negative precision")
        object.__setattr__(self, "residue", int(self.residue) % self.p ** self.prec)

    @property
    def modulus(self) -> int:
        return self.p ** self.prec

    def _coerce(self, other):
        if isinstance(other, ZpFixed):
            if other.p != self.p:
                raise InvalidParameter("mixed primes")
            return min(self.prec, other.prec), other.residue
        if isinstance(other, (int, np.integer)):
            return self.prec, int(other)
        return None

    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return ZpFixed(self.p, c[0], self.residue + c[1])

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return ZpFixed(self.p, c[0], self.residue - c[1])

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return ZpFixed(self.p, c[0], c[1] - self.residue)

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return ZpFixed(self.p, c[0], self.residue * c[1])

    __rmul__ = __mul__

    def __neg__(self):
        return ZpFixed(self.p, self.prec, -self.residue)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return ZpFixed(self.p, self.prec, pow(self.residue, e, self.modulus))

    def is_unit(self) -> bool:
        return self.residue % self.p != 0

    def inverse(self) -> ZpFixed:
        if not self.is_unit():
            raise NotInDomain("only units of Z_p are invertible")
        return ZpFixed(self.p, self.prec, pow(self.residue, -1, self.modulus))

    def valuation(self) -> int:
        """p-adic valuation, capped at ``prec`` for values known to be 0."""
        if self.residue == 0:
            return self.prec
        v, r = 0, self.residue
        while r % self.p == 0:
            r //= self.p
            v += 1
        return v

    def reduce(self, prec: int) -> ZpFixed:
        if prec > self.prec:
            raise PrecisionError(f"value only known to {self.prec} digits, {prec} requested")
        return ZpFixed(self.p, prec, self.residue)

    def __int__(self):
        return self.residue

    def __eq__(self, other):
        if isinstance(other, ZpFixed):
            return (self.p, self.prec, self.residue) == (other.p, other.prec, other.residue)
        if isinstance(other, (int, np.integer)):
            return self.residue == int(other) % self.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.prec, self.residue))

    def __repr__(self):
        return f"ZpFixed({self.residue} mod {self.p}^{self.prec})"


def padic_digits(x: ZpFixed) -> list[int]:
    out, r = [], x.residue
    for _ in range(x.prec):
        out.append(r % x.p)
        r //= x.p
    return out


def teichmuller(a, p: int, P: int) -> ZpFixed:
    """omega(a) mod p^P: the (p-1)th root of unity congruent to a mod p."""
    a = int(a)
    if a % p == 0:
        raise NotInDomain(f"Teichmuller lift undefined for {a} divisible by {p}")
    mod = p ** P
    x = a % mod
    # one correct digit per Frobenius step
    for _ in range(P):
        x = pow(x, p, mod)
    if pow(x, p, mod) != x:
        raise AssertionError("Teichmuller iteration did not stabilise")
    return ZpFixed(p, P, x)


def _log_terms_needed(p: int, P: int) -> int:
    k = 1
    while k - _floor_log(k, p) < P:
        k += 1
    return k


def _floor_log(k: int, p: int) -> int:
    e = 0
    while p ** (e + 1) <= k:
        e += 1
    return e


def padic_log(u: ZpFixed) -> ZpFixed:
    """sum_{k>=1} (-1)^(k+1) (u-1)^k / k, to the precision of ``u``.

    Each term is evaluated exactly: the p-part of k is divided out of the
    integer (u-1)^k before reducing, so no digits are lost to denominators.
    """
    p, P = u.p, u.prec
    if P == 0:
        return ZpFixed(p, 0, 0)
    if u.residue % p != 1:
        raise NotInDomain("p-adic logarithm needs u = 1 mod p")
    x = u.residue - 1
    if x == 0:
        return ZpFixed(p, P, 0)
    mod = p ** P
    total = 0
    for k in range(1, _log_terms_needed(p, P) + 1):
        v, kk = 0, k
        while kk % p == 0:
            kk //= p
            v += 1
        num = pow(x, k, p ** (P + v)) // p ** v
        term = num * pow(kk, -1, mod)
        total += term if k % 2 else -term
    return ZpFixed(p, P, total)


def ell_exponent(a, ictx, m: int) -> ZpFixed:
    """log_p(a) / log_p(kappa0) mod p^m, where ``ictx`` provides p and kappa0.

    ``a`` is an integer or a ZpFixed known mod p^(m+1); the Iwasawa log
    ignores the torsion part, so a is first divided by its Teichmuller lift.
    """
    p = ictx.p
    if m < 0:
        raise InvalidParameter("level must be non-negative")
    if isinstance(a, ZpFixed):
        a = a.reduce(m + 1).residue
    a = int(a)
    if a % p == 0:
        raise NotInDomain(f"ell undefined for {a} divisible by {p}")
    return ZpFixed(p, m, _ell(a, p, ictx.kappa0, m))


@lru_cache(maxsize=None)
def _stripped_log_inverse(p: int, kappa0: int, m: int) -> int:
    den = padic_log(ZpFixed(p, m + 1, kappa0)).residue // p
    if den % p == 0:
        raise InvalidParameter(f"{kappa0} is not a topological generator of 1 + pZ_p")
    return pow(den, -1, p ** m)


def _ell(a: int, p: int, kappa0: int, m: int) -> int:
    if m == 0:
        return 0
    P = m + 1
    unit = ZpFixed(p, P, a) * teichmuller(a, p, P).inverse()
    # both logs have valuation exactly 1 (or the numerator vanishes)
    num = padic_log(unit).residue // p
    return num * _stripped_log_inverse(p, kappa0, m) % p ** m


@lru_cache(maxsize=32)
def ell_table(p: int, kappa0: int, m: int) -> np.ndarray:
    """ell(b) mod p^m for every 0 <= b < p^(m+1); -1 where p | b."""
    n = p ** (m + 1)
    table = np.full(n, -1, dtype=np.int64)
    for b in range(1, n):
        if b % p:
            table[b] = _ell(b, p, kappa0, m)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=64)
def teichmuller_residues(p: int, P: int) -> tuple:
    """omega(1), ..., omega(p-1) as integers mod p^P (index a-1)."""
    return tuple(teichmuller(a, p, P).residue for a in range(1, p))
