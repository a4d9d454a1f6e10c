"""Dirichlet characters with values reduced into F_q, and their twists by omega.

A character is stored exactly: as the vector of exponents k_i with
chi(g_i) = exp(2 pi i k_i / n_i) on the canonical generators g_i of
(Z/dZ)^*.  Reduction mod pi sends a primitive L-th root of unity (L the
exponent of the group) to the canonical primitive L'-th root of unity of F_q,
L' being the prime-to-p part of L; p-power roots of unity reduce to 1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

from .arith import FieldCtx, FqElem, fq_root_of_unity, make_field, multiplicative_order
from .errors import FieldTooSmall, InvalidParameter


def _factor(n: int) -> list[tuple[int, int]]:
    out, k = [], 2
    while k * k <= n:
        if n % k == 0:
            e = 0
            while n % k == 0:
                n //= k
                e += 1
            out.append((k, e))
        k += 1
    if n > 1:
        out.append((n, 1))
    return out


def euler_phi(n: int) -> int:
    result = n
    for ell, _ in _factor(n):
        result = result // ell * (ell - 1)
    return result


def _least_primitive_root(m: int) -> int:
    order = euler_phi(m)
    for g in range(2, m):
        if math.gcd(g, m) == 1 and multiplicative_order(g, m) == order:
            return g
    return 1


def _crt_lift(residue: int, modulus: int, d: int) -> int:
    """The integer mod d congruent to residue mod modulus and to 1 elsewhere."""
    other = d // modulus
    for x in range(residue % modulus, d, modulus):
        if x % other == 1 % other:
            return x
    raise AssertionError("CRT lift exists for coprime moduli")


@dataclass(frozen=True)
class UnitGroup:
    """(Z/dZ)^* as a product of cyclic factors with canonical generators."""

    d: int
    orders: tuple
    generators: tuple  # lifted to Z/dZ
    logs: tuple  # logs[a] = exponent vector of a, or None for non-units

    @property
    def exponent(self) -> int:
        return math.lcm(*self.orders) if self.orders else 1

    @property
    def size(self) -> int:
        return math.prod(self.orders)


@lru_cache(maxsize=None)
def unit_group(d: int) -> UnitGroup:
    if d < 1:
        raise InvalidParameter("modulus must be positive")
    orders, gens = [], []
    for ell, e in _factor(d):
        q = ell ** e
        if ell == 2 and e >= 3:
            for g, n in ((q - 1, 2), (5, q // 4)):
                orders.append(n)
                gens.append(_crt_lift(g, q, d))
        elif q > 2:
            g = _least_primitive_root(q)
            orders.append(euler_phi(q))
            gens.append(_crt_lift(g, q, d))
    # discrete logs by enumerating the group
    logs = [None] * d
    for vec in itertools.product(*(range(n) for n in orders)):
        a = 1
        for g, k in zip(gens, vec):
            a = a * pow(g, k, d) % d
        logs[a % d] = vec
    if d == 1:
        logs = [()]
    return UnitGroup(d, tuple(orders), tuple(gens), tuple(logs))


def character_field_degree(p: int, d: int) -> int:
    """Least f such that every character mod d reduces into F_{p^f}."""
    L = unit_group(d).exponent
    while L % p == 0:
        L //= p
    return multiplicative_order(p, L)


def roots_of_unity_field_degree(p: int, d: int) -> int:
    """Least f such that F_{p^f} contains the d-th roots of unity and the character values."""
    return math.lcm(character_field_degree(p, d), multiplicative_order(p, d))


@dataclass(frozen=True)
class DirichletChar:
    d: int
    ctx: FieldCtx
    exponents: tuple

    @property
    def p(self) -> int:
        return self.ctx.p

    @cached_property
    def group(self) -> UnitGroup:
        return unit_group(self.d)

    @property
    def index(self) -> int:
        idx, radix = 0, 1
        for k, n in zip(self.exponents, self.group.orders):
            idx += k * radix
            radix *= n
        return idx

    @cached_property
    def _reduction(self):
        L = self.group.exponent
        Lp = L
        while Lp % self.p == 0:
            Lp //= self.p
        return L, Lp, fq_root_of_unity(self.ctx, Lp)

    def angle(self, a: int):
        """chi(a) = exp(2 pi i * angle) exactly, or None off the units."""
        vec = self.group.logs[a % self.d]
        if vec is None:
            return None
        s = sum(Fraction(k * v, n) for k, v, n in zip(self.exponents, vec, self.group.orders))
        return s - math.floor(s)

    def __call__(self, a: int) -> FqElem:
        return self.value(a)

    def value(self, a: int) -> FqElem:
        ang = self.angle(a)
        if ang is None:
            return self.ctx.zero()
        L, Lp, rho = self._reduction
        t = ang * L
        assert t.denominator == 1
        return rho ** (int(t) % Lp)

    @cached_property
    def generator_images(self) -> tuple:
        return tuple(self.value(g) for g in self.group.generators)

    @property
    def order(self) -> int:
        return math.lcm(*(n // math.gcd(k, n) for k, n in zip(self.exponents, self.group.orders))) if self.exponents else 1

    def is_trivial(self) -> bool:
        return all(k == 0 for k in self.exponents)

    def over(self, ctx: FieldCtx) -> DirichletChar:
        """The same characteristic-zero character reduced into another field."""
        if ctx.p != self.p:
            raise InvalidParameter("characteristic mismatch")
        chi = DirichletChar(self.d, ctx, self.exponents)
        chi._reduction  # validates that the field is large enough
        return chi

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "index": self.index,
            "parity": parity(self),
            "conductor": conductor(self),
            "order": self.order,
        }

    def __repr__(self):
        return f"DirichletChar(d={self.d}, index={self.index})"


def _check_field(d: int, ctx: FieldCtx):
    if d % ctx.p == 0:
        raise InvalidParameter(f"p = {ctx.p} divides the modulus {d}")
    need = character_field_degree(ctx.p, d)
    if ctx.f % need:
        raise FieldTooSmall(
            f"characters mod {d} need F_{{{ctx.p}^f}} with f a multiple of {need}; got f = {ctx.f}"
        )


def enumerate_chars(d: int, ctx: FieldCtx) -> list[DirichletChar]:
    _check_field(d, ctx)
    return [char_from_index(d, k, ctx) for k in range(unit_group(d).size)]


def char_from_index(d: int, index: int, ctx: FieldCtx) -> DirichletChar:
    _check_field(d, ctx)
    grp = unit_group(d)
    if not 0 <= index < grp.size:
        raise InvalidParameter(f"character index {index} out of range for modulus {d}")
    vec = []
    for n in grp.orders:
        vec.append(index % n)
        index //= n
    return DirichletChar(d, ctx, tuple(vec))


def default_field(p: int, d: int) -> FieldCtx:
    return make_field(p, character_field_degree(p, d))


def parse_char_address(text: str) -> tuple[int, int]:
    """Parse ``"d=<d>,index=<k>"``."""
    try:
        parts = dict(item.split("=", 1) for item in text.replace(" ", "").split(","))
        return int(parts["d"]), int(parts["index"])
    except (KeyError, ValueError) as exc:
        raise InvalidParameter(f"bad character address {text!r}; expected d=<d>,index=<k>") from exc


def conductor(chi: DirichletChar) -> int:
    d = chi.d
    for f0 in range(1, d + 1):
        if d % f0:
            continue
        if all(chi.angle(a) == 0 for a in range(1, d) if math.gcd(a, d) == 1 and a % f0 == 1 % f0):
            return f0
    return d


def parity(chi: DirichletChar) -> str:
    ang = chi.angle(-1)
    return "even" if ang == 0 else "odd"


def is_odd(chi: DirichletChar) -> bool:
    return parity(chi) == "odd"


@dataclass
class DistinctnessReport:
    distinct: bool
    witnesses: dict = field(default_factory=dict)  # (i, j) -> a with chi_i(a) != chi_j(a)
    failing_pairs: list = field(default_factory=list)

    def __bool__(self):
        return self.distinct


def distinct_mod_pi(chars) -> DistinctnessReport:
    chars = list(chars)
    if len({(c.d, c.ctx) for c in chars}) > 1:
        raise InvalidParameter("characters must share modulus and field")
    report = DistinctnessReport(True)
    if not chars:
        return report
    d = chars[0].d
    units = [a for a in range(1, d + 1) if math.gcd(a, d) == 1]
    tables = [[c.value(a) for a in units] for c in chars]
    for i in range(len(chars)):
        for j in range(i + 1, len(chars)):
            w = next((a for a, x, y in zip(units, tables[i], tables[j]) if x != y), None)
            if w is None:
                report.distinct = False
                report.failing_pairs.append((i, j))
            else:
                report.witnesses[(i, j)] = w
    return report


@dataclass(frozen=True)
class ThetaChar:
    """theta = chi * omega^e, with e = 2j+1 for odd chi and e = 2j for even chi."""

    chi: DirichletChar
    j: int

    def __post_init__(self):
        p = self.chi.p
        if not 0 <= self.j <= (p - 3) // 2:
            raise InvalidParameter(f"j must lie in [0, {(p - 3) // 2}] for p = {p}, got {self.j}")

    @property
    def p(self) -> int:
        return self.chi.p

    @property
    def e(self) -> int:
        return 2 * self.j + 1 if is_odd(self.chi) else 2 * self.j

    @property
    def delta(self) -> int:
        return (self.e - 1) % (self.p - 1)

    def is_trivial(self) -> bool:
        return self.chi.is_trivial() and self.e % (self.p - 1) == 0

    def to_json(self) -> dict:
        return {"chi": {"d": self.chi.d, "index": self.chi.index}, "j": self.j,
                "e": self.e, "delta": self.delta}


def theta_value(theta: ThetaChar, a: int) -> FqElem:
    """theta(a) mod pi, using omega(a) = a mod p."""
    chi, p = theta.chi, theta.p
    if math.gcd(a, chi.d * p) != 1:
        return chi.ctx.zero()
    return chi.value(a) * pow(a % p, theta.e, p)
