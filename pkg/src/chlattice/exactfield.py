"""Exact arithmetic in cyclotomic fields Q(zeta_n).

Elements are represented canonically as polynomials in zeta_n reduced modulo
the n-th cyclotomic polynomial, so equality is coefficient-wise and the zero
test is exact.  Internally a CycloNum keeps an integer coefficient vector
together with a single positive denominator (gcd-normalized), which makes
products plain integer convolutions.

The distinguished embedding sends zeta_n to exp(2*pi*i/n).  Certified sign
determination of real elements runs the exact zero test first and otherwise
evaluates the embedding with interval arithmetic at doubling precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

__all__ = [
    "CycloField",
    "CycloNum",
    "RealCyclo",
    "SignWitness",
    "as_real",
    "cyclotomic_poly",
    "ConductorMismatch",
    "NotCoprime",
    "NotReal",
    "PrecisionExhausted",
]

SIGN_START_BITS = 128
SIGN_CAP_BITS = 8192


class ConductorMismatch(ValueError):
    pass


class NotCoprime(ValueError):
    pass


class NotReal(ValueError):
    pass


class PrecisionExhausted(RuntimeError):
    pass


def _poly_divmod_int(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Exact division of integer polynomials, den monic. Coeffs low to high."""
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd) if len(num) > dd else [0]
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]
        if c:
            out[k - dd] = c
            for j in range(dd + 1):
                num[k - dd + j] -= c * den[j]
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return out, num


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (low to high) of the n-th cyclotomic polynomial."""
    if n == 1:
        return (-1, 1)
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod_int(poly, list(cyclotomic_poly(d)))
            assert rem == [0], f"Phi_{d} does not divide x^{n}-1 exactly"
    return tuple(poly)


class CycloField:
    """Shared context for Q(zeta_n): reduction tables and cached Galois maps."""

    _instances: dict[int, "CycloField"] = {}

    def __new__(cls, n: int) -> "CycloField":
        inst = cls._instances.get(n)
        if inst is None:
            inst = super().__new__(cls)
            inst._init(n)
            cls._instances[n] = inst
        return inst

    def _init(self, n: int) -> None:
        self.n = n
        mod = cyclotomic_poly(n)
        self.phi = len(mod) - 1
        self.modulus = mod
        # x^k mod Phi_n for k = phi .. max(n-1, 2*phi-2)
        top = max(n - 1, 2 * self.phi - 2)
        red: list[tuple[int, ...]] = []
        prev = [-c for c in mod[: self.phi]]
        red.append(tuple(prev))
        for _ in range(self.phi + 1, top + 1):
            cur = [0] + prev[:-1]
            lead = prev[-1]
            if lead:
                for j in range(self.phi):
                    cur[j] -= lead * mod[j]
            red.append(tuple(cur))
            prev = cur
        self._red = red
        self._galois_rows: dict[int, list[tuple[int, ...]]] = {}
        self._roots: dict[int, list] = {}  # precision bits -> iv powers of zeta

    # -- basics ------------------------------------------------------------

    def reduce(self, coeffs: list[int]) -> list[int]:
        """Reduce an integer coefficient vector modulo Phi_n."""
        out = list(coeffs[: self.phi]) + [0] * max(0, self.phi - len(coeffs))
        for k in range(self.phi, len(coeffs)):
            c = coeffs[k]
            if c:
                row = self._red[k - self.phi]
                for j in range(self.phi):
                    r = row[j]
                    if r:
                        out[j] += c * r
        return out

    def pow_vector(self, k: int) -> tuple[int, ...]:
        """zeta_n^k (k mod n) as a reduced integer vector."""
        k %= self.n
        if k < self.phi:
            v = [0] * self.phi
            v[k] = 1
            return tuple(v)
        return self._red[k - self.phi]

    def zeta(self, k: int = 1) -> "CycloNum":
        return CycloNum(self, self.pow_vector(k), 1)

    def zero(self) -> "CycloNum":
        return CycloNum(self, (0,) * self.phi, 1)

    def one(self) -> "CycloNum":
        return self.from_fraction(Fraction(1))

    def from_fraction(self, q) -> "CycloNum":
        q = Fraction(q)
        v = [0] * self.phi
        v[0] = q.numerator
        return CycloNum(self, tuple(v), q.denominator)

    def galois_row(self, l: int, j: int) -> tuple[int, ...]:
        rows = self._galois_rows.get(l)
        if rows is None:
            rows = [self.pow_vector(j2 * l % self.n) for j2 in range(self.phi)]
            self._galois_rows[l] = rows
        return rows[j]

    def root_powers(self, bits: int) -> list:
        """Interval enclosures of zeta_n^j, j < phi(n), at the given precision."""
        ps = self._roots.get(bits)
        if ps is None:
            iv = mpmath.iv
            old = iv.prec
            try:
                iv.prec = bits
                z = iv.exp(2j * iv.pi / self.n)
                ps = [iv.mpc(1)]
                for _ in range(1, self.phi):
                    ps.append(ps[-1] * z)
            finally:
                iv.prec = old
            self._roots[bits] = ps
        return ps

    def cos_powers(self, bits: int) -> list:
        """Real-interval enclosures of Re(zeta_n^j) = cos(2 pi j/n), j < phi."""
        key = ("cos", bits)
        ps = self._roots.get(key)
        if ps is None:
            iv = mpmath.iv
            old = iv.prec
            try:
                iv.prec = bits
                ps = [
                    iv.cos(2 * iv.pi * j / self.n) for j in range(self.phi)
                ]
            finally:
                iv.prec = old
            self._roots[key] = ps
        return ps

    def __repr__(self) -> str:
        return f"CycloField(n={self.n}, phi={self.phi})"


def _normalize(num: list[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        den = -den
        num = [-c for c in num]
    g = den
    for c in num:
        if c:
            g = math.gcd(g, c)
            if g == 1:
                break
    if g > 1:
        num = [c // g for c in num]
        den //= g
    if den == 0:
        raise ZeroDivisionError("zero denominator")
    return tuple(num), den


class CycloNum:
    """An element of Q(zeta_n) in canonical reduced form."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: CycloField, num, den: int = 1, *, _raw: bool = False):
        self.field = field
        if _raw:
            self.num = num
            self.den = den
        else:
            self.num, self.den = _normalize(list(num), den)

    # -- constructors --------------------------------------------------------

    def _lift(self, other):
        if isinstance(other, CycloNum):
            if other.field is not self.field:
                raise ConductorMismatch(
                    f"conductors differ: {self.field.n} vs {other.field.n}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_fraction(other)
        return NotImplemented

    # -- ring operations ------------------------------------------------------

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        a, b = self, o
        num = [x * b.den + y * a.den for x, y in zip(a.num, b.num)]
        return CycloNum(self.field, num, a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return CycloNum(self.field, tuple(-c for c in self.num), self.den, _raw=True)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        a, b = self.num, o.num
        prod = [0] * (2 * self.field.phi - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return CycloNum(self.field, self.field.reduce(prod), self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def inverse(self) -> "CycloNum":
        """Inverse as (product of the other Galois conjugates)/Norm.

        The norm is rational, so the division is a single rational scaling;
        this is far cheaper than an extended Euclid over Q[x] for the dense
        elements the certification engine produces.
        """
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        n = self.field.n
        acc = None
        for l in range(2, n):
            if math.gcd(l, n) == 1:
                g = self.galois(l)
                acc = g if acc is None else acc * g
        if acc is None:  # n <= 2: the field is Q
            return self.field.from_fraction(1 / self.as_fraction())
        norm = (acc * self).as_fraction()
        return acc * (1 / norm)

    def _inverse_xgcd(self) -> "CycloNum":
        """Reference implementation via extended gcd with Phi_n over Q[x]."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        mod = [Fraction(c) for c in self.field.modulus]
        a = [Fraction(c, self.den) for c in self.num]
        # extended Euclid: find u with a*u = g mod Phi
        r0, r1 = mod, a
        s0, s1 = [Fraction(0)], [Fraction(1)]

        def deg(p):
            for i in range(len(p) - 1, -1, -1):
                if p[i]:
                    return i
            return -1

        def sub_scaled(p, q, c, shift):
            out = list(p) + [Fraction(0)] * max(0, deg(q) + shift + 1 - len(p))
            for i in range(deg(q) + 1):
                out[i + shift] -= c * q[i]
            return out

        while deg(r1) > 0:
            q_quot, rem = [Fraction(0)] * (deg(r0) - deg(r1) + 1), list(r0)
            while deg(rem) >= deg(r1):
                d = deg(rem) - deg(r1)
                c = rem[deg(rem)] / r1[deg(r1)]
                q_quot[d] = c
                rem = sub_scaled(rem, r1, c, d)
            new_s = list(s0)
            for d, c in enumerate(q_quot):
                if c:
                    new_s = sub_scaled(new_s, s1, c, d)
            r0, r1 = r1, rem
            s0, s1 = s1, new_s
        if deg(r1) < 0:
            raise ZeroDivisionError("element not invertible (zero divisor?)")
        g = r1[0]
        inv_coeffs = [c / g for c in s1]
        den = 1
        for c in inv_coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in inv_coeffs]
        return CycloNum(self.field, self.field.reduce(ints), den)

    # -- structure maps --------------------------------------------------------

    def galois(self, l: int) -> "CycloNum":
        """Image under zeta_n -> zeta_n^l; requires gcd(l, n) = 1."""
        n = self.field.n
        l %= n
        if math.gcd(l, n) != 1:
            raise NotCoprime(f"exponent {l} not coprime to conductor {n}")
        res = [0] * self.field.phi
        for j, c in enumerate(self.num):
            if c:
                row = self.field.galois_row(l, j)
                for k2, r in enumerate(row):
                    if r:
                        res[k2] += c * r
        return CycloNum(self.field, res, self.den)

    def conj(self) -> "CycloNum":
        """Complex conjugation: zeta_n -> zeta_n^(-1)."""
        return self.galois(self.field.n - 1)

    def embed(self, m: int) -> "CycloNum":
        """Embed into Q(zeta_m) for n | m via zeta_n = zeta_m^(m/n)."""
        n = self.field.n
        if m == n:
            return self
        if m % n != 0:
            raise ConductorMismatch(f"{n} does not divide {m}")
        big = CycloField(m)
        step = m // n
        res = [0] * big.phi
        for j, c in enumerate(self.num):
            if c:
                row = big.pow_vector(j * step)
                for k2, r in enumerate(row):
                    if r:
                        res[k2] += c * r
        return CycloNum(big, res, self.den)

    # -- predicates -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise NotReal("element is not rational")
        return Fraction(self.num[0], self.den)

    def is_real(self) -> bool:
        return self.conj() == self

    def coeffs(self) -> list[Fraction]:
        return [Fraction(c, self.den) for c in self.num]

    def to_json(self) -> dict:
        """Wire format used in reports: conductor plus [num, den] pairs."""
        return {
            "conductor": self.field.n,
            "coeffs": [[c, self.den] for c in self.num],
        }

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.from_fraction(other)
        if not isinstance(other, CycloNum):
            return NotImplemented
        return (
            self.field.n == other.field.n
            and self.den == other.den
            and self.num == other.num
        )

    def __hash__(self):
        return hash((self.field.n, self.den, self.num))

    def __bool__(self):
        return not self.is_zero()

    # -- embeddings ---------------------------------------------------------------

    def interval(self, bits: int = SIGN_START_BITS):
        """Complex interval enclosure of the distinguished embedding."""
        iv = mpmath.iv
        old = iv.prec
        try:
            iv.prec = bits
            roots = self.field.root_powers(bits)
            acc = iv.mpc(0)
            den = iv.mpf(self.den)
            for j, c in enumerate(self.num):
                if c:
                    acc += iv.mpf(c) * roots[j]
            return acc / den
        finally:
            iv.prec = old

    def real_interval(self, bits: int = SIGN_START_BITS):
        """Real interval enclosure of the real part of the embedding: exact
        for real elements, and what sign determination needs."""
        iv = mpmath.iv
        old = iv.prec
        try:
            iv.prec = bits
            coss = self.field.cos_powers(bits)
            acc = iv.mpf(0)
            for j, c in enumerate(self.num):
                if c:
                    acc += iv.mpf(c) * coss[j]
            return acc / iv.mpf(self.den)
        finally:
            iv.prec = old

    def approx(self) -> complex:
        z = self.interval(64)
        return complex(
            float(mpmath.mpf(z.real.mid)),
            float(mpmath.mpf(z.imag.mid)),
        )

    def real_sign(self, start_bits: int = SIGN_START_BITS, check: bool = True) -> "SignWitness":
        """Certified sign of a real element; exact zero test first."""
        me = as_real(self) if check else self
        if me.is_zero():
            return SignWitness(0, 0, (Fraction(0), Fraction(0)))
        bits = start_bits
        while bits <= SIGN_CAP_BITS:
            z = self.real_interval(bits)
            lo, hi = z.a, z.b
            if lo > 0:
                return SignWitness(1, bits, (_to_frac(lo), _to_frac(hi)))
            if hi < 0:
                return SignWitness(-1, bits, (_to_frac(lo), _to_frac(hi)))
            bits *= 2
        raise PrecisionExhausted(
            "sign not separated at cap; exact zero test says nonzero"
        )

    def sign(self, start_bits: int = SIGN_START_BITS) -> int:
        """Certified sign; realness is the caller's invariant (arithmetic on
        validated real elements stays real), so no conjugation check here."""
        return self.real_sign(start_bits, check=False).sign

    def __repr__(self):
        terms = []
        for j, c in enumerate(self.num):
            if c:
                q = Fraction(c, self.den)
                terms.append(f"{q}*z^{j}" if j else f"{q}")
            if len(terms) > 4:
                terms.append("...")
                break
        body = " + ".join(terms) if terms else "0"
        return f"Cyclo({self.field.n}; {body})"


def _to_frac(x) -> Fraction:
    m = mpmath.mpf(x) if not isinstance(x, mpmath.mpf) else x
    return Fraction(*mpmath.libmp.to_rational(m._mpf_))


# Real-subfield view: elements fixed by zeta -> zeta^(-1).  Arithmetic stays in
# CycloNum; this validator is the single gate into sign-bearing code paths.
RealCyclo = CycloNum


def as_real(x: CycloNum) -> CycloNum:
    if not x.is_real():
        raise NotReal(f"element is not fixed by conjugation: {x!r}")
    return x


@dataclass(frozen=True)
class SignWitness:
    """Outcome of certified sign determination.

    sign is -1/0/+1; for nonzero results the interval brackets the real
    embedding and excludes 0 at the recorded precision.
    """

    sign: int
    precision_bits: int
    interval: tuple[Fraction, Fraction]

    def __post_init__(self):
        if self.sign > 0:
            assert self.interval[0] > 0
        elif self.sign < 0:
            assert self.interval[1] < 0


def field_arith(x: CycloNum, y: CycloNum, op: str) -> CycloNum:
    """Dispatch wrapper used by the CLI; normal code uses operators."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown op {op!r}")
