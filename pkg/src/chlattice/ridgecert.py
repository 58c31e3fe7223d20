"""Certification engine for Giraud polygons: prove a bivariate quadratic is
positive on a polygon via exact boundary sign analysis, axis-line factoring,
the degree-five resultant of the partial derivatives, and Sturm isolation of
its real roots.

All polynomial arithmetic happens over the real subfield k; root isolation is
exact (Sturm counts at rational points), and only the final inside/outside and
value-sign decisions use certified interval refinement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd as _igcd

import mpmath

from .bisector import Bisector, BivarQuad, GiraudChart
from .exactfield import CycloNum, as_real

__all__ = [
    "MultipleRoot",
    "SignViolation",
    "Poly",
    "sturm_chain",
    "count_roots",
    "isolate_roots",
    "resultant_quintic",
    "axis_lines",
    "factor_axis",
    "critical_points",
    "point_in_polygon",
    "crit_trace_sign",
    "certify_positive",
    "CertOutcome",
    "RidgePolygon",
]


class MultipleRoot(RuntimeError):
    pass


class SignViolation(AssertionError):
    pass


# --------------------------------------------------------------------------
# Univariate polynomials over the real subfield
# --------------------------------------------------------------------------

Poly = list  # list[CycloNum], low -> high


def ptrim(p: Poly) -> Poly:
    while p and p[-1].is_zero():
        p.pop()
    return p


def pdeg(p: Poly) -> int:
    return len(p) - 1


def pscale(p: Poly, c) -> Poly:
    return [x * c for x in p]


def pderiv(p: Poly) -> Poly:
    return [p[i] * i for i in range(1, len(p))]


def peval(p: Poly, x) -> CycloNum:
    acc = p[-1]
    for c in reversed(p[:-1]):
        acc = acc * x + c
    return acc


def pcontent_normalize(p: Poly) -> Poly:
    """Divide by the positive rational content to keep coefficients small."""
    if not p:
        return p
    den_lcm = 1
    for c in p:
        den_lcm = den_lcm * c.den // _igcd(den_lcm, c.den)
    g = 0
    for c in p:
        m = den_lcm // c.den
        for v in c.num:
            if v:
                g = _igcd(g, v * m)
        if g == 1:
            break
    if g == 0:
        return p
    scale = Fraction(den_lcm, g)
    return [c * scale for c in p]


def pdivmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    a = list(a)
    db, lb = pdeg(b), b[-1]
    inv = lb.inverse()
    q = [a[0].field.zero()] * max(0, len(a) - db)
    while pdeg(ptrim(a)) >= db and a:
        da = pdeg(a)
        c = a[-1] * inv
        q[da - db] = c
        for i in range(db + 1):
            a[da - db + i] = a[da - db + i] - c * b[i]
        a.pop()
        ptrim(a)
    return q, a


def prem_signfixed(a: Poly, b: Poly) -> Poly:
    """Pseudo-remainder of a by b with the sign of the true remainder.

    Ring operations only (no field inverses): the result is lc(b)^m * rem for
    some m >= 0, corrected by the sign of lc(b)^m.
    """
    db = pdeg(b)
    lc = b[-1]
    s_lc = lc.sign()
    r = list(a)
    m = 0
    while r and pdeg(ptrim(r)) >= db:
        dr = pdeg(r)
        rl = r[-1]
        new = [lc * c for c in r]
        for i in range(db + 1):
            new[dr - db + i] = new[dr - db + i] - rl * b[i]
        new.pop()
        r = ptrim(new)
        m += 1
    if s_lc < 0 and m % 2 == 1:
        r = [-c for c in r]
    return r


def pgcd(a: Poly, b: Poly) -> Poly:
    """gcd up to a positive rational constant (content-normalized)."""
    a, b = ptrim(list(a)), ptrim(list(b))
    if pdeg(a) < pdeg(b):
        a, b = b, a
    while b:
        r = pcontent_normalize(prem_signfixed(a, b))
        a, b = b, r
    return a


class SturmChain(list):
    """A Sturm chain carrying its own interval-coefficient cache.  The cache
    is keyed by id() of member polynomials, which is safe precisely because
    the chain keeps them alive."""

    __slots__ = ("cache",)

    def __init__(self, polys):
        super().__init__(polys)
        self.cache = {}


def sturm_chain(p: Poly) -> SturmChain:
    chain = [pcontent_normalize(list(p)), pcontent_normalize(pderiv(p))]
    while pdeg(chain[-1]) > 0:
        r = prem_signfixed(chain[-2], chain[-1])
        if not r:
            raise MultipleRoot("polynomial is not squarefree")
        chain.append(pcontent_normalize([-c for c in r]))
    return SturmChain(chain)


_IV_BITS = 128


def _poly_sign_at(p: Poly, x: Fraction, cache: dict) -> int:
    """Sign of p(x) for rational x: interval Horner first, exact fallback."""
    iv = mpmath.iv
    key = id(p)
    coeffs = cache.get(key)
    if coeffs is None:
        old = iv.prec
        try:
            iv.prec = _IV_BITS
            coeffs = [c.real_interval(_IV_BITS) for c in p]
        finally:
            iv.prec = old
        cache[key] = coeffs
    old = iv.prec
    try:
        iv.prec = _IV_BITS
        xv = iv.mpf(x.numerator) / iv.mpf(x.denominator)
        acc = coeffs[-1]
        for c in reversed(coeffs[:-1]):
            acc = acc * xv + c
        if acc.a > 0:
            return 1
        if acc.b < 0:
            return -1
    finally:
        iv.prec = old
    return peval(p, x).sign()


def sign_variations(chain, x: Fraction, cache: dict | None = None) -> int:
    if cache is None:
        cache = chain.cache if isinstance(chain, SturmChain) else {}
    signs = []
    for p in chain:
        s = _poly_sign_at(p, x, cache)
        if s != 0:
            signs.append(s)
    return sum(1 for i in range(len(signs) - 1) if signs[i] != signs[i + 1])


def _chain_cache(chain) -> dict:
    return chain.cache if isinstance(chain, SturmChain) else {}


def count_roots(chain: list[Poly], a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots in (a, b]."""
    return sign_variations(chain, a) - sign_variations(chain, b)


def _frac(x) -> Fraction:
    return Fraction(*mpmath.libmp.to_rational(mpmath.mpf(x)._mpf_))


def _abs_upper(c: CycloNum, bits: int = 64) -> Fraction:
    z = c.interval(bits)
    return max(abs(_frac(z.real.a)), abs(_frac(z.real.b)))


def cauchy_bound(p: Poly) -> Fraction:
    """Certified upper bound on the absolute values of all real roots:
    1 + max |c_i| / |c_d| with the numerators bounded above and the leading
    coefficient bounded below by its certified sign witness (no inverses)."""
    w = p[-1].real_sign(check=False)
    lead_low = min(abs(w.interval[0]), abs(w.interval[1]))
    assert lead_low > 0
    best = Fraction(0)
    for c in p[:-1]:
        if not c.is_zero():
            best = max(best, _abs_upper(c))
    return best / lead_low + 1


def isolate_roots(p: Poly, chain=None) -> list[tuple[Fraction, Fraction]]:
    """Disjoint isolating intervals (lo, hi] for every real root; requires
    squarefree input (raises MultipleRoot otherwise)."""
    p = ptrim(list(p))
    if pdeg(p) <= 0:
        return []
    if chain is None:
        chain = sturm_chain(p)
    bound = cauchy_bound(p)
    lo, hi = -bound, bound
    v_lo = sign_variations(chain, lo)
    v_hi = sign_variations(chain, hi)
    out = []

    def rec(a, b, va, vb):
        n = va - vb
        if n == 0:
            return
        if n == 1:
            out.append((a, b))
            return
        m = (a + b) / 2
        vm = sign_variations(chain, m)
        rec(a, m, va, vm)
        rec(m, b, vm, vb)

    rec(lo, hi, v_lo, v_hi)
    out.sort()
    return out


def refine_root(chain, lo: Fraction, hi: Fraction, width: Fraction):
    """Bisect an isolating interval below the requested width."""
    if hi - lo <= width:
        return lo, hi
    cache = _chain_cache(chain)
    v_lo = sign_variations(chain, lo, cache)
    while hi - lo > width:
        m = (lo + hi) / 2
        v_m = sign_variations(chain, m, cache)
        if v_lo - v_m == 1:
            hi = m
        else:
            lo, v_lo = m, v_m
    return lo, hi


@dataclass
class Alg1:
    """A real scalar: either an exact element of k, or an isolated root of an
    exact squarefree polynomial over k."""

    exact: CycloNum | None = None
    poly: Poly | None = None
    chain: list | None = None
    lo: Fraction | None = None
    hi: Fraction | None = None

    @classmethod
    def from_exact(cls, v: CycloNum) -> "Alg1":
        return cls(exact=v)

    @classmethod
    def from_root(cls, poly: Poly, chain, lo, hi) -> "Alg1":
        return cls(poly=poly, chain=chain, lo=Fraction(lo), hi=Fraction(hi))

    def bounds(self, width: Fraction | None = None) -> tuple[Fraction, Fraction]:
        if self.exact is not None:
            z = self.exact.interval(96).real
            lo = Fraction(*mpmath.libmp.to_rational(mpmath.mpf(z.a)._mpf_))
            hi = Fraction(*mpmath.libmp.to_rational(mpmath.mpf(z.b)._mpf_))
            return lo, hi
        if width is not None:
            self.lo, self.hi = refine_root(self.chain, self.lo, self.hi, width)
        return self.lo, self.hi

    def refine(self, width: Fraction) -> None:
        if self.exact is None:
            self.lo, self.hi = refine_root(self.chain, self.lo, self.hi, width)

    def approx(self) -> float:
        lo, hi = self.bounds()
        return float((lo + hi) / 2)

    def equals_exact(self, v: CycloNum) -> bool:
        if self.exact is not None:
            return self.exact == v
        if not peval(self.poly, v).is_zero():
            return False
        lo, hi = self.lo, self.hi
        z = v.interval(128).real
        vlo = Fraction(*mpmath.libmp.to_rational(mpmath.mpf(z.a)._mpf_))
        vhi = Fraction(*mpmath.libmp.to_rational(mpmath.mpf(z.b)._mpf_))
        return not (vhi < lo or vlo > hi)

    def cmp_exact(self, v: CycloNum) -> int:
        """Sign of (self - v), exact."""
        if self.exact is not None:
            return (self.exact - v).sign()
        if self.equals_exact(v):
            return 0
        width = Fraction(1, 2)
        for _ in range(200):
            lo, hi = self.bounds(width)
            z = v.interval(128 + 2 * width.denominator.bit_length()).real
            vlo = Fraction(*mpmath.libmp.to_rational(mpmath.mpf(z.a)._mpf_))
            vhi = Fraction(*mpmath.libmp.to_rational(mpmath.mpf(z.b)._mpf_))
            if hi < vlo:
                return -1
            if lo > vhi:
                return 1
            width /= 16
        raise MultipleRoot("cannot separate algebraic numbers")


# --------------------------------------------------------------------------
# Resultant of the partial derivatives (printed degree-5 coefficients)
# --------------------------------------------------------------------------


def resultant_quintic(f: BivarQuad) -> Poly:
    """Eliminate t1 from grad f = 0: the quintic in t2 whose roots carry the
    t2-coordinates of all critical points."""
    a = f.named()
    a1, a2 = a["a1"], a["a2"]
    a11, a12, a22 = a["a11"], a["a12"], a["a22"]
    a112, a122, a1122 = a["a112"], a["a122"], a["a1122"]
    b0 = a1 ** 2 * a112 + 4 * a2 * a11 ** 2 - 2 * a12 * a11 * a1
    b1 = (
        -4 * a122 * a11 * a1
        + 2 * a1 ** 2 * a1122
        + 8 * a22 * a11 ** 2
        - 2 * a12 ** 2 * a11
        + 8 * a2 * a11 * a112
    )
    b2 = (
        8 * a2 * a11 * a1122
        + 2 * a1 * a1122 * a12
        - 2 * a1 * a112 * a122
        - 6 * a12 * a11 * a122
        + 4 * a2 * a112 ** 2
        - a12 ** 2 * a112
        + 16 * a22 * a11 * a112
    )
    b3 = (
        8 * a2 * a112 * a1122
        + 8 * a22 * a112 ** 2
        - 4 * a12 * a112 * a122
        - 4 * a122 ** 2 * a11
        + 16 * a22 * a11 * a1122
    )
    b4 = (
        -3 * a122 ** 2 * a112
        - 2 * a122 * a1122 * a12
        + 4 * a2 * a1122 ** 2
        + 16 * a22 * a112 * a1122
    )
    b5 = -2 * a122 ** 2 * a1122 + 8 * a22 * a1122 ** 2
    return ptrim([b0, b1, b2, b3, b4, b5])


# --------------------------------------------------------------------------
# Axis lines and factoring
# --------------------------------------------------------------------------


@dataclass
class AxisLine:
    var: str  # 't1' (vertical) or 't2' (horizontal)
    root: Alg1
    factor_poly: Poly  # the exact factor divided out (degree 1 or 2 over k)


def _coeff_polys(f: BivarQuad, var: str) -> list[Poly]:
    """f as p0 + p1 u + p2 u^2 in the OTHER variable u, coefficients in var."""
    if var == "t1":
        return [ptrim([f.coeff[i][j] for i in range(3)]) for j in range(3)]
    return [ptrim([f.coeff[i][j] for j in range(3)]) for i in range(3)]


def _axis_gcd(f: BivarQuad, var: str) -> Poly:
    polys = [p for p in _coeff_polys(f, var) if p]
    if not polys:
        return []
    g = polys[0]
    for p in polys[1:]:
        g = pgcd(g, p)
        if pdeg(g) == 0:
            break
    return g


def _divide_bivar(f: BivarQuad, var: str, factor: Poly) -> BivarQuad:
    """Exact division of f by a polynomial in a single variable."""
    zero = f.coeff[0][0].field.zero()
    cols = _coeff_polys(f, var)
    out = [[zero] * 3 for _ in range(3)]
    for other_deg, p in enumerate(cols):
        if not p:
            continue
        q, r = pdivmod(list(p), factor)
        assert not ptrim(r), "axis factor does not divide"
        for i, c in enumerate(q):
            if var == "t1":
                out[i][other_deg] = c
            else:
                out[other_deg][i] = c
    return BivarQuad(out)


def axis_lines(f: BivarQuad) -> tuple[list[AxisLine], list[AxisLine], BivarQuad, int]:
    """Vertical/horizontal lines of the zero set, plus the reduced function h
    and the sign of the constant factor pulled out (from rootless quadratics).

    f = (product of factors) * h, where each factor is the gcd of the
    coefficient polynomials in one variable.
    """
    vertical: list[AxisLine] = []
    horizontal: list[AxisLine] = []
    h = f
    const_sign = 1
    for var, acc in (("t1", vertical), ("t2", horizontal)):
        g = _axis_gcd(h, var)
        if not g or pdeg(g) == 0:
            continue
        if pdeg(g) == 1:
            # canonical monic factor (t - root)
            root = as_real(-g[0] / g[1])
            g = [-root, g[0].field.one()]
            h = _divide_bivar(h, var, g)
            acc.append(AxisLine(var, Alg1.from_exact(root), g))
            continue
        if g[-1].sign() < 0:
            g = [-c for c in g]
        h = _divide_bivar(h, var, g)
        # quadratic factor: two real roots (two lines) or definite sign
        try:
            chain = sturm_chain(g)
        except MultipleRoot:
            # perfect square: single line of multiplicity two
            lin = pgcd(g, pderiv(g))
            root = -lin[0] / lin[1]
            acc.append(AxisLine(var, Alg1.from_exact(as_real(root)), lin))
            acc.append(AxisLine(var, Alg1.from_exact(as_real(root)), lin))
            continue
        ivs = isolate_roots(g, chain)
        if not ivs:
            const_sign *= g[-1].sign()  # definite quadratic: sign of lead
        for lo, hi in ivs:
            acc.append(AxisLine(var, Alg1.from_root(g, chain, lo, hi), g))
    return vertical, horizontal, h, const_sign


def factor_axis(f: BivarQuad, var: str, root: CycloNum) -> BivarQuad:
    """Divide out an exact linear axis factor (t - root); raises if not a factor."""
    one = f.coeff[0][0].field.one()
    return _divide_bivar(f, var, [-root, one])


# --------------------------------------------------------------------------
# Critical points
# --------------------------------------------------------------------------


@dataclass
class CritPoint:
    t1: Alg1
    t2: Alg1
    f: BivarQuad
    location: str = "unknown"  # 'inside' | 'outside' | 'boundary'
    value_sign: int | None = None
    value_approx: float | None = None

    def approx(self) -> tuple[float, float]:
        return self.t1.approx(), self.t2.approx()


def _poly_in_one_var(f: BivarQuad) -> tuple[int, int]:
    d1 = max((i for i in range(3) for j in range(3)
              if not f.coeff[i][j].is_zero()), default=0)
    d2 = max((j for i in range(3) for j in range(3)
              if not f.coeff[i][j].is_zero()), default=0)
    return d1, d2


def critical_points(f: BivarQuad) -> list[CritPoint]:
    """All real critical points of f, exactly isolated.

    Requires the elimination polynomial to be squarefree (MultipleRoot
    otherwise), which prior axis factoring guarantees for the shipped data.
    """
    field0 = f.coeff[0][0].field
    d1, d2 = _poly_in_one_var(f)
    fx = f.d_dt1()
    fy = f.d_dt2()
    if d1 <= 1 and d2 <= 1:
        # bilinear: fx = a1 + a12 t2, fy = a2 + a12 t1
        a = f.named()
        if a["a12"].is_zero():
            return []  # no isolated critical point
        t2 = as_real(-a["a1"] / a["a12"])
        t1 = as_real(-a["a2"] / a["a12"])
        return [CritPoint(Alg1.from_exact(t1), Alg1.from_exact(t2), f)]
    if d1 <= 1:
        # f = A(t2) + t1 B(t2): critical points at roots of B with t1 from
        # the linear equation A'(t2) + t1 B'(t2) = 0.  Only the root SET of B
        # matters, so a repeated root is reduced to its squarefree part.
        p = ptrim([fx.coeff[0][j] for j in range(3)])
        pts = []
        num_p = ptrim([fy.coeff[0][j] for j in range(3)])
        den_p = ptrim([fy.coeff[1][j] for j in range(3)])
        for t2 in _roots_alg(p, field0, squarefree_part=True):
            if _vanishes_at(den_p, t2):
                if _vanishes_at(num_p, t2):
                    raise MultipleRoot("line of critical points (degenerate)")
                continue  # no critical point over this root
            t1 = _ratio_at(num_p, den_p, t2, field0)
            if t1 is not None:
                pts.append(CritPoint(t1, t2_wrap(t2), f))
        return pts
    if d2 <= 1:
        swapped = critical_points(f.swap_vars())
        return [CritPoint(c.t2, c.t1, f) for c in swapped]
    res = resultant_quintic(f)
    if not res:
        raise MultipleRoot("resultant vanishes identically")
    chain = sturm_chain(res)  # raises MultipleRoot if not squarefree
    pts = []
    for lo, hi in isolate_roots(res, chain):
        t2 = Alg1.from_root(res, chain, lo, hi)
        num_p = ptrim([fx.coeff[0][j] for j in range(3)])  # P2(t2)
        den_p = ptrim([fx.coeff[1][j] for j in range(3)])  # Q2(t2)
        t1 = _ratio_at(num_p, den_p, t2, field0)
        if t1 is None:
            raise MultipleRoot("critical t1 not determined by linear recovery")
        pts.append(CritPoint(t1, t2, f))
    return pts


def t2_wrap(t2) -> Alg1:
    return t2 if isinstance(t2, Alg1) else Alg1.from_exact(t2)


def _roots_alg(p: Poly, field0, squarefree_part: bool = False) -> list:
    """Real roots of a univariate poly over k, as Alg1 or exact elements."""
    p = ptrim(list(p))
    if pdeg(p) <= 0:
        return []
    if pdeg(p) == 1:
        return [Alg1.from_exact(as_real(-p[0] / p[1]))]
    sq = pgcd(p, pderiv(p))
    if pdeg(sq) >= 1:
        if not squarefree_part:
            raise MultipleRoot("repeated roots in derivative system")
        q, r = pdivmod(list(p), sq)
        assert not ptrim(r)
        return _roots_alg(ptrim(q), field0)
    chain = sturm_chain(p)
    return [Alg1.from_root(p, chain, lo, hi) for lo, hi in isolate_roots(p, chain)]


def _vanishes_at(p: Poly, t: "Alg1 | CycloNum") -> bool:
    """Exact test of p(t) = 0 for t an Alg1 or a field element."""
    p = ptrim(list(p))
    if not p:
        return True
    if isinstance(t, Alg1):
        if t.exact is not None:
            return peval(p, t.exact).is_zero()
        g = pgcd(list(t.poly), list(p))
        if pdeg(g) < 1:
            return False
        lo, hi = t.lo, t.hi
        return count_roots(sturm_chain(g), lo, hi) == 1
    return peval(p, t).is_zero()


def _ratio_at(num_p: Poly, den_p: Poly, t2: Alg1, field0) -> Alg1 | None:
    """t1 = -num(t2)/den(t2) as an Alg1 (interval backed by t2's isolator)."""
    if t2.exact is not None:
        den = peval(den_p, t2.exact) if den_p else field0.zero()
        if den.is_zero():
            return None
        num = peval(num_p, t2.exact) if num_p else field0.zero()
        return Alg1.from_exact(as_real(-num / den))
    return AlgRatio(num_p, den_p, t2)


class AlgRatio(Alg1):
    """t1 = -num(t2)/den(t2) with t2 an isolated algebraic number."""

    def __init__(self, num_p: Poly, den_p: Poly, t2: Alg1):
        super().__init__()
        self.num_p = num_p
        self.den_p = den_p
        self.t2 = t2
        self._width = Fraction(1, 1024)

    def bounds(self, width: Fraction | None = None):
        import mpmath

        iv = mpmath.iv
        target = width or self._width
        for attempt in range(200):
            lo, hi = self.t2.bounds(self._width)
            old = iv.prec
            try:
                iv.prec = 192
                t2iv = iv.mpf([str(lo), str(hi)])
                num = _poly_iv(self.num_p, t2iv)
                den = _poly_iv(self.den_p, t2iv)
                if den.a * den.b <= 0:
                    self._width /= 4
                    continue
                val = -num / den
                vlo = Fraction(*mpmath.libmp.to_rational(mpmath.mpf(val.a)._mpf_))
                vhi = Fraction(*mpmath.libmp.to_rational(mpmath.mpf(val.b)._mpf_))
            finally:
                iv.prec = old
            if vhi - vlo <= target:
                return vlo, vhi
            self._width /= 4
        raise MultipleRoot("ratio enclosure does not converge")

    def refine(self, width):
        self._width = min(self._width, width / 4)

    def approx(self) -> float:
        lo, hi = self.bounds(Fraction(1, 10 ** 12))
        return float((lo + hi) / 2)

    def equals_exact(self, v):
        # num + v*den should vanish at t2: exact polynomial test
        p = list(self.num_p) if self.num_p else []
        q = pscale(list(self.den_p), v) if self.den_p else []
        n = max(len(p), len(q))
        p += [v.field.zero()] * (n - len(p))
        q += [v.field.zero()] * (n - len(q))
        s = ptrim([p[i] + q[i] for i in range(n)])
        if not s:
            return True
        if self.t2.exact is not None:
            return peval(s, self.t2.exact).is_zero()
        g = pgcd(list(self.t2.poly), s)
        if pdeg(g) < 1:
            return False
        # is t2 a root of g?
        lo, hi = self.t2.bounds()
        gchain = sturm_chain(g)
        return count_roots(gchain, lo, hi) == 1

    def cmp_exact(self, v):
        if self.equals_exact(v):
            return 0
        width = Fraction(1, 64)
        for _ in range(200):
            lo, hi = self.bounds(width)
            z = v.interval(160).real
            vlo = Fraction(*mpmath.libmp.to_rational(mpmath.mpf(z.a)._mpf_))
            vhi = Fraction(*mpmath.libmp.to_rational(mpmath.mpf(z.b)._mpf_))
            if hi < vlo:
                return -1
            if lo > vhi:
                return 1
            width /= 16
        raise MultipleRoot("cannot separate ratio from exact value")


def _poly_iv(p: Poly, x):
    import mpmath

    iv = mpmath.iv
    if not p:
        return iv.mpf(0)
    acc = iv.mpf(0)
    for c in reversed(p):
        z = c.interval(192)
        acc = acc * x + z.real
    return acc


def _pmul(a, b, z):
    out = [z] * max(len(a) + len(b) - 1, 1)
    for i, x in enumerate(a):
        if not x.is_zero():
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
    return out


def _padd(a, b, z):
    n = max(len(a), len(b))
    return [
        (a[i] if i < len(a) else z) + (b[i] if i < len(b) else z)
        for i in range(n)
    ]


def _sign_at_alg(N: Poly, t: Alg1) -> int:
    """Exact sign of a univariate polynomial over k at an algebraic number."""
    N = ptrim(list(N))
    if not N:
        return 0
    if t.exact is not None:
        return as_real(peval(N, t.exact)).sign()
    g = pgcd(list(t.poly), list(N))
    if pdeg(g) >= 1 and count_roots(sturm_chain(g), t.lo, t.hi) == 1:
        return 0
    import mpmath

    iv = mpmath.iv
    width = Fraction(1, 1 << 10)
    for _ in range(300):
        lo, hi = t.bounds(width)
        old = iv.prec
        try:
            iv.prec = 224
            val = _poly_iv(N, iv.mpf([str(lo), str(hi)]))
        finally:
            iv.prec = old
        if val.a > 0:
            return 1
        if val.b < 0:
            return -1
        width /= 16
    raise MultipleRoot("exact sign at algebraic point did not separate")


def crit_trace_sign(pt: CritPoint, quad: BivarQuad) -> int:
    """Exact sign of a bivariate quadratic at a critical point.

    With t1 = -num(t2)/den(t2): sign = sign of
    N(t2) = c0 den^2 - c1 num den + c2 num^2 at the algebraic t2
    (den(t2) != 0 was established at t1-recovery).  Handles the swapped
    orientation and the all-exact / one-exact cases too.
    """
    z = quad.coeff[0][0].field.zero()
    if pt.t1.exact is not None and pt.t2.exact is not None:
        return as_real(quad.evaluate(pt.t1.exact, pt.t2.exact)).sign()
    if isinstance(pt.t2, AlgRatio) and not isinstance(pt.t1, AlgRatio):
        return crit_trace_sign(CritPoint(pt.t2, pt.t1, quad), quad.swap_vars())
    cs = quad.poly_in_t1()  # [c0(t2), c1(t2), c2(t2)]
    cs = [ptrim(list(c)) or [z] for c in cs]
    if isinstance(pt.t1, AlgRatio):
        num_p = list(pt.t1.num_p) or [z]
        den_p = list(pt.t1.den_p)
        t2 = pt.t1.t2
        den2 = _pmul(den_p, den_p, z)
        numden = _pmul(num_p, den_p, z)
        num2 = _pmul(num_p, num_p, z)
        N = _padd(
            _padd(_pmul(cs[0], den2, z),
                  [-c for c in _pmul(cs[1], numden, z)], z),
            _pmul(cs[2], num2, z), z,
        )
        return _sign_at_alg(N, t2)
    if pt.t1.exact is not None:
        # t2 is a plain algebraic number: restrict to t1 = exact
        t1 = pt.t1.exact
        N = _padd(_padd(cs[0], pscale(cs[1], t1), z),
                  pscale(cs[2], t1 * t1), z)
        return _sign_at_alg(N, pt.t2)
    if pt.t2.exact is not None:
        return crit_trace_sign(CritPoint(pt.t2, pt.t1, quad), quad.swap_vars())
    # two independent algebraic coordinates never arise here: the engine
    # always recovers one coordinate from the other
    raise MultipleRoot("unsupported critical point shape")


# --------------------------------------------------------------------------
# Polygons and the certificate
# --------------------------------------------------------------------------


@dataclass
class RidgePolygon:
    """A realized Giraud ridge: chart, cyclically ordered vertices with exact
    lifts and chart coordinates, and per-edge / per-vertex incidence data."""

    chart: GiraudChart
    vertex_lifts: list  # Vec3 lifts, cyclic order
    vertex_coords: list  # (CycloNum, CycloNum) exact chart coordinates
    vertex_names: list
    vertex_on: list  # list[set[SideLabel]] bisectors through each vertex
    edge_on: list  # edge i joins vertex i to i+1: set[SideLabel]
    label: str = ""

    @property
    def nverts(self) -> int:
        return len(self.vertex_lifts)


@dataclass
class CertOutcome:
    status: str  # 'positive_on_polygon' | 'contains_zero' | 'degenerate'
    ridge: str
    bisector: str
    axis_vertical: list = field(default_factory=list)
    axis_horizontal: list = field(default_factory=list)
    critical: list = field(default_factory=list)
    witness: str | None = None

    def record(self) -> dict:
        return {
            "ridge": self.ridge,
            "bisector": self.bisector,
            "status": self.status,
            "axis_lines": {
                "vertical": self.axis_vertical,
                "horizontal": self.axis_horizontal,
            },
            "critical_points": self.critical,
            **({"witness": self.witness} if self.witness else {}),
        }


def _extent(poly: RidgePolygon, which: int) -> tuple:
    """Exact min/max of a chart coordinate over the polygon's vertices.

    Edges are Mobius-monotone in each chart coordinate, so the vertex extent
    is the polygon extent.
    """
    coords = [vc[which] for vc in poly.vertex_coords]
    mn = mx = coords[0]
    for c in coords[1:]:
        if (c - mn).sign() < 0:
            mn = c
        if (c - mx).sign() > 0:
            mx = c
    return mn, mx


def _line_ok(poly: RidgePolygon, line: AxisLine, bis_label, group) -> bool:
    """The axis line may not cross the open polygon; touching is allowed only
    along whitelisted cells (vertices/edges realized on the bisector)."""
    which = 0 if line.var == "t1" else 1
    mn, mx = _extent(poly, which)
    # exact comparisons against every vertex coordinate
    touches = []
    for i, vc in enumerate(poly.vertex_coords):
        if line.root.equals_exact(vc[which]):
            touches.append(i)
    cmp_mn = line.root.cmp_exact(mn)
    cmp_mx = line.root.cmp_exact(mx)
    if cmp_mn < 0 or cmp_mx > 0:
        return True  # strictly outside the polygon's coordinate extent
    if cmp_mn == 0 or cmp_mx == 0:
        # touches the extreme coordinate: every vertex at that coordinate must
        # be on the bisector
        return all(bis_label in poly.vertex_on[i] for i in touches) and touches != []
    # strictly inside the extent: only allowed if the line coincides with a
    # whitelisted edge lying exactly on this coordinate
    n = poly.nverts
    for i in range(n):
        j = (i + 1) % n
        if (
            bis_label in poly.edge_on[i]
            and line.root.equals_exact(poly.vertex_coords[i][which])
            and line.root.equals_exact(poly.vertex_coords[j][which])
        ):
            return True
    return False


def _locate_point(
    poly: RidgePolygon,
    traces: dict,
    pt: CritPoint,
    exclude: tuple,
    max_iter: int = 8,
) -> tuple[str, set]:
    """Inside/outside decision for a critical point against the polygon.

    Interval signs first; traces that keep straddling zero are decided
    EXACTLY (the point can lie exactly on another bisector).  Returns
    ('inside'|'outside'|'boundary', set of labels where the trace vanishes).
    """
    import mpmath

    iv = mpmath.iv
    width = Fraction(1, 1 << 12)
    pending = [lab for lab in traces if lab not in exclude]
    zeros = set()
    for _ in range(max_iter):
        lo1, hi1 = pt.t1.bounds(width)
        lo2, hi2 = pt.t2.bounds(width)
        old = iv.prec
        still = []
        try:
            iv.prec = 160
            t1iv = iv.mpf([str(lo1), str(hi1)])
            t2iv = iv.mpf([str(lo2), str(hi2)])
            for lab in pending:
                val = traces[lab].interval_eval(t1iv, t2iv, 160)
                if val.a > 0:
                    return "outside", zeros
                if not (val.b < 0):
                    still.append(lab)
        finally:
            iv.prec = old
        pending = still
        if not pending:
            return ("inside" if not zeros else "boundary"), zeros
        width /= 16
    # exact decisions for the persistent straddlers
    for lab in pending:
        s = crit_trace_sign(pt, traces[lab])
        if s > 0:
            return "outside", zeros
        if s == 0:
            zeros.add(lab)
    return ("inside" if not zeros else "boundary"), zeros


def _value_sign(pt: CritPoint, h: BivarQuad, max_iter: int = 60):
    """Certified sign (and approximation) of h at the critical point."""
    if pt.t1.exact is not None and pt.t2.exact is not None:
        val = h.evaluate(pt.t1.exact, pt.t2.exact)
        return as_real(val).sign(), float(val.interval(64).real.mid)
    import mpmath

    iv = mpmath.iv
    width = Fraction(1, 1 << 10)
    for _ in range(max_iter):
        lo1, hi1 = pt.t1.bounds(width)
        lo2, hi2 = pt.t2.bounds(width)
        old = iv.prec
        try:
            iv.prec = 192
            v = h.interval_eval(
                iv.mpf([str(lo1), str(hi1)]), iv.mpf([str(lo2), str(hi2)]), 192
            )
        finally:
            iv.prec = old
        if v.a > 0:
            return 1, float(mpmath.mpf(v.mid))
        if v.b < 0:
            return -1, float(mpmath.mpf(v.mid))
        width /= 16
    return 0, 0.0


def point_in_polygon(poly: RidgePolygon, traces: dict, pt: CritPoint,
                     exclude: tuple = ()) -> str:
    """'inside' | 'outside' | 'on_boundary_uncertain' for an isolated point
    against the realized polygon (exact fallback for points lying exactly on
    other bounding bisectors)."""
    loc, zeros = _locate_point(poly, traces, pt, exclude)
    if loc == "boundary":
        return "on_boundary_uncertain"
    return loc


def certify_positive(
    poly: RidgePolygon,
    bis: Bisector,
    traces: dict,
    group,
    boundary_outcomes: list,
) -> CertOutcome:
    """Prove the side function of `bis` is nonnegative on the polygon with
    zeros exactly on the whitelisted cells.

    `traces` maps every non-chart bisector label to its BivarQuad trace on the
    chart (paper orientation: negative on E's side).  `boundary_outcomes` is
    the list of exact segment classifications of the polygon's edges against
    `bis` (computed with the same orientation).
    """
    lab = bis.label
    ridge_name = poly.label
    out = CertOutcome("positive_on_polygon", ridge_name, str(lab))

    # ---- boundary: every edge stays weakly inside, zeros only on whitelist
    n = poly.nverts
    for i, oc in enumerate(boundary_outcomes):
        j = (i + 1) % n
        if oc.kind == "contained":
            if lab not in poly.edge_on[i]:
                return CertOutcome(
                    "contains_zero", ridge_name, str(lab),
                    witness=f"edge {i} lies on bisector but is not whitelisted",
                )
            continue
        if oc.kind == "one_side":
            if oc.side > 0:
                return CertOutcome(
                    "contains_zero", ridge_name, str(lab),
                    witness=f"edge {i} strictly on the wrong side",
                )
            A, B, C = oc.quad
            if C.is_zero() and lab not in poly.vertex_on[i]:
                return CertOutcome(
                    "contains_zero", ridge_name, str(lab),
                    witness=f"vertex {poly.vertex_names[i]} zero not whitelisted",
                )
            if (A + 2 * B + C).is_zero() and lab not in poly.vertex_on[j]:
                return CertOutcome(
                    "contains_zero", ridge_name, str(lab),
                    witness=f"vertex {poly.vertex_names[j]} zero not whitelisted",
                )
            continue
        if oc.kind == "tangent_at_endpoint":
            v_idx = i if oc.tangent_end == 0 else j
            if oc.side > 0:
                return CertOutcome(
                    "contains_zero", ridge_name, str(lab),
                    witness=f"edge {i} tangent from the wrong side",
                )
            if lab not in poly.vertex_on[v_idx]:
                return CertOutcome(
                    "contains_zero", ridge_name, str(lab),
                    witness=f"tangency at non-whitelisted vertex",
                )
            continue
        return CertOutcome(
            "contains_zero", ridge_name, str(lab),
            witness=f"edge {i}: {oc.kind}",
        )

    # ---- interior: factor axis lines, then critical points of the residual
    f = traces[lab]
    vert, horz, h, const_sign = axis_lines(f)
    for line in vert + horz:
        ok = _line_ok(poly, line, lab, group)
        acc = out.axis_vertical if line.var == "t1" else out.axis_horizontal
        acc.append(
            {
                "var": line.var,
                "value": line.root.approx(),
                "exact": line.root.exact is not None,
            }
        )
        if not ok:
            return CertOutcome(
                "contains_zero", ridge_name, str(lab),
                out.axis_vertical, out.axis_horizontal,
                witness=f"axis line {line.var}={line.root.approx():.8f} meets the polygon interior",
            )

    try:
        crits = critical_points(h)
    except MultipleRoot as e:
        return CertOutcome(
            "degenerate", ridge_name, str(lab),
            out.axis_vertical, out.axis_horizontal, witness=str(e),
        )

    for pt in crits:
        loc, zero_labs = _locate_point(poly, traces, pt, exclude=())
        pt.location = loc
        rec = {
            "t1": pt.t1.approx(),
            "t2": pt.t2.approx(),
            "inside": loc == "inside",
        }
        if loc == "inside":
            sgn, approx_val = _value_sign(pt, h)
            pt.value_sign = sgn
            rec["value"] = abs(approx_val)
            rec["raw_value"] = approx_val
            if sgn == 0:
                return CertOutcome(
                    "degenerate", ridge_name, str(lab),
                    out.axis_vertical, out.axis_horizontal, out.critical,
                    witness="critical value sign not separated",
                )
            # the direct soundness check: the trace itself is strictly
            # negative (inside the half-space) at the interior point
            fsgn = crit_trace_sign(pt, f)
            if fsgn >= 0:
                return CertOutcome(
                    "contains_zero", ridge_name, str(lab),
                    out.axis_vertical, out.axis_horizontal, out.critical,
                    witness="interior critical point with nonnegative trace value",
                )
        elif loc == "boundary":
            # the point lies exactly on other bounding bisectors and weakly
            # inside the rest: it is a boundary point of the polygon.  The
            # certified trace must be strictly negative there, unless the
            # point IS a whitelisted vertex of the polygon.
            fsgn = crit_trace_sign(pt, f)
            rec["on_boundary_of"] = sorted(str(l) for l in zero_labs)
            if fsgn > 0:
                rec["inside"] = False  # outside the certified half-space
            elif fsgn == 0:
                hit = None
                for i, vc in enumerate(poly.vertex_coords):
                    if (
                        lab in poly.vertex_on[i]
                        and pt.t1.equals_exact(vc[0])
                        and pt.t2.equals_exact(vc[1])
                    ):
                        hit = i
                        break
                if hit is None:
                    return CertOutcome(
                        "contains_zero", ridge_name, str(lab),
                        out.axis_vertical, out.axis_horizontal, out.critical,
                        witness="boundary critical point vanishes off-whitelist",
                    )
                rec["at_vertex"] = poly.vertex_names[hit]
        out.critical.append(rec)
    return out
