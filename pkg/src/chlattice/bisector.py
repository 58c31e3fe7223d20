"""Bounding bisectors, segment/side tests, the cotranchal criterion, and
spinal coordinates on Giraud disks with their bivariate trace functions.

The 28 bounding bisectors are P^k images (k = -3..3) of four base bisectors
R1, R1-, S1, S1-.  Each is stored with its extended-real-spine span, its
complex-spine polar vector, and the canonical equidistant pair (q0, q1) with
q0 = P^k y0 on the same side as the fixed point of P.  Sign convention
throughout: g = |<.,q0>|^2 - |<.,q1>|^2 is NEGATIVE on the side of the
polyhedron (closer to q0), matching dist_cmp.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactfield import CycloNum, as_real
from .grp import Group
from .hermgeom import Vec3, vec_add, vec_scale, vec_sub

__all__ = [
    "SideLabel",
    "Bisector",
    "BivarQuad",
    "GiraudChart",
    "SegmentOutcome",
    "bounding_bisectors",
    "segment_classify",
    "line_quadratic",
    "cotranchal_only_slice",
    "ridge_types",
    "match_ridge",
    "make_chart",
    "GIRAUD_BASES",
    "COMPLEX_BASES",
    "DegenerateSegment",
    "BadOrthogonality",
    "NotCoequidistant",
    "Cospinal",
]


class DegenerateSegment(ValueError):
    pass


class BadOrthogonality(ValueError):
    pass


class NotCoequidistant(ValueError):
    pass


class Cospinal(ValueError):
    pass


@dataclass(frozen=True, order=True)
class SideLabel:
    """Label (family, sign, P-power) of a bounding side/bisector.

    fam is 'r' or 's'; sign +1 for R1/S1 and -1 for the minus versions;
    k is the power of P mod 7, normalized to -3..3.
    """

    fam: str
    sign: int
    k: int

    def __post_init__(self):
        assert self.fam in ("r", "s") and self.sign in (1, -1)
        object.__setattr__(self, "k", (self.k + 3) % 7 - 3)

    def shifted(self, j: int) -> "SideLabel":
        return SideLabel(self.fam, self.sign, self.k + j)

    @property
    def index(self) -> int:
        """Index in the B_1..B_28 numbering: P^k R1 <-> 1+4k etc. (k mod 7)."""
        base = {("r", 1): 1, ("r", -1): 2, ("s", 1): 3, ("s", -1): 4}
        return base[(self.fam, self.sign)] + 4 * (self.k % 7)

    def __str__(self) -> str:
        core = ("R1" if self.fam == "r" else "S1") + ("" if self.sign > 0 else "-")
        return core if self.k == 0 else f"P^{self.k} {core}"

    @classmethod
    def from_index(cls, idx: int) -> "SideLabel":
        k, r = divmod(idx - 1, 4)
        fam, sign = [("r", 1), ("r", -1), ("s", 1), ("s", -1)][r]
        return cls(fam, sign, k)


class Bisector:
    """A bounding bisector with all representations used in the verifications."""

    def __init__(self, group: Group, label: SideLabel):
        self.group = group
        self.label = label
        G = group
        Pk = G.P ** label.k
        if label.fam == "r":
            base_spine = (G.n1, G.n_23)
            v = G.n1
            nn = G.form.inner(G.n1, G.n1)
            cr = G.form.inner(G.n_23, G.n1)
            w = vec_sub(vec_scale(G.n_23, nn), vec_scale(G.n1, cr))
            pairing = G.R1
            polar = G.f1
            minus_spine = (
                vec_scale(G.n1, G.a ** 2),
                vec_scale(G.n_1231i, G.abar),
            )
            minus_polar = G.f2
        else:
            base_spine = (vec_scale(G.n_232i, G.a), G.n_1323)
            v = G.n_232i
            c = G.form.inner(G.n_232i, G.n_1323)
            A = G.form.inner(G.n_232i, G.n_232i)
            B = G.form.inner(G.n_1323, G.n_232i)
            w = vec_scale(vec_sub(vec_scale(G.n_1323, A), vec_scale(G.n_232i, B)), c)
            pairing = G.S1
            polar = G.f3
            minus_spine = (
                vec_scale(G.n_13231i, G.abar),
                G.n_1232i,
            )
            minus_polar = G.f4

        if label.sign > 0:
            spine, chart_v, chart_w, pol = base_spine, v, w, polar
        else:
            spine = tuple(pairing.apply(u) for u in base_spine)
            chart_v = pairing.apply(v)
            chart_w = pairing.apply(w)
            pol = pairing.apply(polar)
            # Table 1 lists its own spine span for the minus bisectors
            self._alt_spine = tuple(Pk.apply(u) for u in minus_spine)
            pol = pairing.apply(polar) if label.fam == "r" else pairing.apply(polar)
        self.spine = tuple(Pk.apply(u) for u in spine)
        self.chart_v = Pk.apply(chart_v)
        self.chart_w = Pk.apply(chart_w)
        self.polar = Pk.apply(pol)

        g_far = pairing.inverse() if label.sign > 0 else pairing
        self.q_near = Pk.apply(G.y0)
        self.q_far = Pk.apply(g_far.apply(G.y0))

    # -- representations ------------------------------------------------------

    def side_element(self, u: Vec3) -> CycloNum:
        """|<u,q_near>|^2 - |<u,q_far>|^2; negative strictly inside E's side."""
        return self.group.form.abs2_diff(u, self.q_near, self.q_far)

    def side_sign(self, u: Vec3) -> int:
        return self.side_element(u).sign()

    def contains(self, u: Vec3) -> bool:
        return self.side_element(u).is_zero()

    def __repr__(self):
        return f"Bisector({self.label})"


def bounding_bisectors(group: Group) -> dict[SideLabel, Bisector]:
    out = {}
    for fam in ("r", "s"):
        for sign in (1, -1):
            for k in range(-3, 4):
                lab = SideLabel(fam, sign, k)
                out[lab] = Bisector(group, lab)
    return out


# --------------------------------------------------------------------------
# Geodesic segments against bisectors (rational arithmetic in k)
# --------------------------------------------------------------------------


def line_quadratic(group: Group, base: Vec3, direction: Vec3, q0: Vec3, q1: Vec3):
    """Coefficients (A, B, C) of |<z_t,q0>|^2 - |<z_t,q1>|^2 = A t^2 + 2B t + C
    along z_t = base + t*direction (equal square norms of q0, q1 assumed)."""
    form = group.form
    zv0 = form.inner(base, q0)
    zv1 = form.inner(base, q1)
    zd0 = form.inner(direction, q0)
    zd1 = form.inner(direction, q1)
    A = as_real(zd0 * zd0.conj() - zd1 * zd1.conj())
    C = as_real(zv0 * zv0.conj() - zv1 * zv1.conj())
    B = as_real(
        (zv0 * zd0.conj() + zd0 * zv0.conj()) - (zv1 * zd1.conj() + zd1 * zv1.conj())
    ) * Fraction(1, 2)
    return A, B, C


@dataclass
class SegmentOutcome:
    kind: str  # 'contained' | 'one_side' | 'crosses' | 'tangent_at_endpoint' | 'tangent_interior'
    side: int | None  # sign on the open segment, when defined
    quad: tuple  # (A, B, C)
    tangent_end: int | None = None  # 0 or 1


def scale_for_segment(group: Group, v: Vec3, w: Vec3) -> tuple[Vec3, Vec3]:
    """Rescale w so <v, w> is real and NEGATIVE: then v + t(w - v), t in
    [0,1], stays inside the closed ball and traces the geodesic segment
    (the square norm (1-t)^2<v,v> + t^2<w,w> + 2t(1-t)<v,w> is <= 0 term by
    term).  Valid for null endpoints too."""
    c = group.form.inner(v, w)
    if c.is_zero():
        raise DegenerateSegment("endpoint lifts are orthogonal")
    if c.is_real():
        if c.sign() < 0:
            return v, w
        return v, vec_scale(w, -1)
    return v, vec_scale(w, -c)  # <v, -c w> = -|c|^2 < 0


def segment_classify(group: Group, v: Vec3, w: Vec3, bis: Bisector) -> SegmentOutcome:
    """Classify the geodesic segment [v, w] against a bounding bisector."""
    v, w = scale_for_segment(group, v, w)
    A, B, C = line_quadratic(group, v, vec_sub(w, v), bis.q_near, bis.q_far)
    return _classify_quadratic(A, B, C)


def _classify_quadratic(A: CycloNum, B: CycloNum, C: CycloNum) -> SegmentOutcome:
    """Sign pattern of F(t) = A t^2 + 2 B t + C on [0, 1], all tests exact."""
    quad = (A, B, C)
    sA, sB, sC = A.sign(), B.sign(), C.sign()
    s1 = (A + 2 * B + C).sign()
    if sA == 0 and sB == 0 and sC == 0:
        return SegmentOutcome("contained", 0, quad)
    if sA == 0:
        if sB == 0:
            return SegmentOutcome("one_side", sC, quad)
        if sC == 0:
            return SegmentOutcome("one_side", sB, quad)  # root at t=0 only
        if s1 == 0:
            return SegmentOutcome("one_side", sC, quad)  # root at t=1 only
        if sC != s1:
            return SegmentOutcome("crosses", None, quad)
        return SegmentOutcome("one_side", sC, quad)
    D = as_real(B * B - A * C)
    sD = D.sign()
    if sD < 0:
        return SegmentOutcome("one_side", sA, quad)
    # vertex t* = -B/A: position relative to [0, 1]
    sAB = (A + B).sign()
    if sB == 0:
        vertex = "at0"
    elif sB * sA > 0:
        vertex = "left"  # t* < 0
    elif sAB == 0:
        vertex = "at1"
    elif sAB * sA < 0:
        vertex = "right"  # t* > 1
    else:
        vertex = "inside"
    if sD == 0:
        if vertex in ("left", "right"):
            return SegmentOutcome("one_side", sA, quad)
        if vertex == "at0":
            return SegmentOutcome("tangent_at_endpoint", sA, quad, tangent_end=0)
        if vertex == "at1":
            return SegmentOutcome("tangent_at_endpoint", sA, quad, tangent_end=1)
        return SegmentOutcome("tangent_interior", sA, quad)
    # two distinct real roots
    if sC == 0 and s1 == 0:
        return SegmentOutcome("one_side", -sA, quad)  # roots are exactly {0, 1}
    if sC == 0:
        # roots {0, r}; r in (0,1) iff vertex strictly inside (0, 1/?) -- decide
        # by the sign at t=1: with a zero at 0, F(1) has the interior sign
        # unless the second root lies in (0,1).
        interior = sB if sB != 0 else sA  # sign of F just right of 0
        if s1 == 0 or s1 == interior:
            return SegmentOutcome("one_side", interior, quad)
        return SegmentOutcome("crosses", None, quad)
    if s1 == 0:
        interior = (-(A + B)).sign()  # sign of F just left of 1: F'(1)=2(A+B)
        interior = interior if interior != 0 else sA
        if sC == interior:
            return SegmentOutcome("one_side", interior, quad)
        return SegmentOutcome("crosses", None, quad)
    if sC != s1:
        return SegmentOutcome("crosses", None, quad)
    if vertex == "inside":
        # F(t*) = -D/A, nonzero since sD > 0
        s_vertex = -sD * sA
        if s_vertex != sC:
            return SegmentOutcome("crosses", None, quad)
    return SegmentOutcome("one_side", sC, quad)


def cotranchal_only_slice(group: Group, n: Vec3, v1: Vec3, v2: Vec3) -> bool:
    """Goldman/Hsieh criterion: the two cotranchal bisectors meet exactly in
    the common slice polar to n iff <v1,v1><v2,v2> >= (Re<v1,v2>)^2."""
    form = group.form
    if not (form.inner(v1, n).is_zero() and form.inner(v2, n).is_zero()):
        raise BadOrthogonality("spine points not orthogonal to the slice polar")
    if form.norm(v1).sign() >= 0 or form.norm(v2).sign() >= 0:
        raise BadOrthogonality("spine points must be negative vectors")
    z = form.inner(v1, v2)
    re = (z + z.conj()) * Fraction(1, 2)
    lhs = as_real(form.norm(v1) * form.norm(v2))
    return as_real(lhs - re * re).sign() >= 0


# --------------------------------------------------------------------------
# Bivariate quadratics on Giraud charts
# --------------------------------------------------------------------------


class BivarQuad:
    """Polynomial in (t1, t2), degree <= 2 in each variable, coefficients in
    the real subfield.  coeff[i][j] multiplies t1^i t2^j."""

    __slots__ = ("coeff", "_ivs")

    def __init__(self, coeff):
        self.coeff = tuple(tuple(row) for row in coeff)
        self._ivs = {}
        assert len(self.coeff) == 3 and all(len(r) == 3 for r in self.coeff)

    @property
    def a0(self):
        return self.coeff[0][0]

    def named(self) -> dict:
        c = self.coeff
        return {
            "a0": c[0][0], "a1": c[1][0], "a2": c[0][1],
            "a11": c[2][0], "a12": c[1][1], "a22": c[0][2],
            "a112": c[2][1], "a122": c[1][2], "a1122": c[2][2],
        }

    def is_zero(self) -> bool:
        return all(c.is_zero() for row in self.coeff for c in row)

    def __eq__(self, other):
        return isinstance(other, BivarQuad) and self.coeff == other.coeff

    def scale(self, c) -> "BivarQuad":
        return BivarQuad([[e * c for e in row] for row in self.coeff])

    def __neg__(self):
        return self.scale(-1)

    def swap_vars(self) -> "BivarQuad":
        return BivarQuad(
            [[self.coeff[j][i] for j in range(3)] for i in range(3)]
        )

    def evaluate(self, t1, t2) -> CycloNum:
        """Exact evaluation; t1, t2 may be Fractions or field elements."""
        acc = None
        for i in range(3):
            for j in range(3):
                c = self.coeff[i][j]
                if not c.is_zero():
                    term = c
                    for _ in range(i):
                        term = term * t1
                    for _ in range(j):
                        term = term * t2
                    acc = term if acc is None else acc + term
        if acc is None:
            acc = self.coeff[0][0]
        return acc

    def poly_in_t2(self) -> list[list[CycloNum]]:
        """[p0, p1, p2] with f = p0(t1) + p1(t1) t2 + p2(t1) t2^2, coeff lists in t1."""
        return [[self.coeff[i][j] for i in range(3)] for j in range(3)]

    def poly_in_t1(self) -> list[list[CycloNum]]:
        return [[self.coeff[i][j] for j in range(3)] for i in range(3)]

    def d_dt1(self) -> "BivarQuad":
        out = [[None] * 3 for _ in range(3)]
        zero = self.coeff[0][0].field.zero()
        for i in range(3):
            for j in range(3):
                out[i][j] = self.coeff[i + 1][j] * (i + 1) if i < 2 else zero
        return BivarQuad(out)

    def d_dt2(self) -> "BivarQuad":
        out = [[None] * 3 for _ in range(3)]
        zero = self.coeff[0][0].field.zero()
        for i in range(3):
            for j in range(3):
                out[i][j] = self.coeff[i][j + 1] * (j + 1) if j < 2 else zero
        return BivarQuad(out)

    def _iv_coeffs(self, bits: int):
        """Per-instance cache: lives and dies with the quad, so no stale
        entries are possible."""
        cached = self._ivs.get(bits)
        if cached is None:
            cached = [
                [
                    None if self.coeff[i][j].is_zero()
                    else self.coeff[i][j].real_interval(bits)
                    for j in range(3)
                ]
                for i in range(3)
            ]
            self._ivs[bits] = cached
        return cached

    def interval_eval(self, t1_iv, t2_iv, bits: int = 128):
        """Interval evaluation over interval arguments (mpmath.iv)."""
        import mpmath

        iv = mpmath.iv
        old = iv.prec
        try:
            iv.prec = bits
            co = self._iv_coeffs(bits)
            t1p = [iv.mpf(1), t1_iv, t1_iv * t1_iv]
            t2p = [iv.mpf(1), t2_iv, t2_iv * t2_iv]
            acc = iv.mpf(0)
            for i in range(3):
                for j in range(3):
                    c = co[i][j]
                    if c is not None:
                        acc += c * t1p[i] * t2p[j]
            return acc
        finally:
            iv.prec = old

    def approx_eval(self, x: float, y: float) -> float:
        co = self._ivs.get("float")
        if co is None:
            co = [
                [
                    0.0 if self.coeff[i][j].is_zero()
                    else self.coeff[i][j].approx().real
                    for j in range(3)
                ]
                for i in range(3)
            ]
            self._ivs["float"] = co
        acc = 0.0
        xp = (1.0, x, x * x)
        yp = (1.0, y, y * y)
        for i in range(3):
            row = co[i]
            for j in range(3):
                if row[j]:
                    acc += row[j] * xp[i] * yp[j]
        return acc


class GiraudChart:
    """Spinal coordinates on the Giraud disk of two coequidistant bisectors.

    V(t1, t2) = (v1 + t1 w1) box (v2 + t2 w2), where v is the positive spine
    vector of the chart recipe and w the negative one, so the disk is bounded
    in (t1, t2) and Table 5/6 values are reproducible bit for bit.
    """

    def __init__(self, group: Group, b1: Bisector, b2: Bisector, anchor: Vec3,
                 far1: Vec3, far2: Vec3):
        self.group = group
        self.b1, self.b2 = b1, b2
        self.anchor = anchor
        self.far1, self.far2 = far1, far2
        form = group.form
        self.v1, self.w1 = b1.chart_v, b1.chart_w
        self.v2, self.w2 = b2.chart_v, b2.chart_w
        box = form.box
        self.c00 = box(self.v1, self.v2)
        self.c10 = box(self.w1, self.v2)
        self.c01 = box(self.v1, self.w2)
        self.c11 = box(self.w1, self.w2)
        self._coequid_check()

    def _coequid_check(self):
        form = self.group.form
        for far, b in ((self.far1, self.b1), (self.far2, self.b2)):
            if form.norm(self.anchor) != form.norm(far):
                raise NotCoequidistant("anchor/far lift norms differ")
            # the bisector's spine must be equidistant from anchor and far
            for u in (b.spine[0], b.spine[1],
                      vec_add(b.spine[0], b.spine[1]),
                      vec_sub(b.spine[0], b.spine[1]),
                      vec_add(b.spine[0], vec_add(b.spine[1], b.spine[1]))):
                if not form.abs2_diff(u, self.anchor, far).is_zero():
                    raise NotCoequidistant(
                        f"pair does not describe {b.label}: spine sample fails"
                    )

    def point(self, t1, t2) -> Vec3:
        u = self.c00
        u = vec_add(u, vec_scale(self.c10, t1))
        u = vec_add(u, vec_scale(self.c01, t2))
        u = vec_add(u, vec_scale(self.c11, t1 * t2))
        return u

    def coords(self, u: Vec3) -> tuple[CycloNum, CycloNum]:
        """Exact spinal coordinates of a point on the disk (ratios in k)."""
        form = self.group.form
        t = []
        for v, w in ((self.v1, self.w1), (self.v2, self.w2)):
            num = form.inner(u, v)
            den = form.inner(u, w)
            if den.is_zero():
                raise ZeroDivisionError("point at infinity of the chart")
            t.append(as_real(-num / den))
        return t[0], t[1]

    def gram_quad(self) -> BivarQuad:
        """Determinant of the Gram matrix of (v1+t1w1, v2+t2w2): positive
        exactly on the Giraud disk in spinal coordinates."""
        form = self.group.form
        inner = form.inner
        n_v1, n_w1 = form.norm(self.v1), form.norm(self.w1)
        n_v2, n_w2 = form.norm(self.v2), form.norm(self.w2)
        r1 = inner(self.v1, self.w1)
        r1 = as_real(r1 + r1.conj())  # 2 Re
        r2 = inner(self.v2, self.w2)
        r2 = as_real(r2 + r2.conj())
        # G12(t1,t2) = inner(v1 + t1 w1, v2 + t2 w2), affine in each variable
        g_vv = inner(self.v1, self.v2)
        g_wv = inner(self.w1, self.v2)
        g_vw = inner(self.v1, self.w2)
        g_ww = inner(self.w1, self.w2)
        zero = self.group.zero
        z = {(0, 0): g_vv, (1, 0): g_wv, (0, 1): g_vw, (1, 1): g_ww}
        abs2 = [[zero for _ in range(3)] for _ in range(3)]
        for (i1, j1), z1 in z.items():
            for (i2, j2), z2 in z.items():
                abs2[i1 + i2][j1 + j2] = abs2[i1 + i2][j1 + j2] + z1 * z2.conj()
        g11 = [n_v1, r1, n_w1]  # in t1
        g22 = [n_v2, r2, n_w2]  # in t2
        prod = [[g11[i] * g22[j] for j in range(3)] for i in range(3)]
        coeff = [
            [as_real(prod[i][j] - abs2[i][j]) for j in range(3)] for i in range(3)
        ]
        return BivarQuad(coeff)

    def trace_quad(self, q0: Vec3, q1: Vec3) -> BivarQuad:
        """g(t1,t2) = |<V,q0>|^2 - |<V,q1>|^2 as a BivarQuad over k."""
        form = self.group.form
        zero = self.group.zero
        coeff = [[zero for _ in range(3)] for _ in range(3)]
        for q, sgn in ((q0, 1), (q1, -1)):
            z = {
                (0, 0): form.inner(self.c00, q),
                (1, 0): form.inner(self.c10, q),
                (0, 1): form.inner(self.c01, q),
                (1, 1): form.inner(self.c11, q),
            }
            for (i1, j1), z1 in z.items():
                for (i2, j2), z2 in z.items():
                    term = z1 * z2.conj()
                    coeff[i1 + i2][j1 + j2] = coeff[i1 + i2][j1 + j2] + (
                        term if sgn > 0 else -term
                    )
        return BivarQuad([[as_real(c) for c in row] for row in coeff])

    def trace_of_bisector(self, bis: Bisector) -> BivarQuad:
        """Trace of a bounding bisector on this chart, oriented so that the
        function is NEGATIVE on E's side (paper's (x0, x1) = (near, far))."""
        return self.trace_quad(bis.q_near, bis.q_far)


# --------------------------------------------------------------------------
# Ridge catalogue: the P-orbit base types of 2-cells
# --------------------------------------------------------------------------

# Giraud base ridges: (label1, label2, anchor key, far-word1, far-word2).
# far words act on the anchor to produce the second equidistance point of the
# corresponding bisector (anchor itself is the first).
GIRAUD_BASES = (
    (SideLabel("r", 1, 0), SideLabel("r", -1, -1), "y1", "1'P", "P'1"),
    (SideLabel("r", 1, 0), SideLabel("r", -1, -2), "y2", "1'PP", "P'P'1"),
    (SideLabel("r", 1, 0), SideLabel("s", 1, 2), "y2", "1'PP", "PPS'P'P'P'"),
    (SideLabel("r", 1, 0), SideLabel("s", 1, 0), "y0", "1'", "S'"),
    (SideLabel("r", -1, 0), SideLabel("s", -1, 0), "y0", "1", "S"),
    (SideLabel("s", 1, 0), SideLabel("s", -1, 0), "y0", "S'", "S"),
    (SideLabel("r", -1, -2), SideLabel("s", -1, 3), "y2", "P'P'1", "PPPSP'P'"),
)

# Complex-line base ridges: (label1, label2, mirror word, min p).
COMPLEX_BASES = (
    (SideLabel("r", 1, 0), SideLabel("r", -1, 0), "1", 3),
    (SideLabel("r", 1, 0), SideLabel("r", -1, -3), "23", 5),
    (SideLabel("s", 1, 0), SideLabel("s", -1, 2), "232'", 3),
    (SideLabel("s", 1, 0), SideLabel("s", -1, -2), "13'23", 8),
)


def ridge_types(p: int):
    """All ridge orbit bases valid for this p, as ('giraud'|'complex', spec)."""
    out = [("giraud", spec) for spec in GIRAUD_BASES]
    for spec in COMPLEX_BASES:
        if p >= spec[3]:
            out.append(("complex", spec))
    return out


def match_ridge(pair: frozenset, p: int):
    """Find (kind, base spec, shift j) with P^j(base labels) == pair."""
    for kind, spec in ridge_types(p):
        l1, l2 = spec[0], spec[1]
        for j in range(7):
            if frozenset((l1.shifted(j), l2.shifted(j))) == pair:
                return kind, spec, j
    raise KeyError(f"no ridge type matches {set(map(str, pair))}")


def make_chart(
    group: Group, bisectors: dict[SideLabel, Bisector], pair: frozenset
) -> GiraudChart:
    """Giraud chart for a ridge, transported from its base type by P^j."""
    kind, spec, j = match_ridge(pair, group.p)
    if kind != "giraud":
        raise Cospinal(f"{set(map(str, pair))} is a complex (cotranchal) ridge")
    l1, l2, anchor_key, fw1, fw2 = spec
    Pj = group.P ** j
    anchor0 = {"y0": group.y0, "y1": group.y1, "y2": group.y2}[anchor_key]
    anchor = Pj.apply(anchor0)
    far1 = Pj.apply(group.word(fw1).apply(anchor0))
    far2 = Pj.apply(group.word(fw2).apply(anchor0))
    return GiraudChart(
        group,
        bisectors[l1.shifted(j)],
        bisectors[l2.shifted(j)],
        anchor,
        far1,
        far2,
    )
