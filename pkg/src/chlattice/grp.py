"""Generators of the sporadic triangle groups, word evaluation, projective
orders, braid relations, the antiholomorphic symmetry, and vertex lifts.

All matrices live in SU(2,1) for the Hermitian form H of the group: the basis
is (n1, n2, n3), the polar vectors of the three generating complex reflections.
Words follow the paper's juxtaposition order, with an apostrophe marking an
inverse letter ("232'" denotes R2 R3 R2^-1).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .exactfield import CycloField, CycloNum, as_real
from .hermgeom import HermForm, Mat3, Vec3, proportional, vec_is_zero

SUPPORTED_P = (3, 4, 5, 6, 8, 12)


class UnsupportedP(ValueError):
    pass


class BadLetter(ValueError):
    pass


class RelationFails(AssertionError):
    pass


def parse_word(word: str) -> list[str]:
    """Split a word string into letters; apostrophe after a letter = inverse.

    Accepted letters: 1 2 3 J P S (S is S1).  Example: "23'2" -> [2, 3', 2].
    """
    letters = []
    for ch in word:
        if ch in "123JPS":
            letters.append(ch)
        elif ch == "'":
            if not letters or letters[-1].endswith("'"):
                raise BadLetter(f"dangling inverse mark in {word!r}")
            letters[-1] += "'"
        elif ch in " \t":
            continue
        else:
            raise BadLetter(f"bad letter {ch!r} in word {word!r}")
    return letters


def invert_word(word: str) -> str:
    out = []
    for letter in reversed(parse_word(word)):
        out.append(letter[0] if letter.endswith("'") else letter + "'")
    return "".join(out)


class GroupElt:
    """A matrix together with the word that produced it."""

    __slots__ = ("matrix", "word")

    def __init__(self, matrix: Mat3, word: str = ""):
        self.matrix = matrix
        self.word = word

    def __mul__(self, other: "GroupElt") -> "GroupElt":
        return GroupElt(self.matrix * other.matrix, self.word + other.word)

    def inverse(self) -> "GroupElt":
        return GroupElt(self.matrix.inverse(), invert_word(self.word))

    def apply(self, u: Vec3) -> Vec3:
        return self.matrix.apply(u)

    def __repr__(self):
        return f"GroupElt({self.word!r})"


class AntiElt:
    """Antiholomorphic map v -> M conj(v); two of them compose to a GroupElt."""

    __slots__ = ("matrix",)

    def __init__(self, matrix: Mat3):
        self.matrix = matrix

    def apply(self, u: Vec3) -> Vec3:
        return self.matrix.apply(tuple(c.conj() for c in u))

    def compose(self, other: "AntiElt") -> Mat3:
        return self.matrix * other.matrix.conj()

    def conjugate_matrix(self, m: Mat3) -> Mat3:
        """Matrix of iota o m o iota (holomorphic again)."""
        return self.matrix * m.conj() * self.matrix.conj()


class Group:
    """Everything attached to Gamma(2*pi/p, tau): field, form, generators,
    named vectors and special points."""

    _cache: dict[int, "Group"] = {}

    def __new__(cls, p: int) -> "Group":
        if p not in SUPPORTED_P:
            raise UnsupportedP(f"p must be one of {SUPPORTED_P}, got {p}")
        inst = cls._cache.get(p)
        if inst is None:
            inst = super().__new__(cls)
            inst._init(p)
            cls._cache[p] = inst
        return inst

    def _init(self, p: int) -> None:
        self.p = p
        self.n = 21 * p
        F = self.field = CycloField(self.n)
        one, zero = F.one(), F.zero()
        self.one, self.zero = one, zero

        self.a = F.zeta(7)  # e^{2 pi i/3p}
        self.abar = self.a.conj()
        z7 = F.zeta(3 * p)  # e^{2 pi i/7}
        self.zeta7 = z7
        self.tau = z7.conj() + (z7 ** 2).conj() + (z7 ** 4).conj()
        self.taubar = self.tau.conj()
        self.omega = F.zeta(7 * p)  # e^{2 pi i/3}
        self.zeta_p = F.zeta(21)  # e^{2 pi i/p} = a^3

        a, abar, tau, taubar = self.a, self.abar, self.tau, self.taubar
        self.alpha = as_real(2 - a ** 3 - abar ** 3)
        self.beta = (abar ** 2 - a) * tau

        H = Mat3(
            [
                [self.alpha, self.beta, self.beta.conj()],
                [self.beta.conj(), self.alpha, self.beta],
                [self.beta, self.beta.conj(), self.alpha],
            ]
        )
        self.form = HermForm(H)

        self.R1 = Mat3(
            [
                [a ** 2, tau, -a * taubar],
                [zero, abar, zero],
                [zero, zero, abar],
            ]
        )
        self.J = Mat3(
            [[zero, zero, one], [one, zero, zero], [zero, one, zero]]
        )
        self.R2 = self.J * self.R1 * self.J.inverse()
        self.R3 = self.J.inverse() * self.R1 * self.J
        self.P = self.R1 * self.J
        self.S1 = self.P ** 2 * self.R1 * self.P ** -2 * self.R1 * self.P ** 2

        self._letters = {
            "1": self.R1,
            "2": self.R2,
            "3": self.R3,
            "J": self.J,
            "P": self.P,
            "S": self.S1,
        }
        self._letters.update(
            {k + "'": m.inverse() for k, m in list(self._letters.items())}
        )
        self._word_cache: dict[str, Mat3] = {}

        # -- named polar vectors / mirror lifts (explicit forms of the text) --
        e1 = (one, zero, zero)
        e2 = (zero, one, zero)
        e3 = (zero, zero, one)
        self.n1, self.n2, self.n3 = e1, e2, e3
        self.n_12 = (a ** 2 * taubar - abar, abar ** 2 * tau - a, a ** 3 + abar ** 3)
        self.n_23 = self.J.apply(self.n_12)
        self.n_13 = self.J.apply(self.n_23)
        self.n_232i = (zero, tau, abar)  # 23'2
        self.n_1231i = self.R1.apply(tuple(x * a for x in self.n_23))  # 123'1
        self.n_1232i = (
            abar ** 2 + a * tau,
            abar ** 3 - a ** 3 - taubar,
            abar ** 4 * taubar + abar,
        )  # 1232'
        self.n_1323 = (
            a ** 2 + abar * taubar,
            a ** 4 * tau + a,
            a ** 3 - abar ** 3 - tau,
        )  # 13'23
        self.n_13231i = (a ** 2, a, taubar)  # 13'231'
        self.n_3i23 = self.R3.inverse().apply(e2)  # 3'23
        self.n_2i12 = self.R2.inverse().apply(e1)  # 2'12
        self.n_121i = self.R1.apply(e2)  # 121' = R1 R2 R1^{-1}

        # fixed point of P
        self.p_fix = (a * z7.conj(), one, abar * z7)

        # coequidistance anchors (eq. xyz of the text)
        a3, ab3 = a ** 3, abar ** 3
        self.y0 = (
            -a3 * (abar ** 2 * taubar + a) ** 2,
            (a ** 2 * taubar + abar * tau) * (a ** 2 * taubar - abar),
            (a ** 2 * taubar + abar * tau) * (abar ** 2 * tau - a),
        )
        self.y1 = (
            a * (1 - a3 * taubar) ** 2,
            (1 - a3 * taubar) * (a3 - tau),
            abar * (a3 - tau) ** 2,
        )
        self.y2 = (
            (a3 - tau) * (ab3 + tau),
            abar * (1 - a3 * taubar) * (1 + ab3 * taubar),
            a * (1 - ab3 * tau) * (1 + ab3 * taubar),
        )

        # complex-spine polar vectors of the four base bisectors (Table 1)
        self.f1 = (zero, taubar, abar * tau)
        self.f2 = self.f1
        self.f3 = (a ** 2 * taubar, -a, -taubar)
        self.f4 = (a ** 2 * taubar, a * tau, one)

        # rotation centers for the complex-line eigenvalue checks
        self.o_1323 = (-(a ** 2) * self.omega.conj(), a, taubar)

        # iota = R1 o iota_23, acting as v -> M conj(v)
        K = Mat3([[one, zero, zero], [zero, zero, one], [zero, one, zero]])
        self.iota = AntiElt(self.R1 * K)

    # -- words -----------------------------------------------------------------

    def word(self, word: str) -> Mat3:
        m = self._word_cache.get(word)
        if m is None:
            m = Mat3.identity(self.field)
            for letter in parse_word(word):
                m = m * self._letters[letter]
            self._word_cache[word] = m
        return m

    def word_elt(self, word: str) -> GroupElt:
        return GroupElt(self.word(word), word)

    def mirror_vector(self, word: str) -> Vec3:
        """Polar vector n_w for a conjugate word w = u x u^-1 built from the
        named base vectors, or one of the explicit ones."""
        named = {
            "1": self.n1,
            "2": self.n2,
            "3": self.n3,
            "12": self.n_12,
            "23": self.n_23,
            "13": self.n_13,
            "23'2": self.n_232i,
            "123'1": self.n_1231i,
            "1232'": self.n_1232i,
            "13'23": self.n_1323,
            "13'231'": self.n_13231i,
            "3'23": self.n_3i23,
            "2'12": self.n_2i12,
            "121'": self.n_121i,
        }
        if word in named:
            return named[word]
        raise KeyError(f"no stored mirror vector for {word!r}")

    # -- structural checks -------------------------------------------------------

    def is_unitary(self, m: Mat3) -> bool:
        return m.conj_transpose() * self.form.matrix * m == self.form.matrix

    def projective_order(self, m: Mat3, cap: int = 200) -> int | None:
        """Least k <= cap with m^k scalar, or None."""
        acc = m
        for k in range(1, cap + 1):
            if acc.is_scalar():
                return k
            acc = acc * m
        return None

    def char_poly(self, m: Mat3) -> tuple[CycloNum, CycloNum, CycloNum]:
        """x^3 - c2 x^2 + c1 x - c0 for a 3x3 matrix."""
        c2 = m.trace()
        a = m.rows
        c1 = (
            (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            + (a[0][0] * a[2][2] - a[0][2] * a[2][0])
            + (a[0][0] * a[1][1] - a[0][1] * a[1][0])
        )
        c0 = m.det()
        return c0, c1, c2

    def goldman_disc(self, m: Mat3) -> CycloNum:
        """|tr|^4 - 8 Re(tr^3) + 18 |tr|^2 - 27 for a unimodular matrix.

        Positive iff loxodromic (an eigenvalue leaves the unit circle);
        negative iff regular elliptic; zero on the non-regular boundary.
        """
        assert m.det() == 1, "classification needs det = 1 exactly"
        t = m.trace()
        tb = t.conj()
        tt = as_real(t * tb)
        re_t3 = as_real(t ** 3 + tb ** 3)  # 2 Re(tr^3)
        return as_real(tt * tt - 4 * re_t3 + 18 * tt - 27)

    def repeated_eigenvalue(self, m: Mat3) -> CycloNum | None:
        """The repeated root of the characteristic polynomial, if it lies in L.

        One Euclid step of chi = x^3 - c2 x^2 + c1 x - c0 against
        chi' = 3x^2 - 2 c2 x + c1 leaves the linear remainder
        (2 c1/3 - 2 c2^2/9) x + (c1 c2/9 - c0).
        """
        c0, c1, c2 = self.char_poly(m)
        r1 = c1 * Fraction(2, 3) - c2 * c2 * Fraction(2, 9)
        r0 = c1 * c2 * Fraction(1, 9) - c0
        if r1.is_zero() and r0.is_zero():
            return c2 * Fraction(1, 3)  # triple root
        if r1.is_zero():
            return None
        lam = -r0 / r1
        chi = lam ** 3 - c2 * lam ** 2 + c1 * lam - c0
        dchi = 3 * lam ** 2 - 2 * c2 * lam + c1
        return lam if (chi.is_zero() and dchi.is_zero()) else None

    def rank(self, m: Mat3) -> int:
        """Exact rank via row echelon over the field."""
        rows = [list(r) for r in m.rows]
        rank = 0
        col = 0
        while col < 3 and rank < 3:
            piv = next(
                (r for r in range(rank, 3) if not rows[r][col].is_zero()), None
            )
            if piv is None:
                col += 1
                continue
            rows[rank], rows[piv] = rows[piv], rows[rank]
            inv = rows[rank][col].inverse()
            for r in range(rank + 1, 3):
                if not rows[r][col].is_zero():
                    f = rows[r][col] * inv
                    rows[r] = [
                        rows[r][j] - f * rows[rank][j] for j in range(3)
                    ]
            rank += 1
            col += 1
        return rank

    def classify_isometry(self, m: Mat3) -> str:
        """'loxodromic' | 'regular elliptic' | 'complex reflection' | 'parabolic'."""
        d = self.goldman_disc(m)
        s = d.sign()
        if s > 0:
            return "loxodromic"
        if s < 0:
            return "regular elliptic"
        lam = self.repeated_eigenvalue(m)
        if lam is None:
            # repeated eigenvalue exists but lies outside L; boundary case
            return "boundary (eigenvalue outside field)"
        shifted = Mat3(
            [
                [m.rows[i][j] - (lam if i == j else self.zero) for j in range(3)]
                for i in range(3)
            ]
        )
        r = self.rank(shifted)
        triple = m.trace() == 3 * lam
        if triple:
            # diagonalizable only if scalar
            return "elliptic (scalar)" if r == 0 else "parabolic"
        # double eigenvalue: eigenspace dim 2 iff rank 1
        return "complex reflection" if r == 1 else "parabolic"

    def verify_braid(self) -> dict:
        """Exact matrix identities (R1R2)^2=(R2R1)^2 and the 3-braiding."""
        lhs1 = (self.R1 * self.R2) ** 2
        rhs1 = (self.R2 * self.R1) ** 2
        w = self.R2 * self.R3 * self.R2.inverse()
        lhs2 = self.R1 * w * self.R1
        rhs2 = w * self.R1 * w
        ok1 = lhs1 == rhs1
        ok2 = lhs2 == rhs2
        if not (ok1 and ok2):
            raise RelationFails("braid relation fails: transcription bug")
        return {"braid4": ok1, "braid3": ok2}

    def projectively_equal(self, m1: Mat3, m2: Mat3) -> bool:
        """m1 = unit scalar * m2 (scalar must be a root of unity in L)."""
        # find a nonzero entry of m2
        for i in range(3):
            for j in range(3):
                if not m2.rows[i][j].is_zero():
                    if m1.rows[i][j].is_zero():
                        return False
                    c = m1.rows[i][j] / m2.rows[i][j]
                    if m2.scale(c) != m1:
                        return False
                    # unit scalar: |c|^2 = 1
                    return (c * c.conj()) == 1
        return False

    def projectively_identity(self, m: Mat3) -> bool:
        return self.projectively_equal(m, Mat3.identity(self.field))

    # -- vertex lifts ---------------------------------------------------------------

    def kernel_vector(self, m: Mat3, lam: CycloNum) -> Vec3:
        """A nonzero kernel vector of (m - lam I), via row cross products."""
        rows = [
            tuple(m.rows[i][j] - (lam if i == j else self.zero) for j in range(3))
            for i in range(3)
        ]

        def cross(r, s):
            return (
                r[1] * s[2] - r[2] * s[1],
                r[2] * s[0] - r[0] * s[2],
                r[0] * s[1] - r[1] * s[0],
            )

        for i in range(3):
            for j in range(i + 1, 3):
                v = cross(rows[i], rows[j])
                if not vec_is_zero(v):
                    return v
        raise ValueError("matrix - lam*I has rank < 2; eigenvector not unique")

    def fixed_point_12type(self, word: str) -> Vec3:
        """Isolated fixed point lift of a word conjugate to 12 or 1232'.

        Both have abar^2 as the simple eigenvalue on the mirror intersection.
        """
        m = self.word(word)
        v = self.kernel_vector(m, self.abar ** 2)
        mv = m.apply(v)
        assert proportional(mv, v)
        return v

    def vertex_vector(self, kind: str, sub: str, sup: str | None = None) -> Vec3:
        """Lift of a vertex spec: p_w / q_w as the distinguished eigenvector
        of the word, p^u_w / q^u_w as the Hermitian cross product of the two
        polar vectors."""
        if kind not in ("p", "q"):
            raise ValueError("kind must be 'p' or 'q'")
        if sup is None:
            v = self.fixed_point_12type(sub)
            cls = self.form.classify(v)
            if cls > 0:
                raise ValueError(
                    f"{kind}_{sub} is polar for p={self.p}; use a truncation "
                    "vertex p^u_w instead"
                )
            return v
        return self.form.box(self.mirror_vector(sup), self.mirror_vector(sub))
