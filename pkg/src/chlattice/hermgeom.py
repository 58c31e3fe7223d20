"""Linear algebra of CH^2: the signature-(2,1) Hermitian form, inner products,
Hermitian cross products, point classification and distance comparison.

Convention fixed project-wide: inner(u, v) = v* H u, i.e. linear in the first
argument and conjugate-linear in the second.  All lifts stay unnormalized so
every test is a sign test inside the field.
"""

from __future__ import annotations

from fractions import Fraction

from .exactfield import CycloNum, as_real

Vec3 = tuple[CycloNum, CycloNum, CycloNum]


class NormMismatch(ValueError):
    pass


def vec(*entries) -> Vec3:
    assert len(entries) == 3
    return tuple(entries)


def vec_add(u: Vec3, v: Vec3) -> Vec3:
    return (u[0] + v[0], u[1] + v[1], u[2] + v[2])


def vec_sub(u: Vec3, v: Vec3) -> Vec3:
    return (u[0] - v[0], u[1] - v[1], u[2] - v[2])


def vec_scale(u: Vec3, c) -> Vec3:
    return (u[0] * c, u[1] * c, u[2] * c)


def vec_conj(u: Vec3) -> Vec3:
    return (u[0].conj(), u[1].conj(), u[2].conj())


def vec_is_zero(u: Vec3) -> bool:
    return u[0].is_zero() and u[1].is_zero() and u[2].is_zero()


def vec_embed(u: Vec3, m: int) -> Vec3:
    return (u[0].embed(m), u[1].embed(m), u[2].embed(m))


def proportional(u: Vec3, v: Vec3) -> bool:
    """Projective equality of two nonzero vectors (exact cross-ratios)."""
    for i in range(3):
        for j in range(3):
            if not (u[i] * v[j] - u[j] * v[i]).is_zero():
                return False
    return not (vec_is_zero(u) or vec_is_zero(v))


class Mat3:
    """3x3 matrix over a cyclotomic field."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = tuple(tuple(r) for r in rows)
        assert len(self.rows) == 3 and all(len(r) == 3 for r in self.rows)

    @classmethod
    def identity(cls, field) -> "Mat3":
        one, zero = field.one(), field.zero()
        return cls(
            [[one, zero, zero], [zero, one, zero], [zero, zero, one]]
        )

    def __mul__(self, other):
        if isinstance(other, Mat3):
            a, b = self.rows, other.rows
            return Mat3(
                [
                    [
                        a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j]
                        for j in range(3)
                    ]
                    for i in range(3)
                ]
            )
        return NotImplemented

    def apply(self, u: Vec3) -> Vec3:
        a = self.rows
        return tuple(
            a[i][0] * u[0] + a[i][1] * u[1] + a[i][2] * u[2] for i in range(3)
        )

    def scale(self, c) -> "Mat3":
        return Mat3([[e * c for e in row] for row in self.rows])

    def det(self) -> CycloNum:
        a = self.rows
        return (
            a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
        )

    def adjugate(self) -> "Mat3":
        a = self.rows

        def cof(i, j):
            r = [k for k in range(3) if k != i]
            c = [k for k in range(3) if k != j]
            m = a[r[0]][c[0]] * a[r[1]][c[1]] - a[r[0]][c[1]] * a[r[1]][c[0]]
            return m if (i + j) % 2 == 0 else -m

        return Mat3([[cof(j, i) for j in range(3)] for i in range(3)])

    def inverse(self) -> "Mat3":
        d = self.det()
        if d.is_zero():
            raise ZeroDivisionError("singular matrix")
        inv_d = d.inverse()
        return self.adjugate().scale(inv_d)

    def conj_transpose(self) -> "Mat3":
        a = self.rows
        return Mat3([[a[j][i].conj() for j in range(3)] for i in range(3)])

    def conj(self) -> "Mat3":
        return Mat3([[e.conj() for e in row] for row in self.rows])

    def trace(self) -> CycloNum:
        return self.rows[0][0] + self.rows[1][1] + self.rows[2][2]

    def embed(self, m: int) -> "Mat3":
        return Mat3([[e.embed(m) for e in row] for row in self.rows])

    def __eq__(self, other):
        return isinstance(other, Mat3) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        field = self.rows[0][0].field
        out = Mat3.identity(field)
        base = self
        while k:
            if k & 1:
                out = out * base
            if k > 1:
                base = base * base
            k >>= 1
        return out

    def is_scalar(self) -> bool:
        a = self.rows
        off = all(a[i][j].is_zero() for i in range(3) for j in range(3) if i != j)
        return off and a[0][0] == a[1][1] and a[1][1] == a[2][2]

    def scalar_value(self) -> CycloNum:
        assert self.is_scalar()
        return self.rows[0][0]

    def __repr__(self):
        return f"Mat3({[[str(e) for e in r] for r in self.rows]})"


class HermForm:
    """Hermitian form of signature (2,1) on C^3, with the derived geometry ops."""

    def __init__(self, matrix: Mat3):
        self.matrix = matrix
        assert matrix == matrix.conj_transpose(), "form is not Hermitian"

    def inner(self, u: Vec3, v: Vec3) -> CycloNum:
        """<u, v> = v* H u (conjugate-linear in v)."""
        h = self.matrix.rows
        hu = [h[i][0] * u[0] + h[i][1] * u[1] + h[i][2] * u[2] for i in range(3)]
        return (
            v[0].conj() * hu[0] + v[1].conj() * hu[1] + v[2].conj() * hu[2]
        )

    def norm(self, u: Vec3) -> CycloNum:
        return as_real(self.inner(u, u))

    def row(self, u: Vec3) -> Vec3:
        """u* H as a row vector."""
        h = self.matrix.rows
        uc = vec_conj(u)
        return tuple(
            uc[0] * h[0][j] + uc[1] * h[1][j] + uc[2] * h[2][j] for j in range(3)
        )

    def box(self, u: Vec3, v: Vec3) -> Vec3:
        """Hermitian cross product: Euclidean cross of u*H and v*H.

        Zero iff u, v are collinear; otherwise spans span(u,v)^perp.
        """
        x = self.row(u)
        y = self.row(v)
        return (
            x[1] * y[2] - x[2] * y[1],
            x[2] * y[0] - x[0] * y[2],
            x[0] * y[1] - x[1] * y[0],
        )

    def classify(self, u: Vec3) -> int:
        """-1: point of CH^2, 0: ideal boundary, +1: polar to a complex line."""
        if vec_is_zero(u):
            raise ValueError("cannot classify the zero vector")
        return self.norm(u).sign()

    def dist_cmp(self, u: Vec3, q0: Vec3, q1: Vec3) -> int:
        """Sign of |<u,q0>|^2 - |<u,q1>|^2; negative means u closer to q0.

        Requires equal square norms of q0, q1 (both negative points).
        """
        if self.norm(q0) != self.norm(q1):
            raise NormMismatch("comparison points must have equal square norms")
        z0 = self.inner(u, q0)
        z1 = self.inner(u, q1)
        return as_real(z0 * z0.conj() - z1 * z1.conj()).sign()

    def abs2_diff(self, u: Vec3, q0: Vec3, q1: Vec3) -> CycloNum:
        """|<u,q0>|^2 - |<u,q1>|^2 as an exact real field element."""
        z0 = self.inner(u, q0)
        z1 = self.inner(u, q1)
        return as_real(z0 * z0.conj() - z1 * z1.conj())

    def side_element(self, u: Vec3, q0: Vec3, q1: Vec3) -> CycloNum:
        """Exact real element with dist_cmp semantics for arbitrary lifts.

        Negative iff u is strictly closer to q0.  Instead of rescaling lifts
        (which would need square roots), the two terms are cross-weighted by
        the opposite square norms; both norms must be negative.
        """
        n0 = self.norm(q0)
        n1 = self.norm(q1)
        z0 = self.inner(u, q0)
        z1 = self.inner(u, q1)
        if n0 == n1:
            return as_real(z0 * z0.conj() - z1 * z1.conj())
        assert n0.sign() < 0 and n1.sign() < 0
        return as_real(n1 * z0 * z0.conj() - n0 * z1 * z1.conj()) * -1

    def signature_checks(self) -> dict:
        """Leading principal minor signs (expect +, regime-dependent, -)."""
        h = self.matrix.rows
        m1 = as_real(h[0][0])
        m2 = as_real(h[0][0] * h[1][1] - h[0][1] * h[1][0])
        m3 = as_real(self.matrix.det())
        return {"minor1": m1.sign(), "minor2": m2.sign(), "minor3": m3.sign()}


def real_span_pair(form: HermForm, u: Vec3, v: Vec3) -> tuple[Vec3, Vec3]:
    """Rescale v so <u, v> is real and nonnegative (for real-span/segment work)."""
    c = form.inner(u, v)
    if c.is_zero():
        return u, v
    return u, vec_scale(v, c)
