import random
from fractions import Fraction

import pytest

from chlattice.bisector import BivarQuad, SideLabel, bounding_bisectors, make_chart
from chlattice.exactfield import as_real
from chlattice.grp import Group
from chlattice.ridgecert import (
    MultipleRoot,
    axis_lines,
    critical_points,
    factor_axis,
    isolate_roots,
    pdeg,
    peval,
    resultant_quintic,
    sturm_chain,
    count_roots,
)

ALL_P = (3, 4, 5, 6, 8, 12)


def sqrt21(G):
    s = (G.field.zeta(7 * G.p) - G.field.zeta(-7 * G.p)) * (G.tau - G.taubar)
    assert s * s == 21
    return s


def sqrt7(G):
    assert G.n % 4 == 0
    s = G.field.zeta(G.n // 4) * (G.tau - G.taubar)
    assert s * s == 7
    return s


def chart13(p):
    G = Group(p)
    bb = bounding_bisectors(G)
    ch = make_chart(
        G, bb, frozenset((SideLabel("r", 1, 0), SideLabel("s", 1, 0)))
    )
    return G, bb, ch


# --------------------------------------------------------------------------
# univariate machinery vs independent numeric oracles
# --------------------------------------------------------------------------


def test_sturm_against_numpy_roots():
    import numpy as np

    G = Group(3)
    F = G.field
    rng = random.Random(5)
    for _ in range(25):
        coeffs = [
            F.from_fraction(Fraction(rng.randrange(-9, 10), rng.randrange(1, 4)))
            for _ in range(rng.randrange(3, 7))
        ]
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        if pdeg(coeffs) < 1:
            continue
        try:
            chain = sturm_chain(coeffs)
        except MultipleRoot:
            continue
        ivs = isolate_roots(coeffs, chain)
        np_roots = np.roots([float(c.as_fraction()) for c in reversed(coeffs)])
        n_real = sum(1 for r in np_roots if abs(r.imag) < 1e-9)
        assert len(ivs) == n_real
        for lo, hi in ivs:
            assert any(
                abs(r.imag) < 1e-9 and lo <= r.real <= hi for r in np_roots
            )


def _sylvester_resultant(f: BivarQuad):
    """Independent oracle: Res_t1(df/dt1, df/dt2) via the 3x3 Sylvester
    determinant B^2 C - A B D + A^2 E (A+B t1 and C+D t1+E t1^2)."""
    fx = f.d_dt1()
    fy = f.d_dt2()

    def pol(q, i):
        return [q.coeff[i][j] for j in range(3)]

    def pmul(a, b):
        out = [a[0].field.zero()] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return out

    def padd(a, b):
        n = max(len(a), len(b))
        z = a[0].field.zero()
        return [
            (a[i] if i < len(a) else z) + (b[i] if i < len(b) else z)
            for i in range(n)
        ]

    def pneg(a):
        return [-x for x in a]

    A, B = pol(fx, 0), pol(fx, 1)
    C, D, E = pol(fy, 0), pol(fy, 1), pol(fy, 2)
    return padd(
        padd(pmul(pmul(B, B), C), pneg(pmul(pmul(A, B), D))),
        pmul(pmul(A, A), E),
    )


@pytest.mark.parametrize("p", (3, 8))
def test_resultant_formulas_vs_sylvester(p):
    """The printed degree-5 coefficients equal the Sylvester resultant."""
    G, bb, ch = chart13(p)
    for idx in (5, 9, 10, 21):
        f = ch.trace_of_bisector(bb[SideLabel.from_index(idx)])
        got = resultant_quintic(f)
        oracle = _sylvester_resultant(f)
        n = max(len(got), len(oracle))
        z = G.field.zero()
        for i in range(n):
            a = got[i] if i < len(got) else z
            b = oracle[i] if i < len(oracle) else z
            assert a == b, f"B{idx} resultant coeff {i}"


# --------------------------------------------------------------------------
# the worked example of the certification section (p = 3)
# --------------------------------------------------------------------------


def test_worked_example_B5_quintic_exact():
    G, bb, ch = chart13(3)
    s21 = sqrt21(G)
    f5 = ch.trace_of_bisector(bb[SideLabel.from_index(5)])
    res_t1 = resultant_quintic(f5.swap_vars())  # eliminate t2: quintic in t1
    printed = [
        (-223205130784873566, -48707352729720306),
        (1289075326223152230, 281299298043708180),
        (-1960742086219144494, -427869001351675404),
        (2269952366448531240, 495344216342598840),
        (-1166845194031834926, -254626496473636566),
        (259717950970322292, 56675103317162172),
    ]
    assert len(res_t1) == 6
    for got, (q, r) in zip(res_t1, printed):
        assert got == q + s21 * r


def test_worked_example_B5_critical_point():
    G, bb, ch = chart13(3)
    f5 = ch.trace_of_bisector(bb[SideLabel.from_index(5)])
    v, h, hh, _ = axis_lines(f5)
    assert not v and not h
    crits = critical_points(hh)
    assert len(crits) == 1
    t1, t2 = crits[0].t1, crits[0].t2
    t1.refine(Fraction(1, 10 ** 9))
    assert abs(t1.approx() - 0.23860554) < 1e-7
    assert abs(t2.approx() - 0.01603880) < 1e-7


def test_worked_example_B4_factoring():
    """f_B4 = t1 (t2 - c) (-(81(6741+1471 sqrt21)/4) h), h the printed
    bilinear; equivalently f/(t1 (c - t2)) is exactly the printed function."""
    G, bb, ch = chart13(3)
    s21 = sqrt21(G)
    f4 = ch.trace_of_bisector(bb[SideLabel.from_index(4)])
    c_h = as_real((7 - s21) * Fraction(1, 21))
    h1 = factor_axis(f4, "t1", G.field.zero())
    h2 = factor_axis(h1, "t2", c_h)  # divides by (t2 - c)
    lam = (s21 * 1471 + 6741) * 81 * Fraction(1, 4)
    expect = {
        (0, 0): (36 - s21 * 8), (1, 0): (s21 * 3 - 15),
        (0, 1): (9 - s21 * 3), (1, 1): G.field.from_fraction(18),
    }
    for i in range(3):
        for j in range(3):
            e = expect.get((i, j), G.field.zero()) * (-lam)
            assert h2.coeff[i][j] == e
    # the bilinear critical point of the printed h, exactly
    crits = critical_points(h2)
    assert len(crits) == 1
    t1 = crits[0].t1.exact
    t2 = crits[0].t2.exact
    assert t1 == (s21 - 3) * Fraction(1, 6)
    assert t2 == (5 - s21) * Fraction(1, 6)


def test_worked_example_B11_same_h():
    """After factoring both axis lines, B11's reduced function is the same
    bilinear as the B4 case up to a constant."""
    G, bb, ch = chart13(3)
    s21 = sqrt21(G)
    f11 = ch.trace_of_bisector(bb[SideLabel.from_index(11)])
    v, h, hh, _ = axis_lines(f11)
    assert len(v) == 1 and len(h) == 1
    assert v[0].root.exact == (21 + s21) * Fraction(1, 42)
    assert h[0].root.exact == G.field.zero()
    named = {
        (0, 0): (36 - s21 * 8), (1, 0): (s21 * 3 - 15),
        (0, 1): (9 - s21 * 3), (1, 1): G.field.from_fraction(18),
    }
    ratio = None
    for i in range(3):
        for j in range(3):
            e = named.get((i, j), G.field.zero())
            got = hh.coeff[i][j]
            assert e.is_zero() == got.is_zero()
            if not e.is_zero():
                r = got / e
                ratio = r if ratio is None else ratio
                assert r == ratio
    assert ratio is not None and ratio.is_real()


def test_trivial_factor_axis():
    # f = t1 (1 + t2^2): dividing by t1 leaves 1 + t2^2
    G = Group(3)
    z, o = G.field.zero(), G.field.one()
    f = BivarQuad([[z, z, z], [o, z, o], [z, z, z]])
    h = factor_axis(f, "t1", G.field.zero())
    assert h.coeff[0][0] == o and h.coeff[0][2] == o
    # a line of critical points must abort with MultipleRoot
    with pytest.raises(MultipleRoot):
        critical_points(BivarQuad([[z, z, z], [z, z, z], [o, z, o]]))
    f2 = BivarQuad([[z, z, o], [z, z, z], [o, z, z]])  # t1^2 + t2^2
    pts = critical_points(f2)
    assert len(pts) == 1
    assert pts[0].t1.equals_exact(z) and pts[0].t2.equals_exact(z)


# --------------------------------------------------------------------------
# Table 5: axis lines on the chart of B1 and B3, all six p
# --------------------------------------------------------------------------


def table5_expectations(p, G):
    """Map bisector index -> (vertical entries, horizontal entries); exact
    elements where the table has closed forms, floats otherwise."""
    F = G.field.from_fraction
    if p == 3:
        s21 = sqrt21(G)
        v22 = F(Fraction(1, 2)) + s21 * Fraction(1, 42)
        h22 = (5 - s21) * Fraction(1, 6)
        v18 = (s21 - 3) * Fraction(1, 6)
        h4 = (7 - s21) * Fraction(1, 21)
        return {
            2: ([F(0)], []),
            4: ([F(0)], [h4]),
            11: ([(21 + s21) * Fraction(1, 42)], [F(0)]),
            12: ([], [F(0)]),
            18: ([v18], []),
            21: ([v18], [h4]),
            22: ([v22], [h22]),
            24: ([], [h22]),
            26: ([v22], []),
        }
    if p == 4:
        s7 = sqrt7(G)
        h4 = 1 - s7 * Fraction(5, 14)
        v11 = (s7 * 5 - 7) * Fraction(1, 14)
        v18 = (3 - s7) * Fraction(1, 2)
        v22 = F(Fraction(-1, 2)) + s7 * Fraction(5, 14)
        h22 = 4 - s7 * Fraction(3, 2)
        return {
            2: ([F(0)], []),
            4: ([F(0)], [h4]),
            11: ([v11], [F(0)]),
            12: ([], [F(0)]),
            18: ([v18], []),
            21: ([v18], [h4]),
            22: ([v22], [h22]),
            24: ([], [h22]),
            26: ([v22], []),
        }
    if p == 6:
        s21 = sqrt21(G)
        h4 = 4 - s21 * Fraction(6, 7)
        v11 = (s21 * 3 - 7) * Fraction(1, 14)
        v18 = (5 - s21) * Fraction(1, 2)
        v22 = F(Fraction(-1, 2)) + s21 * Fraction(3, 14)
        h22 = (23 - s21 * 5) * Fraction(1, 2)
        return {
            2: ([F(0)], []),
            4: ([F(0)], [h4]),
            11: ([v11], [F(0)]),
            12: ([], [F(0)]),
            18: ([v18], []),
            21: ([v18], [h4]),
            22: ([v22], [h22]),
            24: ([], [h22]),
            26: ([v22], []),
        }
    # decimal rows (p = 5, 8, 12); p=12 has two closed forms mixed in
    dec = {
        5: {2: ([0.0], []), 4: ([0.0], [0.05801393]),
            11: ([0.44786394], [0.0]), 12: ([], [0.0]),
            18: ([0.18371174], []), 21: ([0.18371174], [0.05801393]),
            22: ([0.44786394], [0.03375000]), 24: ([], [0.03375000]),
            26: ([0.44786394], [])},
        8: {2: ([0.0], []), 4: ([0.0], [0.11986937]),
            11: ([0.57827900], [0.0]), 12: ([], [0.0]),
            18: ([0.27949078], []), 21: ([0.27949078], [0.11986937]),
            22: ([0.57827900], [0.07811509]), 24: ([], [0.07811509]),
            26: ([0.57827900], [])},
        12: {2: ([0.0], []), 4: ([0.0], [0.28759793]),
             11: ([0.80219658], [0.0]), 12: ([], [0.0]),
             18: ([0.45685025], []), 21: ([0.45685025], [0.28759793]),
             22: ([0.80219658], [0.20871215]), 24: ([], [0.20871215]),
             26: ([0.80219658], [])},
    }
    return dec[p]


@pytest.mark.parametrize("p", ALL_P)
def test_table5_axis_lines(p):
    G, bb, ch = chart13(p)
    expected = table5_expectations(p, G)
    for idx, (vs, hs) in expected.items():
        f = ch.trace_of_bisector(bb[SideLabel.from_index(idx)])
        vert, horz, _, _ = axis_lines(f)
        assert len(vert) == len(vs), f"p={p} B{idx}: vertical count"
        assert len(horz) == len(hs), f"p={p} B{idx}: horizontal count"
        for line, want in zip(sorted(vert, key=lambda l: l.root.approx()),
                              sorted(vs, key=lambda w: w if isinstance(w, float) else w.approx().real)):
            if isinstance(want, float):
                line.root.refine(Fraction(1, 10 ** 9))
                assert abs(line.root.approx() - want) < 1e-7, f"p={p} B{idx}"
            else:
                assert line.root.equals_exact(as_real(want)), f"p={p} B{idx}"
        for line, want in zip(sorted(horz, key=lambda l: l.root.approx()),
                              sorted(hs, key=lambda w: w if isinstance(w, float) else w.approx().real)):
            if isinstance(want, float):
                line.root.refine(Fraction(1, 10 ** 9))
                assert abs(line.root.approx() - want) < 1e-7, f"p={p} B{idx}"
            else:
                assert line.root.equals_exact(as_real(want)), f"p={p} B{idx}"


# p=12 closed forms.  The source table prints (sqrt3-sqrt7)/2 for B18, which
# is negative; the exact gcd computation (and the positive pattern of the
# same entry for p = 3, 4, 6, plus the table's own +0.45685025 for B21) give
# (sqrt7-sqrt3)/2: the printed sign is a typo.
def test_table5_p12_closed_forms():
    G, bb, ch = chart13(12)
    s7 = sqrt7(G)
    s21 = sqrt21(G)
    s3 = s21 / s7
    f18 = ch.trace_of_bisector(bb[SideLabel.from_index(18)])
    vert, _, _, _ = axis_lines(f18)
    assert len(vert) == 1
    assert vert[0].root.equals_exact(as_real((s7 - s3) * Fraction(1, 2)))
    f24 = ch.trace_of_bisector(bb[SideLabel.from_index(24)])
    _, horz, _, _ = axis_lines(f24)
    assert len(horz) == 1
    assert horz[0].root.equals_exact(as_real((5 - s21) * Fraction(1, 2)))


# --------------------------------------------------------------------------
# Table 6: critical points inside the ridge of B1 and B3 (p = 8, 12)
# --------------------------------------------------------------------------

TABLE6 = {
    8: {9: (0.22347669, 0.06214532, 11.44128654)},
    12: {9: (0.38008133, 0.18112900, 0.23597323),
         10: (0.38823985, 0.13852442, 0.18097266)},
}


@pytest.mark.parametrize("p", (8, 12))
def test_table6_critical_points(p, all_models):
    from chlattice.cli import certify_ridge

    m = all_models[p]
    pair = frozenset((SideLabel("r", 1, 0), SideLabel("s", 1, 0)))
    rid = m.find_ridge_by_pair(pair)
    recs = {r["bisector"]: r for r in certify_ridge(m, rid)}
    for idx, (t1, t2, val) in TABLE6[p].items():
        rec = recs[str(SideLabel.from_index(idx))]
        assert rec["status"] == "positive_on_polygon"
        inside = [c for c in rec["critical_points"] if c["inside"]]
        assert len(inside) == 1, f"p={p} B{idx}"
        c = inside[0]
        assert abs(c["t1"] - t1) < 1e-6
        assert abs(c["t2"] - t2) < 1e-6
        assert abs(c["value"] - val) < 1e-6
    # for p=8 the other 25 bisectors have no inside critical points
    if p == 8:
        for bis, rec in recs.items():
            if bis == str(SideLabel.from_index(9)):
                continue
            assert all(not c["inside"] for c in rec.get("critical_points", []))
