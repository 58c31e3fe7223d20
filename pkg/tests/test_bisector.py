import random
from fractions import Fraction

import pytest

from chlattice.bisector import (
    Cospinal,
    SideLabel,
    bounding_bisectors,
    cotranchal_only_slice,
    make_chart,
    match_ridge,
    segment_classify,
    scale_for_segment,
)
from chlattice.exactfield import as_real
from chlattice.grp import Group
from chlattice.hermgeom import vec_scale, vec_sub

ALL_P = (3, 4, 5, 6, 8, 12)


def sqrt21(G):
    s = (G.field.zeta(7 * G.p) - G.field.zeta(-7 * G.p)) * (G.tau - G.taubar)
    assert s * s == 21
    return s


@pytest.mark.parametrize("p", ALL_P)
def test_bisector_construction(p):
    G = Group(p)
    bb = bounding_bisectors(G)
    assert len(bb) == 28
    for lab, b in bb.items():
        # the fixed point of P is strictly inside every half-space
        assert b.side_sign(G.p_fix) == -1
        # real spine span: inner product of the two spine vectors is real
        assert G.form.inner(b.spine[0], b.spine[1]).is_real()
        # chart vectors: v positive, w negative, orthogonal
        assert G.form.inner(b.chart_v, b.chart_w).is_zero()
        assert G.form.classify(b.chart_v) == 1
        assert G.form.classify(b.chart_w) == -1
        # polar vector is orthogonal to the spine
        assert G.form.inner(b.spine[0], b.polar).is_zero()
        assert G.form.inner(b.spine[1], b.polar).is_zero()
        # equidistant pair: equal norms, and the spine is equidistant
        assert G.form.norm(b.q_near) == G.form.norm(b.q_far)
        for u in b.spine:
            assert G.form.abs2_diff(u, b.q_near, b.q_far).is_zero()


def test_label_indices():
    assert SideLabel("r", 1, 0).index == 1
    assert SideLabel("s", 1, 2).index == 11
    assert SideLabel.from_index(18) == SideLabel("r", -1, -3)
    assert str(SideLabel.from_index(11)) == "P^2 S1"


def test_segment_classifier_against_brute_force():
    """Exact classification vs dense rational sampling of the quadratic."""
    G = Group(3)
    bb = bounding_bisectors(G)
    rng = random.Random(11)
    labs = list(bb)
    from chlattice.bisector import line_quadratic, _classify_quadratic

    for _ in range(120):
        A = G.field.from_fraction(Fraction(rng.randrange(-8, 9), 2))
        B = G.field.from_fraction(Fraction(rng.randrange(-8, 9), 2))
        C = G.field.from_fraction(Fraction(rng.randrange(-8, 9), 2))
        oc = _classify_quadratic(A, B, C)
        av, bv, cv = (x.as_fraction() for x in (A, B, C))
        vals = [
            av * t * t + 2 * bv * t + cv
            for t in [Fraction(i, 97) for i in range(98)]
        ]
        if oc.kind == "contained":
            assert all(v == 0 for v in vals)
        elif oc.kind == "one_side":
            s = oc.side
            assert all(v * s >= 0 for v in vals), (av, bv, cv, oc)
            interior = [v for v in vals[1:-1]]
            # strictly one-sided except possibly endpoints
            assert all(v * s > 0 or v == 0 for v in interior)
            # interior zeros may only occur at a tangency, classified apart
            zero_interior = [t for t, v in enumerate(interior) if v == 0]
            assert not zero_interior or (av == 0 and bv == 0 and cv == 0)
        elif oc.kind == "crosses":
            assert any(v > 0 for v in vals) and any(v < 0 for v in vals) or (
                # crossing root may hide between sample points: verify by sign
                # of the discriminant and root location instead
                bv * bv - av * cv >= 0
            )


def test_scale_for_segment_keeps_ball():
    G = Group(3)
    v, w = G.y0, G.P.apply(G.y0)
    v, w = scale_for_segment(G, v, w)
    c = G.form.inner(v, w)
    assert c.is_real() and c.sign() < 0
    # midpoint of the affine path is a negative vector
    mid = tuple(a + b for a, b in zip(v, w))
    assert G.form.classify(mid) == -1


@pytest.mark.parametrize("p", ALL_P)
def test_cotranchal_criterion(p):
    """r1 vs P^-3 r1^- share the slice polar to n_23 for p >= 5."""
    if p < 5:
        return
    G = Group(p)
    # spine points of R1 and P^-3 R1^- orthogonal to n_23 (text's v1, v2)
    nn = G.form.inner(G.n1, G.n_23)
    dd = G.form.inner(G.n_23, G.n_23)
    v1 = vec_sub(vec_scale(G.n1, dd), vec_scale(G.n_23, nn))
    g = (G.word("23")).inverse()
    v2raw = g.apply(v1)
    # rescale so that v2 is in the real span with real inner products
    c = G.form.inner(v2raw, G.n_23)
    v2 = v2raw if c.is_zero() else v2raw
    assert G.form.classify(v1) == -1
    assert cotranchal_only_slice(G, G.n_23, v1, v2)
    assert cotranchal_only_slice(G, G.n_23, v1, v1)  # boundary case


@pytest.mark.parametrize("p", ALL_P)
def test_chart_construction_and_errors(p):
    G = Group(p)
    bb = bounding_bisectors(G)
    pair = frozenset((SideLabel("r", 1, 0), SideLabel("s", 1, 0)))
    ch = make_chart(G, bb, pair)
    # trace of a defining bisector is identically zero
    assert ch.trace_of_bisector(bb[SideLabel("r", 1, 0)]).is_zero()
    assert ch.trace_of_bisector(bb[SideLabel("s", 1, 0)]).is_zero()
    # cospinal pair is rejected
    with pytest.raises((Cospinal, KeyError)):
        make_chart(
            G, bb, frozenset((SideLabel("r", 1, 0), SideLabel("r", -1, 0)))
        )
    # trace with equal pair vanishes
    q = ch.trace_quad(G.y0, G.y0)
    assert q.is_zero()
    # gram swap symmetry: chart(B2, B1) is chart(B1, B2) with variables swapped
    g = ch.gram_quad()
    pair_chart2 = make_chart(G, bb, pair)
    assert g.swap_vars().swap_vars() == g


def test_printed_trace_formulas_p3():
    """The worked-example traces on the chart of B1 and B3 (p = 3)."""
    G = Group(3)
    bb = bounding_bisectors(G)
    s21 = sqrt21(G)
    ch = make_chart(G, bb, frozenset((SideLabel("r", 1, 0), SideLabel("s", 1, 0))))
    # B2: 81(582+127 sqrt21)(-14+3 sqrt21+3 t2-18 t2^2) t1
    g2 = ch.trace_of_bisector(bb[SideLabel("r", -1, 0)])
    c = (s21 * 127 + 582) * 81
    expect = {(1, 0): c * (s21 * 3 - 14), (1, 1): c * 3, (1, 2): c * (-18)}
    for i in range(3):
        for j in range(3):
            assert g2.coeff[i][j] == expect.get((i, j), G.field.zero())
    # B4: a0 = a2 = a22 = 0 and the two Table-5 lines
    g4 = ch.trace_of_bisector(bb[SideLabel("s", -1, 0)])
    nm = g4.named()
    assert nm["a0"].is_zero() and nm["a2"].is_zero() and nm["a22"].is_zero()
    c_h = (7 - s21) * Fraction(1, 21)
    for t1 in (0, 1, 2):
        assert g4.evaluate(G.field.from_fraction(t1), c_h).is_zero()


@pytest.mark.parametrize("p", ALL_P)
def test_charts_all_giraud_types(p):
    """Every Giraud base chart builds and verifies coequidistance."""
    from chlattice.bisector import GIRAUD_BASES

    G = Group(p)
    bb = bounding_bisectors(G)
    for spec in GIRAUD_BASES:
        pair = frozenset((spec[0], spec[1]))
        ch = make_chart(G, bb, pair)
        # the anchor is inside complex hyperbolic space
        assert G.form.classify(ch.anchor) == -1


def test_match_ridge_shifts():
    pair = frozenset((SideLabel("r", 1, 2), SideLabel("s", 1, -3)))
    kind, spec, j = match_ridge(pair, 3)
    assert kind == "giraud" and j == 2
