"""Adjoint trace fields, Galois conjugation of the Hermitian form, the
Mostow-Vinberg arithmeticity criterion, and the commensurability tables.

Everything is exact: field degrees are ranks of rational coefficient
matrices, Galois images are conductor automorphisms, and definiteness is
Sylvester's criterion decided by certified signs.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from .exactfield import CycloField, CycloNum, as_real
from .grp import Group
from .hermgeom import Mat3

__all__ = [
    "trace_field",
    "trace_gens",
    "galois_det_scan",
    "signature_scan",
    "arithmetic_form",
    "commensurability_report",
    "field_degree",
    "fields_equal",
    "sqrt7",
    "sqrt21",
]


def sqrt7(G: Group) -> CycloNum | None:
    """sqrt(7) = i (tau - conj tau), exact; needs i, so only when 4 | 21p."""
    if G.n % 4 != 0:
        return None
    i_unit = G.field.zeta(G.n // 4)
    s = i_unit * (G.tau - G.taubar)
    assert s * s == 7 and s.sign() > 0
    return s


def sqrt21(G: Group) -> CycloNum:
    s3i = G.field.zeta(7 * G.p) - G.field.zeta(-7 * G.p)  # i sqrt 3
    s = s3i * (G.tau - G.taubar)  # (i sqrt3)(-i sqrt7)
    assert s * s == 21 and s.sign() > 0
    return s


def trace_gens(G: Group) -> tuple[CycloNum, CycloNum]:
    """|tr R1|^2 and |tr(J R1 J R1^-1)|^2: generators of the adjoint trace
    field, verified against the actual matrix traces."""
    t1 = G.R1.trace()
    g1 = as_real(t1 * t1.conj())
    m = G.J * G.R1 * G.J * G.R1.inverse()
    t2 = m.trace()
    g2 = as_real(t2 * t2.conj())
    # closed forms: 5 + 4cos(2pi/p) and 3 + cos(2pi/p) + sqrt7 sin(2pi/p)
    zp = G.zeta_p
    cos2 = (zp + zp.conj()) * Fraction(1, 2)
    s7sin = (G.tau - G.taubar) * (zp - zp.conj()) * Fraction(1, 2)
    assert g1 == 5 + 4 * cos2
    assert g2 == 3 + cos2 + s7sin
    return g1, g2


def _rank_over_Q(vectors: list[list[Fraction]]) -> int:
    rows = [list(v) for v in vectors]
    rank = 0
    cols = len(rows[0]) if rows else 0
    col = 0
    while col < cols and rank < len(rows):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = 1 / rows[rank][col]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col] * inv
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def _span_contains(vectors: list[list[Fraction]], target: list[Fraction]) -> bool:
    return _rank_over_Q(vectors) == _rank_over_Q(vectors + [target])


def field_degree(gens: list[CycloNum]) -> int:
    """Q-dimension of the field generated by the (real) elements: rank of
    the span of monomials in the generators."""
    vecs = []
    mons = [gens[0].field.one()]
    for g in gens:
        mons = [m * g ** e for m in mons for e in range(5)]
        if len(mons) > 400:
            break
    seen = set()
    for m in mons:
        key = (m.num, m.den)
        if key not in seen:
            seen.add(key)
            vecs.append(m.coeffs())
    return _rank_over_Q(vecs)


def trace_field(p: int) -> dict:
    G = Group(p)
    g1, g2 = trace_gens(G)
    deg = field_degree([g1, g2])
    names = {3: "Q(sqrt21)", 4: "Q(sqrt7)", 5: "Q(sqrt14 sqrt(5+sqrt5))",
             6: "Q(sqrt21)", 8: "Q(sqrt2, sqrt7)", 12: "Q(sqrt3, sqrt7)"}
    return {"p": p, "degree": deg, "name": names[p], "generators": (g1, g2)}


# --------------------------------------------------------------------------
# Galois scan of the Hermitian form (section-7 adjusted entries)
# --------------------------------------------------------------------------


def arithmetic_form(G: Group) -> Mat3:
    """H with entries in Q(tau, zeta_p): alpha = 2 - zeta_p - conj(zeta_p),
    beta = (conj(zeta_p) - 1) tau, gamma = (1 - conj(zeta_p)) conj(tau)."""
    zp = G.zeta_p
    alpha = 2 - zp - zp.conj()
    beta = (zp.conj() - 1) * G.tau
    gamma = (1 - zp.conj()) * G.taubar
    return Mat3(
        [
            [alpha, beta, gamma],
            [beta.conj(), alpha, beta],
            [gamma.conj(), beta.conj(), alpha],
        ]
    )


def _sigma_key(G: Group, l: int) -> tuple[bool, int]:
    """Action of zeta_n -> zeta_n^l on (tau, zeta_p): tau is fixed iff
    l mod 7 is a quadratic residue {1,2,4}."""
    tau_fixed = (l % 7) in (1, 2, 4)
    return tau_fixed, l % G.p


def galois_det_scan(p: int) -> dict:
    """det(H^sigma) for every automorphism of Q(tau, zeta_p), with the
    arithmeticity verdict of the Mostow-Vinberg criterion."""
    G = Group(p)
    H = arithmetic_form(G)
    g1, g2 = trace_gens(G)
    n = G.n
    seen = {}
    for l in range(1, n):
        if gcd(l, n) != 1:
            continue
        key = _sigma_key(G, l)
        if key not in seen:
            seen[key] = l
    rows = []
    arithmetic = True
    for (tau_fixed, k), l in sorted(seen.items()):
        Hs = Mat3([[e.galois(l) for e in row] for row in H.rows])
        assert Hs == Hs.conj_transpose(), "sigma does not commute with conj"
        det = as_real(Hs.det())
        trivial_on_k = (g1.galois(l) == g1) and (g2.galois(l) == g2)
        alpha_s = as_real(Hs.rows[0][0])
        m1 = alpha_s.sign()
        m2 = as_real(
            Hs.rows[0][0] * Hs.rows[1][1] - Hs.rows[0][1] * Hs.rows[1][0]
        ).sign()
        m3 = det.sign()
        definite = m1 > 0 and m2 > 0 and m3 > 0
        if not trivial_on_k and not definite:
            arithmetic = False
        rows.append(
            {
                "l": l,
                "tau_image": "tau" if tau_fixed else "conj tau",
                "zeta_p_power": k,
                "det_sign": m3,
                "definite": definite,
                "trivial_on_trace_field": trivial_on_k,
                "det": det,
            }
        )
    identity_row = next(
        r for r in rows if r["tau_image"] == "tau" and r["zeta_p_power"] == 1 % G.p
    )
    return {
        "p": p,
        "det_H": identity_row["det"],
        "rows": rows,
        "arithmetic": arithmetic,
    }


def signature_scan(p: int) -> dict:
    scan = galois_det_scan(p)
    neg = [
        r for r in scan["rows"]
        if not r["trivial_on_trace_field"] and r["det_sign"] < 0
    ]
    return {
        "p": p,
        "det_H_sign": scan["det_H"].sign(),
        "arithmetic": scan["arithmetic"],
        "indefinite_conjugates": [
            {"tau": r["tau_image"], "zeta_p_power": r["zeta_p_power"]}
            for r in neg
        ],
        "scan": scan,
    }


# --------------------------------------------------------------------------
# Commensurability: pairwise trace-field comparison + Deligne-Mostow table
# --------------------------------------------------------------------------

DM_FIELDS = [5, 8, 12, 15, 16, 20, 24]  # Q(cos 2pi/n) candidates (Table 8)


def _embed_gens(gens: list[CycloNum], m: int) -> list[list[Fraction]]:
    """Monomial span of the generators inside Q(zeta_m), as Q-vectors."""
    embedded = [g.embed(m) for g in gens]
    mons = [CycloField(m).one()]
    for g in embedded:
        mons = [mm * g ** e for mm in mons for e in range(5)]
    out = []
    seen = set()
    for mm in mons:
        key = (mm.num, mm.den)
        if key not in seen:
            seen.add(key)
            out.append(mm.coeffs())
    return out


def fields_equal(gens1, n1, gens2, n2) -> bool:
    m = lcm(n1, n2)
    span1 = _embed_gens(gens1, m)
    span2 = _embed_gens(gens2, m)
    return all(_span_contains(span1, v) for v in _basis_of(span2)) and all(
        _span_contains(span2, v) for v in _basis_of(span1)
    )


def _basis_of(vecs: list[list[Fraction]]) -> list[list[Fraction]]:
    basis = []
    for v in vecs:
        if any(v) and (not basis or not _span_contains(basis, v)):
            basis.append(v)
    return basis


def commensurability_report(ps=(3, 4, 5, 6, 8, 12)) -> dict:
    """Pairwise distinctness of the six classes and non-membership of the
    trace fields in the Deligne-Mostow list."""
    data = {}
    for p in ps:
        G = Group(p)
        g1, g2 = trace_gens(G)
        data[p] = (G, [g1, g2], trace_field(p)["degree"])
    same_field_pairs = []
    for i, p in enumerate(ps):
        for q in ps[i + 1:]:
            if data[p][2] != data[q][2]:
                continue
            if fields_equal(data[p][1], 21 * p, data[q][1], 21 * q):
                same_field_pairs.append((p, q))
    # cocompactness separates the one coincident pair
    cocompact = {3: True, 4: False, 5: True, 6: False, 8: True, 12: True}
    classes_distinct = all(
        cocompact[a] != cocompact[b] for a, b in same_field_pairs
    )
    dm_matches = []
    for p in ps:
        for n_dm in DM_FIELDS:
            F = CycloField(n_dm)
            cosgen = F.zeta(1) + F.zeta(-1)
            deg_dm = field_degree([cosgen])
            if deg_dm != data[p][2]:
                continue
            if fields_equal(data[p][1], 21 * p, [cosgen], n_dm):
                dm_matches.append((p, n_dm))
    return {
        "same_field_pairs": same_field_pairs,
        "classes_distinct": classes_distinct,
        "dm_matches": dm_matches,
        "dm_commensurable": bool(dm_matches),
        "degrees": {p: data[p][2] for p in ps},
    }
