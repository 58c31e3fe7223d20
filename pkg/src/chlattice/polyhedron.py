"""The combinatorial model of the 28-sided polyhedron, its geometric
realization, and the 3-sphere certificate for its boundary.

The cell complex is derived from exact geometry: vertices are explicit lifts
(P-orbits of fixed points / Hermitian cross products), vertex-bisector
incidence is an exact sign test, edges are vertex pairs whose geodesic lies in
at least four bounding bisectors (exact segment containment), and 2-cells are
assembled as cycles in the per-bisector-pair edge graph.  Every incidence
statement that survives in the source text (vertex counts, the incidence
propositions, ridge-cycle vertex rows) is then asserted against the derived
model, so any drift fails loudly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .bisector import (
    Bisector,
    COMPLEX_BASES,
    GIRAUD_BASES,
    SideLabel,
    bounding_bisectors,
    make_chart,
    ridge_types,
    scale_for_segment,
    segment_classify,
    line_quadratic,
)
from .exactfield import as_real
from .grp import Group
from .hermgeom import Vec3, proportional, vec_sub, vec_scale
from .ridgecert import RidgePolygon, certify_positive

__all__ = ["Model", "ConsistencyFailure", "SideFailure", "build_model"]


class ConsistencyFailure(AssertionError):
    pass


class SideFailure(AssertionError):
    pass


# --------------------------------------------------------------------------
# Static vertex orbit tables (appendix of the source text)
# --------------------------------------------------------------------------

P_WORDS = ["12", "1231'", "12312'1'", "3'2'3123", "3'123", "23", "13"]
Q_WORDS = ["1232'", "121'3'13", "23'2'123", "131'3'23", "2'123", "13'23", "121'3"]

# For p >= 5 the p-vertices split into four orbits p^sup_sub; the sub words
# run through P_WORDS and the sup words are listed here per orbit.
P_SUPS = {
    "A": ["1", "121'", "1232'1'", "12313'2'1'", "3'2'123", "3'23", "3"],
    "B": ["2", "131'", "2'12", "13'231'", "3'121'3", "23'2", "3'13"],
    "C": ["2'12", "13'231'", "3'121'3", "23'2", "3'13", "2", "131'"],
    "D": ["121'", "1232'1'", "12313'2'1'", "3'2'123", "3'23", "3", "1"],
}

# For p >= 8 the q-vertices split into three orbits q^sup_sub over Q-like subs.
Q_SUBS = ["13'23", "121'3", "1232'", "121'3'13", "23'2'123", "131'3'23", "2'123"]
Q_SUPS = {
    "1": ["1", "121'", "1232'1'", "12313'2'1'", "3'2'123", "3'23", "3"],
    "2": ["3'23", "3", "1", "121'", "1232'1'", "12313'2'1'", "3'2'123"],
    "3": ["13'231'", "3'121'3", "23'2", "3'13", "2", "131'", "2'12"],
}

# Expected vertex-bisector incidence for the orbit representatives
# (Props vertbisectors3-4 / 5-6 / 8-12); indices are B_1..B_28.
EXPECTED_INCIDENCE = {
    (3, "p_12"): [1, 2, 5, 26, 9, 11, 19, 20, 6, 28],
    (3, "q_1232'"): [1, 2, 3, 4, 9, 10, 11, 12],
    (5, "p^1_12"): [1, 2, 5, 9, 11, 26],
    (5, "p^2_12"): [1, 9, 11, 19, 20, 26],
    (5, "p^2_23"): [1, 11, 12, 18, 20, 26],
    (5, "p^3_23"): [1, 18, 20, 22, 25, 26],
    (5, "q_1232'"): [1, 2, 3, 4, 9, 10, 11, 12],
    (8, "q^1_13'23"): [1, 2, 3, 4, 22, 24],
    (8, "q^3'23_13'23"): [1, 3, 21, 22, 23, 24],
    (8, "q^23'2_1232'"): [1, 3, 4, 10, 11, 12],
}


def _vname(kind: str, sup: str | None, sub: str) -> str:
    return f"{kind}_{sub}" if sup is None else f"{kind}^{sup}_{sub}"


@dataclass
class Vertex:
    index: int
    name: str
    lift: Vec3
    on: frozenset
    ideal: bool
    orbit: str
    shift: int


@dataclass
class Edge:
    index: int
    v: tuple[int, int]
    on: frozenset


@dataclass
class Ridge:
    index: int
    pair: frozenset  # two SideLabels
    kind: str  # 'giraud' | 'complex'
    cycle: list[int]  # vertex indices in cyclic order
    mirror_word: str | None = None
    polygon: RidgePolygon | None = None

    @property
    def name(self) -> str:
        a, b = sorted(self.pair, key=lambda l: l.index)
        base = f"{a}^{b}"
        return base + (f"#{self.index}" if False else "")


class Model:
    """Combinatorial model and geometric realization for one value of p."""

    def __init__(self, p: int):
        self.group = Group(p)
        self.p = p
        self.bisectors = bounding_bisectors(self.group)
        self._build_vertices()
        self._build_edges()
        self._build_ridges()
        self._check_sides()
        self._check_against_text()

    # -- vertices ---------------------------------------------------------

    def _orbit_reps(self):
        G = self.group
        box = G.form.box
        if self.p <= 4:
            return [
                ("p", None, P_WORDS, G.n_12),
                ("q", None, Q_WORDS, G.n_1232i),
            ]
        reps = [
            ("p", ("A", P_SUPS["A"]), P_WORDS, box(G.n1, G.n_12)),
            ("p", ("B", P_SUPS["B"]), P_WORDS, box(G.n2, G.n_12)),
            ("p", ("C", P_SUPS["C"]), P_WORDS, box(G.n_2i12, G.n_12)),
            ("p", ("D", P_SUPS["D"]), P_WORDS, box(G.n_121i, G.n_12)),
        ]
        if self.p <= 6:
            reps.append(("q", None, Q_WORDS, G.n_1232i))
        else:
            reps += [
                ("q", ("1", Q_SUPS["1"]), Q_SUBS, box(G.n1, G.n_1323)),
                ("q", ("2", Q_SUPS["2"]), Q_SUBS, box(G.n_3i23, G.n_1323)),
                ("q", ("3", Q_SUPS["3"]), Q_SUBS, box(G.n_13231i, G.n_1323)),
            ]
        return reps

    # interval engine: fast certified rejections, exact arithmetic fallback
    _IVB = 128

    def _iv_setup(self):
        import mpmath

        iv = mpmath.iv
        old = iv.prec
        try:
            iv.prec = self._IVB
            self._ivH = [
                [self.group.form.matrix.rows[i][j].interval(self._IVB)
                 for j in range(3)]
                for i in range(3)
            ]
            self._ivq = {}
            for lab, b in self.bisectors.items():
                self._ivq[lab] = (
                    [c.interval(self._IVB) for c in b.q_near],
                    [c.interval(self._IVB) for c in b.q_far],
                )
        finally:
            iv.prec = old

    def _iv_vec(self, u: Vec3):
        return [c.interval(self._IVB) for c in u]

    def _iv_inner(self, uiv, qiv):
        import mpmath

        iv = mpmath.iv
        acc = iv.mpc(0)
        for i in range(3):
            row = self._ivH[i]
            hu = row[0] * uiv[0] + row[1] * uiv[1] + row[2] * uiv[2]
            q = qiv[i]
            # conj(q) * hu, expanded (ivmpc.conjugate is unreliable)
            acc += iv.mpc(
                q.real * hu.real + q.imag * hu.imag,
                q.real * hu.imag - q.imag * hu.real,
            )
        return acc

    def _iv_side(self, uiv, lab):
        """Interval enclosure of |<u,near>|^2 - |<u,far>|^2."""
        qn, qf = self._ivq[lab]
        z0 = self._iv_inner(uiv, qn)
        z1 = self._iv_inner(uiv, qf)
        a0 = z0.real * z0.real + z0.imag * z0.imag
        a1 = z1.real * z1.real + z1.imag * z1.imag
        return a0 - a1

    def _build_vertices(self):
        import mpmath

        G = self.group
        self._iv_setup()
        iv = mpmath.iv
        self.vertices: list[Vertex] = []
        seen = []
        for kind, sup_info, subs, rep in self._orbit_reps():
            orbit_tag = kind if sup_info is None else f"{kind}{sup_info[0]}"
            lift = rep
            for k, sub in enumerate(subs):
                if k > 0:
                    lift = G.P.apply(lift)
                sup = None if sup_info is None else sup_info[1][k]
                name = _vname(kind, sup, sub)
                old = iv.prec
                try:
                    iv.prec = self._IVB
                    uiv = self._iv_vec(lift)
                    on_set = set()
                    for lab, b in self.bisectors.items():
                        s = self._iv_side(uiv, lab)
                        if s.a > 0:
                            raise SideFailure(
                                f"vertex {name} outside side of {lab}"
                            )
                        if not (s.b < 0):
                            # interval straddles zero: decide exactly
                            sg = b.side_sign(lift)
                            if sg > 0:
                                raise SideFailure(
                                    f"vertex {name} outside side of {lab}"
                                )
                            if sg == 0:
                                on_set.add(lab)
                finally:
                    iv.prec = old
                on = frozenset(on_set)
                cls = G.form.classify(lift)
                if cls > 0:
                    raise ConsistencyFailure(f"vertex {name} is a positive vector")
                for other in seen:
                    if proportional(other.lift, lift):
                        raise ConsistencyFailure(
                            f"vertices {other.name} and {name} coincide"
                        )
                v = Vertex(
                    len(self.vertices), name, lift, on, cls == 0, orbit_tag, k
                )
                self.vertices.append(v)
                seen.append(v)
        expected = {3: 14, 4: 14, 5: 35, 6: 35, 8: 49, 12: 49}[self.p]
        if len(self.vertices) != expected:
            raise ConsistencyFailure(
                f"{len(self.vertices)} vertices, expected {expected}"
            )
        self.by_name = {v.name: v for v in self.vertices}

    # -- edges ---------------------------------------------------------------

    def _segment_contained_in(self, u: Vec3, w: Vec3, labels) -> frozenset:
        """Subset of `labels` whose bisectors contain the geodesic [u, w].

        Interval rejection first, exact confirmation of the survivors.
        """
        import mpmath

        G = self.group
        u, w = scale_for_segment(G, u, w)
        d = vec_sub(w, u)
        iv = mpmath.iv
        old = iv.prec
        candidates = []
        try:
            iv.prec = self._IVB
            uiv = self._iv_vec(u)
            div = self._iv_vec(d)
            for lab in labels:
                qn, qf = self._ivq[lab]
                zu0, zu1 = self._iv_inner(uiv, qn), self._iv_inner(uiv, qf)
                zd0, zd1 = self._iv_inner(div, qn), self._iv_inner(div, qf)
                A = (zd0.real ** 2 + zd0.imag ** 2) - (
                    zd1.real ** 2 + zd1.imag ** 2
                )
                C = (zu0.real ** 2 + zu0.imag ** 2) - (
                    zu1.real ** 2 + zu1.imag ** 2
                )
                B = (zu0.real * zd0.real + zu0.imag * zd0.imag) - (
                    zu1.real * zd1.real + zu1.imag * zd1.imag
                )
                if A.a > 0 or A.b < 0 or B.a > 0 or B.b < 0 or C.a > 0 or C.b < 0:
                    continue
                candidates.append(lab)
        finally:
            iv.prec = old
        out = set()
        for lab in candidates:
            b = self.bisectors[lab]
            A, B, C = line_quadratic(G, u, d, b.q_near, b.q_far)
            if A.is_zero() and B.is_zero() and C.is_zero():
                out.add(lab)
        return frozenset(out)

    def _build_edges(self):
        self.edges: list[Edge] = []
        n = len(self.vertices)
        for i in range(n):
            for j in range(i + 1, n):
                common = self.vertices[i].on & self.vertices[j].on
                if len(common) < 4:
                    continue
                on = self._segment_contained_in(
                    self.vertices[i].lift, self.vertices[j].lift, common
                )
                if len(on) >= 4:
                    self.edges.append(Edge(len(self.edges), (i, j), on))
        self.edges_at = [[] for _ in range(n)]
        for e in self.edges:
            self.edges_at[e.v[0]].append(e.index)
            self.edges_at[e.v[1]].append(e.index)

    # -- ridges ----------------------------------------------------------------

    def _build_ridges(self):
        self.ridges: list[Ridge] = []
        for kind, spec in ridge_types(self.p):
            l1, l2 = spec[0], spec[1]
            for j in range(7):
                pair = frozenset((l1.shifted(j), l2.shifted(j)))
                self._assemble_ridge(pair, kind, spec, j)
                if kind == "giraud":
                    # the iota-image orbit of asymmetric pairs is present as
                    # its own base type, so nothing more to do here
                    pass
        # census
        expected = {3: 63, 4: 63, 5: 70, 6: 70, 8: 77, 12: 77}[self.p]
        if len(self.ridges) != expected:
            raise ConsistencyFailure(
                f"{len(self.ridges)} ridges, expected {expected}"
            )
        self.ridges_at_edge = {}
        for r in self.ridges:
            cyc = r.cycle
            m = len(cyc)
            for t in range(m):
                a, b = cyc[t], cyc[(t + 1) % m]
                eid = self._edge_index[(min(a, b), max(a, b))]
                self.ridges_at_edge.setdefault(eid, []).append(r.index)

    def _assemble_ridge(self, pair, kind, spec, j):
        verts = [v.index for v in self.vertices if pair <= v.on]
        edges = [
            e for e in self.edges if pair <= e.on
            and e.v[0] in verts and e.v[1] in verts
        ]
        if not hasattr(self, "_edge_index"):
            self._edge_index = {}
            for e in self.edges:
                self._edge_index[e.v] = e.index
        adj = {v: [] for v in verts}
        for e in edges:
            adj[e.v[0]].append(e.v[1])
            adj[e.v[1]].append(e.v[0])
        degs = sorted(len(a) for a in adj.values())
        apexes = [v for v, nb in adj.items() if len(nb) == 4]
        if apexes and self.p >= 8 and kind == "complex":
            # pinch apex: two cells glued at one vertex (the bowtie pieces)
            if len(apexes) != 1:
                raise ConsistencyFailure(f"ridge {set(map(str,pair))}: bad apex count")
            apex = apexes[0]
            comps = self._components_without(adj, apex)
            if len(comps) != 2:
                raise ConsistencyFailure("apex does not split into two cells")
            for comp in comps:
                cyc = self._trace_cycle(
                    {v: [w for w in adj[v] if w in comp or w == apex]
                     for v in comp | {apex}}, apex,
                )
                self._push_ridge(pair, kind, spec, cyc)
            return
        if any(len(nb) != 2 for nb in adj.values()) or not verts:
            raise ConsistencyFailure(
                f"ridge {set(map(str, pair))}: degrees {degs}"
            )
        cyc = self._trace_cycle(adj, verts[0])
        if len(cyc) != len(verts):
            raise ConsistencyFailure(
                f"ridge {set(map(str, pair))}: cycle misses vertices"
            )
        self._push_ridge(pair, kind, spec, cyc)

    @staticmethod
    def _components_without(adj, apex):
        rest = set(adj) - {apex}
        comps = []
        while rest:
            start = next(iter(rest))
            comp = {start}
            stack = [start]
            while stack:
                v = stack.pop()
                for w in adj[v]:
                    if w in rest and w not in comp:
                        comp.add(w)
                        stack.append(w)
            comps.append(comp)
            rest -= comp
        return comps

    @staticmethod
    def _trace_cycle(adj, start):
        cyc = [start]
        prev = None
        cur = start
        while True:
            nxts = [w for w in adj[cur] if w != prev]
            if not nxts:
                raise ConsistencyFailure("open chain in ridge graph")
            nxt = nxts[0]
            if nxt == start and len(cyc) > 2:
                return cyc
            cyc.append(nxt)
            prev, cur = cur, nxt
            if len(cyc) > 64:
                raise ConsistencyFailure("runaway ridge cycle")

    def _push_ridge(self, pair, kind, spec, cyc):
        mirror = spec[2] if kind == "complex" else None
        self.ridges.append(
            Ridge(len(self.ridges), pair, kind, cyc, mirror_word=mirror)
        )

    # -- side structure ----------------------------------------------------------

    def _check_sides(self):
        self.sides = {lab: [] for lab in self.bisectors}
        for r in self.ridges:
            for lab in r.pair:
                self.sides[lab].append(r.index)
        for lab, rids in self.sides.items():
            verts = {v.index for v in self.vertices if lab in v.on}
            edges = [
                e for e in self.edges
                if lab in e.on and e.v[0] in verts and e.v[1] in verts
            ]
            V, E, F = len(verts), len(edges), len(rids)
            if V - E + F != 2:
                raise ConsistencyFailure(
                    f"side {lab}: boundary sphere fails, chi = {V - E + F}"
                )
            # ridge-regularity inside the side: each edge on exactly two
            # of the side's ridges
            count = {e.index: 0 for e in edges}
            for rid in rids:
                r = self.ridges[rid]
                m = len(r.cycle)
                for t in range(m):
                    a, b = r.cycle[t], r.cycle[(t + 1) % m]
                    eid = self._edge_index[(min(a, b), max(a, b))]
                    if eid in count:
                        count[eid] += 1
            if any(c != 2 for c in count.values()):
                raise ConsistencyFailure(f"side {lab}: edge not on two ridges")

        # global Euler characteristic of the boundary 3-complex
        chi = len(self.vertices) - len(self.edges) + len(self.ridges) - 28
        if chi != 0:
            raise ConsistencyFailure(f"chi(E_3) = {chi}, expected 0")

    # -- cross-checks against the text ----------------------------------------------

    def _check_against_text(self):
        key_p = 3 if self.p <= 4 else (5 if self.p <= 6 else 8)
        idx = {lab.index: lab for lab in self.bisectors}
        for (kp, name), indices in EXPECTED_INCIDENCE.items():
            if kp != key_p:
                continue
            v = self.by_name.get(name)
            if v is None:
                raise ConsistencyFailure(f"missing vertex {name}")
            expect = frozenset(idx[i] for i in indices)
            if v.on != expect:
                raise ConsistencyFailure(
                    f"incidence of {name}: got {sorted(l.index for l in v.on)}"
                )
        # P-orbit closure: applying P to a vertex lift lands on the successor
        G = self.group
        for v in self.vertices:
            w = G.P.apply(v.lift)
            succ = [
                u for u in self.vertices
                if u.orbit == v.orbit and u.shift == (v.shift + 1) % 7
            ]
            assert len(succ) == 1 and proportional(w, succ[0].lift), (
                f"P-orbit break at {v.name}"
            )
        # iota maps the vertex set to itself projectively
        for v in self.vertices:
            w = G.iota.apply(v.lift)
            if not any(proportional(w, u.lift) for u in self.vertices):
                raise ConsistencyFailure(f"iota image of {v.name} not a vertex")

    # -- realization (consistency / correct side for edges) ------------------------

    def realize_edges(self) -> dict:
        """Classify every edge against every non-containing bisector; edges
        must stay weakly inside with tangencies only at ideal endpoints."""
        G = self.group
        tangencies = []
        for e in self.edges:
            u = self.vertices[e.v[0]]
            w = self.vertices[e.v[1]]
            for lab, b in self.bisectors.items():
                if lab in e.on:
                    continue
                oc = segment_classify(G, u.lift, w.lift, b)
                if oc.kind == "one_side":
                    if oc.side > 0:
                        raise SideFailure(
                            f"edge {u.name}-{w.name} outside {lab}"
                        )
                    # endpoint zeros must be incident vertices
                    A, B, C = oc.quad
                    if C.is_zero() and lab not in u.on:
                        raise SideFailure(f"edge zero at {u.name} off {lab}")
                    if (A + 2 * B + C).is_zero() and lab not in w.on:
                        raise SideFailure(f"edge zero at {w.name} off {lab}")
                elif oc.kind == "tangent_at_endpoint":
                    if oc.side > 0:
                        raise SideFailure(
                            f"edge {u.name}-{w.name} tangent outside {lab}"
                        )
                    vtx = u if oc.tangent_end == 0 else w
                    if not vtx.ideal:
                        raise SideFailure(
                            f"tangency at non-ideal vertex {vtx.name} vs {lab}"
                        )
                    tangencies.append((u.name, w.name, str(lab), oc.quad))
                elif oc.kind == "contained":
                    raise ConsistencyFailure(
                        f"edge {u.name}-{w.name} on unlisted bisector {lab}"
                    )
                else:
                    raise SideFailure(
                        f"edge {u.name}-{w.name} {oc.kind} vs {lab}"
                    )
        if self.p in (4, 6):
            if not tangencies:
                raise ConsistencyFailure("expected boundary tangencies")
        elif tangencies:
            raise ConsistencyFailure("unexpected tangency in compact case")
        return {"tangencies": tangencies}

    def correct_component_check(self) -> None:
        """[p_fix, p_12 (or p^1_12)] meets the 28 bisectors at most at its
        endpoint (tangency there included: the p=4 cusp case)."""
        G = self.group
        target = self.by_name["p_12" if self.p <= 4 else "p^1_12"]
        for lab, b in self.bisectors.items():
            oc = segment_classify(G, G.p_fix, target.lift, b)
            if oc.kind == "one_side":
                A, B, C = oc.quad
                if C.is_zero():
                    raise SideFailure("p_fix on a bounding bisector")
                if (A + 2 * B + C).is_zero() and lab not in target.on:
                    raise SideFailure("segment endpoint zero not predicted")
                if oc.side > 0:
                    raise SideFailure(f"[p_fix, {target.name}] outside {lab}")
            elif oc.kind == "tangent_at_endpoint" and oc.tangent_end == 1:
                if oc.side > 0:
                    raise SideFailure(
                        f"[p_fix, {target.name}] tangent outside {lab}"
                    )
                if not target.ideal:
                    raise SideFailure(
                        f"tangency at non-ideal {target.name} vs {lab}"
                    )
            else:
                raise SideFailure(
                    f"[p_fix, {target.name}] {oc.kind} against {lab}"
                )

    # -- ridge polygons for certification ---------------------------------------------

    def ridge_polygon(self, r: Ridge) -> RidgePolygon:
        if r.polygon is not None:
            return r.polygon
        assert r.kind == "giraud"
        chart = make_chart(self.group, self.bisectors, r.pair)
        lifts = [self.vertices[i].lift for i in r.cycle]
        coords = [chart.coords(u) for u in lifts]
        names = [self.vertices[i].name for i in r.cycle]
        ons = [self.vertices[i].on for i in r.cycle]
        edge_on = []
        m = len(r.cycle)
        for t in range(m):
            a, b = r.cycle[t], r.cycle[(t + 1) % m]
            e = self.edges[self._edge_index[(min(a, b), max(a, b))]]
            edge_on.append(e.on)
        a, b = sorted(r.pair, key=lambda l: l.index)
        r.polygon = RidgePolygon(
            chart, lifts, coords, names, ons, edge_on, label=f"B{a.index}^B{b.index}"
        )
        return r.polygon

    @staticmethod
    def _fingerprint(w: Vec3):
        zs = [c.approx() for c in w]
        piv = max(range(3), key=lambda i: abs(zs[i]))
        if abs(zs[piv]) == 0:
            return None
        r = [zs[i] / zs[piv] for i in range(3)]
        return tuple(round(x.real, 6) for x in r) + tuple(
            round(x.imag, 6) for x in r
        )

    def find_vertex(self, w: Vec3) -> int | None:
        """Index of the vertex projectively equal to w, if any.

        A float fingerprint narrows the candidates; equality is decided by
        exact cross-ratio tests.
        """
        if not hasattr(self, "_fps"):
            self._fps = {}
            for v in self.vertices:
                self._fps.setdefault(self._fingerprint(v.lift), []).append(
                    v.index
                )
        fp = self._fingerprint(w)
        for vid in self._fps.get(fp, []):
            if proportional(w, self.vertices[vid].lift):
                return vid
        for v in self.vertices:  # fingerprint miss: exact full scan
            if proportional(w, v.lift):
                return v.index
        return None

    def find_ridge(self, vertex_ids: set) -> int | None:
        for r in self.ridges:
            if set(r.cycle) == vertex_ids:
                return r.index
        return None

    def find_ridge_by_pair(self, pair: frozenset) -> int | None:
        for r in self.ridges:
            if r.pair == pair:
                return r.index
        return None

    # -- 3-sphere certificate -----------------------------------------------------

    def vertex_link_report(self) -> list[dict]:
        """Each vertex link must be a connected closed surface with chi = 2."""
        out = []
        for v in self.vertices:
            edges_at = [self.edges[ei] for ei in self.edges_at[v.index]]
            ridges_at = [r for r in self.ridges if v.index in r.cycle]
            sides_at = {lab for lab in v.on}
            # link graph: nodes = edges at v, arcs = ridges at v joining the
            # two edges adjacent to v in the ridge's boundary cycle
            node_ids = {e.index: t for t, e in enumerate(edges_at)}
            arcs = []
            for r in ridges_at:
                cyc = r.cycle
                m = len(cyc)
                pos = [t for t in range(m) if cyc[t] == v.index]
                for t in pos:
                    before = cyc[(t - 1) % m]
                    after = cyc[(t + 1) % m]
                    e1 = self._edge_index[(min(v.index, before), max(v.index, before))]
                    e2 = self._edge_index[(min(v.index, after), max(v.index, after))]
                    arcs.append((node_ids[e1], node_ids[e2]))
            E_v, R_v, S_v = len(edges_at), len(arcs), len(sides_at)
            chi = E_v - R_v + S_v
            # connectivity of the link graph
            adj = {t: set() for t in range(E_v)}
            for a, b in arcs:
                adj[a].add(b)
                adj[b].add(a)
            seen = {0} if E_v else set()
            stack = [0] if E_v else []
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            connected = len(seen) == E_v
            # each side containing v contributes one link face whose boundary
            # must be a single cycle of (edge, ridge) incidences at v
            faces_ok = True
            for lab in sides_at:
                local = [
                    (a, b)
                    for r in ridges_at
                    if lab in r.pair
                    for (a, b) in self._ridge_link_arcs(r, v.index, node_ids)
                ]
                if not self._single_cycle(local):
                    faces_ok = False
            is_sphere = chi == 2 and connected and faces_ok
            out.append(
                {
                    "vertex": v.name,
                    "chi": chi,
                    "connected": connected,
                    "faces_ok": faces_ok,
                    "is_2sphere": is_sphere,
                    "valence": (E_v, R_v, S_v),
                }
            )
            if not is_sphere:
                raise ConsistencyFailure(f"link of {v.name} is not a 2-sphere")
        return out

    def _ridge_link_arcs(self, r: Ridge, vid: int, node_ids):
        cyc = r.cycle
        m = len(cyc)
        for t in range(m):
            if cyc[t] == vid:
                before, after = cyc[(t - 1) % m], cyc[(t + 1) % m]
                e1 = self._edge_index[(min(vid, before), max(vid, before))]
                e2 = self._edge_index[(min(vid, after), max(vid, after))]
                yield (node_ids[e1], node_ids[e2])

    @staticmethod
    def _single_cycle(arcs) -> bool:
        if not arcs:
            return False
        deg = {}
        adj = {}
        for a, b in arcs:
            deg[a] = deg.get(a, 0) + 1
            deg[b] = deg.get(b, 0) + 1
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        if any(d != 2 for d in deg.values()):
            return False
        start = arcs[0][0]
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(deg)

    def pinch_points(self) -> list[str]:
        """Vertices on exactly six 3-cells in the {r, P^2 r-, s, P^2 s, s-,
        P^2 s-} pattern (the torus self-touch points for p = 8, 12)."""
        out = []
        base = {
            SideLabel("r", 1, 0), SideLabel("r", -1, 2), SideLabel("s", 1, 0),
            SideLabel("s", 1, 2), SideLabel("s", -1, 0), SideLabel("s", -1, 2),
        }
        for v in self.vertices:
            for j in range(7):
                if v.on == frozenset(l.shifted(j) for l in base):
                    out.append(v.name)
        return out

    def fundamental_group_trivial(self, budget: int = 10 ** 6) -> dict:
        """Edge-path group of the boundary 3-complex, Tietze-simplified."""
        n = len(self.vertices)
        # spanning tree (BFS)
        tree = set()
        seen = {0}
        queue = [0]
        adj = {i: [] for i in range(n)}
        for e in self.edges:
            adj[e.v[0]].append((e.v[1], e.index))
            adj[e.v[1]].append((e.v[0], e.index))
        while queue:
            x = queue.pop(0)
            for y, ei in adj[x]:
                if y not in seen:
                    seen.add(y)
                    tree.add(ei)
                    queue.append(y)
        assert len(seen) == n, "1-skeleton disconnected"
        gens = [e.index for e in self.edges if e.index not in tree]
        gen_id = {ei: t + 1 for t, ei in enumerate(gens)}  # 1-based, sign=dir
        relators = []
        for r in self.ridges:
            word = []
            cyc = r.cycle
            m = len(cyc)
            for t in range(m):
                a, b = cyc[t], cyc[(t + 1) % m]
                ei = self._edge_index[(min(a, b), max(a, b))]
                if ei in tree:
                    continue
                g = gen_id[ei]
                word.append(g if a < b else -g)
            if word:
                relators.append(word)
        ngens = len(gens)
        trivial, moves = _tietze_trivial(ngens, relators, budget)
        return {"generators": ngens, "relators": len(relators),
                "trivial": trivial, "moves": moves}

    # -- solid torus decomposition (p <= 6 route) ------------------------------------

    def _pair(self, f1, s1_, k1, f2, s2, k2) -> frozenset:
        return frozenset((SideLabel(f1, s1_, k1), SideLabel(f2, s2, k2)))

    def _subcomplex(self, pairs) -> tuple[set, set, set]:
        """(vertices, edges, 2-cells) of the union of side-pair intersections."""
        vs, es, fs = set(), set(), set()
        for pair in pairs:
            ridges = [r for r in self.ridges if r.pair == pair]
            for r in ridges:
                fs.add(r.index)
                m = len(r.cycle)
                for t in range(m):
                    a, b = r.cycle[t], r.cycle[(t + 1) % m]
                    vs.update((a, b))
                    es.add(self._edge_index[(min(a, b), max(a, b))])
            if not ridges:
                # the two sides may still share edges / vertices
                l1, l2 = tuple(pair)
                for e in self.edges:
                    if l1 in e.on and l2 in e.on:
                        es.add(e.index)
                        vs.update(e.v)
                for v in self.vertices:
                    if l1 in v.on and l2 in v.on:
                        vs.add(v.index)
        return vs, es, fs

    def _is_disk(self, vs, es, fs) -> tuple[bool, list]:
        """Disk test for a pure 2-subcomplex: chi = 1, connected, boundary a
        single circle.  Returns (ok, boundary cycle as vertex list)."""
        chi = len(vs) - len(es) + len(fs)
        # boundary edges: on exactly one 2-cell of the subcomplex
        count = {e: 0 for e in es}
        for fi in fs:
            r = self.ridges[fi]
            m = len(r.cycle)
            for t in range(m):
                a, b = r.cycle[t], r.cycle[(t + 1) % m]
                ei = self._edge_index[(min(a, b), max(a, b))]
                if ei in count:
                    count[ei] += 1
        boundary = [e for e, c in count.items() if c == 1]
        if any(c > 2 for c in count.values()):
            return False, []
        arcs = [self.edges[e].v for e in boundary]
        if chi != 1 or not self._single_cycle(arcs):
            return False, []
        return True, boundary

    def solid_torus_certificate(self) -> dict:
        """Replay of the meridian-disk decomposition (p <= 6): the meridian
        disks are disks, the V^r cylinder sequence glues ball-by-ball along
        disks, and the boundary circles of D1^r and D1^s meet in one point."""
        assert self.p <= 6
        d1s_pairs = [self._pair("s", 1, -2, "s", -1, 0)]
        d2s_pairs = [self._pair("s", 1, -1, "s", -1, 1)]
        d1r_pairs = [
            self._pair("r", 1, 3, "r", -1, 3),
            self._pair("r", 1, -2, "r", -1, 2),
            self._pair("r", 1, -3, "r", -1, -3),
            self._pair("r", 1, -3, "r", -1, 3),
        ]
        d2r_pairs = [
            self._pair("r", 1, 1, "r", -1, -1),
            self._pair("r", 1, 1, "r", -1, -2),
            self._pair("r", 1, 0, "r", -1, 0),
            self._pair("r", 1, 2, "r", -1, -1),
        ]
        disks = {}
        for name, pairs in (
            ("D1s", d1s_pairs), ("D2s", d2s_pairs),
            ("D1r", d1r_pairs), ("D2r", d2r_pairs),
        ):
            vs, es, fs = self._subcomplex(pairs)
            ok, boundary = self._is_disk(vs, es, fs)
            if not ok:
                raise ConsistencyFailure(f"meridian {name} is not a disk")
            disks[name] = (vs, es, fs, boundary)
        # boundary circles of D1r and D1s meet in a single point
        b_r = disks["D1r"][3]
        b_s = disks["D1s"][3]
        vr = set()
        for e in b_r:
            vr.update(self.edges[e].v)
        vs_ = set()
        for e in b_s:
            vs_.update(self.edges[e].v)
        common_v = vr & vs_
        common_e = set(b_r) & set(b_s)
        if len(common_v) != 1 or common_e:
            raise ConsistencyFailure(
                f"dD1r and dD1s meet in {len(common_v)} points"
            )
        # V^r ball sequence: consecutive unions glue along disks
        seq = [
            SideLabel("r", 1, -3), SideLabel("r", -1, 2), SideLabel("r", 1, 3),
            SideLabel("r", -1, 1), SideLabel("r", 1, 2), SideLabel("r", -1, 0),
            SideLabel("r", 1, 1),
        ]
        glue = self._ball_sequence_check(seq)
        return {
            "meridians_are_disks": True,
            "intersection_point": self.vertices[next(iter(common_v))].name,
            "cylinder_gluings": glue,
        }

    def _side_cells(self, lab) -> tuple[set, set, set]:
        vs = {v.index for v in self.vertices if lab in v.on}
        es = {e.index for e in self.edges if lab in e.on
              and e.v[0] in vs and e.v[1] in vs}
        fs = {r.index for r in self.ridges if lab in r.pair}
        return vs, es, fs

    def _ball_sequence_check(self, seq) -> list[dict]:
        """Each new 3-cell must meet the union of the previous ones in a disk."""
        out = []
        acc_v, acc_e, acc_f = self._side_cells(seq[0])
        for lab in seq[1:]:
            vs, es, fs = self._side_cells(lab)
            iv, ie, if_ = acc_v & vs, acc_e & es, acc_f & fs
            ok, _ = self._is_disk(iv, ie, if_)
            out.append({"cell": str(lab), "intersection_is_disk": ok})
            if not ok:
                raise ConsistencyFailure(
                    f"cylinder gluing at {lab} is not a disk"
                )
            acc_v |= vs
            acc_e |= es
            acc_f |= fs
        return out

    def verify_3sphere(self) -> dict:
        chi = len(self.vertices) - len(self.edges) + len(self.ridges) - 28
        links = self.vertex_link_report()
        pi1 = self.fundamental_group_trivial()
        cert = {
            "chi": chi,
            "links_are_2spheres": all(l["is_2sphere"] for l in links),
            "pi1": pi1,
            "pinch_points": self.pinch_points(),
        }
        if self.p <= 6:
            cert["solid_tori"] = self.solid_torus_certificate()
            if not cert["pinch_points"]:
                cert["pinch_count_ok"] = True
            else:
                raise ConsistencyFailure("unexpected pinch points for p <= 6")
        else:
            if len(cert["pinch_points"]) != 7:
                raise ConsistencyFailure(
                    f"{len(cert['pinch_points'])} pinch points, expected 7"
                )
            cert["pinch_count_ok"] = True
        if chi != 0:
            raise ConsistencyFailure(f"chi(E_3) = {chi}")
        if not pi1["trivial"] and self.p > 6:
            raise ConsistencyFailure("pi1 not shown trivial (Tietze exhausted)")
        return cert

    def serialize(self) -> dict:
        return {
            "p": self.p,
            "vertices": [
                {"name": v.name, "on": sorted(l.index for l in v.on),
                 "ideal": v.ideal}
                for v in self.vertices
            ],
            "edges": [
                {"v": [self.vertices[e.v[0]].name, self.vertices[e.v[1]].name],
                 "on": sorted(l.index for l in e.on)}
                for e in self.edges
            ],
            "ridges": [
                {"pair": sorted(l.index for l in r.pair), "kind": r.kind,
                 "cycle": [self.vertices[i].name for i in r.cycle]}
                for r in self.ridges
            ],
        }


def _free_reduce_cyclic(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    while len(out) >= 2 and out[0] == -out[-1]:
        out = out[1:-1]
    return out


def _tietze_trivial(ngens: int, relators, budget: int) -> tuple[bool, int]:
    """Greedy Tietze simplification: eliminate generators that occur exactly
    once in some relator.  Returns (shown trivial, move count)."""
    moves = 0
    rels = [_free_reduce_cyclic(list(r)) for r in relators]
    alive = set(range(1, ngens + 1))
    while moves < budget:
        rels = [r for r in (_free_reduce_cyclic(r) for r in rels) if r]
        if not alive:
            return True, moves
        ones = {abs(r[0]) for r in rels if len(r) == 1}
        if ones:
            alive -= ones
            rels = [[x for x in r if abs(x) not in ones] for r in rels]
            moves += len(ones)
            continue
        best = None  # (relator index, generator, relator length)
        for i, r in enumerate(rels):
            counts = {}
            for x in r:
                counts[abs(x)] = counts.get(abs(x), 0) + 1
            for g, c in counts.items():
                if c == 1 and (best is None or len(r) < best[2]):
                    best = (i, g, len(r))
        if best is None:
            return not alive, moves
        i, g, _ = best
        r = rels.pop(i)
        pos = next(t for t, x in enumerate(r) if abs(x) == g)
        rot = r[pos:] + r[:pos]
        w = rot[1:]
        if rot[0] > 0:
            rep = [-x for x in reversed(w)]  # g = w^{-1}
        else:
            rep = list(w)  # g^{-1} = w^{-1}  =>  g = w
        rep_inv = [-x for x in reversed(rep)]
        new_rels = []
        for rr in rels:
            out = []
            for x in rr:
                if x == g:
                    out.extend(rep)
                elif x == -g:
                    out.extend(rep_inv)
                else:
                    out.append(x)
            new_rels.append(out)
            moves += 1
        rels = new_rels
        alive.discard(g)
    return False, moves


def build_model(p: int) -> Model:
    return Model(p)
