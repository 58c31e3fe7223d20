import pytest

from chlattice.bisector import SideLabel
from chlattice.hermgeom import proportional

ALL_P = (3, 4, 5, 6, 8, 12)


@pytest.mark.parametrize("p", ALL_P)
def test_census(p, all_models):
    m = all_models[p]
    V, E, F = len(m.vertices), len(m.edges), len(m.ridges)
    assert V == {3: 14, 4: 14, 5: 35, 6: 35, 8: 49, 12: 49}[p]
    assert F == {3: 63, 4: 63, 5: 70, 6: 70, 8: 77, 12: 77}[p]
    assert V - E + F - 28 == 0
    # P-orbit counts
    orbits = {v.orbit for v in m.vertices}
    assert len(orbits) == {3: 2, 4: 2, 5: 5, 6: 5, 8: 7, 12: 7}[p]


@pytest.mark.parametrize("p", ALL_P)
def test_ideal_vertices(p, all_models):
    m = all_models[p]
    ideal = {v.name for v in m.vertices if v.ideal}
    if p == 4:
        assert len(ideal) == 7 and all(n.startswith("p_") for n in ideal)
    elif p == 6:
        assert len(ideal) == 7 and all(n.startswith("q_") for n in ideal)
    else:
        assert not ideal


def test_vertex_incidence_p3(model3):
    # Proposition-level data: p_12 lies on exactly these ten bisectors
    v = model3.by_name["p_12"]
    got = sorted(l.index for l in v.on)
    assert got == [1, 2, 5, 6, 9, 11, 19, 20, 26, 28]
    q = model3.by_name["q_1232'"]
    assert sorted(l.index for l in q.on) == [1, 2, 3, 4, 9, 10, 11, 12]


@pytest.mark.parametrize("p", (8, 12))
def test_vertex_incidence_8_12(p, all_models):
    m = all_models[p]
    v = m.by_name["q^1_13'23"]
    assert sorted(l.index for l in v.on) == [1, 2, 3, 4, 22, 24]
    w = m.by_name["q^23'2_1232'"]
    assert sorted(l.index for l in w.on) == [1, 3, 4, 10, 11, 12]


@pytest.mark.parametrize("p", ALL_P)
def test_side_contents(p, all_models):
    """Each side's boundary is a 2-sphere and r1/s1 carry the documented
    number of 2-cells per regime."""
    m = all_models[p]
    r1 = [r for r in m.ridges if SideLabel("r", 1, 0) in r.pair]
    s1 = [r for r in m.ridges if SideLabel("s", 1, 0) in r.pair]
    if p <= 4:
        assert (len(r1), len(s1)) == (5, 4)
    elif p <= 6:
        assert (len(r1), len(s1)) == (6, 4)
    else:
        assert (len(r1), len(s1)) == (6, 5)


@pytest.mark.parametrize("p", ALL_P)
def test_edges_on_four_sides(p, all_models):
    m = all_models[p]
    for e in m.edges:
        assert len(e.on) >= 4
        rids = m.ridges_at_edge[e.index]
        assert len(rids) == 4  # each edge lies on exactly four 2-cells


@pytest.mark.parametrize("p", ALL_P)
def test_sphere_certificate(p, all_models):
    m = all_models[p]
    cert = m.verify_3sphere()
    assert cert["chi"] == 0
    assert cert["links_are_2spheres"]
    assert cert["pi1"]["trivial"]
    if p <= 6:
        assert cert["solid_tori"]["meridians_are_disks"]
        assert not cert["pinch_points"]
    else:
        assert len(cert["pinch_points"]) == 7


@pytest.mark.parametrize("p", (4, 6))
def test_realize_edges_tangencies(p, all_models):
    m = all_models[p]
    res = m.realize_edges()
    assert res["tangencies"], "cusped case must show boundary tangencies"
    m.correct_component_check()


@pytest.mark.parametrize("p", (3, 5, 8))
def test_realize_edges_compact(p, all_models):
    m = all_models[p]
    res = m.realize_edges()
    assert not res["tangencies"]
    m.correct_component_check()


def test_serialize_shape(model3):
    data = model3.serialize()
    assert data["p"] == 3
    assert len(data["vertices"]) == 14
    assert all(set(v) == {"name", "on", "ideal"} for v in data["vertices"])


def test_iota_permutes_vertices(model3):
    G = model3.group
    for v in model3.vertices:
        img = G.iota.apply(v.lift)
        assert model3.find_vertex(img) is not None
    # iota(p_12) = p_13
    i12 = model3.find_vertex(G.iota.apply(model3.by_name["p_12"].lift))
    assert model3.vertices[i12].name == "p_13"
