from collections import deque

import pytest

from lochness import flag_system as F
from lochness import minimal_cover as C
from lochness import periodic_map as P
from lochness.errors import ResourceLimitError
from lochness.monodromy import mon_enumerate
from lochness.periodic_map import PeriodicFlag

WORD_A = "((10)^2 12)^4"
WORD_B = "((10)^2 2)^6"


@pytest.fixture(scope="module")
def kagome():
    return P.build_tiling("3.6.3.6")


@pytest.fixture(scope="module")
def kagome_patch(kagome):
    return C.cover_patch(kagome, r=12)


# -- finite covers --------------------------------------------------------

def test_cube_cover_is_cube():
    cube = F.cube()
    data = C.finite_cover_data(cube)
    assert data.cover.n == 48
    assert F.is_isomorphic(data.cover, cube)
    assert F.euler_characteristic(data.cover) == 2
    assert C.projection_commutes(cube, data)


def test_prism_cover():
    prism = F.triangular_prism()
    data = C.finite_cover_data(prism)
    mon = len(mon_enumerate(prism))
    assert data.cover.n == mon
    assert F.validate(data.cover) and C.is_regular(data.cover)
    assert C.projection_commutes(prism, data)
    fibres = [data.projection.count(f) for f in range(prism.n)]
    assert set(fibres) == {mon // prism.n}


def test_square_torus_cover():
    fs = F.torus("4.4.4.4", 1, 1)
    cover = C.finite_cover(fs)
    assert C.is_regular(cover)
    assert F.euler_characteristic(cover) % 2 == 0


@pytest.mark.parametrize("fs", [F.hemicube(), F.torus("3.6.3.6", 1, 1), F.torus("4.8.8", 1, 1)],
                         ids=["hemicube", "kagome-torus", "488-torus"])
def test_finite_covers_valid_and_regular(fs):
    data = C.finite_cover_data(fs)
    assert F.validate(data.cover) and C.is_regular(data.cover)
    assert C.projection_commutes(fs, data)
    if C.is_regular(fs):
        assert F.is_isomorphic(data.cover, fs)


def test_finite_cover_cap():
    with pytest.raises(ResourceLimitError):
        C.finite_cover(F.triangular_prism(), cap=100)


# -- patches ----------------------------------------------------------------

def test_small_patches(kagome):
    p0 = C.cover_patch(kagome, r=0)
    assert len(p0) == 1
    assert all(p0.edges[i][0] == C.BOUNDARY for i in range(3))
    assert len(C.cover_patch(kagome, r=1)) == 4
    with pytest.raises(ValueError):
        C.cover_patch(kagome, r=-1)


def test_patch_cap(kagome):
    with pytest.raises(ResourceLimitError):
        C.cover_patch(kagome, r=10, cap=100)


def test_patch_invariants(kagome_patch):
    assert C.check_patch(kagome_patch)
    sizes = [len(C.truncate(kagome_patch, r)) for r in range(13)]
    assert all(a < b for a, b in zip(sizes, sizes[1:]))


def test_projection_property(kagome, kagome_patch):
    cp = kagome_patch
    for i in range(3):
        for g, h in enumerate(cp.edges[i]):
            if h != C.BOUNDARY:
                assert cp.project(h) == P.padjacent(kagome, cp.project(g), (i,))


def _flag_ball_sizes(pm, r):
    start = PeriodicFlag(0)
    dist = {start: 0}
    queue = deque([start])
    while queue:
        f = queue.popleft()
        if dist[f] == r:
            continue
        for a in range(3):
            g = P.padjacent(pm, f, (a,))
            if g not in dist:
                dist[g] = dist[f] + 1
                queue.append(g)
    return [sum(1 for d in dist.values() if d <= k) for k in range(r + 1)]


@pytest.mark.parametrize("name", P.REGULAR)
def test_regular_cover_ball_is_flag_ball(name):
    pm = P.build_tiling(name)
    cp = C.cover_patch(pm, r=10)
    assert [len(C.truncate(cp, k)) for k in range(11)] == _flag_ball_sizes(pm, 10)


def test_disc_stats(kagome):
    s = C.patch_stats(C.cover_patch(kagome, r=0))
    assert (s.V, s.E, s.F, s.chi, s.boundary_cycles, s.genus) == (3, 3, 1, 1, 1, 0)
    assert s.orientable


@pytest.mark.parametrize("name", P.REGULAR)
def test_regular_tilings_stay_planar(name):
    table = C.genus_table(P.build_tiling(name), (2, 4, 6, 8, 10, 12))
    assert all(s.orientable and s.genus == 0 for s in table)


@pytest.mark.parametrize("name", P.ARCHIMEDEAN)
def test_genus_table_properties(name):
    table = C.genus_table(P.build_tiling(name), C.DEFAULT_RADII)
    for s in table:
        assert s.orientable
        assert (s.chi + s.boundary_cycles) % 2 == 0
        assert s.genus == 1 - (s.chi + s.boundary_cycles) // 2
    assert C.is_nondecreasing(s.genus for s in table)


def test_kagome_genus_appears(kagome):
    table = C.genus_table(kagome, C.DEFAULT_RADII)
    assert [s.genus for s in table][-1] >= 1


def test_stats_agree_with_closed_cover():
    # a patch that swallows a whole finite cover has no boundary and matches its Euler characteristic
    fs = F.torus("4.4.4.4", 1, 1)
    cover = C.finite_cover(fs)
    edges = tuple(tuple(row) for row in cover.adj)
    s = C.patch_stats(edges)
    assert s.boundary_cycles == 0
    assert s.chi == F.euler_characteristic(cover)
    assert s.genus == F.genus(cover)


def test_csv_rows(kagome):
    rows = C.csv_rows(C.genus_table(kagome, (4, 6)))
    assert rows[0] == C.CSV_HEADER == ("r", "elements", "chi", "boundary", "genus")
    assert [r[0] for r in rows[1:]] == [4, 6]
    assert rows[1][1] == len(C.cover_patch(kagome, r=4))


# -- (p, q) type and branching ------------------------------------------------

def test_pq_types():
    assert C.pq_type(P.build_tiling("3.6.3.6")) == (6, 4)
    assert C.pq_type(P.build_tiling("4.4.4.4")) == (4, 4)
    assert C.pq_type(P.build_tiling("3.12.12")) == (12, 3)
    assert C.pq_type(P.build_tiling("4.8.8")) == (8, 3)


def test_branch_orders():
    kag = C.branch_orders(P.build_tiling("3.6.3.6"))
    assert kag.face_index_by_size() == {3: 2, 6: 1}
    assert kag.has_branch_point
    sq = C.branch_orders(P.build_tiling("4.4.4.4"))
    assert all(e.index == 1 for e in sq.faces + sq.vertices)
    assert not sq.has_branch_point
    assert C.branch_orders(P.build_tiling("4.8.8")).face_index_by_size() == {4: 2, 8: 1}


# -- lifting ----------------------------------------------------------------

def test_identification_words_lift(kagome):
    cp = C.cover_patch(kagome, r=40)
    for w in (WORD_A, WORD_B):
        assert C.lifts_to_closed_walk(cp, w)
        assert C.lifts_everywhere(cp, w)
    assert not C.lifts_to_closed_walk(cp, "((10)^2 12)^2")


def test_short_patch_cannot_hold_word(kagome):
    cp = C.cover_patch(kagome, r=10)
    assert not C.lifts_to_closed_walk(cp, WORD_A)


FIRST_HANDLE = {"3.6.3.6": 12, "3.3.3.3.6": 12, "3.3.4.3.4": 14, "3.3.3.4.4": 18,
                "3.4.6.4": 18, "3.12.12": 22, "4.6.12": 28, "4.8.8": 28}


@pytest.mark.parametrize("name", P.ARCHIMEDEAN)
def test_genus_appears_at_larger_radius(name):
    table = C.genus_table(P.build_tiling(name), range(4, FIRST_HANDLE[name] + 1, 2))
    genera = [s.genus for s in table]
    assert C.is_nondecreasing(genera)
    assert genera[-1] >= 1 and genera[-2] == 0
