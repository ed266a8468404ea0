"""Two-cut design square: distances, occupancy maps, chords, detour paths."""

import math

import numpy as np
import pytest
from shapely.geometry import LineString

from kirigami import analysis
from kirigami.analysis import (
    BASES_ABSOLUTE,
    BASES_ADJACENT,
    SEP_HORIZONTAL,
    SEP_VERTICAL,
    TwoCutMap,
    admissible_path,
    build_two_cut_map,
    euclidean_distance,
    nonadmissible_fraction,
    pair_intersects,
    path_crossing_probability,
    straight_path_crosses,
    sweep_curves,
)
from kirigami.batches import angles_intersect
from kirigami.lattice import DEFAULT_CUT_LENGTH

A = (5.0, 4.0)
B = (-5.0, -3.0)
C = (65.0, -45.0)


# --------------------------------------------------------- euclidean_distance

def test_distance_reference_points():
    # sqrt(149), sqrt(6001), sqrt(6664)
    assert euclidean_distance(A, B) == pytest.approx(12.206, abs=1e-3)
    assert euclidean_distance(A, C) == pytest.approx(77.466, abs=1e-3)
    assert euclidean_distance(C, B) == pytest.approx(81.633, abs=1e-3)
    assert euclidean_distance(A, B) < euclidean_distance(A, C) < euclidean_distance(C, B)


def test_distance_general():
    assert euclidean_distance([0, 0, 0], [2, 3, 6]) == pytest.approx(7.0)
    assert euclidean_distance(np.arange(36.0), np.arange(36.0)) == 0.0
    with pytest.raises(ValueError):
        euclidean_distance([1, 2], [1, 2, 3])


# ------------------------------------------------------------- pair_intersects

def test_pair_scalar_cases():
    # two vertical cuts stacked vertically overlap collinearly
    assert pair_intersects(0.0, 0.0, SEP_VERTICAL) is True
    # stacked horizontally they are parallel lines one unit apart
    assert pair_intersects(0.0, 0.0, SEP_HORIZONTAL) is False
    # the rest configuration of adjacent cells: vertical below horizontal
    assert pair_intersects(0.0, 90.0, SEP_VERTICAL) is False
    # opposing diagonals meet between the centres
    assert pair_intersects(45.0, -45.0, SEP_VERTICAL) is True


def test_pair_half_turn_invariance():
    rng = np.random.default_rng(7)
    for _ in range(50):
        a1, a2 = rng.uniform(-180, 180, 2)
        r = pair_intersects(a1, a2)
        assert pair_intersects(a1 + 180.0, a2) == r
        assert pair_intersects(a1, a2 - 180.0) == r


def test_pair_mirror_symmetry():
    # reflecting through the mid-plane between the two centres swaps the
    # cuts and negates both angles
    rng = np.random.default_rng(8)
    for _ in range(50):
        a1, a2 = rng.uniform(-90, 90, 2)
        assert pair_intersects(a1, a2) == pair_intersects(-a2, -a1)


def test_pair_matches_shapely():
    half = DEFAULT_CUT_LENGTH / 2.0
    rng = np.random.default_rng(9)
    for _ in range(200):
        a1, a2 = np.round(rng.uniform(-90, 90, 2), 1)
        d1 = (half * math.sin(math.radians(a1)), half * math.cos(math.radians(a1)))
        d2 = (half * math.sin(math.radians(a2)), half * math.cos(math.radians(a2)))
        s1 = LineString([(-d1[0], -d1[1]), (d1[0], d1[1])])
        s2 = LineString([(-d2[0], 1 - d2[1]), (d2[0], 1 + d2[1])])
        assert pair_intersects(float(a1), float(a2)) == s1.intersects(s2)


def test_pair_vectorized_matches_scalar():
    rng = np.random.default_rng(10)
    a1 = rng.uniform(-90, 90, 300)
    a2 = rng.uniform(-90, 90, 300)
    vec = pair_intersects(a1, a2)
    for k in range(300):
        assert vec[k] == pair_intersects(float(a1[k]), float(a2[k]))


# ------------------------------------------------------------ build_two_cut_map

def test_map_matches_direct_predicate():
    m = build_two_cut_map(90.0, resolution=64)
    g1, g2 = np.meshgrid(m.axis1, m.axis2, indexing="ij")
    expect = angles_intersect(g1, g2, offset=SEP_VERTICAL)
    assert np.array_equal(m.occupancy, expect)


def test_map_axes_and_cells():
    m = build_two_cut_map(60.0, resolution=32, base_angles=BASES_ADJACENT)
    assert m.axis1[0] == pytest.approx(-60 + 60 / 32)
    assert m.axis1[-1] == pytest.approx(60 - 60 / 32)
    assert m.axis2[0] == pytest.approx(30 + 60 / 32)
    assert m.cell_width == pytest.approx(120 / 32)
    assert m.cell_of((m.axis1[3], m.axis2[17])) == (3, 17)
    assert m.cell_of((-60.0, 90.0)) == (0, 16)
    with pytest.raises(ValueError):
        m.cell_of((61.0, 90.0))
    with pytest.raises(ValueError):
        m.cell_of((0.0, 151.0))


def test_map_fraction_resolution_stability():
    f256 = nonadmissible_fraction(build_two_cut_map(90.0, resolution=256))
    f512 = nonadmissible_fraction(build_two_cut_map(90.0, resolution=512))
    assert f256 == pytest.approx(f512, abs=0.002)
    assert 0.15 < f512 < 0.18


def test_map_validation():
    with pytest.raises(ValueError):
        build_two_cut_map(0.0)
    with pytest.raises(ValueError):
        build_two_cut_map(20.0, resolution=8)


# -------------------------------------------------------- straight_path_crosses

def test_chord_blocked_and_clear():
    # in the raw absolute square, the short hop near the centre is blocked
    # but a tiny chord away from any zone is clear
    assert straight_path_crosses(A, B) is True
    assert straight_path_crosses(A, (6.0, 5.0)) is False
    assert straight_path_crosses((80.0, 10.0), (85.0, 15.0)) is False


def test_chord_blocked_a_to_c():
    # the long diagonal chord dives through the lower-left blocked zone
    assert straight_path_crosses(A, C, step=0.002) is True


def test_chord_endpoint_validation():
    with pytest.raises(ValueError):
        straight_path_crosses((0.0, 0.0), A)  # start sits on a blocked point
    with pytest.raises(ValueError):
        straight_path_crosses(A, (0.0, 0.0))
    with pytest.raises(ValueError):
        straight_path_crosses(A, B, step=0.0)


def test_chord_symmetric():
    assert straight_path_crosses(A, B) == straight_path_crosses(B, A)


# ------------------------------------------------- path_crossing_probability

def test_chord_probability_contract():
    r1 = path_crossing_probability(90.0, 3000, seed=13)
    r2 = path_crossing_probability(90.0, 3000, seed=13)
    assert r1 == r2
    assert 0 <= r1.ci_low <= r1.probability <= r1.ci_high <= 1
    assert r1.n_crossing == round(r1.probability * r1.n_pairs)
    # loose band around the converged value 0.237 (3 sigma ~ 0.023 at n=3000)
    assert 0.19 < r1.probability < 0.29


def test_chord_probability_bound_dependence():
    # shrinking the square sharply reduces blocked chords
    r60 = path_crossing_probability(60.0, 3000, seed=13)
    r90 = path_crossing_probability(90.0, 3000, seed=13)
    assert r60.probability < r90.probability / 3


def test_chord_probability_validation():
    with pytest.raises(ValueError):
        path_crossing_probability(90.0, 0, seed=1)
    with pytest.raises(ValueError):
        path_crossing_probability(100.0, 10, seed=1)


# -------------------------------------------------------------- admissible_path

def _synthetic_map(occ, beta_max=8.0):
    # anchored at the rest pair (0, 90) where the real geometry is entirely
    # admissible, so the hand-written occupancy alone shapes the search
    res = occ.shape[0]
    w = 2.0 * beta_max / res
    ax1 = -beta_max + w * (np.arange(res) + 0.5)
    ax2 = 90.0 + ax1
    return TwoCutMap(
        beta_max=beta_max, resolution=res, base_angles=(0.0, 90.0),
        separation=SEP_VERTICAL, axis1=ax1, axis2=ax2, occupancy=occ,
    )


def test_path_on_real_map():
    m = build_two_cut_map(90.0, resolution=256, base_angles=BASES_ABSOLUTE)
    r = admissible_path(m, A, B)
    assert r.found
    assert r.vertices[0] == A and r.vertices[-1] == B
    assert r.length > euclidean_distance(A, B)
    # every vertex, not just cell centres, must pass the exact test
    for v in r.vertices:
        assert not pair_intersects(v[0], v[1])
    # polyline length equals the sum of its segment lengths
    total = sum(
        euclidean_distance(r.vertices[k], r.vertices[k + 1])
        for k in range(len(r.vertices) - 1)
    )
    assert r.length == pytest.approx(total)


def test_path_trivial_same_cell():
    m = build_two_cut_map(90.0, resolution=64, base_angles=BASES_ABSOLUTE)
    r = admissible_path(m, A, (5.2, 4.1))
    assert r.found and r.length == pytest.approx(euclidean_distance(A, (5.2, 4.1)))


def test_path_straight_corridor():
    occ = np.ones((16, 16), dtype=bool)
    occ[3, :] = False
    m = _synthetic_map(occ)
    a = (m.axis1[3], m.axis2[1])
    b = (m.axis1[3], m.axis2[14])
    r = admissible_path(m, a, b)
    assert r.found
    assert r.vertices == (a, b)
    assert r.length == pytest.approx(abs(b[1] - a[1]))


def test_path_routes_through_gap():
    occ = np.zeros((16, 16), dtype=bool)
    occ[:, 8] = True
    occ[12, 8] = False  # single gap in a full wall
    m = _synthetic_map(occ)
    a = (m.axis1[2], m.axis2[2])
    b = (m.axis1[2], m.axis2[13])
    r = admissible_path(m, a, b)
    assert r.found
    # the only way across is the gap cell; the (simplified) polyline must
    # pass through it even if it is not itself a turn point
    gap = np.array([m.axis1[12], m.axis2[8]])
    verts = np.array(r.vertices)
    dmin = np.inf
    for k in range(len(verts) - 1):
        p, q = verts[k], verts[k + 1]
        t = np.clip(np.dot(gap - p, q - p) / np.dot(q - p, q - p), 0, 1)
        dmin = min(dmin, float(np.linalg.norm(gap - (p + t * (q - p)))))
    assert dmin < m.cell_width / 2
    assert r.length > abs(b[1] - a[1])


def test_path_blocked_wall():
    occ = np.zeros((16, 16), dtype=bool)
    occ[:, 8] = True
    m = _synthetic_map(occ)
    r = admissible_path(m, (m.axis1[2], m.axis2[2]), (m.axis1[2], m.axis2[13]))
    assert not r.found
    assert r.vertices == ()
    assert math.isinf(r.length)


def test_path_no_corner_cutting():
    # a single-cell-thick diagonal wall: crossing it would require slipping
    # between two diagonally adjacent occupied cells
    res = 16
    occ = np.zeros((res, res), dtype=bool)
    for i in range(res):
        j = res - 1 - i
        occ[i, j] = True
    m = _synthetic_map(occ)
    r = admissible_path(m, (m.axis1[1], m.axis2[1]), (m.axis1[14], m.axis2[14]))
    assert not r.found


def test_path_endpoint_validation():
    m = build_two_cut_map(90.0, resolution=16, base_angles=BASES_ABSOLUTE)
    with pytest.raises(ValueError, match="not admissible"):
        admissible_path(m, (0.0, 0.0), B)
    # exactly admissible point whose map cell tests occupied at its centre
    with pytest.raises(ValueError, match="occupied"):
        admissible_path(m, (-55.688, 11.812), (80.0, 10.0))


# ------------------------------------------------------------------ sweep_curves

def test_sweep_curves_thresholds():
    pts = sweep_curves([30.0, 31.0, 35.0], 20000, seed=5)
    by = {p.beta_max: p for p in pts}
    assert by[30.0].mean_intersections == 0.0
    assert by[30.0].admissible_rate == 1.0
    assert by[31.0].mean_intersections > 0.1
    assert by[35.0].mean_intersections > by[31.0].mean_intersections
    assert by[35.0].admissible_rate < by[31.0].admissible_rate
    for p in pts:
        assert p.rate_low <= p.admissible_rate <= p.rate_high


def test_sweep_curves_deterministic_and_subset_invariant():
    a = sweep_curves([31.0, 35.0], 4000, seed=5)
    b = sweep_curves([35.0], 4000, seed=5)
    assert a[1] == b[0]
    assert sweep_curves([31.0], 4000, seed=5)[0] == a[0]


def test_sweep_curves_validation():
    with pytest.raises(ValueError):
        sweep_curves([20.0], 0, seed=1)
    with pytest.raises(ValueError):
        sweep_curves([0.0], 10, seed=1)
