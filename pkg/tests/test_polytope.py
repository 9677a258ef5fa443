import json

import numpy as np
import pytest

from hullkit import ConversionTimeout, DegenerateError, HRep, VRep, \
    contains, cross_polytope, hrep_contains, random_point_set, unit_cube, \
    vrep_to_hrep

FIG_QUAD = np.array([[0.0, 0.0], [2.0, 0.0], [3.0, 2.0], [1.0, 1.0], [0.0, 1.0]])


def _facet_array(hrep):
    return np.hstack([hrep.normals, hrep.offsets[:, None]])


def test_cube_counts_through_dim_10():
    for n in range(1, 11):
        vrep, hrep = unit_cube(n)
        assert vrep.n_points == 2 ** n
        assert hrep.n_halfspaces == 2 * n
        assert np.all((vrep.points == 0.0) | (vrep.points == 1.0))


def test_cross_counts_through_dim_10():
    for n in range(1, 11):
        vrep, hrep = cross_polytope(n)
        assert vrep.n_points == 2 * n
        assert hrep.n_halfspaces == 2 ** n
        np.testing.assert_allclose(hrep.offsets, 1.0 / np.sqrt(n))


def test_cube_dim_1():
    vrep, hrep = unit_cube(1)
    assert sorted(vrep.points[:, 0]) == [0.0, 1.0]
    sides = sorted(zip(hrep.normals[:, 0], hrep.offsets))
    assert sides == [(-1.0, 0.0), (1.0, 1.0)]


def test_cube_vrep_omitted_past_20():
    vrep, hrep = unit_cube(21)
    assert vrep is None
    assert hrep.n_halfspaces == 42
    vrep, hrep = cross_polytope(21)
    assert hrep is None
    assert vrep.n_points == 42


def test_conversion_cube3():
    vrep, _ = unit_cube(3)
    report = vrep_to_hrep(vrep)
    assert report.facet_count == 6
    assert report.hrep.n_halfspaces == 6


def test_conversion_cross3():
    vrep, hrep = cross_polytope(3)
    report = vrep_to_hrep(vrep)
    assert report.facet_count == 8
    # Duality symmetry: recovered normals match the closed-form sign vectors.
    got = np.array(sorted(map(tuple, np.round(report.hrep.normals, 9))))
    expect = np.array(sorted(map(tuple, np.round(hrep.normals, 9))))
    np.testing.assert_allclose(got, expect, atol=1e-9)
    np.testing.assert_allclose(report.hrep.offsets, 1.0 / np.sqrt(3), atol=1e-9)


def test_conversion_quadrilateral_with_interior_point():
    report = vrep_to_hrep(VRep(FIG_QUAD))
    assert report.facet_count == 4


def test_conversion_cube4_both_methods():
    vrep, _ = unit_cube(4)
    assert vrep_to_hrep(vrep, method="exhaustive").facet_count == 8
    assert vrep_to_hrep(vrep, method="pivot").facet_count == 8


def test_methods_agree_on_random_sets():
    for seed in range(6):
        v = random_point_set(22, 4, seed=seed)
        a = _facet_array(vrep_to_hrep(v, method="exhaustive").hrep)
        b = _facet_array(vrep_to_hrep(v, method="pivot").hrep)
        assert a.shape == b.shape
        np.testing.assert_allclose(a, b, atol=1e-9)


def test_facet_set_permutation_invariant():
    rng = np.random.default_rng(5)
    v = random_point_set(18, 3, seed=17)
    base = _facet_array(vrep_to_hrep(v).hrep)
    for _ in range(4):
        shuffled = VRep(v.points[rng.permutation(v.n_points)])
        other = _facet_array(vrep_to_hrep(shuffled).hrep)
        assert other.shape == base.shape
        np.testing.assert_allclose(other, base, atol=1e-7)


def test_degenerate_rejected():
    flat = VRep(np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]))
    with pytest.raises(DegenerateError):
        vrep_to_hrep(flat)


def test_conversion_timeout_raised():
    v = random_point_set(120, 6, seed=0)
    with pytest.raises(ConversionTimeout) as err:
        vrep_to_hrep(v, deadline_s=0.05)
    assert err.value.elapsed >= 0.05
    assert err.value.candidates_examined > 0


def test_hrep_contains_examples():
    _, cube_h = unit_cube(3)
    assert hrep_contains(cube_h, [0.5, 0.5, 0.5])
    assert not hrep_contains(cube_h, [1.5, 0.0, 0.0])
    _, cross_h = cross_polytope(3)
    assert not hrep_contains(cross_h, [0.4, 0.4, 0.4])  # l1 norm 1.2 > 1


def test_random_50x5_facet_count_order_of_magnitude():
    # 50 uniform points in 5 dimensions yield a few hundred facets.
    report = vrep_to_hrep(random_point_set(50, 5, seed=11))
    assert 100 <= report.facet_count <= 2000


def test_random_point_set_deterministic_and_in_range():
    a = random_point_set(5, 2, seed=42)
    b = random_point_set(5, 2, seed=42)
    np.testing.assert_array_equal(a.points, b.points)
    c = random_point_set(50, 5, seed=9)
    assert np.all(np.abs(c.points) <= 1.0)
    with pytest.raises(ValueError):
        random_point_set(3, 3, seed=0)


def test_representation_equivalence_against_membership():
    # Theorem-level equivalence: H-rep containment must match the LP answer.
    rng = np.random.default_rng(77)
    for m, n, seed in [(25, 3, 1), (30, 4, 2), (18, 5, 3)]:
        v = random_point_set(m, n, seed=seed)
        hrep = vrep_to_hrep(v).hrep
        queries = rng.uniform(-1.2, 1.2, (200, n))
        for q in queries:
            assert hrep.contains(q) == contains(v, q).inside


def test_vrep_distinctness_enforced():
    with pytest.raises(ValueError):
        VRep(np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]))


def test_json_round_trip(tmp_path):
    v = random_point_set(10, 3, seed=4)
    d = v.to_dict()
    assert d["dim"] == 3 and len(d["points"]) == 10
    v2 = VRep.from_dict(json.loads(json.dumps(d)))
    np.testing.assert_array_equal(v.points, v2.points)

    hrep = vrep_to_hrep(v).hrep
    h2 = HRep.from_dict(json.loads(json.dumps(hrep.to_dict())))
    np.testing.assert_array_equal(hrep.normals, h2.normals)
    np.testing.assert_array_equal(hrep.offsets, h2.offsets)


def test_conversion_report_counters():
    v = random_point_set(12, 3, seed=8)
    report = vrep_to_hrep(v, method="exhaustive")
    assert report.candidates_examined == 220  # C(12, 3)
    assert report.elapsed >= 0.0
    assert report.facet_count == report.hrep.n_halfspaces
