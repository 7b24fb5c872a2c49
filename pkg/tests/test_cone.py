import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from sasakit import canonical_reeb, evaluate_reeb, make_diagram, parse_toric_diagram, reeb_feasible
from sasakit._dd import extreme_rays
from sasakit.cone import build_cone, characteristic_polytope, dual_rays, gorenstein_gamma
from sasakit.errors import (
    EmptyInterior,
    GammaInconsistent,
    InvalidDiagram,
    MalformedInput,
    NonPrimitiveNormal,
    NotInterior,
    NotOnSlice,
    RankDeficient,
)

from .conftest import NORMALS
from .oracles import brute_force_rays, lp_has_interior, lp_interior


def test_parse_dp2_document():
    doc = json.dumps({"normals": NORMALS["dp2"], "dim": 3, "name": "dP2"})
    d = parse_toric_diagram(doc)
    assert (d.n, d.d, d.m) == (3, 5, 2)


def test_first_quadrant():
    d = make_diagram("q", [[1, 0], [0, 1]])
    assert d.n == 2 and d.d == 2


def test_non_primitive_row_reported():
    with pytest.raises(NonPrimitiveNormal) as info:
        make_diagram("bad", [[2, 0, 0], [1, 0, 1], [1, 1, 0]])
    assert info.value.row == 1 and info.value.divisor == 2
    assert "row 1" in str(info.value)


@pytest.mark.parametrize(
    "doc",
    [
        "{not json",
        '{"name": "x", "dim": 3}',
        '{"name": "x", "dim": 3, "normals": [[1,0,0]], "extra": 1}',
        '{"name": "x", "dim": 3, "normals": [[1,0]]}',
        '{"name": "x", "dim": 3, "normals": [[1.5,0,0],[0,1,0],[0,0,1]]}',
        '{"name": "x", "dim": 3, "normals": [[9223372036854775808,0,1],[0,1,0],[0,0,1]]}',
        '{"name": "x", "dim": 5, "normals": [[1,0,0,0,0]]}',
        '{"name": "x", "dim": 2, "normals": [[1,0],[1,0],[0,1]]}',
    ],
)
def test_malformed_documents(doc):
    with pytest.raises(MalformedInput):
        parse_toric_diagram(doc)


def test_rank_deficient_and_empty_interior():
    with pytest.raises(RankDeficient):
        make_diagram("flat", [[1, 0, 0], [0, 1, 0]])
    with pytest.raises(EmptyInterior):
        make_diagram("empty", [[1, 0], [-1, 0], [0, 1]])


@pytest.mark.parametrize("name, count", [("c3", 3), ("conifold", 4), ("dp2", 5), ("dp1", 4)])
def test_rays_match_brute_force(cones, name, count):
    cone = cones[name]
    assert len(cone.rays) == count
    assert list(cone.rays) == brute_force_rays(NORMALS[name])


def test_c3_rays_are_unit_vectors(cones):
    assert sorted(cones["c3"].rays) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]


@pytest.mark.parametrize(
    "name, gamma",
    [("dp2", (-1, 0, 0)), ("c3", (-1, -1, -1)), ("conifold", (-1, 0, 0))],
)
def test_gamma_values(cones, name, gamma):
    assert cones[name].gamma == tuple(Fraction(g) for g in gamma)
    assert cones[name].ell == 1


def test_gamma_inconsistent_2d():
    d = make_diagram("nogoren", [[1, 0], [0, 1], [1, 2]])
    with pytest.raises(GammaInconsistent, match="unsolvable"):
        build_cone(d)


def test_gamma_with_denominator():
    # 2 g1 + g2 = -1 = g1 + 2 g2
    gamma, ell = gorenstein_gamma([[2, 1], [1, 2]])
    assert gamma == (Fraction(-1, 3), Fraction(-1, 3)) and ell == 3


@pytest.mark.parametrize(
    "xi, ok", [((3, 3, 3), True), ((3, 12 / 5, 12 / 5), True), (("3", "5/2", "9/4"), True)]
)
def test_dp2_feasible(cones, xi, ok):
    assert reeb_feasible(cones["dp2"], xi).feasible is ok


def test_dp2_not_interior(cones):
    with pytest.raises(NotInterior) as info:
        reeb_feasible(cones["dp2"], (3, 0, 0))
    assert info.value.pairing <= 0


def test_not_on_slice(cones):
    with pytest.raises(NotOnSlice):
        reeb_feasible(cones["dp2"], (2, 3, 3))
    # binary64 slack: 1e-13 passes, 1e-11 fails
    assert evaluate_reeb(cones["dp2"], (3 + 1e-13, 3.0, 3.0)).on_slice
    assert not evaluate_reeb(cones["dp2"], (3 + 1e-11, 3.0, 3.0)).on_slice


def test_exact_rational_slice(cones):
    rv = evaluate_reeb(cones["dp2"], (Fraction(3), Fraction(1, 3), Fraction(7, 2)))
    assert rv.exact and rv.on_slice


def test_canonical_reeb(cones):
    assert canonical_reeb(cones["dp2"]).xi == (3, Fraction(12, 5), Fraction(12, 5))
    assert canonical_reeb(cones["conifold"]).xi == (3, Fraction(3, 2), Fraction(3, 2))
    assert canonical_reeb(cones["c3"]).xi == (1, 1, 1)


@pytest.mark.parametrize("name, xi, nverts", [("c3", (1, 1, 1), 3), ("conifold", (3, "3/2", "3/2"), 4), ("dp2", (3, 3, 3), 5)])
def test_characteristic_polytope(cones, name, xi, nverts):
    rv = reeb_feasible(cones[name], xi)
    assert len(characteristic_polytope(cones[name], rv).vertices) == nverts


# --- random cones ---------------------------------------------------------------

normal3 = st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))


@st.composite
def cone_from_rays(draw):
    """Random pointed cone given by generators with positive first coordinate."""
    k = draw(st.integers(3, 6))
    gens = draw(st.lists(st.tuples(st.integers(1, 3), st.integers(-3, 3), st.integers(-3, 3)), min_size=k, max_size=k, unique=True))
    return gens


def _normals_of(gens):
    # H-rep of cone(gens) = extreme rays of the dual cone {l : <l, g> >= 0}
    return extreme_rays([list(g) for g in gens])


@given(cone_from_rays())
def test_dd_matches_brute_force_and_roundtrips(gens):
    assume(np.linalg.matrix_rank(np.array(gens, dtype=float)) == 3)
    normals = _normals_of(gens)
    assume(len(normals) >= 3)
    d = make_diagram("rand", normals)
    rays, incidence = dual_rays(d)
    assert list(rays) == brute_force_rays(normals)
    # each ray tight on >= n-1 independent facets
    for k, r in enumerate(rays):
        tight = [normals[j] for j in range(len(normals)) if incidence[j][k]]
        assert np.linalg.matrix_rank(np.array(tight, dtype=float)) == 2
    # round trip: dual of the dual gives back the normals
    assert sorted(extreme_rays([list(r) for r in rays])) == sorted(tuple(x) for x in normals)
    # l_infty pairs positively with every ray
    linf = np.sum(np.array(normals), axis=0)
    assert all(int(np.dot(linf, r)) > 0 for r in rays)


@given(st.lists(normal3, min_size=3, max_size=8, unique=True))
def test_validity_agrees_with_lp(normals):
    try:
        make_diagram("rand", normals)
        valid = True
    except NonPrimitiveNormal:
        return
    except MalformedInput:
        return
    except InvalidDiagram:
        valid = False
    full_rank = np.linalg.matrix_rank(np.array(normals, dtype=float)) == 3
    if full_rank:
        assert valid == lp_has_interior(normals)


@given(cone_from_rays(), st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_interior_flag_matches_lp(gens, xi):
    assume(np.linalg.matrix_rank(np.array(gens, dtype=float)) == 3)
    normals = _normals_of(gens)
    d = make_diagram("rand", normals)
    rays, _ = dual_rays(d)
    pairings = [sum(a * b for a, b in zip(xi, r)) for r in rays]
    assert (min(pairings) > 0) == lp_interior(rays, xi)


@given(cone_from_rays())
def test_gamma_unique_from_any_basis(gens):
    assume(np.linalg.matrix_rank(np.array(gens, dtype=float)) == 3)
    normals = _normals_of(gens)
    try:
        gamma, _ = gorenstein_gamma(normals)
    except GammaInconsistent:
        return
    from itertools import combinations

    from sasakit._exact import rank, solve

    for sub in combinations(normals, 3):
        if rank(sub) == 3:
            assert tuple(solve(sub, [-1, -1, -1])) == gamma
