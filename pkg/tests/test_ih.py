from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracle import dense_ih, strata_data
from strata import catalog
from strata.errors import StrataError
from strata.ih import (
    allowable_complex,
    chain_perversity,
    ih_betti,
    ih_complex,
    regular_part_betti,
    relative_betti,
    step_ih_betti,
)
from strata.simplicial import BettiTable, SimplicialComplex, homology_betti
from strata.stratification import (
    Perversity,
    StratifiedSpace,
    cone_stratified,
    manifold_space,
    named_perversity,
    product_stratified,
    suspension_stratified,
    top_perversity,
)

C4 = catalog.four_cycle()
OCT = catalog.octahedron()
CONE_OCT = cone_stratified(manifold_space(OCT))


def const(space, k):
    return named_perversity(space, k)


@pytest.mark.parametrize("k, expected", [(0, (1, 0, 0, 0)), (2, (1, 0, 1, 0)), (-1, (0, 0, 0, 0))])
def test_cone_octahedron_examples(k, expected):
    assert ih_betti(CONE_OCT, const(CONE_OCT, k)) == expected


def test_regular_part_examples():
    assert regular_part_betti(CONE_OCT) == (1, 0, 1)
    assert regular_part_betti(manifold_space(OCT)) == homology_betti(OCT)
    P = product_stratified(C4, CONE_OCT)
    assert regular_part_betti(P) == (1, 1, 1, 1)


def test_relative_examples():
    assert relative_betti(CONE_OCT) == (0, 0, 0, 0)
    S = suspension_stratified(manifold_space(OCT))
    assert relative_betti(S) == (0, 1, 0, 1)
    assert relative_betti(manifold_space(OCT)) == homology_betti(OCT)


def test_step_examples():
    lo, hi = const(CONE_OCT, 0), const(CONE_OCT, 2)
    assert step_ih_betti(CONE_OCT, lo, hi) == (0, 0, 1, 0)
    assert step_ih_betti(CONE_OCT, hi, hi) == ()
    with pytest.raises(StrataError) as exc:
        step_ih_betti(CONE_OCT, hi, lo)
    assert exc.value.code == "NOT_NESTED"


def test_errors():
    bad = manifold_space(SimplicialComplex([(0, 1, 2), (2, 3)]))
    with pytest.raises(StrataError) as exc:
        ih_betti(bad, Perversity())
    assert exc.value.code == "INVALID_SPACE"
    with pytest.raises(StrataError) as exc:
        ih_betti(CONE_OCT, Perversity.of({"elsewhere": 0}))
    assert exc.value.code == "SPACE_MISMATCH"


def test_weighted_sphere_with_circle_stratum():
    X = catalog.get("weighted_hopf_2").X
    assert ih_betti(X, const(X, 0)) == (1, 0, 0, 1)
    assert ih_betti(X, const(X, 1)) == regular_part_betti(X) == (1, 1, 0, 0)
    assert ih_betti(X, const(X, -1)) == relative_betti(X) == (0, 0, 1, 1)


@pytest.mark.parametrize("name", sorted(catalog.spaces()))
def test_manifold_case_and_extremes(name):
    X = catalog.spaces()[name]
    if not X.singular_strata:
        assert ih_betti(X, Perversity()) == homology_betti(X.complex)
        return
    t = top_perversity(X)
    assert ih_betti(X, t.shifted(1)) == regular_part_betti(X)
    assert ih_betti(X, const(X, -1)) == relative_betti(X)


@pytest.mark.parametrize("link", ["c4", "oct", "susp_oct"])
def test_cone_formula(link):
    L = manifold_space({"c4": C4, "oct": OCT, "susp_oct": catalog.suspension(OCT)}[link])
    C = cone_stratified(L)
    base = homology_betti(L.complex)
    t = top_perversity(C)["star"]
    for k in range(-2, t + 3):
        expected = BettiTable(tuple(base[i] if i <= k else 0 for i in range(C.dimension + 1)))
        assert ih_betti(C, const(C, k)) == expected, k


def test_cone_formula_on_stratified_link():
    # link with its own singular stratum: cone over the weighted 3-sphere
    L = catalog.get("weighted_hopf_2").X
    C = cone_stratified(L)
    for k in range(-1, 4):
        q = Perversity.of({"c": 0, "star": k})
        lt = ih_betti(L, Perversity.of({"c": 0}))
        expected = tuple(lt[i] if i <= k else 0 for i in range(C.dimension + 1))
        assert ih_betti(C, q) == expected, k


def test_monotone_span_inclusion():
    X = catalog.get("susp_hopf").B
    complexes = [allowable_complex(X, const(X, k)) for k in range(-1, 3)]
    for small, big in zip(complexes, complexes[1:]):
        assert small.spans_within(big)
        assert not big.spans_within(small) or small.bases == big.bases


def test_cache_is_not_observable():
    q = const(CONE_OCT, 1)
    first = ih_betti(CONE_OCT, q)
    allowable_complex.cache_clear()
    assert ih_betti(CONE_OCT, q) == first
    assert ih_complex(CONE_OCT, q) is ih_complex(CONE_OCT, q)
    assert chain_perversity(CONE_OCT, q).as_dict() == {"star": 0}


@pytest.mark.parametrize("name", sorted(catalog.spaces()))
def test_step_euler_identity(name):
    X = catalog.spaces()[name]
    if not X.singular_strata:
        return
    for lo in range(-1, 3):
        for hi in range(lo, 4):
            a, b = const(X, lo), const(X, hi)
            step = step_ih_betti(X, a, b)
            assert step.euler_characteristic() == (
                ih_betti(X, b).euler_characteristic() - ih_betti(X, a).euler_characteristic()
            )


def test_step_sequence_is_exact():
    # lower -> upper -> step -> lower[+1] must be rank-feasible
    from strata.gysin import les_feasible

    X = catalog.get("susp_hopf").B
    for lo in range(-1, 3):
        for hi in range(lo, 4):
            a, b = const(X, lo), const(X, hi)
            L, U, S = ih_betti(X, a), ih_betti(X, b), step_ih_betti(X, a, b)
            dims = [d for i in range(X.dimension + 2) for d in (L[i], U[i], S[i])]
            assert les_feasible(dims).feasible, (lo, hi)


def test_step_isomorphism_on_product_with_cone():
    action = catalog.get("interval_cone_hopf")
    B = action.B
    q = Perversity.of({"star": 3})
    e, chi = Perversity.of({"star": 2}), Perversity.of({"star": 1})
    link_b = action.links["star"].B
    assert step_ih_betti(B, q - e, q - chi)[2] == ih_betti(link_b, Perversity())[2] == 1


# -- oracle comparisons ----------------------------------------------------------

small_spaces = {
    "cone_c4": cone_stratified(manifold_space(C4)),
    "cone_oct": CONE_OCT,
    "susp_oct": suspension_stratified(manifold_space(OCT)),
    "weighted_s3": catalog.get("weighted_hopf_2").X,
    "weighted_s2": catalog.get("weighted_hopf_2").B,
    "circle_x_cone_c4": product_stratified(C4, cone_stratified(manifold_space(C4))),
}


@pytest.mark.parametrize("name", sorted(small_spaces))
def test_ih_matches_dense_oracle(name):
    X = small_spaces[name]
    data = strata_data(X)
    for k in range(-2, 3):
        q = const(X, k)
        assert ih_betti(X, q) == dense_ih(X.complex.facets, data, q.as_dict()), k


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([(0,), (6,), (0, 2), (4, 5), (6, 7), (1, 3)]), st.integers(-2, 3))
def test_random_point_strata_on_s3(points, k):
    # pairwise non-adjacent vertices of the suspended octahedron as point strata
    K = catalog.suspension(OCT)
    X = StratifiedSpace.build(K, [SimplicialComplex([(v,) for v in points])], names={f"p{v}": [(v,)] for v in points})
    q = const(X, k)
    assert ih_betti(X, q) == dense_ih(K.facets, strata_data(X), q.as_dict())
