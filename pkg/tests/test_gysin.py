from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracle import dense_ih, gysin_kernel_dims, strata_data
from strata import catalog
from strata.errors import StrataError
from strata.gysin import (
    ActionModel,
    classify,
    euler_product_test,
    gysin_report,
    gysin_term_dims,
    les_feasible,
    lower_residue_dims,
    stalk_table,
    verify,
)
from strata.ih import ih_betti
from strata.simplicial import BettiTable, homology_betti
from strata.stratification import Perversity, cone_stratified, manifold_space, named_perversity, top_perversity

FREE = Perversity()


def star(k):
    return Perversity.of({"star": k})


def poles(k):
    return Perversity.of({"north": k, "south": k})


# -- classify ---------------------------------------------------------------------


def test_classify_examples():
    assert classify(catalog.get("hopf")).labels == ()
    w = classify(catalog.get("weighted_hopf_2"))
    assert dict(w.labels) == {"c": "mobile"} and w.e.as_dict() == {"c": 0} and w.chi.as_dict() == {"c": 0}
    c = classify(catalog.get("cone_hopf"))
    assert dict(c.labels) == {"star": "perverse"}
    assert c.e.as_dict() == {"star": 2} and c.chi.as_dict() == {"star": 1}


@pytest.mark.parametrize("name", catalog.names())
def test_classify_is_stable_and_ordered(name):
    a = catalog.get(name)
    first = classify(a)
    classify.cache_clear()
    again = classify(a)
    assert first == again
    assert again.chi.le(again.e)
    assert all(v >= 0 for v in again.chi.as_dict().values())


def _cone_hopf_with_flag(flag, link=None):
    h = link or catalog.get("hopf")
    return ActionModel(
        "probe",
        cone_stratified(h.X),
        cone_stratified(h.B),
        {"r0": "r0", "star": "star"},
        isotropy={"star": "fixed"},
        links={"star": h},
        euler_flags={"star": flag},
        shape="cone",
    )


def test_unknown_flag_is_resolved_by_product_test():
    cl = classify(_cone_hopf_with_flag("unknown"))
    assert dict(cl.labels) == {"star": "perverse"}
    assert dict(cl.resolved_flags) == {"star": "nonzero"}


def test_unknown_flag_over_trivial_bundle_is_unresolved():
    with pytest.raises(StrataError) as exc:
        classify(_cone_hopf_with_flag("unknown", catalog.get("free_torus_rotation")))
    assert exc.value.code == "UNRESOLVED_EULER_FLAG"


def test_zero_flag_gives_nonperverse_fixed_stratum():
    cl = classify(_cone_hopf_with_flag("zero"))
    assert dict(cl.labels) == {"star": "fixed-nonperverse"}
    assert cl.e.as_dict() == {"star": 1}


def test_malformed_actions_are_rejected():
    h = catalog.get("hopf")
    with pytest.raises(StrataError) as exc:
        ActionModel("bad", h.X, h.B, {"r0": "nowhere"})
    assert exc.value.code == "INVALID_ACTION"
    with pytest.raises(StrataError) as exc:
        ActionModel("bad", cone_stratified(h.X), cone_stratified(h.B), {"r0": "r0", "star": "star"})
    assert exc.value.code == "INVALID_ACTION"
    with pytest.raises(StrataError):
        ActionModel(
            "bad",
            cone_stratified(h.X),
            cone_stratified(h.B),
            {"r0": "r0", "star": "star"},
            isotropy={"star": "fixed"},
            links={"star": _cone_hopf_with_flag("nonzero")},
        )


# -- euler product test -------------------------------------------------------------


def test_euler_product_examples():
    assert euler_product_test(catalog.get("hopf"), [FREE]) == "nonzero_certified"
    assert euler_product_test(catalog.get("free_torus_rotation")) == "zero_consistent"
    assert euler_product_test(catalog.get("weighted_hopf_2"), [Perversity.of({"c": 0})]) == "nonzero_certified"
    with pytest.raises(StrataError) as exc:
        euler_product_test(catalog.get("cone_hopf"))
    assert exc.value.code == "PERVERSE_PRESENT"


def test_catalog_nonzero_flags_are_certified():
    for name in catalog.names():
        a = catalog.get(name)
        for x, flag in a.euler_flags.items():
            if flag == "nonzero":
                assert euler_product_test(a.links[x]) == "nonzero_certified"


# -- gysin term -----------------------------------------------------------------------


def test_gysin_term_examples():
    assert gysin_term_dims(catalog.get("hopf"), FREE) == (1, 0, 1)
    assert gysin_term_dims(catalog.get("cone_hopf"), star(2)) == (1, 0, 0)
    w = catalog.get("weighted_hopf_2")
    q = Perversity.of({"c": 0})
    assert gysin_term_dims(w, q) == ih_betti(w.B, q)


@pytest.mark.parametrize("name", ["hopf", "weighted_hopf_2", "weighted_hopf_3", "free_torus_rotation"])
def test_gysin_term_without_perverse_strata(name):
    a = catalog.get(name)
    cl = classify(a)
    for k in range(-1, 3):
        q = named_perversity(a.B, k) if a.B.singular_ids else FREE
        assert gysin_term_dims(a, q) == ih_betti(a.B, q - cl.chi)


def test_cone_gysin_rows_follow_the_link():
    a = catalog.get("cone_hopf")
    link_hg = gysin_term_dims(catalog.get("hopf"), FREE)
    for k in range(1, 6):
        hg = gysin_term_dims(a, star(k))
        assert all(hg[i] == link_hg[i] for i in range(k - 1))
        assert all(hg[i] == 0 for i in range(k, 8))


def test_cone_kernel_entry_against_oracle():
    h = catalog.get("hopf")
    x = dense_ih(h.X.complex.facets, {}, {})
    b = dense_ih(h.B.complex.facets, {}, {})
    kernels = gysin_kernel_dims(x, b, b)
    a = catalog.get("cone_hopf")
    for k in range(1, 5):
        assert gysin_term_dims(a, star(k))[k - 1] == kernels[k - 1], k


def test_product_shape_transports_the_base():
    a = catalog.get("interval_cone_hopf")
    for k in range(0, 5):
        assert gysin_term_dims(a, star(k)) == gysin_term_dims(a.base, star(k))


def test_no_closed_form():
    a = catalog.get("cone_hopf")
    odd = ActionModel(
        "odd", a.X, a.B, a.stratum_map, isotropy=a.isotropy, links=a.links, euler_flags=a.euler_flags, shape=None
    )
    with pytest.raises(StrataError) as exc:
        gysin_term_dims(odd, star(2))
    assert exc.value.code == "NO_CLOSED_FORM"


# -- stalks and residues ----------------------------------------------------------


def test_stalk_examples():
    a = catalog.get("cone_hopf")
    assert stalk_table(a, star(2), "star") == ()
    assert stalk_table(a, star(3), "star") == (0, 0, 1)
    z = _cone_hopf_with_flag("zero")
    with pytest.raises(StrataError) as exc:
        stalk_table(z, star(3), "star")
    assert exc.value.code == "NOT_PERVERSE"
    with pytest.raises(StrataError) as exc:
        stalk_table(catalog.get("weighted_hopf_2"), Perversity.of({"c": 0}), "c")
    assert exc.value.code == "NOT_PERVERSE"


def stalk_oracle(k: int) -> tuple:
    """Stalk at a point with free Hopf link, from dense tables and exactness.

    The link's lower residue vanishes (free link), so only the degree
    ``k - 1`` kernel of the link's Gysin connecting map survives.
    """
    h = catalog.get("hopf")
    x = dense_ih(h.X.complex.facets, {}, {})
    b = dense_ih(h.B.complex.facets, {}, {})
    kernels = gysin_kernel_dims(x, b, b)
    out = [0] * max(k, 1)
    if k >= 1:
        out[k - 1] = kernels[k - 1]
    return tuple(out)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_stalks_match_oracle(k):
    assert stalk_table(catalog.get("cone_hopf"), star(k), "star") == stalk_oracle(k)
    assert stalk_table(catalog.get("susp_hopf"), poles(k), "north") == stalk_oracle(k)


def test_lower_residue_examples():
    assert lower_residue_dims(catalog.get("weighted_hopf_2"), Perversity.of({"c": 0})) == ()
    assert lower_residue_dims(catalog.get("susp_hopf"), poles(3)) == (0, 0, 2)
    assert lower_residue_dims(catalog.get("cone_hopf"), star(3)) == (0, 0, 1)
    assert lower_residue_dims(catalog.get("cone_hopf"), star(2)) == ()


@pytest.mark.parametrize("name", ["hopf", "weighted_hopf_2", "free_torus_rotation"])
def test_residue_vanishes_without_perverse_strata(name):
    a = catalog.get(name)
    for k in range(-1, 3):
        q = named_perversity(a.B, k) if a.B.singular_ids else FREE
        assert lower_residue_dims(a, q) == ()


def test_residue_of_nonexceptional_action():
    # a cone whose link already has a perverse vertex
    inner = catalog.get("cone_hopf")
    outer = ActionModel(
        "cone_cone_hopf",
        cone_stratified(inner.X, "apex2"),
        cone_stratified(inner.B, "apex2"),
        {"r0": "r0", "star": "star", "apex2": "apex2"},
        isotropy={"star": "fixed", "apex2": "fixed"},
        links={"apex2": inner},
        euler_flags={"star": "nonzero", "apex2": "nonzero"},
        shape="cone",
    )
    with pytest.raises(StrataError) as exc:
        lower_residue_dims(outer, Perversity.of({"star": 3, "apex2": 3}))
    assert exc.value.code == "NONEXCEPTIONAL"


# -- sequences ---------------------------------------------------------------------


def test_les_examples():
    zero = les_feasible([0, 0, 0])
    assert zero.feasible and set(zero.ranks) == {0}
    r = les_feasible([0, 1, 1, 0])
    assert r.feasible and r.ranks[1] == 1
    bad = les_feasible([0, 1, 0, 1, 0])
    assert not bad.feasible and bad.first_violation == 3 and bad.ranks[2] == -1


def test_les_patterns():
    rep = les_feasible(((1, 0, 0, 1), (1, 0, 1), (1, 0, 1)), "gysin")
    assert rep.feasible
    assert rep.labels[:6] == ("H^0_q(B)", "H^0_q(X)", "HG^-1", "H^1_q(B)", "H^1_q(X)", "HG^0")
    assert rep.kernel_out("HG^0") == 0 and rep.kernel_out("HG^2") == 1
    low = les_feasible(((1, 0, 0), (1, 0, 1), (0, 0, 1)), "lower_approximation")
    assert low.feasible and low.labels[:3] == ("H^0_(q-e)(B)", "HG^0", "Resder^0")


exact_sequences = st.lists(st.integers(0, 3), min_size=1, max_size=12)


@settings(max_examples=200, deadline=None)
@given(exact_sequences)
def test_sequences_built_from_ranks_are_feasible(ranks):
    # d_j = r_{j-1} + r_j with r_{-1} = r_last = 0 is exact by construction
    rs = list(ranks) + [0]
    dims = [rs[j] + (rs[j - 1] if j else 0) for j in range(len(rs))]
    rep = les_feasible(dims)
    assert rep.feasible
    assert rep.alternating_sum() == 0
    assert list(rep.ranks[: len(rs)]) == rs


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 3), max_size=12))
def test_feasible_implies_zero_alternating_sum(dims):
    rep = les_feasible(dims)
    if rep.feasible:
        assert rep.alternating_sum() == 0
        assert all(r >= 0 for r in rep.ranks)
    else:
        assert rep.ranks[rep.first_violation - 1] < 0


# -- verify --------------------------------------------------------------------------


def test_verify_examples():
    assert verify(catalog.get("hopf"), FREE).verdict == "PASS"
    assert verify(catalog.get("susp_hopf"), poles(3)).verdict == "PASS"
    bad = verify(catalog.get("hopf"), FREE, overrides={"ih_B": (1, 0, 2)})
    assert bad.verdict == "FAIL"
    witness = bad.gysin.to_dict()["first_violation"]
    assert witness == {"position": 8, "label": "H^2_q(X)", "rank": -1}


def test_verify_flags_theorem_range():
    a = catalog.get("cone_hopf")
    t = top_perversity(a.X)["star"]
    assert verify(a, star(t)).in_theorem_range
    assert not verify(a, star(t + 1)).in_theorem_range


def test_verify_report_is_thread_independent(monkeypatch):
    a = catalog.get("susp_hopf")
    monkeypatch.setenv("STRATA_THREADS", "1")
    one = verify(a, poles(3)).to_dict()
    monkeypatch.setenv("STRATA_THREADS", "4")
    many = verify(a, poles(3)).to_dict()
    assert one == many


def test_corrupted_residue_fails_lower_sequence():
    rep = verify(catalog.get("cone_hopf"), star(3), overrides={"Resder": (0, 0, 0)})
    assert rep.verdict == "FAIL"
    assert not rep.lower.feasible or not all(c.ok for c in rep.checks)


def test_stalk_index_fixed_by_dense_tables():
    # with ih_X and ih_B taken from the dense oracle, only the degree q-1
    # placement of the cone_hopf residue is consistent; q-2 is rejected
    a = catalog.get("cone_hopf")
    q = star(3)
    dense = {
        "ih_X": dense_ih(a.X.complex.facets, strata_data(a.X), a.x_perversity(q).as_dict()),
        "ih_B": dense_ih(a.B.complex.facets, strata_data(a.B), q.as_dict()),
    }
    assert verify(a, q, overrides={**dense, "Resder": (0, 0, 1)}).verdict == "PASS"
    assert verify(a, q, overrides={**dense, "Resder": (0, 1, 0)}).verdict == "FAIL"


def test_unknown_override_is_rejected():
    with pytest.raises(ValueError):
        verify(catalog.get("hopf"), FREE, overrides={"nope": (1,)})


def test_interval_product_matches_base_tables():
    a = catalog.get("interval_cone_hopf")
    for k in (1, 2, 3):
        top = verify(a, star(k))
        base = verify(a.base, star(k))
        assert top.passed and base.passed
        for name in ("ih_X", "ih_B", "HG", "Resder", "step"):
            assert top.table(name) == base.table(name), (k, name)


def test_stalk_product_with_sphere():
    # H(S) ⊗ stalk: a perverse point contributes the stalk once
    assert homology_betti(catalog.get("susp_hopf").B.stratum("north").closure()).convolve(
        stalk_table(catalog.get("susp_hopf"), poles(3), "north")
    ) == BettiTable((0, 0, 1))


def test_gysin_report_on_link():
    rep = gysin_report(catalog.get("hopf"), FREE)
    assert rep.feasible and rep.kernel_out("HG^1") == 0
