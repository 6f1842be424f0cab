from __future__ import annotations

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from oracle import dense_rank
from strata.linalg import Echelon, in_span, kernel_basis, primitive, rank

small = st.integers(min_value=-3, max_value=3)


def dense_rows(draw_rows):
    return [{j: v for j, v in enumerate(r) if v} for r in draw_rows]


matrices = st.integers(1, 6).flatmap(
    lambda ncols: st.lists(st.lists(small, min_size=ncols, max_size=ncols), min_size=0, max_size=7)
)


def test_primitive_scales_fractions_and_content():
    assert primitive({0: Fraction(1, 2), 3: Fraction(-3, 4)}) == {0: 2, 3: -3}
    assert primitive({1: 6, 2: 0, 5: -9}) == {1: 2, 5: -3}


def test_rank_small_cases():
    assert rank([]) == 0
    assert rank([{0: 1}, {0: 2}]) == 1
    assert rank([{0: 1, 1: 1}, {0: 1, 1: -1}, {0: 3, 1: 1}]) == 2


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_rank_matches_dense_oracle(rows):
    assert rank(dense_rows(rows)) == dense_rank(rows)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_kernel_basis_is_a_basis_of_the_kernel(rows):
    columns = dense_rows(rows)
    ker = kernel_basis(columns)
    for vec in ker:
        total: dict = {}
        for j, c in vec.items():
            for k, v in columns[j].items():
                total[k] = total.get(k, 0) + c * v
        assert not any(total.values())
    assert rank(ker) == len(ker)
    ncols_in_span = len(columns)
    assert len(ker) == ncols_in_span - rank(columns)


def test_echelon_tracks_dependencies():
    ech = Echelon(track=True)
    assert ech.insert({0: 1, 1: 2}, label="a") is None
    assert ech.insert({1: 1}, label="b") is None
    combo = ech.insert({0: 2, 1: 5}, label="c")
    assert combo == {"a": 2, "b": 1, "c": -1} or combo == {"a": -2, "b": -1, "c": 1}
    assert ech.contains({0: 1})
    assert in_span([{0: 1, 1: 1}], {0: -2, 1: -2})
    assert not in_span([{0: 1, 1: 1}], {0: 1})
