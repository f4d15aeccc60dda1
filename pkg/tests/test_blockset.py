from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pyradesign.blockset import (
    Block,
    Design,
    Permutation,
    dual_design,
    intersect_count,
    is_isomorphic,
    sym_diff,
    validate_symmetric_design,
)
from pyradesign.corpus import non_pg_specimen, relabeled
from pyradesign.errors import DesignError, DimensionError
from pyradesign.geometry import pg_design


def blk(*pts, v=7):
    return Block.of(pts, v)


def test_sym_diff_examples():
    assert sym_diff(blk(0, 1, 2), blk(1, 2, 3)) == blk(0, 3)
    a = blk(2, 5)
    assert sym_diff(a, a) == blk()
    assert sym_diff(blk(3, 4, 5, 6), blk(0, 1, 3, 4)) == blk(0, 1, 5, 6)


def test_intersect_count_examples():
    assert intersect_count(blk(0, 1, 3, 4), blk(0, 2, 3, 5)) == 2
    assert intersect_count(blk(1, 4), blk()) == 0
    assert intersect_count(blk(1, 3, 5, 7, v=8), blk(1, 3, 5, 7, v=8)) == 4


def test_mismatched_width_is_rejected():
    with pytest.raises(DimensionError):
        sym_diff(blk(0, v=7), blk(0, v=8))
    with pytest.raises(DimensionError):
        intersect_count(blk(0, v=7), blk(0, v=8))


def test_block_out_of_range():
    with pytest.raises(DimensionError):
        Block.of([7], 7)


masks = st.integers(min_value=0, max_value=(1 << 15) - 1)


@given(masks, masks, masks)
def test_sym_diff_is_a_group_law(a, b, c):
    A, Bk, C = (Block(x, 15) for x in (a, b, c))
    assert sym_diff(A, Bk) == sym_diff(Bk, A)
    assert sym_diff(sym_diff(A, Bk), C) == sym_diff(A, sym_diff(Bk, C))
    assert sym_diff(A, sym_diff(A, Bk)) == Bk


@given(masks, masks)
def test_intersection_inclusion_exclusion(a, b):
    A, Bk = Block(a, 15), Block(b, 15)
    assert len(sym_diff(A, Bk)) == len(A) + len(Bk) - 2 * intersect_count(A, Bk)


def test_validate_d7(D7):
    rep = validate_symmetric_design(D7)
    assert rep.ok
    assert rep.parameters == (7, 4, 2)


def test_validate_smallest():
    rep = validate_symmetric_design(Design.from_blocks(3, [(0, 1), (0, 2), (1, 2)]))
    assert rep.ok and rep.parameters == (3, 2, 1)


def test_validate_reports_witness_pair(D7):
    blocks = [b for b in D7.block_points() if b != [0, 1, 5, 6]] + [[0, 1, 2, 5]]
    rep = validate_symmetric_design(Design.from_blocks(7, blocks))
    assert not rep.ok
    assert any("intersection" in e and "blocks (" in e for e in rep.errors)


def test_canonical_order_is_independent_of_input_order(D7):
    shuffled = Design.from_blocks(7, list(reversed(D7.block_points())))
    assert shuffled == D7


def test_duplicate_blocks_rejected():
    with pytest.raises(DesignError):
        Design.from_blocks(3, [(0, 1), (0, 1), (1, 2)])


def test_dual_of_d7_is_a_742_design(D7):
    assert validate_symmetric_design(dual_design(D7)).parameters == (7, 4, 2)


def test_permutation_composition_is_left_to_right():
    a = Permutation.from_cycles(4, [(0, 1)])
    b = Permutation.from_cycles(4, [(1, 2)])
    # (a*b)(x) = b(a(x))
    assert (a * b)(0) == 2
    assert (a * a).is_identity()
    assert (a * b).inverse() == b.inverse() * a.inverse()
    assert repr(Permutation.from_cycles(7, [(3, 6), (4, 5)])) == "Permutation(3 6)(4 5)"


def test_isomorphism_d7_vs_pg3(D7):
    g = is_isomorphic(D7, pg_design(3))
    assert g is not None
    assert D7.permuted(g) == pg_design(3)


def test_isomorphism_identity(pg4):
    g = is_isomorphic(pg4, pg4)
    assert g is not None and pg4.permuted(g) == pg4


def test_isomorphism_recovers_relabelling(pg4):
    other = relabeled(pg4, 11)
    g = is_isomorphic(pg4, other)
    assert pg4.permuted(g) == other
    assert is_isomorphic(pg4, other, refine=False) is not None


def test_non_pg_design_is_not_isomorphic_to_pg(pg4):
    specimen = non_pg_specimen()
    assert validate_symmetric_design(specimen).parameters == (15, 8, 4)
    assert is_isomorphic(pg4, specimen) is None
