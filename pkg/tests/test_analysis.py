from __future__ import annotations

import pytest

from pyradesign.analysis import (
    blocks_avoiding,
    blocks_through,
    center_blocks,
    center_points,
    design_line,
    design_line_naive,
    design_lines,
    hadamard_rank,
    is_center_point,
    line_pairs,
    satisfies_pg_criterion,
)
from pyradesign.blockset import Design, is_isomorphic
from pyradesign.corpus import non_pg_specimen, r5_sums_non_pg_z
from pyradesign.errors import DesignError, DomainError
from pyradesign.geometry import pg_design

from conftest import B


def _blocks(D, idx):
    return {D.blocks[i] for i in idx}


def test_blocks_through_d7(D7):
    assert _blocks(D7, blocks_through(D7, 0)) == {B(0, 1, 3, 4), B(0, 1, 5, 6), B(0, 2, 3, 5), B(0, 2, 4, 6)}
    through3 = _blocks(D7, blocks_through(D7, 3))
    assert len(through3) == 4 and B(3, 4, 5, 6) in through3


def test_blocks_through_pg3_has_four_blocks():
    pg3 = pg_design(3)
    assert all(len(blocks_through(pg3, p)) == 4 for p in range(7))


def test_blocks_avoiding(D7):
    assert _blocks(D7, blocks_avoiding(D7, 0)) == {B(3, 4, 5, 6), B(1, 2, 4, 5), B(1, 2, 3, 6)}
    pg3 = pg_design(3)
    avoid = [pg3.blocks[i] for i in blocks_avoiding(pg3, 0)]
    assert len(avoid) == 3
    assert all((a ^ b) in avoid for a in avoid for b in avoid if a != b)


def test_blocks_through_rejects_non_point(D7):
    with pytest.raises(DesignError):
        blocks_through(D7, 7)


def test_design_line_agrees_with_brute_force(D7, pg4):
    for D in (D7, pg4, non_pg_specimen()):
        for p in D.point_list:
            for q in D.point_list:
                if p == q:
                    continue
                line = design_line(D, p, q)
                assert (line.t if line else None) == design_line_naive(D, p, q)


def test_design_line_d7_inside_center_block(D7):
    line = design_line(D7, 3, 4)
    assert line is not None
    assert not D7.columns[3] & D7.columns[4] & D7.columns[line.t]


def test_design_line_needs_distinct_points(D7):
    with pytest.raises(DesignError):
        design_line(D7, 2, 2)


@pytest.mark.parametrize("r", [3, 4, 5])
def test_pg_designs_have_all_lines(r):
    D = pg_design(r)
    assert len(design_lines(D)) == ((1 << r) - 1) * ((1 << r) - 2) // 6


def test_every_point_is_central(D7, pg4):
    assert center_points(D7) == list(range(7))
    assert all(is_center_point(pg4, p) for p in range(15))


def test_line_pairs_partition(pg4):
    pairs = line_pairs(pg4, 0)
    flat = sorted(x for pair in pairs for x in pair)
    assert flat == list(range(1, 15))


def test_line_pairs_refuses_non_center_point():
    specimen = non_pg_specimen()
    bad = next(p for p in specimen.point_list if not is_center_point(specimen, p))
    with pytest.raises(DomainError):
        line_pairs(specimen, bad)


@pytest.mark.parametrize("r", [3, 4, 5])
def test_pg_criterion_on_pg(r):
    assert satisfies_pg_criterion(pg_design(r))


def test_pg_criterion_d7_and_specimen(D7, pg4):
    assert satisfies_pg_criterion(D7)
    specimen = non_pg_specimen()
    assert not satisfies_pg_criterion(specimen)
    assert is_isomorphic(specimen, pg4) is None


def test_pg_criterion_domain():
    with pytest.raises(DomainError):
        satisfies_pg_criterion(Design.from_blocks(7, [(0, 1)]))
    # a valid symmetric design outside the family: the (4,3,2) complete design
    d432 = Design.from_blocks(4, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
    with pytest.raises(DomainError):
        hadamard_rank(d432)


def test_center_blocks(D7):
    assert D7.block_index[B(3, 4, 5, 6)] in center_blocks(D7)
    for r in (3, 4, 5):
        assert len(center_blocks(pg_design(r))) == (1 << r) - 1


def test_center_blocks_of_non_pg_sum_contain_the_constructed_block():
    name, D = r5_sums_non_pg_z()[0]
    o = D.block_index[sum(1 << p for p in range(15, 31))]
    assert o in center_blocks(D)
