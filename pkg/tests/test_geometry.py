from __future__ import annotations

from itertools import combinations

import pytest

from pyradesign.blockset import Block, bits_of, validate_symmetric_design
from pyradesign.corpus import d7
from pyradesign.errors import GeometryError, ResourceError
from pyradesign.geometry import (
    GeometryParams,
    collinear,
    enumerate_cliques,
    is_singular_subspace,
    line_through,
    pg_design,
)


def blk(*pts, v=8):
    return Block.of(pts, v)


def test_rank_two_is_the_triangle():
    assert [sorted(bits_of(b)) for b in pg_design(2).blocks] == [[0, 1], [0, 2], [1, 2]]


def test_functional_one_block():
    # functional a=1 picks the odd vectors 1,3,5,7, i.e. points 0,2,4,6
    assert sum(1 << p for p in (0, 2, 4, 6)) in pg_design(3).blocks


@pytest.mark.parametrize("r", [2, 3, 4, 5, 6])
def test_pg_parameters(r):
    rep = validate_symmetric_design(pg_design(r))
    assert rep.parameters == ((1 << r) - 1, 1 << (r - 1), 1 << (r - 2))


def test_collinear_examples():
    assert collinear(blk(0, 1, 2, 3), blk(0, 1, 4, 5), 2)
    assert not collinear(blk(0, 1, 2, 3), blk(0, 1, 2, 4), 2)
    assert not collinear(blk(0, 1, 2, 3), blk(4, 5, 6, 7), 2)


def test_line_through():
    line = line_through(blk(0, 1, 2, 3), blk(0, 1, 4, 5))
    assert line[2] == blk(2, 3, 4, 5)
    x, y = Block.of((3, 4, 5, 6), 7), Block.of((0, 1, 3, 4), 7)
    third = line_through(x, y)[2]
    assert third.bits in d7().blocks
    with pytest.raises(GeometryError):
        line_through(blk(0, 1, 2, 3), blk(0, 1, 2, 4))


def test_singular_subspace():
    pg3 = pg_design(3)
    assert is_singular_subspace([Block(b, 7) for b in pg3.blocks], 2)
    assert is_singular_subspace([Block(pg3.blocks[0], 7)], 2)
    D = d7()
    o = sum(1 << p for p in (3, 4, 5, 6))
    rest = [Block(b, 7) for b in D.blocks if b != o]
    assert not is_singular_subspace(rest[1:] + [Block(o, 7)], 2)


def test_thirty_cliques_at_rank_three():
    cliques = enumerate_cliques(GeometryParams(7, 2), 7)
    assert len(cliques) == 30
    assert len(set(cliques)) == 30
    for c in cliques:
        assert validate_symmetric_design(c).parameters == (7, 4, 2)
        assert is_singular_subspace([Block(b, 7) for b in c.blocks], 2)


def test_fisher_bound():
    assert enumerate_cliques(GeometryParams(7, 2), 8) == []


def test_triangles_are_lines():
    triples = enumerate_cliques(GeometryParams(6, 2), 3)
    assert triples
    for t in triples:
        a, b, c = (Block(x, 6) for x in t.blocks)
        assert line_through(a, b)[2] == c or line_through(a, c)[2] == b


def test_triangle_count_matches_brute_force():
    params = GeometryParams(6, 2)
    pts = [sum(1 << p for p in c) for c in combinations(range(6), 4)]
    brute = sum(
        1
        for a, b, c in combinations(pts, 3)
        if (a & b).bit_count() == 2 and (a & c).bit_count() == 2 and (b & c).bit_count() == 2
    )
    assert len(enumerate_cliques(params, 3)) == brute


def test_vertex_budget_is_enforced():
    with pytest.raises(ResourceError, match="6435"):
        enumerate_cliques(GeometryParams(15, 4), 15, budget=1000)
