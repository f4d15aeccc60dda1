"""Reference designs used by the acceptance suite, tests and CLI examples.

Everything here is deterministic: fixed point layouts, lexicographic delta
enumeration at r = 4 and seeded deltas at r = 5.
"""

from __future__ import annotations

import random
from functools import lru_cache

from .analysis import satisfies_pg_criterion
from .blockset import Design, Permutation, full_mask
from .decomposition import delta_search, relabel_onto, sum_construction
from .geometry import GeometryParams, enumerate_cliques, pg_design

D7_BLOCKS = (
    (3, 4, 5, 6),
    (0, 1, 3, 4),
    (0, 1, 5, 6),
    (0, 2, 3, 5),
    (0, 2, 4, 6),
    (1, 2, 4, 5),
    (1, 2, 3, 6),
)


def d7() -> Design:
    """The (7,4,2) design with center block {3,4,5,6} used in the examples."""
    return Design.from_blocks(7, D7_BLOCKS)


@lru_cache(maxsize=None)
def r3_cliques() -> tuple[Design, ...]:
    return tuple(enumerate_cliques(GeometryParams(7, 2), 7))


def sum_layout(r: int) -> tuple[int, int, list[int], list[int]]:
    """Center block on the top ``2^(r-1)`` points, Z without the very last point.

    Returns ``(O, Z, points of O^c, points of Z)``.
    """
    v = (1 << r) - 1
    half = (1 << (r - 1)) - 1
    o = full_mask(v) & ~full_mask(half)
    z = o & ~(1 << (v - 1))
    return o, z, list(range(half)), list(range(half, v - 1))


def sum_of(design_o: Design, design_z: Design, delta) -> Design:
    r = (design_o.v + 1).bit_length()
    o, z, o_pts, z_pts = sum_layout(r)
    v = (1 << r) - 1
    return sum_construction(o, relabel_onto(design_o, o_pts, v), z, relabel_onto(design_z, z_pts, v), delta)


def r4_components():
    """``(design_o, design_z, O, Z)`` with both components the (7,4,2) PG design."""
    o, z, o_pts, z_pts = sum_layout(4)
    pg3 = pg_design(3)
    return relabel_onto(pg3, o_pts, 15), relabel_onto(pg3, z_pts, 15), o, z


@lru_cache(maxsize=None)
def r4_sums() -> tuple[Design, ...]:
    """Sum designs for all 7! deltas, in lexicographic delta order."""
    d_o, d_z, o, z = r4_components()
    return tuple(sum_construction(o, d_o, z, d_z, d) for d in delta_search(d_o, d_z, o, z, lambda _: True))


@lru_cache(maxsize=None)
def r4_corpus() -> tuple[Design, ...]:
    out = [pg_design(4)]
    seen = {out[0]}
    for d in r4_sums():
        if d not in seen:
            seen.add(d)
            out.append(d)
    return tuple(out)


@lru_cache(maxsize=None)
def non_pg_specimen() -> Design:
    """First r = 4 sum (lexicographic delta) failing the PG criterion, compacted."""
    d_o, d_z, o, z = r4_components()
    hits = delta_search(d_o, d_z, o, z, lambda d: not satisfies_pg_criterion(d), limit=1)
    if not hits:
        raise LookupError("no non-PG sum exists among the r = 4 deltas")
    return sum_construction(o, d_o, z, d_z, hits[0])


def seeded_delta(n: int, seed: int) -> tuple[tuple[int, int], ...]:
    images = list(range(n))
    random.Random(seed).shuffle(images)
    return tuple(enumerate(images))


@lru_cache(maxsize=None)
def r5_sums_pg_z() -> tuple[tuple[str, Design], ...]:
    """Rank-5 sums whose Z component is the (15,8,4) PG design."""
    pg4 = pg_design(4)
    specimen = non_pg_specimen()
    return (
        ("pgO+pgZ seed 1", sum_of(pg4, pg4, seeded_delta(15, 1))),
        ("pgO+pgZ seed 2", sum_of(pg4, pg4, seeded_delta(15, 2))),
        ("nonpgO+pgZ seed 3", sum_of(specimen, pg4, seeded_delta(15, 3))),
        ("nonpgO+pgZ seed 4", sum_of(specimen, pg4, seeded_delta(15, 4))),
    )


@lru_cache(maxsize=None)
def r5_sums_non_pg_z() -> tuple[tuple[str, Design], ...]:
    pg4 = pg_design(4)
    specimen = non_pg_specimen()
    return (
        ("pgO+nonpgZ seed 5", sum_of(pg4, specimen, seeded_delta(15, 5))),
        ("nonpgO+nonpgZ seed 6", sum_of(specimen, specimen, seeded_delta(15, 6))),
    )


def relabeled(design: Design, seed: int) -> Design:
    images = list(range(design.v))
    random.Random(seed).shuffle(images)
    return design.permuted(Permutation(tuple(images)))


@lru_cache(maxsize=None)
def r5_corpus() -> tuple[tuple[str, Design], ...]:
    pg5 = pg_design(5)
    return (
        (("pg5", pg5), ("pg5 relabeled seed 7", relabeled(pg5, 7)))
        + r5_sums_pg_z()
        + r5_sums_non_pg_z()
    )
