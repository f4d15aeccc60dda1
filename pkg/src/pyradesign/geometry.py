"""Subsets of an n-set as points of PG(n-1, 2), the subgeometry of 2m-subsets,
and cliques of its collinearity graph."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Iterator

from .blockset import Block, Design, bits_of, mask_of
from .errors import GeometryError, ResourceError

DEFAULT_VERTEX_BUDGET = 10_000


@dataclass(frozen=True)
class GeometryParams:
    """Points are the ``2m``-subsets of an ``n``-set; lines need ``3m <= n``."""

    n: int
    m: int

    def __post_init__(self):
        if self.n < 3 or self.m < 1:
            raise GeometryError(f"need n >= 3 and m >= 1, got n={self.n}, m={self.m}")

    @property
    def point_size(self) -> int:
        return 2 * self.m

    @property
    def has_lines(self) -> bool:
        return 3 * self.m <= self.n

    @property
    def vertex_count(self) -> int:
        return comb(self.n, 2 * self.m)


def pg_hyperplane_complement_design(r: int) -> Design:
    """Points and hyperplane complements of PG(r-1, 2).

    Point ``i`` is the nonzero vector with integer value ``i + 1``; the block
    of the functional ``a`` holds the points on which ``a`` evaluates to 1.
    """
    if r < 2:
        raise GeometryError(f"rank must be at least 2, got {r}")
    v = (1 << r) - 1
    blocks = []
    for a in range(1, v + 1):
        blocks.append(mask_of(i for i in range(v) if (a & (i + 1)).bit_count() & 1))
    return Design.from_blocks(v, blocks)


# short alias used throughout the tests and CLI
pg_design = pg_hyperplane_complement_design


def collinear(x: Block, y: Block, m: int) -> bool:
    if len(x) != 2 * m or len(y) != 2 * m:
        raise GeometryError(f"points must have {2 * m} elements")
    if x.v != y.v:
        raise GeometryError("points from different ambient sets")
    if x == y:
        raise GeometryError("collinearity is defined for distinct points")
    return (x.bits & y.bits).bit_count() == m


def line_through(x: Block, y: Block) -> tuple[Block, Block, Block]:
    if x.v != y.v or x == y or len(x) != len(y) or len(x) % 2:
        raise GeometryError("line_through needs two distinct points of equal even size")
    if (x.bits & y.bits).bit_count() * 2 != len(x):
        raise GeometryError(f"{x} and {y} are not collinear")
    return (x, y, Block(x.bits ^ y.bits, x.v))


def is_singular_subspace(points: Iterable[Block], m: int) -> bool:
    masks = {b.bits if isinstance(b, Block) else b for b in points}
    for b in masks:
        if b.bit_count() != 2 * m:
            raise GeometryError(f"every point must have {2 * m} elements")
    ms = sorted(masks)
    for i, a in enumerate(ms):
        for b in ms[i + 1:]:
            if (a & b).bit_count() != m or (a ^ b) not in masks:
                return False
    return True


# --- collinearity graph and clique search -----------------------------------


def geometry_points(params: GeometryParams) -> list[int]:
    """All ``2m``-subsets as masks, in increasing integer order."""
    return sorted(mask_of(c) for c in combinations(range(params.n), 2 * params.m))


def collinearity_graph(params: GeometryParams) -> tuple[list[int], list[int]]:
    """Vertices and bitset adjacency rows of the collinearity graph."""
    verts = geometry_points(params)
    m = params.m
    adj = [0] * len(verts)
    for i, a in enumerate(verts):
        for j in range(i + 1, len(verts)):
            if (a & verts[j]).bit_count() == m:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return verts, adj


def degeneracy_order(adj: list[int]) -> list[int]:
    """Repeatedly remove a vertex of minimum remaining degree."""
    n = len(adj)
    alive = (1 << n) - 1
    order = []
    for _ in range(n):
        best, best_deg = -1, n + 1
        for v in bits_of(alive):
            d = (adj[v] & alive).bit_count()
            if d < best_deg:
                best, best_deg = v, d
        order.append(best)
        alive &= ~(1 << best)
    return order


def bron_kerbosch_pivot(adj: list[int], min_size: int = 0) -> Iterator[int]:
    """Maximal cliques (as vertex bitsets) via Bron-Kerbosch with pivoting.

    The outer loop follows degeneracy order. Branches that cannot reach
    ``min_size`` vertices are cut.
    """

    def expand(r: int, r_size: int, p: int, x: int):
        if not p and not x:
            if r_size >= min_size:
                yield r
            return
        if r_size + p.bit_count() < min_size:
            return
        pivot = max(bits_of(p | x), key=lambda u: (p & adj[u]).bit_count())
        for v in bits_of(p & ~adj[pivot]):
            yield from expand(r | 1 << v, r_size + 1, p & adj[v], x & adj[v])
            p &= ~(1 << v)
            x |= 1 << v

    later = (1 << len(adj)) - 1
    earlier = 0
    for v in degeneracy_order(adj):
        later &= ~(1 << v)
        yield from expand(1 << v, 1, later & adj[v], earlier & adj[v])
        earlier |= 1 << v


def k_cliques(adj: list[int], k: int) -> Iterator[int]:
    """All cliques with exactly ``k`` vertices, each produced once."""
    order = degeneracy_order(adj)
    rank = {v: i for i, v in enumerate(order)}
    # forward neighbourhoods in degeneracy order
    fwd = [0] * len(adj)
    for v in range(len(adj)):
        for u in bits_of(adj[v]):
            if rank[u] > rank[v]:
                fwd[v] |= 1 << u

    def grow(clique: int, size: int, cand: int):
        if size == k:
            yield clique
            return
        if size + cand.bit_count() < k:
            return
        for v in bits_of(cand):
            yield from grow(clique | 1 << v, size + 1, cand & fwd[v])

    if k <= 0:
        return
    for v in order:
        yield from grow(1 << v, 1, fwd[v])


def enumerate_cliques(
    params: GeometryParams, target_size: int, budget: int = DEFAULT_VERTEX_BUDGET
) -> list[Design]:
    """Every clique of ``target_size`` points in the collinearity graph.

    Each clique is returned as a canonical Design on ``n`` points (its blocks
    are the clique members); the list is sorted by block tuple.
    """
    if params.vertex_count > budget:
        raise ResourceError(
            f"collinearity graph has {params.vertex_count} vertices, over the budget of {budget}"
        )
    if target_size > params.n:
        # no clique exceeds n vertices
        return []
    verts, adj = collinearity_graph(params)
    if target_size == params.n:
        # size-n cliques cannot be extended, so they are exactly the maximal ones of that size
        raw = (c for c in bron_kerbosch_pivot(adj, target_size) if c.bit_count() == target_size)
    else:
        raw = k_cliques(adj, target_size)
    out = [Design.from_blocks(params.n, (verts[i] for i in bits_of(c))) for c in raw]
    out.sort(key=lambda d: d.blocks)
    return out
