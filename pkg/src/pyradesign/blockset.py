"""Bit-vector blocks, the Design model, validation, duality and isomorphism.

A block is stored as a Python ``int`` whose bit ``i`` is set when point ``i``
belongs to it. :class:`Block` wraps that integer together with the point count
for the public API; the heavier algorithms work on the raw integers.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property, lru_cache, total_ordering
from typing import Iterable, Iterator, Sequence

from .errors import DesignError, DimensionError, SearchBudgetExceeded


def bits_of(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(points: Iterable[int]) -> int:
    mask = 0
    for p in points:
        if p < 0:
            raise DesignError(f"negative point index {p}")
        mask |= 1 << p
    return mask


def full_mask(v: int) -> int:
    return (1 << v) - 1


@total_ordering
@dataclass(frozen=True)
class Block:
    """A subset of ``{0, ..., v-1}`` as a fixed-width bit vector."""

    bits: int
    v: int

    def __post_init__(self):
        if self.v <= 0:
            raise DimensionError(f"point count must be positive, got {self.v}")
        if self.bits < 0 or self.bits >> self.v:
            raise DimensionError(f"block bits {self.bits:#x} exceed width {self.v}")

    @classmethod
    def of(cls, points: Iterable[int], v: int) -> Block:
        return cls(mask_of(points), v)

    def points(self) -> tuple[int, ...]:
        return tuple(bits_of(self.bits))

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, p: int) -> bool:
        return 0 <= p < self.v and bool(self.bits >> p & 1)

    def __iter__(self):
        return bits_of(self.bits)

    def __lt__(self, other: Block) -> bool:
        return (self.bits, self.v) < (other.bits, other.v)

    def __repr__(self) -> str:
        return f"Block({set(self.points()) or '{}'}, v={self.v})"


def _check_width(a: Block, b: Block) -> None:
    if a.v != b.v:
        raise DimensionError(f"blocks on {a.v} and {b.v} points cannot be combined")


def sym_diff(a: Block, b: Block) -> Block:
    _check_width(a, b)
    return Block(a.bits ^ b.bits, a.v)


def intersect_count(a: Block, b: Block) -> int:
    _check_width(a, b)
    return (a.bits & b.bits).bit_count()


def _as_mask(block, v: int | None = None) -> int:
    if isinstance(block, Block):
        if v is not None and block.v != v:
            raise DimensionError(f"block has width {block.v}, expected {v}")
        return block.bits
    if isinstance(block, int):
        return block
    return mask_of(block)


@dataclass(frozen=True)
class Design:
    """Point count plus a canonical (sorted, duplicate-free) tuple of block masks.

    ``points`` is the mask of the point set. It defaults to all of
    ``0..v-1``; component designs produced by decomposition live on a proper
    subset of the ambient points and keep their original labels.
    """

    v: int
    blocks: tuple[int, ...]
    points: int = field(default=-1)

    def __post_init__(self):
        if self.v <= 0:
            raise DesignError(f"point count must be positive, got {self.v}")
        if self.points == -1:
            object.__setattr__(self, "points", full_mask(self.v))
        if self.points >> self.v:
            raise DesignError("point set exceeds the declared width")
        object.__setattr__(self, "blocks", tuple(self.blocks))
        prev = -1
        for i, b in enumerate(self.blocks):
            if b <= 0:
                raise DesignError(f"block {i} is empty")
            if b & ~self.points:
                stray = next(bits_of(b & ~self.points))
                raise DesignError(f"block {i} contains point {stray} outside the point set")
            if b <= prev:
                kind = "duplicate" if b == prev else "out of canonical order"
                raise DesignError(f"block {i} is {kind}")
            prev = b

    @classmethod
    def from_blocks(cls, v: int, blocks: Iterable, points: Iterable[int] | int | None = None) -> Design:
        """Canonicalize ``blocks`` (Blocks, masks or point lists) into a Design."""
        masks = [_as_mask(b, v) for b in blocks]
        if len(set(masks)) != len(masks):
            dup = next(m for m, c in Counter(masks).items() if c > 1)
            raise DesignError(f"duplicate block {sorted(bits_of(dup))}")
        if points is None:
            pts = -1
        elif isinstance(points, int):
            pts = points
        else:
            pts = mask_of(points)
        return cls(v, tuple(sorted(masks)), pts)

    @cached_property
    def point_list(self) -> tuple[int, ...]:
        return tuple(bits_of(self.points))

    @property
    def n_points(self) -> int:
        return self.points.bit_count()

    @property
    def is_full(self) -> bool:
        return self.points == full_mask(self.v)

    def block(self, i: int) -> Block:
        return Block(self.blocks[i], self.v)

    def block_points(self) -> list[list[int]]:
        return [list(bits_of(b)) for b in self.blocks]

    @cached_property
    def columns(self) -> dict[int, int]:
        """Map each point to the mask of block indices containing it."""
        cols = {p: 0 for p in self.point_list}
        for i, b in enumerate(self.blocks):
            for p in bits_of(b):
                cols[p] |= 1 << i
        return cols

    @cached_property
    def block_index(self) -> dict[int, int]:
        return {b: i for i, b in enumerate(self.blocks)}

    def compact(self) -> Design:
        """Relabel the point set to ``0..n-1`` preserving the order of labels."""
        if self.is_full:
            return self
        relabel = {p: i for i, p in enumerate(self.point_list)}
        return Design.from_blocks(
            len(relabel), ([relabel[p] for p in bits_of(b)] for b in self.blocks)
        )

    def permuted(self, perm: Permutation) -> Design:
        if perm.v != self.v:
            raise DimensionError(f"permutation on {perm.v} points applied to design on {self.v}")
        return Design.from_blocks(
            self.v, (perm.apply_mask(b) for b in self.blocks), perm.apply_mask(self.points)
        )

    def __repr__(self) -> str:
        return f"Design(v={self.v}, blocks={self.block_points()})"


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``0..v-1`` given by its image array.

    Products compose left to right: ``(a * b)(x) == b(a(x))``.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if sorted(self.images) != list(range(len(self.images))):
            raise DesignError(f"not a permutation: {list(self.images)}")

    @classmethod
    def identity(cls, v: int) -> Permutation:
        return cls(tuple(range(v)))

    @classmethod
    def from_cycles(cls, v: int, cycles: Iterable[Sequence[int]]) -> Permutation:
        images = list(range(v))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                images[a] = b
        return cls(tuple(images))

    @property
    def v(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: Permutation) -> Permutation:
        if other.v != self.v:
            raise DimensionError("permutations on different point counts")
        return Permutation(tuple(other.images[i] for i in self.images))

    def inverse(self) -> Permutation:
        inv = [0] * self.v
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def apply_mask(self, mask: int) -> int:
        images = self.images
        out = 0
        while mask:
            low = mask & -mask
            out |= 1 << images[low.bit_length() - 1]
            mask ^= low
        return out

    def apply(self, block: Block) -> Block:
        if block.v != self.v:
            raise DimensionError("block and permutation widths differ")
        return Block(self.apply_mask(block.bits), self.v)

    def support(self) -> int:
        return mask_of(i for i, j in enumerate(self.images) if i != j)

    def cycles(self) -> list[tuple[int, ...]]:
        """Non-trivial cycles, each starting at its smallest point."""
        seen = set()
        out = []
        for start in range(self.v):
            if start in seen or self.images[start] == start:
                continue
            cyc = [start]
            seen.add(start)
            x = self.images[start]
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self.images[x]
            out.append(tuple(cyc))
        return out

    def __repr__(self) -> str:
        cyc = self.cycles()
        body = "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"
        return f"Permutation{body}"


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    v: int
    block_size: int | None
    lam: int | None
    errors: tuple[str, ...] = ()

    @property
    def parameters(self) -> tuple[int, int | None, int | None]:
        return (self.v, self.block_size, self.lam)


@lru_cache(maxsize=8192)
def validate_symmetric_design(design: Design) -> ValidationReport:
    """Check that ``design`` is a symmetric (v, k, lambda)-design.

    The report carries the triple actually observed. Each kind of failure is
    listed once with the first witness found.
    """
    v = design.n_points
    blocks = design.blocks
    errors: list[str] = []
    if len(blocks) != v:
        errors.append(f"block count {len(blocks)} differs from point count {v}")
    sizes = Counter(b.bit_count() for b in blocks)
    block_size = None
    if sizes:
        block_size = sizes.most_common(1)[0][0]
        if len(sizes) > 1:
            bad = next(i for i, b in enumerate(blocks) if b.bit_count() != block_size)
            errors.append(
                f"non-uniform block size: block {bad} has {blocks[bad].bit_count()} points,"
                f" block {blocks.index(next(b for b in blocks if b.bit_count() == block_size))}"
                f" has {block_size}"
            )
    lam = None
    witness = {}
    for i in range(len(blocks)):
        for j in range(i + 1, len(blocks)):
            c = (blocks[i] & blocks[j]).bit_count()
            witness.setdefault(c, (i, j))
    if witness:
        lam = min(witness, key=lambda c: witness[c])
        if len(witness) > 1:
            other = next(c for c in witness if c != lam)
            (i0, j0), (i1, j1) = witness[lam], witness[other]
            errors.append(
                f"non-constant pairwise intersection: blocks ({i0},{j0}) meet in {lam},"
                f" blocks ({i1},{j1}) meet in {other}"
            )
    if not errors and blocks:
        cols = design.columns
        for p in design.point_list:
            if cols[p].bit_count() != block_size:
                errors.append(f"point {p} lies in {cols[p].bit_count()} blocks, expected {block_size}")
                break
        else:
            pts = design.point_list
            for a in range(len(pts)):
                for b in range(a + 1, len(pts)):
                    c = (cols[pts[a]] & cols[pts[b]]).bit_count()
                    if c != lam:
                        errors.append(f"points ({pts[a]},{pts[b]}) lie together in {c} blocks, expected {lam}")
                        break
                if errors:
                    break
    return ValidationReport(not errors, v, block_size, lam, tuple(errors))


def require_valid(design: Design) -> ValidationReport:
    rep = validate_symmetric_design(design)
    if not rep.ok:
        raise DesignError("not a symmetric design: " + "; ".join(rep.errors))
    return rep


def dual_design(design: Design) -> Design:
    """Design whose points are the block indices and whose blocks are the point columns."""
    require_valid(design)
    return Design.from_blocks(len(design.blocks), design.columns.values())


# --- isomorphism search -----------------------------------------------------


def _refine(cells, c1: int, c2: int):
    """Split aligned block cells by membership of the new point and its image.

    Returns ``None`` when a cell would split unevenly, meaning the partial map
    cannot extend to a block-preserving bijection.
    """
    out = []
    for a, b in cells:
        a1 = a & c1
        b1 = b & c2
        if a1.bit_count() != b1.bit_count():
            return None
        if a1:
            out.append((a1, b1))
        a0 = a ^ a1
        if a0:
            out.append((a0, b ^ b1))
    return out


class PointMapSearch:
    """Backtracking over point maps that send block traces to block traces.

    After points ``x_1..x_j`` are mapped, blocks on both sides are grouped by
    their membership pattern on the mapped points; a partial map survives only
    if matching groups have equal sizes. Once every point is mapped the groups
    are single blocks, so a surviving full map is a design isomorphism.
    """

    def __init__(
        self,
        d1: Design,
        d2: Design,
        allowed: dict[int, int],
        order: Sequence[int] | None = None,
        node_budget: int | None = None,
        deadline: float | None = None,
    ):
        self.cols1 = d1.columns
        self.cols2 = d2.columns
        self.allowed = allowed
        self.order = list(order) if order is not None else list(d1.point_list)
        self.node_budget = node_budget
        self.deadline = deadline
        self.nodes = 0
        self.full1 = full_mask(len(d1.blocks))
        self.full2 = full_mask(len(d2.blocks))

    def run(self, find_all: bool) -> list[dict[int, int]]:
        found: list[dict[int, int]] = []
        if len(self.cols1) != len(self.cols2) or self.full1 != self.full2:
            return found
        assign: dict[int, int] = {}
        order = self.order

        def extend(depth: int, cells, used: int) -> bool:
            self.nodes += 1
            if self.node_budget is not None and self.nodes > self.node_budget:
                raise SearchBudgetExceeded(f"node budget {self.node_budget} exhausted", found)
            if self.deadline is not None and (self.nodes & 255) == 0 and time.monotonic() > self.deadline:
                raise SearchBudgetExceeded("time budget exhausted", found)
            if depth == len(order):
                found.append(dict(assign))
                return not find_all
            x = order[depth]
            c1 = self.cols1[x]
            for y in bits_of(self.allowed[x] & ~used):
                nxt = _refine(cells, c1, self.cols2[y])
                if nxt is None:
                    continue
                assign[x] = y
                if extend(depth + 1, nxt, used | (1 << y)):
                    return True
                del assign[x]
            return False

        extend(0, [(self.full1, self.full2)], 0)
        return found


def point_profiles(design: Design) -> dict[int, tuple]:
    """Isomorphism-invariant label for each point.

    For point ``p`` this is the sorted multiset, over ``q != p``, of the sorted
    counts of blocks through ``p``, ``q`` and each third point ``t``.
    """
    cols = design.columns
    pts = design.point_list
    out = {}
    for p in pts:
        cp = cols[p]
        rows = []
        for q in pts:
            if q == p:
                continue
            cpq = cp & cols[q]
            rows.append(tuple(sorted((cpq & cols[t]).bit_count() for t in pts if t != p and t != q)))
        out[p] = tuple(sorted(rows))
    return out


def is_isomorphic(d1: Design, d2: Design, refine: bool = True) -> Permutation | None:
    """Return a point bijection carrying the blocks of ``d1`` onto those of ``d2``.

    Designs on a proper subset of their ambient points are compacted first, so
    the witness is a permutation of ``0..n-1`` in compacted labels.

    With ``refine`` (the default) points are first classed by
    :func:`point_profiles`; differing profile multisets prove non-isomorphism
    without search. ``refine=False`` runs the bare trace-pruned backtracking.
    """
    require_valid(d1)
    require_valid(d2)
    a, b = d1.compact(), d2.compact()
    if a.v != b.v or len(a.blocks) != len(b.blocks):
        return None
    if Counter(x.bit_count() for x in a.blocks) != Counter(x.bit_count() for x in b.blocks):
        return None
    everything = full_mask(b.v)
    if refine:
        pa, pb = point_profiles(a), point_profiles(b)
        if Counter(pa.values()) != Counter(pb.values()):
            return None
        classes: dict[tuple, int] = {}
        for q, prof in pb.items():
            classes[prof] = classes.get(prof, 0) | 1 << q
        allowed = {p: classes[pa[p]] for p in a.point_list}
        # rarest profile first keeps the top of the tree narrow
        order = sorted(a.point_list, key=lambda p: (classes[pa[p]].bit_count(), p))
    else:
        allowed = {p: everything for p in a.point_list}
        order = None
    maps = PointMapSearch(a, b, allowed, order).run(find_all=False)
    if not maps:
        return None
    perm = Permutation(tuple(maps[0][i] for i in range(a.v)))
    if a.permuted(perm) != b:
        raise AssertionError("isomorphism witness failed apply-and-compare")
    return perm
