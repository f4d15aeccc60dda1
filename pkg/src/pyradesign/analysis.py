"""Lines, center points and center blocks of a symmetric design."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .blockset import Design, bits_of, require_valid, validate_symmetric_design
from .errors import DesignError, DomainError


@dataclass(frozen=True)
class DesignLine:
    """Three points of a design no block contains all of.

    Build these with :func:`design_line`, which checks the defining property.
    """

    p: int
    q: int
    t: int

    def __post_init__(self):
        if len({self.p, self.q, self.t}) != 3:
            raise DesignError(f"line points must be distinct: {self.p}, {self.q}, {self.t}")

    def as_set(self) -> frozenset[int]:
        return frozenset((self.p, self.q, self.t))


def _indices(mask: int) -> frozenset[int]:
    return frozenset(bits_of(mask))


def _check_point(design: Design, p: int) -> None:
    if not (0 <= p < design.v and design.points >> p & 1):
        raise DesignError(f"{p} is not a point of the design")


def blocks_through(design: Design, p: int) -> frozenset[int]:
    _check_point(design, p)
    return _indices(design.columns[p])


def blocks_avoiding(design: Design, p: int) -> frozenset[int]:
    _check_point(design, p)
    everything = (1 << len(design.blocks)) - 1
    return _indices(everything & ~design.columns[p])


def _column_lookup(design: Design) -> dict[int, int]:
    return {c: p for p, c in design.columns.items()}


def design_line(design: Design, p: int, q: int, _lookup: dict[int, int] | None = None) -> DesignLine | None:
    """The line through ``p`` and ``q``, if there is one.

    In the designs of interest the third point ``t`` has as its column the
    symmetric difference of the columns of ``p`` and ``q``, so it is found by
    lookup. The returned ``t`` is rechecked against the defining property.
    """
    if p == q:
        raise DesignError("design_line needs two distinct points")
    _check_point(design, p)
    _check_point(design, q)
    cols = design.columns
    lookup = _lookup if _lookup is not None else _column_lookup(design)
    t = lookup.get(cols[p] ^ cols[q])
    if t is None or t in (p, q):
        return None
    if cols[p] & cols[q] & cols[t]:
        return None
    return DesignLine(p, q, t)


def design_line_naive(design: Design, p: int, q: int) -> int | None:
    """Scan every third point for one sharing no block with ``p`` and ``q``."""
    cols = design.columns
    hits = [t for t in design.point_list if t not in (p, q) and not cols[p] & cols[q] & cols[t]]
    if len(hits) > 1:
        raise AssertionError(f"line through {p},{q} is not unique: {hits}")
    return hits[0] if hits else None


def is_center_point(design: Design, p: int) -> bool:
    lookup = _column_lookup(design)
    return all(design_line(design, p, q, lookup) is not None for q in design.point_list if q != p)


def line_pairs(design: Design, p: int) -> list[tuple[int, int]]:
    """Pairs ``(q, t)`` with ``{p, q, t}`` a line, partitioning the other points.

    Raises :class:`DomainError` if ``p`` is not a center point.
    """
    lookup = _column_lookup(design)
    seen = 0
    pairs = []
    for q in design.point_list:
        if q == p or seen >> q & 1:
            continue
        line = design_line(design, p, q, lookup)
        if line is None:
            raise DomainError(f"point {p} is not collinear with {q}")
        pairs.append((q, line.t))
        seen |= 1 << q | 1 << line.t
    return pairs


def hadamard_rank(design: Design) -> int:
    """``r`` such that the design has parameters (2^r-1, 2^(r-1), 2^(r-2)).

    Raises :class:`DomainError` for anything else.
    """
    rep = validate_symmetric_design(design)
    if not rep.ok:
        raise DomainError("not a symmetric design: " + "; ".join(rep.errors))
    r = (rep.v + 1).bit_length() - 1
    if r < 2 or rep.parameters != ((1 << r) - 1, 1 << (r - 1), 1 << (r - 2)):
        raise DomainError(f"parameters {rep.parameters} are not of the form (2^r-1, 2^(r-1), 2^(r-2))")
    return r


def satisfies_pg_criterion(design: Design) -> bool:
    """True iff every two distinct points lie on a line of the design."""
    hadamard_rank(design)
    lookup = _column_lookup(design)
    pts = design.point_list
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            if design_line(design, p, q, lookup) is None:
                return False
    return True


def center_points(design: Design) -> list[int]:
    return [p for p in design.point_list if is_center_point(design, p)]


def center_blocks(design: Design) -> list[int]:
    """Indices of blocks whose symmetric difference with every other block is a block."""
    return list(_center_blocks(design))


@lru_cache(maxsize=8192)
def _center_blocks(design: Design) -> tuple[int, ...]:
    require_valid(design)
    index = design.block_index
    blocks = design.blocks
    return tuple(
        i
        for i, o in enumerate(blocks)
        if all((o ^ b) in index for j, b in enumerate(blocks) if j != i)
    )


def design_lines(design: Design) -> list[DesignLine]:
    """Every line of the design, each once with ``p < q < t``."""
    lookup = _column_lookup(design)
    out = []
    pts = design.point_list
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            line = design_line(design, p, q, lookup)
            if line is not None and line.t > q:
                out.append(line)
    return out
