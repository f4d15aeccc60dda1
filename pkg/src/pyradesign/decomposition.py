"""Splitting a design along a center block into two half-size designs and a
block bijection, and the inverse sum construction."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import Callable, Iterable, Mapping, Sequence

from .analysis import center_blocks, hadamard_rank, satisfies_pg_criterion
from .blockset import Block, Design, bits_of, full_mask, validate_symmetric_design
from .errors import DesignError, InvariantViolation, ResourceError

EXHAUSTIVE_DELTA_CEILING = factorial(8)

Delta = tuple[tuple[int, int], ...]


def _mask(x) -> int:
    if isinstance(x, Block):
        return x.bits
    if isinstance(x, int):
        return x
    return sum(1 << p for p in set(x))


@dataclass(frozen=True)
class DecompositionWitness:
    """A design split along center block ``O`` with respect to ``Z``.

    ``design_o`` lives on the complement of ``O`` and ``design_z`` on ``Z``,
    both keeping ambient point labels. ``delta`` pairs the index of each
    block of ``design_o`` with the index of its partner in ``design_z``.
    """

    v: int
    O: int
    Z: int
    p_prime: int
    design_o: Design
    design_z: Design
    delta: Delta

    @property
    def delta_map(self) -> dict[int, int]:
        return dict(self.delta)

    def reassemble(self) -> Design:
        return sum_construction(self.O, self.design_o, self.Z, self.design_z, self.delta)


def _component_params(r: int) -> tuple[int, int, int]:
    return ((1 << (r - 1)) - 1, 1 << (r - 2), 1 << (r - 3))


def _normalize_delta(delta, n: int) -> Delta:
    pairs = sorted(delta.items()) if isinstance(delta, Mapping) else sorted(tuple(p) for p in delta)
    src = [a for a, _ in pairs]
    dst = sorted(b for _, b in pairs)
    if src != list(range(n)) or dst != list(range(n)):
        raise DesignError(f"delta is not a bijection between two lists of {n} blocks: {pairs}")
    return tuple((int(a), int(b)) for a, b in pairs)


def sum_construction(O, design_o: Design, Z, design_z: Design, delta) -> Design:
    """Assemble ``{O} + {X | d(X), X | (O - d(X))}`` over the blocks ``X`` of ``design_o``."""
    o, z = _mask(O), _mask(Z)
    v = design_o.v
    if design_z.v != v:
        raise DesignError("component designs use different ambient widths")
    r = (v + 1).bit_length() - 1
    if v != (1 << r) - 1 or r < 3:
        raise DesignError(f"ambient point count {v} is not 2^r - 1 with r >= 3")
    if o.bit_count() != 1 << (r - 1) or o >> v:
        raise DesignError(f"O must be a {1 << (r - 1)}-subset of the {v} points")
    if z & ~o:
        raise DesignError("Z is not contained in O")
    if z.bit_count() != (1 << (r - 1)) - 1:
        raise DesignError(f"Z must have {(1 << (r - 1)) - 1} points")
    if design_o.points != full_mask(v) & ~o:
        raise DesignError("design_o must live on the complement of O")
    if design_z.points != z:
        raise DesignError("design_z must live on Z")
    want = _component_params(r)
    for name, comp in (("design_o", design_o), ("design_z", design_z)):
        rep = validate_symmetric_design(comp)
        if not rep.ok or rep.parameters != want:
            raise DesignError(f"{name} is not a symmetric {want}-design: {rep.parameters} {rep.errors}")
    pairs = _normalize_delta(delta, len(design_o.blocks))
    blocks = [o]
    for i, j in pairs:
        x, y = design_o.blocks[i], design_z.blocks[j]
        blocks.append(x | y)
        blocks.append(x | (o & ~y))
    return Design.from_blocks(v, blocks)


def _traces(design: Design, o: int) -> dict[int, list[int]]:
    """For each trace ``B - O`` the O-traces of the blocks ``B != O`` above it."""
    above: dict[int, list[int]] = {}
    for b in design.blocks:
        if b == o:
            continue
        above.setdefault(b & ~o, []).append(b & o)
    return above


def decompose(design: Design, o_index: int, Z) -> DecompositionWitness:
    r = hadamard_rank(design)
    if r < 3:
        raise DesignError("decomposition needs rank at least 3")
    if o_index not in center_blocks(design):
        raise DesignError(f"block {o_index} is not a center block")
    o = design.blocks[o_index]
    z = _mask(Z)
    _check_z(o, z, r)
    return _witness_from(design, o, z, r)


def _check_z(o: int, z: int, r: int) -> None:
    if z & ~o:
        raise DesignError("Z is not contained in O")
    if z.bit_count() != (1 << (r - 1)) - 1:
        raise DesignError(f"Z must have {(1 << (r - 1)) - 1} points, got {z.bit_count()}")


def _witness_from(design: Design, o: int, z: int, r: int) -> DecompositionWitness:
    v = design.v
    p_prime = next(bits_of(o & ~z))
    above = _traces(design, o)
    if any(len(ys) != 2 for ys in above.values()):
        raise InvariantViolation("a trace outside O does not occur exactly twice")
    xs = sorted(above)
    chosen = {}
    for x in xs:
        inside = [y for y in above[x] if not y & ~z]
        if len(inside) != 1 or inside[0].bit_count() != 1 << (r - 2):
            raise InvariantViolation(f"cannot pick the Z-trace over {sorted(bits_of(x))}")
        chosen[x] = inside[0]
    design_o = Design.from_blocks(v, xs, full_mask(v) & ~o)
    design_z = Design.from_blocks(v, chosen.values(), z)
    zi = design_z.block_index
    delta = tuple((i, zi[chosen[x]]) for i, x in enumerate(xs))
    return DecompositionWitness(v, o, z, p_prime, design_o, design_z, delta)


def transfer_delta(w: DecompositionWitness, Zprime) -> DecompositionWitness:
    """Witness for another ``Z'`` inside ``O`` using only the old witness.

    Traces inside ``Z & Z'`` are kept; the others are replaced by their
    complement in ``O``.
    """
    o = w.O
    zp = _mask(Zprime)
    r = (w.v + 1).bit_length() - 1
    _check_z(o, zp, r)
    keep = w.Z & zp
    new_y = {}
    for i, j in w.delta:
        y = w.design_z.blocks[j]
        new_y[i] = y if not y & ~keep else o & ~y
    design_z = Design.from_blocks(w.v, new_y.values(), zp)
    zi = design_z.block_index
    delta = tuple((i, zi[new_y[i]]) for i in sorted(new_y))
    return DecompositionWitness(w.v, o, zp, next(bits_of(o & ~zp)), w.design_o, design_z, delta)


@dataclass(frozen=True)
class PropZResult:
    verdict: str  # "all-PG" or "none-PG"
    evidence: tuple[tuple[int, bool], ...]  # (excluded point, component is PG-type)

    @property
    def all_pg(self) -> bool:
        return self.verdict == "all-PG"


@lru_cache(maxsize=8192)
def check_prop_Z(design: Design, o_index: int) -> PropZResult:
    """Test the PG criterion on every ``Z`` component of the center block.

    The verdicts must agree; a split is raised as :class:`InvariantViolation`.
    """
    r = hadamard_rank(design)
    if o_index not in center_blocks(design):
        raise DesignError(f"block {o_index} is not a center block")
    o = design.blocks[o_index]
    evidence = []
    for p in bits_of(o):
        w = _witness_from(design, o, o & ~(1 << p), r)
        evidence.append((p, satisfies_pg_criterion(w.design_z)))
    verdicts = {ok for _, ok in evidence}
    if len(verdicts) != 1:
        raise InvariantViolation(f"Z components disagree on the PG criterion: {evidence}")
    return PropZResult("all-PG" if verdicts.pop() else "none-PG", tuple(evidence))


def delta_search(
    design_o: Design,
    design_z: Design,
    O,
    Z,
    predicate: Callable[[Design], bool],
    mode: str = "auto",
    samples: int = 1000,
    seed: int = 0,
    limit: int | None = None,
) -> list[Delta]:
    """Bijections whose sum design satisfies ``predicate``.

    ``mode="exhaustive"`` walks every bijection in lexicographic order and
    refuses more than 8! of them; ``"sample"`` draws ``samples`` seeded random
    bijections (duplicates dropped, draw order kept); ``"auto"`` picks
    exhaustive when allowed.
    """
    n = len(design_o.blocks)
    total = factorial(n)
    if mode == "auto":
        mode = "exhaustive" if total <= EXHAUSTIVE_DELTA_CEILING else "sample"
    if mode == "exhaustive":
        if total > EXHAUSTIVE_DELTA_CEILING:
            raise ResourceError(f"{n}! = {total} bijections exceeds the exhaustive ceiling of 8!")
        candidates: Iterable[Sequence[int]] = permutations(range(n))
    elif mode == "sample":
        candidates = _sampled_bijections(n, samples, seed)
    else:
        raise ValueError(f"unknown delta_search mode {mode!r}")
    out = []
    for images in candidates:
        delta = tuple(enumerate(images))
        if predicate(sum_construction(O, design_o, Z, design_z, delta)):
            out.append(delta)
            if limit is not None and len(out) >= limit:
                break
    return out


def _sampled_bijections(n: int, samples: int, seed: int):
    rng = random.Random(seed)
    seen = set()
    for _ in range(samples):
        images = list(range(n))
        rng.shuffle(images)
        t = tuple(images)
        if t not in seen:
            seen.add(t)
            yield t


def relabel_onto(design: Design, points: Sequence[int], v: int) -> Design:
    """Copy a full design onto the given ambient points (point ``i`` -> ``points[i]``)."""
    if not design.is_full or len(points) != design.v:
        raise DesignError("relabel_onto needs a full design and one target per point")
    return Design.from_blocks(v, ([points[p] for p in bits_of(b)] for b in design.blocks), points)


def first_delta(n: int) -> Delta:
    return tuple((i, i) for i in range(n))
