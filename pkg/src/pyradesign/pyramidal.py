"""Elementary abelian groups fixing the complement of a center block, their
certificates, and the checks that tie a given pyramidal group back to them."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .analysis import center_blocks, hadamard_rank, line_pairs, satisfies_pg_criterion
from .blockset import Design, Permutation, PointMapSearch, bits_of, full_mask
from .decomposition import _mask, check_prop_Z, decompose
from .errors import DesignError, DomainError, InvariantViolation, SearchBudgetExceeded
from .report import CheckReport


def _sorted_elements(elems: Iterable[Permutation]) -> tuple[Permutation, ...]:
    return tuple(sorted(set(elems), key=lambda g: g.images))


def group_closure(generators: Iterable[Permutation], v: int) -> tuple[Permutation, ...]:
    gens = list(generators)
    ident = Permutation.identity(v)
    elems = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = g * s
                if h not in elems:
                    elems.add(h)
                    nxt.append(h)
        frontier = nxt
    return _sorted_elements(elems)


def is_automorphism(design: Design, g: Permutation) -> bool:
    index = design.block_index
    return all(g.apply_mask(b) in index for b in design.blocks)


@dataclass(frozen=True)
class PyramidalCertificate:
    """A group claimed to fix ``fixed`` pointwise and act sharply transitively
    on the other points. ``orbit_witness[(a, b)]`` is the index of the element
    sending ``a`` to ``b``."""

    v: int
    fixed: int
    elements: tuple[Permutation, ...]
    orbit_witness: dict[tuple[int, int], int] = field(compare=False, hash=False, default_factory=dict)

    @classmethod
    def from_elements(cls, v: int, elements: Iterable[Permutation], fixed: int | None = None) -> PyramidalCertificate:
        elems = _sorted_elements(elements)
        if fixed is None:
            moved = 0
            for g in elems:
                moved |= g.support()
            fixed = full_mask(v) & ~moved
        moved = full_mask(v) & ~fixed
        witness = {}
        for idx, g in enumerate(elems):
            for a in bits_of(moved):
                witness.setdefault((a, g(a)), idx)
        return cls(v, fixed, elems, witness)

    @property
    def moved(self) -> int:
        return full_mask(self.v) & ~self.fixed

    def element_set(self) -> frozenset[Permutation]:
        return frozenset(self.elements)


@dataclass(frozen=True)
class InvolutionChain:
    generators: tuple[Permutation, ...]
    trace_chain: tuple[int, ...]
    subgroup_sizes: tuple[int, ...]


# --- the groups built from center blocks ------------------------------------


def _o_index(design: Design, O) -> int:
    o = _mask(O)
    try:
        return design.block_index[o]
    except KeyError:
        raise DesignError(f"{sorted(bits_of(o))} is not a block") from None


def alpha_permutation(design: Design, O, Z, p: int) -> Permutation:
    """Involution swapping ``p`` with the point of ``O`` outside ``Z`` and each
    pair completing a line through ``p`` in the ``Z`` component."""
    o, z = _mask(O), _mask(Z)
    w = decompose(design, _o_index(design, o), z)
    if not z >> p & 1:
        raise DesignError(f"point {p} is not in Z")
    if not satisfies_pg_criterion(w.design_z):
        raise DomainError("the Z component does not satisfy the PG criterion")
    return _alpha_from_component(design, w.design_z, w.p_prime, p)


def _alpha_from_component(design: Design, design_z: Design, p_prime: int, p: int) -> Permutation:
    images = list(range(design.v))
    images[p], images[p_prime] = p_prime, p
    for q, t in line_pairs(design_z, p):
        images[q], images[t] = t, q
    g = Permutation(tuple(images))
    if not is_automorphism(design, g):
        raise InvariantViolation(f"alpha_{p} is not an automorphism of the design")
    return g


def alphas(design: Design, o_index: int, z: int) -> dict[int, Permutation]:
    w = decompose(design, o_index, z)
    if not satisfies_pg_criterion(w.design_z):
        raise DomainError("the Z component does not satisfy the PG criterion")
    return {p: _alpha_from_component(design, w.design_z, w.p_prime, p) for p in bits_of(z)}


def default_z(o: int) -> int:
    """``O`` without its largest point."""
    return o & ~(1 << (o.bit_length() - 1))


@lru_cache(maxsize=8192)
def build_group(design: Design, o_index: int) -> PyramidalCertificate:
    """The group generated by the alpha involutions of a center block.

    Refused (``DomainError``) unless every Z component satisfies the PG
    criterion. The group is rebuilt from a second ``Z`` and compared.
    Results are cached; certificates are immutable.
    """
    r = hadamard_rank(design)
    verdict = check_prop_Z(design, o_index)
    if not verdict.all_pg:
        raise DomainError("Z components are not PG-type; no such group exists for this block")
    o = design.blocks[o_index]
    z1 = default_z(o)
    z2 = o & ~(o & -o)
    elems = group_closure(alphas(design, o_index, z1).values(), design.v)
    if len(elems) != 1 << (r - 1):
        raise InvariantViolation(f"closure has {len(elems)} elements, expected {1 << (r - 1)}")
    other = group_closure(alphas(design, o_index, z2).values(), design.v)
    if set(other) != set(elems):
        raise InvariantViolation("groups built from two choices of Z differ")
    return PyramidalCertificate.from_elements(design.v, elems, full_mask(design.v) & ~o)


# --- verification -----------------------------------------------------------


def verify_certificate(design: Design, cert: PyramidalCertificate) -> CheckReport:
    rep = CheckReport("certificate")
    v = design.v
    elems = list(cert.elements)
    moved = cert.moved
    widths_ok = cert.v == v and all(g.v == v for g in elems)
    rep.add("widths match design", widths_ok, None if widths_ok else f"design has {v} points")
    if not widths_ok:
        return rep
    ident = Permutation.identity(v)
    rep.add("identity present", ident in elems)
    eset = set(elems)
    rep.add("no repeated elements", len(eset) == len(elems))
    bad = None
    index = design.block_index
    for k, g in enumerate(elems):
        for b in design.blocks:
            if g.apply_mask(b) not in index:
                bad = f"element {k} sends block {sorted(bits_of(b))} to a non-block"
                break
        if bad:
            break
    rep.add("elements are automorphisms", bad is None, bad)
    miss = next(((i, j) for i, g in enumerate(elems) for j, h in enumerate(elems) if g * h not in eset), None)
    rep.add("closed under composition", miss is None, None if miss is None else f"elements {miss}")
    noinv = next((i for i, g in enumerate(elems) if g.inverse() not in eset), None)
    rep.add("closed under inverses", noinv is None, noinv)
    noncomm = next(((i, j) for i, g in enumerate(elems) for j, h in enumerate(elems) if j > i and g * h != h * g), None)
    rep.add("abelian", noncomm is None, noncomm)
    moves_fixed = next((k for k, g in enumerate(elems) if any(g(f) != f for f in bits_of(cert.fixed))), None)
    rep.add("fixes the fixed set pointwise", moves_fixed is None, moves_fixed)
    n_moved = moved.bit_count()
    rep.add("order equals number of moved points", len(elems) == n_moved, f"{len(elems)} vs {n_moved}")
    rep.add(
        "fixed set has (v-1)/2 points",
        cert.fixed.bit_count() * 2 + 1 == v,
        cert.fixed.bit_count(),
    )
    sharp = None
    for a in bits_of(moved):
        for b in bits_of(moved):
            hits = [k for k, g in enumerate(elems) if g(a) == b]
            if len(hits) != 1:
                sharp = f"{len(hits)} elements send {a} to {b}"
                break
            if cert.orbit_witness and cert.orbit_witness.get((a, b)) != hits[0]:
                sharp = f"orbit witness for ({a},{b}) is wrong"
                break
        if sharp:
            break
    rep.add("sharply transitive on moved points", sharp is None, sharp)
    return rep


def verify_lemma1(design: Design, cert: PyramidalCertificate) -> CheckReport:
    rep = CheckReport("center block")
    o = cert.moved
    is_block = o in design.block_index
    rep.add("moved set is a block", is_block, sorted(bits_of(o)))
    if not is_block:
        rep.add("moved set is a center block", False, "not a block")
        rep.add("each element fixes or swaps B and O^B", False, "not a block")
        return rep
    o_index = design.block_index[o]
    rep.add("moved set is a center block", o_index in center_blocks(design))
    bad = None
    for k, g in enumerate(cert.elements):
        for b in design.blocks:
            if b == o:
                continue
            img = g.apply_mask(b)
            if img != b and img != o ^ b:
                bad = f"element {k} sends {sorted(bits_of(b))} to {sorted(bits_of(img))}"
                break
        if bad:
            break
    rep.add("each element fixes or swaps B and O^B", bad is None, bad)
    return rep


def trace_family(design: Design, o: int) -> list[int]:
    """Half-size intersections of blocks with ``o``."""
    half = o.bit_count() // 2
    return sorted({b & o for b in design.blocks if (b & o).bit_count() == half})


def extract_involution_chain(design: Design, cert: PyramidalCertificate) -> InvolutionChain:
    """Split the group into a chain of index-2 subgroups, one involution per step.

    At each level a trace halves the current set ``Y``; the elements swapping
    the halves either include an involution or two of them have equal squares,
    and their quotient is one. The involution then transposes some trace, which
    cuts ``Y`` in half for the next level.
    """
    o = cert.moved
    v = design.v
    group = list(cert.elements)
    n = len(group)
    if n < 2 or n & (n - 1):
        raise InvariantViolation(f"group order {n} is not a power of two")
    levels = n.bit_length() - 1
    traces = trace_family(design, o)
    y_cur = o
    g_cur = group
    gens: list[Permutation] = []
    chain: list[int] = []
    sizes: list[int] = []
    for level in range(levels):
        half = y_cur.bit_count() // 2
        split = next((y for y in traces if (y & y_cur).bit_count() == half), None)
        if split is None:
            raise InvariantViolation(f"no trace halves the level-{level} set")
        s = y_cur & split
        gammas = [g for g in g_cur if g.apply_mask(s) != s]
        if 2 * len(gammas) != len(g_cur):
            raise InvariantViolation("elements moving a half are not half the subgroup")
        beta = next((g for g in gammas if (g * g).is_identity()), None)
        if beta is None:
            squares: dict[Permutation, Permutation] = {}
            for g in gammas:
                sq = g * g
                if sq in squares:
                    beta = g * squares[sq].inverse()
                    break
                squares[sq] = g
        if beta is None or beta.is_identity() or not (beta * beta).is_identity() or beta not in g_cur:
            raise InvariantViolation(f"no involution found at level {level}")
        o_minus = [y for y in traces if beta.apply_mask(y) == o & ~y]
        y_next = next((y_cur & y for y in o_minus if (y_cur & y).bit_count() == half), None)
        if y_next is None:
            raise InvariantViolation(f"involution at level {level} transposes no trace cutting the set")
        g_next = [g for g in g_cur if g.apply_mask(y_next) == y_next]
        if 2 * len(g_next) != len(g_cur) or set(group_closure(g_next + [beta], v)) != set(g_cur):
            raise InvariantViolation(f"level {level} subgroup does not have index two")
        gens.append(beta)
        chain.append(y_next)
        sizes.append(len(g_next))
        y_cur, g_cur = y_next, g_next
    if set(group_closure(gens, v)) != set(group):
        raise InvariantViolation("the involutions do not generate the group")
    for i, b in enumerate(gens):
        if b in group_closure(gens[i + 1:], v):
            raise InvariantViolation(f"generator {i} lies in the span of the later ones")
    return InvolutionChain(tuple(gens), tuple(chain), tuple(sizes))


def verify_theorem(design: Design, cert: PyramidalCertificate) -> CheckReport:
    """Check that a pyramidal abelian group is the alpha group of its moved set."""
    rep = CheckReport("classification")
    pre = verify_certificate(design, cert)
    rep.add("certificate valid", pre.ok, "; ".join(c.name for c in pre.failures()) or None)
    lem = verify_lemma1(design, cert)
    rep.extend(lem, "lemma: ")
    if not (pre.ok and lem.ok):
        rep.add("Z components are PG-type", False, "skipped: moved set is not a center block")
        return rep
    o = cert.moved
    o_index = design.block_index[o]
    try:
        verdict = check_prop_Z(design, o_index)
    except InvariantViolation as exc:
        rep.add("Z components are PG-type", False, str(exc))
        return rep
    rep.add("Z components are PG-type", verdict.all_pg, verdict.verdict)
    if not verdict.all_pg:
        return rep
    built = build_group(design, o_index)
    rep.add("group equals the alpha group", built.element_set() == cert.element_set())
    z = default_z(o)
    p_prime = o.bit_length() - 1
    al = alphas(design, o_index, z)
    mismatch = None
    for p, a in al.items():
        eps = [g for g in cert.elements if g(p) == p_prime]
        if eps != [a]:
            mismatch = p
            break
    rep.add("element swapping p and p' is alpha_p", mismatch is None, mismatch)
    return rep


# --- exhaustive searches ----------------------------------------------------


def automorphism_search(
    design: Design,
    allowed: dict[int, int],
    order: Sequence[int],
    node_budget: int | None = None,
    time_budget: float | None = None,
) -> list[Permutation]:
    deadline = None if time_budget is None else time.monotonic() + time_budget
    search = PointMapSearch(design, design, allowed, order, node_budget, deadline)
    try:
        maps = search.run(find_all=True)
    except SearchBudgetExceeded as exc:
        exc.partial = [_perm(m, design.v) for m in exc.partial]
        raise
    return [_perm(m, design.v) for m in maps]


def _perm(m: dict[int, int], v: int) -> Permutation:
    return Permutation(tuple(m.get(i, i) for i in range(v)))


def stabilizer_search(
    design: Design,
    F,
    node_budget: int | None = None,
    time_budget: float | None = None,
) -> list[Permutation]:
    """All automorphisms fixing every point of ``F``, sorted by image array.

    On budget exhaustion :class:`SearchBudgetExceeded` is raised with the
    automorphisms found so far in ``partial``.
    """
    f = _mask(F) & design.points
    moved = design.points & ~f
    allowed = {p: 1 << p for p in bits_of(f)}
    allowed.update({p: moved for p in bits_of(moved)})
    order = list(bits_of(f)) + list(bits_of(moved))
    found = automorphism_search(design, allowed, order, node_budget, time_budget)
    return sorted(found, key=lambda g: g.images)


def abelian_regular_subgroups(elements: Sequence[Permutation], moved: int) -> list[tuple[Permutation, ...]]:
    """Abelian subgroups of ``elements`` acting sharply transitively on ``moved``.

    One element per image of a base point is chosen, keeping the choices
    pairwise commuting and their products consistent with earlier choices.
    """
    pts = list(bits_of(moved))
    if not pts:
        return []
    v = elements[0].v
    base = pts[0]
    ident = Permutation.identity(v)
    by_image = {b: [g for g in elements if g(base) == b] for b in pts}
    if ident not in by_image[base]:
        return []
    out = []
    chosen: dict[int, Permutation] = {base: ident}

    def consistent(g: Permutation) -> bool:
        for h in chosen.values():
            gh = g * h
            if gh != h * g:
                return False
            prior = chosen.get(gh(base))
            if prior is not None and prior != gh:
                return False
        return True

    def grow(i: int):
        if i == len(pts):
            group = set(chosen.values())
            if all(g * h in group for g in group for h in group):
                out.append(_sorted_elements(group))
            return
        b = pts[i]
        for g in by_image[b]:
            if consistent(g):
                chosen[b] = g
                grow(i + 1)
                del chosen[b]

    grow(1)
    return out


def pyramidal_subgroups(
    design: Design, moved, node_budget: int | None = None, time_budget: float | None = None
) -> list[tuple[Permutation, ...]]:
    """Abelian groups fixing the complement of ``moved`` pointwise and regular on ``moved``."""
    m = _mask(moved)
    stab = stabilizer_search(design, design.points & ~m, node_budget, time_budget)
    return abelian_regular_subgroups(stab, m)


def o_preserving_automorphisms(
    design: Design, o_index: int, node_budget: int | None = None, time_budget: float | None = None
) -> list[Permutation]:
    o = design.blocks[o_index]
    rest = design.points & ~o
    allowed = {p: o for p in bits_of(o)}
    allowed.update({p: rest for p in bits_of(rest)})
    order = list(bits_of(rest)) + list(bits_of(o))
    return automorphism_search(design, allowed, order, node_budget, time_budget)


def check_normality(
    design: Design, o_index: int, node_budget: int | None = None, time_budget: float | None = None
) -> CheckReport:
    """Conjugate the alpha group by every automorphism preserving block ``O``."""
    rep = CheckReport("normality")
    cert = build_group(design, o_index)
    group = cert.element_set()
    try:
        ambient = o_preserving_automorphisms(design, o_index, node_budget, time_budget)
        complete = True
    except SearchBudgetExceeded as exc:
        ambient = exc.partial
        complete = False
    rep.add("automorphism search complete", complete, f"{len(ambient)} O-preserving automorphisms")
    bad = None
    for f in ambient:
        finv = f.inverse()
        conj = {finv * g * f for g in group}
        if conj != group:
            bad = repr(f)
            break
    rep.add("conjugation leaves the group invariant", bad is None, bad)
    return rep
