"""Exit criteria, grouped into tiers by rank.

Each ``criterion_*`` function returns a :class:`CriterionResult`. The tiers are
cumulative: ``r4`` runs everything ``r3`` does at rank 4 as well, and ``r5``
adds the sampled rank-5 work.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from math import factorial

from . import corpus
from .analysis import center_blocks, satisfies_pg_criterion
from .config import worker_count
from .blockset import Design, bits_of, is_isomorphic, validate_symmetric_design
from .decomposition import check_prop_Z, decompose, transfer_delta
from .errors import DomainError, SearchBudgetExceeded
from .geometry import GeometryParams, enumerate_cliques, geometry_points, is_singular_subspace, pg_design
from .pyramidal import (
    alphas,
    build_group,
    check_normality,
    default_z,
    extract_involution_chain,
    group_closure,
    pyramidal_subgroups,
    stabilizer_search,
    verify_certificate,
    verify_lemma1,
    verify_theorem,
)
from .report import Check, RunReport

TIERS = ("r3", "r4", "r5")
NEGATIVE_SEARCH_SECONDS = 60.0


@dataclass
class CriterionResult:
    number: int
    title: str
    checks: list[Check] = field(default_factory=list)
    seconds: float = 0.0
    limit: float | None = None
    skipped: str | None = None

    def add(self, name: str, passed: bool, witness=None) -> None:
        self.checks.append(Check(name, bool(passed), witness))

    @property
    def within_limit(self) -> bool:
        return self.limit is None or self.seconds < self.limit

    @property
    def passed(self) -> bool:
        return self.skipped is not None or (all(c.passed for c in self.checks) and self.within_limit)

    def line(self) -> str:
        if self.skipped is not None:
            return f"SKIP  criterion {self.number}: {self.title} ({self.skipped})"
        tag = "PASS" if self.passed else "FAIL"
        lim = f" < {self.limit:g}s" if self.limit is not None else ""
        bad = [c.name for c in self.checks if not c.passed]
        tail = f"  failed: {bad}" if bad else ""
        if not self.within_limit:
            tail += "  over time limit"
        return f"{tag}  criterion {self.number}: {self.title} [{self.seconds:.2f}s{lim}]{tail}"


def _rank(tier: str) -> int:
    if tier not in TIERS:
        raise ValueError(f"unknown tier {tier!r}; choose one of {', '.join(TIERS)}")
    return int(tier[1])


def _timed(number: int, title: str, limit: float | None = None):
    def wrap(fn):
        def run(tier: str = "r4") -> CriterionResult:
            res = CriterionResult(number, title, limit=limit)
            t0 = time.perf_counter()
            fn(res, _rank(tier))
            res.seconds = time.perf_counter() - t0
            return res

        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run

    return wrap


def _corpus(rank: int, include_r5: bool = False) -> list[tuple[str, Design]]:
    out = [(f"clique {i}", d) for i, d in enumerate(corpus.r3_cliques())]
    if rank >= 4:
        out += [(f"r4 design {i}", d) for i, d in enumerate(corpus.r4_corpus())]
    if rank >= 5 and include_r5:
        out += list(corpus.r5_corpus())
    return out


@_timed(1, "PG constructor parameters for r = 3..6", limit=1.0)
def criterion_1(res: CriterionResult, rank: int) -> None:
    for r in (3, 4, 5, 6):
        rep = validate_symmetric_design(pg_design(r))
        want = ((1 << r) - 1, 1 << (r - 1), 1 << (r - 2))
        res.add(f"r={r} is a {want}-design", rep.ok and rep.parameters == want, rep.parameters)


@_timed(2, "PG criterion agrees with isomorphism to the PG design")
def criterion_2(res: CriterionResult, rank: int) -> None:
    pgs = {r: pg_design(r) for r in (3, 4, 5)}
    disagree = []
    counts = {"pg": 0, "non-pg": 0}
    for name, d in _corpus(rank, include_r5=True):
        r = (d.v + 1).bit_length() - 1
        crit = satisfies_pg_criterion(d)
        iso = is_isomorphic(d, pgs[r]) is not None
        counts["pg" if crit else "non-pg"] += 1
        if crit != iso:
            disagree.append(name)
    res.add("refined isomorphism search agrees", not disagree, disagree[:5] or counts)
    # the bare backtracking route, without point-profile refinement
    bare = [(n, d) for n, d in _corpus(3)]
    if rank >= 4:
        bare += [(f"r4 design {i}", d) for i, d in list(enumerate(corpus.r4_corpus()))[::210]]
    bad = [n for n, d in bare if satisfies_pg_criterion(d) != (is_isomorphic(d, pgs[(d.v + 1).bit_length() - 1], refine=False) is not None)]
    res.add("bare isomorphism search agrees", not bad, bad[:5] or f"{len(bare)} designs")


def naive_cliques(n: int, m: int, size: int) -> list[frozenset[frozenset[int]]]:
    """Plain recursive extension over sorted subset lists, no bitsets."""
    pts = [frozenset(c) for c in combinations(range(n), 2 * m)]
    pts.sort(key=sorted)
    out = []

    def grow(clique: list[int], start: int):
        if len(clique) == size:
            out.append(frozenset(pts[i] for i in clique))
            return
        for j in range(start, len(pts)):
            if all(len(pts[j] & pts[i]) == m for i in clique):
                clique.append(j)
                grow(clique, j + 1)
                clique.pop()

    grow([], 0)
    return out


@_timed(3, "30 maximal cliques at n=7, m=2 and the Fisher bound", limit=5.0)
def criterion_3(res: CriterionResult, rank: int) -> None:
    params = GeometryParams(7, 2)
    cliques = enumerate_cliques(params, 7)
    res.add("exactly 30 cliques of size 7", len(cliques) == 30, len(cliques))
    oracle = naive_cliques(7, 2, 7)
    mine = {frozenset(frozenset(bits_of(b)) for b in d.blocks) for d in cliques}
    res.add("naive enumerator finds the same cliques", mine == set(oracle), len(oracle))
    n_aut = len(stabilizer_search(pg_design(3), 0))
    res.add("7!/|Aut| = 30", n_aut * 30 == factorial(7), f"|Aut| = {n_aut}")
    res.add("each clique is a singular subspace", all(is_singular_subspace(d.blocks, 2) for d in cliques))
    res.add(
        "each clique is a (7,4,2)-design",
        all(validate_symmetric_design(d).parameters == (7, 4, 2) and validate_symmetric_design(d).ok for d in cliques),
    )
    res.add("no clique of size 8", enumerate_cliques(params, 8) == [] and not naive_cliques(7, 2, 8))
    res.add("geometry has 35 points", len(geometry_points(params)) == 35)


@_timed(4, "decomposition round trip and delta transfer")
def criterion_4(res: CriterionResult, rank: int) -> None:
    failures = []
    n_cases = 0
    for name, d in _corpus(rank, include_r5=True):
        for i in center_blocks(d):
            o = d.blocks[i]
            ws = [decompose(d, i, o & ~(1 << p)) for p in bits_of(o)]
            for w in ws:
                n_cases += 1
                if w.reassemble() != d:
                    failures.append((name, i, "sum"))
                # every Z' at rank <= 4, a fixed sample of Z' at rank 5
                targets = ws if d.v <= 15 else ws[:3]
                for w2 in targets:
                    if transfer_delta(w, w2.Z) != w2:
                        failures.append((name, i, "transfer"))
    res.add("sum(decompose(D, O, Z)) == D", not any(f[2] == "sum" for f in failures), f"{n_cases} (D, O, Z) cases")
    res.add("transfer_delta matches fresh decomposition", not any(f[2] == "transfer" for f in failures), failures[:3] or None)


@_timed(5, "group construction, certificates, lemma checks, Z independence", limit=60.0)
def criterion_5(res: CriterionResult, rank: int) -> None:
    cases = [("D7", corpus.d7()), ("pg4", pg_design(4))]
    if rank >= 5:
        cases.append(("pg5", pg_design(5)))
        cases += list(corpus.r5_sums_pg_z())
    for name, d in cases:
        o_index = center_blocks(d)[0]
        if name == "D7":
            o_index = d.block_index[0b1111000]
        elif name.startswith(("pgO", "nonpgO")):
            o_index = d.block_index[corpus.sum_layout(5)[0]]
        cert = build_group(d, o_index)
        o = d.blocks[o_index]
        chain = extract_involution_chain(d, cert)
        z1, z2 = default_z(o), o & ~(o & -o)
        g1 = set(group_closure(alphas(d, o_index, z1).values(), d.v))
        g2 = set(group_closure(alphas(d, o_index, z2).values(), d.v))
        ok = (
            verify_certificate(d, cert).ok
            and verify_lemma1(d, cert).ok
            and len(chain.generators) == (d.v + 1).bit_length() - 2
            and g1 == g2 == cert.element_set()
        )
        res.add(f"{name}: certificate, lemma, chain, Z independence", ok, f"|G|={len(cert.elements)}")


def _sweep_one(name: str, d, four_subsets: bool):
    centers = set(center_blocks(d))
    if four_subsets:
        sets = [sum(1 << p for p in c) for c in combinations(d.point_list, 4)]
    else:
        sets = list(d.blocks)
    bad = []
    positives = 0
    for o in sets:
        subs = pyramidal_subgroups(d, o)
        i = d.block_index.get(o)
        predicted = i is not None and i in centers and check_prop_Z(d, i).all_pg
        if bool(subs) != predicted or len(subs) > 1:
            bad.append((name, sorted(bits_of(o)), len(subs)))
            continue
        if subs:
            positives += 1
            cert = build_group(d, i)
            if set(subs[0]) != cert.element_set() or not verify_theorem(d, cert).ok:
                bad.append((name, sorted(bits_of(o)), "differs from the alpha group"))
    return bad, positives


def _theorem_sweep(designs, four_subsets: bool = False):
    """Count disagreements between the search and the center-block prediction.

    Runs across ``worker_count()`` processes; results are merged in input order.
    """
    names = [n for n, _ in designs]
    ds = [d for _, d in designs]
    flags = [four_subsets] * len(ds)
    workers = worker_count()
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_sweep_one, names, ds, flags, chunksize=max(1, len(ds) // (4 * workers))))
    else:
        results = list(map(_sweep_one, names, ds, flags))
    bad = [b for r in results for b in r[0]]
    return bad, sum(r[1] for r in results)


@_timed(6, "pyramidal abelian groups exist exactly for PG-type center blocks", limit=300.0)
def criterion_6(res: CriterionResult, rank: int) -> None:
    r3 = [(f"clique {i}", d) for i, d in enumerate(corpus.r3_cliques())]
    bad, pos = _theorem_sweep(r3)
    res.add("r=3, every block of every design", not bad, bad[:3] or f"{pos} pyramidal blocks")
    bad, pos = _theorem_sweep(r3, four_subsets=True)
    res.add("r=3, every 4-subset as moved set", not bad, bad[:3] or f"{pos} pyramidal sets")
    if rank >= 4:
        r4 = [(f"r4 design {i}", d) for i, d in enumerate(corpus.r4_corpus())]
        bad, pos = _theorem_sweep(r4)
        res.add("r=4, every block of every design", not bad, bad[:3] or f"{pos} pyramidal blocks")


@_timed(7, "no pyramidal abelian group when the Z component is not PG-type (r=5)")
def criterion_7(res: CriterionResult, rank: int) -> None:
    if rank < 5:
        res.skipped = "runs in tier r5"
        return
    specimen = corpus.non_pg_specimen()
    res.add("non-PG (15,8,4) specimen found at r=4", not satisfies_pg_criterion(specimen), "lexicographically first delta")
    o = corpus.sum_layout(5)[0]
    for name, d in corpus.r5_sums_non_pg_z():
        i = d.block_index[o]
        try:
            build_group(d, i)
            refused = False
        except DomainError:
            refused = True
        res.add(f"{name}: construction refused", refused)
        try:
            subs = pyramidal_subgroups(d, o, time_budget=NEGATIVE_SEARCH_SECONDS)
            res.add(f"{name}: complete search finds no group", not subs, f"{len(subs)} found")
        except SearchBudgetExceeded as exc:
            res.add(f"{name}: complete search finds no group", False, f"budget exhausted, {len(exc.partial)} partial")


@_timed(8, "alpha group is normal among O-preserving automorphisms")
def criterion_8(res: CriterionResult, rank: int) -> None:
    cases = []
    for i, d in enumerate(corpus.r3_cliques()):
        cases += [(f"clique {i}", d, j) for j in center_blocks(d) if check_prop_Z(d, j).all_pg]
    if rank >= 4:
        pg4 = pg_design(4)
        cases += [("pg4", pg4, j) for j in range(15)]
        for k, d in list(enumerate(corpus.r4_corpus()))[1::50]:
            cases += [(f"r4 design {k}", d, j) for j in center_blocks(d) if check_prop_Z(d, j).all_pg]
    bad = []
    for name, d, j in cases:
        rep = check_normality(d, j)
        if not rep.ok:
            bad.append((name, j))
    res.add("conjugation preserves the group", not bad, bad[:3] or f"{len(cases)} (design, block) pairs")


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8)


def run_acceptance_suite(tier: str) -> RunReport:
    _rank(tier)
    report = RunReport(f"accept {tier}")
    for crit in CRITERIA:
        res = crit(tier)
        report.timing[f"criterion {res.number}"] = round(res.seconds * 1000)
        if res.skipped is not None:
            report.skip(f"criterion {res.number}: {res.title}", res.skipped)
            continue
        for c in res.checks:
            report.add(f"criterion {res.number}: {c.name}", c.passed, c.witness)
        if res.limit is not None:
            report.add(
                f"criterion {res.number}: runtime under {res.limit:g}s",
                res.within_limit,
                f"{res.seconds:.2f}s",
            )
    return report
