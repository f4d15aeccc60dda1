from __future__ import annotations

import pytest

from pyradesign.analysis import center_blocks
from pyradesign.blockset import Permutation, bits_of
from pyradesign.corpus import r5_sums_non_pg_z, r5_sums_pg_z
from pyradesign.errors import DomainError, SearchBudgetExceeded
from pyradesign.geometry import pg_design
from pyradesign.pyramidal import (
    PyramidalCertificate,
    abelian_regular_subgroups,
    alpha_permutation,
    build_group,
    check_normality,
    extract_involution_chain,
    group_closure,
    is_automorphism,
    pyramidal_subgroups,
    stabilizer_search,
    verify_certificate,
    verify_lemma1,
    verify_theorem,
)

from conftest import B

O7 = B(3, 4, 5, 6)
Z7 = B(3, 4, 5)


def cyc(*cycles, v=7):
    return Permutation.from_cycles(v, cycles)


KLEIN = {Permutation.identity(7), cyc((3, 6), (4, 5)), cyc((4, 6), (3, 5)), cyc((5, 6), (3, 4))}


def test_alpha_on_d7(D7):
    a3 = alpha_permutation(D7, O7, Z7, 3)
    assert a3 == cyc((3, 6), (4, 5))
    image = {b: a3.apply_mask(b) for b in D7.blocks}
    assert image[O7] == O7
    assert image[B(0, 1, 3, 4)] == B(0, 1, 5, 6)
    assert image[B(0, 2, 3, 5)] == B(0, 2, 4, 6)
    assert image[B(1, 2, 4, 5)] == B(1, 2, 4, 5)
    assert image[B(1, 2, 3, 6)] == B(1, 2, 3, 6)
    assert alpha_permutation(D7, O7, Z7, 4) == cyc((4, 6), (3, 5))
    assert is_automorphism(D7, a3)


def test_build_group_d7_is_klein(D7):
    cert = build_group(D7, D7.block_index[O7])
    assert cert.element_set() == KLEIN
    assert cert.fixed == B(0, 1, 2)
    assert verify_certificate(D7, cert).ok
    assert verify_lemma1(D7, cert).ok
    assert verify_theorem(D7, cert).ok


def test_build_group_pg4(pg4):
    for o in range(0, 15, 4):
        cert = build_group(pg4, o)
        assert len(cert.elements) == 8
        assert all((g * g).is_identity() for g in cert.elements)
        assert verify_certificate(pg4, cert).ok


def test_build_group_pg5_and_sums():
    pg5 = pg_design(5)
    cert = build_group(pg5, 0)
    assert len(cert.elements) == 16 and verify_theorem(pg5, cert).ok
    for name, D in r5_sums_pg_z()[:2]:
        o = D.block_index[sum(1 << p for p in range(15, 31))]
        cert = build_group(D, o)
        assert verify_theorem(D, cert).ok, name


def test_build_group_refuses_non_pg_component():
    name, D = r5_sums_non_pg_z()[0]
    o = D.block_index[sum(1 << p for p in range(15, 31))]
    with pytest.raises(DomainError):
        build_group(D, o)


def test_certificate_negative_controls(D7):
    cert = build_group(D7, D7.block_index[O7])
    bogus = cyc((3, 4))
    swapped = [g if g != cyc((3, 6), (4, 5)) else bogus for g in cert.elements]
    bad = PyramidalCertificate.from_elements(7, swapped, fixed=cert.fixed)
    rep = verify_certificate(D7, bad)
    assert not rep.ok
    assert any("automorphism" in c.name and not c.passed for c in rep.checks)

    short = PyramidalCertificate.from_elements(7, cert.elements[:-1], fixed=cert.fixed)
    assert not verify_certificate(D7, short).ok


def test_fake_certificate_on_non_block(D7):
    # regular Klein group on {0,1,2,3}, which is not a block of D7
    g = group_closure([cyc((0, 1), (2, 3)), cyc((0, 2), (1, 3))], 7)
    fake = PyramidalCertificate.from_elements(7, g)
    assert not verify_theorem(D7, fake).ok


def test_involution_chain(D7, pg4):
    cert = build_group(D7, D7.block_index[O7])
    chain = extract_involution_chain(D7, cert)
    assert len(chain.generators) == 2
    assert set(group_closure(chain.generators, 7)) == KLEIN
    assert [m.bit_count() for m in chain.trace_chain] == [2, 1]

    chain4 = extract_involution_chain(pg4, build_group(pg4, 0))
    assert len(chain4.generators) == 3
    assert [m.bit_count() for m in chain4.trace_chain] == [4, 2, 1]


def test_stabilizer_d7(D7):
    assert set(stabilizer_search(D7, B(0, 1, 2))) == KLEIN
    assert stabilizer_search(D7, D7.points) == [Permutation.identity(7)]


def test_stabilizer_pg4_off_a_block(pg4):
    o = pg4.blocks[0]
    stab = stabilizer_search(pg4, pg4.points & ~o)
    cert = build_group(pg4, 0)
    assert cert.element_set() <= set(stab)
    subs = abelian_regular_subgroups(stab, o)
    assert len(subs) == 1 and set(subs[0]) == cert.element_set()


def test_no_pyramidal_group_off_a_non_block(D7):
    assert pyramidal_subgroups(D7, B(0, 1, 2, 3)) == []


def test_stabilizer_budget_reports_partial(pg4):
    with pytest.raises(SearchBudgetExceeded) as exc:
        stabilizer_search(pg4, 0, node_budget=50)
    assert isinstance(exc.value.partial, list)


def test_normality(D7, pg4):
    assert check_normality(D7, D7.block_index[O7]).ok
    assert check_normality(pg4, center_blocks(pg4)[3]).ok


def test_inner_conjugation_is_trivial(pg4):
    group = build_group(pg4, 0).element_set()
    for f in group:
        assert {f.inverse() * g * f for g in group} == group


def test_moved_set_is_the_block(pg4):
    cert = build_group(pg4, 5)
    assert cert.moved == pg4.blocks[5]
    assert sorted(bits_of(cert.fixed)) == sorted(set(range(15)) - set(bits_of(pg4.blocks[5])))
