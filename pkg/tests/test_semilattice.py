from itertools import permutations

import pytest

from howson.errors import CapExceeded, InvalidSemilattice
from howson.semilattice import (SAut, automorphisms, free_semilattice, leq,
                                subsemilattice_generated, validate_meet_table)

from conftest import chain, d1_lattice


def brute_force_automorphisms(latt):
    """Independent oracle: every permutation that preserves the meet table."""
    out = []
    n = latt.n
    for perm in permutations(range(n)):
        if all(perm[latt.meet[i][j]] == latt.meet[perm[i]][perm[j]]
               for i in range(n) for j in range(n)):
            out.append(perm)
    return sorted(out)


def test_chain_is_valid():
    latt = chain(2)
    assert latt.n == 2 and latt.bottom == 0


def test_d1_is_valid():
    latt = d1_lattice()
    assert latt.bottom == 0
    assert latt.meet_of(1, 2) == 0


def test_non_commutative_table_rejected():
    with pytest.raises(InvalidSemilattice) as err:
        validate_meet_table(["0", "1"], [[0, 0], [1, 1]])
    assert err.value.reason == "not-commutative"


def test_non_idempotent_rejected():
    with pytest.raises(InvalidSemilattice) as err:
        validate_meet_table(["0", "1"], [[1, 0], [0, 1]])
    assert err.value.reason == "not-idempotent"


def test_non_associative_rejected():
    # pairwise-commutative, idempotent, but (a^b)^c != a^(b^c)
    table = [[0, 2, 1, 0],
             [2, 1, 0, 1],
             [1, 0, 2, 2],
             [0, 1, 2, 3]]
    with pytest.raises(InvalidSemilattice) as err:
        validate_meet_table(["a", "b", "c", "t"], table)
    assert err.value.reason == "not-associative"


def test_bad_index_and_duplicate_label():
    with pytest.raises(InvalidSemilattice) as err:
        validate_meet_table(["0", "1"], [[0, 5], [5, 1]])
    assert err.value.reason == "bad-index"
    with pytest.raises(InvalidSemilattice) as err:
        validate_meet_table(["0", "0"], [[0, 0], [0, 1]])
    assert err.value.reason == "duplicate-label"


def test_leq_examples():
    latt = d1_lattice()
    assert leq(latt, 0, 1)
    assert not leq(latt, 1, 2)
    assert leq(latt, 1, 1)


def test_order_is_partial_order():
    for latt in (chain(4), d1_lattice(), free_semilattice(3)):
        n = latt.n
        for i in range(n):
            assert latt.leq(i, i)
            for j in range(n):
                if latt.leq(i, j) and latt.leq(j, i):
                    assert i == j
                for k in range(n):
                    if latt.leq(i, j) and latt.leq(j, k):
                        assert latt.leq(i, k)


def test_unique_minimum():
    for latt in (chain(3), d1_lattice(), free_semilattice(3)):
        minima = [m for m in range(latt.n)
                  if all(latt.leq(m, j) for j in range(latt.n))]
        assert minima == [latt.bottom]


def test_chain_has_only_identity_automorphism():
    assert automorphisms(chain(3)) == [SAut.identity(3)]


def test_d1_automorphisms_match_brute_force():
    latt = d1_lattice()
    auts = automorphisms(latt)
    assert [a.perm for a in auts] == brute_force_automorphisms(latt)
    assert len(auts) == 2
    assert auts[0].is_identity()
    assert auts[1].perm == (0, 2, 1)


def test_three_atom_automorphisms():
    latt = validate_meet_table(
        ["0", "a", "b", "c"],
        [[0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 2, 0], [0, 0, 0, 3]])
    auts = automorphisms(latt)
    assert [a.perm for a in auts] == brute_force_automorphisms(latt)
    assert len(auts) == 6


def test_automorphisms_group_closure():
    for latt in (d1_lattice(), free_semilattice(3)):
        auts = automorphisms(latt)
        as_set = set(auts)
        assert SAut.identity(latt.n) in as_set
        for a in auts:
            assert a.inverse() in as_set
            for b in auts:
                assert a.compose(b) in as_set
            for i in range(latt.n):
                for j in range(latt.n):
                    assert a.apply(latt.meet[i][j]) == \
                        latt.meet[a.apply(i)][a.apply(j)]


def test_automorphism_cap():
    with pytest.raises(CapExceeded):
        automorphisms(chain(9))


def test_subsemilattice_generated():
    latt = d1_lattice()
    assert subsemilattice_generated(latt, [1, 2]) == (0, 1, 2)
    assert subsemilattice_generated(latt, [1]) == (1,)
    two = chain(2)
    assert subsemilattice_generated(two, [0, 1]) == (0, 1)


def test_subsemilattice_idempotent_and_monotone():
    latt = free_semilattice(3)
    closed = subsemilattice_generated(latt, [1, 2, 4])
    assert subsemilattice_generated(latt, closed) == closed
    smaller = subsemilattice_generated(latt, [1, 2])
    assert set(smaller) <= set(closed)


def test_free_semilattice_shapes():
    assert free_semilattice(1).n == 1
    fs2 = free_semilattice(2)
    assert fs2.n == 3
    assert list(fs2.elements) == ["{1}", "{2}", "{1,2}"]
    assert fs2.meet_of(0, 1) == 2
    fs3 = free_semilattice(3)
    assert fs3.n == 7
    assert fs3.label(fs3.bottom) == "{1,2,3}"
    with pytest.raises(CapExceeded):
        free_semilattice(6)
