import random
from math import factorial

import pytest

from howson import groups, oracle, rational
from howson.action_sdp import SdpElem, build_action, sdp_inv, sdp_mul
from howson.errors import CapExceeded, EmptyWord
from howson.rational import build_automaton, rank_bound, run, s_of_e_subgroup
from howson.semilattice import SAut, validate_meet_table

from conftest import sdp

SWAP = (1, 0)
IDENT2 = (0, 1)


def oracle_gamma_s(act, x_elems, e):
    """Brute force gamma(S(e)) on a finite instance via the closure."""
    clo = oracle.closure(act, x_elems)
    latt = act.semilattice
    return sorted({u.g for u in clo.elements
                   if latt.leq(e, u.e) and act.theta(u.g).is_identity()})


def test_d1_automaton_shape(act_z2):
    x = [sdp(act_z2, "a", SWAP)]
    aut = build_automaton(act_z2, x)
    assert [(u.e, u.g) for u in aut.letters] == [(1, SWAP), (2, SWAP)]
    assert aut.n_states == 7
    tau = SAut((0, 2, 1))
    ident = SAut.identity(3)
    expected = {(1, tau), (2, tau), (0, ident), (0, tau), (1, ident), (2, ident)}
    assert set(aut.states[1:]) == expected


def test_singleton_semilattice_automaton():
    latt = validate_meet_table(["e"], [[0]])
    desc = groups.free_group(names=("x",))
    act = build_action(latt, desc, {"x": SAut((0,))})
    aut = build_automaton(act, [SdpElem(0, (1,))])
    assert aut.n_states == 2


def test_idempotent_letters_have_identity_parts(act_z2):
    aut = build_automaton(act_z2, [sdp(act_z2, "a", IDENT2), sdp(act_z2, "0", IDENT2)])
    for e, a in aut.states[1:]:
        assert a.is_identity()


def test_run_examples(act_z2):
    aut = build_automaton(act_z2, [sdp(act_z2, "a", SWAP)])
    tau = SAut((0, 2, 1))
    assert run(aut, [0]) == (1, tau)
    assert run(aut, [0, 0]) == (0, SAut.identity(3))
    assert run(aut, [0, 1]) == (1, SAut.identity(3))
    with pytest.raises(EmptyWord):
        run(aut, [])


def test_run_matches_fold_on_random_words(act_z2, act_free1, act_abelian):
    rng = random.Random(0)
    for act, x in (
            (act_z2, [sdp(act_z2, "a", SWAP)]),
            (act_free1, [sdp(act_free1, "a", (1,)), sdp(act_free1, "0", (1, 1))]),
            (act_abelian, [sdp(act_abelian, "a", (1, 0)), sdp(act_abelian, "a", (0, 1))])):
        aut = build_automaton(act, x)
        for _ in range(1000):
            word = [rng.randrange(len(aut.letters))
                    for _ in range(rng.randint(1, 8))]
            u = aut.fold_word(word)
            assert run(aut, word) == (u.e, act.theta(u.g))


def test_transitions_complete_and_deterministic(act_z2):
    aut = build_automaton(act_z2, [sdp(act_z2, "a", SWAP)])
    for row in aut.delta:
        assert len(row) == len(aut.letters)
        assert all(isinstance(t, int) for t in row)


def test_witnesses_reach_their_states(act_z2, act_free1):
    for act, x in ((act_z2, [sdp(act_z2, "a", SWAP)]),
                   (act_free1, [sdp(act_free1, "a", (1,))])):
        aut = build_automaton(act, x)
        for idx in range(1, aut.n_states):
            word = aut.witness_word[idx]
            assert run(aut, word) == aut.states[idx]
            u = aut.fold_word(word)
            assert u == aut.witness_elem[idx]
            assert (u.e, act.theta(u.g)) == aut.states[idx]


def test_s_of_e_examples_d1(act_z2):
    x = [sdp(act_z2, "a", SWAP)]
    aut = build_automaton(act_z2, x)
    res_a = s_of_e_subgroup(aut, 1)
    assert res_a.nonempty
    assert res_a.subgroup.is_trivial()
    assert sorted(res_a.subgroup._elements) == [IDENT2]
    res_0 = s_of_e_subgroup(aut, 0)
    assert res_0.nonempty
    assert sorted(res_0.subgroup._elements) == [IDENT2]


def test_s_of_e_exact_against_oracle_finite(act_z2):
    gensets = ([sdp(act_z2, "a", SWAP)],
               [sdp(act_z2, "a", IDENT2), sdp(act_z2, "0", SWAP)],
               [sdp(act_z2, "b", SWAP), sdp(act_z2, "b", IDENT2)])
    for x in gensets:
        aut = build_automaton(act_z2, x)
        for e in range(act_z2.semilattice.n):
            res = s_of_e_subgroup(aut, e)
            expected = oracle_gamma_s(act_z2, x, e)
            if not expected:
                assert not res.nonempty
            else:
                assert res.nonempty
                assert sorted(res.subgroup._elements) == expected
                bound = rank_bound(act_z2.semilattice.n, len(x))
                assert len(res.subgroup.canonical_generators()) <= bound


def test_s_of_e_trivial_action_free(act_free2):
    x = [sdp(act_free2, "1", (1,))]
    aut = build_automaton(act_free2, x)
    res = s_of_e_subgroup(aut, 1)
    assert res.nonempty
    assert res.subgroup == groups.subgroup(act_free2.desc, [(1,)])


def test_s_of_e_empty_case(act_free2):
    # all generators sit at the bottom, nothing reaches sigma >= top
    x = [sdp(act_free2, "0", (1,))]
    aut = build_automaton(act_free2, x)
    res = s_of_e_subgroup(aut, 1)
    assert not res.nonempty
    assert s_of_e_subgroup(aut, 0).nonempty


def test_s_of_e_realize_words(act_free1):
    x = [sdp(act_free1, "a", (1,))]
    aut = build_automaton(act_free1, x)
    res = s_of_e_subgroup(aut, act_free1.semilattice.index("0"))
    for g in res.subgroup.canonical_generators():
        word = res.realize(g)
        u = aut.fold_word(word)
        assert u.g == g
        assert act_free1.theta(u.g).is_identity()


def test_successful_labels_equal_oracle_set(act_z2):
    # phi of the successful-path language is exactly the oracle S(e)
    x = [sdp(act_z2, "a", SWAP)]
    aut = build_automaton(act_z2, x)
    clo = oracle.closure(act_z2, x)
    latt = act_z2.semilattice
    for e in range(latt.n):
        want = {(u.e, u.g) for u in clo.elements
                if latt.leq(e, u.e) and act_z2.theta(u.g).is_identity()}
        accepting = set(aut.accepting_states(e))
        got = set()
        seen = set()
        frontier = [(aut.delta[0][i], aut.letters[i].g) for i in range(len(aut.letters))]
        while frontier:
            nxt = []
            for si, g in frontier:
                if (si, g) in seen:
                    continue
                seen.add((si, g))
                if si in accepting:
                    got.add((aut.states[si][0], g))
                for i in range(len(aut.letters)):
                    nxt.append((aut.delta[si][i],
                                groups.compose(act_z2.desc, g, aut.letters[i].g)))
            frontier = nxt
        assert got == want


def test_rank_bound_values():
    assert rank_bound(1, 1) == 3
    assert rank_bound(3, 1) == 4095
    for size_e, size_x in ((1, 1), (2, 2), (3, 2)):
        base = 2 * size_x
        expo = 2 * factorial(size_e)
        assert rank_bound(size_e, size_x) == (1 - base ** expo) // (1 - base)
        assert rank_bound(size_e, size_x) >= 1
    with pytest.raises(CapExceeded):
        rank_bound(10, 10)


def test_dot_export(act_z2):
    aut = build_automaton(act_z2, [sdp(act_z2, "a", SWAP)])
    dot = rational.to_dot(aut, e=1)
    assert dot.startswith("digraph")
    assert '"q0"' in dot
    assert "doublecircle" in dot
