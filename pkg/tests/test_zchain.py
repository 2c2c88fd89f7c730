import random

import pytest

from howson.errors import NotApplicable
from howson.zchain import (ResidueRecord, bound_M, decompose_zz1,
                           enumerate_window, gamma_period, verify_zz1,
                           window_lengths, z_inv, z_is_idempotent, z_mul)

WORKED = [(0, 2), (-1, 3)]


def test_mul_and_inv_examples():
    assert z_mul((0, 1), (0, 1)) == (0, 2)
    assert z_inv((0, 1)) == (-1, -1)
    assert z_mul((5, 0), (5, 0)) == (5, 0)


def test_power_law():
    for n in (1, 2, 3):
        for p in (1, 2, 5):
            u = (0, n)
            acc = u
            for _ in range(p - 1):
                acc = z_mul(acc, u)
            assert acc == (0, n * p)


def test_inverse_semigroup_axioms_random():
    rng = random.Random(4)
    for _ in range(10000):
        u = (rng.randint(-5, 5), rng.randint(-5, 5))
        v = (rng.randint(-5, 5), rng.randint(-5, 5))
        w = (rng.randint(-5, 5), rng.randint(-5, 5))
        assert z_mul(z_mul(u, v), w) == z_mul(u, z_mul(v, w))
        assert z_mul(z_mul(u, z_inv(u)), u) == u
        assert z_mul(z_mul(z_inv(u), u), z_inv(u)) == z_inv(u)
        assert z_inv(z_inv(u)) == u


def test_bound_m_examples():
    assert bound_M(WORKED) == 0
    assert bound_M([(5, 0)]) == 5
    assert bound_M([(0, 1)]) == 0


def test_gamma_period_examples():
    assert gamma_period(WORKED) == 1
    assert gamma_period([(0, 4), (0, 6)]) == 2
    assert gamma_period([(3, 0)]) == 0


def test_period_appears_in_window():
    # gcd reachability: (0,1) shows up as an actual product
    window = enumerate_window(WORKED, 4)
    assert (0, 1) in window


def test_window_depth_one_and_idempotent():
    assert enumerate_window([(0, 1)], 1) == {(0, 1), (-1, -1)}
    assert enumerate_window([(3, 0)], 5) == {(3, 0)}


def test_window_contents_depth_two():
    w = enumerate_window([(0, 1)], 2)
    assert (0, 2) in w
    assert (-1, 0) in w  # inverse times the element, an idempotent
    # all four two-letter products by hand:
    # (0,1)(0,1) = (0,2); (0,1)(-1,-1) = (0,0);
    # (-1,-1)(0,1) = (-1,0); (-1,-1)(-1,-1) = (-2,-2)
    assert w == {(0, 1), (-1, -1), (0, 2), (0, 0), (-1, 0), (-2, -2)}


def test_boundedness_invariant():
    for x in (WORKED, [(0, 1)], [(2, 3), (5, -2)]):
        m = bound_M(x)
        for d in (1, 3, 5):
            assert all(u[0] <= m for u in enumerate_window(x, d))


def test_gamma_parts_multiples_of_period():
    for x in (WORKED, [(0, 4), (0, 6)], [(1, 6), (0, 10)]):
        n = gamma_period(x)
        window = enumerate_window(x, 5)
        assert all(u[1] % n == 0 for u in window)
        assert any(u[1] == n for u in enumerate_window(x, 8))


def test_idempotent_only_branch():
    x = [(3, 0), (1, 0), (7, 0)]
    assert gamma_period(x) == 0
    window = enumerate_window(x, 4)
    assert all(z_is_idempotent(u) for u in window)
    assert window == {(3, 0), (1, 0), (7, 0)}  # min-closure of the sigma values
    with pytest.raises(NotApplicable):
        decompose_zz1(x, 4)


def test_decompose_worked_instance():
    records = decompose_zz1(WORKED, 8)
    assert len(records) == 1
    rec = records[0]
    assert rec.residue == 0
    assert rec.m_i == 0
    assert rec.s_prime == []
    assert rec.gens == [(0, 1)]
    assert rec.certified
    # the witness product from the window: (0,2)(0,2)(-4,-3) = (0,1)
    assert z_mul(z_mul((0, 2), (0, 2)), (-4, -3)) == (0, 1)


def test_decompose_is_fixpoint_on_decomposed_input():
    records = decompose_zz1([(0, 1)], 8)
    assert len(records) == 1
    assert records[0].gens == [(0, 1)]
    assert records[0].certified


def test_decompose_even_period():
    records = decompose_zz1([(0, 2)], 8)
    assert len(records) == 1
    rec = records[0]
    assert rec.residue == 0 and rec.m_i == 0 and rec.gens == [(0, 2)]


def test_verify_worked_instance():
    records = decompose_zz1(WORKED, 8)
    report = verify_zz1(WORKED, records, 8)
    assert report["agreement"]
    assert all(v["ok"] for v in report["classes"].values())


def test_verify_trivial_equal_windows():
    records = decompose_zz1([(0, 1)], 6)
    report = verify_zz1([(0, 1)], records, 6)
    assert report["agreement"]


def test_verify_rejects_corrupted_records():
    records = decompose_zz1(WORKED, 8)
    bad = [ResidueRecord(r.residue, r.m_i - 1, r.s_prime,
                         [(r.m_i - 1, 1)] + r.s_prime, r.certified)
           for r in records]
    report = verify_zz1(WORKED, bad, 8)
    assert not report["agreement"]


def test_window_lengths_are_minimal():
    lengths = window_lengths(WORKED, 4)
    for u in WORKED:
        assert lengths[u] == 1
    assert lengths[(0, 4)] == 2  # (0,2)^2
