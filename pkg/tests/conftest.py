import pathlib

import pytest

from howson import action_sdp, groups
from howson.semilattice import SAut, validate_meet_table

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def d1_lattice():
    """Three elements: a bottom below the antichain {a, b}."""
    return validate_meet_table(["0", "a", "b"], [[0, 0, 0], [0, 1, 0], [0, 0, 2]])


def chain(n):
    labels = [str(i) for i in range(n)]
    table = [[min(i, j) for j in range(n)] for i in range(n)]
    return validate_meet_table(labels, table)


@pytest.fixture
def d1():
    return d1_lattice()


def d1_z2_action():
    """D1 with the two-element group swapping a and b."""
    latt = d1_lattice()
    desc = groups.finite_perm_group({"s": (1, 0)})
    return action_sdp.build_action(latt, desc, {"s": SAut((0, 2, 1))})


def d1_free_action():
    """D1 with a free group of rank one swapping a and b."""
    latt = d1_lattice()
    desc = groups.free_group(names=("x",))
    return action_sdp.build_action(latt, desc, {"x": SAut((0, 2, 1))})


def trivial_free2_action():
    """Two-chain with a trivial action of the free group of rank two."""
    latt = chain(2)
    desc = groups.free_group(names=("x", "y"))
    ident = SAut.identity(2)
    return action_sdp.build_action(latt, desc, {"x": ident, "y": ident})


def ac3_abelian_action():
    """Bottom plus antichain {a, b, c}; u swaps a and b, v acts trivially."""
    latt = validate_meet_table(
        ["0", "a", "b", "c"],
        [[0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 2, 0], [0, 0, 0, 3]])
    desc = groups.free_abelian_group(names=("u", "v"))
    return action_sdp.build_action(
        latt, desc, {"u": SAut((0, 2, 1, 3)), "v": SAut.identity(4)})


@pytest.fixture
def act_z2():
    return d1_z2_action()


@pytest.fixture
def act_free1():
    return d1_free_action()


@pytest.fixture
def act_free2():
    return trivial_free2_action()


@pytest.fixture
def act_abelian():
    return ac3_abelian_action()


def sdp(act, label, g):
    return action_sdp.SdpElem(act.semilattice.index(label), g)
