"""Brute-force ground truth for finite instances.

Closure enumeration is a plain worklist fixpoint under products and
inverses; it is the reference against which the automaton pipeline is
checked extensionally.  Also hosts the seeded random-instance generator
used by the equivalence batteries.
"""

from dataclasses import dataclass

from . import groups
from .action_sdp import SdpElem, build_action, sdp_inv, sdp_mul
from .caps import ORACLE_CLOSURE_CAP, cap
from .errors import CapExceeded, NotHomomorphism
from .semilattice import automorphisms, validate_meet_table


@dataclass
class ClosureSet:
    """The inverse subsemigroup generated by X, fully materialized."""

    elements: frozenset
    order: tuple          # deterministic discovery order
    gens: tuple
    depth: int            # product length at which the fixpoint stabilized


def closure(act, x_elems, size_cap=None):
    """Least set containing X closed under products and inverses."""
    if not x_elems:
        raise ValueError("X must be nonempty")
    limit = size_cap if size_cap is not None else cap(ORACLE_CLOSURE_CAP)
    sym = list(dict.fromkeys(list(x_elems) + [sdp_inv(act, x) for x in x_elems]))
    elems = dict.fromkeys(sym)
    if len(elems) > limit:
        raise CapExceeded("oracle closure", limit)
    frontier = list(elems)
    depth = 1
    while frontier:
        new = []
        for u in frontier:
            for x in sym:
                v = sdp_mul(act, u, x)
                if v not in elems:
                    elems[v] = None
                    if len(elems) > limit:
                        raise CapExceeded("oracle closure", limit)
                    new.append(v)
        if new:
            depth += 1
        frontier = new
    return ClosureSet(frozenset(elems), tuple(elems), tuple(x_elems), depth)


def check_intersection(act, x1, x2, result_gens, size_cap=None):
    """Compare closure(result_gens) with closure(X1) meet closure(X2)."""
    rhs = closure(act, x1, size_cap).elements & closure(act, x2, size_cap).elements
    lhs = closure(act, result_gens, size_cap).elements if result_gens else frozenset()
    key = lambda u: (u.e, u.g)
    return {
        "lhs_size": len(lhs),
        "rhs_size": len(rhs),
        "equal": lhs == rhs,
        "missing": sorted(rhs - lhs, key=key),
        "extra": sorted(lhs - rhs, key=key),
    }


# -- seeded random instances ---------------------------------------------------

_SYMMETRIC_STOCK = (
    # bottom below an antichain of two
    (["0", "a", "b"], [[0, 0, 0], [0, 1, 0], [0, 0, 2]]),
    # bottom below an antichain of three
    (["0", "a", "b", "c"],
     [[0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 2, 0], [0, 0, 0, 3]]),
    # diamond: bottom, two middles, top
    (["0", "a", "b", "t"],
     [[0, 0, 0, 0], [0, 1, 0, 1], [0, 0, 2, 2], [0, 1, 2, 3]]),
    # two-element chain
    (["0", "1"], [[0, 0], [0, 1]]),
)


def random_semilattice(rng, max_n=4, universe=3):
    """A random meet-semilattice of at most max_n elements.

    Half the draws come from stock shapes with nontrivial symmetry; the
    rest grow an intersection-closed set family incrementally (adjoining
    a set with all its intersections keeps the family closed, so nothing
    is ever rejected).
    """
    if rng.random() < 0.5:
        labels, table = _SYMMETRIC_STOCK[rng.randrange(len(_SYMMETRIC_STOCK))]
        if len(labels) <= max_n:
            return validate_meet_table(labels, table)
    fam = {frozenset(range(universe))}
    for _ in range(6):
        s = frozenset(rng.sample(range(universe), rng.randint(0, universe)))
        candidate = fam | {s} | {s & f for f in fam}
        if len(candidate) <= max_n:
            fam = candidate
    sets = sorted(fam, key=lambda f: (len(f), sorted(f)))
    index = {f: i for i, f in enumerate(sets)}
    labels = ["{" + ",".join(map(str, sorted(f))) + "}" for f in sets]
    table = [[index[a & b] for b in sets] for a in sets]
    return validate_meet_table(labels, table)


def _random_perm(rng, degree):
    p = list(range(degree))
    rng.shuffle(p)
    return tuple(p)


def _perm_order(desc, p):
    k, q = 1, p
    while q != groups.identity(desc):
        q = groups.compose(desc, q, p)
        k += 1
    return k


def _aut_order(a):
    n = len(a.perm)
    k, q = 1, a
    from .semilattice import SAut
    while q != SAut.identity(n):
        q = q.compose(a)
        k += 1
    return k


def random_action(rng, latt, max_group=12, tries=20):
    """A random finite-perm group acting on latt; retries bad image picks.

    Generator images are drawn among automorphisms whose order divides
    the generator's order, which makes consistent assignments likely;
    leftover inconsistencies are caught by build_action and retried.
    """
    auts = automorphisms(latt)
    for _ in range(tries):
        degree = rng.randint(2, 4)
        gens = {}
        for n in ["a", "b"][:rng.randint(1, 2)]:
            p = _random_perm(rng, degree)
            if p == tuple(range(degree)):
                p = _random_perm(rng, degree)  # one re-draw avoids most identities
            gens[n] = p
        desc = groups.finite_perm_group(gens)
        try:
            if groups.subgroup(desc, list(desc.gen_perms)).order() > max_group:
                continue
        except CapExceeded:
            continue
        images = {}
        for name, perm in zip(desc.gen_names, desc.gen_perms):
            k = _perm_order(desc, perm)
            fitting = [a for a in auts if k % _aut_order(a) == 0]
            nontrivial = [a for a in fitting if not a.is_identity()]
            pool = nontrivial if nontrivial and rng.random() < 0.8 else fitting
            images[name] = pool[rng.randrange(len(pool))]
        try:
            return build_action(latt, desc, images)
        except NotHomomorphism:
            continue
    # trivial images always extend consistently
    desc = groups.finite_perm_group({"a": _random_perm(rng, 2)})
    from .semilattice import SAut
    return build_action(latt, desc, {"a": SAut.identity(latt.n)})


def random_genset(rng, act, max_size=3):
    elems = sorted(groups._full_group_words(act.desc))
    out = []
    for _ in range(rng.randint(1, max_size)):
        out.append(SdpElem(rng.randrange(act.semilattice.n), rng.choice(elems)))
    return list(dict.fromkeys(out))


def random_instance(rng, max_n=4, max_group=12, max_size=3):
    """One seeded random finite instance: (action, X1, X2)."""
    latt = random_semilattice(rng, max_n=max_n)
    act = random_action(rng, latt, max_group=max_group)
    return act, random_genset(rng, act, max_size), random_genset(rng, act, max_size)
