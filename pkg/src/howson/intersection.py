"""Finite generating sets for intersections of f.g. inverse subsemigroups.

Given X1, X2 inside E x| G, both automata are built and their profiles
(the reachable (element, automorphism) pairs) are intersected.  For each
common pair the group parts acting trivially above a threshold form
subgroups whose intersection is computed in the group backend; one extra
generator per pair realizing the exact profile is found through a left
coset intersection.  Every emitted generator carries one factorization
over X1 and one over X2, checked by multiplying them out.
"""

from dataclasses import dataclass, field
from math import factorial

from . import groups
from .action_sdp import SdpElem, sdp_inv
from .caps import BOUND_BITS_CAP
from .errors import (CapExceeded, InternalInvariantViolation, KindMismatch,
                     UnsupportedBackend)
from .rational import build_automaton, s_of_e_subgroup


@dataclass
class ProfileEntry:
    """One realized pair (element, automorphism) with its first witness."""

    e: int
    aut: object          # SAut
    state: int
    word: list           # letter indices into the automaton's alphabet
    elem: SdpElem        # product of the witness word; elem.e == e

    @property
    def g(self):
        return self.elem.g

    def key(self):
        return (self.e, self.aut)


def profile(aut):
    """The non-initial reachable states, in discovery order, with witnesses."""
    out = []
    for idx in range(1, aut.n_states):
        e, pi = aut.states[idx]
        out.append(ProfileEntry(e, pi, idx, list(aut.witness_word[idx]),
                                aut.witness_elem[idx]))
    return out


def s_i_subgroup(aut, e, pi, _cache=None):
    """gamma of the trivially-acting elements sitting above pi^-1(e).

    Never empty when (e, pi) is in the automaton's profile; an empty
    answer is an implementation bug, not a domain condition.
    """
    target = pi.inverse().apply(e)
    if _cache is not None and target in _cache:
        return _cache[target]
    res = s_of_e_subgroup(aut, target)
    if not res.nonempty:
        if aut.state_index.get((e, pi)) is not None:
            raise InternalInvariantViolation(
                f"profile pair ({e}, {pi}) has an empty subgroup")
    if _cache is not None:
        _cache[target] = res
    return res


@dataclass
class PairData:
    """Everything computed for one common profile pair."""

    e: int
    aut: object
    target: int                  # pi^-1(e)
    h_subgroup: object
    y_gens: list                 # symmetrized generators of h_subgroup
    in_p: bool = False
    w: SdpElem = None
    w_certs: tuple = None


@dataclass
class IntersectionResult:
    gens: list                   # SdpElems generating <X1> meet <X2>
    certs: list                  # per gen: (word over X1 letters, word over X2 letters)
    p1: list                     # profile tables as (e, SAut) pairs
    p2: list
    q: list
    p: list
    pairs: dict = field(repr=False)   # (e, SAut) -> PairData
    aut1: object = field(repr=False, default=None)
    aut2: object = field(repr=False, default=None)


def _verify_cert(aut, word, expected):
    got = aut.fold_word(word)
    if got != expected:
        raise InternalInvariantViolation(
            f"certificate folds to {got}, expected {expected}")


def intersect(act, x1, x2):
    """Generators, certificates and profile tables for <X1> meet <X2>."""
    if not x1 or not x2:
        raise ValueError("X1 and X2 must be nonempty")
    if act.desc.kind not in groups.KINDS:
        raise UnsupportedBackend(act.desc.kind)
    aut1 = build_automaton(act, list(x1))
    aut2 = build_automaton(act, list(x2))
    prof1 = profile(aut1)
    prof2 = profile(aut2)
    p2map = {entry.key(): entry for entry in prof2}

    sofe1, sofe2 = {}, {}
    pairs = {}
    q_keys = []
    p_keys = []
    gens = []
    certs = []
    seen_gens = {}

    def emit(gen, cert1, cert2):
        if gen in seen_gens:
            return
        _verify_cert(aut1, cert1, gen)
        _verify_cert(aut2, cert2, gen)
        seen_gens[gen] = len(gens)
        gens.append(gen)
        certs.append((list(cert1), list(cert2)))

    for entry1 in prof1:
        key = entry1.key()
        entry2 = p2map.get(key)
        if entry2 is None:
            continue
        e, pi = key
        s1 = s_i_subgroup(aut1, e, pi, sofe1)
        s2 = s_i_subgroup(aut2, e, pi, sofe2)
        target = pi.inverse().apply(e)
        h = groups.intersect_subgroups(act.desc, s1.subgroup, s2.subgroup)
        ident = groups.identity(act.desc)
        y = []
        for g in h.canonical_generators():
            for cand in (g, groups.invert(act.desc, g)):
                if cand != ident and cand not in y:
                    y.append(cand)
        y.sort()
        data = PairData(e, pi, target, h, y)
        pairs[key] = data
        q_keys.append(key)

        inv_w1 = aut1.invert_word(entry1.word)
        inv_w2 = aut2.invert_word(entry2.word)
        for g in y:
            gen = SdpElem(target, g)
            emit(gen,
                 inv_w1 + entry1.word + s1.realize(g),
                 inv_w2 + entry2.word + s2.realize(g))

        found, rep = groups.coset_intersect(
            act.desc, entry1.g, s1.subgroup, entry2.g, s2.subgroup)
        if found:
            data.in_p = True
            data.w = SdpElem(e, rep)
            c1 = entry1.word + s1.realize(
                groups.compose(act.desc, groups.invert(act.desc, entry1.g), rep))
            c2 = entry2.word + s2.realize(
                groups.compose(act.desc, groups.invert(act.desc, entry2.g), rep))
            data.w_certs = (list(c1), list(c2))
            p_keys.append(key)
            emit(data.w, c1, c2)

    # close the emitted set under inversion; inverted words certify inverses
    for gen in list(seen_gens):
        inv_gen = sdp_inv(act, gen)
        if inv_gen not in seen_gens:
            c1, c2 = certs[seen_gens[gen]]
            emit(inv_gen, aut1.invert_word(c1), aut2.invert_word(c2))

    return IntersectionResult(
        gens=gens,
        certs=certs,
        p1=[entry.key() for entry in prof1],
        p2=[entry.key() for entry in prof2],
        q=q_keys,
        p=p_keys,
        pairs=pairs,
        aut1=aut1,
        aut2=aut2,
    )


def member(act, aut, u):
    """Exact membership of u in the subsemigroup the automaton was built for.

    On success also returns a factorization word over the automaton's
    alphabet.  u = (e, g) belongs iff (e, theta_g) is a realized profile
    pair and g differs from its witness by a trivially-acting element.
    """
    groups.check_elem(act.desc, u.g)
    try:
        pi = act.theta(u.g)
    except KindMismatch:
        return False, None
    idx = aut.state_index.get((u.e, pi))
    if idx is None:
        return False, None
    witness_word = list(aut.witness_word[idx])
    gi = aut.witness_elem[idx].g
    res = s_of_e_subgroup(aut, pi.inverse().apply(u.e))
    if not res.nonempty:
        raise InternalInvariantViolation("reachable profile pair with empty subgroup")
    res._aut = aut
    s = groups.compose(act.desc, groups.invert(act.desc, gi), u.g)
    if not res.subgroup.member(s):
        return False, None
    word = witness_word + res.realize(s)
    return True, word


def poly_bound(size_e, n, p_coeffs):
    """|E|! * (1 + p(q(2n))) with q the geometric sum of degree 2|E|! - 1.

    p is the group backend's own intersection-rank polynomial, given by
    its coefficient list (constant term first, all nonnegative).
    """
    if size_e < 1 or n < 1:
        raise ValueError("sizes must be >= 1")
    coeffs = list(p_coeffs)
    if any(c < 0 for c in coeffs):
        raise ValueError("polynomial coefficients must be nonnegative")
    f = factorial(size_e)
    base = 2 * n
    if 2 * f * base.bit_length() > BOUND_BITS_CAP:
        raise CapExceeded("polynomial bound size", BOUND_BITS_CAP)
    q = (base ** (2 * f) - 1) // (base - 1)
    if len(coeffs) * max(1, q.bit_length()) > BOUND_BITS_CAP:
        raise CapExceeded("polynomial bound size", BOUND_BITS_CAP)
    p_val = 0
    for c in reversed(coeffs):
        p_val = p_val * q + c
    return f * (1 + p_val)
