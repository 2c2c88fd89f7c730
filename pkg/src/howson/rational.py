"""The reachability automaton over {q0} + (E x Aut(E)) and what it yields.

States are the profile pairs (element, automorphism) realized by products
of the generators; running a word from q0 lands exactly on the profile of
the product it spells.  From the automaton we extract finite generating
sets for the subgroups gamma(S(e)) of group parts that act trivially and
sit above a threshold element, together with the geometric-series rank
bound for them.
"""

from math import factorial

from . import groups
from .action_sdp import SdpElem, sdp_inv, sdp_mul
from .caps import AUTOMATON_STATE_CAP, BOUND_BITS_CAP, PATH_ENUM_CAP, cap
from .errors import CapExceeded, EmptyWord, InternalInvariantViolation


class SdpAutomaton:
    """Deterministic, complete (on reachable states) automaton for <X>."""

    def __init__(self, act, letters, letter_theta, inv_letter, states,
                 state_index, delta, witness_word, witness_elem):
        self.act = act
        self.letters = letters            # symmetrized generators, deduplicated
        self.letter_theta = letter_theta
        self.inv_letter = inv_letter      # index of each letter's inverse
        self.states = states              # states[0] is q0 (stored as None)
        self.state_index = state_index
        self.delta = delta                # delta[state][letter] -> state
        self.witness_word = witness_word  # first word reaching each state
        self.witness_elem = witness_elem  # product of that word

    @property
    def n_states(self):
        return len(self.states)

    def profile_states(self):
        """Non-initial reachable states in discovery order."""
        return self.states[1:]

    def accepting_states(self, e):
        """Indices of states (f, id) with f >= e."""
        latt = self.act.semilattice
        out = []
        for idx in range(1, len(self.states)):
            f, aut = self.states[idx]
            if aut.is_identity() and latt.leq(e, f):
                out.append(idx)
        return out

    def invert_word(self, word):
        return [self.inv_letter[i] for i in reversed(word)]

    def fold_word(self, word):
        """The product the word spells (phi of the word)."""
        if not word:
            raise EmptyWord("words must be nonempty")
        acc = self.letters[word[0]]
        for i in word[1:]:
            acc = sdp_mul(self.act, acc, self.letters[i])
        return acc


def build_automaton(act, x_elems, state_cap=None):
    """Build the reachable automaton for the symmetrized generator set.

    Only states reachable from q0 are materialized, breadth first in
    letter order; each gets the first word reaching it and that word's
    product as a witness.
    """
    if not x_elems:
        raise ValueError("X must be nonempty")
    limit = state_cap if state_cap is not None else cap(AUTOMATON_STATE_CAP)
    letters = list(dict.fromkeys(list(x_elems) + [sdp_inv(act, x) for x in x_elems]))
    letter_theta = [act.theta(x.g) for x in letters]
    pos = {x: i for i, x in enumerate(letters)}
    inv_letter = [pos[sdp_inv(act, x)] for x in letters]

    latt = act.semilattice
    states = [None]
    state_index = {}
    delta = [[None] * len(letters)]
    witness_word = [None]
    witness_elem = [None]

    def target_from(state, i):
        x, th = letters[i], letter_theta[i]
        if state is None:
            return (x.e, th)
        f, piv = state
        return (latt.meet[f][piv.apply(x.e)], piv.compose(th))

    queue = [0]
    while queue:
        si = queue.pop(0)
        state = states[si]
        for i in range(len(letters)):
            tgt = target_from(state, i)
            ti = state_index.get(tgt)
            if ti is None:
                ti = len(states)
                if ti > limit:
                    raise CapExceeded("automaton states", limit)
                states.append(tgt)
                state_index[tgt] = ti
                delta.append([None] * len(letters))
                if si == 0:
                    witness_word.append([i])
                    witness_elem.append(letters[i])
                else:
                    witness_word.append(witness_word[si] + [i])
                    witness_elem.append(sdp_mul(act, witness_elem[si], letters[i]))
                queue.append(ti)
            delta[si][i] = ti
    return SdpAutomaton(act, letters, letter_theta, inv_letter, states,
                        state_index, delta, witness_word, witness_elem)


def run(aut, word):
    """End state of a nonempty word of letter indices; empty paths are barred."""
    if not word:
        raise EmptyWord("the automaton admits no empty paths")
    si = 0
    for i in word:
        si = aut.delta[si][i]
    return aut.states[si]


class SOfE:
    """gamma(S(e)): empty indicator, canonical subgroup, realizing words."""

    def __init__(self, nonempty, sub, gen_elems, gen_words, accepting):
        self.nonempty = nonempty
        self.subgroup = sub
        self.gen_elems = gen_elems
        self.gen_words = gen_words
        self.accepting = accepting
        self._aut = None

    def realize(self, g):
        """A successful-path word whose product has group part g."""
        zword = self.subgroup.member_with_witness(g)
        if zword is None:
            raise InternalInvariantViolation(
                f"{g} is not in the extracted subgroup")
        word = []
        for lt in zword:
            w = self.gen_words[abs(lt) - 1]
            word.extend(w if lt > 0 else self._aut.invert_word(w))
        return word


def s_of_e_subgroup(aut, e, pair_cap=None):
    """Extract gamma(S(e)) for S(e) = {u in <X>: sigma(u) >= e, theta trivial}.

    For a finite acting group the (state, group element) graph is finite
    and is exhausted, so the collected set is the subgroup itself.  For
    free and free-abelian groups, successful labels are enumerated by
    length up to 2m-1 (m reachable states), stopping early once the
    collected subgroup survives a full length class unchanged.
    """
    limit = pair_cap if pair_cap is not None else cap(PATH_ENUM_CAP)
    accepting = set(aut.accepting_states(e))
    if not accepting:
        return SOfE(False, None, [], [], [])

    desc = aut.act.desc
    finite = desc.kind == groups.FINITE_PERM
    max_len = None if finite else 2 * aut.n_states - 1

    collected = {}
    seen = set()
    frontier = []
    for i, x in enumerate(aut.letters):
        si = aut.delta[0][i]
        pair = (si, x.g)
        if pair in seen:
            continue
        seen.add(pair)
        frontier.append((si, x.g, [i]))
        if si in accepting and x.g not in collected:
            collected[x.g] = [i]

    prev_key = object()
    length = 1
    while frontier:
        if max_len is not None and length >= max_len:
            break
        if not finite and collected:
            key = groups.subgroup(desc, list(collected)).canonical_key()
            if key == prev_key:
                break
            prev_key = key
        nxt = []
        for si, g, word in frontier:
            for i, x in enumerate(aut.letters):
                ti = aut.delta[si][i]
                h = groups.compose(desc, g, x.g)
                pair = (ti, h)
                if pair in seen:
                    continue
                if len(seen) >= limit:
                    raise CapExceeded("successful-path enumeration", limit)
                seen.add(pair)
                nword = word + [i]
                nxt.append((ti, h, nword))
                if ti in accepting and h not in collected:
                    collected[h] = nword
        frontier = nxt
        length += 1

    gen_elems = list(collected)
    gen_words = [collected[g] for g in gen_elems]
    if not gen_elems:
        # an accepting state is reachable, so its witness word is successful
        raise InternalInvariantViolation("accepting state reachable but nothing collected")
    result = SOfE(True, groups.subgroup(desc, gen_elems), gen_elems, gen_words,
                  sorted(accepting))
    result._aut = aut
    return result


def rank_bound(size_e, size_x):
    """Geometric-series bound on rk(gamma(S(e))): sum of (2|X|)^i, i < 2|E|!.

    Exact big-integer evaluation of the closed form
    (1 - (2|X|)^(2|E|!)) / (1 - 2|X|).
    """
    if size_e < 1 or size_x < 1:
        raise ValueError("sizes must be >= 1")
    exponent = 2 * factorial(size_e)
    base = 2 * size_x
    if exponent * base.bit_length() > BOUND_BITS_CAP:
        raise CapExceeded("rank bound size", BOUND_BITS_CAP)
    return (base ** exponent - 1) // (base - 1)


def to_dot(aut, e=None):
    """Reachable automaton in DOT; accepting states for e are double-circled."""
    latt = aut.act.semilattice
    try:
        from .semilattice import automorphisms
        auts = {a: i for i, a in enumerate(automorphisms(latt))}
    except CapExceeded:
        auts = {}
        for st in aut.states[1:]:
            auts.setdefault(st[1], len(auts))
    accepting = set(aut.accepting_states(e)) if e is not None else set()

    def label(idx):
        if idx == 0:
            return "q0"
        f, a = aut.states[idx]
        return f"({latt.label(f)},{auts[a]})"

    lines = ["digraph sdp_automaton {", "  rankdir=LR;"]
    lines.append('  "q0" [shape=circle, style=bold];')
    for idx in range(1, len(aut.states)):
        shape = "doublecircle" if idx in accepting else "circle"
        lines.append(f'  "{label(idx)}" [shape={shape}];')
    for si in range(len(aut.states)):
        for i, x in enumerate(aut.letters):
            lab = f"({latt.label(x.e)},{groups.elem_to_literal(aut.act.desc, x.g)})"
            lines.append(f'  "{label(si)}" -> "{label(aut.delta[si][i])}" [label="{lab}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
