"""Group element arithmetic and finitely generated subgroup calculus.

Three backends share one interface:

* finite-perm: permutations of 0..degree-1 as image tuples; subgroups are
  materialized closures with factorization words.
* free: reduced words as tuples of signed letters (+j / -j for the j-th
  generator, 1-based); subgroups are folded core graphs with a base vertex.
  Folding carries a word over the original generators on every edge, so
  membership queries come back with an explicit factorization.
* free-abelian: integer vectors; subgroups are row-style Hermite normal
  form bases with the unimodular transform retained for factorizations.

All values are immutable after construction and safe to share.
"""

from dataclasses import dataclass
from functools import lru_cache

from .caps import GROUP_CLOSURE_CAP, cap
from .errors import CapExceeded, KindMismatch

FINITE_PERM = "finite-perm"
FREE = "free"
FREE_ABELIAN = "free-abelian"
KINDS = (FINITE_PERM, FREE, FREE_ABELIAN)


@dataclass(frozen=True)
class GroupDesc:
    """Which group we are working in, plus its named generators."""

    kind: str
    degree: int | None = None        # finite-perm only
    rank: int | None = None          # free / free-abelian only
    gen_names: tuple = ()
    gen_perms: tuple = None          # finite-perm only, aligned with gen_names

    def generator_elems(self):
        if self.kind == FINITE_PERM:
            return list(self.gen_perms)
        if self.kind == FREE:
            return [(j + 1,) for j in range(self.rank)]
        return [tuple(1 if i == j else 0 for i in range(self.rank))
                for j in range(self.rank)]


def _check_names(names):
    seen = set()
    for name in names:
        if (not name or any(c.isspace() for c in name) or name.endswith("-")
                or name in seen):
            raise ValueError(f"bad generator name {name!r}")
        seen.add(name)


def _check_perm(p, degree):
    return len(p) == degree and sorted(p) == list(range(degree))


def finite_perm_group(generators):
    """Build a finite-perm descriptor from {name: image-array}."""
    names = tuple(generators)
    _check_names(names)
    perms = tuple(tuple(generators[name]) for name in names)
    if not perms:
        raise ValueError("need at least one generator")
    degree = len(perms[0])
    for p in perms:
        if not _check_perm(p, degree):
            raise ValueError(f"not a permutation of 0..{degree - 1}: {p}")
    return GroupDesc(FINITE_PERM, degree=degree, gen_names=names, gen_perms=perms)


def free_group(rank=None, names=None):
    if names is None:
        names = tuple(f"x{j + 1}" for j in range(rank))
    names = tuple(names)
    _check_names(names)
    if rank is None:
        rank = len(names)
    if rank < 1 or rank != len(names):
        raise ValueError("rank must be >= 1 and match the generator names")
    return GroupDesc(FREE, rank=rank, gen_names=names)


def free_abelian_group(rank=None, names=None):
    g = free_group(rank, names)
    return GroupDesc(FREE_ABELIAN, rank=g.rank, gen_names=g.gen_names)


# -- element arithmetic ------------------------------------------------------

def reduce_word(letters):
    out = []
    for lt in letters:
        if out and out[-1] == -lt:
            out.pop()
        else:
            out.append(lt)
    return tuple(out)


def _winv(word):
    return tuple(-lt for lt in reversed(word))


def check_elem(desc, g):
    """Raise KindMismatch unless g is a valid element for desc."""
    if not isinstance(g, tuple):
        raise KindMismatch(f"expected a tuple element, got {type(g).__name__}")
    if desc.kind == FINITE_PERM:
        if not _check_perm(g, desc.degree):
            raise KindMismatch(f"not a permutation of degree {desc.degree}: {g}")
    elif desc.kind == FREE:
        if any(lt == 0 or abs(lt) > desc.rank for lt in g):
            raise KindMismatch(f"letter out of range for rank {desc.rank}: {g}")
        if reduce_word(g) != g:
            raise KindMismatch(f"word is not freely reduced: {g}")
    elif desc.kind == FREE_ABELIAN:
        if len(g) != desc.rank or not all(isinstance(c, int) for c in g):
            raise KindMismatch(f"expected an integer vector of length {desc.rank}: {g}")
    else:
        raise KindMismatch(f"unknown kind {desc.kind}")
    return g


def identity(desc):
    if desc.kind == FINITE_PERM:
        return tuple(range(desc.degree))
    if desc.kind == FREE:
        return ()
    return tuple(0 for _ in range(desc.rank))


def compose(desc, a, b):
    """Group product a * b (for permutations: apply b first, then a)."""
    if desc.kind == FINITE_PERM:
        return tuple(a[i] for i in b)
    if desc.kind == FREE:
        return reduce_word(a + b)
    return tuple(x + y for x, y in zip(a, b))


def invert(desc, a):
    if desc.kind == FINITE_PERM:
        inv = [0] * len(a)
        for i, j in enumerate(a):
            inv[j] = i
        return tuple(inv)
    if desc.kind == FREE:
        return _winv(a)
    return tuple(-x for x in a)


def compose_all(desc, elems):
    acc = identity(desc)
    for g in elems:
        acc = compose(desc, acc, g)
    return acc


def factor_into_generators(desc, g):
    """g as a word of signed generator indices (+j / -j, 1-based).

    Used to push group elements through per-generator callbacks.  For
    finite-perm the factorization comes from a breadth-first closure of
    the whole group, cached per descriptor.
    """
    if desc.kind == FREE:
        return g
    if desc.kind == FREE_ABELIAN:
        word = []
        for j, c in enumerate(g):
            word.extend([(j + 1) if c > 0 else -(j + 1)] * abs(c))
        return tuple(word)
    words = _full_group_words(desc)
    try:
        return words[g]
    except KeyError:
        raise KindMismatch(f"{g} is not in the group generated by {desc.gen_names}") from None


@lru_cache(maxsize=None)
def _full_group_words(desc):
    """Factorization word for every element of a finite-perm group."""
    words = {identity(desc): ()}
    queue = [identity(desc)]
    limit = cap(GROUP_CLOSURE_CAP)
    steps = [(j + 1, p) for j, p in enumerate(desc.gen_perms)]
    steps += [(-(j + 1), invert(desc, p)) for j, p in enumerate(desc.gen_perms)]
    while queue:
        nxt = []
        for e in queue:
            we = words[e]
            for s, p in steps:
                q = compose(desc, e, p)
                if q not in words:
                    words[q] = we + (s,)
                    nxt.append(q)
                    if len(words) > limit:
                        raise CapExceeded("finite group closure", limit)
        queue = nxt
    return words


# -- element literals (the CLI boundary) -------------------------------------

def elem_to_literal(desc, g):
    if desc.kind == FREE:
        return " ".join(desc.gen_names[lt - 1] if lt > 0 else desc.gen_names[-lt - 1] + "-"
                        for lt in g)
    return list(g)


def elem_from_literal(desc, lit):
    if desc.kind == FREE:
        if not isinstance(lit, str):
            raise KindMismatch(f"free elements are token strings, got {lit!r}")
        word = []
        for tok in lit.split():
            inv = tok.endswith("-")
            name = tok[:-1] if inv else tok
            if name not in desc.gen_names:
                raise KindMismatch(f"unknown generator token {tok!r}")
            j = desc.gen_names.index(name) + 1
            word.append(-j if inv else j)
        return reduce_word(word)
    if not isinstance(lit, (list, tuple)):
        raise KindMismatch(f"expected an integer array, got {lit!r}")
    return check_elem(desc, tuple(lit))


# -- folded core graphs (free backend) ---------------------------------------

_LETTER_ORDER = lambda lt: (abs(lt), 0 if lt > 0 else 1)


class _CoreGraph:
    """Folded, trimmed core graph of a free subgroup, base vertex 0.

    Each directed edge carries a word over the original generators; the
    defining property is that the carried word of a base loop maps onto
    the loop's label, which is what makes membership witnesses exact.
    """

    def __init__(self, gen_words):
        edges = {}              # eid -> [u, letter, v, tag]
        inc = {0: set()}
        next_v, next_e = 1, 0

        def add_edge(u, lt, v, tag):
            nonlocal next_e
            edges[next_e] = [u, lt, v, tag]
            inc[u].add(next_e)
            inc[v].add(next_e)
            next_e += 1

        for j, w in enumerate(gen_words):
            if not w:
                continue
            prev = 0
            for t, lt in enumerate(w):
                if t == len(w) - 1:
                    tgt = 0
                else:
                    tgt = next_v
                    next_v += 1
                    inc[tgt] = set()
                add_edge(prev, lt, tgt, (j + 1,) if t == 0 else ())
                prev = tgt

        def seen_from(eid, x):
            """Presentations (letter, other endpoint, tag) of eid at vertex x."""
            u, lt, v, tag = edges[eid]
            out = []
            if u == x:
                out.append((lt, v, tag))
            if v == x:
                out.append((-lt, u, _winv(tag)))
            return out

        pending = set(inc)
        while pending:
            x = min(pending)
            pending.discard(x)
            if x not in inc:
                continue
            by_letter = {}
            clash = None
            for eid in sorted(inc[x]):
                for lt, w, tag in seen_from(eid, x):
                    if lt in by_letter and by_letter[lt][0] != eid:
                        clash = (by_letter[lt], (eid, w, tag), lt)
                        break
                    by_letter[lt] = (eid, w, tag)
                if clash:
                    break
            if not clash:
                continue
            (e1, w1, t1), (e2, w2, t2), _ = clash
            if w1 == w2:
                u, lt, v, _ = edges.pop(e2)
                inc[u].discard(e2)
                inc[v].discard(e2)
                pending.update((x, w1))
                pending.add(x)
                continue
            # merge the victim vertex into the survivor, re-tagging its edges
            if w2 == 0:
                survivor, victim = w2, w1
                delta = reduce_word(_winv(t2) + t1)
                dead_edge = e1
            else:
                survivor, victim = w1, w2
                delta = reduce_word(_winv(t1) + t2)
                dead_edge = e2
            affected = {x, survivor}
            for eid in list(inc[victim]):
                u, lt, v, tag = edges[eid]
                affected.update((u, v))
                if u == victim and v == victim:
                    edges[eid] = [survivor, lt, survivor,
                                  reduce_word(delta + tag + _winv(delta))]
                elif u == victim:
                    edges[eid] = [survivor, lt, v, reduce_word(delta + tag)]
                else:
                    edges[eid] = [u, lt, survivor, reduce_word(tag + _winv(delta))]
                inc[survivor].add(eid)
            del inc[victim]
            affected.discard(victim)
            u, lt, v, _ = edges.pop(dead_edge)
            inc[u].discard(dead_edge)
            inc[v].discard(dead_edge)
            pending.update(a for a in affected if a in inc)

        # trim hanging trees; the base vertex stays even when isolated
        changed = True
        while changed:
            changed = False
            for v in sorted(inc):
                if v == 0:
                    continue
                if not inc[v]:
                    del inc[v]
                    changed = True
                    break
                if len(inc[v]) == 1:
                    (eid,) = inc[v]
                    a, _, b, _ = edges[eid]
                    if a == b:
                        continue  # a loop is degree two, not a leaf
                    edges.pop(eid)
                    inc[a].discard(eid)
                    inc[b].discard(eid)
                    del inc[v]
                    changed = True
                    break

        # canonical renumbering by BFS from the base in fixed letter order
        out_old = {v: {} for v in inc}
        for u, lt, v, tag in edges.values():
            out_old[u][lt] = (v, tag)
            out_old[v][-lt] = (u, _winv(tag))
        order = {0: 0}
        queue = [0]
        tree = {}        # new vertex -> (parent letter path as tuple)
        path = {0: ()}
        while queue:
            u = queue.pop(0)
            for lt in sorted(out_old[u], key=_LETTER_ORDER):
                v, _ = out_old[u][lt]
                if v not in order:
                    order[v] = len(order)
                    path[v] = path[u] + (lt,)
                    tree[(order[u], lt)] = order[v]
                    queue.append(v)

        self.n_vertices = len(order)
        self.out = [dict() for _ in range(self.n_vertices)]
        pairs = set()
        for u, lt, v, tag in edges.values():
            nu, nv = order[u], order[v]
            self.out[nu][lt] = (nv, tag)
            self.out[nv][-lt] = (nu, _winv(tag))
            pairs.add((nu, lt, nv) if lt > 0 else (nv, -lt, nu))
        self.edge_pairs = tuple(sorted(pairs))
        self._tree = tree
        self._path = {order[v]: w for v, w in path.items()}

    def trace(self, word):
        """Follow word from the base; (end vertex, generator word) or None."""
        v = 0
        tags = []
        for lt in word:
            hit = self.out[v].get(lt)
            if hit is None:
                return None
            v, tag = hit
            tags.extend(tag)
        return v, reduce_word(tags)

    def petal_generators(self):
        """A free basis read off a spanning tree, one word per extra edge."""
        gens = []
        for u, lt, v in self.edge_pairs:
            if self._tree.get((u, lt)) == v or self._tree.get((v, -lt)) == u:
                continue
            w = reduce_word(self._path[u] + (lt,) + _winv(self._path[v]))
            gens.append(w)
        gens.sort(key=lambda w: (len(w), w))
        return gens

    def canonical_key(self):
        return (self.n_vertices, self.edge_pairs)


# -- Hermite normal form (free-abelian backend) ------------------------------

def _hnf_with_transform(rows, width):
    """Row HNF of an integer matrix.

    Returns (basis, pivots, exprs, kernel): the nonzero staircase rows with
    positive pivots and reduced entries above them, their pivot columns,
    each basis row expressed over the input rows, and a basis of the left
    kernel (also over the input rows).
    """
    k = len(rows)
    m = [list(r) for r in rows]
    u = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
    piv = 0
    for col in range(width):
        while True:
            nz = [i for i in range(piv, k) if m[i][col]]
            if not nz:
                has_pivot = False
                break
            i0 = min(nz, key=lambda i: (abs(m[i][col]), i))
            if i0 != piv:
                m[piv], m[i0] = m[i0], m[piv]
                u[piv], u[i0] = u[i0], u[piv]
            a = m[piv][col]
            clean = True
            for i in range(piv + 1, k):
                if m[i][col]:
                    q = m[i][col] // a
                    m[i] = [x - q * y for x, y in zip(m[i], m[piv])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[piv])]
                    if m[i][col]:
                        clean = False
            if clean:
                has_pivot = True
                break
        if has_pivot:
            if m[piv][col] < 0:
                m[piv] = [-x for x in m[piv]]
                u[piv] = [-x for x in u[piv]]
            a = m[piv][col]
            for i in range(piv):
                q = m[i][col] // a
                if q:
                    m[i] = [x - q * y for x, y in zip(m[i], m[piv])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[piv])]
            piv += 1
    basis = tuple(tuple(r) for r in m[:piv])
    pivots = tuple(next(j for j, x in enumerate(r) if x) for r in basis)
    exprs = tuple(tuple(r) for r in u[:piv])
    kernel = tuple(tuple(r) for r in u[piv:])
    return basis, pivots, exprs, kernel


def _reduce_against(basis, pivots, vec):
    """Coefficients of vec over staircase basis rows, or None."""
    v = list(vec)
    coeffs = []
    for row, p in zip(basis, pivots):
        q, r = divmod(v[p], row[p])
        if r:
            return None
        if q:
            v = [x - q * y for x, y in zip(v, row)]
        coeffs.append(q)
    if any(v):
        return None
    return coeffs


# -- subgroups ----------------------------------------------------------------

class Subgroup:
    """A finitely generated subgroup in canonical form.

    The canonical form depends only on the subgroup, so equal subgroups
    compare equal regardless of how they were generated.
    """

    def __init__(self, desc, gens):
        self.desc = desc
        self.gens = tuple(check_elem(desc, g) for g in gens)
        if not self.gens:
            raise ValueError("gens must be nonempty (identity is allowed)")
        if desc.kind == FREE:
            self._graph = _CoreGraph(self.gens)
        elif desc.kind == FREE_ABELIAN:
            basis, pivots, exprs, _ = _hnf_with_transform(self.gens, desc.rank)
            self._basis = basis
            self._pivots = pivots
            self._exprs = exprs
        else:
            self._elements, self._words = _perm_closure_with_words(desc, self.gens)
            self._sorted = tuple(sorted(self._elements))

    # membership -----------------------------------------------------------

    def member(self, g):
        check_elem(self.desc, g)
        if self.desc.kind == FREE:
            hit = self._graph.trace(g)
            return hit is not None and hit[0] == 0
        if self.desc.kind == FREE_ABELIAN:
            return _reduce_against(self._basis, self._pivots, g) is not None
        return g in self._elements

    def member_with_witness(self, g):
        """A word of signed generator indices multiplying out to g, or None."""
        check_elem(self.desc, g)
        if self.desc.kind == FREE:
            hit = self._graph.trace(g)
            if hit is None or hit[0] != 0:
                return None
            return hit[1]
        if self.desc.kind == FREE_ABELIAN:
            coeffs = _reduce_against(self._basis, self._pivots, g)
            if coeffs is None:
                return None
            over_gens = [0] * len(self.gens)
            for q, expr in zip(coeffs, self._exprs):
                for j, c in enumerate(expr):
                    over_gens[j] += q * c
            word = []
            for j, c in enumerate(over_gens):
                word.extend([(j + 1) if c > 0 else -(j + 1)] * abs(c))
            return tuple(word)
        return self._words.get(g)

    # canonical data ---------------------------------------------------------

    def canonical_key(self):
        if self.desc.kind == FREE:
            return (FREE, self._graph.canonical_key())
        if self.desc.kind == FREE_ABELIAN:
            return (FREE_ABELIAN, self._basis)
        return (FINITE_PERM, self._sorted)

    def canonical_generators(self):
        """A deterministic generating set derived from the canonical form."""
        if self.desc.kind == FREE:
            return [tuple(w) for w in self._graph.petal_generators()]
        if self.desc.kind == FREE_ABELIAN:
            return [row for row in self._basis]
        return _greedy_generators(self.desc, self._sorted)

    def is_trivial(self):
        return not self.canonical_generators()

    def order(self):
        if self.desc.kind != FINITE_PERM:
            raise KindMismatch("order is only defined for finite-perm subgroups")
        return len(self._elements)

    @property
    def rank_flavor(self):
        return "upper-bound" if self.desc.kind == FINITE_PERM else "exact"

    def __eq__(self, other):
        return (isinstance(other, Subgroup) and self.desc == other.desc
                and self.canonical_key() == other.canonical_key())

    def __hash__(self):
        return hash((self.desc, self.canonical_key()))

    def __repr__(self):
        return f"Subgroup({self.desc.kind}, gens={len(self.gens)})"

    def to_dot(self):
        """Core graph in DOT format (free backend only)."""
        if self.desc.kind != FREE:
            raise KindMismatch("only free subgroups have a core graph")
        lines = ["digraph core {", '  rankdir=LR;', '  "0" [shape=doublecircle];']
        for v in range(1, self._graph.n_vertices):
            lines.append(f'  "{v}" [shape=circle];')
        for u, lt, v in self._graph.edge_pairs:
            name = self.desc.gen_names[lt - 1]
            lines.append(f'  "{u}" -> "{v}" [label="{name}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _perm_closure_with_words(desc, gens):
    words = {identity(desc): ()}
    queue = [identity(desc)]
    limit = cap(GROUP_CLOSURE_CAP)
    steps = []
    for j, g in enumerate(gens):
        steps.append((j + 1, g))
        steps.append((-(j + 1), invert(desc, g)))
    while queue:
        nxt = []
        for e in queue:
            we = words[e]
            for s, p in steps:
                q = compose(desc, e, p)
                if q not in words:
                    words[q] = we + (s,)
                    nxt.append(q)
                    if len(words) > limit:
                        raise CapExceeded("subgroup closure", limit)
        queue = nxt
    return frozenset(words), words


def _greedy_generators(desc, sorted_elements):
    """A small generating set picked greedily from a closed element set."""
    chosen = []
    have = {identity(desc)}
    for e in sorted_elements:
        if e in have:
            continue
        chosen.append(e)
        have = set(_perm_closure_with_words(desc, chosen)[0])
    return chosen


def subgroup(desc, gens):
    """Canonicalize the subgroup generated by gens (nonempty list)."""
    return Subgroup(desc, gens)


def member(sub, g):
    return sub.member(g)


def member_with_witness(sub, g):
    return sub.member_with_witness(g)


def rank(sub):
    """Rank of the canonical form; an upper bound for finite-perm."""
    if sub.desc.kind == FREE:
        graph = sub._graph
        return len(graph.edge_pairs) - graph.n_vertices + 1
    return len(sub.canonical_generators())


def _require_same_kind(desc, *subs):
    for s in subs:
        if s.desc != desc:
            raise KindMismatch("subgroup does not belong to the given group")


def intersect_subgroups(desc, h1, h2):
    """Canonical subgroup for the intersection of h1 and h2."""
    _require_same_kind(desc, h1, h2)
    if desc.kind == FINITE_PERM:
        common = sorted(h1._elements & h2._elements)
        gens = _greedy_generators(desc, common)
        return Subgroup(desc, gens or [identity(desc)])
    if desc.kind == FREE_ABELIAN:
        b1, b2 = h1._basis, h2._basis
        if not b1 or not b2:
            return Subgroup(desc, [identity(desc)])
        _, _, _, kernel = _hnf_with_transform(b1 + b2, desc.rank)
        vecs = []
        for row in kernel:
            x = row[:len(b1)]
            v = tuple(sum(c * b[i] for c, b in zip(x, b1)) for i in range(desc.rank))
            if any(v):
                vecs.append(v)
        return Subgroup(desc, vecs or [identity(desc)])
    if desc.kind == FREE:
        gens = _free_intersection_generators(h1._graph, h2._graph)
        return Subgroup(desc, gens or [()])
    raise KindMismatch(f"unknown kind {desc.kind}")


def _product_reachable(g1, g2, start):
    """BFS the product of two folded graphs from a state pair."""
    out = {start: {}}
    queue = [start]
    while queue:
        u1, u2 = pair = queue.pop(0)
        letters = sorted(set(g1[u1]) & set(g2[u2]), key=_LETTER_ORDER)
        for lt in letters:
            v = (g1[u1][lt], g2[u2][lt])
            out[pair][lt] = v
            if v not in out:
                out[v] = {}
                queue.append(v)
    return out


def _free_intersection_generators(graph1, graph2):
    out1 = [{lt: v for lt, (v, _) in d.items()} for d in graph1.out]
    out2 = [{lt: v for lt, (v, _) in d.items()} for d in graph2.out]
    base = (0, 0)
    out = _product_reachable(out1, out2, base)
    # trim leaves other than the base pair
    changed = True
    while changed:
        changed = False
        for v in list(out):
            if v == base:
                continue
            incident = {lt for lt in out[v]}
            if len(incident) <= 1:
                for lt in list(out[v]):
                    w = out[v][lt]
                    del out[v][lt]
                    if w != v:
                        del out[w][-lt]
                del out[v]
                changed = True
    # spanning tree + petal words
    path = {base: ()}
    tree = set()
    queue = [base]
    while queue:
        u = queue.pop(0)
        for lt in sorted(out[u], key=_LETTER_ORDER):
            v = out[u][lt]
            if v not in path:
                path[v] = path[u] + (lt,)
                tree.add((u, lt, v))
                queue.append(v)
    gens = []
    seen = set()
    for u in path:
        for lt in sorted(out[u], key=_LETTER_ORDER):
            if lt < 0:
                continue
            v = out[u][lt]
            if (u, lt, v) in tree or (u, lt, v) in seen:
                continue
            seen.add((u, lt, v))
            gens.append(reduce_word(path[u] + (lt,) + _winv(path[v])))
    gens = [g for g in gens if g]
    gens.sort(key=lambda w: (len(w), w))
    return gens


def coset_intersect(desc, g1, h1, g2, h2):
    """Decide g1*H1 meet g2*H2; on success also return one representative.

    The full solution set is rep * (H1 meet H2); it is not materialized.
    """
    _require_same_kind(desc, h1, h2)
    check_elem(desc, g1)
    check_elem(desc, g2)
    if desc.kind == FINITE_PERM:
        if len(h1._elements) <= len(h2._elements):
            small, small_g, other, other_g = h1, g1, h2, g2
        else:
            small, small_g, other, other_g = h2, g2, h1, g1
        inv_other = invert(desc, other_g)
        for h in small._sorted:
            z = compose(desc, small_g, h)
            if compose(desc, inv_other, z) in other._elements:
                return True, z
        return False, None
    if desc.kind == FREE_ABELIAN:
        d = tuple(b - a for a, b in zip(g1, g2))
        stack = h1._basis + h2._basis
        if not stack:
            return (True, g1) if not any(d) else (False, None)
        basis, pivots, exprs, _ = _hnf_with_transform(stack, desc.rank)
        coeffs = _reduce_against(basis, pivots, d)
        if coeffs is None:
            return False, None
        over_stack = [0] * len(stack)
        for q, expr in zip(coeffs, exprs):
            for j, c in enumerate(expr):
                over_stack[j] += q * c
        x = over_stack[:len(h1._basis)]
        v1 = tuple(sum(c * b[i] for c, b in zip(x, h1._basis)) for i in range(desc.rank))
        return True, tuple(a + b for a, b in zip(g1, v1))
    if desc.kind == FREE:
        return _free_coset_intersect(desc, g1, h1, g2, h2)
    raise KindMismatch(f"unknown kind {desc.kind}")


def _free_coset_intersect(desc, g1, h1, g2, h2):
    d = reduce_word(_winv(g1) + g2)
    out1 = [{lt: v for lt, (v, _) in d1.items()} for d1 in h1._graph.out]
    # copy of H2's graph, extended with a tail spelling the inverse offset
    out2 = {v: dict({lt: w for lt, (w, _) in d2.items()})
            for v, d2 in enumerate(h2._graph.out)}
    cur = 0
    fresh = len(out2)
    for lt in _winv(d):
        nxt = out2[cur].get(lt)
        if nxt is None:
            out2[fresh] = {}
            out2[cur][lt] = fresh
            out2[fresh][-lt] = cur
            nxt = fresh
            fresh += 1
        cur = nxt
    start, target = (0, cur), (0, 0)
    prev = {start: None}
    queue = [start]
    while queue:
        pair = queue.pop(0)
        if pair == target:
            word = []
            while prev[pair] is not None:
                pair, lt = prev[pair]
                word.append(lt)
            w = tuple(reversed(word))
            return True, reduce_word(g1 + w)
        u1, u2 = pair
        for lt in sorted(set(out1[u1]) & set(out2[u2]), key=_LETTER_ORDER):
            v = (out1[u1][lt], out2[u2][lt])
            if v not in prev:
                prev[v] = (pair, lt)
                queue.append(v)
    return False, None
