"""Validated group actions on semilattices and semidirect-product arithmetic.

An Action binds a finite Semilattice, a group descriptor and one
automorphism per generator, extended multiplicatively to the whole group.
Products in E x| G follow (e,g)(f,h) = (e ^ g.f, gh) and
(e,g)^-1 = (g^-1.e, g^-1).

ComputableSemilattice covers possibly infinite semilattices through
callbacks; restrict_locally_finite shrinks such an instance to a finite
one when the orbits involved are finite within budget.
"""

from dataclasses import dataclass, field

from . import groups
from .caps import GROUP_CLOSURE_CAP, cap
from .errors import (BudgetExceeded, ClosureViolation, KindMismatch,
                     NotAutomorphism, NotHomomorphism)
from .semilattice import SAut, Semilattice, is_automorphism, validate_meet_table


@dataclass(frozen=True)
class SdpElem:
    """A pair (element index, group element)."""

    e: int
    g: tuple

    def __repr__(self):
        return f"SdpElem({self.e}, {self.g})"


class Action:
    """A homomorphism from the group into Aut(E), given on generators."""

    def __init__(self, semilattice, desc, images, theta_table=None):
        self.semilattice = semilattice
        self.desc = desc
        self.images = dict(images)
        self._theta_table = theta_table  # finite-perm: full element -> SAut map

    def theta(self, g):
        """The automorphism acting for g."""
        desc = self.desc
        if desc.kind == groups.FINITE_PERM:
            try:
                return self._theta_table[g]
            except KeyError:
                raise KindMismatch(f"{g} is not in the acting group") from None
        n = self.semilattice.n
        if desc.kind == groups.FREE:
            acc = SAut.identity(n)
            for lt in g:
                img = self.images[desc.gen_names[abs(lt) - 1]]
                acc = acc.compose(img if lt > 0 else img.inverse())
            return acc
        acc = SAut.identity(n)
        for j, c in enumerate(g):
            if c == 0:
                continue
            base = self.images[desc.gen_names[j]]
            if c < 0:
                base, c = base.inverse(), -c
            acc = acc.compose(_saut_pow(base, c))
        return acc

    def apply(self, g, e):
        return self.theta(g).apply(e)


def _saut_pow(aut, k):
    result = SAut.identity(len(aut.perm))
    sq = aut
    while k:
        if k & 1:
            result = result.compose(sq)
        sq = sq.compose(sq)
        k >>= 1
    return result


def build_action(semilattice, desc, images):
    """Validate generator images and the homomorphism property.

    free: nothing to check beyond the images being automorphisms.
    free-abelian: all image pairs must commute.
    finite-perm: walk the finite group, assigning an automorphism to each
    element; any two factorizations of one element must agree.
    """
    named = {}
    for name in desc.gen_names:
        if name not in images:
            raise NotAutomorphism(f"missing image for generator {name!r}")
        img = images[name]
        if not isinstance(img, SAut):
            img = SAut(tuple(img))
        if not is_automorphism(semilattice, img.perm):
            raise NotAutomorphism(f"image of {name!r} does not preserve the meet table")
        named[name] = img

    if desc.kind == groups.FREE_ABELIAN:
        names = desc.gen_names
        for i in range(len(names)):
            for j in range(i + 1, len(names)):
                a, b = named[names[i]], named[names[j]]
                if a.compose(b) != b.compose(a):
                    raise NotHomomorphism(
                        f"images of {names[i]!r} and {names[j]!r} do not commute",
                        witness=(f"{names[i]} {names[j]}", f"{names[j]} {names[i]}"))
        return Action(semilattice, desc, named)

    if desc.kind == groups.FREE:
        return Action(semilattice, desc, named)

    if desc.kind == groups.FINITE_PERM:
        table = {groups.identity(desc): SAut.identity(semilattice.n)}
        words = {groups.identity(desc): ""}
        queue = [groups.identity(desc)]
        limit = cap(GROUP_CLOSURE_CAP)
        steps = []
        for name, p in zip(desc.gen_names, desc.gen_perms):
            steps.append((name, p, named[name]))
            steps.append((name + "-", groups.invert(desc, p), named[name].inverse()))
        while queue:
            nxt = []
            for g in queue:
                for token, p, img in steps:
                    h = groups.compose(desc, g, p)
                    composed = table[g].compose(img)
                    if h in table:
                        if table[h] != composed:
                            raise NotHomomorphism(
                                "generator images are inconsistent on the group",
                                witness=(words[h].strip(),
                                         (words[g] + " " + token).strip()))
                    else:
                        table[h] = composed
                        words[h] = words[g] + " " + token
                        nxt.append(h)
                        if len(table) > limit:
                            from .errors import CapExceeded
                            raise CapExceeded("acting group closure", limit)
            queue = nxt
        return Action(semilattice, desc, named, theta_table=table)

    raise KindMismatch(f"unknown kind {desc.kind}")


def theta_of(act, g):
    return act.theta(g)


def apply(act, g, e):
    return act.theta(g).apply(e)


def sdp_mul(act, u, v):
    e = act.semilattice.meet[u.e][act.theta(u.g).apply(v.e)]
    return SdpElem(e, groups.compose(act.desc, u.g, v.g))


def sdp_inv(act, u):
    ginv = groups.invert(act.desc, u.g)
    return SdpElem(act.theta(ginv).apply(u.e), ginv)


def sdp_mul_all(act, elems):
    """Fold a nonempty sequence of SdpElems with sdp_mul."""
    it = iter(elems)
    acc = next(it)
    for u in it:
        acc = sdp_mul(act, acc, u)
    return acc


def is_idempotent(act, u):
    return sdp_mul(act, u, u) == u


# -- computable (possibly infinite) semilattices -----------------------------

@dataclass
class ComputableSemilattice:
    """Callback view of a semilattice whose elements are hashable tokens.

    act(name, token, inverse) applies one generator (or its inverse) of
    the acting group; meet must satisfy the semilattice laws on every
    token actually materialized.  height, when given, must be constant on
    orbits and is asserted during traversal.
    """

    name: str
    meet: callable
    act: callable
    label: callable = staticmethod(str)
    sort_key: callable = None
    height: callable = None

    def __post_init__(self):
        if self.sort_key is None:
            self.sort_key = self.label


def _apply_elem(cs, desc, g, token):
    """Push a full group element through the per-generator callbacks."""
    word = groups.factor_into_generators(desc, g)
    t = token
    for lt in word:
        t = cs.act(desc.gen_names[abs(lt) - 1], t, lt < 0)
    return t


def orbit(target, subgroup_gens, seeds, budget):
    """Closure of seeds under the given group elements and their inverses.

    target is an Action (tokens are element indices) or a pair
    (ComputableSemilattice, GroupDesc).  Raises BudgetExceeded once more
    than budget distinct tokens appear; that outcome is inconclusive.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if isinstance(target, Action):
        def step(g, t, inv):
            h = groups.invert(target.desc, g) if inv else g
            return target.theta(h).apply(t)
        height = None
    else:
        cs, desc = target
        def step(g, t, inv):
            h = groups.invert(desc, g) if inv else g
            return _apply_elem(cs, desc, h, t)
        height = cs.height
    seen = dict.fromkeys(seeds)
    if len(seen) > budget:
        raise BudgetExceeded(len(seen))
    queue = list(seen)
    while queue:
        t = queue.pop(0)
        for g in subgroup_gens:
            for inv in (False, True):
                nt = step(g, t, inv)
                if height is not None and height(nt) != height(t):
                    raise ClosureViolation(
                        f"height changed along the action: {t!r} -> {nt!r}")
                if nt not in seen:
                    seen[nt] = None
                    if len(seen) > budget:
                        raise BudgetExceeded(len(seen))
                    queue.append(nt)
    return list(seen)


@dataclass
class FiniteInstance:
    """Output of restrict_locally_finite: a finite, validated instance."""

    semilattice: Semilattice
    action: "RestrictedAction"
    x1: list
    x2: list
    y_gens: list                     # ambient group elements generating H
    f_tokens: list
    tokens: list                     # row i of the semilattice is tokens[i]
    y_action: Action = field(repr=False, default=None)


class RestrictedAction:
    """Action of the ambient group on a finite subsemilattice of tokens.

    theta works for any ambient element that maps the token set into
    itself (every element of the generated subgroup does); intermediate
    tokens may roam outside the finite part.
    """

    def __init__(self, cs, desc, semilattice, tokens):
        self.cs = cs
        self.desc = desc
        self.semilattice = semilattice
        self.tokens = list(tokens)
        self._index = {t: i for i, t in enumerate(self.tokens)}
        self._cache = {}

    def theta(self, g):
        if g in self._cache:
            return self._cache[g]
        images = []
        for t in self.tokens:
            nt = _apply_elem(self.cs, self.desc, g, t)
            i = self._index.get(nt)
            if i is None:
                raise ClosureViolation(
                    f"{g} maps token {t!r} outside the reduced semilattice")
            images.append(i)
        aut = SAut(tuple(images))
        if not is_automorphism(self.semilattice, aut.perm):
            raise ClosureViolation(f"{g} does not act by a meet automorphism")
        self._cache[g] = aut
        return aut

    def apply(self, g, e):
        return self.theta(g).apply(e)


def restrict_locally_finite(cs, desc, x1, x2, budget):
    """Reduce an instance over a computable semilattice to a finite one.

    x1, x2 are lists of (token, group element) pairs.  The token parts are
    re-indexed into the reduced semilattice; group parts stay ambient.
    """
    pairs = list(x1) + list(x2)
    if not pairs:
        raise ValueError("need at least one generator pair")
    y_gens = list(dict.fromkeys(g for _, g in pairs))
    f_tokens = list(dict.fromkeys(t for t, _ in pairs))

    orb = orbit((cs, desc), y_gens, f_tokens, budget)

    # meet-closure of the orbit, still within budget
    closed = dict.fromkeys(orb)
    frontier = list(closed)
    while frontier:
        new = []
        for a in frontier:
            for b in list(closed):
                m = cs.meet(a, b)
                if m not in closed:
                    closed[m] = None
                    if len(closed) > budget:
                        raise BudgetExceeded(len(closed))
                    new.append(m)
        frontier = new
    tokens = sorted(closed, key=cs.sort_key)

    labels = [cs.label(t) for t in tokens]
    index = {t: i for i, t in enumerate(tokens)}
    table = [[index[cs.meet(a, b)] for b in tokens] for a in tokens]
    lattice = validate_meet_table(labels, table)

    action = RestrictedAction(cs, desc, lattice, tokens)
    images_y = []
    for g in y_gens:
        images_y.append(action.theta(g))  # raises ClosureViolation if H.E' leaves E'

    # the acting group, presented on the generator list Y in the same backend
    y_names = tuple(f"y{j + 1}" for j in range(len(y_gens)))
    if desc.kind == groups.FINITE_PERM:
        y_desc = groups.finite_perm_group(dict(zip(y_names, y_gens)))
    elif desc.kind == groups.FREE:
        y_desc = groups.free_group(names=y_names)
    else:
        y_desc = groups.free_abelian_group(names=y_names)
    y_action = build_action(lattice, y_desc, dict(zip(y_names, images_y)))

    nx1 = [SdpElem(index[t], g) for t, g in x1]
    nx2 = [SdpElem(index[t], g) for t, g in x2]
    return FiniteInstance(lattice, action, nx1, nx2, y_gens, f_tokens,
                          tokens, y_action)


# -- built-in computable instances -------------------------------------------

def builtin_instance(name):
    """Named instances: 'example-s4', 'zchain', 'fs-2' .. 'fs-5'."""
    if name == "zchain":
        return _zchain_builtin()
    if name == "example-s4":
        return _leveled_builtin()
    if name.startswith("fs-"):
        try:
            k = int(name[3:])
        except ValueError:
            raise KeyError(name) from None
        return _fs_builtin(k)
    raise KeyError(name)


def _zchain_builtin():
    """The integers under min, with the integers acting by translation."""
    desc = groups.free_abelian_group(names=("t",))

    def act(_, m, inverse):
        return m - 1 if inverse else m + 1

    cs = ComputableSemilattice(
        name="zchain",
        meet=min,
        act=act,
        label=str,
        sort_key=lambda m: m,
    )
    return cs, desc


def _leveled_builtin():
    """An infinite semilattice layered by height, rotated levelwise by Z.

    Odd levels hold a single point (2n+1, 0); even level 2n holds the n
    residues (2n, r).  Distinct points on one level meet one level up; a
    translation by m rotates each even level by m.
    """
    desc = groups.free_abelian_group(names=("t",))

    def check(tok):
        k, r = tok
        if k % 2:
            if r != 0 or k < 1:
                raise ValueError(f"bad token {tok!r}")
        else:
            if k < 2 or not (0 <= r < k // 2):
                raise ValueError(f"bad token {tok!r}")
        return tok

    def meet(a, b):
        check(a)
        check(b)
        if a == b:
            return a
        if a[0] < b[0]:
            return a
        if b[0] < a[0]:
            return b
        return (a[0] - 1, 0)

    def act(_, tok, inverse):
        k, r = check(tok)
        if k % 2:
            return tok
        n = k // 2
        return (k, (r - 1) % n if inverse else (r + 1) % n)

    cs = ComputableSemilattice(
        name="example-s4",
        meet=meet,
        act=act,
        label=lambda t: f"({t[0]},{t[1]})",
        sort_key=lambda t: t,
        height=lambda t: t[0] - 1,
    )
    return cs, desc


def _fs_builtin(k):
    """Nonempty subsets of {1..k} under union, permuted pointwise."""
    from .semilattice import free_semilattice
    free_semilattice(k)  # validates the cap
    if k == 1:
        gens = {"s": (0,)}
    elif k == 2:
        gens = {"s": (1, 0)}
    else:
        gens = {"s": tuple([1, 0] + list(range(2, k))),
                "c": tuple(list(range(1, k)) + [0])}
    desc = groups.finite_perm_group(gens)
    perms = dict(zip(desc.gen_names, desc.gen_perms))

    def act(name, tok, inverse):
        p = perms[name]
        if inverse:
            p = groups.invert(desc, p)
        return frozenset(p[a - 1] + 1 for a in tok)

    cs = ComputableSemilattice(
        name=f"fs-{k}",
        meet=lambda a, b: frozenset(a | b),
        act=act,
        label=lambda t: "{" + ",".join(map(str, sorted(t))) + "}",
        sort_key=lambda t: (len(t), tuple(sorted(t))),
    )
    return cs, desc
