"""Finite meet-semilattices: validation, order, automorphisms, closures.

Elements are referenced by index 0..n-1 internally; labels exist for the
CLI boundary only.  A semilattice is given by its full n x n meet table,
so the same code serves arbitrary user-supplied instances.
"""

from itertools import permutations

from .caps import AUT_N_CAP, FREE_SEMILATTICE_CAP
from .errors import CapExceeded, InvalidSemilattice


class Semilattice:
    """A validated finite meet-semilattice.

    Immutable after construction; build through validate_meet_table.
    """

    __slots__ = ("elements", "meet", "_leq", "bottom")

    def __init__(self, elements, meet, leq_rows, bottom):
        self.elements = tuple(elements)
        self.meet = meet          # tuple of tuples of indices
        self._leq = leq_rows      # leq_rows[i][j] iff i <= j
        self.bottom = bottom

    @property
    def n(self):
        return len(self.elements)

    def meet_of(self, i, j):
        return self.meet[i][j]

    def leq(self, i, j):
        return self._leq[i][j]

    def geq(self, i, j):
        return self._leq[j][i]

    def index(self, label):
        try:
            return self.elements.index(label)
        except ValueError:
            raise KeyError(f"unknown element label {label!r}") from None

    def label(self, i):
        return self.elements[i]

    def above(self, e):
        """Indices f with f >= e."""
        return [f for f in range(self.n) if self._leq[e][f]]

    def __eq__(self, other):
        return (isinstance(other, Semilattice)
                and self.elements == other.elements and self.meet == other.meet)

    def __hash__(self):
        return hash((self.elements, self.meet))

    def __repr__(self):
        return f"Semilattice({list(self.elements)!r}, n={self.n})"


class SAut:
    """A meet-preserving permutation of a semilattice's element indices."""

    __slots__ = ("perm",)

    def __init__(self, perm):
        self.perm = tuple(perm)

    def apply(self, i):
        return self.perm[i]

    def compose(self, other):
        """self after other: (self . other)(i) = self(other(i))."""
        return SAut(tuple(self.perm[j] for j in other.perm))

    def inverse(self):
        inv = [0] * len(self.perm)
        for i, j in enumerate(self.perm):
            inv[j] = i
        return SAut(tuple(inv))

    def is_identity(self):
        return all(i == j for i, j in enumerate(self.perm))

    @staticmethod
    def identity(n):
        return SAut(tuple(range(n)))

    def __eq__(self, other):
        return isinstance(other, SAut) and self.perm == other.perm

    def __lt__(self, other):
        return self.perm < other.perm

    def __hash__(self):
        return hash(self.perm)

    def __repr__(self):
        return f"SAut{self.perm}"


def validate_meet_table(elements, meet_table):
    """Validate labels and table, returning a Semilattice with cached order.

    Raises InvalidSemilattice naming the first failing law and witness
    triple; reasons are not-idempotent, not-commutative, not-associative,
    bad-index, duplicate-label.
    """
    elements = [str(x) for x in elements]
    n = len(elements)
    if n == 0:
        raise InvalidSemilattice("bad-index", "empty element list")
    if len(set(elements)) != n:
        dup = next(x for x in elements if elements.count(x) > 1)
        raise InvalidSemilattice("duplicate-label", repr(dup))
    if len(meet_table) != n:
        raise InvalidSemilattice("bad-index", f"table has {len(meet_table)} rows, expected {n}")
    rows = []
    for i, row in enumerate(meet_table):
        if len(row) != n:
            raise InvalidSemilattice("bad-index", f"row {i} has {len(row)} entries, expected {n}")
        for j, v in enumerate(row):
            if not isinstance(v, int) or isinstance(v, bool) or not (0 <= v < n):
                raise InvalidSemilattice("bad-index", f"entry ({i},{j}) = {v!r}")
        rows.append(tuple(row))
    meet = tuple(rows)

    for i in range(n):
        if meet[i][i] != i:
            raise InvalidSemilattice("not-idempotent", f"meet({i},{i}) = {meet[i][i]}")
    for i in range(n):
        for j in range(i + 1, n):
            if meet[i][j] != meet[j][i]:
                raise InvalidSemilattice(
                    "not-commutative", f"meet({i},{j}) = {meet[i][j]} != {meet[j][i]} = meet({j},{i})")
    for i in range(n):
        for j in range(n):
            mij = meet[i][j]
            for k in range(n):
                if meet[mij][k] != meet[i][meet[j][k]]:
                    raise InvalidSemilattice(
                        "not-associative",
                        f"(({i}^{j})^{k}) = {meet[mij][k]} != {meet[i][meet[j][k]]} = ({i}^({j}^{k}))")

    leq_rows = tuple(tuple(meet[i][j] == i for j in range(n)) for i in range(n))
    minima = [m for m in range(n) if all(leq_rows[m][j] for j in range(n))]
    if len(minima) != 1:
        # unreachable for a table passing the laws above; kept as a guard
        raise InvalidSemilattice("bad-index", f"expected one minimum, found {minima}")
    return Semilattice(elements, meet, leq_rows, minima[0])


def leq(s, i, j):
    """True iff i <= j in the derived order, i.e. meet(i, j) = i."""
    return s.leq(i, j)


def is_automorphism(s, perm):
    """Check that perm is a meet-preserving bijection of s's indices."""
    n = s.n
    if len(perm) != n or set(perm) != set(range(n)):
        return False
    meet = s.meet
    for i in range(n):
        pi = perm[i]
        row = meet[i]
        for j in range(i, n):
            if perm[row[j]] != meet[pi][perm[j]]:
                return False
    return True


def automorphisms(s, n_cap=AUT_N_CAP):
    """The full automorphism group of s, identity first, lexicographic order.

    Brute force over all permutations with early rejection; capped because
    Aut(E) feeds product state spaces that must stay enumerable.
    """
    n = s.n
    if n > n_cap:
        raise CapExceeded(f"automorphism enumeration for n = {n}", n_cap)
    meet = s.meet
    found = []
    for perm in permutations(range(n)):
        ok = True
        for i in range(n):
            pi = perm[i]
            row = meet[i]
            prow = meet[pi]
            for j in range(i, n):
                if perm[row[j]] != prow[perm[j]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            found.append(SAut(perm))
    # permutations() yields lexicographic order and the identity is lex-least
    return found


def subsemilattice_generated(s, subset):
    """Smallest meet-closed superset of subset, as a sorted tuple of indices."""
    if not subset:
        raise ValueError("subset must be nonempty")
    closed = set(subset)
    frontier = list(closed)
    while frontier:
        new = []
        for i in frontier:
            for j in list(closed):
                m = s.meet[i][j]
                if m not in closed:
                    closed.add(m)
                    new.append(m)
        frontier = new
    return tuple(sorted(closed))


def free_semilattice(k, k_cap=FREE_SEMILATTICE_CAP):
    """The semilattice of nonempty subsets of {1..k} under union.

    The order is reverse inclusion (X <= Y iff X contains Y), so the k-set
    is the bottom element.  Elements are listed by (size, contents).
    """
    if not (1 <= k <= k_cap):
        raise CapExceeded(f"free semilattice on k = {k} generators", k_cap)
    subsets = []
    for mask in range(1, 1 << k):
        subsets.append(tuple(i + 1 for i in range(k) if mask >> i & 1))
    subsets.sort(key=lambda t: (len(t), t))
    index = {t: i for i, t in enumerate(subsets)}
    labels = ["{" + ",".join(map(str, t)) + "}" for t in subsets]
    table = []
    for a in subsets:
        row = []
        for b in subsets:
            row.append(index[tuple(sorted(set(a) | set(b)))])
        table.append(row)
    return validate_meet_table(labels, table)
