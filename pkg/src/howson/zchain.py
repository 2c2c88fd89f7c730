"""The integer chain acted on by integer translations: E = Z (meet = min),
G = Z, with n sending m to n + m.

Elements of the semidirect product are plain integer pairs (m, n) with
(m, n)(m', n') = (min(m, n + m'), n + n') and (m, n)^-1 = (m - n, -n).
The action is not locally finite, so everything here is windowed: claims
are certified against finite product windows, never against the infinite
closure, and the certified flag says whether the window stabilized.
"""

from dataclasses import dataclass
from math import gcd

from .caps import WINDOW_CAP, cap
from .errors import CapExceeded, NotApplicable


def z_mul(u, v):
    return (min(u[0], u[1] + v[0]), u[1] + v[1])


def z_inv(u):
    return (u[0] - u[1], -u[1])


def z_is_idempotent(u):
    return u[1] == 0


def _symmetrize(x_elems):
    return list(dict.fromkeys([tuple(u) for u in x_elems]
                              + [z_inv(u) for u in x_elems]))


def bound_M(x_elems):
    """Every product of the symmetrized generators has first entry <= M."""
    if not x_elems:
        raise ValueError("X must be nonempty")
    return max(u[0] for u in _symmetrize(x_elems))


def gamma_period(x_elems):
    """gcd of the nonzero translation parts; 0 when X is idempotents only.

    The translation parts of the generated subsemigroup form a subgroup
    of Z, hence N * Z for this N.
    """
    if not x_elems:
        raise ValueError("X must be nonempty")
    n = 0
    for u in x_elems:
        n = gcd(n, abs(u[1]))
    return n


def window_lengths(x_elems, depth, size_cap=None):
    """Every product of at most depth symmetrized letters, with the least
    number of letters realizing it."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    limit = size_cap if size_cap is not None else cap(WINDOW_CAP)
    sym = _symmetrize(x_elems)
    lengths = {u: 1 for u in sym}
    frontier = list(sym)
    for d in range(2, depth + 1):
        new = []
        for u in frontier:
            for x in sym:
                v = z_mul(u, x)
                if v not in lengths:
                    lengths[v] = d
                    if len(lengths) > limit:
                        raise CapExceeded("window enumeration", limit)
                    new.append(v)
        frontier = new
    return lengths


def enumerate_window(x_elems, depth, size_cap=None):
    """The set of products of at most depth letters from X and inverses."""
    return set(window_lengths(x_elems, depth, size_cap))


@dataclass
class ResidueRecord:
    """Windowed decomposition data for one residue class of first entries."""

    residue: int
    m_i: int | None          # max first entry among class elements that translate
    s_prime: list            # idempotents of the class above m_i
    gens: list               # [(m_i, N)] + s_prime when m_i is known
    certified: bool


def decompose_zz1(x_elems, depth, size_cap=None):
    """Per-residue generating sets read off a product window.

    For each residue class i mod N present in the window, estimate the
    extremal translating element (M_i, N) and collect the idempotents
    above it.  certified means the estimates agree at depth and depth-1
    and (M_i, N) itself appears in the window.
    """
    n_period = gamma_period(x_elems)
    if n_period == 0:
        raise NotApplicable("all generators are idempotents (period 0)")
    lengths = window_lengths(x_elems, depth, size_cap)

    def estimates(level):
        per_class = {}
        for (m, n), ln in lengths.items():
            if ln > level:
                continue
            rec = per_class.setdefault(m % n_period, {"m_i": None, "sp": []})
            if n > 0:
                rec["m_i"] = m if rec["m_i"] is None else max(rec["m_i"], m)
        for (m, n), ln in lengths.items():
            if ln > level or n != 0:
                continue
            rec = per_class[m % n_period]
            if rec["m_i"] is not None and m > rec["m_i"]:
                rec["sp"].append((m, 0))
        for rec in per_class.values():
            rec["sp"].sort()
        return per_class

    now = estimates(depth)
    before = estimates(depth - 1) if depth > 1 else {}
    records = []
    for residue in sorted(now):
        est = now[residue]
        m_i = est["m_i"]
        if m_i is None:
            records.append(ResidueRecord(residue, None, [], [], False))
            continue
        gens = [(m_i, n_period)] + est["sp"]
        prev = before.get(residue)
        stable = (prev is not None and prev["m_i"] == m_i and prev["sp"] == est["sp"])
        certified = stable and (m_i, n_period) in lengths \
            and lengths[(m_i, n_period)] <= depth
        records.append(ResidueRecord(residue, m_i, est["sp"], gens, certified))
    return records


def verify_zz1(x_elems, records, depth, depth2=None, size_cap=None):
    """Extensional window check of a decomposition.

    Forward: every class element of the depth window must appear in the
    generators' window of depth depth2.  Rewriting (r, s) over the class
    generators takes about (2(M_i - r) + s) / N + 2 letters, so depth2 is
    sized from the generator magnitudes unless given explicitly.

    Backward: each claimed generator must itself lie in X's window; every
    product of k generators then lies in the window of X at k times the
    generator depth by construction, which is the converse containment.
    """
    n_period = gamma_period(x_elems)
    if n_period == 0:
        raise NotApplicable("all generators are idempotents (period 0)")
    sym = _symmetrize(x_elems)
    cm = max(abs(u[0]) for u in sym)
    cn = max(abs(u[1]) for u in sym)
    if depth2 is None:
        depth2 = max(2 * depth + 4,
                     (2 * cm + 3 * depth * (cm + cn)) // n_period + 4)
    window = window_lengths(x_elems, depth, size_cap)
    per_class = {}
    for record in records:
        i = record.residue
        class_elems = {u for u in window if u[0] % n_period == i}
        if not record.gens:
            forward = not class_elems
            backward = True
        else:
            gen_window = enumerate_window(record.gens, depth2, size_cap)
            forward = class_elems <= gen_window
            backward = all(g in window for g in record.gens)
        per_class[i] = {"forward": forward, "backward": backward,
                        "ok": forward and backward}
    agreement = all(v["ok"] for v in per_class.values())
    return {"agreement": agreement, "classes": per_class,
            "depth": depth, "depth2": depth2}
