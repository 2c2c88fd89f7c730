"""Default size caps, overridable through the HOWSON_CAP environment variable.

HOWSON_CAP replaces the large enumeration caps (closure sizes, automaton
states, path enumeration, window sizes).  The small structural caps (the
n <= 8 automorphism cap, the free-semilattice k <= 5 cap) are fixed; they
bound problem shape, not work volume.
"""

import os

AUT_N_CAP = 8              # semilattice size for automorphism enumeration
FREE_SEMILATTICE_CAP = 5   # generators of the subset semilattice
GROUP_CLOSURE_CAP = 10 ** 6
AUTOMATON_STATE_CAP = 10 ** 5
PATH_ENUM_CAP = 10 ** 7
ORACLE_CLOSURE_CAP = 10 ** 5
WINDOW_CAP = 10 ** 6
BOUND_BITS_CAP = 10 ** 7   # bit-length guard for the closed-form bounds


def cap(default):
    """Default cap, unless HOWSON_CAP is set to a positive integer."""
    raw = os.environ.get("HOWSON_CAP")
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        return default
    return value if value > 0 else default
