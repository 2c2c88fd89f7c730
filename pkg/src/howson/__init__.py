"""Exact computation in semidirect products of finite semilattices by groups."""

from .action_sdp import (Action, ComputableSemilattice, SdpElem, apply,
                         build_action, builtin_instance, is_idempotent, orbit,
                         restrict_locally_finite, sdp_inv, sdp_mul, theta_of)
from .groups import (GroupDesc, Subgroup, compose, coset_intersect,
                     finite_perm_group, free_abelian_group, free_group,
                     identity, intersect_subgroups, invert, member,
                     member_with_witness, rank, subgroup)
from .intersection import IntersectionResult, intersect, poly_bound, profile
from .oracle import ClosureSet, check_intersection, closure
from .rational import (SdpAutomaton, build_automaton, rank_bound, run,
                       s_of_e_subgroup, to_dot)
from .semilattice import (SAut, Semilattice, automorphisms, free_semilattice,
                          leq, subsemilattice_generated, validate_meet_table)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
