"""Forts and the candidate-sequence fort heuristic.

A fort is a non-empty vertex set F such that no propagating vertex
outside F is adjacent to exactly one vertex of F. Any power dominating
set must intersect the closed neighborhood of every fort, which is what
turns fort families into hitting set instances.
"""

from __future__ import annotations

import numpy as np

from .errors import InfeasibleInstanceError
from .propagation import observe_from


def is_fort(inst, vertices):
    """Check the fort condition for a vertex set."""
    fort = frozenset(vertices)
    if not fort:
        return False
    for v in range(inst.n):
        if v in fort or not inst.propagating[v]:
            continue
        if len(inst.adj_sets[v] & fort) == 1:
            return False
    return True


def closed_neighborhood(inst, vertices):
    out = set(vertices)
    for v in vertices:
        out.update(inst.adj[v])
    return frozenset(out)


def fort_from_candidate(inst, selected):
    """The unobserved remainder of a candidate selection, or None.

    Whatever remains unobserved after exhausting the observation rules is
    a fort: an observed propagating vertex with exactly one unobserved
    neighbor would contradict exhaustiveness.
    """
    state = observe_from(inst, selected)
    if state.is_complete():
        return None
    return state.unobserved_vertices()


def minimize_fort(inst, fort, pool, selected=()):
    """Shrink a fort by re-selecting pool vertices that keep it non-empty.

    Walks the pool in ascending id order, single pass. Each re-selection
    that leaves the unobserved set non-empty is kept, so the result is the
    unobserved set of an enlarged selection and therefore still a fort.
    `selected` is the candidate selection that generated `fort`.
    """
    if not pool:
        return frozenset(fort)
    state = observe_from(inst, selected)
    kept = []
    for p in sorted(pool):
        if p in state.selected:
            continue
        state.select(p)
        if state.is_complete():
            state.deselect(p)
        else:
            kept.append(p)
    return state.unobserved_vertices()


class FortFamily:
    """Fort neighborhoods collected for the hitting set instance.

    Neighborhoods are deduplicated as sets; each one remembers a
    generating fort.
    """

    def __init__(self):
        self.neighborhoods = []
        self.forts = []
        self._seen = set()

    def __len__(self):
        return len(self.neighborhoods)

    def add(self, inst, fort):
        hood = closed_neighborhood(inst, fort)
        if hood in self._seen:
            return False
        self._seen.add(hood)
        self.neighborhoods.append(hood)
        self.forts.append(frozenset(fort))
        return True


def find_forts(inst, hitting_set, seed=0):
    """Candidate-sequence fort heuristic.

    Splits the vertices into X (pre-selected), Y (excluded), H (the
    hitting set) and the undecided remainder U. Starting from the full
    candidate (all of H, X and U selected), vertices of U are swept out one at a time
    in a seeded random order; a removal that breaks the solution emits the
    unobserved set as a fort (minimized against the removed pool) and is
    undone on the next step. Every emitted fort neighborhood is disjoint
    from H and X, and at least one fort is returned whenever H with X is not
    already a solution.

    Randomness comes from numpy's PCG64 generator, so a fixed seed
    reproduces the fort list on any platform.
    """
    hitting_set = frozenset(hitting_set)
    base = hitting_set | inst.pre_selected
    pool = [v for v in inst.undecided() if v not in base]
    state = observe_from(inst, base | set(pool))
    if not state.is_complete():
        raise InfeasibleInstanceError(
            "selecting every non-excluded vertex does not observe the graph")
    rng = np.random.default_rng(seed)
    order = [pool[int(i)] for i in rng.permutation(len(pool))]

    forts = []
    seen = set()
    removed = set()
    prev_was_solution = True
    for i, u in enumerate(order):
        if not prev_was_solution:
            state.select(order[i - 1])
            removed.discard(order[i - 1])
        state.deselect(u)
        removed.add(u)
        prev_was_solution = state.is_complete()
        if prev_was_solution:
            continue
        reselect_pool = sorted(removed - {u})
        kept = []
        for p in reselect_pool:
            state.select(p)
            if state.is_complete():
                state.deselect(p)
            else:
                kept.append(p)
        fort = state.unobserved_vertices()
        for p in kept:
            state.deselect(p)
        if fort not in seen:
            seen.add(fort)
            forts.append(fort)
    return forts
