"""Minimum hitting set: exact branch and bound plus a greedy warm start.

Instances only ever grow (sets are added, never removed), so the optimum
of an earlier instance is a valid lower bound for any later one. The
exact solver exploits that through lower/upper bound hints.
"""

from __future__ import annotations

from .errors import InfeasibleInstanceError


class HittingSetInstance:
    """Family of vertex sets over a universe, with optional forced elements.

    Sets are intersected with the universe on entry; an intersection that
    comes up empty makes the instance infeasible and is reported when
    solving. Duplicate sets are dropped, supersets of existing sets are
    kept but flagged as dominated.
    """

    def __init__(self, universe, sets=(), forced=()):
        self.universe = frozenset(universe)
        self.forced = frozenset(forced) & self.universe
        self.sets = []
        self._seen = set()
        self.infeasible_sets = 0
        self.add_sets(sets)

    def add_sets(self, new_sets):
        """Grow the family; returns self for chaining."""
        for s in new_sets:
            cut = frozenset(s) & self.universe
            if not cut:
                self.infeasible_sets += 1
                continue
            if cut in self._seen:
                continue
            self._seen.add(cut)
            self.sets.append(cut)
        return self

    def dominated_indices(self):
        """Indices of sets that are supersets of some other set."""
        out = []
        for i, s in enumerate(self.sets):
            for j, t in enumerate(self.sets):
                if i != j and t < s:
                    out.append(i)
                    break
        return out

    def __len__(self):
        return len(self.sets)


def _to_masks(hs):
    elems = sorted(hs.universe)
    index = {v: i for i, v in enumerate(elems)}
    masks = [sum(1 << index[v] for v in s) for s in hs.sets]
    forced = sum(1 << index[v] for v in hs.forced)
    return elems, index, masks, forced


def solve_greedy(hs):
    """Max-coverage greedy hitting set; valid but not necessarily optimal."""
    if hs.infeasible_sets:
        raise InfeasibleInstanceError("family contains an unhittable set")
    chosen = set(hs.forced)
    unhit = [s for s in hs.sets if not s & chosen]
    while unhit:
        counts = {}
        for s in unhit:
            for v in s:
                counts[v] = counts.get(v, 0) + 1
        best = min(counts, key=lambda v: (-counts[v], v))
        chosen.add(best)
        unhit = [s for s in unhit if best not in s]
    return frozenset(chosen)


def _popcount(x):
    return bin(x).count("1")


def solve_exact(hs, lower_bound_hint=0, upper_bound_hint=None):
    """Minimum hitting set by branch and bound.

    Branches on the elements of a smallest unhit set (include vs. forbid),
    forces elements of singleton sets, prunes dominated supersets and uses
    a greedy disjoint-set packing as lower bound. All tie-breaks are by
    ascending element id, so the result is deterministic.

    Returns (hitting set, size). `lower_bound_hint` may come from a
    previous solve of a subset family (the optimum only grows when sets
    are added); `upper_bound_hint` is checked against the result.
    """
    if hs.infeasible_sets:
        raise InfeasibleInstanceError("family contains an unhittable set")
    elems, index, masks, forced = _to_masks(hs)

    # Dominated supersets are hit whenever their subset is.
    masks = sorted(set(masks), key=lambda m: (_popcount(m), m))
    kept = []
    for m in masks:
        if not any(k & m == k for k in kept):
            kept.append(m)
    masks = kept

    greedy = solve_greedy(hs)
    best_mask = sum(1 << index[v] for v in greedy)
    best_size = len(greedy)
    floor = max(lower_bound_hint, _popcount(forced))

    def packing_bound(unhit):
        used = 0
        count = 0
        for m in unhit:
            if not m & used:
                used |= m
                count += 1
        return count

    def recurse(chosen_mask, chosen_count, forbidden):
        nonlocal best_mask, best_size
        if best_size <= floor:
            return
        unhit = [m & ~forbidden for m in masks if not m & chosen_mask]
        if any(m == 0 for m in unhit):
            return
        if not unhit:
            if chosen_count < best_size:
                best_mask, best_size = chosen_mask, chosen_count
            return
        if chosen_count + packing_bound(unhit) >= best_size:
            return
        # Unit propagation: singleton sets force their element.
        units = 0
        for m in unhit:
            if m & (m - 1) == 0:
                units |= m
        if units:
            add = _popcount(units)
            if chosen_count + add < best_size:
                recurse(chosen_mask | units, chosen_count + add, forbidden)
            return
        pivot = min(unhit, key=lambda m: (_popcount(m), m))
        while pivot:
            bit = pivot & -pivot
            recurse(chosen_mask | bit, chosen_count + 1, forbidden)
            forbidden |= bit
            pivot &= ~bit

    if best_size > floor:
        recurse(forced, _popcount(forced), 0)
    out = frozenset(elems[i] for i in range(len(elems)) if best_mask >> i & 1)
    if upper_bound_hint is not None and len(out) > upper_bound_hint:
        raise AssertionError(
            f"optimum {len(out)} exceeds caller's upper bound {upper_bound_hint}")
    return out, len(out)
