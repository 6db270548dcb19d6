"""Incremental observation engine.

Maintains the fixpoint of the two observation rules for a dynamic
selection set:

* domination: a selected vertex observes its closed neighborhood;
* propagation: an observed propagating vertex with exactly one
  unobserved neighbor observes that neighbor.

Selections can be added and removed in arbitrary order. Every observed
vertex carries a witness (selected itself / dominated by s / propagated
from u); deselection invalidates exactly the observations whose
derivation passed through the removed vertex and then re-propagates, so
the state always equals a from-scratch recomputation.
"""

from __future__ import annotations

from collections import deque

SELF = ("self",)


class ObservationState:
    """Single-writer observation fixpoint over an immutable instance."""

    __slots__ = ("inst", "selected", "observed", "witness", "prop_children",
                 "unobs_count", "observed_count")

    def __init__(self, inst):
        self.inst = inst
        self.selected = set()
        self.observed = [False] * inst.n
        self.witness = [None] * inst.n
        self.prop_children = [set() for _ in range(inst.n)]
        self.unobs_count = [inst.degree(v) for v in range(inst.n)]
        self.observed_count = 0

    def is_complete(self):
        return self.observed_count == self.inst.n

    def is_observed(self, v):
        return self.observed[v]

    def observed_vertices(self):
        return frozenset(v for v in range(self.inst.n) if self.observed[v])

    def unobserved_vertices(self):
        return frozenset(v for v in range(self.inst.n) if not self.observed[v])

    # -- internal helpers -------------------------------------------------

    def _mark(self, v, witness, queue):
        self.observed[v] = True
        self.witness[v] = witness
        self.observed_count += 1
        prop = self.inst.propagating
        for u in self.inst.adj[v]:
            self.unobs_count[u] -= 1
            if self.observed[u] and prop[u] and self.unobs_count[u] == 1:
                queue.append(u)
        if prop[v] and self.unobs_count[v] == 1:
            queue.append(v)

    def _propagate(self, queue):
        prop = self.inst.propagating
        while queue:
            u = queue.popleft()
            if not (self.observed[u] and prop[u] and self.unobs_count[u] == 1):
                continue
            for w in self.inst.adj[u]:
                if not self.observed[w]:
                    self._mark(w, ("prop", u), queue)
                    self.prop_children[u].add(w)
                    break

    def _unlink(self, v):
        w = self.witness[v]
        if w is not None and w[0] == "prop":
            self.prop_children[w[1]].discard(v)

    # -- public operations -------------------------------------------------

    def select(self, v):
        """Add v to the selection and advance the fixpoint incrementally."""
        if v in self.selected:
            raise ValueError(f"vertex {v} already selected")
        self.selected.add(v)
        queue = deque()
        if self.observed[v]:
            self._unlink(v)
            self.witness[v] = SELF
        else:
            self._mark(v, SELF, queue)
        for w in self.inst.adj[v]:
            if not self.observed[w]:
                self._mark(w, ("dom", v), queue)
        self._propagate(queue)
        return self

    def deselect(self, v):
        """Remove v, invalidate observations derived through it, re-propagate."""
        if v not in self.selected:
            raise ValueError(f"vertex {v} is not selected")
        self.selected.discard(v)
        # Invalidation closure. A propagation witness (u -> w) depends on u
        # and on all other neighbors of u being observed, so unobserving t
        # kills every propagation out of t and out of t's neighbors.
        invalid = []
        pending = deque()

        def invalidate(t):
            if not self.observed[t]:
                return
            self._unlink(t)
            self.observed[t] = False
            self.witness[t] = None
            self.observed_count -= 1
            for u in self.inst.adj[t]:
                self.unobs_count[u] += 1
            invalid.append(t)
            pending.append(t)

        if self.witness[v] == SELF:
            invalidate(v)
        for w in list(self.inst.adj[v]):
            wit = self.witness[w]
            if wit is not None and wit == ("dom", v):
                invalidate(w)
        while pending:
            t = pending.popleft()
            for w in list(self.prop_children[t]):
                invalidate(w)
            for u in self.inst.adj[t]:
                for w in [c for c in self.prop_children[u] if c != t]:
                    invalidate(w)
        # Repair: re-dominate what another selected vertex still covers,
        # then run propagation from the surviving boundary.
        queue = deque()
        for t in invalid:
            if self.observed[t]:
                continue
            if t in self.selected:
                self._mark(t, SELF, queue)
                continue
            for s in self.inst.adj[t]:
                if s in self.selected:
                    self._mark(t, ("dom", s), queue)
                    break
        for t in invalid:
            for u in self.inst.adj[t]:
                if self.observed[u]:
                    queue.append(u)
            if self.observed[t]:
                queue.append(t)
        self._propagate(queue)
        return self


def observe_from(inst, selected):
    """Fresh ObservationState for the given selection set."""
    state = ObservationState(inst)
    queue = deque()
    for v in sorted(set(selected)):
        state.selected.add(v)
        if not state.observed[v]:
            state._mark(v, SELF, queue)
        else:
            state._unlink(v)
            state.witness[v] = SELF
        for w in inst.adj[v]:
            if not state.observed[w]:
                state._mark(w, ("dom", v), queue)
    state._propagate(queue)
    return state


def observation_neighborhood(inst, vertices=()):
    """Vertices observed when selecting `vertices` on top of the
    instance's pre-selected set."""
    return observe_from(inst, inst.pre_selected | set(vertices)).observed_vertices()
