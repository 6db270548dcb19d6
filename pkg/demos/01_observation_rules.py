"""Walk through the two observation rules and the incremental engine.

A selected vertex observes its closed neighborhood (domination); an
observed propagating vertex with exactly one unobserved neighbor passes
observation on (propagation). The engine keeps the fixpoint up to date
while vertices are selected and deselected in any order.
"""

from powerdom import PdsInstance, observe_from

# A path on five vertices: 0 - 1 - 2 - 3 - 4
path = PdsInstance(5, [(i, i + 1) for i in range(4)])

state = observe_from(path, {0})
print("select {0} on P5      ->", sorted(state.observed_vertices()))
# domination covers 0 and 1, then propagation walks down the whole path

# A non-propagating middle vertex blocks the cascade.
blocked = PdsInstance(5, [(i, i + 1) for i in range(4)],
                      propagating=[True, True, False, True, True])
state = observe_from(blocked, {0})
print("P5, vertex 2 blocked  ->", sorted(state.observed_vertices()))

# A star never propagates from the center while two leaves are dark.
star = PdsInstance(4, [(0, 1), (0, 2), (0, 3)])
state = observe_from(star, {1})
print("select a star leaf    ->", sorted(state.observed_vertices()))

# Incremental updates: selections and deselections can interleave and the
# state always equals a from-scratch recomputation.
state = observe_from(path, set())
for step in ({0}, {4}, "drop 4", {3}):
    if step == "drop 4":
        state.deselect(4)
    else:
        state.select(next(iter(step)))
    print(f"after {step!s:<8}        ->", sorted(state.observed_vertices()),
          "selected:", sorted(state.selected))

check = observe_from(path, state.selected)
print("matches recompute     ->",
      state.observed_vertices() == check.observed_vertices())
