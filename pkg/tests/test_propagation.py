import random

import pytest

from powerdom import PdsInstance, observation_neighborhood, observe_from
from powerdom.bruteforce import observed_set

from conftest import cycle_graph, path_graph, random_instance, star_graph


def test_observe_path_propagates():
    assert observe_from(path_graph(3), {0}).observed_vertices() == {0, 1, 2}


def test_observe_blocked_by_nonpropagating():
    p3 = path_graph(3, propagating=[True, False, True])
    assert observe_from(p3, {0}).observed_vertices() == {0, 1}


def test_observe_star_leaf():
    # center keeps two unobserved neighbors, so no propagation
    assert observe_from(star_graph(3), {1}).observed_vertices() == {0, 1}


def test_select_cycle_closes():
    state = observe_from(cycle_graph(4), ())
    state.select(0)
    # independent fixpoint: each neighbor ends with one unobserved neighbor
    assert state.observed_vertices() == observed_set(cycle_graph(4), {0})
    assert state.observed_vertices() == {0, 1, 2, 3}


def test_select_on_fully_observed_changes_nothing():
    state = observe_from(path_graph(3), {0})
    before = state.observed_vertices()
    state.select(2)
    assert state.observed_vertices() == before


def test_select_order_confluent():
    edges = [(0, 1), (1, 2), (3, 4), (4, 5)]
    inst = PdsInstance(6, edges)
    a = observe_from(inst, ()).select(0).select(3).observed_vertices()
    b = observe_from(inst, ()).select(3).select(0).observed_vertices()
    assert a == b


def test_select_rejects_duplicates():
    state = observe_from(path_graph(3), {0})
    with pytest.raises(ValueError):
        state.select(0)
    with pytest.raises(ValueError):
        state.deselect(1)


def test_deselect_to_empty():
    for inst in (path_graph(4), star_graph(3), cycle_graph(5)):
        state = observe_from(inst, ())
        state.select(1)
        state.deselect(1)
        assert state.observed_vertices() == frozenset()
        assert not state.selected


def test_deselect_redundant_endpoint():
    # full-recompute oracle: one endpoint observes the whole path
    p5 = path_graph(5)
    state = observe_from(p5, {0, 4})
    state.deselect(4)
    assert state.observed_vertices() == observed_set(p5, {0})
    assert len(state.observed_vertices()) == 5


def test_deselect_star_center():
    star = star_graph(3)
    state = observe_from(star, {1, 0})
    state.deselect(0)
    assert state.observed_vertices() == observed_set(star, {1})
    assert state.observed_vertices() == {0, 1}


def test_observation_neighborhood():
    p4 = path_graph(4)
    assert observation_neighborhood(p4, ()) == frozenset()
    assert observation_neighborhood(star_graph(3), {0}) == {0, 1, 2, 3}
    with_x = path_graph(4, pre_selected=[3])
    assert observation_neighborhood(with_x, {0}) == {0, 1, 2, 3}


def _witness_is_forest(state):
    for v in range(state.inst.n):
        if not state.observed[v]:
            assert state.witness[v] is None
            continue
        seen = set()
        cur = v
        while True:
            assert cur not in seen, "witness cycle"
            seen.add(cur)
            wit = state.witness[cur]
            assert wit is not None
            if wit == ("self",):
                assert cur in state.selected
                break
            cur = wit[1]


def _exhausted(state):
    for v in range(state.inst.n):
        if state.observed[v] and state.inst.propagating[v]:
            unobs = [w for w in state.inst.adj[v] if not state.observed[w]]
            assert len(unobs) != 1


def test_incremental_matches_recompute():
    rng = random.Random(0)
    steps = 0
    for seed in range(60):
        inst = random_instance(seed, n_max=50, m_max=80, x_max=0, y_max=0)
        state = observe_from(inst, ())
        selected = set()
        for _ in range(40):
            if selected and rng.random() < 0.4:
                v = rng.choice(sorted(selected))
                state.deselect(v)
                selected.discard(v)
            else:
                free = [v for v in range(inst.n) if v not in selected]
                if not free:
                    continue
                v = rng.choice(free)
                state.select(v)
                selected.add(v)
            steps += 1
            ref = observe_from(inst, selected)
            assert state.observed_vertices() == ref.observed_vertices()
            _witness_is_forest(state)
            _exhausted(state)
    assert steps > 2000


def test_monotonicity():
    rng = random.Random(1)
    for seed in range(40):
        inst = random_instance(seed, n_max=20, x_max=0, y_max=0)
        verts = list(range(inst.n))
        rng.shuffle(verts)
        small = set(verts[:len(verts) // 3])
        large = small | set(verts[len(verts) // 3:2 * len(verts) // 3])
        obs_small = observe_from(inst, small).observed_vertices()
        obs_large = observe_from(inst, large).observed_vertices()
        assert obs_small <= obs_large
