import numpy as np
import pytest

from powerdom import (enumerate_minimal_forts, find_forts, fort_from_candidate,
                      is_fort, minimize_fort, oracle_pds)
from powerdom.errors import InfeasibleInstanceError
from powerdom.forts import FortFamily, closed_neighborhood
from powerdom.instance import PdsInstance

from conftest import path_graph, random_instance, star_graph


def test_is_fort_examples():
    p3 = path_graph(3)
    assert is_fort(p3, {0, 2})
    assert not is_fort(p3, {0})  # middle vertex sees exactly one
    assert not is_fort(p3, set())


def test_fort_from_candidate():
    p3 = path_graph(3)
    assert fort_from_candidate(p3, {0}) is None  # {0} already solves P3
    assert fort_from_candidate(p3, ()) == {0, 1, 2}
    star = star_graph(3)
    fort = fort_from_candidate(star, {1})
    assert fort == {2, 3} and is_fort(star, fort)


def test_minimize_fort_p3_irreducible():
    # every single re-selection empties the fort, so it stays whole
    p3 = path_graph(3)
    assert minimize_fort(p3, {0, 1, 2}, {0, 1, 2}) == {0, 1, 2}


def test_minimize_fort_pool_empty():
    p3 = path_graph(3)
    assert minimize_fort(p3, {0, 1, 2}, set()) == {0, 1, 2}


def test_minimize_fort_shrinks():
    star = star_graph(3)
    # selection {1} leaves {2,3} unobserved; no pool vertex can be
    # re-selected without emptying it
    fort = minimize_fort(star, {2, 3}, {2}, selected={1})
    assert fort == {2, 3}
    # two disjoint paths: re-selecting into one leaves the other as the fort
    two_p3 = PdsInstance(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
    fort = minimize_fort(two_p3, frozenset(range(6)), {0}, selected=())
    assert fort == {3, 4, 5}
    assert is_fort(two_p3, fort)


def test_find_forts_p3_matches_enumeration():
    p3 = path_graph(3)
    all_forts = {frozenset({0, 2}), frozenset({0, 1, 2})}
    for seed in range(10):
        for fort in find_forts(p3, frozenset(), seed=seed):
            assert fort in all_forts


def test_find_forts_deterministic():
    inst = random_instance(3, n_max=10, x_max=0, y_max=0)
    assert find_forts(inst, frozenset(), seed=9) == \
        find_forts(inst, frozenset(), seed=9)


def test_find_forts_empty_when_solved():
    p3 = path_graph(3, pre_selected=[1])
    assert find_forts(p3, frozenset(), seed=0) == []


def test_find_forts_infeasible():
    lone = PdsInstance(1, excluded=[0])
    with pytest.raises(InfeasibleInstanceError):
        find_forts(lone, frozenset(), seed=0)


def test_find_forts_properties():
    rng = np.random.default_rng(4)
    emitted = 0
    for seed in range(60):
        inst = random_instance(seed, n_max=10)
        hitting = frozenset(
            v for v in inst.undecided() if rng.random() < 0.3)
        try:
            forts = find_forts(inst, hitting, seed=seed)
        except InfeasibleInstanceError:
            continue
        base = hitting | inst.pre_selected
        if forts == []:
            # H plus X must already be a solution
            from powerdom.bruteforce import observed_set
            assert len(observed_set(inst, base)) == inst.n
        for fort in forts:
            emitted += 1
            assert is_fort(inst, fort)
            hood = closed_neighborhood(inst, fort)
            assert not hood & base  # never already hit
    assert emitted > 50


def test_fort_family_dedupes():
    p3 = path_graph(3)
    family = FortFamily()
    assert family.add(p3, frozenset({0, 2}))
    assert not family.add(p3, frozenset({0, 2}))
    assert len(family) == 1
    assert family.neighborhoods[0] == {0, 1, 2}


def test_every_optimum_hits_every_fort_neighborhood():
    for seed in range(30):
        inst = random_instance(seed, n_max=8, x_max=0, y_max=0)
        try:
            _, witness = oracle_pds(inst)
        except InfeasibleInstanceError:
            continue
        for fort in enumerate_minimal_forts(inst):
            assert witness.selected & closed_neighborhood(inst, fort)
