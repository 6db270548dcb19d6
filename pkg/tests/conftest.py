"""Shared builders for randomized test corpora."""

import random

import pytest

from powerdom import PdsInstance, oracle_pds
from powerdom.errors import InfeasibleInstanceError
from powerdom.hardness import Circuit, IpdsInstance
from powerdom.instance import generate_random


def path_graph(n, **kw):
    return PdsInstance(n, [(i, i + 1) for i in range(n - 1)], **kw)


def cycle_graph(n, **kw):
    edges = [(i, (i + 1) % n) for i in range(n)]
    return PdsInstance(n, edges, **kw)


def star_graph(leaves, **kw):
    return PdsInstance(leaves + 1, [(0, i) for i in range(1, leaves + 1)], **kw)


def complete_graph(n, **kw):
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    return PdsInstance(n, edges, **kw)


def disjoint_stars(count, leaves=3):
    edges = []
    step = leaves + 1
    for s in range(count):
        base = s * step
        edges.extend((base, base + i) for i in range(1, step))
    return PdsInstance(count * step, edges)


def random_instance(seed, n_max=12, m_max=20, fracs=(0.0, 0.5, 1.0),
                    x_max=2, y_max=2, n_min=1):
    """Random extension instance; pure function of the seed."""
    rng = random.Random(seed)
    n = rng.randint(n_min, n_max)
    m = rng.randint(0, min(m_max, n * (n - 1) // 2))
    inst = generate_random(n, m, rng.choice(list(fracs)), seed=seed)
    verts = list(range(n))
    rng.shuffle(verts)
    x = verts[:rng.randint(0, min(x_max, n))]
    rest = verts[len(x):]
    y = rest[:rng.randint(0, min(y_max, len(rest)))]
    return inst.replace(pre_selected=x, excluded=y)


def random_ipds_instance(seed, n_max=5, with_xy=True, with_arcs=True,
                         with_boosters=True):
    rng = random.Random(seed)
    n = rng.randint(1, n_max)
    m = rng.randint(0, n * (n - 1) // 2)
    base = generate_random(n, m, rng.choice([0.0, 0.5]), seed=seed)
    boosters = [e for e in base.edges if rng.random() < 0.3] \
        if with_boosters else []
    arcs = []
    if with_arcs:
        for _ in range(rng.randint(0, 2)):
            u, v = rng.randrange(n), rng.randrange(n)
            if u != v and (u, v) not in arcs:
                arcs.append((u, v))
    x, y = [], []
    if with_xy:
        verts = list(range(n))
        rng.shuffle(verts)
        x = verts[:rng.randint(0, 1)]
        y = [v for v in verts[1:3] if rng.random() < 0.5]
    return IpdsInstance(n, base.edges, base.propagating, x, y,
                        booster_edges=boosters, implication_arcs=arcs)


def random_circuit(seed, max_inputs=4, max_gates=4):
    """Random monotone circuit; sinks are collected by the output node."""
    rng = random.Random(seed)
    n_in = rng.randint(1, max_inputs)
    n_gates = rng.randint(1, max_gates)
    nodes = [(f"x{i}", ("in", ())) for i in range(n_in)]
    names = [name for name, _ in nodes]
    for g in range(n_gates):
        kind = rng.choice(["and", "or"])
        k = rng.randint(1, min(3, len(names)))
        children = tuple(sorted(rng.sample(names, k)))
        name = f"g{g}"
        nodes.append((name, (kind, children)))
        names.append(name)
    consumed = {c for _, (_, children) in nodes for c in children}
    sinks = tuple(name for name in names if name not in consumed)
    nodes.append(("out", ("out", sinks)))
    return Circuit(nodes)


def oracle_gamma(inst, **kw):
    """Brute-force optimum, None when infeasible."""
    try:
        return oracle_pds(inst, **kw)[0]
    except InfeasibleInstanceError:
        return None


def _with_pattern(seed, build):
    """Small random base instance plus a disjoint injected rule pattern.

    `build(rng, n0)` returns (fresh vertex count, edges, propagating
    overrides, pre-selected, excluded, site) with vertex ids starting at
    n0. The base stays disjoint from the pattern so the rule guard is
    guaranteed to hold at the returned site.
    """
    rng = random.Random(seed)
    base = random_instance(rng.randrange(10**6), n_max=6, m_max=8,
                           x_max=1, y_max=1, n_min=0)
    n0 = base.n
    extra, edges, prop_false, pre, exc, site = build(rng, n0)
    n = n0 + extra
    propagating = list(base.propagating) + [True] * extra
    for v in prop_false:
        propagating[v] = False
    inst = PdsInstance(
        n, list(base.edges) + edges, propagating,
        set(base.pre_selected) | set(pre), set(base.excluded) | set(exc))
    return inst, site


def rule_pattern_instance(rule_name, seed):
    """Instance guaranteed to match the named rule's guard, plus the site."""
    def deg1a(rng, n0):
        v, w = n0, n0 + 1
        return 2, [(v, w)], [], [], [], v

    def deg1b(rng, n0):
        v, w = n0, n0 + 1
        if rng.random() < 0.5:
            return 2, [(v, w)], [], [], [v], v  # w propagating
        return 2, [(v, w)], [w], [], [v], v  # w non-propagating: select w

    def tri(rng, n0):
        x, y, z = n0, n0 + 1, n0 + 2
        exc = [v for v in (x, y) if rng.random() < 0.4]
        return 3, [(x, y), (x, z), (y, z)], [], [], exc, (x, y)

    def deg2a(rng, n0):
        v, a, b = n0, n0 + 1, n0 + 2
        exc = [a] if rng.random() < 0.4 else []
        return 3, [(v, a), (v, b)], [], [], exc, v

    def deg2b(rng, n0):
        z1, x, v, y = n0, n0 + 1, n0 + 2, n0 + 3
        return 4, [(z1, x), (x, v), (v, y)], [], [], [v], v

    def deg2c(rng, n0):
        s, v, x, y, zx, zy = range(n0, n0 + 6)
        exc = [v] + [u for u in (x, y) if rng.random() < 0.3]
        return (6, [(s, v), (v, x), (v, y), (x, zx), (y, zy)],
                [], [s], exc, v)

    def onlyn(rng, n0):
        v, x, y = n0, n0 + 1, n0 + 2
        return 3, [(v, x), (v, y)], [x, y], [], [v, x], v

    def isol(rng, n0):
        return 1, [], [], [], [], n0

    def obsnp(rng, n0):
        s, v = n0, n0 + 1
        return 2, [(s, v)], [v], [s], [v], v

    def obse(rng, n0):
        s, v, w = n0, n0 + 1, n0 + 2
        exc = [u for u in (v, w) if rng.random() < 0.3]
        return 3, [(s, v), (s, w), (v, w)], [], [s], exc, (v, w)

    def dom(rng, n0):
        c, w = n0, n0 + 1
        return 2, [(c, w)], [], [], [], (c, w)

    def necn(rng, n0):
        return 1, [], [], [], [], n0

    builders = {"Deg1a": deg1a, "Deg1b": deg1b, "Tri": tri, "Deg2a": deg2a,
                "Deg2b": deg2b, "Deg2c": deg2c, "OnlyN": onlyn, "Isol": isol,
                "ObsNP": obsnp, "ObsE": obse, "Dom": dom, "NecN": necn}
    return _with_pattern(seed, builders[rule_name])


@pytest.fixture(scope="session")
def small_corpus():
    """200 random extension instances with cached oracle optima."""
    items = []
    for seed in range(200):
        inst = random_instance(seed)
        items.append((inst, oracle_gamma(inst)))
    return items
