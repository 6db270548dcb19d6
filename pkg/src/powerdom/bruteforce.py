"""Brute-force oracles: ground truth for every other part of the toolkit.

Everything here is deliberately naive subset enumeration on top of a
self-contained observation fixpoint. No code is shared with the
incremental engine or the solver, so these results are an independent
check of both. Observed sets are plain integer bitmasks; the observation
closure is a monotone idempotent operator, so candidate selections can
be seeded with the union of precomputed single-vertex closures.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .errors import GuardExceededError, InfeasibleInstanceError
from .instance import SolutionSet


class _DenseRules:
    """Observation rules over a dense adjacency matrix.

    One fixpoint round computes every vertex's unobserved-neighbor count
    with a matrix-vector product and applies all enabled propagations at
    once; the rules are monotone, so batching them is sound.
    """

    def __init__(self, inst):
        n = inst.n
        self.n = n
        self.adj_bool = np.zeros((n, n), dtype=bool)
        for u, v in inst.edges:
            self.adj_bool[u, v] = True
            self.adj_bool[v, u] = True
        self.adj_int = self.adj_bool.astype(np.int32)
        self.propagating = np.array(inst.propagating, dtype=bool)

    def seed(self, selected):
        obs = np.zeros(self.n, dtype=bool)
        for s in selected:
            obs[s] = True
            obs |= self.adj_bool[s]
        return obs

    def fixpoint(self, obs):
        while True:
            unobs = ~obs
            if not unobs.any():
                return obs
            counts = self.adj_int @ unobs.astype(np.int32)
            sources = obs & self.propagating & (counts == 1)
            if not sources.any():
                return obs
            targets = unobs & self.adj_bool[sources].any(axis=0)
            obs = obs | targets

    def observed(self, selected):
        return self.fixpoint(self.seed(selected))


def observed_set(inst, selected):
    """Fixpoint of the domination and propagation rules, as a frozenset."""
    obs = _DenseRules(inst).observed(selected)
    return frozenset(np.flatnonzero(obs).tolist())


def is_power_dominating(inst, selected):
    return bool(_DenseRules(inst).observed(selected).all())


def oracle_pds(inst, k_max=None, max_undecided=25):
    """Exact optimum by enumerating the union of X with undecided subsets T.

    Subsets are tried in increasing cardinality, lexicographically within
    each cardinality, so the witness is deterministic. Raises
    InfeasibleInstanceError when no solution exists (within k_max, if
    given). `max_undecided` guards against exponential blowup; pass None
    together with a k_max to bound the enumeration by size instead.

    The observation closure is a monotone idempotent operator, so each
    candidate is seeded with the union of precomputed per-vertex closures
    before the final fixpoint run.
    """
    undecided = inst.undecided()
    if max_undecided is not None and len(undecided) > max_undecided:
        raise GuardExceededError(
            f"{len(undecided)} undecided vertices exceed guard {max_undecided}")
    if max_undecided is None and k_max is None:
        raise GuardExceededError("need k_max when the size guard is disabled")
    base = frozenset(inst.pre_selected)
    t_cap = len(undecided)
    if k_max is not None:
        if len(base) > k_max:
            raise InfeasibleInstanceError(
                f"pre-selected set alone exceeds k_max={k_max}")
        t_cap = min(t_cap, k_max - len(base))

    rules = _DenseRules(inst)
    closure = {v: rules.observed([v]) for v in undecided}
    base_obs = rules.observed(base)
    for t in range(t_cap + 1):
        for extra in combinations(undecided, t):
            obs = base_obs
            for v in extra:
                obs = obs | closure[v]
            if rules.fixpoint(obs).all():
                return len(base) + t, SolutionSet(base | frozenset(extra))
    raise InfeasibleInstanceError(
        "no feasible solution" + (f" of size <= {k_max}" if k_max is not None else ""))


def ipds_observed_set(ipds, selected):
    """Fixpoint under domination, propagation, booster and implication rules.

    Repeated-scan implementation; fine for the tiny instances the
    hardness-chain tests use. Plain instances (no booster/arc fields) are
    accepted, since they are the special case with both sets empty.
    """
    boosters = getattr(ipds, "booster_edges", ())
    arcs = getattr(ipds, "implication_arcs", ())
    observed = [False] * ipds.n
    for s in selected:
        observed[s] = True
        for w in ipds.adj[s]:
            observed[w] = True
    changed = True
    while changed:
        changed = False
        for u in range(ipds.n):
            if not observed[u]:
                continue
            if ipds.propagating[u]:
                unobs = [w for w in ipds.adj[u] if not observed[w]]
                if len(unobs) == 1:
                    observed[unobs[0]] = True
                    changed = True
        for u, v in boosters:
            if observed[u] != observed[v]:
                observed[u] = observed[v] = True
                changed = True
        for u, v in arcs:
            if observed[u] and not observed[v]:
                observed[v] = True
                changed = True
    return frozenset(v for v in range(ipds.n) if observed[v])


def oracle_ipds(ipds, k_max=None, max_undecided=25):
    """Exact optimum for instances with booster edges and implication arcs."""
    undecided = ipds.undecided()
    if max_undecided is not None and len(undecided) > max_undecided:
        raise GuardExceededError(
            f"{len(undecided)} undecided vertices exceed guard {max_undecided}")
    if max_undecided is None and k_max is None:
        raise GuardExceededError("need k_max when the size guard is disabled")
    base = frozenset(ipds.pre_selected)
    t_cap = len(undecided)
    if k_max is not None:
        if len(base) > k_max:
            raise InfeasibleInstanceError(
                f"pre-selected set alone exceeds k_max={k_max}")
        t_cap = min(t_cap, k_max - len(base))
    for t in range(t_cap + 1):
        for extra in combinations(undecided, t):
            sel = base | frozenset(extra)
            if len(ipds_observed_set(ipds, sel)) == ipds.n:
                return len(sel), SolutionSet(sel)
    raise InfeasibleInstanceError(
        "no feasible solution" + (f" of size <= {k_max}" if k_max is not None else ""))


def _is_fort(inst, subset):
    for v in range(inst.n):
        if v in subset or not inst.propagating[v]:
            continue
        if len(inst.adj_sets[v] & subset) == 1:
            return False
    return True


def enumerate_minimal_forts(inst, n_max=12):
    """All inclusion-minimal forts, by exhaustive subset enumeration."""
    if inst.n > n_max:
        raise GuardExceededError(f"n={inst.n} exceeds guard {n_max}")
    vertices = list(range(inst.n))
    forts = []
    for size in range(1, inst.n + 1):
        for combo in combinations(vertices, size):
            cand = frozenset(combo)
            if any(f < cand for f in forts):
                continue
            if _is_fort(inst, cand):
                forts.append(cand)
    return forts
