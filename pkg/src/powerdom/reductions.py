"""Safe reduction rules and the staged preprocessing driver.

Each rule either shrinks the graph or decides a vertex (pre-select or
exclude) while preserving the optimum of the extension instance. The
driver runs a DFS post-order pass of the cheap degree rules, then
alternates exhaustive local rounds with the two observation-neighborhood
rules until nothing fires.

"Observed" in rule guards always means observed by the pre-selected set
alone.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum

from .instance import PdsInstance, SolutionSet
from .propagation import observe_from


class RuleId(Enum):
    DEG1A = "Deg1a"
    DEG1B = "Deg1b"
    TRI = "Tri"
    DEG2A = "Deg2a"
    DEG2B = "Deg2b"
    DEG2C = "Deg2c"
    ONLYN = "OnlyN"
    ISOL = "Isol"
    OBSNP = "ObsNP"
    OBSE = "ObsE"
    DOM = "Dom"
    NECN = "NecN"


LOCAL_RULES = (RuleId.DEG1A, RuleId.DEG1B, RuleId.TRI, RuleId.DEG2A,
               RuleId.DEG2B, RuleId.DEG2C, RuleId.ONLYN, RuleId.ISOL,
               RuleId.OBSNP, RuleId.OBSE)
NONLOCAL_RULES = (RuleId.DOM, RuleId.NECN)

RULE_SUBSETS = {
    "all": frozenset(LOCAL_RULES) | frozenset(NONLOCAL_RULES),
    "local": frozenset(LOCAL_RULES),
    "nonlocal": frozenset(NONLOCAL_RULES),
    "local+dom": frozenset(LOCAL_RULES) | {RuleId.DOM},
    "local+necn": frozenset(LOCAL_RULES) | {RuleId.NECN},
    "none": frozenset(),
}

UND, PRE, EXC = 0, 1, 2


@dataclass(frozen=True)
class ReductionEvent:
    rule: RuleId
    site: tuple
    selected: tuple = ()
    excluded: tuple = ()
    deleted: tuple = ()
    made_nonpropagating: tuple = ()
    edges_added: tuple = ()
    edges_removed: tuple = ()


@dataclass
class ReductionLog:
    """Applied events plus the id mapping needed to lift kernel solutions.

    All vertex ids in events refer to the original instance; deleted
    vertices keep their ids (the kernel is compacted only on emission).
    """

    original: PdsInstance
    events: list = field(default_factory=list)
    kernel_to_original: tuple = ()

    def rule_counts(self):
        counts = {rule.value: 0 for rule in RuleId}
        for ev in self.events:
            counts[ev.rule.value] += 1
        return counts


class _Work:
    """Mutable reduction state over original vertex ids."""

    def __init__(self, inst):
        self.inst = inst
        self.n = inst.n
        self.alive = [True] * inst.n
        self.alive_count = inst.n
        self.adj = [set(inst.adj[v]) for v in range(inst.n)]
        self.propagating = list(inst.propagating)
        self.status = [UND] * inst.n
        for v in inst.pre_selected:
            self.status[v] = PRE
        for v in inst.excluded:
            self.status[v] = EXC
        self._obs = None

    # mutations ------------------------------------------------------------

    def delete(self, v):
        for w in list(self.adj[v]):
            self.adj[w].discard(v)
        self.adj[v].clear()
        self.alive[v] = False
        self.alive_count -= 1
        self._obs = None

    def add_edge(self, u, v):
        self.adj[u].add(v)
        self.adj[v].add(u)
        self._obs = None

    def remove_edge(self, u, v):
        self.adj[u].discard(v)
        self.adj[v].discard(u)
        self._obs = None

    def set_status(self, v, status):
        self.status[v] = status
        self._obs = None

    def set_nonpropagating(self, v):
        self.propagating[v] = False
        self._obs = None

    # queries ---------------------------------------------------------------

    def degree(self, v):
        return len(self.adj[v])

    def vertices(self):
        return [v for v in range(self.n) if self.alive[v]]

    def undecided(self):
        return [v for v in range(self.n)
                if self.alive[v] and self.status[v] == UND]

    def pre_selected(self):
        return [v for v in range(self.n)
                if self.alive[v] and self.status[v] == PRE]

    def edge_list(self):
        return sorted((u, v) for u in range(self.n) if self.alive[u]
                      for v in self.adj[u] if u < v)

    def edge_count(self):
        return sum(len(self.adj[v]) for v in range(self.n)
                   if self.alive[v]) // 2

    def observed(self):
        """Fixpoint of the observation rules for the current pre-selected set."""
        if self._obs is None:
            obs = [False] * self.n
            unobs = {v: len(self.adj[v]) for v in range(self.n) if self.alive[v]}
            queue = deque()

            def mark(v):
                obs[v] = True
                for u in self.adj[v]:
                    unobs[u] -= 1
                    if obs[u] and self.propagating[u] and unobs[u] == 1:
                        queue.append(u)
                if self.propagating[v] and unobs[v] == 1:
                    queue.append(v)

            for s in range(self.n):
                if self.alive[s] and self.status[s] == PRE:
                    if not obs[s]:
                        mark(s)
                    for w in self.adj[s]:
                        if not obs[w]:
                            mark(w)
            while queue:
                u = queue.popleft()
                if not (obs[u] and self.propagating[u] and unobs[u] == 1):
                    continue
                for w in self.adj[u]:
                    if not obs[w]:
                        mark(w)
                        break
            self._obs = frozenset(v for v in range(self.n)
                                  if self.alive[v] and obs[v])
        return self._obs

    def measure(self):
        return (self.alive_count + len(self.undecided()) + self.edge_count()
                + sum(1 for v in self.vertices() if self.propagating[v]))

    def observed_pair_count(self):
        obs = self.observed()
        return sum(1 for u, v in self.edge_list()
                   if u in obs and v in obs
                   and self.status[u] != PRE and self.status[v] != PRE)

    def snapshot(self):
        """Compact alive vertices into a PdsInstance; returns (inst, to_work)."""
        alive = self.vertices()
        to_compact = {v: i for i, v in enumerate(alive)}
        edges = [(to_compact[u], to_compact[v]) for u, v in self.edge_list()]
        inst = PdsInstance(
            len(alive), edges,
            propagating=[self.propagating[v] for v in alive],
            pre_selected=[to_compact[v] for v in alive if self.status[v] == PRE],
            excluded=[to_compact[v] for v in alive if self.status[v] == EXC],
            labels={to_compact[v]: self.inst.labels[v]
                    for v in alive if v in self.inst.labels})
        return inst, tuple(alive)


# --- rule guards and applications -----------------------------------------
# Each returns a ReductionEvent when the guard holds at the site and the
# work state was mutated, else None.


def _deg1a(work, v):
    if work.status[v] != UND or work.degree(v) != 1:
        return None
    w = next(iter(work.adj[v]))
    if work.status[w] == EXC:
        return None
    work.set_status(v, EXC)
    return ReductionEvent(RuleId.DEG1A, (v,), excluded=(v,))


def _deg1b(work, v):
    if work.status[v] != EXC or work.degree(v) != 1:
        return None
    w = next(iter(work.adj[v]))
    if work.propagating[w]:
        work.delete(v)
        work.set_nonpropagating(w)
        return ReductionEvent(RuleId.DEG1B, (v, w), deleted=(v,),
                              made_nonpropagating=(w,),
                              edges_removed=((min(v, w), max(v, w)),))
    if work.status[w] != EXC:
        work.delete(v)
        work.set_status(w, PRE)
        return ReductionEvent(RuleId.DEG1B, (v, w), deleted=(v,),
                              selected=(w,),
                              edges_removed=((min(v, w), max(v, w)),))
    return None


def _tri(work, site):
    x, y = site
    if not (work.alive[x] and work.alive[y]):
        return None
    if work.degree(x) != 2 or work.degree(y) != 2 or y not in work.adj[x]:
        return None
    # Pre-selected endpoints must stay; deleting them would drop a forced
    # vertex from the instance.
    if work.status[x] == PRE or work.status[y] == PRE:
        return None
    zx = work.adj[x] - {y}
    zy = work.adj[y] - {x}
    if zx != zy or not zx:
        return None
    z = next(iter(zx))
    if work.status[z] != UND:
        return None
    removed = tuple(sorted({tuple(sorted((x, y))), tuple(sorted((x, z))),
                            tuple(sorted((y, z)))}))
    work.set_status(z, PRE)
    work.delete(x)
    work.delete(y)
    return ReductionEvent(RuleId.TRI, (x, y), selected=(z,), deleted=(x, y),
                          edges_removed=removed)


def _deg2a(work, v):
    if work.status[v] != UND or not work.propagating[v] or work.degree(v) != 2:
        return None
    x, y = sorted(work.adj[v])
    if y in work.adj[x]:
        return None
    if work.status[x] == EXC and work.status[y] == EXC:
        return None
    work.set_status(v, EXC)
    return ReductionEvent(RuleId.DEG2A, (v,), excluded=(v,))


def _deg2b(work, v):
    if work.status[v] != EXC or not work.propagating[v] or work.degree(v) != 2:
        return None
    x, y = sorted(work.adj[v])
    if y in work.adj[x]:
        return None
    if not ((work.propagating[x] and work.degree(x) == 2)
            or (work.propagating[y] and work.degree(y) == 2)):
        return None
    work.delete(v)
    work.add_edge(x, y)
    return ReductionEvent(RuleId.DEG2B, (v,), deleted=(v,),
                          edges_added=((x, y),),
                          edges_removed=(tuple(sorted((x, v))),
                                         tuple(sorted((y, v)))))


def _deg2c(work, v):
    if work.status[v] != EXC or not work.propagating[v]:
        return None
    obs = work.observed()
    if v not in obs:
        return None
    unobserved = sorted(w for w in work.adj[v] if w not in obs)
    if len(unobserved) != 2:
        return None
    x, y = unobserved
    if work.degree(x) != 2 or work.degree(y) != 2:
        return None
    # Both must propagate for the pair to behave like one degree-two vertex.
    if not (work.propagating[x] and work.propagating[y]):
        return None
    if y in work.adj[x]:
        return None
    zx = next(iter(work.adj[x] - {v}))
    zy = next(iter(work.adj[y] - {v}))
    if zx == zy:
        return None
    # Keep the vertex that is still selectable; removing the only undecided
    # endpoint could make the instance infeasible.
    keep, rem = (x, y)
    if work.status[x] == EXC and work.status[y] == UND:
        keep, rem = (y, x)
    z_rem = zy if rem == y else zx
    work.remove_edge(keep, v)
    work.delete(rem)
    work.add_edge(keep, z_rem)
    return ReductionEvent(
        RuleId.DEG2C, (v, keep, rem), deleted=(rem,),
        edges_added=(tuple(sorted((keep, z_rem))),),
        edges_removed=tuple(sorted({tuple(sorted((keep, v))),
                                    tuple(sorted((rem, v))),
                                    tuple(sorted((rem, z_rem)))})))


def _onlyn(work, v):
    if work.status[v] != EXC or not work.propagating[v] or work.degree(v) != 2:
        return None
    x, y = sorted(work.adj[v])
    if work.propagating[x] or work.propagating[y]:
        return None
    statuses = {work.status[x], work.status[y]}
    if statuses != {EXC, UND}:
        return None
    target = x if work.status[x] == UND else y
    work.set_status(target, PRE)
    return ReductionEvent(RuleId.ONLYN, (v,), selected=(target,))


def _isol(work, v):
    if work.status[v] != UND or work.degree(v) != 0:
        return None
    work.set_status(v, PRE)
    return ReductionEvent(RuleId.ISOL, (v,), selected=(v,))


def _obsnp(work, v):
    if work.status[v] != EXC or work.propagating[v]:
        return None
    if v not in work.observed():
        return None
    removed = tuple(sorted(tuple(sorted((v, w))) for w in work.adj[v]))
    work.delete(v)
    return ReductionEvent(RuleId.OBSNP, (v,), deleted=(v,),
                          edges_removed=removed)


def _obse(work, site):
    v, w = site
    if not (work.alive[v] and work.alive[w]) or w not in work.adj[v]:
        return None
    if work.status[v] == PRE or work.status[w] == PRE:
        return None
    pre = work.pre_selected()
    if not pre:
        return None
    obs = work.observed()
    if v not in obs or w not in obs:
        return None
    x = pre[0]
    added = []
    work.remove_edge(v, w)
    for end in (v, w):
        if x not in work.adj[end]:
            work.add_edge(end, x)
            added.append(tuple(sorted((end, x))))
    return ReductionEvent(RuleId.OBSE, (v, w), edges_added=tuple(added),
                          edges_removed=(tuple(sorted((v, w))),))


_LOCAL_APPLY = {
    RuleId.DEG1A: _deg1a,
    RuleId.DEG1B: _deg1b,
    RuleId.TRI: _tri,
    RuleId.DEG2A: _deg2a,
    RuleId.DEG2B: _deg2b,
    RuleId.DEG2C: _deg2c,
    RuleId.ONLYN: _onlyn,
    RuleId.ISOL: _isol,
    RuleId.OBSNP: _obsnp,
    RuleId.OBSE: _obse,
}

_EDGE_SITE_RULES = {RuleId.OBSE, RuleId.TRI, RuleId.DOM}


def _sites(work, rule):
    if rule is RuleId.TRI:
        return [(x, y) for x, y in work.edge_list()]
    if rule is RuleId.OBSE:
        return work.edge_list()
    if rule is RuleId.DOM:
        und = work.undecided()
        return [(v, w) for v in und for w in und if v != w]
    return work.vertices()


def _dom_single(work, site):
    v, w = site
    if not (work.alive[v] and work.alive[w]) or v == w:
        return None
    if work.status[v] != UND or work.status[w] != UND:
        return None
    snap, to_work = work.snapshot()
    to_snap = {orig: i for i, orig in enumerate(to_work)}
    state = observe_from(snap, snap.pre_selected | {to_snap[v]})
    closed = work.adj[w] | {w}
    if all(state.is_observed(to_snap[t]) for t in closed):
        work.set_status(w, EXC)
        return ReductionEvent(RuleId.DOM, (v, w), excluded=(w,))
    return None


def _necn_single(work, v):
    if not work.alive[v] or work.status[v] != UND:
        return None
    snap, to_work = work.snapshot()
    to_snap = {orig: i for i, orig in enumerate(to_work)}
    others = {to_snap[u] for u in work.undecided() if u != v}
    state = observe_from(snap, snap.pre_selected | others)
    if not state.is_complete():
        work.set_status(v, PRE)
        return ReductionEvent(RuleId.NECN, (v,), selected=(v,))
    return None


@dataclass
class RuleApplication:
    changed: bool
    instance: PdsInstance
    event: ReductionEvent | None
    to_original: tuple


def apply_rule_once(inst, rule, site, obs=None):
    """Apply one rule at one site if its guard holds.

    `site` is a vertex id for vertex rules, an edge pair for Tri/ObsE and
    an ordered vertex pair for Dom. `obs` may carry a precomputed
    observation state for the pre-selected set; it is only a cache seed.
    Returns a RuleApplication whose instance is compacted to dense ids
    with `to_original` mapping kernel ids back.
    """
    work = _Work(inst)
    if obs is not None:
        work._obs = obs.observed_vertices()
    if rule is RuleId.DOM:
        event = _dom_single(work, site)
    elif rule is RuleId.NECN:
        event = _necn_single(work, site)
    else:
        fn = _LOCAL_APPLY[rule]
        if rule in (RuleId.TRI, RuleId.OBSE):
            event = fn(work, tuple(site))
        else:
            event = fn(work, site)
    if event is None:
        return RuleApplication(False, inst, None, tuple(range(inst.n)))
    kernel, to_original = work.snapshot()
    return RuleApplication(True, kernel, event, to_original)


def applicable_sites(inst, rule):
    """All sites where the rule's guard currently holds (no mutation)."""
    out = []
    for site in _sites(_Work(inst), rule):
        if apply_rule_once(inst, rule, site).changed:
            out.append(site)
    return out


class _Driver:
    def __init__(self, inst, rules):
        self.work = _Work(inst)
        self.rules = frozenset(rules)
        self.events = []
        self.budget = 8 * (inst.n + inst.m + 2) ** 2 + 64

    def _record(self, event):
        self.events.append(event)
        if len(self.events) > self.budget:
            raise RuntimeError(
                "reduction exceeded its polynomial event budget; "
                "a rule is likely cycling")

    def _apply_checked(self, fn, site):
        work = self.work
        before = work.measure()
        pairs_before = (work.observed_pair_count()
                        if fn is _obse else None)
        event = fn(work, site)
        if event is None:
            return False
        if fn is _obse:
            if work.observed_pair_count() >= pairs_before:
                raise AssertionError("ObsE did not reduce observed pairs")
        elif work.measure() >= before:
            raise AssertionError(
                f"{event.rule.value} did not decrease the reduction measure")
        self._record(event)
        return True

    def dfs_pass(self):
        inst = self.work.inst
        wanted = [r for r in (RuleId.DEG1A, RuleId.DEG1B, RuleId.DEG2A)
                  if r in self.rules]
        if not wanted:
            return
        seen = [False] * inst.n
        order = []
        for root in range(inst.n):
            if seen[root]:
                continue
            seen[root] = True
            stack = [(root, iter(inst.adj[root]))]
            while stack:
                v, it = stack[-1]
                advanced = False
                for w in it:
                    if not seen[w]:
                        seen[w] = True
                        stack.append((w, iter(inst.adj[w])))
                        advanced = True
                        break
                if not advanced:
                    order.append(v)
                    stack.pop()
        for v in order:
            changed = True
            while changed and self.work.alive[v]:
                changed = False
                for rule in wanted:
                    if self._apply_checked(_LOCAL_APPLY[rule], v):
                        changed = True
                        break

    def local_round(self):
        """Exhaust the local rules; returns True if anything fired."""
        enabled = [r for r in LOCAL_RULES if r in self.rules]
        if not enabled:
            return False
        fired_any = False
        progress = True
        while progress:
            progress = False
            for rule in enabled:
                fn = _LOCAL_APPLY[rule]
                for site in _sites(self.work, rule):
                    if rule in (RuleId.TRI, RuleId.OBSE):
                        ok = self._apply_checked(fn, site)
                    else:
                        ok = self.work.alive[site] and self._apply_checked(fn, site)
                    if ok:
                        progress = True
                        fired_any = True
                        break
                if progress:
                    break
        return fired_any

    def dom_pass(self):
        """One exhaustive pass of the domination rule."""
        work = self.work
        snap, to_work = work.snapshot()
        to_snap = {orig: i for i, orig in enumerate(to_work)}
        state = observe_from(snap, snap.pre_selected)
        fired = False
        undecided = work.undecided()
        for v in undecided:
            if work.status[v] != UND:
                continue
            state.select(to_snap[v])
            for w in undecided:
                if w == v or work.status[w] != UND:
                    continue
                closed = work.adj[w] | {w}
                if all(state.is_observed(to_snap[t]) for t in closed):
                    work.set_status(w, EXC)
                    self._record(ReductionEvent(RuleId.DOM, (v, w),
                                                excluded=(w,)))
                    fired = True
            state.deselect(to_snap[v])
        return fired

    def necn_pass(self):
        """One exhaustive pass of the necessary-node rule."""
        work = self.work
        snap, to_work = work.snapshot()
        to_snap = {orig: i for i, orig in enumerate(to_work)}
        undecided = work.undecided()
        base = snap.pre_selected | {to_snap[v] for v in undecided}
        state = observe_from(snap, base)
        fired = False
        for v in undecided:
            sv = to_snap[v]
            state.deselect(sv)
            necessary = not state.is_complete()
            state.select(sv)
            if necessary:
                work.set_status(v, PRE)
                self._record(ReductionEvent(RuleId.NECN, (v,), selected=(v,)))
                fired = True
        return fired

    def run(self):
        self.dfs_pass()
        while True:
            changed = self.local_round()
            if RuleId.DOM in self.rules:
                changed |= self.dom_pass()
            if RuleId.NECN in self.rules:
                changed |= self.necn_pass()
            if not changed:
                break


def apply_local_exhaustive(inst, rules=LOCAL_RULES):
    """Apply local rules until none fires anywhere; no DFS pre-pass."""
    driver = _Driver(inst, set(rules) & set(LOCAL_RULES))
    driver.local_round()
    kernel, to_original = driver.work.snapshot()
    log = ReductionLog(inst, driver.events, to_original)
    return kernel, log


def apply_nonlocal(inst, rule):
    """One exhaustive pass of Dom or NecN on its own."""
    driver = _Driver(inst, {rule})
    if rule is RuleId.DOM:
        driver.dom_pass()
    elif rule is RuleId.NECN:
        driver.necn_pass()
    else:
        raise ValueError(f"{rule} is not a non-local rule")
    kernel, to_original = driver.work.snapshot()
    log = ReductionLog(inst, driver.events, to_original)
    return kernel, log


def reduce_full(inst, rules=None):
    """Full preprocessing: DFS pass, then {local, Dom, NecN} to fixpoint.

    `rules` may be a RuleId iterable or one of the named subsets
    ('all', 'local', 'nonlocal', 'local+dom', 'local+necn', 'none').
    Returns (kernel, log, stats).
    """
    if rules is None:
        rules = RULE_SUBSETS["all"]
    elif isinstance(rules, str):
        rules = RULE_SUBSETS[rules]
    driver = _Driver(inst, rules)
    driver.run()
    kernel, to_original = driver.work.snapshot()
    log = ReductionLog(inst, driver.events, to_original)
    stats = {
        "rule_counts": log.rule_counts(),
        "events": len(log.events),
        "original_n": inst.n,
        "original_m": inst.m,
        "kernel_n": kernel.n,
        "kernel_m": kernel.m,
        "kernel_pre_selected": len(kernel.pre_selected),
        "kernel_excluded": len(kernel.excluded),
        "kernel_undecided": len(kernel.undecided()),
    }
    return kernel, log, stats


def lift_solution(log, kernel_solution):
    """Map a feasible kernel solution back to the original instance.

    Rule-selected vertices are part of the kernel's pre-selected set, so
    a feasible kernel solution already contains them; lifting is the id
    translation plus a feasibility re-check.
    """
    mapped = frozenset(log.kernel_to_original[v]
                       for v in kernel_solution.selected)
    lifted = SolutionSet(mapped | log.original.pre_selected)
    lifted.validate(log.original)
    if not observe_from(log.original, lifted.selected).is_complete():
        raise ValueError("kernel solution does not lift to a feasible solution")
    return lifted
