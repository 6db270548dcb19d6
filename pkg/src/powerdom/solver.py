"""Exact solving: reduce, split, implicit hitting set per subinstance.

The kernel loop alternates exact hitting set solves over the collected
fort neighborhoods with fort generation for the failed candidate, so the
hitting set optimum is an anytime lower bound while greedy completions
provide anytime upper bounds.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .decompose import merge_solutions, split
from .errors import InfeasibleInstanceError
from .forts import FortFamily, find_forts
from .hittingset import HittingSetInstance, solve_exact
from .instance import SolutionSet
from .propagation import observe_from
from .reductions import RULE_SUBSETS, lift_solution, reduce_full

OPTIMAL = "Optimal"
INFEASIBLE = "Infeasible"
TIMED_OUT = "TimedOut"


class BoundsTrace:
    """Timestamped lower/upper bound events; only improvements are kept."""

    def __init__(self):
        self.events = []
        self._lower = None
        self._upper = None

    def add_lower(self, t, value):
        if self._lower is None or value > self._lower:
            self._lower = value
            self.events.append((t, "lower", value))

    def add_upper(self, t, value):
        if self._upper is None or value < self._upper:
            self._upper = value
            self.events.append((t, "upper", value))

    @property
    def lower(self):
        return self._lower

    @property
    def upper(self):
        return self._upper

    def write_csv(self, sink):
        """CSV with header t_seconds,kind,value; sink is a path or file."""
        if hasattr(sink, "write"):
            self._write(sink)
        else:
            with open(sink, "w", encoding="utf-8") as fh:
                self._write(fh)

    def _write(self, fh):
        fh.write("t_seconds,kind,value\n")
        for t, kind, value in self.events:
            fh.write(f"{t:.6f},{kind},{value}\n")


@dataclass
class SolveResult:
    status: str
    solution: SolutionSet | None
    gamma_p: int | None
    lower_bound: int
    upper_bound: int | None
    fort_count: int
    hitting_set_solves: int
    wall_time: float
    rule_stats: dict = field(default_factory=dict)
    seed: int = 0


def greedy_complete(inst, h=()):
    """Extend h plus the pre-selected set to a feasible solution, then prune.

    Repeatedly selects the undecided vertex covering the most unobserved
    vertices in its closed neighborhood (ties: more unobserved propagating
    ones, then lowest id), then drops added vertices in reverse addition
    order while feasibility holds. The given h is never pruned.
    """
    base = frozenset(h) | inst.pre_selected
    state = observe_from(inst, base)
    decided = inst.pre_selected | inst.excluded
    added = []
    while not state.is_complete():
        best = None
        best_key = None
        for v in range(inst.n):
            if v in decided or v in state.selected:
                continue
            gain = sum(1 for w in inst.adj[v] if not state.is_observed(w))
            if not state.is_observed(v):
                gain += 1
            if gain == 0:
                continue
            prop_gain = sum(1 for w in inst.adj[v]
                            if not state.is_observed(w) and inst.propagating[w])
            key = (-gain, -prop_gain, v)
            if best_key is None or key < best_key:
                best, best_key = v, key
        if best is None:
            raise InfeasibleInstanceError(
                "no undecided vertex can extend the observed set")
        state.select(best)
        added.append(best)
    for v in reversed(added):
        state.deselect(v)
        if not state.is_complete():
            state.select(v)
    return SolutionSet(frozenset(state.selected))


def ihs_kernel_solve(sub, seed=0, time_limit=None, trace=None,
                     deadline=None, report=None, clock=None):
    """Implicit hitting set loop for one (sub)instance.

    Intended for kernels but correct on any instance. `report(kind, value)`
    receives the same bound events that land in `trace`; values count the
    instance's pre-selected vertices.
    """
    t0 = time.perf_counter()
    if deadline is None and time_limit is not None:
        deadline = t0 + time_limit
    now = clock if clock is not None else (lambda: time.perf_counter() - t0)
    trace = trace if trace is not None else BoundsTrace()

    def emit(kind, value):
        t = now()
        if kind == "lower":
            trace.add_lower(t, value)
        else:
            trace.add_upper(t, value)
        if report is not None:
            report(kind, value)

    def result(status, solution, gamma, lower, upper, forts, solves):
        return SolveResult(status, solution, gamma, lower, upper,
                           forts, solves, time.perf_counter() - t0, {}, seed)

    x_size = len(sub.pre_selected)
    if observe_from(sub, sub.pre_selected).is_complete():
        sol = SolutionSet(frozenset(sub.pre_selected))
        emit("lower", x_size)
        emit("upper", x_size)
        return result(OPTIMAL, sol, x_size, x_size, x_size, 0, 0)

    rng = np.random.default_rng(seed)
    family = FortFamily()
    universe = frozenset(sub.undecided())
    hs = HittingSetInstance(universe)

    def grow(hitting_set):
        forts = find_forts(sub, hitting_set, seed=rng)
        before = len(hs)
        for fort in forts:
            if family.add(sub, fort):
                hs.add_sets([family.neighborhoods[-1]])
        if hs.infeasible_sets:
            raise InfeasibleInstanceError(
                "a fort neighborhood contains no selectable vertex")
        if len(hs) == before:
            raise AssertionError("fort generation added no new neighborhood")

    grow(frozenset())
    best = greedy_complete(sub, ())
    emit("upper", len(best))
    lb_hint = 0
    solves = 0
    lower = x_size
    while True:
        if deadline is not None and time.perf_counter() > deadline:
            return result(TIMED_OUT, best, None, lower, len(best),
                          len(family), solves)
        hit, size = solve_exact(hs, lower_bound_hint=lb_hint)
        solves += 1
        lb_hint = size
        lower = x_size + size
        emit("lower", lower)
        if lower > len(best):
            raise AssertionError("lower bound exceeded a feasible upper bound")
        if observe_from(sub, sub.pre_selected | hit).is_complete():
            sol = SolutionSet(frozenset(sub.pre_selected | hit))
            emit("upper", lower)
            return result(OPTIMAL, sol, lower, lower, lower,
                          len(family), solves)
        if lower == len(best):
            # Bound sandwich: the greedy incumbent is optimal.
            return result(OPTIMAL, best, lower, lower, lower,
                          len(family), solves)
        cand = greedy_complete(sub, hit)
        if len(cand) < len(best):
            best = cand
        emit("upper", len(best))
        if lower == len(best):
            return result(OPTIMAL, best, lower, lower, lower,
                          len(family), solves)
        grow(hit)


def _solve_part(args):
    sub, seed, deadline = args
    trace = BoundsTrace()
    res = ihs_kernel_solve(sub, seed=seed, deadline=deadline, trace=trace)
    return res, trace.events


def solve(inst, reductions="all", seed=0, time_limit=None, trace=None,
          jobs=1):
    """Full pipeline: reduce, split, solve each part, merge, lift.

    `reductions` names a rule subset ('all', 'local', 'nonlocal',
    'local+dom', 'local+necn', 'none'). Deterministic for a fixed seed
    when no timeout occurs; subinstances are solved largest-first with a
    shared deadline.
    """
    t0 = time.perf_counter()
    deadline = t0 + time_limit if time_limit is not None else None
    trace = trace if trace is not None else BoundsTrace()

    def clock():
        return time.perf_counter() - t0

    if reductions not in RULE_SUBSETS:
        raise ValueError(f"unknown reduction subset {reductions!r}")
    kernel, log, stats = reduce_full(inst, reductions)

    def result(status, solution, gamma, lower, upper, forts, solves):
        return SolveResult(status, solution, gamma, lower, upper, forts,
                           solves, time.perf_counter() - t0,
                           stats["rule_counts"], seed)

    decomp = split(kernel)
    parts = decomp.parts
    x_size = len(kernel.pre_selected)

    # Structural bounds before any hitting set work: each component whose
    # inherited X does not already observe it needs at least one vertex.
    needs = []
    greedy_extra = []
    try:
        for part in parts:
            covered = observe_from(part.instance,
                                   part.instance.pre_selected).is_complete()
            needs.append(0 if covered else 1)
            if covered:
                greedy_extra.append(0)
            else:
                g = greedy_complete(part.instance, ())
                greedy_extra.append(len(g) - len(part.instance.pre_selected))
    except InfeasibleInstanceError:
        return result(INFEASIBLE, None, None, 0, None, 0, 0)

    trace.add_lower(clock(), x_size + sum(needs))
    trace.add_upper(clock(), x_size + sum(greedy_extra))

    seeds = [int(s.generate_state(1)[0])
             for s in np.random.SeedSequence(seed).spawn(max(1, len(parts)))]
    order = sorted(range(len(parts)), key=lambda i: -parts[i].instance.n)

    extras = dict(enumerate(greedy_extra))  # upper contribution per part
    lower_extras = dict(enumerate(needs))
    solutions = [None] * len(parts)
    fort_count = 0
    hs_solves = 0
    timed_out = False

    def aggregate(kind):
        if kind == "lower":
            trace.add_lower(clock(), x_size + sum(lower_extras.values()))
        else:
            trace.add_upper(clock(), x_size + sum(extras.values()))

    def adapter(i):
        part_x = len(parts[i].instance.pre_selected)

        def report(kind, value):
            extra = value - part_x
            if kind == "lower":
                if extra > lower_extras[i]:
                    lower_extras[i] = extra
                    aggregate("lower")
            else:
                if extra < extras[i]:
                    extras[i] = extra
                    aggregate("upper")
        return report

    try:
        if jobs > 1 and len(order) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(_solve_part, [
                    (parts[i].instance, seeds[i], deadline) for i in order]))
            for i, (res, _events) in zip(order, results):
                part_x = len(parts[i].instance.pre_selected)
                fort_count += res.fort_count
                hs_solves += res.hitting_set_solves
                if res.status == TIMED_OUT:
                    timed_out = True
                    lower_extras[i] = max(lower_extras[i],
                                          res.lower_bound - part_x)
                    solutions[i] = res.solution
                else:
                    lower_extras[i] = res.gamma_p - part_x
                    extras[i] = res.gamma_p - part_x
                    solutions[i] = res.solution
                aggregate("lower")
                aggregate("upper")
        else:
            for i in order:
                if deadline is not None and time.perf_counter() > deadline:
                    timed_out = True
                    break
                res = ihs_kernel_solve(parts[i].instance, seed=seeds[i],
                                       deadline=deadline, clock=clock,
                                       report=adapter(i))
                fort_count += res.fort_count
                hs_solves += res.hitting_set_solves
                if res.status == TIMED_OUT:
                    timed_out = True
                    solutions[i] = res.solution
                    break
                solutions[i] = res.solution
                lower_extras[i] = res.gamma_p - len(parts[i].instance.pre_selected)
                extras[i] = lower_extras[i]
    except InfeasibleInstanceError:
        return result(INFEASIBLE, None, None, 0, None, fort_count, hs_solves)

    if timed_out:
        lower = x_size + sum(lower_extras.values())
        upper = x_size + sum(extras.values())
        best = _assemble(decomp, solutions, log)
        return result(TIMED_OUT, best, None, lower, upper,
                      fort_count, hs_solves)

    part_solutions = [solutions[i] for i in range(len(parts))]
    merged = merge_solutions(decomp, part_solutions)
    lifted = lift_solution(log, merged)
    if not observe_from(inst, lifted.selected).is_complete():
        raise AssertionError("solver produced an infeasible solution")
    gamma = len(lifted)
    trace.add_lower(clock(), gamma)
    trace.add_upper(clock(), gamma)
    return result(OPTIMAL, lifted, gamma, gamma, gamma,
                  fort_count, hs_solves)


def _assemble(decomp, solutions, log):
    """Best feasible original-instance solution from partial results."""
    parts = []
    try:
        for part, sol in zip(decomp.parts, solutions):
            if sol is None:
                sol = greedy_complete(part.instance, ())
            parts.append(sol)
        merged = merge_solutions(decomp, parts)
        return lift_solution(log, merged)
    except InfeasibleInstanceError:
        return None
