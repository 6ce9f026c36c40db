"""Greedy maximization of a monotone k-submodular function over a matroid."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction

from .core import DomainMismatch, LabeledSet
from .functions import KFunction, NormalizedFunction
from .matroids import Matroid


@dataclass(frozen=True)
class Step:
    j: int
    element: str
    label: int
    gain: Fraction
    value: Fraction
    membership_calls: int
    eval_calls: int


@dataclass
class GreedyTrace:
    steps: list[Step] = field(default_factory=list)
    solution: LabeledSet | None = None
    value: Fraction = Fraction(0)
    offset: Fraction = Fraction(0)
    membership_calls: int = 0
    eval_calls: int = 0
    final_membership_calls: int = 0
    lazy: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def iterations(self) -> int:
        return len(self.steps)

    @property
    def guarantee_void(self) -> bool:
        """A negative chosen gain proves f is not monotone."""
        return any(s.gain < 0 for s in self.steps)

    def key(self) -> tuple:
        """Everything that must agree between the plain and lazy scans."""
        return tuple((s.j, s.element, s.label, s.gain, s.value) for s in self.steps) + (self.solution,)


def _check_domain(f: KFunction, m: Matroid) -> None:
    if f.ground != m.ground:
        raise DomainMismatch("function and matroid use different ground sets")


def greedy_maximize(f: KFunction, m: Matroid, *, lazy: bool = False) -> tuple[LabeledSet, GreedyTrace]:
    """Repeatedly commit the feasible (element, label) pair of largest marginal gain.

    Gains are measured against the state at the start of each iteration.  Ties
    go to the earliest element in ground-set order, then the smallest label.
    The loop stops when no unassigned element can join the support, so the
    rank never has to be known in advance.

    ``f`` is normalized when f(0) != 0; ``trace.value`` is then the normalized
    objective and ``trace.offset`` the subtracted f(0).
    """
    _check_domain(f, m)
    ground, k = f.ground, f.k
    mc0, ec0 = m.calls, f.calls
    trace = GreedyTrace(lazy=lazy)
    s = LabeledSet.zero(ground, k)
    f0 = f.evaluate(s)
    g = f
    if f0 != 0:
        g = NormalizedFunction(f, offset=f0)
        trace.offset = f0
        trace.notes.append(f"f(0) = {f0} was subtracted to normalize the objective")
    scan = _lazy_scan if lazy else _plain_scan
    scan(g, m, s, trace)
    trace.membership_calls = m.calls - mc0
    trace.eval_calls = f.calls - ec0
    if trace.guarantee_void:
        trace.notes.append("a chosen gain was negative: f is not monotone and the 1/2 bound does not apply")
    return trace.solution, trace


def _plain_scan(g: KFunction, m: Matroid, s: LabeledSet, trace: GreedyTrace) -> None:
    # Elements once infeasible stay infeasible as the support grows, so they are
    # never queried again.  From the second iteration on one feasible element is
    # located before any evaluation, so the last (empty) pass spends no
    # evaluations; the first pass skips this probe, which would otherwise cost an
    # extra query whenever the rank is 1.
    n = g.ground.n
    k = g.k
    value = Fraction(0)
    support: set[int] = set()
    dead: set[int] = set()
    j = 0
    while True:
        mc, ec = m.calls, g.calls
        alive = [p for p in range(n) if p not in support and p not in dead]
        feasible: set[int] = set()
        if j > 0:
            for p in alive:
                if m.is_independent(frozenset(support | {p})):
                    feasible.add(p)
                    break
                dead.add(p)
            if not feasible:
                trace.final_membership_calls = m.calls - mc
                break
            alive = [p for p in alive if p not in dead]
        candidates = []
        for p in alive:
            for i in range(1, k + 1):
                candidates.append((g.evaluate(s.assign(p, i)) - value, p, i))
        candidates.sort(key=lambda c: (-c[0], c[1], c[2]))
        chosen = None
        for gain, p, i in candidates:
            if p in dead:
                continue
            if p not in feasible:
                if not m.is_independent(frozenset(support | {p})):
                    dead.add(p)
                    continue
                feasible.add(p)
            chosen = (gain, p, i)
            break
        if chosen is None:
            trace.final_membership_calls = m.calls - mc
            break
        gain, p, i = chosen
        j += 1
        s = s.assign(p, i)
        support.add(p)
        value += gain
        trace.steps.append(Step(j, g.ground.elements[p], i, gain, value, m.calls - mc, g.calls - ec))
    trace.solution = s
    trace.value = value


_UNSEEN = (0, None)


def _lazy_scan(g: KFunction, m: Matroid, s: LabeledSet, trace: GreedyTrace) -> None:
    # Orthant submodularity makes every stored gain an upper bound on its current
    # value, so a freshly evaluated pair on top of the heap is the exact argmax.
    # Heap keys carry (element, label) so ties resolve exactly as in the plain scan.
    n, k = g.ground.n, g.k
    value = Fraction(0)
    support: set[int] = set()
    dead: set[int] = set()
    # entries: (unseen flag, -bound, position, label, iteration evaluated)
    heap = [(0, Fraction(0), p, i, 0) for p in range(n) for i in range(1, k + 1)]
    heapq.heapify(heap)
    j = 0
    while True:
        mc, ec = m.calls, g.calls
        feasible: set[int] = set()
        chosen = None
        while heap:
            unseen, negb, p, i, stamp = heap[0]
            if p in dead or p in support:
                heapq.heappop(heap)
                continue
            if p not in feasible:
                if not m.is_independent(frozenset(support | {p})):
                    dead.add(p)
                    heapq.heappop(heap)
                    continue
                feasible.add(p)
            heapq.heappop(heap)
            if stamp == j + 1:
                chosen = (-negb, p, i)
                break
            gain = g.evaluate(s.assign(p, i)) - value
            heapq.heappush(heap, (1, -gain, p, i, j + 1))
        if chosen is None:
            trace.final_membership_calls = m.calls - mc
            break
        gain, p, i = chosen
        j += 1
        s = s.assign(p, i)
        support.add(p)
        value += gain
        trace.steps.append(Step(j, g.ground.elements[p], i, gain, value, m.calls - mc, g.calls - ec))
    trace.solution = s
    trace.value = value


def guarantee_holds(f: KFunction, m: Matroid, s: LabeledSet, opt_value: Fraction) -> bool:
    """True iff ``s`` is feasible and 2 (f(s) - f(0)) >= ``opt_value``."""
    _check_domain(f, m)
    if not m.is_independent(s.support_positions()):
        return False
    value = f.evaluate(s) - f.evaluate(LabeledSet.zero(f.ground, f.k))
    return 2 * value >= Fraction(opt_value)
