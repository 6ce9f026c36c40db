"""Brute-force optimum, the maximal-optimum size check, and the approximation-ratio harness."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable

from .core import BudgetExceeded, KSubmodError, LabeledSet, budget
from .functions import KFunction, NormalizedFunction, is_k_submodular, is_monotone
from .greedy import greedy_maximize
from .matroids import Matroid, PartitionMatroid, UniformMatroid, _independent_positions, rank


class GuaranteeViolation(KSubmodError):
    """Greedy fell below half the optimum; ``instance`` holds the offending input."""

    def __init__(self, message, instance=None):
        super().__init__(message)
        self.instance = instance


@dataclass
class ExactResult:
    opt_value: Fraction
    solution: LabeledSet
    max_opt_support_size: int
    count_optima: int
    optima: list[LabeledSet] = field(repr=False, default_factory=list)
    feasible_supports: frozenset = field(repr=False, default=frozenset())


def labeling_count(m: Matroid, k: int, *, limit: int | None = None) -> int:
    """Number of feasible labelings, the sum of k^|F| over independent F."""
    n = m.ground.n
    if isinstance(m, UniformMatroid):
        return sum(math.comb(n, s) * k**s for s in range(min(m.N, n) + 1))
    if isinstance(m, PartitionMatroid):
        total = 1
        for block, cap in zip(m.blocks, m.caps):
            total *= sum(math.comb(len(block), s) * k**s for s in range(min(cap, len(block)) + 1))
        return total
    cap = budget("labelings", limit)
    total = 0
    for F in _independent_positions(m, limit=limit):
        total += k ** len(F)
        if total > cap:
            break
    return total


def brute_force_opt(f: KFunction, m: Matroid, *, limit: int | None = None) -> ExactResult:
    """Enumerate every feasible labeling and keep the best.

    Values are measured after subtracting f(0).  Among optima the witness is
    the one with the lexicographically smallest label vector.
    """
    cap = budget("labelings", limit)
    count = labeling_count(m, f.k, limit=limit)
    if count > cap:
        raise BudgetExceeded(f"{count} feasible labelings exceed the exact budget {cap}")
    ground, k = f.ground, f.k
    g = NormalizedFunction(f)
    supports = frozenset(_independent_positions(m, limit=limit))
    best = None
    optima: list[LabeledSet] = []
    for F in supports:
        pos = sorted(F)
        for labs in product(range(1, k + 1), repeat=len(pos)):
            labels = [0] * ground.n
            for p, v in zip(pos, labs):
                labels[p] = v
            x = LabeledSet(ground, k, tuple(labels))
            v = g.evaluate(x)
            if best is None or v > best:
                best, optima = v, [x]
            elif v == best:
                optima.append(x)
    optima.sort(key=lambda x: x.labels)
    return ExactResult(
        opt_value=best,
        solution=optima[0],
        max_opt_support_size=max(len(x.support_positions()) for x in optima),
        count_optima=len(optima),
        optima=optima,
        feasible_supports=supports,
    )


def maximal_optima(f: KFunction, result: ExactResult) -> list[LabeledSet]:
    """Optima that admit no feasible single assignment keeping the optimal value."""
    g = NormalizedFunction(f)
    out = []
    for x in result.optima:
        supp = x.support_positions()
        extendable = False
        for p in range(x.ground.n):
            if p in supp or supp | {p} not in result.feasible_supports:
                continue
            if any(g.evaluate(x.assign(p, i)) == result.opt_value for i in range(1, x.k + 1)):
                extendable = True
                break
        if not extendable:
            out.append(x)
    return out


def lemma1_check(f: KFunction, m: Matroid, *, result: ExactResult | None = None, limit: int | None = None) -> bool:
    """Every maximal optimal solution has support size equal to the rank."""
    result = result or brute_force_opt(f, m, limit=limit)
    M = rank(m)
    maximal = maximal_optima(f, result)
    return bool(maximal) and all(len(x.support_positions()) == M for x in maximal)


@dataclass
class HarnessRow:
    instance: str
    n: int
    k: int
    matroid_type: str
    M: int
    greedy_value: Fraction
    opt_value: Fraction
    ratio: Fraction
    membership_calls: int
    eval_calls: int
    membership_budget: int
    eval_budget: int
    support_size: int
    lemma1: bool | None = None
    monotone_ksubmodular: bool | None = None

    @property
    def within_budget(self) -> bool:
        return self.membership_calls <= self.membership_budget and self.eval_calls <= self.eval_budget

    def csv_row(self) -> dict:
        from .core import format_value

        return {
            "instance": self.instance,
            "n": self.n,
            "k": self.k,
            "matroid_type": self.matroid_type,
            "M": self.M,
            "greedy_value": format_value(self.greedy_value),
            "opt_value": format_value(self.opt_value),
            "ratio": format_value(self.ratio),
            "membership_calls": self.membership_calls,
            "eval_calls": self.eval_calls,
        }


CSV_COLUMNS = (
    "instance", "n", "k", "matroid_type", "M", "greedy_value",
    "opt_value", "ratio", "membership_calls", "eval_calls",
)


@dataclass
class HarnessReport:
    rows: list[HarnessRow] = field(default_factory=list)

    @property
    def min_ratio(self) -> Fraction | None:
        return min((r.ratio for r in self.rows), default=None)

    @property
    def mean_ratio(self) -> Fraction | None:
        return sum((r.ratio for r in self.rows), Fraction(0)) / len(self.rows) if self.rows else None

    @property
    def membership_calls(self) -> int:
        return sum(r.membership_calls for r in self.rows)

    @property
    def eval_calls(self) -> int:
        return sum(r.eval_calls for r in self.rows)


def ratio(greedy_value: Fraction, opt_value: Fraction) -> Fraction:
    return Fraction(1) if opt_value == 0 else Fraction(greedy_value) / Fraction(opt_value)


def run_instance(instance, *, validate: bool = True, lemma1: bool = True, lazy: bool = False) -> HarnessRow:
    """Greedy against brute force on one instance (an ``ksubmod.instance.Instance``)."""
    f, m = instance.build()
    _, trace = greedy_maximize(f, m, lazy=lazy)
    f2, m2 = instance.build()
    M = rank(m2)
    result = brute_force_opt(f2, m2)
    n, k = instance.ground.n, instance.k
    row = HarnessRow(
        instance=instance.name,
        n=n,
        k=k,
        matroid_type=m.kind,
        M=M,
        greedy_value=trace.value,
        opt_value=result.opt_value,
        ratio=ratio(trace.value, result.opt_value),
        membership_calls=trace.membership_calls,
        eval_calls=trace.eval_calls,
        membership_budget=M * n,
        eval_budget=k * M * n + 1,
        support_size=len(trace.solution.support_positions()),
    )
    if validate and (k + 1) ** n <= budget("pairs"):
        row.monotone_ksubmodular = bool(is_monotone(f2)) and bool(is_k_submodular(f2))
    if lemma1 and row.monotone_ksubmodular is not False:
        row.lemma1 = lemma1_check(f2, m2, result=result)
    return row


def ratio_harness(instances: Iterable, **kwargs) -> HarnessReport:
    """Run greedy and brute force on every instance; halt on a ratio below 1/2."""
    report = HarnessReport()
    for inst in instances:
        row = run_instance(inst, **kwargs)
        report.rows.append(row)
        if row.ratio < Fraction(1, 2) and row.monotone_ksubmodular is not False:
            raise GuaranteeViolation(
                f"instance {inst.name}: greedy {row.greedy_value} < opt {row.opt_value} / 2", inst
            )
    return report


def adversarial_search(rng, *, n: int = 4, k: int = 2, iterations: int = 200) -> tuple[Fraction, object]:
    """Randomised hill-climb over weighted-coverage instances toward a low greedy ratio.

    Each step perturbs one weight of the current worst instance on a partition
    matroid and keeps the change when the ratio does not increase.
    """
    from .instance import random_instance

    best = random_instance(rng, n=n, k=k, matroid="partition", function="coverage", name="adv-0")
    best_ratio = run_instance(best, validate=False, lemma1=False).ratio
    for step in range(1, iterations + 1):
        cand = best.perturbed(rng, name=f"adv-{step}")
        r = run_instance(cand, validate=False, lemma1=False).ratio
        if r <= best_ratio:
            best, best_ratio = cand, r
    return best_ratio, best
