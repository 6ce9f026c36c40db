"""Evaluation oracles for k-submodular functions and exhaustive axiom validators."""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from .core import (
    BudgetExceeded,
    DomainMismatch,
    GroundSet,
    LabeledSet,
    budget,
    format_value,
    to_value,
)


class KFunction:
    """Base evaluation oracle with a thread-safe call counter."""

    kind = "abstract"

    def __init__(self, ground: GroundSet, k: int):
        if k < 1:
            raise ValueError("k must be at least 1")
        self.ground = ground
        self.k = k
        self._calls = 0
        self._lock = threading.Lock()

    @property
    def calls(self) -> int:
        return self._calls

    def reset_calls(self) -> None:
        with self._lock:
            self._calls = 0

    def evaluate(self, x: LabeledSet) -> Fraction:
        if x.ground != self.ground or x.k != self.k:
            raise DomainMismatch("labeled set does not match the function's ground set or k")
        with self._lock:
            self._calls += 1
        return self._value(x.labels)

    __call__ = evaluate

    def _value(self, labels: tuple[int, ...]) -> Fraction:
        raise NotImplementedError

    def spec(self) -> dict:
        raise NotImplementedError(f"{type(self).__name__} has no file representation")


class TableFunction(KFunction):
    """Explicit value for every point of {0..k}^E, stored in index order."""

    kind = "table"

    def __init__(self, ground: GroundSet, k: int, values: Sequence):
        super().__init__(ground, k)
        size = (k + 1) ** ground.n
        if size > budget("table"):
            raise BudgetExceeded(f"table of (k+1)^n = {size} entries exceeds the table budget")
        if len(values) != size:
            raise ValueError(f"table needs {size} values, got {len(values)}")
        self.values = tuple(to_value(v) for v in values)

    @classmethod
    def from_mapping(cls, ground: GroundSet, k: int, mapping: Mapping) -> "TableFunction":
        """Keys are label tuples (or LabeledSets); the mapping must be total."""
        values = [None] * (k + 1) ** ground.n
        for key, v in mapping.items():
            labels = key.labels if isinstance(key, LabeledSet) else tuple(key)
            values[LabeledSet(ground, k, labels).index()] = v
        missing = [i for i, v in enumerate(values) if v is None]
        if missing:
            raise ValueError(
                f"table is not total: missing {LabeledSet.from_index(ground, k, missing[0])}"
                f" and {len(missing) - 1} more"
            )
        return cls(ground, k, values)

    @classmethod
    def tabulate(cls, f: KFunction) -> "TableFunction":
        return cls(f.ground, f.k, tabulate(f))

    def _value(self, labels):
        idx = 0
        for v in labels:
            idx = idx * (self.k + 1) + v
        return self.values[idx]

    def spec(self) -> dict:
        out = {}
        for idx, v in enumerate(self.values):
            x = LabeledSet.from_index(self.ground, self.k, idx)
            out[",".join(map(str, x.labels))] = format_value(v)
        return {"type": "table", "values": out}


class ModularFunction(KFunction):
    """f(x) = sum of gains[e][x(e)] over the support; gains must be nonnegative."""

    kind = "modular"

    def __init__(self, ground: GroundSet, k: int, gains: Mapping):
        super().__init__(ground, k)
        table = [[Fraction(0)] * (k + 1) for _ in range(ground.n)]
        for e, per_label in gains.items():
            p = ground.position(e)
            for i, g in per_label.items():
                i = int(i)
                if not 1 <= i <= k:
                    raise ValueError(f"label {i} outside 1..{k} for element {e!r}")
                g = to_value(g)
                if g < 0:
                    raise ValueError(f"gain for ({e!r}, {i}) is negative")
                table[p][i] = g
        self._gains = table

    def gain(self, e, i: int) -> Fraction:
        return self._gains[self.ground.position(e)][i]

    def _value(self, labels):
        return sum((self._gains[p][v] for p, v in enumerate(labels) if v), Fraction(0))

    def spec(self) -> dict:
        gains = {}
        for p, e in enumerate(self.ground.elements):
            row = {str(i): format_value(self._gains[p][i]) for i in range(1, self.k + 1) if self._gains[p][i]}
            if row:
                gains[e] = row
        return {"type": "modular", "gains": gains}


class WeightedCoverageFunction(KFunction):
    """f(x) = sum over items u of the largest weight(u, e, x(e)) among supported e.

    Missing weights are 0 and the empty maximum is 0.
    """

    kind = "weighted_coverage"

    def __init__(self, ground: GroundSet, k: int, universe: Sequence[str], weights: Mapping):
        super().__init__(ground, k)
        self.universe = tuple(universe)
        if len(set(self.universe)) != len(self.universe):
            raise ValueError("duplicate universe items")
        uindex = {u: q for q, u in enumerate(self.universe)}
        # w[p][i] -> list of (item position, weight)
        self._w = [[[] for _ in range(k + 1)] for _ in range(ground.n)]
        for u, per_elem in weights.items():
            if u not in uindex:
                raise KeyError(f"unknown universe item {u!r}")
            for e, per_label in per_elem.items():
                p = ground.position(e)
                for i, w in per_label.items():
                    i = int(i)
                    if not 1 <= i <= k:
                        raise ValueError(f"label {i} outside 1..{k}")
                    w = to_value(w)
                    if w < 0:
                        raise ValueError(f"weight ({u!r}, {e!r}, {i}) is negative")
                    if w:
                        self._w[p][i].append((uindex[u], w))

    def _value(self, labels):
        best = [Fraction(0)] * len(self.universe)
        for p, v in enumerate(labels):
            if v:
                for q, w in self._w[p][v]:
                    if w > best[q]:
                        best[q] = w
        return sum(best, Fraction(0))

    def spec(self) -> dict:
        weights: dict = {}
        for p, e in enumerate(self.ground.elements):
            for i in range(1, self.k + 1):
                for q, w in self._w[p][i]:
                    weights.setdefault(self.universe[q], {}).setdefault(e, {})[str(i)] = format_value(w)
        return {"type": "weighted_coverage", "universe": list(self.universe), "weights": weights}


class NormalizedFunction(KFunction):
    """g(x) = f(x) - f(0).  The offset is read once at construction unless supplied."""

    kind = "normalized"

    def __init__(self, f: KFunction, offset: Fraction | None = None):
        super().__init__(f.ground, f.k)
        self.base = f
        self.offset = f.evaluate(LabeledSet.zero(f.ground, f.k)) if offset is None else Fraction(offset)

    def _value(self, labels):
        return self.base.evaluate(LabeledSet(self.ground, self.k, labels)) - self.offset


def normalize(f: KFunction) -> KFunction:
    """Wrap ``f`` so that the zero vector evaluates to 0.

    Normalizing an already normalized wrapper returns an equivalent wrapper
    over the same base function.
    """
    if isinstance(f, NormalizedFunction):
        return NormalizedFunction(f.base, f.offset)
    return NormalizedFunction(f)


# ---------------------------------------------------------------- validators


@dataclass(frozen=True)
class Check:
    """Outcome of a validator; truthy when the property holds."""

    ok: bool
    witness: tuple | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def tabulate(f: KFunction) -> list[Fraction]:
    """All values of ``f`` in index order (one evaluation per point)."""
    ground, k = f.ground, f.k
    from itertools import product

    return [f.evaluate(LabeledSet(ground, k, labels)) for labels in product(range(k + 1), repeat=ground.n)]


def _as_int_table(values: Sequence[Fraction]) -> np.ndarray:
    """Rescale to a common denominator.  int64 when it fits, else Python ints."""
    scale = math.lcm(*(v.denominator for v in values)) if values else 1
    ints = [v.numerator * (scale // v.denominator) for v in values]
    if all(-_kernels.INT_LIMIT < v < _kernels.INT_LIMIT for v in ints):
        return np.array(ints, dtype=np.int64)
    return np.array(ints, dtype=object)


def _prepare(f: KFunction, limit: int | None) -> np.ndarray:
    size = (f.k + 1) ** f.ground.n
    cap = budget("pairs", limit)
    if size > cap:
        raise BudgetExceeded(f"(k+1)^n = {size} exceeds the validator budget {cap}")
    return _as_int_table(tabulate(f))


def _point(f: KFunction, idx: int) -> LabeledSet:
    return LabeledSet.from_index(f.ground, f.k, idx)


def is_monotone(f: KFunction, *, limit: int | None = None, backend: str | None = None) -> Check:
    """Decide f(x) <= f(y) for all x ⪯ y.

    Checking the covering pairs (y = x plus one assignment) is enough, since
    ⪯ is generated by them.  The witness is a violating pair (x, y).
    """
    T = _prepare(f, limit)
    x, y = _kernels.monotone_violation(T, f.ground.n, f.k, backend)
    if x < 0:
        return Check(True)
    return Check(False, (_point(f, x), _point(f, y)), "f(x) > f(y) although x ⪯ y")


def is_k_submodular(f: KFunction, *, limit: int | None = None, backend: str | None = None) -> Check:
    """Decide f(x) + f(y) >= f(x ⊔ y) + f(x ⊓ y) over every pair.  Quadratic in (k+1)^n."""
    T = _prepare(f, limit)
    x, y = _kernels.ksub_violation(T, f.ground.n, f.k, backend)
    if x < 0:
        return Check(True)
    return Check(False, (_point(f, x), _point(f, y)), "f(x) + f(y) < f(x ⊔ y) + f(x ⊓ y)")


def is_orthant_submodular(f: KFunction, *, limit: int | None = None, backend: str | None = None) -> Check:
    """Decide Δ_{e,i}f(x) >= Δ_{e,i}f(y) for x ⪯ y, e outside supp(y).

    Gains telescope along ⪯-chains, so covering pairs suffice.  Witness is
    (x, y, e, i) with ``e`` an element identifier.
    """
    T = _prepare(f, limit)
    x, y, e, i = _kernels.orthant_violation(T, f.ground.n, f.k, backend)
    if x < 0:
        return Check(True)
    return Check(
        False,
        (_point(f, x), _point(f, y), f.ground.elements[e], i),
        "marginal gain increased along ⪯",
    )


def is_pairwise_monotone(f: KFunction, *, limit: int | None = None, backend: str | None = None) -> Check:
    """Decide Δ_{e,i}f(x) + Δ_{e,j}f(x) >= 0 for i != j.  Witness is (x, e, i, j)."""
    T = _prepare(f, limit)
    x, e, i, j = _kernels.pairwise_violation(T, f.ground.n, f.k, backend)
    if x < 0:
        return Check(True)
    return Check(False, (_point(f, x), f.ground.elements[e], i, j), "two labels of one element sum to a loss")


def characterization_check(f: KFunction, *, limit: int | None = None, backend: str | None = None) -> bool:
    """True when the pairwise k-submodularity check agrees with orthant ∧ pairwise."""
    direct = is_k_submodular(f, limit=limit, backend=backend).ok
    local = (
        is_orthant_submodular(f, limit=limit, backend=backend).ok
        and is_pairwise_monotone(f, limit=limit, backend=backend).ok
    )
    return direct == local


# ---------------------------------------------------------------- random tables


def random_table(rng, ground: GroundSet, k: int, *, monotone: bool = False, high: int = 100) -> TableFunction:
    """Integer table with entries in [0, high]; optionally lifted to be monotone.

    The monotone lift takes, in order of support size, the maximum of each
    entry and its lower covers, which yields the pointwise max along ⪯-chains.
    """
    size = (k + 1) ** ground.n
    values = [int(v) for v in rng.integers(0, high + 1, size=size)]
    if monotone:
        _, pw = _kernels.label_digits(ground.n, k)
        for idx in _by_support_size(ground.n, k):
            x = LabeledSet.from_index(ground, k, idx)
            for p, v in enumerate(x.labels):
                if v:
                    values[idx] = max(values[idx], values[idx - v * int(pw[p])])
    return TableFunction(ground, k, values)


def _by_support_size(n: int, k: int) -> list[int]:
    D, _ = _kernels.label_digits(n, k)
    sizes = (D != 0).sum(axis=1)
    return [int(i) for i in np.argsort(sizes, kind="stable")]


def random_ksubmodular_table(rng, ground: GroundSet, k: int, *, terms: int = 3, retries: int = 6) -> TableFunction:
    """Random monotone k-submodular table with f(0) = 0.

    A target is drawn as a sum of truncated modular terms min(cap, w . x),
    each monotone k-submodular.  Entries are then filled in order of support
    size with target + noise, clamped between the largest lower cover
    (monotonicity) and the smallest f(y-a) + f(y-b) - f(y-a-b) over pairs of
    supported positions (the local square inequality).  The two bounds
    together characterise monotone k-submodular functions.  When noise empties
    an interval the draw is retried with less noise; noise 0 reproduces the
    target, which always fits.
    """
    n = ground.n
    _, pw = _kernels.label_digits(n, k)
    order = _by_support_size(n, k)
    size = (k + 1) ** n
    for attempt in range(retries):
        noise = max(0, 2 - attempt // 2)
        parts = []
        for _ in range(int(rng.integers(1, terms + 1))):
            w = rng.integers(0, 11, size=(n, k + 1))
            w[:, 0] = 0
            parts.append((w, int(rng.integers(5, 40))))
        values: list[int | None] = [None] * size
        values[0] = 0
        ok = True
        for idx in order[1:]:
            x = LabeledSet.from_index(ground, k, idx)
            sup = [p for p, v in enumerate(x.labels) if v]
            lower = max(values[idx - x.labels[p] * int(pw[p])] for p in sup)
            upper = None
            for a in range(len(sup)):
                for b in range(a + 1, len(sup)):
                    pa, pb = sup[a], sup[b]
                    da, db = x.labels[pa] * int(pw[pa]), x.labels[pb] * int(pw[pb])
                    bound = values[idx - da] + values[idx - db] - values[idx - da - db]
                    upper = bound if upper is None else min(upper, bound)
            if upper is not None and upper < lower:
                ok = False
                break
            target = sum(min(cap, sum(int(w[p, x.labels[p]]) for p in sup)) for w, cap in parts)
            if noise:
                target += int(rng.integers(-noise, noise + 1))
            value = max(target, lower)
            values[idx] = value if upper is None else min(value, upper)
        if ok:
            return TableFunction(ground, k, values)
    raise RuntimeError("could not draw a k-submodular table within the retry limit")
