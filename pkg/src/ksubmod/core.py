"""Ground sets, labeled sets and the exact value type shared by every module."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

Value = Fraction

# name -> (environment variable, default)
_BUDGETS = {
    "table": ("KSUBMOD_TABLE_BUDGET", 10**6),
    "pairs": ("KSUBMOD_PAIR_BUDGET", 10**5),
    "matroid_subsets": ("KSUBMOD_MATROID_BUDGET", 2**20),
    "labelings": ("KSUBMOD_EXACT_BUDGET", 10**7),
}
MATROID_MAX_N = 20


class KSubmodError(Exception):
    pass


class DomainMismatch(KSubmodError, ValueError):
    """Operands live on different ground sets or use a different k."""


class PreconditionError(KSubmodError, ValueError):
    pass


class BudgetExceeded(KSubmodError):
    pass


def budget(name: str, override: int | None = None) -> int:
    """Enumeration budget ``name``; explicit override, then environment, then default."""
    if override is not None:
        return int(override)
    env, default = _BUDGETS[name]
    raw = os.environ.get(env)
    return int(raw) if raw else default


def to_value(v) -> Fraction:
    """Parse an int, Fraction or ``"num/den"`` string into an exact rational.

    Floats are rejected: a binary float silently carries rounding error.
    """
    if isinstance(v, bool):
        raise TypeError("booleans are not values")
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, str):
        text = v.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            den_i = int(den)
            if den_i <= 0:
                raise ValueError(f"denominator must be positive in {v!r}")
            return Fraction(int(num), den_i)
        return Fraction(int(text))
    raise TypeError(f"cannot interpret {v!r} as an exact rational")


def format_value(v: Fraction) -> int | str:
    v = Fraction(v)
    return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


@dataclass(frozen=True)
class GroundSet:
    """Ordered, duplicate-free element identifiers.

    Declaration order is the canonical order used for every tie-break.
    """

    elements: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        elements = tuple(self.elements)
        for e in elements:
            if not isinstance(e, str):
                raise TypeError(f"element identifiers must be strings, got {e!r}")
        index = {e: p for p, e in enumerate(elements)}
        if len(index) != len(elements):
            dup = sorted({e for e in elements if elements.count(e) > 1})
            raise ValueError(f"duplicate element identifiers: {dup}")
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "_index", index)

    @classmethod
    def of_size(cls, n: int) -> "GroundSet":
        return cls(tuple(f"e{p + 1}" for p in range(n)))

    @property
    def n(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __contains__(self, e) -> bool:
        return e in self._index

    def position(self, e) -> int:
        """Dense index of ``e``; ints are taken as positions, strings as identifiers."""
        if isinstance(e, int) and not isinstance(e, bool):
            if not 0 <= e < len(self.elements):
                raise KeyError(f"position {e} out of range for {len(self.elements)} elements")
            return e
        try:
            return self._index[e]
        except KeyError:
            raise KeyError(f"unknown element {e!r}") from None

    def positions(self, items: Iterable) -> frozenset[int]:
        return frozenset(self.position(e) for e in items)

    def names(self, positions: Iterable[int]) -> frozenset[str]:
        return frozenset(self.elements[p] for p in positions)


@dataclass(frozen=True)
class LabeledSet:
    """A point of {0,...,k}^E stored as a dense label tuple in ground-set order."""

    ground: GroundSet
    k: int
    labels: tuple[int, ...]

    def __post_init__(self):
        labels = tuple(int(v) for v in self.labels)
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if len(labels) != self.ground.n:
            raise ValueError(f"expected {self.ground.n} labels, got {len(labels)}")
        for v in labels:
            if not 0 <= v <= self.k:
                raise ValueError(f"label {v} outside 0..{self.k}")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def zero(cls, ground: GroundSet, k: int) -> "LabeledSet":
        return cls(ground, k, (0,) * ground.n)

    @classmethod
    def from_parts(cls, ground: GroundSet, parts: Sequence[Iterable]) -> "LabeledSet":
        """Build from disjoint (X_1, ..., X_k); overlapping parts are rejected."""
        labels = [0] * ground.n
        for i, part in enumerate(parts, start=1):
            for e in part:
                p = ground.position(e)
                if labels[p]:
                    raise ValueError(
                        f"element {ground.elements[p]!r} appears in parts {labels[p]} and {i}"
                    )
                labels[p] = i
        return cls(ground, len(parts), tuple(labels))

    @classmethod
    def from_index(cls, ground: GroundSet, k: int, index: int) -> "LabeledSet":
        labels = [0] * ground.n
        for p in range(ground.n - 1, -1, -1):
            index, labels[p] = divmod(index, k + 1)
        return cls(ground, k, tuple(labels))

    def index(self) -> int:
        """Position in the lexicographic enumeration of {0..k}^E (first element most significant)."""
        idx = 0
        for v in self.labels:
            idx = idx * (self.k + 1) + v
        return idx

    def parts(self) -> tuple[frozenset[str], ...]:
        out = [set() for _ in range(self.k)]
        for e, v in zip(self.ground.elements, self.labels):
            if v:
                out[v - 1].add(e)
        return tuple(frozenset(s) for s in out)

    def __getitem__(self, e) -> int:
        return self.labels[self.ground.position(e)]

    def assign(self, e, label: int) -> "LabeledSet":
        """Copy with ``e`` relabeled (label 0 removes it)."""
        p = self.ground.position(e)
        labels = list(self.labels)
        labels[p] = label
        return LabeledSet(self.ground, self.k, tuple(labels))

    def support_positions(self) -> frozenset[int]:
        return frozenset(p for p, v in enumerate(self.labels) if v)

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.ground.elements, self.labels))

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.labels)) + "]"


def _check_same_domain(x: LabeledSet, y: LabeledSet) -> None:
    if x.ground != y.ground or x.k != y.k:
        raise DomainMismatch("labeled sets differ in ground set or k")


def meet(x: LabeledSet, y: LabeledSet) -> LabeledSet:
    """Componentwise intersection: keep a label only where both sides agree."""
    _check_same_domain(x, y)
    return LabeledSet(x.ground, x.k, tuple(a if a == b else 0 for a, b in zip(x.labels, y.labels)))


def join(x: LabeledSet, y: LabeledSet) -> LabeledSet:
    """Union of the parts with conflicting labels cancelled to 0."""
    _check_same_domain(x, y)
    out = []
    for a, b in zip(x.labels, y.labels):
        if a == 0 or a == b:
            out.append(b)
        elif b == 0:
            out.append(a)
        else:
            out.append(0)
    return LabeledSet(x.ground, x.k, tuple(out))


def partial_leq(x: LabeledSet, y: LabeledSet) -> bool:
    _check_same_domain(x, y)
    return all(a == 0 or a == b for a, b in zip(x.labels, y.labels))


def support(x: LabeledSet) -> frozenset[str]:
    return frozenset(e for e, v in zip(x.ground.elements, x.labels) if v)


def marginal_gain(f, x: LabeledSet, e, i: int, fx: Fraction | None = None) -> Fraction:
    """Gain of assigning label ``i`` to the unassigned element ``e``.

    Pass ``fx`` when f(x) is already known to save one evaluation call.
    """
    if not 1 <= i <= x.k:
        raise PreconditionError(f"label {i} outside 1..{x.k}")
    if x[e] != 0:
        raise PreconditionError(f"element {e!r} is already assigned label {x[e]}")
    if fx is None:
        fx = f.evaluate(x)
    return f.evaluate(x.assign(e, i)) - fx


def all_labeled_sets(ground: GroundSet, k: int) -> Iterator[LabeledSet]:
    """Every point of {0..k}^E in index order."""
    from itertools import product

    for labels in product(range(k + 1), repeat=ground.n):
        yield LabeledSet(ground, k, labels)
