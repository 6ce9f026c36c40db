"""Independence oracles, the standard matroid families, and exhaustive axiom checks."""

from __future__ import annotations

import threading
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from . import _kernels
from .core import MATROID_MAX_N, BudgetExceeded, GroundSet, PreconditionError, budget
from .functions import Check


class Matroid:
    """Membership oracle over subsets of a ground set.

    Subsets may be given as element identifiers or dense positions; every
    query increments ``calls``.
    """

    kind = "abstract"

    def __init__(self, ground: GroundSet):
        self.ground = ground
        self._calls = 0
        self._lock = threading.Lock()

    @property
    def calls(self) -> int:
        return self._calls

    def reset_calls(self) -> None:
        with self._lock:
            self._calls = 0

    def is_independent(self, F: Iterable) -> bool:
        positions = F if isinstance(F, frozenset) and all(type(p) is int for p in F) else self.ground.positions(F)
        with self._lock:
            self._calls += 1
        return self._independent(positions)

    def _independent(self, F: frozenset[int]) -> bool:
        raise NotImplementedError

    def spec(self) -> dict:
        raise NotImplementedError(f"{type(self).__name__} has no file representation")


class UniformMatroid(Matroid):
    kind = "uniform"

    def __init__(self, ground: GroundSet, N: int):
        super().__init__(ground)
        if N < 0:
            raise ValueError("N must be nonnegative")
        self.N = int(N)

    def _independent(self, F):
        return len(F) <= self.N

    def spec(self):
        return {"type": "uniform", "N": self.N}


class PartitionMatroid(Matroid):
    kind = "partition"

    def __init__(self, ground: GroundSet, blocks: Sequence[Iterable], caps: Sequence[int]):
        super().__init__(ground)
        if len(blocks) != len(caps):
            raise ValueError("need one cap per block")
        self.blocks = tuple(tuple(sorted(ground.positions(b))) for b in blocks)
        self.caps = tuple(int(c) for c in caps)
        if any(c < 0 for c in self.caps):
            raise ValueError("caps must be nonnegative")
        seen: dict[int, int] = {}
        for b, block in enumerate(self.blocks):
            for p in block:
                if p in seen:
                    raise ValueError(f"element {ground.elements[p]!r} is in blocks {seen[p]} and {b}")
                seen[p] = b
        if len(seen) != ground.n:
            missing = [e for p, e in enumerate(ground.elements) if p not in seen]
            raise ValueError(f"blocks do not cover {missing}")
        self._block_of = [seen[p] for p in range(ground.n)]

    def _independent(self, F):
        used = [0] * len(self.blocks)
        for p in F:
            b = self._block_of[p]
            used[b] += 1
            if used[b] > self.caps[b]:
                return False
        return True

    def spec(self):
        return {
            "type": "partition",
            "blocks": [
                {"elements": [self.ground.elements[p] for p in block], "cap": cap}
                for block, cap in zip(self.blocks, self.caps)
            ],
        }


class GraphicMatroid(Matroid):
    """Edge sets of a multigraph that form a forest.  Loops are never independent."""

    kind = "graphic"

    def __init__(self, ground: GroundSet, vertices: int, edges: Mapping):
        super().__init__(ground)
        self.vertices = int(vertices)
        ends = [None] * ground.n
        for e, (u, v) in edges.items():
            u, v = int(u), int(v)
            if not (0 <= u < self.vertices and 0 <= v < self.vertices):
                raise ValueError(f"edge {e!r} has an endpoint outside 0..{self.vertices - 1}")
            ends[ground.position(e)] = (u, v)
        if any(x is None for x in ends):
            missing = [ground.elements[p] for p, x in enumerate(ends) if x is None]
            raise ValueError(f"no endpoints given for {missing}")
        self.ends = tuple(ends)

    def _independent(self, F):
        parent = list(range(self.vertices))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for p in F:
            u, v = self.ends[p]
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True

    def spec(self):
        return {
            "type": "graphic",
            "vertices": self.vertices,
            "edges": {e: list(self.ends[p]) for p, e in enumerate(self.ground.elements)},
        }


class LinearMatroidGF2(Matroid):
    """Column sets that are linearly independent over GF(2).

    Columns are bit strings of a common length ``dim`` ("101"), stored as ints.
    """

    kind = "linear_gf2"

    def __init__(self, ground: GroundSet, dim: int, columns: Mapping):
        super().__init__(ground)
        self.dim = int(dim)
        cols = [None] * ground.n
        for e, bits in columns.items():
            if isinstance(bits, str):
                if len(bits) != self.dim or set(bits) - {"0", "1"}:
                    raise ValueError(f"column {e!r} must be {self.dim} characters of 0/1")
                value = int(bits, 2) if bits else 0
            else:
                bits = [int(b) for b in bits]
                if len(bits) != self.dim or set(bits) - {0, 1}:
                    raise ValueError(f"column {e!r} must have {self.dim} entries in {{0,1}}")
                value = int("".join(map(str, bits)), 2) if bits else 0
            cols[ground.position(e)] = value
        if any(c is None for c in cols):
            missing = [ground.elements[p] for p, c in enumerate(cols) if c is None]
            raise ValueError(f"no column given for {missing}")
        self.columns = tuple(cols)

    def _independent(self, F):
        # xor basis keyed by leading bit
        basis: dict[int, int] = {}
        for p in F:
            v = self.columns[p]
            while v:
                top = v.bit_length() - 1
                if top not in basis:
                    basis[top] = v
                    break
                v ^= basis[top]
            else:
                return False
        return True

    def spec(self):
        return {
            "type": "linear_gf2",
            "dim": self.dim,
            "columns": {e: format(c, f"0{self.dim}b") if self.dim else "" for e, c in zip(self.ground.elements, self.columns)},
        }


class ExplicitMatroid(Matroid):
    """Independence given by an explicit list of sets.  Not trusted until validated."""

    kind = "explicit"

    def __init__(self, ground: GroundSet, independent: Iterable[Iterable]):
        super().__init__(ground)
        self.family = frozenset(ground.positions(F) for F in independent)

    def _independent(self, F):
        return F in self.family

    def spec(self):
        sets = sorted((sorted(F) for F in self.family), key=lambda s: (len(s), s))
        return {"type": "explicit", "independent": [[self.ground.elements[p] for p in s] for s in sets]}


class FunctionMatroid(Matroid):
    """Wrap an arbitrary predicate on frozensets of element identifiers."""

    kind = "predicate"

    def __init__(self, ground: GroundSet, predicate):
        super().__init__(ground)
        self.predicate = predicate

    def _independent(self, F):
        return bool(self.predicate(self.ground.names(F)))


# ---------------------------------------------------------------- operations


def rank(m: Matroid) -> int:
    """Size of the base found by canonical-order greedy extension from the empty set."""
    return len(_extend(m, frozenset()))


def _extend(m: Matroid, A: frozenset[int]) -> frozenset[int]:
    current = set(A)
    for p in range(m.ground.n):
        if p not in current and m.is_independent(frozenset(current | {p})):
            current.add(p)
    return frozenset(current)


def extend_to_base(m: Matroid, A: Iterable = ()) -> frozenset[str]:
    A = m.ground.positions(A)
    if not m.is_independent(A):
        raise PreconditionError("cannot extend a dependent set")
    return m.ground.names(_extend(m, A))


def is_base(m: Matroid, B: Iterable) -> bool:
    B = m.ground.positions(B)
    if not m.is_independent(B):
        return False
    return all(m.is_independent(B | {p}) is False for p in range(m.ground.n) if p not in B)


def exchange_witness(m: Matroid, A: Iterable, B: Iterable, e) -> str:
    """Element e' of B \\ A such that (B - e') + e is again a base.

    Built constructively: grow A + e with elements of B \\ A in canonical order
    while independence is kept; exactly one element of B \\ A is left over.
    """
    ground = m.ground
    A, B, pe = ground.positions(A), ground.positions(B), ground.position(e)
    if not A < B:
        raise PreconditionError("A must be a proper subset of B")
    if pe in A:
        raise PreconditionError("e must lie outside A")
    if not m.is_independent(A | {pe}):
        raise PreconditionError("A + e must be independent")
    if not is_base(m, B):
        raise PreconditionError("B must be a base")
    if pe in B:
        return ground.elements[pe]
    current = set(A | {pe})
    for p in sorted(B - A):
        if p != pe and m.is_independent(frozenset(current | {p})):
            current.add(p)
    left = sorted(B - current)
    if len(left) != 1 or len(current) != len(B):
        raise PreconditionError("exchange failed; the oracle violates the matroid axioms")
    return ground.elements[left[0]]


def enumerate_independent_sets(m: Matroid, *, limit: int | None = None) -> Iterator[frozenset[str]]:
    """Every independent set, by depth-first search in canonical order.

    Dependent sets are never extended, which is exact for hereditary families.
    Raises BudgetExceeded after ``limit`` sets.
    """
    for F in _independent_positions(m, limit=limit):
        yield m.ground.names(F)


def _independent_positions(m: Matroid, *, limit: int | None = None) -> Iterator[frozenset[int]]:
    cap = budget("labelings", limit)
    n = m.ground.n
    count = 0
    if not m.is_independent(frozenset()):
        return
    stack: list[tuple[frozenset[int], int]] = [(frozenset(), 0)]
    while stack:
        F, start = stack.pop()
        count += 1
        if count > cap:
            raise BudgetExceeded(f"more than {cap} independent sets")
        yield F
        children = []
        for p in range(start, n):
            G = F | {p}
            if m.is_independent(G):
                children.append((G, p + 1))
        stack.extend(reversed(children))


def validate_axioms(m: Matroid, *, limit: int | None = None, backend: str | None = None) -> Check:
    """Exhaustively check (M1) the empty set, (M2) heredity and (M3) augmentation.

    Witnesses are ("M1",), ("M2", A, B) with A ⊆ B, B independent, A not, or
    ("M3", A, B) with |A| < |B| and no augmenting element; sets are frozensets
    of element identifiers.  Heredity is checked on single deletions and
    augmentation on |B| = |A| + 1, which imply the general statements.
    """
    n = m.ground.n
    if n > MATROID_MAX_N:
        raise BudgetExceeded(f"n = {n} exceeds the hard cap of {MATROID_MAX_N}")
    cap = budget("matroid_subsets", limit)
    if 2**n > cap:
        raise BudgetExceeded(f"2^{n} subsets exceed the budget {cap}")
    names = lambda mask: m.ground.names(p for p in range(n) if mask >> p & 1)  # noqa: E731
    indep = np.zeros(2**n, dtype=bool)
    # canonical order: by size, then by sorted positions
    order = sorted(range(2**n), key=lambda s: (bin(s).count("1"), [p for p in range(n) if s >> p & 1]))
    for mask in order:
        indep[mask] = m.is_independent(frozenset(p for p in range(n) if mask >> p & 1))
    if not indep[0]:
        return Check(False, ("M1",), "the empty set is dependent")
    for mask in order:
        if not indep[mask]:
            continue
        for p in reversed(range(n)):
            if mask >> p & 1 and not indep[mask ^ (1 << p)]:
                return Check(False, ("M2", names(mask ^ (1 << p)), names(mask)), "a subset of an independent set is dependent")
    masks = np.array([s for s in order if indep[s]], dtype=np.int64)
    sizes = np.array([bin(int(s)).count("1") for s in masks], dtype=np.int64)
    ext = np.zeros(len(masks), dtype=np.int64)
    for a, s in enumerate(masks):
        s = int(s)
        ext[a] = sum(1 << p for p in range(n) if not s >> p & 1 and indep[s | (1 << p)])
    a, b = _kernels.augmentation_violation(masks, sizes, ext, backend)
    if a >= 0:
        return Check(False, ("M3", names(int(masks[a])), names(int(masks[b]))), "no element of B \\ A augments A")
    return Check(True)
