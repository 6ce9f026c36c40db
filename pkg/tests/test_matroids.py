from itertools import combinations

import numpy as np
import pytest

from ksubmod import (
    BudgetExceeded,
    ExplicitMatroid,
    GraphicMatroid,
    GroundSet,
    LinearMatroidGF2,
    PartitionMatroid,
    PreconditionError,
    UniformMatroid,
    enumerate_independent_sets,
    exchange_witness,
    extend_to_base,
    rank,
    validate_axioms,
)
from ksubmod.instance import _random_matroid
from ksubmod.matroids import FunctionMatroid, is_base
from oracles import brute_is_matroid

TRI = GroundSet(("ab", "bc", "ca"))


def triangle():
    return GraphicMatroid(TRI, 3, {"ab": (0, 1), "bc": (1, 2), "ca": (2, 0)})


def partition_example():
    g = GroundSet(("e1", "e2", "e3"))
    return PartitionMatroid(g, [["e1", "e2"], ["e3"]], [1, 1])


def test_is_independent_examples():
    u = UniformMatroid(GroundSet.of_size(3), 2)
    assert u.is_independent({"e1", "e2"}) and not u.is_independent({"e1", "e2", "e3"})
    t = triangle()
    assert t.is_independent({"ab", "bc"}) and not t.is_independent({"ab", "bc", "ca"})
    lin = LinearMatroidGF2(GroundSet.of_size(3), 2, {"e1": "10", "e2": "01", "e3": "11"})
    assert lin.is_independent({"e1", "e2"}) and not lin.is_independent({"e1", "e2", "e3"})


def test_call_counter():
    u = UniformMatroid(GroundSet.of_size(3), 2)
    u.is_independent(set())
    u.is_independent({"e1"})
    assert u.calls == 2
    with pytest.raises(KeyError):
        u.is_independent({"zz"})


def test_loops_and_zero_columns():
    g = GroundSet.of_size(2)
    gm = GraphicMatroid(g, 2, {"e1": (0, 0), "e2": (0, 1)})
    assert not gm.is_independent({"e1"}) and gm.is_independent({"e2"})
    lin = LinearMatroidGF2(g, 2, {"e1": "00", "e2": "01"})
    assert not lin.is_independent({"e1"}) and rank(lin) == 1


def test_parallel_edges():
    g = GroundSet.of_size(2)
    gm = GraphicMatroid(g, 2, {"e1": (0, 1), "e2": (1, 0)})
    assert not gm.is_independent({"e1", "e2"})


def test_rank_examples():
    assert rank(UniformMatroid(GroundSet.of_size(5), 2)) == 2
    assert rank(triangle()) == 2
    assert rank(partition_example()) == 2


def test_rank_uses_at_most_n_calls():
    m = triangle()
    rank(m)
    assert m.calls <= 3


def test_extend_to_base_examples():
    assert extend_to_base(triangle()) == {"ab", "bc"}
    assert extend_to_base(triangle(), {"ab", "ca"}) == {"ab", "ca"}
    assert extend_to_base(partition_example(), {"e3"}) == {"e3", "e1"}
    with pytest.raises(PreconditionError):
        extend_to_base(triangle(), {"ab", "bc", "ca"})


def test_exchange_examples():
    t = triangle()
    e_out = exchange_witness(t, set(), {"ab", "bc"}, "ca")
    assert e_out == "bc"
    for cand in ("ab", "bc"):
        assert is_base(t, ({"ab", "bc"} - {cand}) | {"ca"})
    g = GroundSet.of_size(3)
    assert exchange_witness(UniformMatroid(g, 2), {"e1"}, {"e1", "e2"}, "e3") == "e2"
    # canonical growth keeps e1 and leaves out e2; any removal would be valid here
    assert exchange_witness(UniformMatroid(g, 2), set(), {"e1", "e2"}, "e3") == "e2"


def test_exchange_preconditions():
    t = triangle()
    with pytest.raises(PreconditionError):
        exchange_witness(t, {"ab"}, {"ab"}, "ca")  # A not a proper subset
    with pytest.raises(PreconditionError):
        exchange_witness(t, {"ab"}, {"ab", "bc", "ca"}, "ca")  # B not a base


def test_validate_axioms_examples():
    for m in (UniformMatroid(GroundSet.of_size(4), 2), triangle(), partition_example(),
              LinearMatroidGF2(GroundSet.of_size(3), 2, {"e1": "10", "e2": "01", "e3": "11"}),
              UniformMatroid(GroundSet.of_size(3), 0)):
        assert validate_axioms(m)
    even = FunctionMatroid(GroundSet.of_size(2), lambda F: len(F) % 2 == 0)
    check = validate_axioms(even)
    assert not check
    assert check.witness == ("M2", frozenset({"e1"}), frozenset({"e1", "e2"}))


def test_validate_axioms_m1_and_m3_witnesses():
    g = GroundSet.of_size(3)
    assert validate_axioms(ExplicitMatroid(g, [["e1"]])).witness == ("M1",)
    # {e1} and {e2, e3} both independent, but {e1} cannot be augmented
    bad = ExplicitMatroid(g, [[], ["e1"], ["e2"], ["e3"], ["e2", "e3"]])
    check = validate_axioms(bad)
    assert not check and check.witness[0] == "M3"
    _, A, B = check.witness
    assert len(A) < len(B) and not any(bad.is_independent(A | {e}) for e in B - A)


def test_validate_axioms_budget():
    with pytest.raises(BudgetExceeded):
        validate_axioms(UniformMatroid(GroundSet.of_size(21), 2))
    with pytest.raises(BudgetExceeded):
        validate_axioms(UniformMatroid(GroundSet.of_size(10), 2), limit=100)


def test_enumerate_independent_sets_examples():
    u = UniformMatroid(GroundSet.of_size(2), 1)
    assert list(enumerate_independent_sets(u)) == [frozenset(), {"e1"}, {"e2"}]
    assert len(list(enumerate_independent_sets(triangle()))) == 7
    p = PartitionMatroid(GroundSet.of_size(2), [["e1", "e2"]], [1])
    assert list(enumerate_independent_sets(p)) == [frozenset(), {"e1"}, {"e2"}]
    with pytest.raises(BudgetExceeded):
        list(enumerate_independent_sets(UniformMatroid(GroundSet.of_size(6), 6), limit=10))


@pytest.mark.parametrize("kind", ["uniform", "partition", "graphic", "linear_gf2"])
def test_random_families(kind):
    rng = np.random.default_rng(hash(kind) % 1000)
    for _ in range(15):
        n = int(rng.integers(1, 7))
        g = GroundSet.of_size(n)
        m = _random_matroid(rng, g, kind)
        assert validate_axioms(m)
        assert brute_is_matroid(m)
        M = rank(m)
        indep = list(enumerate_independent_sets(m))
        assert all(len(extend_to_base(m, A)) == M for A in indep)
        for F in indep:
            assert all(m.is_independent(F - {e}) for e in F)
        assert len(indep) == sum(m.is_independent(set(c)) for r in range(n + 1) for c in combinations(g, r))
