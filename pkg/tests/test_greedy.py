from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ksubmod import (
    DomainMismatch,
    GroundSet,
    LabeledSet,
    TableFunction,
    UniformMatroid,
    brute_force_opt,
    greedy_maximize,
    guarantee_holds,
    rank,
)
from ksubmod.core import marginal_gain
from ksubmod.instance import random_instance
from oracles import classical_matroid_greedy

FAMILIES = ["uniform", "partition", "graphic", "linear_gf2"]
FUNCTIONS = ["modular", "coverage", "table"]


def test_uniform_one(modular_example, uniform):
    s, trace = greedy_maximize(modular_example, uniform(1))
    assert s.labels == (1, 0) and trace.value == 3


def test_uniform_two_tie_breaks_to_label_one(modular_example, uniform):
    s, trace = greedy_maximize(modular_example, uniform(2))
    assert s.labels == (1, 1) and trace.value == 5
    assert [(st.element, st.label, st.gain) for st in trace.steps] == [("e1", 1, 3), ("e2", 1, 2)]


def test_rank_zero(modular_example, uniform):
    s, trace = greedy_maximize(modular_example, uniform(0))
    assert s.labels == (0, 0) and trace.value == 0 and trace.iterations == 0
    # The first round evaluates every pair before asking the oracle. Probing
    # first would save these k*n calls here but break the M*|E| membership
    # bound at rank 1.
    assert trace.eval_calls == 1 + 2 * 2 and trace.membership_calls == 2


def test_empty_ground_set():
    g = GroundSet(())
    f = TableFunction(g, 2, [0])
    s, trace = greedy_maximize(f, UniformMatroid(g, 3))
    assert s.labels == () and trace.value == 0 and trace.eval_calls == 1 and trace.membership_calls == 0


def test_ground_mismatch(modular_example):
    with pytest.raises(DomainMismatch):
        greedy_maximize(modular_example, UniformMatroid(GroundSet.of_size(3), 1))


def test_nonzero_offset_is_normalized():
    g = GroundSet.of_size(2)
    f = TableFunction(g, 1, [5, 6, 8, 9])
    s, trace = greedy_maximize(f, UniformMatroid(g, 1))
    assert s.labels == (1, 0) and trace.value == 3 and trace.offset == 5
    assert trace.notes


def test_nonmonotone_input_flags_guarantee():
    g = GroundSet.of_size(1)
    f = TableFunction(g, 2, [0, -1, -2])
    s, trace = greedy_maximize(f, UniformMatroid(g, 1))
    assert s.labels == (1,) and trace.guarantee_void


def test_guarantee_holds(modular_example, uniform):
    s, _ = greedy_maximize(modular_example, uniform(1))
    assert guarantee_holds(modular_example, uniform(1), s, Fraction(3))
    assert guarantee_holds(modular_example, uniform(1), LabeledSet.zero(s.ground, 2), 0)
    assert not guarantee_holds(modular_example, uniform(1), LabeledSet(s.ground, 2, (1, 1)), 0)


def _instance(seed, n=None, k=None, matroid=None, function=None):
    rng = np.random.default_rng(seed)
    n = n or int(rng.integers(2, 7))
    k = k or int(rng.integers(1, 4))
    matroid = matroid or FAMILIES[seed % 4]
    function = function or FUNCTIONS[(seed // 4) % 3]
    return random_instance(rng, n=n, k=k, matroid=matroid, function=function, name=f"t{seed}")


def _competitor_gains(f, m, s_prev, support):
    out = []
    for p in range(f.ground.n):
        if p in support or not m.is_independent(frozenset(support | {p})):
            continue
        for i in range(1, f.k + 1):
            out.append(marginal_gain(f, s_prev, p, i))
    return out


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_run_invariants(seed):
    inst = _instance(seed)
    f, m = inst.build()
    s, trace = greedy_maximize(f, m)
    M = rank(inst.build()[1])
    n, k = inst.ground.n, inst.k
    assert len(s.support_positions()) == M == trace.iterations
    assert trace.membership_calls <= M * n
    assert trace.eval_calls <= k * M * n + 1
    assert all(step.membership_calls <= n and step.eval_calls <= k * n for step in trace.steps)
    # gains, chosen maxima and nested supports
    f2, m2 = inst.build()
    prev = LabeledSet.zero(inst.ground, k)
    values = [Fraction(0)]
    for step in trace.steps:
        support = prev.support_positions()
        assert step.gain >= 0
        assert all(step.gain >= g for g in _competitor_gains(f2, m2, prev, support))
        cur = prev.assign(step.element, step.label)
        assert prev.support_positions() < cur.support_positions()
        assert len(cur.support_positions()) == step.j
        values.append(step.value)
        prev = cur
    assert prev == s
    assert values == sorted(values)
    # determinism
    f3, m3 = inst.build()
    s3, trace3 = greedy_maximize(f3, m3)
    assert trace3.key() == trace.key() and trace3.steps == trace.steps


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_lazy_matches_plain(seed):
    inst = _instance(seed)
    f, m = inst.build()
    _, plain = greedy_maximize(f, m)
    f, m = inst.build()
    _, lazy = greedy_maximize(f, m, lazy=True)
    assert lazy.key() == plain.key()


@pytest.mark.parametrize("seed", range(8))
def test_half_approximation_small(seed):
    inst = _instance(seed)
    f, m = inst.build()
    _, trace = greedy_maximize(f, m)
    f, m = inst.build()
    assert 2 * trace.value >= brute_force_opt(f, m).opt_value


@pytest.mark.parametrize("seed", range(10))
def test_k1_matches_classical_greedy(seed):
    inst = _instance(seed, k=1, matroid="graphic", function="coverage")
    f, m = inst.build()
    s, trace = greedy_maximize(f, m)
    f, m = inst.build()
    s_ref, v_ref = classical_matroid_greedy(f, m)
    assert s == s_ref and trace.value == v_ref


def test_uniform_support_size_is_min_n_N():
    for seed in range(10):
        rng = np.random.default_rng(seed)
        inst = random_instance(rng, n=5, k=2, matroid="uniform", function="coverage")
        f, m = inst.build()
        s, _ = greedy_maximize(f, m)
        assert len(s.support_positions()) == min(m.N, 5)
