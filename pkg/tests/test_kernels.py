"""The numba and numpy backends must report identical first violations."""

import numpy as np
import pytest

from ksubmod import GroundSet, is_k_submodular, is_monotone, is_orthant_submodular, is_pairwise_monotone
from ksubmod import _kernels
from ksubmod.functions import _as_int_table, random_ksubmodular_table, random_table, tabulate

pytestmark = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")

KERNELS = [
    _kernels.monotone_violation,
    _kernels.pairwise_violation,
    _kernels.orthant_violation,
    _kernels.ksub_violation,
]


def _tables(seed):
    rng = np.random.default_rng(seed)
    for n, k in [(1, 2), (2, 2), (3, 1), (3, 3), (4, 2), (5, 1)]:
        g = GroundSet.of_size(n)
        yield n, k, random_table(rng, g, k)
        yield n, k, random_table(rng, g, k, monotone=True)
        yield n, k, random_ksubmodular_table(rng, g, k)


@pytest.mark.parametrize("seed", range(5))
def test_backends_agree(seed):
    for n, k, f in _tables(seed):
        T = _as_int_table(tabulate(f))
        for kernel in KERNELS:
            assert kernel(T, n, k, "numba") == kernel(T, n, k, "numpy"), kernel.__name__


def test_object_tables_fall_back_to_numpy():
    g = GroundSet.of_size(3)
    f = random_table(np.random.default_rng(1), g, 2)
    T = _as_int_table(tabulate(f))
    big = np.array([int(v) * 2**70 for v in T], dtype=object)
    for kernel in KERNELS:
        assert kernel(big, 3, 2, "numba") == kernel(T, 3, 2, "numba")


def test_env_flag_selects_numpy(monkeypatch):
    monkeypatch.setenv("KSUBMOD_NO_NUMBA", "1")
    assert _kernels.default_backend() == "numpy"
    monkeypatch.setenv("KSUBMOD_NO_NUMBA", "0")
    assert _kernels.default_backend() == "numba"


def test_validators_same_witness_either_backend():
    rng = np.random.default_rng(4)
    g = GroundSet.of_size(3)
    for _ in range(10):
        f = random_table(rng, g, 2, high=9)
        for check in (is_monotone, is_k_submodular, is_orthant_submodular, is_pairwise_monotone):
            assert check(f, backend="numba") == check(f, backend="numpy")


def test_augmentation_backends_agree():
    rng = np.random.default_rng(2)
    for _ in range(20):
        masks = rng.integers(0, 64, size=30)
        sizes = np.array([bin(int(s)).count("1") for s in masks])
        ext = rng.integers(0, 64, size=30)
        assert _kernels.augmentation_violation(masks, sizes, ext, "numba") == _kernels.augmentation_violation(
            masks, sizes, ext, "numpy"
        )
