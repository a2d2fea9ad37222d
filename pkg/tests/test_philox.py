"""Known-answer vectors and basic statistics of the random source."""

from __future__ import annotations

import numba as nb
import numpy as np
import pytest
from scipy import stats

from drawdown.simulate.philox import (
    new_stream,
    next_normal,
    next_uniform,
    philox4x32,
    split_seed,
    uniform_pair,
)

# Published Philox4x32-10 test vectors: (counter, key) -> output
KAT = [
    ((0, 0, 0, 0), (0, 0), (0x6627E8D5, 0xE169C58D, 0xBC57AC4C, 0x9B00DBD8)),
    ((0xFFFFFFFF,) * 4, (0xFFFFFFFF,) * 2, (0x408F276D, 0x41C83B0E, 0xA20BC7C6, 0x6D5451FD)),
    (
        (0x243F6A88, 0x85A308D3, 0x13198A2E, 0x03707344),
        (0xA4093822, 0x299F31D0),
        (0xD16CFE09, 0x94FDCCEB, 0x5001E420, 0x24126EA1),
    ),
]


@pytest.mark.parametrize("ctr, key, expected", KAT)
def test_known_answers(ctr, key, expected):
    out = philox4x32(*(np.uint64(c) for c in ctr), *(np.uint64(k) for k in key))
    assert tuple(int(w) for w in out) == expected


def test_split_seed_reduces_to_64_bits():
    assert split_seed(2**64 + 5) == split_seed(5) == (5, 0)
    assert split_seed(-1) == (0xFFFFFFFF, 0xFFFFFFFF)


def test_uniform_pair_is_keyed():
    a = uniform_pair(1, 2, 3, 10, 0, 7)
    assert a == uniform_pair(1, 2, 3, 10, 0, 7)
    assert a != uniform_pair(1, 2, 3, 11, 0, 7)
    assert a != uniform_pair(1, 2, 4, 10, 0, 7)
    assert all(0.0 < u < 1.0 for u in a)


@nb.njit
def _draw(k0, k1, n, normal):
    g = new_stream(k0, k1, 1, 0, 0)
    out = np.empty(n)
    for i in range(n):
        if normal:
            out[i], g = next_normal(g)
        else:
            out[i], g = next_uniform(g)
    return out


def test_uniform_stream_is_uniform():
    u = _draw(123, 456, 200_000, False)
    assert stats.kstest(u, "uniform").statistic < 1.628 / np.sqrt(u.size)


def test_ziggurat_normals():
    z = _draw(7, 8, 400_000, True)
    n = z.size
    assert stats.kstest(z, "norm").statistic < 1.628 / np.sqrt(n)
    assert abs(z.mean()) < 4 / np.sqrt(n)
    assert abs(z.var() - 1) < 4 * np.sqrt(2 / n)
    # the tail layer is exercised: P(|Z| > 3.654) is about 2.6e-4
    tail = np.mean(np.abs(z) > 3.6541528853610088)
    assert abs(tail - 2 * stats.norm.sf(3.6541528853610088)) < 4 * np.sqrt(2.6e-4 / n)
