"""Philox4x32-10 counter-based generator, callable from compiled kernels.

Every random number is a pure function of ``(key, counter)``.  The key is
the 64-bit run seed; the counter identifies the draw, the attempt, the
path and the purpose (stream) of the number, so any path can be
regenerated in isolation and the order in which paths are computed does
not matter.

Two access patterns are offered: random access by counter
(:func:`uniform_pair`), and a sequential stream whose
draw index advances by one per block of four words (:func:`next_normal`,
a 256-layer ziggurat on 64-bit words).

Counter layout (four 32-bit words)::

    c0 = draw index within the stream
    c1 = attempt number (rejection sampling), otherwise 0
    c2 = low 32 bits of the path index
    c3 = stream id << 24 | bits 32..55 of the path index
"""

from __future__ import annotations

import math

import numba as nb
import numpy as np

__all__ = [
    "STREAM_INCREMENTS",
    "STREAM_HORIZON",
    "STREAM_BRIDGE",
    "STREAM_BES",
    "STREAM_REJECTION",
    "STREAM_REJECTION_BRIDGE",
    "STREAM_EXTREMES",
    "split_seed",
    "philox4x32",
    "uniform_pair",
    "new_stream",
    "next_u64",
    "next_uniform",
    "next_normal",
]

STREAM_INCREMENTS = 1
STREAM_HORIZON = 2
STREAM_BRIDGE = 3
STREAM_BES = 4
STREAM_REJECTION = 5
STREAM_REJECTION_BRIDGE = 6
STREAM_EXTREMES = 7

_MASK32 = np.uint64(0xFFFFFFFF)
_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = np.uint64(0x9E3779B9)
_W1 = np.uint64(0xBB67AE85)
_S32 = np.uint64(32)
_INV_2_53 = 1.0 / 9007199254740992.0


def split_seed(seed: int) -> tuple[int, int]:
    """Reduce any integer seed to 64 bits and split it into the two key words."""
    s = int(seed) & 0xFFFFFFFFFFFFFFFF
    return s & 0xFFFFFFFF, s >> 32


@nb.njit(inline="always", cache=True)
def philox4x32(c0, c1, c2, c3, k0, k1):
    """Ten Philox rounds; all arguments and results are uint64 holding 32-bit words."""
    for r in range(10):
        if r > 0:
            k0 = (k0 + _W0) & _MASK32
            k1 = (k1 + _W1) & _MASK32
        p0 = _M0 * c0
        p1 = _M1 * c2
        n0 = ((p1 >> _S32) ^ c1 ^ k0) & _MASK32
        n1 = p1 & _MASK32
        n2 = ((p0 >> _S32) ^ c3 ^ k1) & _MASK32
        n3 = p0 & _MASK32
        c0, c1, c2, c3 = n0, n1, n2, n3
    return c0, c1, c2, c3


@nb.njit(inline="always", cache=True)
def _counter(stream, path, attempt):
    p = np.uint64(path)
    c2 = p & _MASK32
    c3 = ((np.uint64(stream) << np.uint64(24)) | ((p >> _S32) & np.uint64(0xFFFFFF))) & _MASK32
    return np.uint64(attempt) & _MASK32, c2, c3


@nb.njit(inline="always", cache=True)
def _to_unit(hi, lo):
    # 53 random bits, centred so the result lies strictly inside (0, 1)
    a = hi >> np.uint64(5)
    b = lo >> np.uint64(6)
    return (float(a) * 67108864.0 + float(b) + 0.5) * _INV_2_53


@nb.njit(inline="always", cache=True)
def uniform_pair(k0, k1, stream, path, attempt, draw):
    """Two independent Uniform(0, 1) numbers for one counter value."""
    c1, c2, c3 = _counter(stream, path, attempt)
    w0, w1, w2, w3 = philox4x32(np.uint64(draw) & _MASK32, c1, c2, c3, np.uint64(k0), np.uint64(k1))
    return _to_unit(w0, w1), _to_unit(w2, w3)


# -- sequential streams -------------------------------------------------------
#
# A stream is a tuple of eleven uint64 words
# (k0, k1, c1, c2, c3, draw, pos, b0, b1, b2, b3): the key, the fixed counter
# words, the next draw index and a four-word output buffer with its read
# position.  Threading the tuple through the kernels keeps it in registers.

_ZIG_R = 3.6541528853610088
_ZIG_V = 0.00492867323399
_TWO_52 = 4503599627370496.0


def _ziggurat_tables():
    ki = np.zeros(256, dtype=np.uint64)
    wi = np.zeros(256)
    fi = np.zeros(256)
    dn = _ZIG_R
    tn = dn
    q = _ZIG_V / math.exp(-0.5 * dn * dn)
    ki[0] = np.uint64(int((dn / q) * _TWO_52))
    ki[1] = np.uint64(0)
    wi[0] = q / _TWO_52
    wi[255] = dn / _TWO_52
    fi[0] = 1.0
    fi[255] = math.exp(-0.5 * dn * dn)
    for i in range(254, 0, -1):
        dn = math.sqrt(-2.0 * math.log(_ZIG_V / dn + math.exp(-0.5 * dn * dn)))
        ki[i + 1] = np.uint64(int((dn / tn) * _TWO_52))
        tn = dn
        fi[i] = math.exp(-0.5 * dn * dn)
        wi[i] = dn / _TWO_52
    return ki, wi, fi


_KI, _WI, _FI = _ziggurat_tables()
_Z = np.uint64(0)
_ONE = np.uint64(1)
_TWO = np.uint64(2)
_FOUR = np.uint64(4)


@nb.njit(inline="always", cache=True)
def new_stream(k0, k1, stream, path, attempt):
    """Start a sequential stream at draw 0."""
    c1, c2, c3 = _counter(stream, path, attempt)
    return (np.uint64(k0), np.uint64(k1), c1, c2, c3, _Z, _FOUR, _Z, _Z, _Z, _Z)


@nb.njit(inline="always", cache=True)
def next_u64(g):
    """(64-bit word, advanced stream)."""
    if g[6] >= _FOUR:
        w0, w1, w2, w3 = philox4x32(g[5] & _MASK32, g[2], g[3], g[4], g[0], g[1])
        g = (g[0], g[1], g[2], g[3], g[4], g[5] + _ONE, _Z, w0, w1, w2, w3)
    if g[6] == _Z:
        v = (g[7] << _S32) | g[8]
    else:
        v = (g[9] << _S32) | g[10]
    return v, (g[0], g[1], g[2], g[3], g[4], g[5], g[6] + _TWO, g[7], g[8], g[9], g[10])


@nb.njit(inline="always", cache=True)
def next_uniform(g):
    """(Uniform on (0, 1) from the top 53 bits of the next word, advanced stream)."""
    v, g = next_u64(g)
    return (float(v >> np.uint64(11)) + 0.5) * _INV_2_53, g


@nb.njit(cache=True)
def _normal_slow(g, idx, rabs, x):
    while True:
        if idx == 0:
            while True:
                u1, g = next_uniform(g)
                u2, g = next_uniform(g)
                xx = -math.log(u1) / _ZIG_R
                yy = -math.log(u2)
                if yy + yy > xx * xx:
                    if (rabs >> np.uint64(8)) & _ONE:
                        return -(_ZIG_R + xx), g
                    return _ZIG_R + xx, g
        u, g = next_uniform(g)
        if (_FI[idx - 1] - _FI[idx]) * u + _FI[idx] < math.exp(-0.5 * x * x):
            return x, g
        r, g = next_u64(g)
        idx = int(r & np.uint64(0xFF))
        r >>= np.uint64(8)
        rabs = (r >> _ONE) & np.uint64(0x000FFFFFFFFFFFFF)
        x = float(rabs) * _WI[idx]
        if r & _ONE:
            x = -x
        if rabs < _KI[idx]:
            return x, g


@nb.njit(inline="always", cache=True)
def next_normal(g):
    """(Standard normal by the 256-layer ziggurat, advanced stream)."""
    r, g = next_u64(g)
    idx = int(r & np.uint64(0xFF))
    r >>= np.uint64(8)
    rabs = (r >> _ONE) & np.uint64(0x000FFFFFFFFFFFFF)
    x = float(rabs) * _WI[idx]
    if r & _ONE:
        x = -x
    if rabs >= _KI[idx]:
        x, g = _normal_slow(g, idx, rabs, x)
    return x, g
