"""Compiled inner loops: the counter-based uniform hash and depth recursions."""

import numba as nb
import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0


@nb.njit(cache=True, nogil=True)
def mix64(x):
    z = x + _GOLDEN
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@nb.njit(cache=True, nogil=True)
def uniform_at(key, index):
    # splitmix64 output number `index` of the stream seeded with `key`
    return np.float64(mix64(key + np.uint64(index) * _GOLDEN) >> _S11) * _INV53


@nb.njit(cache=True, nogil=True)
def uniform_block(key, start, count):
    out = np.empty(count, dtype=np.float64)
    for i in range(count):
        out[i] = uniform_at(key, start + i)
    return out


@nb.njit(cache=True, nogil=True)
def uniforms_gather(keys, indices):
    out = np.empty(indices.shape[0], dtype=np.float64)
    for i in range(indices.shape[0]):
        out[i] = uniform_at(keys[i], indices[i])
    return out


@nb.njit(cache=True, nogil=True)
def derive_key(parts):
    h = np.uint64(0x6A09E667F3BCC909)
    for p in parts:
        h = mix64(h ^ mix64(np.uint64(p)))
    return h


@nb.njit(cache=True, nogil=True)
def floor_parents(x, first_label):
    """parent(i) = floor(i * x[i - first_label]) clamped below i."""
    m = x.shape[0]
    out = np.empty(m, dtype=np.int64)
    for j in range(m):
        i = first_label + j
        p = np.int64(np.floor(i * x[j]))
        if p > i - 1:
            p = i - 1
        if p < 0:
            p = 0
        out[j] = p
    return out


@nb.njit(cache=True, nogil=True)
def depths_from_parents(parents):
    """parents[i] < i for i >= 1; parents[0] is ignored."""
    n1 = parents.shape[0]
    depths = np.zeros(n1, dtype=np.int32)
    for i in range(1, n1):
        depths[i] = depths[parents[i]] + 1
    return depths


@nb.njit(cache=True, nogil=True)
def subtree_sizes(parents):
    n1 = parents.shape[0]
    sizes = np.ones(n1, dtype=np.int64)
    for i in range(n1 - 1, 0, -1):
        sizes[parents[i]] += sizes[i]
    return sizes
