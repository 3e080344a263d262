"""Permutations in one-line notation and their action on digit strings.

A permutation of n sites is a tuple ``p`` of length n with ``p[i]`` the
image of site ``i`` (0-based).  Composition is function composition,
``compose(p, q)[i] == p[q[i]]`` (apply ``q`` first).
"""

from __future__ import annotations

import itertools

import numpy as np


def identity(n: int) -> tuple[int, ...]:
    return tuple(range(n))


def is_permutation(p: tuple[int, ...], n: int) -> bool:
    return len(p) == n and sorted(p) == list(range(n))


def check_permutation(p: tuple[int, ...], n: int) -> tuple[int, ...]:
    p = tuple(int(x) for x in p)
    if not is_permutation(p, n):
        raise ValueError(f"not a permutation of {n} sites: {p}")
    return p


def compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """p after q: the permutation sending i to p[q[i]]."""
    return tuple(p[q[i]] for i in range(len(p)))


def inverse(p: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


def adjacent_transposition(n: int, k: int) -> tuple[int, ...]:
    """Swap sites k and k+1 (0-based), fix the rest."""
    if not 0 <= k < n - 1:
        raise ValueError(f"adjacent transposition index out of range: {k}")
    p = list(range(n))
    p[k], p[k + 1] = p[k + 1], p[k]
    return tuple(p)


def adjacent_transpositions(n: int) -> list[tuple[int, ...]]:
    """The n-1 adjacent transpositions, which generate the full group."""
    return [adjacent_transposition(n, k) for k in range(n - 1)]


def all_permutations(n: int) -> list[tuple[int, ...]]:
    """All n! permutations in lexicographic order."""
    return [tuple(p) for p in itertools.permutations(range(n))]


def string_index_map(p: tuple[int, ...], base: int, n: int) -> np.ndarray:
    """Index map of the site permutation on base-``base`` digit strings.

    Site 0 is the most significant digit.  The string x = (x_0, ..., x_{n-1})
    is sent to x' with x'_k = x_{p^{-1}(k)}, i.e. the digit at site p^{-1}(k)
    moves to site k.  Returns an integer array ``t`` with ``t[i]`` the index
    of the permuted string, so a basis vector e_i is mapped to e_{t[i]}.
    """
    p = check_permutation(p, n)
    shape = (base,) * n
    digits = np.array(np.unravel_index(np.arange(base**n), shape))
    pinv = inverse(p)
    return np.ravel_multi_index(tuple(digits[list(pinv)]), shape)
