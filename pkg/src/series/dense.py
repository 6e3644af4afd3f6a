# src/series/dense.py
"""Dense kernels on numpy object arrays.

Index ``i`` of an array stands for the ``i``-th lattice point of a series
(exponent ``offset + i*step``). Object dtype keeps Python integers,
Fractions and mpmath values exact; the loops run inside numpy.
"""
from math import gcd
from typing import Dict, Optional

import numpy as np


def lattice_step(keys) -> int:
    """gcd of all differences to the first key (0 for a single key)"""
    it = iter(keys)
    first = next(it)
    g = 0
    for k in it:
        g = gcd(g, k - first)
    return g


def to_array(coeffs: Dict[int, object], offset: int, step: int, length: int) -> np.ndarray:
    arr = np.zeros(length, dtype=object)
    for k, c in coeffs.items():
        arr[(k - offset) // step] = c
    return arr


def convolve(left: Dict[int, object], right: Dict[int, object],
             limit: Optional[int] = None, dense_threshold: int = 2048) -> Dict[int, object]:
    """Exact product of two sparse coefficient maps, dropping keys >= limit"""
    if not left or not right:
        return {}
    a0, b0 = min(left), min(right)
    if limit is not None:
        left = {k: c for k, c in left.items() if k + b0 < limit}
        right = {k: c for k, c in right.items() if k + a0 < limit}
        if not left or not right:
            return {}

    work = len(left) * len(right)
    if work >= dense_threshold:
        step = gcd(lattice_step(left), lattice_step(right)) or 1
        la = (max(left) - a0) // step + 1
        lb = (max(right) - b0) // step + 1
        # dense only pays off when the lattices are mostly filled
        if la * lb <= 4 * work:
            return _dense_convolve(left, right, a0, b0, step, la, lb, limit)

    out: Dict[int, object] = {}
    right_items = sorted(right.items())
    for ka, ca in left.items():
        for kb, cb in right_items:
            k = ka + kb
            if limit is not None and k >= limit:
                break
            out[k] = out.get(k, 0) + ca * cb
    return {k: c for k, c in out.items() if c}


def _dense_convolve(left, right, a0, b0, step, la, lb, limit):
    A = to_array(left, a0, step, la)
    B = to_array(right, b0, step, lb)
    if la < lb:
        A, B, la, lb = B, A, lb, la
    size = la + lb - 1
    if limit is not None:
        size = min(size, max(0, -(-(limit - a0 - b0) // step)))
    R = np.zeros(size, dtype=object)
    for i in range(min(lb, size)):
        c = B[i]
        if not c:
            continue
        stop = min(la, size - i)
        R[i:i + stop] += c * A[:stop]
    base = a0 + b0
    return {base + i * step: c for i, c in enumerate(R) if c}


def multiply_binomial(arr: np.ndarray, shift: int, sign: int, power: int) -> None:
    """In place: arr *= (1 + sign*x^shift)^power for integer ``power``"""
    length = len(arr)
    if shift >= length or power == 0:
        return
    if power > 0:
        for _ in range(power):
            arr[shift:] = arr[shift:] + sign * arr[:-shift]
        return
    for _ in range(-power):
        # b_i = a_i - sign*b_{i-shift}, block by block
        for start in range(shift, length, shift):
            end = min(start + shift, length)
            arr[start:end] = arr[start:end] - sign * arr[start - shift:end - shift]
