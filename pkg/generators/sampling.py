"""
Samplers used by the war pact selection rules.
"""

import numpy as np


class UniformStream:
    """Uniform floats in [0, 1) drawn from a numpy Generator in batches"""

    def __init__(self, rng, batch=4096):
        self._rng = rng
        self._batch = batch
        self._buffer = rng.random(batch)
        self._index = 0

    def next(self):
        if self._index == self._batch:
            self._buffer = self._rng.random(self._batch)
            self._index = 0
        value = self._buffer[self._index]
        self._index += 1
        return value


class FenwickSampler:
    """
    Weighted sampling over integer keys 0..size-1 with O(log size) updates.

    Used for the inverse-degree draw of the KI rule, where every merge
    changes two weights.
    """

    def __init__(self, weights):
        weights = np.asarray(weights, dtype=np.float64)
        self._size = len(weights)
        self._weights = weights.copy()
        tree = np.concatenate(([0.0], weights))
        for index in range(1, self._size + 1):
            parent = index + (index & -index)
            if parent <= self._size:
                tree[parent] += tree[index]
        self._tree = tree.tolist()
        self._top = 1 << (self._size.bit_length() - 1) if self._size else 0

    @property
    def total(self):
        total = 0.0
        index = self._size
        while index > 0:
            total += self._tree[index]
            index -= index & -index
        return total

    def update(self, key, weight):
        delta = weight - self._weights[key]
        self._weights[key] = weight
        index = key + 1
        while index <= self._size:
            self._tree[index] += delta
            index += index & -index

    def find(self, target):
        """Smallest key whose cumulative weight exceeds target"""
        position = 0
        step = self._top
        while step:
            candidate = position + step
            if candidate <= self._size and self._tree[candidate] <= target:
                position = candidate
                target -= self._tree[candidate]
            step >>= 1
        return min(position, self._size - 1)

    def sample(self, fraction):
        return self.find(fraction * self.total)
