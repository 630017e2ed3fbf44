"""Reference binary heap (Williams' layout) used as the fuzzing oracle.

Deliberately self-contained: it shares no code with the implicit queues it
checks.  It also counts moves and comparisons so it can be benchmarked as
the ``binary`` implementation.
"""
from __future__ import annotations


class BinaryHeap:
    name = "binary"

    def __init__(self):
        self.h = []
        self.moves = 0
        self.comparisons = 0
        self.max_op_moves = 0
        self.max_op_comparisons = 0
        self.ops = 0

    def __len__(self):
        return len(self.h)

    def _done(self, m0, c0):
        self.ops += 1
        self.max_op_moves = max(self.max_op_moves, self.moves - m0)
        self.max_op_comparisons = max(self.max_op_comparisons, self.comparisons - c0)

    def insert(self, key):
        m0, c0 = self.moves, self.comparisons
        h = self.h
        h.append(key)
        i = len(h) - 1
        while i > 0:
            parent = (i - 1) // 2
            self.comparisons += 1
            if not key < h[parent]:
                break
            h[i] = h[parent]
            self.moves += 1
            i = parent
        h[i] = key
        self.moves += 1
        self._done(m0, c0)

    def find_min(self):
        if not self.h:
            raise IndexError("find_min on empty heap")
        return self.h[0]

    def extract_min(self):
        if not self.h:
            raise IndexError("extract_min on empty heap")
        m0, c0 = self.moves, self.comparisons
        h = self.h
        top = h[0]
        last = h.pop()
        size = len(h)
        if size:
            i = 0
            while True:
                c = 2 * i + 1
                if c >= size:
                    break
                if c + 1 < size:
                    self.comparisons += 1
                    if h[c + 1] < h[c]:
                        c += 1
                self.comparisons += 1
                if not h[c] < last:
                    break
                h[i] = h[c]
                self.moves += 1
                i = c
            h[i] = last
            self.moves += 1
        self._done(m0, c0)
        return top

    def check(self):
        h = self.h
        for i in range(1, len(h)):
            assert not h[i] < h[(i - 1) // 2], "heap order"
