"""Strictly implicit priority queue that accepts duplicate keys.

The amortized queue needs distinct elements to encode bits.  Here it runs
over *pair items*: two distinct elements whose key is the smaller one and
whose slot order encodes a bit.  The array has one of three shapes, decided
from ``n`` and positions 1-2:

``n <= SMALL``
    a binary heap over the elements.
``a[1] == a[2]`` (degenerate)
    one value v fills a prefix; fewer than ``threshold(n)`` other elements
    sit after it, none equal to v.
``a[1] != a[2]`` (full)
    ``[item 1][p_L][items 2..p][L][B']`` where p_L holds the Gray-coded
    item count p in ``W`` pairs, L is a run of one value w and B' is a
    buffer of single elements none equal to w.
"""
from __future__ import annotations

from functools import cmp_to_key

from .amortized import PRODUCTION, AmortizedCore, Profile
from .core import CorruptionError, ImplicitArray, ItemOps, UnderflowError, from_gray, to_gray

W = 32            # pairs in the p_L field
C_PAIRS = 4       # pairs needed beyond p_L: C_PAIRS * floor(log2 n)
SMALL = 256       # up to this many elements the array is a plain binary heap

FULL = "full"
DEGENERATE = "degenerate"
HEAP = "heap"


def log2n(n: int) -> int:
    return max(n.bit_length() - 1, 1)


def threshold(n: int) -> int:
    """Distinct pairs required for the full layout at size n."""
    return W + 1 + C_PAIRS * log2n(n)


class PairStore(ItemOps):
    """Item store over pairs of slots: item 1 at slots 1-2, item k >= 2
    after the p_L field.  An item value is the tuple of its two elements."""

    bit_items = 1

    def __init__(self, arr: ImplicitArray, count: int = 0):
        self.arr = arr
        self.count = count

    @staticmethod
    def slot(i):
        return 1 if i == 1 else 2 * W + 2 * i - 1

    def get(self, i):
        a = self.arr.a
        s = 1 if i == 1 else 2 * W + 2 * i - 1
        return (a[s], a[s + 1])

    def put(self, i, x):
        s = 1 if i == 1 else 2 * W + 2 * i - 1
        arr = self.arr
        arr.put(s, x[0])
        arr.put(s + 1, x[1])

    def swap(self, i, j):
        if i == j:
            return
        x = self.get(i)
        self.put(i, self.get(j))
        self.put(j, x)

    def key(self, x):
        self.arr.comparisons += 1
        return x[0] if x[0] < x[1] else x[1]

    def lt(self, x, y):
        kx = self.key(x)
        ky = self.key(y)
        self.arr.comparisons += 1
        return kx < ky

    def bit_of(self, x):
        self.arr.comparisons += 1
        if x[0] < x[1]:
            return 1
        self.arr.comparisons += 1
        if not x[1] < x[0]:
            raise CorruptionError("pair item with equal elements")
        return 0

    def read_bit(self, i):
        return self.bit_of(self.get(i))

    def write_bit(self, i, bit):
        x = self.get(i)
        if self.bit_of(x) != bit:
            s = self.slot(i)
            self.arr.swap(s, s + 1)

    def _tie(self, x, t):
        """-1, 0 or 1 as key(x) is below, equal to or above key(t)."""
        kx, kt = self.key(x), self.key(t)
        self.arr.comparisons += 1
        if kt < kx:
            return 1
        self.arr.comparisons += 1
        return -1 if kx < kt else 0

    def is_dummy(self, x, t):
        c = self._tie(x, t)
        if c:
            return c > 0
        return self.bit_of(x) == 1

    def as_real(self, x, t):
        if self._tie(x, t) == 0 and self.bit_of(x) == 1:
            return (x[1], x[0])
        return x

    def as_dummy(self, x, t):
        if self._tie(x, t) == 0 and self.bit_of(x) == 0:
            return (x[1], x[0])
        return x


class IdenticalPQ:
    """Priority queue over arbitrary (possibly repeated) comparable keys.

    >>> pq = IdenticalPQ()
    >>> for k in (3, 1, 3, 1):
    ...     pq.insert(k)
    >>> [pq.extract_min() for _ in range(4)]
    [1, 1, 3, 3]
    """

    name = "identical"

    def __init__(self, arr: ImplicitArray | None = None, profile: Profile = PRODUCTION):
        self.arr = arr if arr is not None else ImplicitArray()
        self.store = PairStore(self.arr)
        self.core = AmortizedCore(self.store, profile)

    @classmethod
    def from_snapshot(cls, elements, n, profile: Profile = PRODUCTION):
        return cls(ImplicitArray.from_snapshot(list(elements), n), profile)

    def __len__(self):
        return self.arr.n

    # -- small helpers on the raw array --------------------------------------

    def _eq(self, i, j):
        a = self.arr.a
        return self.arr.equal(a[i], a[j])

    def _eqv(self, x, y):
        return self.arr.equal(x, y)

    def mode(self):
        n = self.arr.n
        if n <= SMALL:
            return HEAP
        return DEGENERATE if self._eq(1, 2) else FULL

    def _read_p(self):
        return from_gray(self.arr.read_int(3, W))

    def _tail(self, p):
        """(l0, l1): L occupies l0..l1-1, B' occupies l1..n."""
        arr = self.arr
        n = arr.n
        l0 = 2 * W + 2 * p + 1
        if l0 > n:
            return l0, l0
        w = arr.a[l0]
        lo, hi = l0 + 1, n + 1
        while lo < hi:
            mid = (lo + hi) // 2
            if self._eqv(arr.a[mid], w):
                lo = mid + 1
            else:
                hi = mid
        return l0, lo

    def _run_end(self):
        """Degenerate layout: last index k of the prefix run of a[1]."""
        arr = self.arr
        v = arr.a[1]
        k = arr.n
        while not self._eqv(arr.a[k], v):
            k -= 1
        return k

    # -- public operations -------------------------------------------------------

    def insert(self, key):
        arr = self.arr
        arr.op_begin()
        try:
            self._insert(key)
        finally:
            arr.op_end()

    def extract_min(self):
        arr = self.arr
        if arr.n == 0:
            raise UnderflowError("extract_min on empty queue")
        arr.op_begin()
        try:
            return self._extract()
        finally:
            arr.op_end()

    def find_min(self):
        arr = self.arr
        if arr.n == 0:
            raise UnderflowError("find_min on empty queue")
        saved = arr.moves, arr.comparisons
        try:
            return min(self.elements_candidates())
        finally:
            arr.moves, arr.comparisons = saved

    def elements_candidates(self):
        """Elements among which the minimum must lie (read-only)."""
        arr = self.arr
        a = arr.a
        n = arr.n
        mode = self.mode()
        if mode == HEAP:
            return [a[1]]
        if mode == DEGENERATE:
            k = self._run_end()
            return [a[1]] + a[k + 1:n + 1]
        p = self._read_p()
        self.store.count = p
        l0, l1 = self._tail(p)
        out = list(a[3:2 * W + 3])
        out.extend(self.core.find_min())
        if l1 > l0:
            out.append(a[l0])
        out.extend(a[l1:n + 1])
        return out

    # -- insert ------------------------------------------------------------------

    def _insert(self, x):
        arr = self.arr
        n = arr.n
        if n < SMALL:
            arr.append(x)
            arr.sift_up(1, n, 2)
            return
        if n == SMALL:
            arr.append(x)
            self._reorganize(0, 0)
            return
        if self._eq(1, 2):
            k = self._run_end()
            arr.append(x)
            if self._eqv(x, arr.a[1]):
                if k + 1 < arr.n:
                    arr.swap(k + 1, arr.n)
                k += 1
            if arr.n - k >= threshold(arr.n):
                self._reorganize(1, k + 1)
            return
        p = self._read_p()
        self.store.count = p
        l0, l1 = self._tail(p)
        self._append_tail(x, l0, l1)
        n = arr.n
        if n % log2n(n) == 0:
            self._make_pairs(p)

    def _append_tail(self, x, l0, l1):
        """Append x to the tail keeping L a run and B' free of its value."""
        arr = self.arr
        arr.append(x)
        n = arr.n
        if l1 > l0 and l1 < n and self._eqv(x, arr.a[l0]):
            arr.swap(l1, n)

    def _make_pairs(self, p):
        """Turn B' into pairs with L (or among itself) and insert them."""
        arr = self.arr
        a = arr.a
        l0, l1 = self._tail(p)
        j = l1
        n = arr.n
        while j <= n:
            x = a[j]
            if l1 == l0:
                l1 = j + 1           # x starts a new run
            elif self._eqv(x, a[l0]):
                l1 = j + 1
            else:
                if l1 - l0 >= 2:
                    arr.swap(l0 + 1, j)
                # slots l0, l0+1 now hold the pair (w, x)
                self.store.count = p
                self.core.insert_last()
                p += 1
                arr.gray_step(3, W, +1)
                l0 += 2
                l1 = j + 1
                if l1 < l0:
                    l1 = l0
            j += 1

    # -- extract -----------------------------------------------------------------

    def _extract(self):
        arr = self.arr
        a = arr.a
        n = arr.n
        if n <= SMALL:
            top = a[1]
            if n > 1:
                arr.put(1, a[n])
            arr.n = n - 1
            arr.sift_down(1, n - 1, 2, 0)
            return top
        if self._eq(1, 2):
            return self._extract_degenerate()
        p = self._read_p()
        if p <= 1:
            l0, l1 = self._tail(p)
            self._reorganize(l0, l1)
            return self._extract()
        self.store.count = p
        x = self._extract_full(p)
        self._after_full_extract()
        return x

    def _extract_degenerate(self):
        arr = self.arr
        a = arr.a
        n = arr.n
        k = self._run_end()
        best = k  # the run's value, taken from its last slot
        for j in range(k + 1, n + 1):
            if arr.lt(a[j], a[best]):
                best = j
        x = a[best]
        if best != n:
            arr.put(best, a[n])
        arr.n = n - 1
        if best == k:
            k -= 1
        self._settle(k)
        return x

    def _settle(self, k):
        """Restore a valid shape after an extraction in degenerate mode."""
        arr = self.arr
        n = arr.n
        if n <= SMALL:
            arr.heapify(1, n, 2)
        elif n - k >= threshold(n):
            self._reorganize(1, k + 1)

    def _extract_full(self, p):
        arr = self.arr
        a = arr.a
        n = arr.n
        store = self.store
        l0, l1 = self._tail(p)
        # candidates: inner minimum, p_L elements, w, B'
        item = self.core.find_min()
        best_val = store.key(item)
        where = "pq"
        for s in range(3, 2 * W + 3):
            if arr.lt(a[s], best_val):
                best_val, where = a[s], s
        if l1 > l0 and arr.lt(a[l0], best_val):
            best_val, where = a[l0], "L"
        for s in range(l1, n + 1):
            if arr.lt(a[s], best_val):
                best_val, where = a[s], s
        if where == "pq":
            pair = self.core.extract_min()
            if arr.lt(pair[0], pair[1]):
                x, partner = pair
            else:
                partner, x = pair
            self._drop_item(p, l0, l1, partner)
            return x
        if where == "L":
            last = l1 - 1
            if last != n:
                arr.put(last, a[n])
            arr.n = n - 1
            if last == l0 and l0 <= arr.n:
                self._regroup(l0)
            return best_val
        if where >= l1:
            if where != n:
                arr.put(where, a[n])
            arr.n = n - 1
            return best_val
        # inside p_L: refill the pair with the last inner item, same bit
        base = where if where % 2 == 1 else where - 1
        bit = 1 if arr.lt(a[base], a[base + 1]) else 0
        partner = a[base + 1] if where == base else a[base]
        repl = self.core.pop_last()
        rbit = 1 if arr.lt(repl[0], repl[1]) else 0
        if rbit != bit:
            repl = (repl[1], repl[0])
        arr.put(base, repl[0])
        arr.put(base + 1, repl[1])
        self._drop_item(p, l0, l1, partner)
        return best_val

    def _drop_item(self, p, l0, l1, partner):
        """The inner queue shrank by one item: close the two-slot gap before
        the tail, decrement p_L and append ``partner``."""
        arr = self.arr
        a = arr.a
        n = arr.n
        h = l0 - 2
        la, lb = l1 - l0, n - l1 + 1
        if la >= 2:
            arr.put(h, a[l1 - 1])
            arr.put(h + 1, a[l1 - 2])
            if lb >= 2:
                arr.put(l1 - 2, a[n])
                arr.put(l1 - 1, a[n - 1])
            elif lb == 1:
                arr.put(l1 - 2, a[n])
        elif la == 1:
            arr.put(h, a[l0])
            if lb >= 2:
                arr.put(h + 1, a[n])
                arr.put(l0, a[n - 1])
            elif lb == 1:
                arr.put(h + 1, a[n])
        arr.n = n - 2
        arr.gray_step(3, W, -1)
        self._append_tail(partner, h, h + max(la, 0))

    def _regroup(self, l0):
        """L ran empty: the new run value may still occur later in B'."""
        arr = self.arr
        a = arr.a
        end = l0 + 1
        for j in range(l0 + 1, arr.n + 1):
            if self._eqv(a[j], a[l0]):
                if j != end:
                    arr.swap(j, end)
                end += 1

    def _after_full_extract(self):
        arr = self.arr
        n = arr.n
        if n <= SMALL:
            self._reorganize(0, 0)
            return
        p = self._read_p()
        l0, l1 = self._tail(p)
        if n - l1 + 1 > 2 * log2n(n):
            self.store.count = p
            self._make_pairs(p)

    # -- re-pairing ------------------------------------------------------------

    def _reorganize(self, r0, r1):
        """Rebuild the whole shape from scratch.

        Slots ``r0 .. r1-1`` are known to hold one repeated value; only the
        other slots are inspected when that value is the majority.
        """
        arr = self.arr
        a = arr.a
        n = arr.n
        if n <= SMALL:
            arr.heapify(1, n, 2)
            return
        if r1 > r0:
            others = list(range(1, r0)) + list(range(r1, n + 1))
        else:
            others = list(range(1, n + 1))
        # majority vote seeded with the known run
        cand, votes = (a[r0], r1 - r0) if r1 > r0 else (None, 0)
        for i in others:
            if votes == 0:
                cand, votes = a[i], 1
            elif self._eqv(a[i], cand):
                votes += 1
            else:
                votes -= 1
        run_is_cand = r1 > r0 and self._eqv(a[r0], cand)
        freq = (r1 - r0) if run_is_cand else 0
        scan = others if run_is_cand else range(1, n + 1)
        nonv = [i for i in scan if not self._eqv(a[i], cand)]
        freq = n - len(nonv)
        pairs = min(n // 2, n - freq)
        if pairs < threshold(n):
            self._make_degenerate(cand, nonv)
            return
        if 2 * freq >= n:
            total = self._pair_with_majority(nonv)
        else:
            total = self._pair_sorted()
        p = total - W
        value = to_gray(p)
        for k in range(W):
            bit = (value >> (W - 1 - k)) & 1
            s = 3 + 2 * k
            if (1 if arr.lt(a[s], a[s + 1]) else 0) != bit:
                arr.swap(s, s + 1)
        self.store.count = p
        self.core.build()

    def _make_degenerate(self, v, nonv):
        """Move the non-majority elements (positions ``nonv``) to the tail."""
        arr = self.arr
        a = arr.a
        n = arr.n
        s = len(nonv)
        front = [i for i in nonv if i <= n - s]
        back = [i for i in range(n - s + 1, n + 1) if self._eqv(a[i], v)]
        for i, j in zip(front, back):
            arr.swap(i, j)

    def _pair_with_majority(self, nonv):
        """Place non-majority elements at slots 2, 4, ...; returns pair count."""
        arr = self.arr
        s = len(nonv)
        target = set(range(2, 2 * s + 1, 2))
        misplaced = [i for i in nonv if i not in target]
        occupied = set(nonv)
        free = [i for i in sorted(target) if i not in occupied]
        for i, j in zip(misplaced, free):
            arr.swap(i, j)
        return s

    def _pair_sorted(self):
        """No majority: sort and pair the i-th smallest with the (i+n/2)-th."""
        arr = self.arr
        a = arr.a
        n = arr.n

        def cmp(x, y):
            arr.comparisons += 1
            return -1 if x < y else (1 if y < x else 0)

        vals = sorted(a[1:n + 1], key=cmp_to_key(cmp))
        h = n // 2
        for i in range(h):
            arr.put(2 * i + 1, vals[i])
            arr.put(2 * i + 2, vals[i + h])
        if n % 2:
            arr.put(n, vals[2 * h])
        return h

    # -- inspection ------------------------------------------------------------

    def check(self):
        arr = self.arr
        saved = arr.moves, arr.comparisons
        try:
            self._check()
        finally:
            arr.moves, arr.comparisons = saved

    def _check(self):
        arr = self.arr
        a = arr.a
        n = arr.n
        mode = self.mode()
        if mode == HEAP:
            assert arr.is_heap(1, n, 2), "small heap order"
            return
        if mode == DEGENERATE:
            k = self._run_end()
            v = a[1]
            assert all(x == v for x in a[1:k + 1]), "degenerate prefix not one value"
            assert all(x != v for x in a[k + 1:n + 1]), "degenerate tail holds the run value"
            assert n - k < threshold(n), "degenerate tail too long"
            return
        p = self._read_p()
        assert p >= 1, "full layout with no items"
        self.store.count = p
        for i in range(1, p + 1):
            x = self.store.get(i)
            assert x[0] != x[1], f"item {i} is not a distinct pair"
        for s in range(3, 2 * W + 3, 2):
            assert a[s] != a[s + 1], "p_L pair with equal elements"
        l0, l1 = self._tail(p)
        assert l0 <= n + 1, "items run past the array"
        if l1 > l0:
            w = a[l0]
            assert all(x != w for x in a[l1:n + 1]), "B' holds the run value"
        self.core.check()
