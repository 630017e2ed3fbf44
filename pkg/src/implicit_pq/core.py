"""Instrumented element array and the primitives every structure is built from.

Slots are 1-indexed: ``a[1] .. a[n]`` hold the live elements and ``a[0]`` is
never used.  This matches the position arithmetic of the forest and layout
code (node ``k`` lives in slots ``3k-2 .. 3k``, heap children of offset ``k``
are ``d*k+1 .. d*k+d``, and so on).

Cost model: every write of an element into a slot is one move, a swap is two,
and every element comparison is counted.  Reads are free.

The same object also serves as an *item store* for the amortized queue: an
item is a single element, a bit is encoded by two consecutive items.  The
pair store in :mod:`implicit_pq.identical` implements the same protocol with
two-element items.
"""
from __future__ import annotations

import operator
from dataclasses import dataclass, asdict


class CorruptionError(RuntimeError):
    """Raised when the array contents cannot be decoded (e.g. an equal bit pair)."""


class CapacityError(RuntimeError):
    pass


class UnderflowError(IndexError):
    pass


@dataclass
class CostCounters:
    moves: int = 0
    comparisons: int = 0
    per_op_max_moves: int = 0
    per_op_max_comparisons: int = 0
    ops: int = 0

    def as_dict(self):
        return asdict(self)


def msb(n: int) -> int:
    """Position of the most significant set bit, i.e. floor(log2 n)."""
    if n <= 0:
        raise ValueError("msb undefined for n <= 0")
    return n.bit_length() - 1


def lsb(n: int) -> int:
    if n <= 0:
        raise ValueError("lsb undefined for n <= 0")
    return (n & -n).bit_length() - 1


def to_gray(v: int) -> int:
    return v ^ (v >> 1)


def from_gray(g: int) -> int:
    v = g
    shift = g >> 1
    while shift:
        v ^= shift
        shift >>= 1
    return v


class ItemOps:
    """Generic heap/selection/codec algorithms over the item-store protocol.

    Subclasses provide ``get``, ``put``, ``lt``, ``read_bit``, ``write_bit``
    and ``count``.  Heap regions are given by the store index of their first
    item (``off``); the node at heap index ``k`` (0-based) lives at
    ``off + k`` and its children at ``off + d*k + 1 .. off + d*k + d``.
    """

    bit_items = 2

    # -- bits and integers -------------------------------------------------

    def read_int(self, off, width):
        v = 0
        step = self.bit_items
        for k in range(width):
            v = (v << 1) | self.read_bit(off + k * step)
        return v

    def write_int(self, off, width, value):
        if value < 0 or value >> width:
            raise ValueError(f"value {value} does not fit in {width} bits")
        step = self.bit_items
        for k in range(width):
            self.write_bit(off + k * step, (value >> (width - 1 - k)) & 1)

    # -- d-ary heaps -------------------------------------------------------

    def sift_up(self, off, k, d):
        """Restore heap order after the item at heap index ``k`` decreased."""
        if k == 0:
            return
        x = self.get(off + k)
        start = k
        while k > 0:
            p = (k - 1) // d
            y = self.get(off + p)
            if not self.lt(x, y):
                break
            self.put(off + k, y)
            k = p
        if k != start:
            self.put(off + k, x)

    def sift_down(self, off, size, d, k):
        """Restore heap order after the item at heap index ``k`` increased."""
        x = self.get(off + k)
        start = k
        while True:
            c = d * k + 1
            if c >= size:
                break
            last = min(c + d, size)
            best = c
            by = self.get(off + c)
            for j in range(c + 1, last):
                z = self.get(off + j)
                if self.lt(z, by):
                    best, by = j, z
            if not self.lt(by, x):
                break
            self.put(off + k, by)
            k = best
        if k != start:
            self.put(off + k, x)

    def heapify(self, off, size, d):
        if size < 2:
            return
        for k in range((size - 2) // d, -1, -1):
            self.sift_down(off, size, d, k)

    def heap_replace_root(self, off, size, d, x):
        """Overwrite the root with ``x`` and sift it down; returns the old root."""
        old = self.get(off)
        self.put(off, x)
        self.sift_down(off, size, d, 0)
        return old

    def is_heap(self, off, size, d):
        for k in range(1, size):
            if self.lt(self.get(off + k), self.get(off + (k - 1) // d)):
                return False
        return True

    def first_real(self, start, step, count, t):
        """Smallest k < count with a non-dummy at ``start + k*step``, or None."""
        for k in range(count):
            if not self.is_dummy(self.get(start + k * step), t):
                return k
        return None

    def first_dummy(self, lo, hi, t):
        """First index in ``lo .. hi-1`` holding a dummy, or ``hi``.

        The range must hold non-dummies followed by dummies.
        """
        while lo < hi:
            mid = (lo + hi) // 2
            if self.is_dummy(self.get(mid), t):
                hi = mid
            else:
                lo = mid + 1
        return lo

    # -- selection ---------------------------------------------------------

    def swap(self, i, j):
        if i == j:
            return
        x = self.get(i)
        self.put(i, self.get(j))
        self.put(j, x)

    def nth_element(self, lo, hi, k, reverse=False):
        """Partially order items ``lo .. hi`` (inclusive) around rank ``k``.

        Afterwards the item at ``lo + k - 1`` has rank ``k`` among the range,
        everything before it is <= it and everything after it is >= it
        (``reverse`` flips the order).  Deterministic median-of-medians
        pivoting keeps the comparison count linear in the range length.
        """
        if not 1 <= k <= hi - lo + 1:
            raise ValueError(f"rank {k} outside 1..{hi - lo + 1}")
        if reverse:
            lt = lambda x, y: self.lt(y, x)  # noqa: E731
        else:
            lt = self.lt
        self.nth_element_with(lo, hi, k, lt)

    def _insertion_sort(self, lo, hi, lt):
        for i in range(lo + 1, hi + 1):
            x = self.get(i)
            j = i
            while j > lo:
                y = self.get(j - 1)
                if not lt(x, y):
                    break
                self.put(j, y)
                j -= 1
            if j != i:
                self.put(j, x)

    def _mom_pivot(self, lo, hi, lt):
        # medians of groups of five are gathered at the front of the range
        dest = lo
        for g in range(lo, hi + 1, 5):
            ge = min(g + 4, hi)
            self._insertion_sort(g, ge, lt)
            self.swap(dest, (g + ge) // 2)
            dest += 1
        count = dest - lo
        self.nth_element_with(lo, dest - 1, (count + 1) // 2, lt)
        return lo + (count + 1) // 2 - 1

    def nth_element_with(self, lo, hi, k, lt):
        target = lo + k - 1
        while hi > lo:
            if hi - lo < 10:
                self._insertion_sort(lo, hi, lt)
                return
            p = self._mom_pivot(lo, hi, lt)
            left, right = self._partition3(lo, hi, p, lt)
            if target < left:
                hi = left - 1
            elif target > right:
                lo = right + 1
            else:
                return

    def _partition3(self, lo, hi, p, lt):
        """Dutch-flag partition around the pivot item at ``p``.

        Returns ``(left, right)``: items in ``left .. right`` are equal to the
        pivot, smaller ones come before and larger ones after.
        """
        pivot = self.get(p)
        i, lt_end, gt_start = lo, lo, hi
        while i <= gt_start:
            x = self.get(i)
            if lt(x, pivot):
                self.swap(lt_end, i)
                lt_end += 1
                i += 1
            elif lt(pivot, x):
                self.swap(i, gt_start)
                gt_start -= 1
            else:
                i += 1
        return lt_end, gt_start


_BIT_DIGITS = bytes.maketrans(b"\x00\x01", b"01")


class ImplicitArray(ItemOps):
    """A 1-indexed element array with move/comparison counters.

    The structures built on top keep nothing else between operations: all
    their state is ``(a[1..n], n)``.
    """

    bit_items = 2

    def __init__(self, elements=()):
        self.a = [None]
        self.a.extend(elements)
        self.n = len(self.a) - 1
        # reads are free and uncounted, so skip the Python-level call
        self.get = self.a.__getitem__
        self.moves = 0
        self.comparisons = 0
        self.ops = 0
        self.max_op_moves = 0
        self.max_op_comparisons = 0
        self._op_moves = 0
        self._op_cmps = 0

    # the item-store protocol calls the live size "count"
    @property
    def count(self):
        return self.n

    @count.setter
    def count(self, value):
        self.n = value

    def elements(self):
        return self.a[1:self.n + 1]

    def snapshot(self):
        """The complete persistent state: ``(elements, n)``."""
        return list(self.a[1:self.n + 1]), self.n

    @classmethod
    def from_snapshot(cls, elements, n):
        if len(elements) != n:
            raise ValueError("snapshot length does not match n")
        return cls(elements)

    def counters(self) -> CostCounters:
        return CostCounters(self.moves, self.comparisons, self.max_op_moves,
                            self.max_op_comparisons, self.ops)

    def reset_counters(self):
        self.moves = self.comparisons = self.ops = 0
        self.max_op_moves = self.max_op_comparisons = 0

    def op_begin(self):
        self._op_moves = self.moves
        self._op_cmps = self.comparisons

    def op_end(self):
        self.ops += 1
        dm = self.moves - self._op_moves
        dc = self.comparisons - self._op_cmps
        if dm > self.max_op_moves:
            self.max_op_moves = dm
        if dc > self.max_op_comparisons:
            self.max_op_comparisons = dc

    # -- slot access -------------------------------------------------------

    def get(self, i):
        return self.a[i]

    def put(self, i, x):
        self.moves += 1
        a = self.a
        if i >= len(a):
            a.extend([None] * (i - len(a) + 1))
        a[i] = x

    def swap(self, i, j):
        if i == j:
            return
        a = self.a
        a[i], a[j] = a[j], a[i]
        self.moves += 2

    def lt(self, x, y):
        self.comparisons += 1
        return x < y

    def less(self, i, j):
        self.comparisons += 1
        return self.a[i] < self.a[j]

    def equal(self, x, y):
        # two comparisons: the model only offers "<"
        self.comparisons += 2
        return not (x < y) and not (y < x)

    def append(self, x):
        self.n += 1
        self.put(self.n, x)

    def pop_last(self):
        if self.n == 0:
            raise UnderflowError("pop from empty array")
        x = self.a[self.n]
        self.n -= 1
        return x

    def is_dummy(self, x, t):
        return self.lt(t, x)

    # Distinct elements never tie with the threshold, so an element's
    # dummy status is fixed by its value and these are identities.
    def as_real(self, x, t):
        return x

    def as_dummy(self, x, t):
        return x

    # -- bit pairs ---------------------------------------------------------

    def read_bit(self, i):
        a = self.a
        x, y = a[i], a[i + 1]
        self.comparisons += 1
        if x < y:
            return 1
        if not (y < x):
            self.comparisons += 1
            raise CorruptionError(f"undecodable pair at slots {i},{i + 1}")
        self.comparisons += 1
        return 0

    def write_bit(self, i, bit):
        a = self.a
        self.comparisons += 1
        cur = 1 if a[i] < a[i + 1] else 0
        if cur != bit:
            a[i], a[i + 1] = a[i + 1], a[i]
            self.moves += 2

    # read_bit above spends a second comparison only to detect corruption;
    # the hot paths use this cheaper variant.
    def _bit(self, i):
        self.comparisons += 1
        return 1 if self.a[i] < self.a[i + 1] else 0

    def read_int(self, off, width):
        if width == 0:
            return 0
        a = self.a
        end = off + 2 * width
        bits = bytes(map(operator.lt, a[off:end:2], a[off + 1:end:2]))
        self.comparisons += width
        return int(bits.translate(_BIT_DIGITS), 2)

    def write_int(self, off, width, value):
        if value < 0 or value >> width:
            raise ValueError(f"value {value} does not fit in {width} bits")
        a = self.a
        moves = 0
        s = off
        for k in range(width - 1, -1, -1):
            bit = (value >> k) & 1
            if (a[s] < a[s + 1]) != bit:
                a[s], a[s + 1] = a[s + 1], a[s]
                moves += 2
            s += 2
        self.comparisons += width
        self.moves += moves

    # -- Gray-coded counters -----------------------------------------------

    def read_gray(self, off, width):
        return from_gray(self.read_int(off, width))

    def gray_step(self, off, width, delta):
        """Add ``delta`` (+1 or -1) to a Gray-coded field by flipping one bit."""
        v = self.read_gray(off, width)
        nv = v + delta
        if nv < 0 or nv >> width:
            raise OverflowError(f"gray field leaves range [0, 2^{width})")
        diff = to_gray(v) ^ to_gray(nv)
        k = diff.bit_length() - 1
        s = off + 2 * (width - 1 - k)
        self.swap(s, s + 1)
        return nv

    # -- fast d-ary heap paths (same semantics as ItemOps) -------------------

    def sift_up(self, off, k, d):
        if k == 0:
            return
        a = self.a
        x = a[off + k]
        start = k
        cmps = 0
        moves = 0
        while k > 0:
            p = (k - 1) // d
            y = a[off + p]
            cmps += 1
            if not x < y:
                break
            a[off + k] = y
            moves += 1
            k = p
        self.comparisons += cmps
        if k != start:
            a[off + k] = x
            self.moves += moves + 1

    def sift_down(self, off, size, d, k):
        a = self.a
        x = a[off + k]
        start = k
        cmps = 0
        moves = 0
        while True:
            c = d * k + 1
            if c >= size:
                break
            last = min(c + d, size)
            if d == 2 and last - c == 2:
                best = off + c
                by = a[best]
                if a[best + 1] < by:
                    best += 1
                    by = a[best]
            elif last - c > 1:
                # leftmost smallest child, found at C speed
                by = min(a[off + c:off + last])
                best = a.index(by, off + c, off + last)
            else:
                best = off + c
                by = a[best]
            cmps += last - c
            if not by < x:
                break
            a[off + k] = by
            moves += 1
            k = best - off
        self.comparisons += cmps
        if k != start:
            a[off + k] = x
            self.moves += moves + 1

    def is_heap(self, off, size, d):
        a = self.a
        self.comparisons += max(size - 1, 0)
        for k in range(1, size):
            if a[off + k] < a[off + (k - 1) // d]:
                return False
        return True


    def first_real(self, start, step, count, t):
        a = self.a
        for k in range(count):
            if not t < a[start + k * step]:
                self.comparisons += k + 1
                return k
        self.comparisons += count
        return None

    def first_dummy(self, lo, hi, t):
        a = self.a
        cmps = 0
        while lo < hi:
            mid = (lo + hi) // 2
            cmps += 1
            if t < a[mid]:
                hi = mid
            else:
                lo = mid + 1
        self.comparisons += cmps
        return lo

    def nth_element(self, lo, hi, k, reverse=False):
        # Introselect: median-of-three quickselect, handing the range to the
        # median-of-medians routine if it fails to shrink fast enough.
        if not 1 <= k <= hi - lo + 1:
            raise ValueError(f"rank {k} outside 1..{hi - lo + 1}")
        before = operator.gt if reverse else operator.lt
        a = self.a
        target = lo + k - 1
        budget = 2 * (hi - lo + 1).bit_length()
        cmps = moves = 0
        while hi - lo >= 16:
            if budget == 0:
                self.comparisons += cmps
                self.moves += moves
                lt = (lambda x, y: self.lt(y, x)) if reverse else self.lt
                self.nth_element_with(lo, hi, target - lo + 1, lt)
                return
            budget -= 1
            mid = (lo + hi) // 2
            x, y, z = a[lo], a[mid], a[hi]
            cmps += 3
            if before(x, y):
                m = mid if before(y, z) else (hi if before(x, z) else lo)
            else:
                m = lo if before(x, z) else (hi if before(y, z) else mid)
            # Hoare partition around the median, parked at ``lo``; only
            # pairs on the wrong sides are exchanged
            if m != lo:
                a[lo], a[m] = a[m], a[lo]
                moves += 2
            p = a[lo]
            i = lo - 1
            j = hi + 1
            while True:
                i += 1
                cmps += 1
                while before(a[i], p):
                    i += 1
                    cmps += 1
                j -= 1
                cmps += 1
                while before(p, a[j]):
                    j -= 1
                    cmps += 1
                if i >= j:
                    break
                a[i], a[j] = a[j], a[i]
                moves += 2
            if target <= j:
                hi = j
            else:
                lo = j + 1
        else:
            for i in range(lo + 1, hi + 1):
                x = a[i]
                j = i
                while j > lo:
                    cmps += 1
                    if not before(x, a[j - 1]):
                        break
                    a[j] = a[j - 1]
                    moves += 1
                    j -= 1
                if j != i:
                    a[j] = x
                    moves += 1
        self.comparisons += cmps
        self.moves += moves


# -- standalone operations on an ImplicitArray --------------------------------
# These are thin, checked entry points over the array methods.

def bit_codec(arr: ImplicitArray, slot: int, bit=None) -> int:
    if bit is None:
        return arr.read_bit(slot)
    arr.write_bit(slot, bit)
    return bit


def int_codec(arr: ImplicitArray, offset: int, width: int, value=None) -> int:
    if value is None:
        return arr.read_int(offset, width)
    arr.write_int(offset, width, value)
    return value


def gray_codec(arr: ImplicitArray, offset: int, width: int, op: str = "read") -> int:
    if op == "read":
        return arr.read_gray(offset, width)
    if op == "increment":
        return arr.gray_step(offset, width, 1)
    if op == "decrement":
        return arr.gray_step(offset, width, -1)
    raise ValueError(f"unknown gray op {op!r}")


def dheap_build(arr: ImplicitArray, offset: int, size: int, d: int) -> None:
    arr.heapify(offset, size, d)


def dheap_insert(arr: ImplicitArray, offset: int, size: int, d: int, key, capacity=None) -> None:
    """Insert ``key`` into the heap occupying ``offset .. offset+size-1``."""
    if capacity is not None and size >= capacity:
        raise CapacityError("heap region is full")
    arr.put(offset + size, key)
    arr.sift_up(offset, size, d)


def dheap_extract_min(arr: ImplicitArray, offset: int, size: int, d: int):
    if size <= 0:
        raise UnderflowError("extract from empty heap")
    top = arr.get(offset)
    if size > 1:
        arr.put(offset, arr.get(offset + size - 1))
        arr.sift_down(offset, size - 1, d, 0)
    return top


def select_rank(arr: ItemOps, lo: int, hi: int, k: int):
    """k-th smallest item of ``lo .. hi``; the range is left permuted."""
    arr.nth_element(lo, hi, k)
    return arr.get(lo + k - 1)
