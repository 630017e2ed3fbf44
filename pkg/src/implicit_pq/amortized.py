"""Strictly implicit priority queue with amortized O(1) moves per operation.

Layout of the item store (positions are item indices, 1-based)::

    1            threshold item e_t
    r, b         one bit each
    q            w-bit counter: next free bucket index
    S            2K entries, each = key item + w-bit bucket index
    D_1..D_K     buckets of C items, non-dummies first (a d-ary heap)
    Q_h, Q_rev   M w-bit integers each
    I_1..I_m     insertion heaps of H items (d-ary)
    B_1 [, B_2]  insertion buffers (d-ary heaps), the last item of the
                 store always belongs to the last buffer

Every offset is a pure function of the item count and the two bits r and b,
so nothing but ``(items, count)`` survives an operation.  Items greater than
e_t are *dummies*; they fill all metadata and encode the bits.

Below ``profile.n0`` items the store is simply a binary heap.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .core import CorruptionError, ImplicitArray, UnderflowError, msb


@dataclass(frozen=True)
class Profile:
    """Size parameters as functions of delta = log2(4N).

    ``production`` keeps the heap, migration and bucket sizes of the
    construction (delta^3, delta^2, delta^3) with delta-ary heaps.  The
    bucket count is N/(2 delta^3); see the README for why the smaller count
    cannot hold the singles structure at any testable size.

    ``scaled`` is a test configuration that shrinks every region so that the
    full layout, bucket splits and rebuilds all happen for a few thousand
    items.  It is never used for the counter benchmarks.
    """

    name: str
    n0: int

    def params(self, delta):
        N = 1 << (delta - 2)
        if self.name == "production":
            d = delta
            heap = delta ** 3
            migrate = delta ** 2
            bucket = delta ** 3
            k = -(-N // (2 * delta ** 3))
            m = -(-4 * N // heap)
            width = delta
        else:
            a = max(delta - 4, 3)
            d = a
            heap = a ** 3
            migrate = 2 * a
            bucket = a * a
            k = -(-N // (4 * a * a))
            m = -(-4 * N // heap)
            width = max(m, k + 1).bit_length()
        return d, heap, migrate, bucket, k, m, width


PRODUCTION = Profile("production", 1 << 14)
SCALED = Profile("scaled", 1 << 10)
PROFILES = {"production": PRODUCTION, "scaled": SCALED}


@dataclass(frozen=True)
class Layout:
    delta: int
    N: int
    d: int
    H: int
    G: int
    C: int
    K: int
    M: int
    w: int
    bit_items: int
    pos_et: int
    pos_r: int
    pos_b: int
    pos_q: int
    pos_S: int
    s_cap: int
    entry: int
    pos_D: int
    pos_Qh: int
    pos_Qrev: int
    i_start: int


@lru_cache(maxsize=None)
def layout(delta: int, bit_items: int, profile: Profile) -> Layout:
    d, H, G, C, K, M, w = profile.params(delta)
    span = w * bit_items
    pos_r = 2
    pos_b = pos_r + bit_items
    pos_q = pos_b + bit_items
    pos_S = pos_q + span
    s_cap = 2 * K
    entry = 1 + span
    pos_D = pos_S + s_cap * entry
    pos_Qh = pos_D + K * C
    pos_Qrev = pos_Qh + M * span
    i_start = pos_Qrev + M * span
    return Layout(delta, 1 << (delta - 2), d, H, G, C, K, M, w, bit_items,
                  1, pos_r, pos_b, pos_q, pos_S, s_cap, entry, pos_D,
                  pos_Qh, pos_Qrev, i_start)


class Geometry:
    """Everything derived from (items, count) at the start of an operation.

    Carries the layout fields (``g.H``, ``g.i_start``, ...) alongside the
    per-state values ``count``, ``r``, ``b``, buffer offsets/sizes and ``m``.
    """

    def __new__(cls, lay, *args):
        # layout fields live on a per-layout subclass, so building a
        # Geometry only sets the per-state values below
        sub = _geometry_class(lay) if cls is Geometry else cls
        return object.__new__(sub)

    def __init__(self, lay, count, r, b, b1_size, b2_size, m):
        self.lay = lay
        self.count = count
        self.r = r
        self.b = b
        self.m = m
        self.b1 = lay.i_start + m * lay.H
        self.b1_size = b1_size
        self.b2 = self.b1 + lay.H
        self.b2_size = b2_size

    def __eq__(self, other):
        return (isinstance(other, Geometry) and self.lay == other.lay
                and self.__dict__ == other.__dict__)

    def __repr__(self):
        return (f"Geometry(count={self.count}, N={self.N}, delta={self.delta}, "
                f"r={self.r}, b={self.b}, m={self.m}, |B1|={self.b1_size}, "
                f"|B2|={self.b2_size})")

    def heap_pos(self, i):
        return self.i_start + (i - 1) * self.H

    def bucket_pos(self, j):
        return self.pos_D + (j - 1) * self.C

    def entry_pos(self, e):
        return self.pos_S + e * self.entry


@lru_cache(maxsize=None)
def _geometry_class(lay):
    return type("Geometry", (Geometry,), dict(lay.__dict__))


def buffer_sizes(payload, H, b):
    """Sizes (|B1|, |B2|, m) for a payload of ``payload`` items."""
    if b == 0:
        b1 = payload % H or H
        b2 = 0
    else:
        if payload <= H:
            raise CorruptionError("b=1 with a payload of at most one heap")
        b1 = H
        b2 = (payload - H) % H or H
    return b1, b2, (payload - b1 - b2) // H


def rebuild_target(count):
    """(N, r) chosen by a rebuild: N is half of count rounded to a power of two."""
    lg = msb(count)
    lower = 1 << lg
    p = lower if count - lower <= 2 * lower - count else 2 * lower
    N = p // 2
    return N, lg - msb(N)


class AmortizedCore:
    """The queue algorithm over an item store (see :class:`ItemOps`).

    Holds only references to the store, the profile and optional observers;
    all queue state lives in the store.
    """

    def __init__(self, store, profile: Profile = PRODUCTION):
        self.s = store
        self.profile = profile
        self.on_rebuild = None
        self._layouts = {}  # delta -> Layout; a memo of a pure function

    # ------------------------------------------------------------------
    # geometry

    def full_mode(self, count=None):
        return (self.s.count if count is None else count) >= self.profile.n0

    def derive_geometry(self) -> Geometry:
        s = self.s
        c = s.count
        r = s.read_bit(2)
        delta = c.bit_length() + 1 - r
        lay = self._layouts.get(delta)
        if lay is None:
            lay = self._layouts[delta] = layout(delta, s.bit_items, self.profile)
        b = s.read_bit(lay.pos_b)
        payload = c - lay.i_start + 1
        if not lay.N <= c < 4 * lay.N or payload < 1:
            raise CorruptionError(f"count {c} inconsistent with N={lay.N}")
        b1_size, b2_size, m = buffer_sizes(payload, lay.H, b)
        return Geometry(lay, c, r, b, b1_size, b2_size, m)

    # ------------------------------------------------------------------
    # public operations

    def insert(self, x):
        s = self.s
        s.put(s.count + 1, x)
        self.insert_last()

    def insert_last(self):
        """Insert the item already placed at position count+1."""
        s = self.s
        c = s.count
        if c + 1 < self.profile.n0:
            s.count = c + 1
            s.sift_up(1, c, 2)
            return
        if c + 1 == self.profile.n0:
            s.count = c + 1
            self.rebuild()
            return
        g = self.derive_geometry()
        s.count = c + 1
        if c == 4 * g.N - 1:
            self.rebuild()
            return
        if c & (c + 1) == 0:  # c + 1 is a power of two
            s.write_bit(g.pos_r, 1)
        if g.b == 0:
            if g.b1_size < g.H:
                s.sift_up(g.b1, g.b1_size, g.d)
            else:
                s.write_bit(g.pos_b, 1)
        elif g.b2_size < g.H:
            s.sift_up(g.b2, g.b2_size, g.d)
        else:
            # B1 becomes I_{m+1}, B2 becomes B1, the new item starts B2
            self.q_insert(g, g.m, g.m + 1)

    def build(self):
        """Turn items 1..count, in any order, into a valid queue."""
        s = self.s
        if self.full_mode():
            self.rebuild()
        else:
            s.heapify(1, s.count, 2)

    def find_min(self):
        s = self.s
        if s.count == 0:
            raise UnderflowError("find_min on empty queue")
        if not self.full_mode():
            return s.get(1)
        g = self.derive_geometry()
        e = self._locate_min(g)[1]
        t = s.get(1)
        return t if s.lt(t, e) else e

    def extract_min(self):
        s = self.s
        c = s.count
        if c == 0:
            raise UnderflowError("extract_min on empty queue")
        if c == self.profile.n0:
            s.heapify(1, c, 2)
        if c <= self.profile.n0:
            top = s.get(1)
            s.count = c - 1
            if c > 1:
                s.put(1, s.get(c))
                s.sift_down(1, c - 1, 2, 0)
            return top
        g = self.derive_geometry()
        where, e, arg = self._locate_min(g)
        if s.lt(s.get(1), e):
            # every key below e_t is gone: the minimum now sits among the
            # metadata, so re-select the threshold first
            self.rebuild()
            g = self.derive_geometry()
            where, e, arg = self._locate_min(g)
        if where == "B1":
            self._extract_from_b1(g)
        elif where == "B2":
            self._extract_from_b2(g)
        elif where == "I":
            self._extract_from_heap(g, arg)
        else:
            self._extract_from_singles(g, arg)
        if s.count == g.N:
            self.rebuild()
        return e

    def pop_last(self):
        """Remove and return the last item while keeping every invariant."""
        s = self.s
        c = s.count
        if c == 0:
            raise UnderflowError("pop_last on empty queue")
        if c <= self.profile.n0:
            if c == self.profile.n0:
                s.heapify(1, c - 1, 2)
            s.count = c - 1
            return s.get(c)
        g = self.derive_geometry()
        x = self._take_last(g, g.m)
        if s.count == g.N:
            self.rebuild()
        return x

    # ------------------------------------------------------------------
    # minimum search and the three extraction cases

    def _locate_min(self, g):
        s = self.s
        best = ("B1", s.get(g.b1), None)
        if g.b2_size:
            y = s.get(g.b2)
            if s.lt(y, best[1]):
                best = ("B2", y, None)
        if g.m:
            i = s.read_int(g.pos_Qh, g.w)
            y = s.get(g.heap_pos(i))
            if s.lt(y, best[1]):
                best = ("I", y, i)
        e = self.s_first(g, s.get(1))
        if e is not None:
            y = s.get(g.entry_pos(e))
            if s.lt(y, best[1]):
                best = ("S", y, e)
        return best

    def _take_last(self, g, qsize, removed=None):
        """Detach the last item of the store, fixing b, r and Q.

        ``qsize`` is the current number of indices in Q.  Returns the item.
        """
        s = self.s
        c = s.count
        x = s.get(c)
        s.count = c - 1
        if g.b:
            if g.b2_size == 1:
                s.write_bit(g.pos_b, 0)
        elif g.b1_size == 1 and g.m:
            # I_m becomes B1
            if removed != g.m:
                self.q_delete(g, qsize, g.m)
        if c & (c - 1) == 0:  # c was a power of two
            s.write_bit(g.pos_r, 0)
        return x

    def _extract_from_b1(self, g):
        s = self.s
        if g.b:
            x = self._take_last(g, g.m)
            s.put(g.b1, x)
            s.sift_down(g.b1, g.H, g.d, 0)
        else:
            size = g.b1_size
            x = self._take_last(g, g.m)
            if size > 1:
                s.put(g.b1, x)
                s.sift_down(g.b1, size - 1, g.d, 0)

    def _extract_from_b2(self, g):
        s = self.s
        size = g.b2_size
        x = self._take_last(g, g.m)
        if size > 1:
            s.put(g.b2, x)
            s.sift_down(g.b2, size - 1, g.d, 0)

    def _extract_from_heap(self, g, i):
        s = self.s
        qsize = g.m
        self.q_delete(g, qsize, i)
        qsize -= 1
        vanished = g.b == 0 and g.b1_size == 1
        x = self._take_last(g, qsize, removed=i)
        if vanished and i != g.m:
            qsize -= 1
        root = g.heap_pos(i)
        s.put(root, x)
        s.sift_down(root, g.H, g.d, 0)
        if vanished and i == g.m:
            return  # I_i is now B1
        if self._migrate(g, i):
            self.q_insert(g, qsize, i)
        else:
            self.rebuild()

    def _extract_from_singles(self, g, e):
        s = self.s
        put = s.put
        t = s.get(1)
        epos = g.pos_S + e * g.entry
        i = s.read_int(epos + 1, g.w)
        x = self._take_last(g, g.m)
        z, j, jp, jsize = self._t_insert(g, x, t)
        base = g.pos_D + (i - 1) * g.C
        size = jsize if j == i else s.first_dummy(base, base + g.C, t) - base
        if size == 0:
            put(epos, s.as_dummy(z, t))
        else:
            y = s.get(base)
            if size == 1:
                put(base, s.as_dummy(z, t))
            else:
                last = base + size - 1
                u = s.get(last)
                put(last, s.as_dummy(z, t))
                put(base, u)
                s.sift_down(base, size - 1, g.d, 0)
            put(epos, y)
        if j is not None and j != i and jsize == g.C:
            if not self._split(g, j, jp, t):
                self.rebuild()

    # ------------------------------------------------------------------
    # singles structure T = S + buckets

    def _migrate(self, g, i, limit=None, stop_when_full=False):
        """Move the smallest items of I_i into T.

        Returns False when a bucket filled up with no free bucket left; the
        caller must then rebuild.  With ``stop_when_full`` it instead stops
        (returning False) as soon as a split has used the last free bucket,
        so no bucket is ever left full.
        """
        s = self.s
        t = s.get(1)
        root = g.heap_pos(i)
        for _ in range(g.G if limit is None else limit):
            y = s.get(root)
            if s.is_dummy(y, t):
                break
            z, j, jp, jsize = self._t_insert(g, s.as_real(y, t), t)
            s.put(root, z)
            s.sift_down(root, g.H, g.d, 0)
            if jsize == g.C:
                if not self._split(g, j, jp, t):
                    return False
                if stop_when_full and s.read_int(g.pos_q, g.w) > g.K:
                    return False
        return True

    def _t_insert(self, g, x, t):
        """Insert a real item into T.

        Returns ``(z, j, p, size)``: the displaced dummy, the bucket that
        grew (or None), the S entry of that bucket and its new size.  The
        caller checks for a split.
        """
        s = self.s
        if s.is_dummy(x, t):
            return x, None, None, 0
        x = s.as_real(x, t)
        p = self.s_find_pred(g, x, t)
        if p is None:
            first = self.s_first(g, t)
            if first is None:
                q = s.read_int(g.pos_q, g.w)
                if q != 1:
                    s.write_int(g.pos_q, g.w, 1)  # every bucket is empty
                z = self.s_insert(g, x, 1, -1, t)
                s.write_int(g.pos_q, g.w, 2)
                return z, None, None, 0
            # x becomes the new minimum key of the first bucket
            epos = g.entry_pos(first)
            old = s.get(epos)
            s.put(epos, x)
            x = old
            p = first
        j = s.read_int(g.pos_S + p * g.entry + 1, g.w)
        base = g.pos_D + (j - 1) * g.C
        size = s.first_dummy(base, base + g.C, t) - base
        z = s.get(base + size)
        s.put(base + size, x)
        s.sift_up(base, size, g.d)
        return z, j, p, size + 1

    def d_size(self, g, j, t):
        """Number of non-dummy items in bucket j (binary search)."""
        base = g.bucket_pos(j)
        return self.s.first_dummy(base, base + g.C, t) - base

    def _split(self, g, j, jp, t):
        """Split the full bucket j around its median.  False if no bucket is free."""
        s = self.s
        q = s.read_int(g.pos_q, g.w)
        if q > g.K:
            return False
        C = g.C
        low = C - C // 2
        high = C // 2
        src = g.bucket_pos(j)
        dst = g.bucket_pos(q)
        s.nth_element(src, src + C - 1, low + 1)
        for k in range(high):
            s.swap(src + low + k, dst + k)
        s.heapify(src, low, g.d)
        s.heapify(dst, high, g.d)
        y = s.get(dst)
        u = s.get(dst + high - 1)
        z = self.s_insert(g, y, q, jp, t)
        s.put(dst + high - 1, s.as_dummy(z, t))
        if high > 1:
            s.put(dst, u)
            s.sift_down(dst, high - 1, g.d, 0)
        s.write_int(g.pos_q, g.w, q + 1)
        return True

    # -- S: sorted (key, bucket) entries with gaps ---------------------------

    def s_empty(self, g, e, t):
        return self.s.is_dummy(self.s.get(g.entry_pos(e)), t)

    def s_first(self, g, t, lo=0, hi=None):
        """First occupied entry in ``lo .. hi-1`` or None."""
        hi = g.s_cap if hi is None else hi
        e = self.s.first_real(g.pos_S + lo * g.entry, g.entry, hi - lo, t)
        return None if e is None else lo + e

    def s_find_pred(self, g, x, t):
        """Greatest occupied entry whose key is <= x, or None.  Never writes.

        Binary search over entry slots; an empty probe is resolved to the
        nearest occupied entry by scanning outwards, and the empty run seen
        on the way is skipped.
        """
        s = self.s
        get, is_dummy, lt = s.get, s.is_dummy, s.lt
        pos_S, entry = g.pos_S, g.entry
        lo, hi = 0, g.s_cap
        best = None
        while lo < hi:
            mid = (lo + hi) // 2
            d = 0
            while True:
                r = mid + d
                if r < hi and not is_dummy(get(pos_S + r * entry), t):
                    p, right = r, True
                    break
                l = mid - d
                if d and l >= lo and not is_dummy(get(pos_S + l * entry), t):
                    p, right = l, False
                    break
                if l <= lo and r >= hi - 1:
                    return best
                d += 1
            if lt(x, get(pos_S + p * entry)):
                hi = max(lo, mid - d + 1) if right and d else p
            else:
                best = p
                lo = p + 1 if right else min(hi, mid + d + 1)
        return best

    def s_entries(self, g, t):
        """Decoded (entry, key, bucket) list; a read-only helper for checks."""
        s = self.s
        out = []
        for e in range(g.s_cap):
            if not self.s_empty(g, e, t):
                pos = g.entry_pos(e)
                out.append((e, s.get(pos), s.read_int(pos + 1, g.w)))
        return out

    def _swap_entries(self, g, e, f):
        s = self.s
        a, b = g.entry_pos(e), g.entry_pos(f)
        for k in range(g.entry):
            s.swap(a + k, b + k)

    def s_insert(self, g, key, bucket, after, t):
        """Store (key, bucket) directly after occupied entry ``after`` (-1: front).

        Returns the dummy item that the key displaced.  When the next slot is
        taken, the smallest enclosing window whose density allows it is
        evenly respread (windows double in size up to the whole region).
        """
        s = self.s
        cap = g.s_cap
        pos = after + 1
        if pos < cap and self.s_empty(g, pos, t):
            return self._s_write(g, pos, key, bucket)
        anchor = min(pos, cap - 1)
        size = 2
        while True:
            ws = (anchor // size) * size
            we = min(ws + size, cap)
            if we - ws == cap or size >= cap:
                ws, we = 0, cap
            occupied = [e for e in range(ws, we) if not self.s_empty(g, e, t)]
            span = we - ws
            if span == cap:
                limit = span
            else:
                limit = span * (0.5 + 0.5 * size.bit_length() / cap.bit_length())
            if len(occupied) + 1 <= limit:
                break
            if span == cap:
                raise CorruptionError("S is full")
            size *= 2
        rank = sum(1 for e in occupied if e <= after)
        dst = ws
        for e in occupied:
            if e != dst:
                self._swap_entries(g, e, dst)
            dst += 1
        total = len(occupied) + 1
        targets = [ws + (k * span) // total for k in range(total)]
        for k in range(total - 1, -1, -1):
            if k == rank:
                continue
            src = ws + (k if k < rank else k - 1)
            if targets[k] != src:
                self._swap_entries(g, src, targets[k])
        return self._s_write(g, targets[rank], key, bucket)

    def _s_write(self, g, e, key, bucket):
        s = self.s
        pos = g.entry_pos(e)
        z = s.get(pos)
        s.put(pos, key)
        s.write_int(pos + 1, g.w, bucket)
        return z

    # ------------------------------------------------------------------
    # Q: binary heap of insertion-heap indices ordered by their roots

    def _qh(self, g, j):
        return g.pos_Qh + (j - 1) * g.w * g.bit_items

    def _qrev(self, g, i):
        return g.pos_Qrev + (i - 1) * g.w * g.bit_items

    def _q_set(self, g, j, i):
        self.s.write_int(self._qh(g, j), g.w, i)
        self.s.write_int(self._qrev(g, i), g.w, j)

    def _root_lt(self, g, i, k):
        s = self.s
        return s.lt(s.get(g.heap_pos(i)), s.get(g.heap_pos(k)))

    def q_find_min(self, g):
        return self.s.read_int(g.pos_Qh, g.w)

    def q_insert(self, g, qsize, i):
        if not 1 <= i <= g.M or qsize >= g.M:
            raise IndexError(f"Q index {i} out of range")
        self._q_up(g, qsize + 1, i)

    def q_delete(self, g, qsize, i):
        if not 1 <= i <= g.M:
            raise IndexError(f"Q index {i} out of range")
        s = self.s
        pos = s.read_int(self._qrev(g, i), g.w)
        if pos == qsize:
            return
        last = s.read_int(self._qh(g, qsize), g.w)
        size = qsize - 1
        if pos > 1:
            parent = s.read_int(self._qh(g, pos // 2), g.w)
            if self._root_lt(g, last, parent):
                self._q_up(g, pos, last)
                return
        self._q_down(g, pos, size, last)

    def _q_up(self, g, pos, i):
        s = self.s
        while pos > 1:
            parent = s.read_int(self._qh(g, pos // 2), g.w)
            if not self._root_lt(g, i, parent):
                break
            self._q_set(g, pos, parent)
            pos //= 2
        self._q_set(g, pos, i)

    def _q_down(self, g, pos, size, i):
        s = self.s
        while True:
            c = 2 * pos
            if c > size:
                break
            cv = s.read_int(self._qh(g, c), g.w)
            if c + 1 <= size:
                cv2 = s.read_int(self._qh(g, c + 1), g.w)
                if self._root_lt(g, cv2, cv):
                    c, cv = c + 1, cv2
            if not self._root_lt(g, cv, i):
                break
            self._q_set(g, pos, cv)
            pos = c
        self._q_set(g, pos, i)

    # ------------------------------------------------------------------
    # rebuilding

    def rebuild(self):
        s = self.s
        c = s.count
        N, r = rebuild_target(c)
        delta = msb(N) + 2
        lay = layout(delta, s.bit_items, self.profile)
        dummies = lay.i_start - 2
        payload = c - lay.i_start + 1
        if payload < (lay.H + 1) // 2:
            raise CorruptionError(f"no valid layout for {c} items")
        # largest items to the front, e_t right after them, then swapped to 1
        s.nth_element(1, c, dummies + 1, reverse=True)
        s.swap(1, dummies + 1)
        t = s.get(1)
        if s.bit_items == 1:
            # filler items that tie with e_t must read as empty / dummy
            for e in range(lay.s_cap):
                self._fix_dummy(lay.pos_S + e * lay.entry, t)
            for k in range(lay.pos_D, lay.pos_Qh):
                self._fix_dummy(k, t)
        s.write_bit(lay.pos_r, r)
        rem = payload % lay.H
        b = 1 if 0 < rem < lay.H / 2 and payload > lay.H else 0
        s.write_bit(lay.pos_b, b)
        s.write_int(lay.pos_q, lay.w, 1)
        span = lay.w * lay.bit_items
        for j in range(lay.M):
            s.write_int(lay.pos_Qh + j * span, lay.w, 0)
            s.write_int(lay.pos_Qrev + j * span, lay.w, 0)
        g = self.derive_geometry()
        for i in range(1, g.m + 1):
            s.heapify(g.heap_pos(i), g.H, g.d)
        s.heapify(g.b1, g.b1_size, g.d)
        if g.b2_size:
            s.heapify(g.b2, g.b2_size, g.d)
        migrating = True
        for i in range(1, g.m + 1):
            # once the free buckets are used up the remaining heaps keep
            # their items; a partial migration leaves every invariant intact
            if migrating:
                migrating = self._migrate(g, i, stop_when_full=True)
            self.q_insert(g, i - 1, i)
        if self.on_rebuild is not None:
            self.on_rebuild(self)

    def _fix_dummy(self, k, t):
        s = self.s
        x = s.get(k)
        y = s.as_dummy(x, t)
        if y is not x:
            s.put(k, y)

    # ------------------------------------------------------------------
    # read-only inspection (test builds)

    def singles_load(self):
        """Number of non-dummy items held in T (S keys plus bucket contents)."""
        if not self.full_mode():
            return 0
        g = self.derive_geometry()
        t = self.s.get(1)
        entries = self.s_entries(g, t)
        return len(entries) + sum(self.d_size(g, j, t) for _, _, j in entries)

    def check(self):
        """Verify every structural invariant; raises AssertionError."""
        s = self.s
        c = s.count
        if c < self.profile.n0:
            assert s.is_heap(1, c, 2), "bootstrap heap order"
            return
        g = self.derive_geometry()
        t = s.get(1)
        assert g.N <= c < 4 * g.N
        assert g.r == msb(c) - msb(g.N)
        assert 1 <= g.b1_size + g.b2_size <= 2 * g.H
        assert (g.b2_size > 0) == (g.b == 1)
        for i in range(1, g.m + 1):
            assert s.is_heap(g.heap_pos(i), g.H, g.d), f"I_{i} heap order"
        assert s.is_heap(g.b1, g.b1_size, g.d), "B1 heap order"
        assert s.is_heap(g.b2, g.b2_size, g.d), "B2 heap order"
        # metadata is made of dummies except live S keys and bucket prefixes
        live = set()
        entries = self.s_entries(g, t)
        q = s.read_int(g.pos_q, g.w)
        seen = set()
        for idx, (e, key, j) in enumerate(entries):
            live.add(g.entry_pos(e))
            assert 1 <= j < q <= g.K + 1, f"bucket index {j} (q={q})"
            assert j not in seen, "bucket indexed twice"
            seen.add(j)
            base = g.bucket_pos(j)
            size = self.d_size(g, j, t)
            assert size < g.C, "bucket left full"
            assert s.is_heap(base, size, g.d), f"D_{j} heap order"
            nxt = entries[idx + 1][1] if idx + 1 < len(entries) else None
            for k in range(base, base + size):
                live.add(k)
                assert not s.lt(s.get(k), key), "bucket item below its key"
                if nxt is not None:
                    assert not s.lt(nxt, s.get(k)), "bucket item above next key"
            for k in range(base + size, base + g.C):
                assert s.is_dummy(s.get(k), t), "dummies not a suffix"
        for j in range(1, g.K + 1):
            if j not in seen:
                assert self.d_size(g, j, t) == 0, f"orphan bucket {j}"
        for k in range(2, g.i_start):
            if k not in live and not self._in_s_index(g, k):
                assert s.lt(t, s.get(k)) or s.bit_items == 1, f"slot {k} not dummy"
        for a, b in zip(entries, entries[1:]):
            assert not s.lt(b[1], a[1]), "S keys out of order"
        # Q is a heap over 1..m with a consistent reverse map
        hs = [s.read_int(self._qh(g, j), g.w) for j in range(1, g.m + 1)]
        assert sorted(hs) == list(range(1, g.m + 1)), f"Q_h not a permutation: {hs}"
        for j, i in enumerate(hs, start=1):
            assert s.read_int(self._qrev(g, i), g.w) == j, "Q_rev mismatch"
            if j > 1:
                assert not self._root_lt(g, i, hs[j // 2 - 1]), "Q heap order"

    def _in_s_index(self, g, k):
        if not g.pos_S <= k < g.pos_D:
            return False
        return (k - g.pos_S) % g.entry != 0


class AmortizedPQ:
    """Amortized O(1)-move strictly implicit priority queue on distinct keys.

    >>> pq = AmortizedPQ()
    >>> for k in (5, 3, 8):
    ...     pq.insert(k)
    >>> pq.extract_min(), pq.extract_min(), len(pq)
    (3, 5, 1)
    """

    name = "amortized"

    def __init__(self, arr: ImplicitArray | None = None, profile: Profile = PRODUCTION):
        self.arr = arr if arr is not None else ImplicitArray()
        self.core = AmortizedCore(self.arr, profile)

    @classmethod
    def from_snapshot(cls, elements, n, profile: Profile = PRODUCTION):
        return cls(ImplicitArray.from_snapshot(list(elements), n), profile)

    @property
    def profile(self):
        return self.core.profile

    def __len__(self):
        return self.arr.n

    def insert(self, key):
        self.arr.op_begin()
        self.core.insert(key)
        self.arr.op_end()

    def extract_min(self):
        self.arr.op_begin()
        x = self.core.extract_min()
        self.arr.op_end()
        return x

    def find_min(self):
        return _quiet(self.arr, self.core.find_min)

    def check(self):
        _quiet(self.arr, self.core.check)

    def geometry(self):
        return _quiet(self.arr, self.core.derive_geometry)

    def singles_load(self):
        return _quiet(self.arr, self.core.singles_load)


def _quiet(arr, fn):
    """Run a read-only helper without charging its comparisons."""
    saved = arr.moves, arr.comparisons
    try:
        return fn()
    finally:
        arr.moves, arr.comparisons = saved
