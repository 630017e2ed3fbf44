"""Strictly implicit priority queue with worst-case O(1) insert.

The array holds a forest of relaxed binomial trees (RBTs) followed by a
buffer of 0, 1 or 2 elements.  A node is three consecutive slots
``3k-2 .. 3k``; its key is the smallest of the three and the position of
the first slot's rank among them stores one of three states:

    rank 1 (abc, acb)  ROOT
    rank 2 (bac, bca)  MIN_OWN       smaller than its whole subtree
    rank 3 (cab, cba)  MIN_SMALLER   smaller than every earlier sibling subtree

A tree of 2^i nodes rooted at node r is stored in preorder with children
in increasing size, so child c_j (a tree of 2^j nodes) sits at r + 2^j.
Trees appear in non-increasing size from left to right and nothing about
the forest is stored: tree roots are found by probing node states.

Elements must be distinct.
"""
from __future__ import annotations

from .core import CorruptionError, ImplicitArray, UnderflowError, lsb

ROOT = 0
MIN_OWN = 1
MIN_SMALLER = 2

STATE_NAMES = {ROOT: "root", MIN_OWN: "min-own", MIN_SMALLER: "min-smaller"}


# -- node codec -------------------------------------------------------------

def node_state(arr: ImplicitArray, k: int) -> int:
    """Decode the state of node k (2 comparisons, no moves)."""
    a = arr.a
    s = 3 * k - 2
    x = a[s]
    arr.comparisons += 2
    return (a[s + 1] < x) + (a[s + 2] < x)


def is_root(arr: ImplicitArray, k: int) -> bool:
    a = arr.a
    s = 3 * k - 2
    x = a[s]
    if x < a[s + 1]:
        arr.comparisons += 2
        return x < a[s + 2]
    arr.comparisons += 1
    return False


def set_state(arr: ImplicitArray, k: int, state: int) -> None:
    """Encode ``state`` in node k with at most one swap; the key is unchanged."""
    a = arr.a
    s = 3 * k - 2
    x, y, z = a[s], a[s + 1], a[s + 2]
    arr.comparisons += 2
    rank_x = (y < x) + (z < x)  # 0-based rank of x
    if rank_x == state:
        return
    # the element of rank ``state`` is y or z
    arr.comparisons += 1
    if y < z:
        lo, hi = s + 1, s + 2
    else:
        lo, hi = s + 2, s + 1
    # ordering of {y, z} relative to x fixes their ranks
    if rank_x == 0:
        want = hi if state == 2 else lo
    elif rank_x == 2:
        want = hi if state == 1 else lo
    else:
        want = lo if state == 0 else hi
    a[s], a[want] = a[want], a[s]
    arr.moves += 2


def node_state_codec(arr: ImplicitArray, k: int, state=None) -> int:
    """Checked read, or write when ``state`` is given, of node k's state.

    Unlike the hot-path helpers this verifies that the three elements are
    distinct and raises :class:`CorruptionError` otherwise.
    """
    a = arr.a
    s = 3 * k - 2
    x, y, z = a[s], a[s + 1], a[s + 2]
    if arr.equal(x, y) or arr.equal(x, z) or arr.equal(y, z):
        raise CorruptionError(f"node {k} holds equal elements")
    if state is None:
        return node_state(arr, k)
    if state not in STATE_NAMES:
        raise ValueError(f"unknown node state {state!r}")
    set_state(arr, k, state)
    return state


def node_key(arr: ImplicitArray, k: int):
    a = arr.a
    s = 3 * k - 2
    x, y, z = a[s], a[s + 1], a[s + 2]
    arr.comparisons += 2
    if y < x:
        x = y
    return z if z < x else x


def _key_slot(arr, k):
    s = 3 * k - 2
    best = s
    if arr.lt(arr.get(s + 1), arr.get(best)):
        best = s + 1
    if arr.lt(arr.get(s + 2), arr.get(best)):
        best = s + 2
    return best


def swap_nodes(arr: ImplicitArray, j: int, k: int) -> None:
    """Exchange the triples of nodes j and k (6 moves)."""
    a = arr.a
    p, q = 3 * j - 2, 3 * k - 2
    a[p:p + 3], a[q:q + 3] = a[q:q + 3], a[p:p + 3]
    arr.moves += 6


# -- relaxed binomial trees ------------------------------------------------

def rbt_find_min(arr: ImplicitArray, root: int):
    return node_key(arr, root)


def rbt_link(arr: ImplicitArray, left: int, right: int, size: int) -> int:
    """Link two adjacent RBTs of ``size`` nodes; returns the new root (left)."""
    if right != left + size:
        raise ValueError(f"trees at {left} and {right} are not adjacent of size {size}")
    if arr.lt(node_key(arr, right), node_key(arr, left)):
        swap_nodes(arr, left, right)
        set_state(arr, right, MIN_SMALLER)
    else:
        set_state(arr, right, MIN_OWN)
    set_state(arr, left, ROOT)
    return left


def _split(arr, root, half):
    """Cut the tree at ``root`` of 2*half nodes into two trees of ``half``.

    Returns True if the root element moved to the right tree.
    """
    c = root + half
    # a single-node child is trivially the minimum of its own subtree
    moved = half > 1 and node_state(arr, c) != MIN_OWN
    if moved:
        swap_nodes(arr, root, c)
        set_state(arr, root, ROOT)
    set_state(arr, c, ROOT)
    return moved


def rbt_decompose(arr: ImplicitArray, root: int, size: int) -> None:
    """Turn a tree of ``size`` nodes into trees of size/2, ..., 2, 1, 1."""
    while size > 1:
        half = size // 2
        _split(arr, root, half)
        root += half
        size = half


def rbt_replace_min(arr: ImplicitArray, root: int, size: int, x):
    """Remove the tree's minimum, put ``x`` into the tree and return the minimum."""
    path = []  # left roots of the levels split on the way down
    node = root
    while size > 1:
        half = size // 2
        moved = _split(arr, node, half)
        path.append((node, half))
        if moved:
            node += half
        size = half
    slot = _key_slot(arr, node)
    old = arr.get(slot)
    arr.put(slot, x)
    set_state(arr, node, ROOT)
    for left, half in reversed(path):
        rbt_link(arr, left, left + half, half)
    return old


# -- locating the forest ---------------------------------------------------

def _is_tree(arr, p, i, N):
    """Is there a tree of 2^i nodes rooted at node p (N nodes in the forest)?"""
    if not is_root(arr, p):
        return False
    end = p + (1 << i)
    if end <= N and not is_root(arr, end):
        return False
    if i > 0 and is_root(arr, p + (1 << (i - 1))):
        return False
    return True


def trees_of_size(arr: ImplicitArray, N: int, i: int) -> list:
    """Roots of all trees with 2^i nodes, left to right.

    Candidates sit at N - 2^i k - (N mod 2^i) + 1 for k = 1, 2, ...; the
    trees of one size are contiguous, so probing stops at the first miss
    after a hit, or after five misses.
    """
    a = arr.a
    cmps = 0

    def root(k):
        nonlocal cmps
        s = 3 * k - 2
        x = a[s]
        if x < a[s + 1]:
            cmps += 2
            return x < a[s + 2]
        cmps += 1
        return False

    size = 1 << i
    half = size >> 1
    found = []
    p = N - size - N % size + 1
    k = 1
    while p >= 1:
        if (root(p) and (p + size > N or root(p + size))
                and not (half and root(p + half))):
            found.append(p)
        elif found or k >= 5:
            break
        k += 1
        p -= size
    arr.comparisons += cmps
    found.reverse()
    return found


def locate_trees(arr: ImplicitArray, N: int) -> list:
    """All trees as ``(root, size)`` pairs, left to right.  Never writes.

    Walks from the right end: with a tree boundary known at ``end``, the
    node ``end - 2^i`` is flagged root exactly when the tree ending there
    has 2^i nodes, since non-root nodes never carry the root flag.  Sizes
    only grow leftwards, so this takes O(log N + trees) probes.
    """
    a = arr.a
    out = []
    end = N + 1
    size = 1
    cmps = 0
    while end > 1:
        p = end - size
        if p >= 1:
            s = 3 * p - 2
            x = a[s]
            if x < a[s + 1]:
                cmps += 2
                hit = x < a[s + 2]
            else:
                cmps += 1
                hit = False
            if hit:
                out.append((p, size))
                end = p
                continue
        size <<= 1
        if size > N:
            arr.comparisons += cmps
            raise CorruptionError(f"no tree ends at node {end - 1}")
    arr.comparisons += cmps
    out.reverse()
    return out


def locate_trees_by_size(arr: ImplicitArray, N: int) -> list:
    """Same result as :func:`locate_trees`, one size class at a time."""
    out = []
    for i in range(N.bit_length() - 1, -1, -1):
        out.extend((p, 1 << i) for p in trees_of_size(arr, N, i))
    return out


# -- the queue ---------------------------------------------------------------

def wc_insert(arr: ImplicitArray, key) -> None:
    arr.append(key)
    n = arr.n
    if n % 3:
        return
    N = n // 3
    set_state(arr, N, ROOT)
    i = lsb(N)
    roots = trees_of_size(arr, N, i)
    if len(roots) >= 2:
        rbt_link(arr, roots[0], roots[1], 1 << i)


def _candidates(arr, n):
    """Forest node count and tree list after making sure a buffer exists.

    Decomposing the smallest tree leaves trees of size/2, ..., 2, 1, 1 in
    its place; the last singleton becomes the buffer.
    """
    N = n // 3
    trees = locate_trees(arr, N)
    if n % 3 == 0:
        root, size = trees.pop()
        rbt_decompose(arr, root, size)
        while size > 1:
            size //= 2
            trees.append((root, size))
            root += size
        N -= 1
    return N, trees


def wc_find_min(arr: ImplicitArray):
    n = arr.n
    if n == 0:
        raise UnderflowError("find_min on empty queue")
    N = n // 3
    best = None
    for root, _ in locate_trees(arr, N):
        k = node_key(arr, root)
        if best is None or arr.lt(k, best):
            best = k
    for s in range(3 * N + 1, n + 1):
        if best is None or arr.lt(arr.get(s), best):
            best = arr.get(s)
    return best


def wc_extract_min(arr: ImplicitArray):
    n = arr.n
    if n == 0:
        raise UnderflowError("extract_min on empty queue")
    N, trees = _candidates(arr, n)
    best = None
    where = None
    for root, size in trees:
        k = node_key(arr, root)
        if best is None or arr.lt(k, best):
            best, where = k, (root, size)
    for s in range(3 * N + 1, n + 1):
        y = arr.get(s)
        if best is None or arr.lt(y, best):
            best, where = y, s
    if isinstance(where, int):
        if where != n:
            arr.put(where, arr.get(n))
        arr.n = n - 1
        return best
    x = arr.get(n)
    arr.n = n - 1
    return rbt_replace_min(arr, where[0], where[1], x)


class WorstCasePQ:
    """Forest of relaxed binomial trees over an :class:`ImplicitArray`.

    >>> pq = WorstCasePQ()
    >>> for k in (4, 9, 1, 7):
    ...     pq.insert(k)
    >>> [pq.extract_min() for _ in range(4)]
    [1, 4, 7, 9]
    """

    name = "worstcase"

    def __init__(self, arr: ImplicitArray | None = None):
        self.arr = arr if arr is not None else ImplicitArray()

    @classmethod
    def from_snapshot(cls, elements, n):
        return cls(ImplicitArray.from_snapshot(list(elements), n))

    def __len__(self):
        return self.arr.n

    def insert(self, key):
        self.arr.op_begin()
        wc_insert(self.arr, key)
        self.arr.op_end()

    def extract_min(self):
        self.arr.op_begin()
        x = wc_extract_min(self.arr)
        self.arr.op_end()
        return x

    def find_min(self):
        return _quiet(self.arr, wc_find_min, self.arr)

    def trees(self):
        return _quiet(self.arr, locate_trees, self.arr, self.arr.n // 3)

    def check(self):
        _quiet(self.arr, check_forest, self.arr)


def _quiet(arr, fn, *args):
    saved = arr.moves, arr.comparisons
    try:
        return fn(*args)
    finally:
        arr.moves, arr.comparisons = saved


# -- invariant checks ------------------------------------------------------

def lemma6_holds(sizes, N):
    """The slack inequality bounding the number of trees of each size."""
    for i in range(max(N.bit_length(), 1)):
        p = 1 << i
        small = sum(s for s in sizes if s <= p)
        if small + (2 * p - ((N + p) % (2 * p))) > 6 * p - 1:
            return False
    return True


def check_rbt(arr: ImplicitArray, root: int, size: int) -> list:
    """Check the RBT order below ``root``; returns the subtree's node keys."""
    keys = [node_key(arr, root)]
    child_keys = []
    j = 0
    while (1 << j) < size:
        c = root + (1 << j)
        sub = check_rbt(arr, c, 1 << j)
        state = node_state(arr, c)
        assert state != ROOT, f"child node {c} encodes root"
        if state == MIN_OWN:
            assert all(sub[0] < k for k in sub[1:]), f"node {c} not min of its subtree"
        else:
            assert all(sub[0] < k for k in child_keys), f"node {c} not min of smaller siblings"
        child_keys.extend(sub)
        j += 1
    keys.extend(child_keys)
    return keys


def check_forest(arr: ImplicitArray) -> list:
    n = arr.n
    N = n // 3
    trees = locate_trees(arr, N)
    sizes = [s for _, s in trees]
    assert trees == locate_trees_by_size(arr, N), "size-class probing disagrees"
    pos = 1
    for root, size in trees:
        assert root == pos, f"trees do not tile the nodes: expected root {pos}, got {root}"
        keys = check_rbt(arr, root, size)
        assert keys[0] == min(keys), f"root {root} is not the tree minimum"
        pos += size
    assert pos == N + 1, "trees do not cover all nodes"
    assert sizes == sorted(sizes, reverse=True), "tree sizes not non-increasing"
    for s in set(sizes):
        assert sizes.count(s) <= 5, f"{sizes.count(s)} trees of size {s}"
    assert lemma6_holds(sizes, N), "slack inequality violated"
    return sizes
