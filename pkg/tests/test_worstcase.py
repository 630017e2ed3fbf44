import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from implicit_pq import CorruptionError, ImplicitArray, UnderflowError, WorstCasePQ
from implicit_pq.harness import random_trace
from implicit_pq.worstcase import (MIN_OWN, MIN_SMALLER, ROOT, check_forest,
                                   check_rbt, lemma6_holds, locate_trees,
                                   locate_trees_by_size, node_key, node_state,
                                   node_state_codec, rbt_decompose, rbt_find_min,
                                   rbt_link, rbt_replace_min, set_state)

from conftest import audit


def nodes(keys, rng=None):
    """One node per key: node k holds 3*key, 3*key+1 and 3*key+2."""
    elements = []
    for key in keys:
        triple = [3 * key, 3 * key + 1, 3 * key + 2]
        if rng is not None:
            rng.shuffle(triple)
        elements.extend(triple)
    arr = ImplicitArray(elements)
    for k in range(1, len(keys) + 1):
        set_state(arr, k, ROOT)
    return arr


def build_tree(arr, root, size):
    """Link singletons at ``root .. root+size-1`` into one tree."""
    width = 1
    while width < size:
        for left in range(root, root + size, 2 * width):
            rbt_link(arr, left, left + width, width)
        width *= 2


def keys_of(arr, root, size):
    return sorted(node_key(arr, k) for k in range(root, root + size))


# -- node codec -----------------------------------------------------------------

def test_permutations_decode_two_per_state():
    seen = {}
    for perm in itertools.permutations((1, 2, 3)):
        arr = ImplicitArray(perm)
        seen.setdefault(node_state(arr, 1), []).append(perm)
        assert arr.moves == 0 and arr.comparisons <= 3
    assert {s: len(p) for s, p in seen.items()} == {ROOT: 2, MIN_OWN: 2, MIN_SMALLER: 2}
    assert sorted(seen[ROOT]) == [(1, 2, 3), (1, 3, 2)]
    assert sorted(seen[MIN_OWN]) == [(2, 1, 3), (2, 3, 1)]
    assert sorted(seen[MIN_SMALLER]) == [(3, 1, 2), (3, 2, 1)]


@pytest.mark.parametrize("perm", list(itertools.permutations((10, 20, 30))))
@pytest.mark.parametrize("state", [ROOT, MIN_OWN, MIN_SMALLER])
def test_state_write_round_trips(perm, state):
    arr = ImplicitArray(perm)
    set_state(arr, 1, state)
    assert arr.moves <= 4 and arr.comparisons <= 3
    assert sorted(arr.elements()) == [10, 20, 30]
    assert node_key(arr, 1) == 10
    assert node_state(arr, 1) == state


def test_checked_codec_rejects_equal_elements():
    with pytest.raises(CorruptionError):
        node_state_codec(ImplicitArray([4, 4, 5]), 1)
    arr = ImplicitArray([2, 3, 1])
    assert node_state_codec(arr, 1, MIN_SMALLER) == MIN_SMALLER
    assert node_state_codec(arr, 1) == MIN_SMALLER
    with pytest.raises(ValueError):
        node_state_codec(arr, 1, 7)


# -- link / find-min / decompose / replace-min ------------------------------------------

def test_link_two_singletons_right_smaller():
    arr = nodes([5, 2])
    assert rbt_link(arr, 1, 2, 1) == 1
    assert node_key(arr, 1) == 6 and node_state(arr, 1) == ROOT
    assert node_key(arr, 2) == 15 and node_state(arr, 2) == MIN_SMALLER
    check_rbt(arr, 1, 2)


def test_link_with_smaller_left_swaps_no_nodes():
    arr = nodes([2, 5])
    left, right = set(arr.a[1:4]), set(arr.a[4:7])
    rbt_link(arr, 1, 2, 1)
    assert set(arr.a[1:4]) == left and set(arr.a[4:7]) == right
    assert node_state(arr, 2) == MIN_OWN


def test_link_rejects_non_adjacent_trees():
    arr = nodes([1, 2, 3, 4])
    with pytest.raises(ValueError):
        rbt_link(arr, 1, 4, 2)


@pytest.mark.parametrize("perm", list(itertools.permutations(range(4))))
def test_link_two_size_two_trees(perm):
    arr = nodes(perm)
    rbt_link(arr, 1, 2, 1)
    rbt_link(arr, 3, 4, 1)
    rbt_link(arr, 1, 3, 2)
    keys = check_rbt(arr, 1, 4)
    assert keys[0] == min(keys) == 0


def test_find_min_of_sixteen_node_tree():
    rng = random.Random(16)
    keys = rng.sample(range(100), 16)
    arr = nodes(keys, rng)
    build_tree(arr, 1, 16)
    m0, c0 = arr.moves, arr.comparisons
    assert rbt_find_min(arr, 1) == min(arr.elements())
    assert arr.moves == m0 and arr.comparisons - c0 <= 3


def test_decompose_size_two():
    for keys in ([1, 2], [2, 1]):
        arr = nodes(keys)
        build_tree(arr, 1, 2)
        rbt_decompose(arr, 1, 2)
        assert node_state(arr, 1) == ROOT and node_state(arr, 2) == ROOT
        assert node_key(arr, 1) < node_key(arr, 2)


@pytest.mark.parametrize("perm", list(itertools.permutations(range(4))))
def test_decompose_size_four(perm):
    arr = nodes(perm)
    build_tree(arr, 1, 4)
    rbt_decompose(arr, 1, 4)
    assert locate_trees(arr, 4) == [(1, 2), (3, 1), (4, 1)]
    for root, size in [(1, 2), (3, 1), (4, 1)]:
        keys = check_rbt(arr, root, size)
        assert keys[0] == min(keys)


@settings(max_examples=200)
@given(st.integers(min_value=0, max_value=6), st.randoms(use_true_random=False))
def test_decompose_then_link_restores_tree(i, rng):
    size = 1 << i
    keys = rng.sample(range(1000), size)
    arr = nodes(keys, rng)
    build_tree(arr, 1, size)
    before = sorted(arr.elements())
    rbt_decompose(arr, 1, size)
    # pieces of size/2, ..., 1, 1 relink right to left into one tree
    width = 1
    root = size
    while width < size:
        root -= width
        rbt_link(arr, root, root + width, width)
        width *= 2
    assert sorted(arr.elements()) == before
    assert check_rbt(arr, 1, size)[0] == min(node_key(arr, k) for k in range(1, size + 1))


@settings(max_examples=200)
@given(st.integers(min_value=0, max_value=6), st.randoms(use_true_random=False), st.data())
def test_replace_min(i, rng, data):
    size = 1 << i
    keys = rng.sample(range(1, 1000), size)
    arr = nodes(keys, rng)
    build_tree(arr, 1, size)
    elements = arr.elements()
    new = data.draw(st.integers(min_value=0, max_value=3000).filter(lambda x: x not in elements))
    m0 = arr.moves
    old = rbt_replace_min(arr, 1, size, new)
    assert old == min(elements)
    assert sorted(arr.elements()) == sorted(set(elements) - {old} | {new})
    keys = check_rbt(arr, 1, size)
    assert keys[0] == min(keys)
    assert arr.moves - m0 <= 1 + 30 * max(i, 1)


# -- forest maintenance -----------------------------------------------------------------

class ShadowForest:
    """Tree sizes predicted from the insert/extract rules alone."""

    def __init__(self):
        self.sizes = []
        self.n = 0

    def insert(self):
        self.n += 1
        if self.n % 3:
            return
        self.sizes.append(1)
        N = self.n // 3
        s = N & -N
        idx = [k for k, x in enumerate(self.sizes) if x == s]
        if len(idx) >= 2:
            a, b = idx[0], idx[1]
            self.sizes[a:b + 1] = [2 * s]

    def extract(self):
        if self.n % 3 == 0:
            s = self.sizes.pop()
            while s > 1:
                s //= 2
                self.sizes.append(s)
        self.n -= 1


def test_forest_matches_shadow_and_invariants_every_op():
    pq = WorstCasePQ()
    shadow = ShadowForest()
    for op in random_trace(6000, seed=3):
        if op[0] == "i":
            pq.insert(op[1])
            shadow.insert()
        else:
            pq.extract_min()
            shadow.extract()
        sizes = check_forest(pq.arr)
        assert sizes == shadow.sizes
        assert lemma6_holds(sizes, len(pq) // 3)


def test_locate_strategies_agree_on_long_trace():
    pq = WorstCasePQ()
    for step, op in enumerate(random_trace(20_000, seed=8)):
        if op[0] == "i":
            pq.insert(op[1])
        else:
            pq.extract_min()
        if step % 97 == 0:
            N = len(pq) // 3
            assert locate_trees(pq.arr, N) == locate_trees_by_size(pq.arr, N)


def test_lemma6_rejects_too_many_small_trees():
    assert lemma6_holds([4, 1], 5)
    assert lemma6_holds([2, 2, 2, 1, 1], 8)
    assert not lemma6_holds([1] * 5, 5)
    assert not lemma6_holds([2] * 6, 12)


# -- the queue --------------------------------------------------------------------------

def test_queue_examples():
    pq = WorstCasePQ()
    with pytest.raises(UnderflowError):
        pq.extract_min()
    with pytest.raises(UnderflowError):
        pq.find_min()
    for k in (4, 9, 1, 7, 3):
        pq.insert(k)
    m0, c0 = pq.arr.moves, pq.arr.comparisons
    assert pq.find_min() == 1
    assert (pq.arr.moves, pq.arr.comparisons) == (m0, c0)
    assert [pq.extract_min() for _ in range(5)] == [1, 3, 4, 7, 9]


@settings(max_examples=40)
@given(st.lists(st.one_of(st.none(), st.integers(min_value=0, max_value=10 ** 6)), max_size=600))
def test_property_matches_sorting(script):
    pq = WorstCasePQ()
    live = []
    used = set()
    for item in script:
        if item is None:
            if live:
                live.sort()
                assert pq.extract_min() == live.pop(0)
        elif item not in used:
            used.add(item)
            live.append(item)
            pq.insert(item)
    pq.check()
    assert sorted(live) == [pq.extract_min() for _ in range(len(live))]


def test_rebuilt_twin_continues_identically():
    ops = random_trace(20_000, seed=5)
    pq = WorstCasePQ()
    for op in ops[:9000]:
        pq.insert(op[1]) if op[0] == "i" else pq.extract_min()
    twin = WorstCasePQ.from_snapshot(*pq.arr.snapshot())
    for op in ops[9000:]:
        if op[0] == "i":
            pq.insert(op[1])
            twin.insert(op[1])
        else:
            assert pq.extract_min() == twin.extract_min()
    assert pq.arr.snapshot() == twin.arr.snapshot()


def test_move_counter_matches_write_log():
    pq = WorstCasePQ()
    log = audit(pq.arr)
    for op in random_trace(20_000, seed=6):
        pq.insert(op[1]) if op[0] == "i" else pq.extract_min()
    assert pq.arr.moves == log.writes


def test_per_op_move_ceilings_small():
    pq = WorstCasePQ()
    rng = random.Random(0)
    keys = iter(rng.sample(range(1 << 40), 40_000))
    worst_insert = worst_extract = 0
    for _ in range(40_000):
        m0 = pq.arr.moves
        if len(pq) < 10 or rng.random() < 0.6:
            pq.insert(next(keys))
            worst_insert = max(worst_insert, pq.arr.moves - m0)
        else:
            pq.extract_min()
            worst_extract = max(worst_extract, pq.arr.moves - m0)
    assert worst_insert <= 11
    assert worst_extract <= 16 * (len(pq).bit_length())
