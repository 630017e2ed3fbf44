import heapq
import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from implicit_pq import SCALED, IdenticalPQ, UnderflowError
from implicit_pq.core import to_gray
from implicit_pq.harness import random_trace
from implicit_pq.identical import DEGENERATE, FULL, HEAP, SMALL, W, threshold

from conftest import audit


def run(pq, ops, check_every=0):
    got, want, live = [], [], []
    for step, op in enumerate(ops, start=1):
        if op[0] == "i":
            pq.insert(op[1])
            heapq.heappush(live, op[1])
        else:
            got.append(pq.extract_min())
            want.append(heapq.heappop(live))
        assert len(pq) == len(live)
        if check_every and step % check_every == 0:
            pq.check()
    return got, want


def p_field_bits(pq):
    a = pq.arr.a
    return [a[3 + 2 * k] < a[4 + 2 * k] for k in range(W)]


def test_small_examples():
    pq = IdenticalPQ()
    for k in (7, 7, 7):
        pq.insert(k)
    assert pq.extract_min() == 7 and len(pq) == 2
    assert pq.find_min() == 7
    pq.extract_min()
    pq.extract_min()
    with pytest.raises(UnderflowError):
        pq.extract_min()
    with pytest.raises(UnderflowError):
        pq.find_min()


def test_all_equal_stream_stays_degenerate():
    pq = IdenticalPQ()
    for _ in range(1000):
        pq.insert(7)
        if len(pq) > SMALL:
            assert pq.mode() == DEGENERATE
    pq.check()
    assert [pq.extract_min() for _ in range(1000)] == [7] * 1000


def test_distinct_values_promote_to_full_mode():
    pq = IdenticalPQ()
    for _ in range(1000):
        pq.insert(7)
    assert pq.mode() == DEGENERATE
    extra = threshold(2000)
    for k in range(extra + 5):
        pq.insert(100 + k)
    pq.check()
    assert pq.mode() == FULL
    assert pq.arr.a[1] != pq.arr.a[2]
    out = [pq.extract_min() for _ in range(len(pq))]
    assert out == sorted([7] * 1000 + [100 + k for k in range(extra + 5)])


def test_degenerate_extract_scans_only_the_tail():
    pq = IdenticalPQ()
    for _ in range(900):
        pq.insert(50)
    for k in (3, 99, 1):
        pq.insert(k)
    assert pq.mode() == DEGENERATE
    c0, m0 = pq.arr.comparisons, pq.arr.moves
    assert pq.extract_min() == 1
    assert pq.arr.moves - m0 <= 2
    assert pq.arr.comparisons - c0 < 2 * len(pq)


def full_state(seed=0, n=3000, alphabet=1000):
    rng = random.Random(seed)
    pq = IdenticalPQ(profile=SCALED)
    for _ in range(n):
        pq.insert(rng.randrange(alphabet))
    assert pq.mode() == FULL
    return pq


def test_pair_extract_moves_partner_to_buffer_and_decrements_p():
    pq = full_state()
    rng = random.Random(1)
    hits = 0
    for _ in range(2000):
        cands = pq.elements_candidates()
        inner = min(pq.core.find_min())
        p = pq._read_p()
        if pq.mode() == FULL and p > 2 and Counter(cands)[min(cands)] == 1 and inner == min(cands):
            pair = pq.core.find_min()
            partner = max(pair)
            before = p_field_bits(pq)
            pq.store.count = p
            x = pq._extract_full(p)
            assert x == inner
            assert pq._read_p() == p - 1
            after = p_field_bits(pq)
            assert sum(u != v for u, v in zip(before, after)) == 1
            l0, l1 = pq._tail(p - 1)
            assert partner in pq.arr.a[l0:pq.arr.n + 1]
            pq._after_full_extract()
            pq.check()
            hits += 1
        else:
            pq.extract_min()
        pq.insert(rng.randrange(1000))
    assert hits > 20


def test_make_pairs_empties_buffer_and_counts_in_gray():
    pq = full_state(seed=2)
    for _ in range(50):
        p = pq._read_p()
        l0, l1 = pq._tail(p)
        if pq.arr.n - l1 + 1 >= 3:
            break
        pq.insert(random.Random(len(pq)).randrange(1000))
    p = pq._read_p()
    flips_before = to_gray(p)
    pq.store.count = p
    pq._make_pairs(p)
    q = pq._read_p()
    l0, l1 = pq._tail(q)
    # what is left after pairing is one run of equal values and nothing else
    assert l1 == pq.arr.n + 1
    assert bin(flips_before ^ to_gray(q)).count("1") <= q - p
    pq.check()


def test_alphabet_eight_matches_oracle_all_modes():
    pq = IdenticalPQ(profile=SCALED)
    modes = Counter()
    ops = random_trace(40_000, seed=4, alphabet=8)
    live = []
    for step, op in enumerate(ops):
        if op[0] == "i":
            pq.insert(op[1])
            heapq.heappush(live, op[1])
        else:
            assert pq.extract_min() == heapq.heappop(live)
        if step % 101 == 0:
            pq.check()
            modes[pq.mode()] += 1
    assert {HEAP, FULL} <= set(modes)


@pytest.mark.parametrize("alphabet", [1, 2, 3, 50, 1 << 30])
def test_matches_oracle_various_alphabets(alphabet):
    got, want = run(IdenticalPQ(profile=SCALED), random_trace(20_000, seed=alphabet, alphabet=alphabet),
                    check_every=499)
    assert got == want


def test_skewed_stream_switches_modes():
    rng = random.Random(5)
    pq = IdenticalPQ(profile=SCALED)
    modes = Counter()
    live = []
    for step in range(30_000):
        phase = (step // 5000) % 2
        if not live or rng.random() < 0.6:
            k = 0 if phase == 0 and rng.random() < 0.97 else rng.randrange(100)
            pq.insert(k)
            heapq.heappush(live, k)
        else:
            assert pq.extract_min() == heapq.heappop(live)
        if step % 53 == 0:
            pq.check()
            modes[pq.mode()] += 1
    assert set(modes) == {HEAP, DEGENERATE, FULL}


def test_extract_only_suffix_is_sorted():
    pq = full_state(seed=3, n=5000, alphabet=40)
    out = [pq.extract_min() for _ in range(len(pq))]
    assert out == sorted(out)


@settings(max_examples=30)
@given(st.lists(st.one_of(st.none(), st.integers(min_value=0, max_value=5)), max_size=1500))
def test_property_small_alphabet(script):
    pq = IdenticalPQ(profile=SCALED)
    live = []
    for item in script:
        if item is None:
            if live:
                live.sort()
                assert pq.extract_min() == live.pop(0)
        else:
            live.append(item)
            pq.insert(item)
    pq.check()
    assert sorted(live) == [pq.extract_min() for _ in range(len(live))]


def test_rebuilt_twin_continues_identically():
    ops = random_trace(30_000, seed=12, alphabet=8)
    pq = IdenticalPQ(profile=SCALED)
    for op in ops[:14_000]:
        pq.insert(op[1]) if op[0] == "i" else pq.extract_min()
    twin = IdenticalPQ.from_snapshot(*pq.arr.snapshot(), profile=SCALED)
    for op in ops[14_000:]:
        if op[0] == "i":
            pq.insert(op[1])
            twin.insert(op[1])
        else:
            assert pq.extract_min() == twin.extract_min()
    assert pq.arr.snapshot() == twin.arr.snapshot()


def test_move_counter_matches_write_log():
    pq = IdenticalPQ(profile=SCALED)
    log = audit(pq.arr)
    run(pq, random_trace(30_000, seed=13, alphabet=16))
    assert pq.arr.moves == log.writes
