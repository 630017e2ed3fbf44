import json

import pytest

from implicit_pq import harness
from implicit_pq.cli import main
from implicit_pq.core import ImplicitArray

REPORT_KEYS = ["impl", "n", "ops", "moves", "comparisons", "max_moves_per_op",
               "max_cmps_per_op", "wall_ns"]


# -- traces --------------------------------------------------------------------

def test_parse_trace_with_comments_and_blank_lines():
    text = "# header\ni 5\n\ni 3   # inline\nx\n"
    assert harness.parse_trace(text) == [("i", 5), ("i", 3), ("x",)]


@pytest.mark.parametrize("text,lineno", [
    ("i 1\nx\nx\n", 3),
    ("i 1\ni -4\n", 2),
    ("i 1\ni 18446744073709551616\n", 2),
    ("i 1\ninsert 2\n", 2),
    ("i\n", 1),
    ("x 3\n", 1),
    ("i 0x10\n", 1),
])
def test_parse_errors_carry_line_numbers(text, lineno):
    with pytest.raises(harness.TraceError) as info:
        harness.parse_trace(text)
    assert info.value.lineno == lineno
    assert f"line {lineno}" in str(info.value)


def test_trace_format_round_trip():
    ops = harness.random_trace(500, seed=3)
    assert harness.parse_trace(harness.format_trace(ops)) == ops


def test_random_trace_is_valid_and_reproducible():
    a = harness.random_trace(2000, seed=9)
    assert a == harness.random_trace(2000, seed=9)
    assert a != harness.random_trace(2000, seed=10)
    keys = [op[1] for op in a if op[0] == "i"]
    assert len(keys) == len(set(keys))
    harness.parse_trace(harness.format_trace(a))
    dup = harness.random_trace(2000, seed=9, alphabet=4)
    assert {op[1] for op in dup if op[0] == "i"} <= {0, 1, 2, 3}


# -- replay ---------------------------------------------------------------------

@pytest.mark.parametrize("impl", harness.IMPLS)
def test_replay_examples(impl):
    out, report = harness.replay(impl, harness.parse_trace("i 5\ni 3\nx\n"))
    assert out == [3]
    assert list(json.loads(report.to_json())) == REPORT_KEYS
    assert report.n == 2 and report.ops == 3
    out, report = harness.replay(impl, [])
    assert out == [] and (report.moves, report.comparisons, report.ops) == (0, 0, 0)


@pytest.mark.parametrize("impl", harness.IMPLS)
def test_replay_matches_oracle_and_is_deterministic(impl):
    ops = harness.random_trace(5000, seed=2)
    out, r1 = harness.replay(impl, ops)
    want, _ = harness.replay("binary", ops)
    assert out == want
    again, r2 = harness.replay(impl, ops)
    assert again == out and (r1.moves, r1.comparisons) == (r2.moves, r2.comparisons)


@pytest.mark.parametrize("impl", harness.DISTINCT_ONLY)
def test_duplicate_keys_rejected_for_distinct_only(impl):
    with pytest.raises(harness.TraceError):
        harness.replay(impl, [("i", 1), ("i", 1)])
    assert harness.replay("identical", [("i", 1), ("i", 1), ("x",)])[0] == [1]


# -- fuzz -------------------------------------------------------------------------

@pytest.mark.parametrize("impl", ["amortized", "worstcase", "identical"])
def test_fuzz_seed_one_passes(impl):
    res = harness.fuzz(impl, 1000, seed=1, check_every=64, lockstep=200)
    assert res.passed, res.summary()
    assert res.checks == 1000 // 64 and res.round_trips == res.checks


def test_fuzz_is_deterministic():
    a = harness.fuzz("identical", 3000, seed=4, alphabet=8, check_every=100)
    b = harness.fuzz("identical", 3000, seed=4, alphabet=8, check_every=100)
    assert a == b and a.passed


def test_alphabet_only_for_identical():
    with pytest.raises(harness.TraceError):
        harness.fuzz("amortized", 10, seed=1, alphabet=8)
    with pytest.raises(harness.TraceError):
        harness.fuzz("worstcase", 10, seed=1, alphabet=8)


def test_check_every_from_environment(monkeypatch):
    monkeypatch.setenv("PQ_CHECK_EVERY", "250")
    assert harness.check_every_default() == 250
    res = harness.fuzz("worstcase", 1000, seed=1)
    assert res.checks == 4
    monkeypatch.setenv("PQ_CHECK_EVERY", "often")
    with pytest.raises(harness.TraceError):
        harness.check_every_default()
    monkeypatch.delenv("PQ_CHECK_EVERY")
    assert harness.check_every_default() == 1024


def test_flipped_comparison_is_caught_with_small_counterexample(monkeypatch):
    def flipped(self, x, y):
        self.comparisons += 1
        return y < x

    monkeypatch.setattr(ImplicitArray, "lt", flipped)
    res = harness.fuzz("worstcase", 1000, seed=1, check_every=0)
    assert not res.passed
    assert "oracle" in res.message
    assert 0 < len(res.trace) <= 5
    assert harness.fuzz("worstcase", 0, seed=1, check_every=0, ops=res.trace).passed is False


def test_skipped_sift_is_caught(monkeypatch):
    monkeypatch.setattr(ImplicitArray, "sift_up", lambda self, off, k, d: None)
    res = harness.fuzz("amortized", 1000, seed=1, check_every=0)
    assert not res.passed and res.trace
    assert harness.fuzz("amortized", 0, seed=1, check_every=0, ops=res.trace).passed is False


def test_corrupted_twin_is_caught(monkeypatch):
    real = harness.clone_from_state

    def bad_clone(impl):
        twin = real(impl)
        if hasattr(twin, "arr") and twin.arr.n > 3:
            a = twin.arr.a
            a[1], a[2] = a[2], a[1]
        return twin

    monkeypatch.setattr(harness, "clone_from_state", bad_clone)
    res = harness.fuzz("worstcase", 2000, seed=3, check_every=100, lockstep=500, shrink=False)
    assert not res.passed


# -- bench / sort ----------------------------------------------------------------------

def test_bench_report_shape():
    r = harness.bench_one("worstcase", 1 << 10, "insert-heavy")
    data = json.loads(r.to_json())
    assert list(data) == REPORT_KEYS
    assert data["n"] == 1 << 10 and data["ops"] > 1 << 10
    r, kinds = harness.bench_by_kind("binary", 1 << 10, "extract-heavy")
    assert kinds.inserts + kinds.extracts == r.ops
    assert kinds.insert_moves + kinds.extract_moves == r.moves


def test_bench_unknown_mix():
    with pytest.raises(ValueError):
        harness.bench_one("binary", 16, "sideways")


def test_sort_demo():
    assert harness.sort_demo(1)[0]
    ok, report = harness.sort_demo(20_000, seed=3)
    assert ok and report.ops == 40_000


def test_parse_sizes():
    assert harness.parse_sizes("2^16, 2^20,100") == [1 << 16, 1 << 20, 100]
    for bad in ("", "0", "2^x"):
        with pytest.raises(ValueError):
            harness.parse_sizes(bad)


# -- CLI ----------------------------------------------------------------------------------

def test_cli_run(tmp_path, capsys):
    trace = tmp_path / "t.txt"
    trace.write_text("i 5\ni 3\nx\n")
    report = tmp_path / "r.json"
    code = main(["run", "--impl", "amortized", "--trace", str(trace),
                 "--report", str(report), "--verify"])
    assert code == 0
    assert capsys.readouterr().out.split() == ["3"]
    assert list(json.loads(report.read_text())) == REPORT_KEYS


def test_cli_parse_error_exit_code(tmp_path, capsys):
    trace = tmp_path / "t.txt"
    trace.write_text("i 5\nx\nx\n")
    assert main(["run", "--impl", "worstcase", "--trace", str(trace)]) == 2
    assert "line 3" in capsys.readouterr().err


def test_cli_usage_errors():
    assert main([]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["run", "--impl", "nope", "--trace", "x"]) == 2
    assert main(["run", "--impl", "binary", "--trace", "/nonexistent/trace"]) == 2
    assert main(["fuzz", "--impl", "amortized", "--ops", "10", "--seed", "1", "--alphabet", "4"]) == 2
    assert main(["bench", "--impl", "binary", "--sizes", "2^x", "--mix", "balanced"]) == 2


def test_cli_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    assert "fuzz" in capsys.readouterr().out


def test_cli_fuzz_pass_and_fail(tmp_path, capsys, monkeypatch):
    assert main(["fuzz", "--impl", "identical", "--ops", "2000", "--seed", "1",
                 "--alphabet", "8", "--lockstep", "300"]) == 0
    assert capsys.readouterr().out.startswith("PASS")

    def flipped(self, x, y):
        self.comparisons += 1
        return y < x

    monkeypatch.setattr(ImplicitArray, "lt", flipped)
    dump = tmp_path / "cx.txt"
    assert main(["fuzz", "--impl", "worstcase", "--ops", "500", "--seed", "1",
                 "--dump", str(dump)]) == 1
    assert capsys.readouterr().out.startswith("FAIL")
    text = dump.read_text()
    assert text.startswith("# seed 1")
    assert harness.parse_trace(text)


def test_cli_bench_and_sort(tmp_path, capsys):
    out = tmp_path / "bench.jsonl"
    assert main(["bench", "--impl", "worstcase", "--sizes", "2^8,2^9",
                 "--mix", "balanced", "--report", str(out)]) == 0
    lines = [json.loads(line) for line in out.read_text().splitlines()]
    assert [d["n"] for d in lines] == [256, 512]
    assert main(["sort", "--n", "1000", "--seed", "2"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["impl"] == "amortized" and data["ops"] == 2000
