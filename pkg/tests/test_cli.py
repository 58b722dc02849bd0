import csv
import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hetpaging import cli
from hetpaging.core import Request, RequestSequence, SlotSetFamily, WeightMap, slot_mask
from hetpaging.errors import TraceParseError
from hetpaging.generators import FAMILY_KINDS, random_instance, random_page_laminar, random_weights
from hetpaging.online.base import RunResult
from hetpaging.traceio import format_trace, format_weights, parse_trace, parse_weights


def run_cli(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, [json.loads(line) for line in out.out.splitlines() if line.startswith("{")], out


@pytest.fixture
def traces(tmp_path):
    paths = {}
    for name, body in {"abc": "k 2\n1 *\n2 *\n3 *\n", "abab": "k 2\n1 *\n2 *\n1 *\n2 *\n"}.items():
        p = tmp_path / f"{name}.trace"
        p.write_text(body)
        paths[name] = p
    return paths


# ---- trace format

def test_trace_blocks_and_comments():
    seq = parse_trace("# demo\nk 3\nfamily\n*\n1\n2,3\nend\n4 *   # general\n5 1\n6 {2,3}\n")
    assert seq.family.members == (0b111, 0b001, 0b110)
    assert seq.requests == (Request(4, 0b111), Request(5, 0b001), Request(6, 0b110))


def test_family_block_ends_at_first_request():
    seq = parse_trace("k 2\nfamily\n1\n*\n3 1\n")
    assert seq.family.members == (0b01, 0b11)
    assert len(seq) == 1


def test_missing_family_defaults_to_requested_sets():
    seq = parse_trace("k 3\n1 {1,2}\n2 3\n1 {1,2}\n")
    assert seq.family.members == (slot_mask([1, 2]), slot_mask([3]))


def test_page_set_trace():
    seq = parse_trace("k 2\npagefamily\n1,2,3\n1\nend\n{1,2,3}\n{1}\n")
    assert seq.requests == (frozenset({1, 2, 3}), frozenset({1}))
    assert seq.forest().height == 2


@pytest.mark.parametrize("text,line", [
    ("k x\n", 1), ("k 2\n1 *\nbad line here\n", 3), ("k 2\n1 3\n", 2), ("k 2\nend\n", 2),
    ("k 2\n1 *\n{1,2}\n", 3), ("", None), ("k 2\nfamily\n1\nend\n2 {2}\n", None),
])
def test_parse_errors_report_lines(text, line):
    with pytest.raises(TraceParseError) as info:
        parse_trace(text)
    assert info.value.line == line


def test_weights_format():
    w = parse_weights("1 1/2\n2 3\n# zero\n3 0\n")
    assert w[1] == Fraction(1, 2) and w[2] == 3 and w[3] == 0
    assert parse_weights(format_weights(w)) == w
    with pytest.raises(TraceParseError):
        parse_weights("1 1/0\n")
    with pytest.raises(TraceParseError):
        parse_weights("1 2\n1 3\n")


@given(st.sampled_from(FAMILY_KINDS), st.integers(1, 5), st.integers(0, 10**6))
def test_slot_traces_round_trip(kind, k, seed):
    seq = random_instance(k, kind, 6, 20, seed)
    assert parse_trace(format_trace(seq)) == seq


@given(st.integers(1, 4), st.integers(1, 8), st.integers(0, 10**6))
def test_page_set_traces_round_trip(k, npages, seed):
    seq = random_page_laminar(k, npages, 15, seed)
    assert parse_trace(format_trace(seq)) == seq


@given(st.integers(0, 10**6))
def test_weights_round_trip(seed):
    w = random_weights(range(1, 8), seed)
    assert parse_weights(format_weights(w)) == w


# ---- run

def test_run_exh_on_three_pages(capsys, traces):
    code, rows, _ = run_cli(capsys, "run", traces["abc"], "--alg", "exh")
    assert code == 0 and rows[0]["cost"] == 3 and rows[0]["phases"] == [1, 3]


def test_run_lru_with_schedule_dump(capsys, traces):
    code, rows, _ = run_cli(capsys, "run", traces["abab"], "--alg", "lru", "--dump-schedule")
    assert code == 0 and rows[0]["cost"] == 2
    assert rows[0]["schedule"][-1] == [1, 2]


def test_unknown_algorithm_is_a_usage_error(traces):
    with pytest.raises(SystemExit) as info:
        cli.main(["run", str(traces["abc"]), "--alg", "nope"])
    assert info.value.code == cli.EXIT_USAGE


def test_console_exit_codes(tmp_path, traces):
    bad = tmp_path / "bad.trace"
    bad.write_text("k 2\n1 *\n1 2 3\n")
    big = tmp_path / "big.trace"
    big.write_text("k 17\n1 *\n")

    def code(*argv):
        return subprocess.run([sys.executable, "-m", "hetpaging.cli", *map(str, argv)],
                              capture_output=True, text=True).returncode
    assert code("run", traces["abc"], "--alg", "nope") == 1
    assert code("run", bad, "--alg", "lru") == 2
    assert code("run", big, "--alg", "exh") == 3
    assert code("run", traces["abc"], "--alg", "ref") == 0


def test_weighted_run_requires_weights(capsys, traces):
    code, _, out = run_cli(capsys, "run", traces["abc"], "--alg", "waoo")
    assert code == cli.EXIT_USAGE and "weights" in out.err


def test_invalid_schedule_is_an_invariant_violation(capsys, traces, monkeypatch):
    class Broken:
        def run(self, seq, weights=None):
            return RunResult([(None,) * seq.k] * len(seq), 0)
    monkeypatch.setattr(cli, "make_algorithm", lambda name, seed=0: Broken())
    code, _, _ = run_cli(capsys, "run", traces["abc"], "--alg", "lru")
    assert code == cli.EXIT_INVARIANT


# ---- ratio

def test_ratio_guard_when_opt_is_zero(capsys, tmp_path):
    t = tmp_path / "zero.trace"
    t.write_text("k 2\n7 1\n7 *\n7 1\n")
    w = tmp_path / "w.txt"
    w.write_text("7 0\n")
    code, rows, _ = run_cli(capsys, "ratio", t, "--alg", "waoo", "--weights", w)
    assert code == 0 and rows[0]["opt"] == 0 and rows[0]["cost"] == 0 and rows[0]["ratio"] == 0.0


def test_ratio_motivating_instance(capsys, tmp_path):
    t, w = tmp_path / "m.trace", tmp_path / "m.w"
    assert cli.main(["gen", "motivating", "--len", "3", "--weights-out", str(w), "--out", str(t)]) == 0
    code, rows, _ = run_cli(capsys, "ratio", t, "--alg", "waoo", "--weights", w)
    assert code == 0 and rows[0]["opt"] == 3 and rows[0]["ratio"] <= 51


def test_ratio_sweep_laminar_within_bound(capsys, tmp_path):
    out = tmp_path / "r.csv"
    code, rows, _ = run_cli(capsys, "ratio", "--gen", "laminar", "--alg", "sl:pl:lru", "--k", 3, "--count", 15,
                            "--csv", out)
    assert code == 0 and len(rows) == 15
    for r in rows:
        assert r["cost"] <= 3 * r["h"] ** 2 * 3 * r["opt"] + 3 * 6 * r["h"] * 3
    with open(out, newline="") as fh:
        table = list(csv.DictReader(fh))
    assert tuple(table[0]) == cli.CSV_COLUMNS and len(table) == 15


def test_parallel_sweep_matches_serial(capsys):
    args = ["ratio", "--gen", "random", "--alg", "exh", "--k", 3, "--count", 8, "--seed", 40]
    _, serial, _ = run_cli(capsys, *args)
    _, parallel, _ = run_cli(capsys, *args, "--jobs", 3)
    assert serial == parallel


def test_ratio_budget_exceeded_reports_cost_only(capsys):
    code, rows, out = run_cli(capsys, "ratio", "--gen", "standard", "--alg", "lru", "--k", 2, "--pages", 6,
                              "--len", 20, "--caps", "states=5")
    assert code == 0 and rows[0]["opt"] is None and rows[0]["cost"] > 0
    assert "warning" in out.err


def test_bad_caps_string(capsys):
    code, _, _ = run_cli(capsys, "ratio", "--gen", "standard", "--alg", "lru", "--caps", "bogus")
    assert code == cli.EXIT_USAGE


# ---- adversary

def test_adversary_lemma2(capsys):
    code, rows, _ = run_cli(capsys, "adversary", "lemma2", "--k", 5, "--alg", "exh", "--rounds", 500)
    assert code == 0
    row = rows[0]
    assert row["ratio_lb"] >= 9.9 and row["K"] == 500 and "strategy_costs" in row and "seed" in row


def test_adversary_all_or_one(capsys):
    code, rows, _ = run_cli(capsys, "adversary", "aoo", "--k", 4, "--phases", 200, "--alg", "lru-aoo")
    assert code == 0 and rows[0]["ratio"] >= 3.0


def test_adversary_rejects_invalid_cycle_parameters(capsys):
    code, _, _ = run_cli(capsys, "adversary", "lemma2", "--k", 10, "--m", 4)
    assert code == cli.EXIT_USAGE


def test_adversary_forcing(capsys):
    code, rows, _ = run_cli(capsys, "adversary", "forcing", "--k", 6)
    assert code == 0 and rows[0]["forcing"] is True


# ---- gen and stats

def test_gen_is_reproducible(tmp_path):
    a, b = tmp_path / "a.t", tmp_path / "b.t"
    for p in (a, b):
        assert cli.main(["gen", "random", "--k", "3", "--family", "laminar", "--pages", "5", "--len", "40",
                         "--seed", "7", "--out", str(p)]) == 0
    assert a.read_text() == b.read_text()
    assert len(parse_trace(a.read_text())) == 40


def test_gen_vc_writes_sidecar(tmp_path):
    g = tmp_path / "g.txt"
    g.write_text("n 3\nk 2\ne 0 1\ne 1 2\ne 0 2\n")
    out = tmp_path / "vc.trace"
    assert cli.main(["gen", "vc", "--graph", str(g), "--out", str(out)]) == 0
    side = json.loads((tmp_path / "vc.trace.json").read_text())
    assert (side["F"], side["F_prime"], side["m"], side["P"], side["B"]) == (135, 72, 4, 3, 12)
    assert len(parse_trace(out.read_text())) == side["T"]


def test_gen_family_dump(capsys):
    assert cli.main(["gen", "family", "theorem1ii", "--k", "9", "--m", "4"]) == 0
    text = capsys.readouterr().out
    body = text.split("family\n", 1)[1].split("end\n", 1)[0]
    assert len(body.splitlines()) == 27


def test_stats(capsys, tmp_path):
    t = tmp_path / "s.trace"
    t.write_text("k 3\nfamily\n1,2,3\n1\n2\nend\n1 1\n")
    code, rows, _ = run_cli(capsys, "stats", t)
    assert code == 0
    assert (rows[0]["mass"], rows[0]["laminar"], rows[0]["height"]) == (5, True, 2)


def test_json_output_is_utf8_lines(capsys, traces):
    cli.main(["run", str(traces["abc"]), "--alg", "fifo"])
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 1 and json.loads(lines[0])["alg"] == "fifo"


def test_weighted_cli_cost_is_exact(capsys, tmp_path):
    seq = RequestSequence(2, SlotSetFamily.all_or_one(2), (Request.general(1, 2), Request.specific(2, 1)))
    t, w = tmp_path / "w.trace", tmp_path / "w.txt"
    t.write_text(format_trace(seq))
    w.write_text(format_weights(WeightMap({1: Fraction(1, 3), 2: Fraction(1, 2)})))
    code, rows, _ = run_cli(capsys, "run", t, "--alg", "waoo", "--weights", w)
    assert code == 0 and Fraction(rows[0]["cost"]) == Fraction(5, 6)
