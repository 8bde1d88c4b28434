import json
import os
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mincactus.cactus import from_json
from mincactus.cli import main, run
from mincactus.errors import InstanceParseError
from mincactus.io import Instance, parse_instance, parse_trace, serialize_instance

FIX = "tests/fixtures/"


class TestParse:
    def test_round_trip_fixture(self):
        text = open(FIX + "mixed.hgraph").read()
        inst = parse_instance(text)
        assert inst.kind == "hgraph" and inst.n == 8 and inst.m == 6 and inst.terminals is None
        assert parse_instance(serialize_instance(inst)) == inst

    def test_terminals(self):
        inst = parse_instance("p graph 4 1\ne 0 1 2\nt 3\nt 1\n")
        assert inst.terminals == [3, 1] and inst.edges == [((0, 1), 2)]

    @pytest.mark.parametrize(
        "text, line, fragment",
        [
            ("e 0 1 1\n", 1, "before the problem line"),
            ("p graph 3 1\ne 0 3 1\n", 2, "out of range"),
            ("p graph 3 1\ne 0 1 0\n", 2, "weight"),
            ("p graph 3 1\nh 3 0 1 2 1\n", 2, "graph instance"),
            ("p hgraph 3 1\nh 3 0 1 1\n", 2, "expected 'h"),
            ("p graph 3 2\ne 0 1 1\n", 2, "declares 2"),
            ("p graph 3 0\nt 1\nt 1\n", 3, "duplicate terminal"),
            ("p graph 3 1\ne 0 x 1\n", 2, "not an integer"),
            ("p graph 3 1\nq 0\n", 2, "unknown line"),
            ("p graph 3 0\np graph 3 0\n", 2, "duplicate problem"),
            ("p graph 3 1\ne 1 1 1\n", 2, "repeated vertex"),
            ("c only comments\n", 1, "missing problem"),
        ],
    )
    def test_errors_carry_line_numbers(self, text, line, fragment):
        with pytest.raises(InstanceParseError) as info:
            parse_instance(text)
        assert info.value.line == line and fragment in str(info.value)

    @given(
        st.integers(2, 8).flatmap(
            lambda n: st.tuples(
                st.just(n),
                st.lists(
                    st.tuples(st.lists(st.integers(0, n - 1), min_size=2, max_size=min(n, 4), unique=True), st.integers(1, 9)),
                    max_size=10,
                ),
                st.lists(st.integers(0, n - 1), unique=True, max_size=n),
            )
        )
    )
    def test_serialize_parse_idempotent(self, data):
        n, edges, terminals = data
        inst = Instance("hgraph", n, [(tuple(e), w) for e, w in edges], terminals or None, ["generated"])
        once = parse_instance(serialize_instance(inst))
        assert once == inst
        assert serialize_instance(parse_instance(serialize_instance(once))) == serialize_instance(once)

    def test_trace(self):
        assert parse_trace("c header\n0 1\n\n2 3 4\n") == [(0, 1), (2, 3, 4)]
        with pytest.raises(InstanceParseError):
            parse_trace("0 a\n")


class TestCli:
    def test_cactus_c6(self):
        code, out = run(["cactus", FIX + "c6.graph", "--seed", "1"])
        c = from_json(out)
        assert code == 0 and c.lam == 2 and len(c.cycles) == 1 and len(c.cycles[0]) == 6

    def test_isocuts_max_k4(self):
        code, out = run(["isocuts", "--mode", "max", FIX + "k4.graph"])
        cuts = json.loads(out)["cuts"]
        assert code == 0 and [(c["side"], c["value"]) for c in cuts] == [([i], 3) for i in range(4)]

    def test_isocuts_min_steiner(self):
        code, out = run(["isocuts", "--mode", "min", FIX + "c4_steiner.graph"])
        assert [c["terminal"] for c in json.loads(out)["cuts"]] == [0, 2]

    def test_verify_c6(self):
        assert run(["verify", FIX + "c6.graph"]) == (0, "0 violations / 31 bipartitions\n")

    def test_mincut(self):
        code, out = run(["mincut", FIX + "twok4.graph"])
        assert code == 0 and json.loads(out)["lambda"] == 3

    def test_hypercactus_and_augment(self):
        code, out = run(["hypercactus", FIX + "brittle4.hgraph"])
        assert code == 0 and from_json(out).hyperedges == ((0, 1, 2, 3),)
        assert run(["augment-value", FIX + "brittle4.hgraph"]) == (0, "3\n")

    def test_incremental(self):
        code, out = run(["incremental", FIX + "empty4.graph", FIX + "c4.trace"])
        assert code == 0 and out.split() == ["0", "0", "1", "2", "2", "3", "3"]

    def test_dot_format(self):
        code, out = run(["cactus", FIX + "k4.graph", "--format", "dot"])
        assert code == 0 and out.startswith("graph cactus {") and out.count(" -- ") == 4

    def test_seed_from_environment(self, monkeypatch):
        monkeypatch.setenv("MINCACTUS_SEED", "5")
        env_out = run(["cactus", FIX + "star_triangles.graph"])
        assert env_out == run(["cactus", FIX + "star_triangles.graph", "--seed", "5"])
        monkeypatch.setenv("MINCACTUS_SEED", "five")
        assert main(["cactus", FIX + "k4.graph"]) == 1

    def test_exit_codes(self, tmp_path, capsys):
        bad = tmp_path / "bad.graph"
        bad.write_text("p graph 2 1\ne 0 2 1\n")
        assert main(["cactus", str(bad)]) == 1
        assert "line 2" in capsys.readouterr().err
        assert main(["cactus", str(tmp_path / "missing.graph")]) == 1
        assert main(["cactus", FIX + "brittle4.hgraph"]) == 1
        assert main(["cactus", FIX + "empty4.graph"]) == 1
        assert main(["cactus", FIX + "k4.graph", "--threads", "0"]) == 1
        assert main(["verify", FIX + "k4.graph", "--reps", "-1"]) == 1
        with pytest.raises(SystemExit) as info:
            main(["nonsense"])
        assert info.value.code == 1

    def test_failed_verification_exits_two(self, monkeypatch):
        import mincactus.cli as cli
        from mincactus.cactus import path

        monkeypatch.setattr(cli, "compute_steiner_cactus", lambda g, T, config: path(2, [[t] for t in T]))
        code, out = run(["verify", FIX + "c6.graph"])
        assert code == 2 and out.startswith("10 violations / 31 bipartitions") and "missing [1, 2]" in out
        assert main(["verify", FIX + "c6.graph"]) == 2

    def test_module_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "mincactus", "verify", FIX + "twobrittles.hgraph"],
            capture_output=True,
            text=True,
            env={**os.environ, "PYTHONHASHSEED": "0"},
        )
        assert proc.returncode == 0 and proc.stdout.startswith("0 violations")
