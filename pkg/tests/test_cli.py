"""CLI surface: parsing, generators, subcommands, schemas, exit codes."""
import json
from importlib import resources

import jsonschema
import pytest
from hypothesis import given, settings

from arborpack.cli import format_graph, main, parse_graph
from arborpack.errors import InputError
from arborpack.generators import generate
from arborpack.graphcore import scc
from arborpack.oracle import exact_rooted_mincut

from .conftest import digraphs


def load_schema(name):
    text = resources.files("arborpack.schemas").joinpath(name).read_text()
    return json.loads(text)


def validate(payload, schema_name):
    jsonschema.validate(payload, load_schema(schema_name))


class TestParseGraph:
    def test_minimal(self):
        g, diag = parse_graph("p dmc 2 1 1\na 1 2\n")
        assert g.n == 2 and g.m == 1
        assert g.edges == ((0, 1, 1),)

    def test_zero_capacity_rejected(self):
        with pytest.raises(InputError):
            parse_graph("p dmc 2 1 1\na 1 2 0\n")

    def test_self_loop_counted_and_dropped(self):
        g, diag = parse_graph("p dmc 2 2 1\na 1 2\na 1 1 1\n")
        assert g.m == 1
        assert diag.dropped_self_loops == 1

    def test_missing_problem_line(self):
        with pytest.raises(InputError, match="problem line"):
            parse_graph("a 1 2\n")

    def test_arc_count_mismatch(self):
        with pytest.raises(InputError, match="declares"):
            parse_graph("p dmc 2 2 1\na 1 2\n")

    def test_out_of_range_vertex_positioned(self):
        with pytest.raises(InputError, match="line 2"):
            parse_graph("p dmc 2 1 1\na 1 9\n")

    @given(digraphs(max_n=8, max_m=20, max_cap=5))
    @settings(max_examples=30)
    def test_round_trip(self, g):
        parsed, _ = parse_graph(format_graph(g))
        assert parsed == g


class TestGenerators:
    def test_gen_deterministic_bytes(self):
        a = format_graph(generate("random_gnm", seed=7, n=10, m=30))
        b = format_graph(generate("random_gnm", seed=7, n=10, m=30))
        assert a == b

    def test_known_packing_connectivity(self):
        g = generate("known_packing", seed=3, n=8, k=3)
        exact, _ = exact_rooted_mincut(g)
        assert exact >= 3

    def test_dag_is_acyclic(self):
        g = generate("dag_layered", seed=5, n=10, m=20)
        assert all(len(c) == 1 for c in scc(g).components)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestSubcommands:
    @pytest.fixture()
    def graph_file(self, tmp_path):
        path = tmp_path / "g.dmc"
        code = main(["gen", "cycle_plus_chords", "--n", "6", "--chords", "6",
                     "--seed", "3", "--out", str(path)])
        assert code == 0
        return path

    def test_hierarchy_schema(self, capsys, graph_file):
        code, out = run_cli(capsys, "hierarchy", str(graph_file), "--seed", "1")
        assert code == 0
        validate(json.loads(out), "hierarchy.schema.json")

    def test_mincut_exact_on_path(self, capsys, tmp_path):
        path = tmp_path / "p.dmc"
        path.write_text("p dmc 3 2 1\na 1 2\na 2 3\n")
        code, out = run_cli(capsys, "mincut", str(path), "--exact")
        assert code == 0
        payload = json.loads(out)
        assert payload["value"] == 1
        validate(payload, "mincut.schema.json")

    def test_mincut_with_ratio(self, capsys, graph_file):
        code, out = run_cli(capsys, "mincut", str(graph_file), "--seed", "2",
                            "--ratio", "--verbose")
        assert code == 0
        payload = json.loads(out)
        validate(payload, "mincut.schema.json")
        assert payload["value"] >= payload["exact"]
        assert payload["ratio_vs_exact"] >= 1.0

    def test_pack_cut_on_path(self, capsys, tmp_path):
        path = tmp_path / "p.dmc"
        path.write_text("p dmc 3 2 1\na 1 2\na 2 3\n")
        code, out = run_cli(capsys, "pack", str(path), "--k", "2")
        assert code == 0
        payload = json.loads(out)
        validate(payload, "packing.schema.json")
        assert payload["result"] == "cut"
        assert payload["delta"] == 1

    def test_pack_then_verify(self, capsys, tmp_path, graph_file):
        code, out = run_cli(capsys, "pack", str(graph_file), "--k", "1",
                            "--seed", "5")
        assert code == 0
        payload = json.loads(out)
        validate(payload, "packing.schema.json")
        result_file = tmp_path / "pack.json"
        result_file.write_text(out)
        code, out = run_cli(capsys, "verify", str(result_file), str(graph_file))
        assert code == 0
        report = json.loads(out)
        validate(report, "verify.schema.json")
        assert report["ok"]

    def test_verify_rejects_fake_cut(self, capsys, tmp_path):
        path = tmp_path / "p.dmc"
        path.write_text("p dmc 3 2 1\na 1 2\na 2 3\n")
        result_file = tmp_path / "bad.json"
        result_file.write_text(json.dumps(
            {"kind": "packing", "k": 1, "result": "cut", "cut": [0, 1], "delta": 1}
        ))
        code, out = run_cli(capsys, "verify", str(result_file), str(path))
        assert code == 1
        report = json.loads(out)
        assert not report["ok"]

    def test_bench_records_validate(self, capsys, tmp_path):
        corpus = tmp_path / "corpus"
        corpus.mkdir()
        for seed in (1, 2):
            main(["gen", "known_packing", "--n", "6", "--k", "2",
                  "--seed", str(seed), "--out", str(corpus / f"i{seed}.dmc")])
        code, out = run_cli(capsys, "bench", str(corpus), "--seed", "4")
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 2
        for line in lines:
            validate(json.loads(line), "bench.schema.json")

    def test_parse_error_exit_code(self, capsys, tmp_path):
        bad = tmp_path / "bad.dmc"
        bad.write_text("p dmc 2 1 1\na 1 5\n")
        code, out = run_cli(capsys, "mincut", str(bad))
        assert code == 2
        payload = json.loads(out)
        validate(payload, "error.schema.json")

    def test_env_seed_default(self, capsys, tmp_path, monkeypatch):
        path = tmp_path / "p.dmc"
        path.write_text("p dmc 3 2 1\na 1 2\na 2 3\n")
        monkeypatch.setenv("ARBOR_SEED", "17")
        code, out = run_cli(capsys, "mincut", str(path))
        assert code == 0
        assert json.loads(out)["seed"] == 17


class TestVerifyOtherKinds:
    def test_verify_hierarchy_json(self, capsys, tmp_path):
        path = tmp_path / "g.dmc"
        main(["gen", "two_cliques_bridge", "--half", "3", "--seed", "2",
              "--out", str(path)])
        code, out = run_cli(capsys, "hierarchy", str(path), "--seed", "1")
        assert code == 0
        result = tmp_path / "h.json"
        result.write_text(out)
        code, out = run_cli(capsys, "verify", str(result), str(path))
        assert code == 0
        assert json.loads(out)["ok"]

    def test_verify_mincut_json(self, capsys, tmp_path):
        path = tmp_path / "p.dmc"
        path.write_text("p dmc 3 2 1\na 1 2\na 2 3\n")
        code, out = run_cli(capsys, "mincut", str(path), "--seed", "1")
        assert code == 0
        result = tmp_path / "m.json"
        result.write_text(out)
        code, out = run_cli(capsys, "verify", str(result), str(path))
        assert code == 0
        report = json.loads(out)
        validate(report, "verify.schema.json")
        assert report["ok"]
