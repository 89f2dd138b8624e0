import json
import os
import subprocess
import sys

import pytest

from stratmap.cli import main
from stratmap.graph import from_pajek, symmetrize
from stratmap.pajek import parse_map_file, parse_network_file, parse_pajek

TWO_CLIQUES = (
    "*Vertices 8\n" + "".join(f'{i + 1} "n{i}"\n' for i in range(8)) + "*Arcs\n"
    + "".join(f"{i + 1} {j + 1} 1\n" for i in range(4) for j in range(i + 1, 4))
    + "".join(f"{i + 5} {j + 5} 1\n" for i in range(4) for j in range(i + 1, 4))
    + "4 5 1\n"
)


@pytest.fixture
def net(tmp_path):
    path = tmp_path / "level0.net"
    path.write_text(TWO_CLIQUES, encoding="utf-8")
    return path


def run_cli(*argv):
    return main([str(a) for a in argv])


def full_run(net, out):
    return run_cli(
        "run", "--pajek-network", net, "--save-map", out / "m0.txt", "--save-network", out / "n0.txt",
        "--run-layout", "--run-clustering", "--repulsion", "0", "--min-cluster-size", "2",
        "--merge-small-clusters", "true",
    )


def test_run_with_all_pipeline_flags(net, tmp_path, capsys):
    assert full_run(net, tmp_path) == 0
    rows = parse_map_file((tmp_path / "m0.txt").read_text()).rows
    assert [r.cluster for r in rows] == [1, 1, 1, 1, 2, 2, 2, 2]
    assert len(parse_network_file((tmp_path / "n0.txt").read_text()).rows) == 13
    assert "2 clusters" in capsys.readouterr().out


def test_run_is_deterministic(net, tmp_path):
    (tmp_path / "a").mkdir()
    (tmp_path / "b").mkdir()
    full_run(net, tmp_path / "a")
    full_run(net, tmp_path / "b")
    for name in ("m0.txt", "n0.txt"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_run_without_layout_zeroes_coordinates(net, tmp_path):
    assert run_cli("run", "--pajek-network", net, "--save-map", tmp_path / "m.txt", "--run-clustering") == 0
    rows = parse_map_file((tmp_path / "m.txt").read_text()).rows
    assert {(r.x, r.y) for r in rows} == {(0.0, 0.0)}
    assert {r.cluster for r in rows} == {1, 2}


def test_run_without_clustering_puts_all_in_one(net, tmp_path):
    assert run_cli("run", "--pajek-network", net, "--save-map", tmp_path / "m.txt") == 0
    assert {r.cluster for r in parse_map_file((tmp_path / "m.txt").read_text()).rows} == {1}


def test_missing_input_is_usage_error(tmp_path, capsys):
    assert run_cli("run", "--pajek-network", tmp_path / "missing.net") == 2
    assert "not found" in capsys.readouterr().err


def test_missing_required_flag_is_usage_error(capsys):
    assert run_cli("run") == 2
    assert run_cli("nonsense") == 2


def test_parse_error_reports_line(tmp_path, capsys):
    bad = tmp_path / "bad.net"
    bad.write_text('*Vertices 2\n1 "a"\n2 "b"\n*Arcs\n1 9 1\n')
    assert run_cli("run", "--pajek-network", bad) == 1
    assert "line 5" in capsys.readouterr().err


def test_bad_boolean_flag(net):
    assert run_cli("run", "--pajek-network", net, "--merge-small-clusters", "maybe") == 2


def test_isolates_are_dropped_with_warning(tmp_path, caplog):
    path = tmp_path / "g.net"
    path.write_text('*Vertices 4\n1 "a"\n2 "b"\n3 "c"\n4 "lonely"\n*Arcs\n1 2 1\n2 3 1\n1 3 1\n')
    assert run_cli("run", "--pajek-network", path, "--save-map", tmp_path / "m.txt", "--run-clustering") == 0
    labels = [r.label for r in parse_map_file((tmp_path / "m.txt").read_text()).rows]
    assert labels == ["a", "b", "c"]
    assert "lonely" in caplog.text


def test_stats_small_example(tmp_path, capsys):
    path = tmp_path / "g.net"
    path.write_text('*Vertices 3\n1 "a"\n2 "b"\n3 "c"\n*Arcs\n1 2 1\n2 1 1\n1 3 1\n')
    assert run_cli("stats", "--input", path, "--out-json", tmp_path / "s.json") == 0
    text = capsys.readouterr().out
    assert "density" in text
    data = json.loads((tmp_path / "s.json").read_text())
    assert data["density"] == 0.5 and data["avg_total_degree"] == 2.0
    assert run_cli("stats", "--input", path, "--json") == 0
    assert json.loads(capsys.readouterr().out) == data


def test_compare_identical_files(tmp_path, capsys):
    body = "".join(f"j{i}\t{1 + i % 3}\n" for i in range(30))
    (tmp_path / "y1.tsv").write_text(body)
    (tmp_path / "y2.tsv").write_text(body)
    code = run_cli(
        "compare", "--a", tmp_path / "y1.tsv", "--b", tmp_path / "y2.tsv", "--json",
        "--out-tsv", tmp_path / "r.tsv",
    )
    assert code == 0
    stats = json.loads(capsys.readouterr().out)
    assert stats["cramers_v"] == pytest.approx(1.0)
    assert stats["reclassified_fraction"] == 0.0
    assert "n_common\t30" in (tmp_path / "r.tsv").read_text()


def test_compare_map_against_tsv(net, tmp_path, capsys):
    full_run(net, tmp_path)
    (tmp_path / "t.tsv").write_text("".join(f"n{i}\t{1 + i // 4}\n" for i in range(8)))
    assert run_cli("compare", "--a", tmp_path / "m0.txt", "--b", tmp_path / "t.tsv") == 0
    assert "reclassified_fraction" in capsys.readouterr().out


def test_compare_lists(tmp_path, capsys):
    for name, items in (("a", "AB"), ("b", "BC"), ("c", "BD")):
        (tmp_path / name).write_text("\n".join(items) + "\n")
    assert run_cli("compare", "--lists", tmp_path / "a", tmp_path / "b", tmp_path / "c", "--json") == 0
    report = json.loads(capsys.readouterr().out)
    assert (report["in_all"], report["in_exactly_two"], report["in_exactly_one"]) == (1, 0, 3)


def test_compare_needs_inputs():
    assert run_cli("compare") == 2


def test_gen_planted(tmp_path):
    code = run_cli(
        "gen", "planted", "--sizes", "25,25,25,25", "--p-in", "0.5", "--p-out", "0.01", "--seed", "0",
        "--out-dir", tmp_path,
    )
    assert code == 0
    g = from_pajek(parse_pajek((tmp_path / "planted.net").read_text()))
    truth = (tmp_path / "planted_truth.tsv").read_text().splitlines()
    assert g.n_nodes == 100 == len(truth)
    assert truth[0] == "v001\t1" and truth[-1] == "v100\t4"


def test_gen_ring(tmp_path):
    assert run_cli("gen", "ring", "--k", "3", "--clique-size", "4", "--open", "--out-dir", tmp_path, "--name", "r") == 0
    g = symmetrize(from_pajek(parse_pajek((tmp_path / "r.net").read_text())))
    assert g.n_nodes == 12 and g.n_edges == 3 * 6 + 2


def test_gen_invalid_probabilities(tmp_path):
    assert run_cli("gen", "planted", "--p-in", "0.1", "--p-out", "0.5", "--out-dir", tmp_path) == 1


def ring_net(tmp_path):
    run_cli("gen", "ring", "--k", "4", "--clique-size", "6", "--out-dir", tmp_path)
    return tmp_path / "ring.net"


def test_decompose_writes_pipeline_files(tmp_path, capsys):
    src = ring_net(tmp_path)
    capsys.readouterr()
    out = tmp_path / "out"
    assert run_cli("decompose", "--input", src, "--levels", "4", "--out-dir", out) == 0
    names = set(os.listdir(out))
    assert {"m0.txt", "n0.txt", "m1.txt", "m4.txt", "tree.json", "tree.html", "index.html"} <= names
    table = capsys.readouterr().out.splitlines()
    assert table[0].split() == ["level", "path", "size", "map"]
    assert table[1].split() == ["1", "-", "24", "m0.txt"]


def test_decompose_single_level(tmp_path):
    out = tmp_path / "out"
    assert run_cli("decompose", "--input", ring_net(tmp_path), "--levels", "1", "--out-dir", out) == 0
    assert sorted(os.listdir(out)) == ["index.html", "level0.net", "m0.txt", "n0.txt", "tree.html", "tree.json"]


def test_decompose_url_template(tmp_path):
    out = tmp_path / "out"
    src = ring_net(tmp_path)
    assert run_cli("decompose", "--input", src, "--out-dir", out, "--url-template", "https://viewer.example/?map={map}") == 0
    assert 'href="https://viewer.example/?map=m1.txt">v01<' in (out / "index.html").read_text()
    assert run_cli("decompose", "--input", src, "--out-dir", out, "--url-template", "https://viewer.example/") == 2


def test_seed_env_and_override(net, tmp_path, monkeypatch):
    def layout_with(*extra):
        out = tmp_path / "m.txt"
        run_cli("run", "--pajek-network", net, "--save-map", out, "--run-layout", *extra)
        return out.read_text()

    base = layout_with("--seed", "0")
    monkeypatch.setenv("STRATMAP_SEED", "0")
    assert layout_with() == base
    monkeypatch.setenv("STRATMAP_SEED", "5")
    env5 = layout_with()
    assert layout_with("--seed", "5") == env5
    assert layout_with("--seed", "0") == base
    monkeypatch.setenv("STRATMAP_SEED", "x")
    assert run_cli("run", "--pajek-network", net) == 2


def test_module_entry_point(net):
    proc = subprocess.run(
        [sys.executable, "-m", "stratmap", "stats", "--input", str(net), "--json"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["n_nodes"] == 8
