import csv

import pytest

from apnp.cli import BENCH_COLUMNS, main
from apnp.gen import density_edges, generate_graph, parse_weight_mode
from apnp.graph import parse_graph

TRI = "3 3 directed\n0 1 1\n1 2 2\n0 2 5\n"


@pytest.fixture
def tri_file(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text(TRI)
    return p


def test_solve_fast_and_naive_identical(tri_file, tmp_path):
    out_fast, out_naive = tmp_path / "fast.txt", tmp_path / "naive.txt"
    assert main(["solve", "--input", str(tri_file), "--algo", "fast", "--output", str(out_fast)]) == 0
    assert main(["solve", "--input", str(tri_file), "--algo", "naive", "--output", str(out_naive)]) == 0
    assert out_fast.read_text() == "0 1 1\n0 2 2\n1 2 2\n"
    assert out_fast.read_bytes() == out_naive.read_bytes()


def test_solve_stats_file(tri_file, tmp_path):
    stats = tmp_path / "stats.txt"
    assert main(["solve", "--input", str(tri_file), "--t-param", "0.5", "--stats", str(stats),
                 "--output", str(tmp_path / "r.txt")]) == 0
    lines = dict(line.split() for line in stats.read_text().splitlines())
    assert lines["reduced"] == "0" and lines["n"] == "3" and lines["threshold"] == "2"


def test_solve_usage_errors(tri_file, tmp_path, capsys):
    assert main(["solve", "--input", str(tri_file), "--algo", "quantum"]) == 2
    assert main(["solve", "--input", str(tmp_path / "missing.txt")]) == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("3 1 directed\n0 0 1\n")
    assert main(["solve", "--input", str(bad)]) == 2
    assert main(["solve", "--input", str(tri_file), "--algo", "undirected-fast"]) == 2
    assert "error" in capsys.readouterr().err


def test_solve_undirected_ties(tmp_path, capsys):
    p = tmp_path / "u.txt"
    p.write_text("3 3 undirected\n0 1 5\n1 2 5\n0 2 5\n")
    assert main(["solve", "--input", str(p), "--algo", "undirected-fast"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 9 and all(line.endswith(" 5") for line in lines)


def test_gen_deterministic(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for p in (a, b):
        assert main(["gen", "--n", "10", "--m", "30", "--seed", "5", "--output", str(p)]) == 0
    assert a.read_text() == b.read_text()
    g = parse_graph(a.read_text())
    assert g.n == 10 and g.m == 30 and not g.has_ties()


def test_gen_too_many_edges():
    assert main(["gen", "--n", "3", "--m", "7"]) == 2
    assert main(["gen", "--n", "3", "--m", "4", "--undirected"]) == 2


def test_gen_ties_classes():
    mode, k = parse_weight_mode("ties:3")
    g = generate_graph(8, 20, mode=mode, classes=k, seed=1)
    assert len({e.weight for e in g.edges}) == 3
    assert parse_weight_mode("ties(4)") == ("ties", 4)
    with pytest.raises(ValueError):
        parse_weight_mode("sometimes")


def test_gen_multi_allows_parallel():
    g = generate_graph(2, 6, multi=True, seed=0)
    assert g.multi and g.m == 6


def test_density_edges():
    assert density_edges(10, "tree") == 9
    assert density_edges(10, "complete") == 90
    assert density_edges(10, "complete", directed=False) == 45
    assert density_edges(10, "50%") == 45


def test_verify_ok(capsys):
    assert main(["verify", "--trials", "30", "--max-n", "12", "--t-param", "0.75"]) == 0
    assert capsys.readouterr().out.strip() == "OK, 30 trials"


def test_verify_given_input(tri_file, capsys):
    assert main(["verify", "--input", str(tri_file)]) == 0
    assert "OK, 1 trials" in capsys.readouterr().out


def test_verify_reports_counterexample(tmp_path):
    out = tmp_path / "cex.txt"
    assert main(["verify", "--trials", "3", "--inject-fault", "--output", str(out)]) == 1
    g = parse_graph(out.read_text())
    assert g.n >= 2


def test_bench_csv(tmp_path, capsys):
    out = tmp_path / "bench.csv"
    assert main(["bench", "--sizes", "16,24", "--algos", "fast,naive", "--t-param", "0.5",
                 "--output", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert list(rows[0].keys()) == BENCH_COLUMNS
    assert {(r["algo"], r["n"]) for r in rows} == {("fast", "16"), ("naive", "16"), ("fast", "24"), ("naive", "24")}
    fast24 = next(r for r in rows if r["algo"] == "fast" and r["n"] == "24")
    assert fast24["threshold"] == "5" and int(fast24["visits"]) > 0
    assert "naive/fast" in capsys.readouterr().err


def test_bench_bad_args():
    assert main(["bench", "--sizes", "a,b"]) == 2
    assert main(["bench", "--algos", "brute"]) == 2


def test_help_exits_cleanly():
    assert main(["--help"]) == 0
    assert main([]) == 2
