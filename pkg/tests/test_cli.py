import csv

import pytest

from minorfind.cli import (EXIT_BUDGET, EXIT_MINOR, EXIT_OK, EXIT_USAGE, main,
                           parse_pattern)
from minorfind.graph import GraphError, read_graph


def run(argv):
    return main([str(a) for a in argv])


def test_parse_pattern_names():
    assert parse_pattern("K5").n == 5
    assert parse_pattern("K33").m == 9
    assert parse_pattern("K2:4").m == 8
    assert parse_pattern("C6").m == 6
    assert parse_pattern("P4").m == 3
    with pytest.raises(GraphError):
        parse_pattern("X7")


def test_generate_grid(tmp_path):
    out = tmp_path / "g.txt"
    assert run(["generate", "--family", "grid", "--w", 10, "--h", 10,
                "--out", out]) == EXIT_OK
    g = read_graph(str(out))
    assert g.n == 100 and g.m == 180


def test_generate_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for out in (a, b):
        run(["generate", "--family", "random-regular", "--n", 64, "--d", 4,
             "--seed", 9, "--out", out])
    assert a.read_bytes() == b.read_bytes()


def test_generate_invalid_params():
    assert run(["generate", "--family", "random-regular", "--n", 5, "--d", 3]) == EXIT_USAGE


def test_test_accepts_planar(tmp_path):
    g = tmp_path / "g.txt"
    run(["generate", "--family", "grid", "--w", 8, "--h", 8, "--out", g])
    rep = tmp_path / "rep.csv"
    code = run(["test", "--graph", g, "--pattern", "K5", "--seed", 1, "--out", rep])
    assert code == EXIT_OK
    with open(rep) as fh:
        rows = list(csv.DictReader(fh))
    assert rows[0]["outcome"] == "accept"
    assert int(rows[0]["neighbor_queries"]) > 0


def test_test_finds_minor_and_certificate_validates(tmp_path):
    g = tmp_path / "g.txt"
    run(["generate", "--family", "random-regular", "--n", 64, "--d", 8,
         "--seed", 2, "--out", g])
    cert = tmp_path / "cert.txt"
    code = run(["test", "--graph", g, "--pattern", "K5", "--seed", 3,
                "--certificate", cert])
    assert code == EXIT_MINOR
    assert run(["validate", "--graph", g, "--certificate", cert]) == EXIT_OK


def test_validate_rejects_tampered(tmp_path):
    g = tmp_path / "g.txt"
    run(["generate", "--family", "random-regular", "--n", 64, "--d", 8,
         "--seed", 2, "--out", g])
    cert = tmp_path / "cert.txt"
    run(["test", "--graph", g, "--pattern", "K5", "--seed", 3, "--certificate", cert])
    text = cert.read_text().splitlines()
    for idx, line in enumerate(text):
        if line.startswith("branch 0:"):
            text[idx] = "branch 0: 0 1 2 3 4 5 6 7 8 9 10"
            break
    cert.write_text("\n".join(text) + "\n")
    assert run(["validate", "--graph", g, "--certificate", cert]) == EXIT_MINOR


def test_analyze_lemmas_zero_violations(tmp_path):
    g = tmp_path / "g.txt"
    run(["generate", "--family", "random-regular", "--n", 30, "--d", 4,
         "--seed", 5, "--out", g])
    assert run(["analyze", "--graph", g, "--suite", "lemmas", "--delta", 0.4,
                "--ell", 1, "--imax", 2, "--seed", 7]) == EXIT_OK


def test_analyze_kac_reports_residual(tmp_path, capsys):
    g = tmp_path / "g.txt"
    run(["generate", "--family", "random-regular", "--n", 24, "--d", 4,
         "--seed", 5, "--out", g])
    code = run(["analyze", "--graph", g, "--suite", "kac", "--subset-size", 12,
                "--hops", 2, "--tmax", 500, "--seed", 1])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "residual" in out


def test_analyze_ls_curve_csv_and_figure(tmp_path):
    g = tmp_path / "g.txt"
    run(["generate", "--family", "grid", "--w", 5, "--h", 5, "--out", g])
    out = tmp_path / "curve.csv"
    assert run(["analyze", "--graph", g, "--suite", "ls-curve", "--hops", 3,
                "--tmax", 4, "--out", out]) == EXIT_OK
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert {r["t"] for r in rows} == {"0", "1", "2", "3"}
    assert (tmp_path / "curve.png").exists()


def test_analyze_stratify_writes_placements(tmp_path):
    g = tmp_path / "g.txt"
    run(["generate", "--family", "random-regular", "--n", 20, "--d", 4,
         "--seed", 2, "--out", g])
    out = tmp_path / "strata.csv"
    assert run(["analyze", "--graph", g, "--suite", "stratify", "--delta", 0.5,
                "--ell", 1, "--imax", 2, "--out", out]) == EXIT_OK
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 20
    assert (tmp_path / "strata.png").exists()


def test_analyze_decompose(tmp_path):
    g = tmp_path / "g.txt"
    run(["generate", "--family", "grid", "--w", 12, "--h", 12, "--out", g])
    out = tmp_path / "parts.csv"
    code = run(["analyze", "--graph", g, "--suite", "decompose", "--delta", 0.3,
                "--ell", 1, "--imax", 4, "--epsilon", 1.0, "--alpha", 0.03,
                "--out", out])
    assert code == EXIT_OK
    assert (tmp_path / "parts.png").exists()


def test_bench_csv_columns(tmp_path):
    out = tmp_path / "bench.csv"
    code = run(["bench", "--family", "random-regular", "--sizes", "64,128",
                "--d", 8, "--seeds", 2, "--pattern", "K3", "--out", out])
    assert code == EXIT_OK
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert [int(r["n"]) for r in rows] == [64, 128]
    for row in rows:
        assert 0.0 <= float(row["success_rate"]) <= 1.0
    assert float(rows[1]["doubling_ratio"]) > 0
    assert (tmp_path / "bench.png").exists()


def test_bench_parallel_jobs_match_serial(tmp_path):
    serial, parallel = tmp_path / "s.csv", tmp_path / "p.csv"
    base = ["bench", "--family", "random-regular", "--sizes", "64", "--d", 8,
            "--seeds", 3, "--pattern", "K3", "--no-plot"]
    run(base + ["--out", serial])
    run(base + ["--jobs", 2, "--out", parallel])
    assert serial.read_text() == parallel.read_text()


def test_time_budget_status(tmp_path):
    # V8 chained bodies make K5 absence proofs that a tiny budget interrupts
    from minorfind.graph import Graph, write_graph
    v8e = [(i, (i + 1) % 8) for i in range(8)] + [(i, i + 4) for i in range(4)]
    edges = []
    for c in range(12):
        edges += [(8 * c + a, 8 * c + b) for a, b in v8e]
    for c in range(11):
        edges.append((8 * c + 1, 8 * (c + 1) + 2))
    g = Graph(96, 4, edges)
    path = tmp_path / "v8s.txt"
    write_graph(g, str(path))
    code = run(["test", "--graph", path, "--pattern", "K5", "--seed", 0,
                "--time-budget", "0.000001"])
    assert code in (EXIT_BUDGET, EXIT_OK)
