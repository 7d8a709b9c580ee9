import itertools
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.sparse.csgraph import shortest_path

from pmedian_ga import GaConfig, binomial
from pmedian_ga.bench import (
    BenchmarkRecord,
    InstanceFormatError,
    emit_report,
    format_table,
    load_instance,
    parse_dense,
    parse_orlib,
    parse_structured,
    read_reference,
    run_benchmark,
    sci,
)

DATA = Path(__file__).resolve().parents[1] / "data"

EXAMPLE1_TEXT = """5 4 2
7 10 16 11
15 17 7 7
10 4 6 6
7 11 18 12
10 22 14 8
"""

# (m, p, printed search space) for the 40 pmed rows of the published table
PMED_SEARCH_SPACE = [
    (100, 5, "7.53E+07"), (100, 10, "1.73E+13"), (100, 10, "1.73E+13"), (100, 20, "5.36E+20"),
    (100, 33, "2.95E+26"), (200, 5, "2.54E+09"), (200, 10, "2.25E+16"), (200, 20, "1.61E+27"),
    (200, 40, "2.05E+42"), (200, 67, "1.45E+54"), (300, 5, "1.96E+10"), (300, 10, "1.40E+18"),
    (300, 30, "1.73E+41"), (300, 60, "9.04E+63"), (300, 100, "4.16E+81"), (400, 5, "8.32E+10"),
    (400, 10, "2.58E+19"), (400, 40, "1.97E+55"), (400, 80, "4.23E+85"), (400, 133, "1.26E+109"),
    (500, 5, "2.55E+11"), (500, 10, "2.46E+20"), (500, 50, "2.31E+69"), (500, 100, "2.04E+107"),
    (500, 167, "7.85E+136"), (600, 5, "6.37E+11"), (600, 10, "1.55E+21"), (600, 60, "2.77E+83"),
    (600, 120, "1.01E+129"), (600, 200, "2.51E+164"), (700, 5, "1.38E+12"), (700, 10, "7.30E+21"),
    (700, 70, "3.37E+97"), (700, 140, "5.03E+150"), (800, 5, "2.70E+12"), (800, 10, "2.80E+22"),
    (800, 80, "4.14E+111"), (900, 5, "4.87E+12"), (900, 10, "9.14E+22"), (900, 90, "5.13E+125"),
]


def test_parse_dense_example1():
    ins = parse_dense(EXAMPLE1_TEXT)
    assert (ins.n, ins.m, ins.p) == (5, 4, 2)
    assert ins.costs[0, 0] == 7 and ins.costs[4, 3] == 8


def test_parse_dense_degenerate():
    ins = parse_dense("1 2 1\n0 0\n")
    assert ins.costs.tolist() == [[0, 0]]


@pytest.mark.parametrize(
    "text, message",
    [
        ("2 2 2\n1 2\n3 4\n", "p must be < m"),
        ("2 2\n1 2\n", "malformed header"),
        ("a 2 1\n1 2\n", "header"),
        ("2 3 1\n1 2 3\n", "row count mismatch"),
        ("2 3 1\n1 2 3\n4 5\n", "row 2 has 2 entries"),
        ("1 2 1\n1 -2\n", "negative cost"),
        ("1 2 1\n1 x\n", "expected an integer"),
        ("", "malformed header"),
    ],
)
def test_parse_dense_errors(text, message):
    with pytest.raises(InstanceFormatError, match=message):
        parse_dense(text)


def test_parse_dense_p_override():
    assert parse_dense(EXAMPLE1_TEXT, p=3).p == 3


def test_parse_orlib_triangle():
    ins = parse_orlib("3 3 1\n1 2 3\n2 3 4\n1 3 10\n")
    assert ins.costs[0, 2] == 7 == ins.costs[2, 0]
    assert ins.costs.tolist() == [[0, 3, 7], [3, 0, 4], [7, 4, 0]]


def test_parse_orlib_single_edge():
    assert parse_orlib("2 1 1\n1 2 5\n").costs.tolist() == [[0, 5], [5, 0]]


def test_parse_orlib_duplicate_edge_last_wins():
    assert parse_orlib("2 2 1\n1 2 5\n2 1 3\n").costs.tolist() == [[0, 3], [3, 0]]


@pytest.mark.parametrize(
    "text, message",
    [
        ("3 1 1\n1 2 5\n", "disconnected graph"),
        ("3 1 1\n1 4 5\n", "out of range"),
        ("3 2 1\n1 2 5\n", "edge count mismatch"),
        ("3 1 1\n1 2\n", "expected 'u v cost'"),
        ("3 1 3\n1 2 5\n", "p must be < m"),
    ],
)
def test_parse_orlib_errors(text, message):
    with pytest.raises(InstanceFormatError, match=message):
        parse_orlib(text)


def orlib_text(rng, n, extra, p):
    # random spanning tree plus extra edges, so the graph is connected
    edges = [(int(rng.integers(0, v)), v, int(rng.integers(1, 50))) for v in range(1, n)]
    for _ in range(extra):
        u, v = rng.choice(n, size=2, replace=False)
        edges.append((int(u), int(v), int(rng.integers(1, 50))))
    lines = [f"{n} {len(edges)} {p}"] + [f"{u + 1} {v + 1} {c}" for u, v, c in edges]
    return "\n".join(lines) + "\n", edges


@pytest.mark.parametrize("seed", range(5))
def test_parse_orlib_matches_dijkstra(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(5, 40))
    text, edges = orlib_text(rng, n, int(rng.integers(0, 3 * n)), 2)
    graph = np.zeros((n, n))
    for u, v, c in edges:  # last occurrence wins, as in the parser
        graph[u, v] = graph[v, u] = c
    expected = shortest_path(graph, method="D", directed=False)
    d = parse_orlib(text).costs
    assert d.tolist() == expected.astype(int).tolist()
    assert (d == d.T).all() and (np.diag(d) == 0).all()
    for i, j, k in itertools.product(range(n), repeat=3):
        assert d[i, j] <= d[i, k] + d[k, j]


def test_load_instance_and_reference(tmp_path):
    assert load_instance(DATA / "example1.txt").name == "example1"
    assert read_reference(DATA / "example1.txt.opt") == 35
    bad = tmp_path / "x.opt"
    bad.write_text("1 2\n")
    with pytest.raises(InstanceFormatError):
        read_reference(bad)
    with pytest.raises(ValueError, match="unknown format"):
        load_instance(DATA / "example1.txt", "csv")


@pytest.mark.parametrize("m, p, printed", PMED_SEARCH_SPACE)
def test_search_space_formatting(m, p, printed):
    assert sci(binomial(m, p)) == printed


def test_sci_edge_cases():
    assert sci(0) == "0.00E+00"
    assert sci(9995) == "1.00E+04"
    assert sci(binomial(128, 16), digits=5) == "9.3343E+19"


def test_run_benchmark_example1():
    rec = run_benchmark(DATA / "example1.txt", GaConfig(nb=2, nt=4, evolve_limit=10), reference_cost=35)
    assert rec.best_cost == 35
    assert rec.approximation_ratio == 1
    assert rec.search_space == binomial(4, 2) == 6
    assert rec.instance_code == "example1"
    assert 1 <= rec.kernel_calls <= 10


def test_run_benchmark_without_reference():
    rec = run_benchmark(DATA / "example1.txt", GaConfig(nb=1, nt=2, evolve_limit=2))
    assert rec.reference_cost is None and rec.approximation_ratio is None


def test_run_benchmark_repeats_use_successive_seeds():
    rec = run_benchmark(DATA / "example1.txt", GaConfig(nb=1, nt=2, evolve_limit=3, seed=5), repeats=3)
    assert rec.seed == 5 and rec.best_cost == 35
    with pytest.raises(ValueError):
        run_benchmark(DATA / "example1.txt", GaConfig(), repeats=0)


def record(**kw):
    base = dict(
        instance_code="pmed1", n=100, m=100, p=5, search_space=binomial(100, 5), best_cost=5819,
        reference_cost=5819, approximation_ratio=Fraction(1), kernel_calls=1, wall_time=2.5, seed=0,
    )
    base.update(kw)
    return BenchmarkRecord(**base)


def test_table_report():
    text = format_table([record()])
    lines = text.splitlines()
    assert len(lines) == 3
    assert lines[0].split()[:2] == ["Instance", "n"]
    assert "7.53E+07" in lines[2] and "Optimal" in lines[2]
    assert emit_report([], "table").count("\n") == 2
    assert "0.999497487" in format_table([record(approximation_ratio=Fraction(999497487, 10**9))])


def test_structured_report():
    assert emit_report([], "structured") == ""
    with pytest.raises(ValueError):
        emit_report([], "xml")


@given(
    st.lists(
        st.builds(
            record,
            instance_code=st.text(max_size=8),
            best_cost=st.integers(0, 10**12),
            reference_cost=st.none() | st.integers(0, 10**12),
            approximation_ratio=st.none() | st.fractions(min_value=0, max_value=1),
            search_space=st.integers(1, 10**150),
            wall_time=st.floats(0, 1e6, allow_nan=False),
            seed=st.integers(0, 2**64 - 1),
        ),
        max_size=4,
    )
)
def test_structured_round_trip(records):
    text = emit_report(records, "structured")
    assert parse_structured(text) == records
    assert emit_report(parse_structured(text), "structured") == text
