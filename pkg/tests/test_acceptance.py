"""Acceptance suite: one test per criterion, one printed verdict line each.

Criteria:
  1 oracle equivalence on 100 seeded random multigraphs (< 60 s)
  2 closed-form cases (star, cycle, reciprocal pair, complete, path)
  3 power-law recovery on synthetic samples (< 30 s)
  4 hash/edgelist fidelity against the published listing hashes
  5 pipeline determinism across worker limits and crash isolation
  6 performance envelope: 100k-triple dataset end to end (< 60 s),
    binary reload at least 2x faster than edgelist rebuild at 1e6 edges
  7 correlation matrix structure, oracle match, affine invariance
"""

import time

import numpy as np

import oracles
from conftest import ROMA_EDGELIST_LINE, ROMA_LINE, graph_from

from rdftopo.config import Settings
from rdftopo.correlation import correlation_matrix, pearson
from rdftopo.graph import build_graph, load_binary, save_binary
from rdftopo.ingest import TermDictionary, hash_term, parse_hash, prepare_edgelist
from rdftopo.manifest import ManifestEntry
from rdftopo.measures import (
    MeasureReport,
    basic_counts,
    centralization,
    compute_report,
    degree_stats,
    fill,
    h_index,
    pagerank,
    pseudo_diameter,
    reciprocity,
)
from rdftopo.pipeline import run_batch
from rdftopo.stats import degree_distribution, dispersion, fit_powerlaw


def _verdict(number: int, name: str, ok: bool, detail: str = "") -> None:
    state = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"acceptance criterion {number} [{name}]: {state}{suffix}")
    assert ok, f"criterion {number} {name} failed {suffix}"


def test_criterion_1_oracle_equivalence():
    started = time.perf_counter()
    rng = np.random.default_rng(20170822)
    checked = 0
    ok = True
    for _ in range(100):
        n, edges = oracles.random_multigraph(rng, max_n=50, max_m=300)
        graph = graph_from(edges, n=n)
        m = len(edges)

        o_n, o_m, o_mu, o_mp = oracles.basic_counts(n, edges)
        counts = basic_counts(graph)
        ok &= counts == (o_n, o_m, o_mu, o_mp)

        d_in, d_out = oracles.degree_arrays(n, edges)
        total = [i + o for i, o in zip(d_in, d_out)]
        stats = degree_stats(graph)
        ok &= stats.d_max == max(total)
        ok &= stats.d_max_in == max(d_in)
        ok &= stats.d_max_out == max(d_out)
        ok &= abs(stats.z - m / n) <= 1e-9
        ok &= abs(stats.z_in - m / n) <= 1e-9
        ok &= abs(stats.z_out - m / n) <= 1e-9

        ok &= h_index(graph, "in") == oracles.h_index(d_in)
        ok &= h_index(graph, "total") == oracles.h_index(total)

        if n >= 3:
            ok &= abs(centralization(graph) - oracles.centralization(n, edges)) <= 1e-9

        o_p, o_pu = oracles.fill(n, edges)
        mine = fill(graph)
        ok &= abs(mine.p - o_p) <= 1e-9 and abs(mine.p_u - o_pu) <= 1e-9

        if m > 0:
            o_y, o_mbi = oracles.reciprocity(n, edges)
            recip = reciprocity(graph)
            ok &= recip.m_bi == o_mbi
            ok &= abs(recip.y - o_y) <= 1e-9

        for mode, degrees in (("in", d_in), ("out", d_out)):
            o_var, o_std, o_cv, o_mean = oracles.dispersion(degrees)
            disp = dispersion(degree_distribution(graph, mode))
            ok &= abs(disp.variance - o_var) <= 1e-9
            ok &= abs(disp.stddev - o_std) <= 1e-9
            if o_cv is None:
                ok &= disp.cv is None
            else:
                ok &= abs(disp.cv - o_cv) <= 1e-9

        # pseudo-diameter is a lower bound of the exact diameter
        ok &= pseudo_diameter(graph) <= oracles.exact_diameter(n, edges)

        expected = oracles.pagerank_dense(n, edges, damping=0.85)
        scores = pagerank(graph, damping=0.85).scores
        ok &= float(np.abs(scores - expected).max()) < 1e-6
        ok &= abs(scores.sum() - 1.0) <= 1e-6

        checked += 1
    elapsed = time.perf_counter() - started
    ok &= checked == 100 and elapsed < 60.0
    _verdict(1, "oracle equivalence", ok, f"{checked} graphs in {elapsed:.1f}s")


def test_criterion_2_closed_forms():
    ok = True
    for n in (3, 6, 25):
        star = graph_from([(0, leaf) for leaf in range(1, n)], n=n)
        ok &= abs(centralization(star) - 1.0) <= 1e-12

    for k in (3, 5, 12):
        cycle_edges = [(i, (i + 1) % k) for i in range(k)]
        cycle = graph_from(cycle_edges, n=k)
        ok &= abs(centralization(cycle) - 0.0) <= 1e-12
        ok &= reciprocity(cycle).y == 0.0
        ok &= pseudo_diameter(cycle) == oracles.exact_diameter(k, cycle_edges)

    reciprocal = graph_from([(0, 1), (1, 0), (1, 2), (2, 1)], n=3)
    ok &= reciprocity(reciprocal).y == 1.0

    n = 5
    complete = graph_from([(u, v) for u in range(n) for v in range(n)], n=n)
    ok &= fill(complete).p == 1.0

    for k in (1, 2, 7, 40):
        path = graph_from([(i, i + 1) for i in range(k)], n=k + 1)
        ok &= pseudo_diameter(path) == k

    _verdict(2, "closed-form cases", ok)


def test_criterion_3_powerlaw_recovery():
    started = time.perf_counter()
    rng = np.random.default_rng(20170822)
    large = oracles.sample_discrete_powerlaw(2.5, 1, 10**5, rng)
    fit_large = fit_powerlaw(large)
    ok = fit_large is not None
    if ok:
        ok &= 2.4 <= fit_large.alpha <= 2.6
        ok &= fit_large.d_min <= 2
    small = oracles.sample_discrete_powerlaw(2.5, 1, 10**4, rng)
    fit_small = fit_powerlaw(small)
    ok &= fit_small is not None and 2.2 <= fit_small.alpha <= 2.8
    elapsed = time.perf_counter() - started
    ok &= elapsed < 30.0
    detail = (
        f"alpha={fit_large.alpha:.3f} dmin={fit_large.d_min} "
        f"alpha_small={fit_small.alpha:.3f} in {elapsed:.1f}s"
        if fit_large and fit_small
        else "fit undefined"
    )
    _verdict(3, "power-law recovery", ok, detail)


def test_criterion_4_hash_edgelist_fidelity(tmp_path):
    prepare_edgelist([ROMA_LINE], tmp_path / "roma.edgelist", tmp_path / "roma.dict.tsv")
    rows = (tmp_path / "roma.edgelist").read_text().splitlines()
    ok = rows == [ROMA_EDGELIST_LINE]

    # field order: subject-hash, object-hash, predicate-hash
    s_hash, o_hash, p_hash = rows[0].split()
    ok &= parse_hash(s_hash) == hash_term(
        "<http://data.linkedopendata.it/musei/resource/Roma>"
    )
    ok &= parse_hash(o_hash) == hash_term('"Roma"')
    ok &= parse_hash(p_hash) == hash_term("<http://www.w3.org/2000/01/rdf-schema#label>")

    dictionary = TermDictionary.load(tmp_path / "roma.dict.tsv")
    ok &= len(dictionary) == 3
    for digest, term in dictionary.items():
        ok &= hash_term(term) == digest
        ok &= dictionary.lookup(digest) == term
    _verdict(4, "hash/edgelist fidelity", ok)


def test_criterion_5_pipeline_determinism_and_isolation(tmp_path):
    data = tmp_path / "data"
    data.mkdir()
    fixtures = {
        "alpha": b"<http://a> <http://p> <http://b> .\n"
                 b"<http://b> <http://p> <http://c> .\n",
        "beta": b"<http://x> <http://p> <http://y> .\n"
                b"<http://y> <http://p> <http://x> .\n",
        "gamma": b'<http://solo> <http://p> "leaf" .\n',
    }
    entries = []
    for name, content in fixtures.items():
        path = data / f"{name}.nt"
        path.write_bytes(content)
        entries.append(ManifestEntry(name, "test", str(path), "nt"))

    outputs = {}
    for label, workers in (("w1", 1), ("w4", 4)):
        run_batch(
            entries,
            tmp_path / label,
            Settings(workers_prepare=workers, workers_analyze=workers),
        )
        outputs[label] = {
            p.name: p.read_bytes() for p in (tmp_path / label / "reports").glob("*.json")
        }
    ok = outputs["w1"] == outputs["w4"] and len(outputs["w1"]) == 3

    corrupt = data / "broken.nt.gz"
    corrupt.write_bytes(b"\x1f\x8bnot gzip")
    mixed = entries + [ManifestEntry("broken", "test", str(corrupt), "nt")]
    ledger = run_batch(mixed, tmp_path / "mixed", Settings())
    ok &= ledger.count("analyzed") == 3 and ledger.count("failed") == 1
    ok &= ledger.records["broken"].failed_stage.startswith("prepare")
    mixed_reports = {
        p.name: p.read_bytes() for p in (tmp_path / "mixed" / "reports").glob("*.json")
    }
    ok &= mixed_reports == outputs["w1"]
    _verdict(5, "pipeline determinism and isolation", ok)


def _synthetic_ntriples(path, triples, vertices, rng):
    with open(path, "wb") as sink:
        for _ in range(triples):
            u = rng.integers(0, vertices)
            v = rng.integers(0, vertices)
            p = rng.integers(0, 40)
            sink.write(
                f"<http://example.org/v{u}> <http://example.org/p{p}> "
                f"<http://example.org/v{v}> .\n".encode()
            )


def test_criterion_6_performance_envelope(tmp_path):
    rng = np.random.default_rng(6)
    source = tmp_path / "synthetic.nt"
    _synthetic_ntriples(source, 100_000, 20_000, rng)

    started = time.perf_counter()
    with open(source, "rb") as lines:
        prepare_edgelist(lines, tmp_path / "s.edgelist", tmp_path / "s.dict.tsv")
    prepare_seconds = time.perf_counter() - started

    started = time.perf_counter()
    graph = build_graph(tmp_path / "s.edgelist")
    save_binary(graph, tmp_path / "s.graph")
    build_seconds = time.perf_counter() - started

    started = time.perf_counter()
    report = compute_report(graph, "synthetic")
    analyze_seconds = time.perf_counter() - started

    total = prepare_seconds + build_seconds + analyze_seconds
    ok = total < 60.0 and report.n > 0 and report.m == 100_000

    big_m = 1_000_000
    src = rng.integers(0, 2**63, size=big_m, dtype=np.uint64)
    dst = rng.integers(0, 2**63, size=big_m, dtype=np.uint64)
    attr = rng.integers(0, 2**63, size=big_m, dtype=np.uint64)
    big_edgelist = tmp_path / "big.edgelist"
    with open(big_edgelist, "w", newline="\n") as sink:
        sink.writelines(
            f"{s:016x} {d:016x} {a:016x}\n"
            for s, d, a in zip(src.tolist(), dst.tolist(), attr.tolist())
        )

    started = time.perf_counter()
    big_graph = build_graph(big_edgelist)
    rebuild_seconds = time.perf_counter() - started
    save_binary(big_graph, tmp_path / "big.graph")

    started = time.perf_counter()
    reloaded = load_binary(tmp_path / "big.graph")
    reload_seconds = time.perf_counter() - started

    ok &= reloaded.m == big_m
    ok &= reload_seconds * 2.0 <= rebuild_seconds
    _verdict(
        6,
        "performance envelope",
        ok,
        f"prepare={prepare_seconds:.2f}s build={build_seconds:.2f}s "
        f"analyze={analyze_seconds:.2f}s rebuild={rebuild_seconds:.2f}s "
        f"reload={reload_seconds:.2f}s",
    )


def test_criterion_7_correlation_module():
    rng = np.random.default_rng(52)
    ok = True
    for _ in range(30):
        x = rng.normal(size=100)
        y = rng.normal(size=100) + 0.3 * x
        mine = pearson(x, y)
        reference = oracles.pearson(x.tolist(), y.tolist())
        ok &= mine is not None and abs(mine - reference) <= 1e-12

    x = rng.normal(size=80)
    y = rng.normal(size=80)
    base = pearson(x, y)
    ok &= abs(pearson(x + 3.0, y) - base) <= 1e-12
    ok &= abs(pearson(x * 2.5, y) - base) <= 1e-12
    ok &= abs(pearson(x, y * 0.01 + 7.0) - base) <= 1e-12

    reports = []
    for i in range(10):
        m = int(rng.integers(10, 500))
        m_u = int(rng.integers(1, m + 1))
        reports.append(
            MeasureReport(
                dataset_id=f"ds{i}",
                n=int(rng.integers(5, 100)),
                m=m,
                m_u=m_u,
                m_p=m - m_u,
                d_max=int(rng.integers(1, 40)),
                z=float(rng.uniform(1, 9)),
                p=float(rng.uniform(0, 1)),
                y=float(rng.uniform(0, 1)),
                pseudo_diameter=int(rng.integers(1, 12)),
                alpha=float(rng.uniform(1.5, 3.5)),
            )
        )
    matrix = correlation_matrix(reports)
    diag_ok = np.allclose(np.diag(matrix.values), 1.0)
    finite = ~np.isnan(matrix.values)
    symmetric = np.array_equal(finite, finite.T) and np.allclose(
        matrix.values[finite], matrix.values.T[finite]
    )
    ok &= diag_ok and symmetric
    _verdict(7, "correlation module", ok)
