import json

import pytest

from polyident.experiments import (
    CSV_HEADER,
    bench_csv,
    bench_medians,
    dataset_stats,
    generate_dataset,
    random_polytope,
    run_bench,
)
from polyident.io import polytope_to_json, write_json
from polyident.polytope import GeneratorConfig, config_from_seed

from corpus import cube, l1_ball, triangle


def test_random_polytope_carries_config():
    p = random_polytope(4, 77)
    assert GeneratorConfig.from_json(p.meta["config"]) == config_from_seed(4, 77)


def test_gen_deterministic(tmp_path):
    a = generate_dataset(range(3, 4), 5, 7, tmp_path / "a")
    b = generate_dataset(range(3, 4), 5, 7, tmp_path / "b")
    assert len(a.written) == 5
    assert [p.read_bytes() for p in a.written] == [p.read_bytes() for p in b.written]


def test_gen_vertex_cap_skips(tmp_path):
    res = generate_dataset(range(4, 5), 3, 1, tmp_path, vertex_cap=6)
    assert all(json.loads(p.read_text())["vertices"].__len__() <= 6 for p in res.written)
    assert res.summary.skipped >= 1


def test_gen_count_zero(tmp_path):
    with pytest.raises(ValueError):
        generate_dataset(range(3, 4), 0, 1, tmp_path)


def test_stats_fixtures(tmp_path):
    for p in [l1_ball(3), cube(3), triangle()]:
        write_json(tmp_path / f"{p.label}.json", polytope_to_json(p))
    s = dataset_stats(tmp_path)
    assert (s.total, s.identifiable, s.skipped) == (3, 2, 0)
    assert s.fraction == pytest.approx(2 / 3)
    assert s.to_json()["per_dim"]["2"] == {"total": 1, "identifiable": 0, "fraction": 0.0}


def test_stats_empty(tmp_path):
    s = dataset_stats(tmp_path)
    assert s.total == 0
    assert s.to_json()["fraction"] is None


def test_stats_counts_bad_files_as_skipped(tmp_path):
    (tmp_path / "bad.json").write_text("{")
    write_json(tmp_path / "flat.json", {"vertices": [[1, 1], [2, 2], [3, 3]]})
    s = dataset_stats(tmp_path)
    assert s.total == 0 and s.skipped == 2


def test_stats_workers_match_serial(tmp_path):
    generate_dataset(range(3, 5), 12, 3, tmp_path)
    assert dataset_stats(tmp_path, workers=2).to_json() == dataset_stats(tmp_path).to_json()


def test_bench_row_accounting():
    recs = run_bench(6, 8, 2, seed=5)
    for m in (6, 7, 8):
        for method in ("generator_based", "brute_force"):
            assert sum(r.m == m and r.method == method for r in recs) == 2
    assert all(r.elapsed_ns >= 0 for r in recs)
    text = bench_csv(recs)
    assert text.splitlines()[0] == ",".join(CSV_HEADER)
    assert len(text.splitlines()) == 1 + len(recs)
    assert set(bench_medians(recs)) == {(me, m) for me in ("generator_based", "brute_force") for m in (6, 7, 8)}


def test_bench_payload_deterministic():
    a = run_bench(5, 6, 2, seed=9)
    b = run_bench(5, 6, 2, seed=9)
    assert bench_csv(a, timing=False) == bench_csv(b, timing=False)


def test_bench_skips_brute_force_above_cap():
    recs = run_bench(5, 6, 1, seed=2, brute_cap=5)
    assert {(r.m, r.method) for r in recs} == {(5, "generator_based"), (5, "brute_force"), (6, "generator_based")}


@pytest.mark.parametrize("kwargs", [dict(min_m=3, max_m=6), dict(min_m=6, max_m=12), dict(min_m=6, max_m=6, trials=0)])
def test_bench_rejects(kwargs):
    kwargs.setdefault("trials", 1)
    with pytest.raises(ValueError):
        run_bench(seed=0, **kwargs)
