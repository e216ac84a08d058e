"""Dataset generation, aggregate statistics and the timing benchmark.

Everything here is seed-deterministic except the measured durations.  A
master :class:`random.Random` draws a dimension and a 63-bit sample seed per
attempt; the sample seed alone reproduces the polytope through
:func:`~polyident.polytope.config_from_seed`.
"""

from __future__ import annotations

import csv
import gc
import io
import logging
import random
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .automorphism import SearchBudgetExceeded
from .identifiability import InvalidPolytope, brute_force_identifiability, check_identifiability
from .io import FormatError, load_json, polytope_from_json, polytope_to_json, write_json
from .polytope import (
    Polytope,
    PolytopeError,
    config_from_seed,
    enumerate_vertices,
    random_polytope_hrep,
    validate_polytope,
)

log = logging.getLogger(__name__)

__all__ = [
    "SCHEMA_VERSION",
    "CSV_HEADER",
    "BenchRecord",
    "DatasetSummary",
    "GenResult",
    "random_polytope",
    "generate_dataset",
    "dataset_stats",
    "sample_with_vertex_count",
    "run_bench",
    "bench_csv",
    "bench_medians",
]

SCHEMA_VERSION = 1
CSV_HEADER = ("m", "dim", "method", "elapsed_ns", "verdict", "seed")
SEED_BITS = 63


def random_polytope(dim: int, seed: int, label: str | None = None) -> Polytope:
    """The polytope of the generator config drawn from ``seed``, with the
    config stored in ``meta`` for provenance."""
    config = config_from_seed(dim, seed)
    p = enumerate_vertices(random_polytope_hrep(config), label=label)
    return Polytope(p.vertex_matrix, label, {"config": config.to_json()})


@dataclass
class DatasetSummary:
    total: int = 0
    identifiable: int = 0
    skipped: int = 0
    per_dim: dict = field(default_factory=dict)
    skipped_items: list = field(default_factory=list)

    @property
    def fraction(self) -> float | None:
        return self.identifiable / self.total if self.total else None

    def add(self, dim: int, identifiable: bool) -> None:
        self.total += 1
        self.identifiable += identifiable
        d = self.per_dim.setdefault(dim, [0, 0])
        d[0] += 1
        d[1] += identifiable

    def skip(self, name: str, reason: str) -> None:
        self.skipped += 1
        self.skipped_items.append({"item": name, "reason": reason})

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "total": self.total,
            "identifiable": self.identifiable,
            "skipped": self.skipped,
            "fraction": self.fraction,
            "per_dim": {
                str(dim): {"total": t, "identifiable": k, "fraction": k / t}
                for dim, (t, k) in sorted(self.per_dim.items())
            },
            "skipped_items": self.skipped_items,
        }


@dataclass
class GenResult:
    written: list[Path]
    summary: DatasetSummary
    attempts: int


def _draw(rng: random.Random, dims: range) -> tuple[int, int]:
    return rng.choice(dims), rng.getrandbits(SEED_BITS)


def generate_dataset(
    dims: range,
    count: int,
    seed: int,
    out_dir,
    vertex_cap: int = 30,
    max_attempts: int | None = None,
) -> GenResult:
    """Write ``count`` random polytopes to ``out_dir`` as Polytope JSON.

    Samples with more than ``vertex_cap`` vertices or without full rank are
    logged and replaced by fresh draws, up to ``max_attempts`` draws in
    total (default ``20 * count``).  The returned summary is a stub: it
    counts the written files and the skips, not verdicts.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    if not dims or dims.start < 2:
        raise ValueError("dimensions must be at least 2")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if max_attempts is None:
        max_attempts = 20 * count
    rng = random.Random(seed)
    summary = DatasetSummary()
    written = []
    attempts = 0
    while len(written) < count and attempts < max_attempts:
        attempts += 1
        dim, sub = _draw(rng, dims)
        name = f"dim{dim}-seed{sub}"
        try:
            p = random_polytope(dim, sub, label=f"poly-{len(written):05d}")
        except PolytopeError as exc:
            log.info("skip %s: %s", name, exc)
            summary.skip(name, type(exc).__name__)
            continue
        if p.num_vertices > vertex_cap:
            log.info("skip %s: %d vertices over cap %d", name, p.num_vertices, vertex_cap)
            summary.skip(name, "VertexCap")
            continue
        res = validate_polytope(p)
        if not res.ok:
            log.info("skip %s: %s", name, ",".join(res.reasons))
            summary.skip(name, "Degenerate")
            continue
        path = out / f"poly-{len(written):05d}.json"
        write_json(path, polytope_to_json(p))
        written.append(path)
        summary.total += 1
        summary.per_dim.setdefault(dim, [0, 0])[0] += 1
    if len(written) < count:
        log.warning("only %d of %d polytopes after %d attempts", len(written), count, attempts)
    return GenResult(written, summary, attempts)


def _check_file(path: str):
    """(dim, verdict) for one file, or (None, reason) when it cannot be checked."""
    try:
        p = polytope_from_json(load_json(path))
        return p.dim, check_identifiability(p).identifiable
    except (OSError, FormatError, InvalidPolytope, SearchBudgetExceeded, ValueError) as exc:
        return None, f"{type(exc).__name__}: {exc}"


def dataset_stats(in_dir, workers: int = 1) -> DatasetSummary:
    """Check every ``*.json`` file under ``in_dir`` (sorted by name)."""
    d = Path(in_dir)
    if not d.is_dir():
        raise NotADirectoryError(str(in_dir))
    files = sorted(str(f) for f in d.glob("*.json"))
    if workers > 1 and len(files) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_check_file, files, chunksize=8))
    else:
        results = [_check_file(f) for f in files]
    summary = DatasetSummary()
    for f, (dim, verdict) in zip(files, results):
        if dim is None:
            log.warning("skip %s: %s", f, verdict)
            summary.skip(Path(f).name, verdict)
        else:
            summary.add(dim, verdict)
    return summary


# ---------------------------------------------------------------------------
# benchmark


@dataclass(frozen=True)
class BenchRecord:
    m: int
    dim: int
    method: str
    elapsed_ns: int
    verdict: bool
    seed: int

    def row(self) -> list:
        return [self.m, self.dim, self.method, self.elapsed_ns, str(self.verdict).lower(), self.seed]


def sample_with_vertex_count(
    m: int, dims: range, rng: random.Random, max_retries: int
) -> tuple[Polytope, int] | None:
    """Draw polytopes until one has exactly ``m`` vertices and full rank."""
    allowed = range(max(dims.start, 2), min(dims.stop, m))  # need m > n
    if not allowed:
        return None
    for _ in range(max_retries):
        dim, sub = _draw(rng, allowed)
        try:
            p = random_polytope(dim, sub)
        except PolytopeError:
            continue
        if p.num_vertices == m and validate_polytope(p).ok:
            return p, sub
    return None


def _timed(fn, p):
    # the collector is paused so a collection does not land inside one
    # measurement; reports time the decision call only
    enabled = gc.isenabled()
    gc.collect()
    gc.disable()
    try:
        return fn(p)
    finally:
        if enabled:
            gc.enable()


def run_bench(
    min_m: int,
    max_m: int,
    trials: int,
    seed: int,
    dims: range = range(3, 7),
    brute_cap: int = 10,
    max_retries: int = 5000,
) -> list[BenchRecord]:
    """Time both methods on ``trials`` random polytopes per vertex count.

    Brute force runs only where ``m <= brute_cap``.  The two verdicts are
    compared whenever both exist and a mismatch is an error.
    """
    if min_m < 4:
        raise ValueError("min-m must be at least 4")
    if max_m > brute_cap + 1:
        raise ValueError(f"max-m {max_m} exceeds brute-force cap + 1 = {brute_cap + 1}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = random.Random(seed)
    records = []
    for m in range(min_m, max_m + 1):
        for t in range(trials):
            hit = sample_with_vertex_count(m, dims, rng, max_retries)
            if hit is None:
                log.warning("no polytope with %d vertices after %d draws; trial %d skipped", m, max_retries, t)
                continue
            p, sub = hit
            gen = _timed(check_identifiability, p)
            records.append(BenchRecord(m, p.dim, "generator_based", gen.elapsed_ns, gen.identifiable, sub))
            if m <= brute_cap:
                bf = _timed(lambda q: brute_force_identifiability(q, cap=brute_cap), p)
                if bf.identifiable != gen.identifiable:
                    raise AssertionError(f"verdicts differ for dim {p.dim} seed {sub}")
                records.append(BenchRecord(m, p.dim, "brute_force", bf.elapsed_ns, bf.identifiable, sub))
    return records


def bench_csv(records, timing: bool = True) -> str:
    """CSV text; with ``timing=False`` the elapsed column is blanked so
    payloads can be compared across runs."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        row = r.row()
        if not timing:
            row[3] = ""
        w.writerow(row)
    return buf.getvalue()


def bench_medians(records) -> dict[tuple[str, int], float]:
    groups: dict = {}
    for r in records:
        groups.setdefault((r.method, r.m), []).append(r.elapsed_ns)
    return {k: statistics.median(v) for k, v in sorted(groups.items())}

