"""Timing of the two enumerations against their output size."""

from __future__ import annotations

import csv
import io
import random
import time
from dataclasses import dataclass

from .model import OutcomeSupport
from .rays import sharp_inequalities
from .vertices import enumerate_vertices

MODES = ("vertices", "inequalities")


@dataclass(frozen=True)
class BenchRecord:
    n: int
    mode: str
    terms: int
    wall_time_ns: int

    @property
    def time_per_term_ns(self) -> float:
        return self.wall_time_ns / self.terms if self.terms else 0.0


def _integer_law(n: int, seed: int = 0) -> list[int]:
    """Seeded law scaled to integers with equal arm masses (exact and fast)."""
    rng = random.Random(seed)
    arms = [[rng.randrange(1, 2**16) for _ in range(2 * n)] for _ in range(2)]
    t0, t1 = sum(arms[0]), sum(arms[1])
    return [x * t1 for x in arms[0]] + [x * t0 for x in arms[1]]


def _dot(values, p) -> int:
    return sum([a * b for a, b in zip(values, p) if a])


def _run_vertices(n: int) -> int:
    """Enumerate every vertex and evaluate ``v.p`` on a fixed law."""
    p = _integer_law(n)
    count = 0
    best = None
    for v in enumerate_vertices(OutcomeSupport.range(n)):
        val = _dot(v.values, p)
        if best is None or val > best:
            best = val
        count += 1
    return count


def _run_inequalities(n: int) -> int:
    p = _integer_law(n)
    count = 0
    for ineq in sharp_inequalities(n):
        _dot(ineq.ray.values, p)
        count += 1
    return count


_RUNNERS = {"vertices": _run_vertices, "inequalities": _run_inequalities}


def bench_one(n: int, mode: str, repetitions: int = 1) -> BenchRecord:
    """Best-of-``repetitions`` wall time for one ``(n, mode)`` cell."""
    runner = _RUNNERS[mode]
    best = None
    terms = 0
    for _ in range(max(1, repetitions)):
        t0 = time.perf_counter_ns()
        terms = runner(n)
        dt = time.perf_counter_ns() - t0
        best = dt if best is None else min(best, dt)
    return BenchRecord(n, mode, terms, best)


@dataclass(frozen=True)
class BenchConfig:
    n_min: int = 2
    n_max: int = 9
    repetitions: int = 1
    modes: tuple = MODES

    def __post_init__(self):
        if not 2 <= self.n_min <= self.n_max:
            raise ValueError(f"need 2 <= n_min <= n_max, got {self.n_min}..{self.n_max}")
        unknown = set(self.modes) - set(MODES)
        if unknown:
            raise ValueError(f"unknown bench mode(s): {sorted(unknown)}")


def run_config(cfg: BenchConfig) -> list[BenchRecord]:
    return [
        bench_one(n, mode, cfg.repetitions)
        for mode in cfg.modes
        for n in range(cfg.n_min, cfg.n_max + 1)
    ]


def run_bench(n_min: int = 2, n_max: int = 9, repetitions: int = 1, modes=MODES) -> list[BenchRecord]:
    return run_config(BenchConfig(n_min, n_max, repetitions, tuple(modes)))


def records_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "mode", "terms", "wall_time_ns", "time_per_term_ns"])
    for r in records:
        w.writerow([r.n, r.mode, r.terms, r.wall_time_ns, f"{r.time_per_term_ns:.1f}"])
    return buf.getvalue()


def per_term_ratio(records, mode: str, n_lo: int = 4, n_hi: int = 9) -> float:
    """Largest over smallest time per term among ``n_lo <= n <= n_hi``."""
    vals = [r.time_per_term_ns for r in records if r.mode == mode and n_lo <= r.n <= n_hi]
    return max(vals) / min(vals)
