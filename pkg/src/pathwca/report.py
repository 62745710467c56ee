"""Run reports and best-cost curves shared by every search method."""
from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import asdict, dataclass, field

SCHEMA_VERSION = 1
# fields whose values depend on the wall clock
WALLCLOCK_FIELDS = ("wall_time", "solver_time_share", "time_to_best_ms")


class Curve:
    """Best cost over time: a point per improvement plus a periodic heartbeat."""

    def __init__(self, heartbeat: float = 1.0, clock=time.perf_counter):
        self.clock = clock
        self.t0 = clock()
        self.heartbeat = heartbeat
        self.points: list[list] = []
        self.best: int | None = None
        self._last_t = self.t0

    def elapsed(self) -> float:
        return self.clock() - self.t0

    def update(self, best: int, evals: int):
        now = self.clock()
        if self.best is None or best > self.best:
            self.best = best
            self.points.append([int((now - self.t0) * 1000), best, evals])
            self._last_t = now
        elif now - self._last_t >= self.heartbeat:
            self.points.append([int((now - self.t0) * 1000), best, evals])
            self._last_t = now

    def close(self, best: int, evals: int):
        now = self.clock()
        if self.best is None or best > self.best:
            self.best = best
        if not self.points or self.points[-1][1:] != [self.best, evals]:
            self.points.append([int((now - self.t0) * 1000), self.best, evals])

    def time_to_best(self) -> int | None:
        if self.best is None:
            return None
        for t, b, _ in self.points:
            if b == self.best:
                return t
        return None


@dataclass
class RunReport:
    method: str
    program: str
    scale: dict
    params: dict
    best_cost: int
    best_input: dict | None = None
    best_path: str | None = None
    curve: list = field(default_factory=list)
    solver: dict = field(default_factory=dict)
    sat_rate: float = 0.0
    evals: int = 0
    generations: int = 0
    errors: int = 0
    solver_budget_exceeded: int = 0
    seed: int | None = None
    workers: int = 1
    wall_time: float = 0.0
    time_to_best_ms: int | None = None
    solver_time_share: float = 0.0
    notes: dict = field(default_factory=dict)
    schema: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, indent=2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    def curve_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["elapsed_ms", "best_cost", "evals"])
        w.writerows(self.curve)
        return buf.getvalue()

    @classmethod
    def from_dict(cls, d: dict) -> "RunReport":
        return cls(**d)


def mask_wallclock(report: dict) -> dict:
    """Copy of a report dict with every wall-clock dependent value neutralized.

    Heartbeat points (no improvement over the previous point) are dropped and
    the remaining curve times are zeroed.
    """
    out = json.loads(json.dumps(report))
    for k in WALLCLOCK_FIELDS:
        if k in out:
            out[k] = 0
    solver = out.get("solver") or {}
    if "solve_time" in solver:
        solver["solve_time"] = 0
    curve, prev = [], None
    for t, best, evals in out.get("curve", []):
        if prev is None or best != prev:
            curve.append([0, best, evals])
        prev = best
    out["curve"] = curve
    return out
