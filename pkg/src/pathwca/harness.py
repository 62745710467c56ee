"""Running methods on benchmarks, config files and multi-run campaigns."""
from __future__ import annotations

import json
import statistics
from dataclasses import fields
from pathlib import Path

from .baselines import SymexeParams, fuzz_inputs, symexe_search
from .bench.registry import BenchmarkEntry, lookup
from .errors import ConfigError, WcaError
from .evo import EvoParams, run as pathfuzz
from .program.model import Program
from .report import RunReport
from .symbolic import estimate_M

METHODS = ("pathfuzz", "fuzz", "symexe")


def parse_kv_lines(text: str) -> dict:
    """``key = value`` lines; blank lines and ``#`` comments are skipped."""
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"line {n}: expected key = value, got {line!r}")
        out[key.strip()] = value.strip()
    return out


def load_config(path) -> dict:
    try:
        return parse_kv_lines(Path(path).read_text())
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None


def parse_scale(items) -> dict:
    """``["N=16", "P=13"]`` or ``"N=16,P=13"`` -> {"N": 16, "P": 13}."""
    if isinstance(items, str):
        items = [items]
    out = {}
    for item in items or ():
        for part in item.split(","):
            part = part.strip()
            if not part:
                continue
            k, sep, v = part.partition("=")
            if not sep:
                raise ConfigError(f"scale must look like KEY=VALUE, got {part!r}")
            try:
                out[k.strip()] = int(v)
            except ValueError:
                raise ConfigError(f"scale value for {k.strip()} must be an integer") from None
    return out


def resolve_path_len(program: Program, entry: BenchmarkEntry | None, scale: dict, params: EvoParams,
                     force_estimate: bool = False) -> int:
    if params.M:
        return params.M
    if entry is not None and not force_estimate and entry.max_bits is not None:
        return entry.path_len(**scale)
    return estimate_M(program, params.estimate_samples, params.estimate_margin, params.seed)


def run_method(method: str, program: Program, params: EvoParams, entry: BenchmarkEntry | None = None,
               scale: dict | None = None, frontier_cap: int = 100_000, force_estimate: bool = False) -> RunReport:
    scale = dict(program.scale if scale is None else (entry.scale(**scale) if entry else scale))
    label = entry.id if entry else program.name
    if method == "pathfuzz":
        params.M = resolve_path_len(program, entry, scale, params, force_estimate)
        rep = pathfuzz(program, params, label=label, scale=scale)
    elif method == "fuzz":
        rep = fuzz_inputs(program, params, label=label, scale=scale)
    elif method == "symexe":
        sp = SymexeParams(budget_seconds=params.budget_seconds, frontier_cap=frontier_cap,
                          max_expansions=params.max_iters, target_cost=params.target_cost,
                          step_budget=params.step_budget)
        rep = symexe_search(program, sp, label=label, scale=scale)
        rep.seed = params.seed
    else:
        raise ConfigError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    if entry is not None:
        km = entry.known_max(scale)
        if km is not None:
            rep.notes["known_max"] = km
    return rep


_CAMPAIGN_KEYS = {"methods", "programs", "seeds", "out_dir", "frontier_cap", "repetitions"}


def _split_list(v: str) -> list[str]:
    return [x.strip() for x in v.split(",") if x.strip()]


def campaign(config: dict | str | Path, out_dir=None) -> dict:
    """Run every (method, program, seed) cell and aggregate the results.

    Config keys: ``methods``, ``programs``, ``seeds`` (comma lists), optional
    ``scale.<program> = K=V,...``, ``out_dir``, ``frontier_cap``, plus any
    EvoParams field used as a shared setting. A failing cell is recorded and
    the campaign goes on.
    """
    if not isinstance(config, dict):
        config = load_config(config)
    cfg = dict(config)
    methods = _split_list(cfg.get("methods", "pathfuzz"))
    programs = _split_list(cfg.get("programs", ""))
    seeds = [int(s) for s in _split_list(cfg.get("seeds", "0"))]
    reps = int(cfg.get("repetitions", 1))
    if reps < 1:
        raise ConfigError("repetitions must be at least 1")
    if not programs:
        raise ConfigError("campaign needs at least one program")
    for m in methods:
        if m not in METHODS:
            raise ConfigError(f"unknown method {m!r}")
    scales = {k[len("scale."):]: parse_scale(v) for k, v in cfg.items() if k.startswith("scale.")}
    shared = {k: v for k, v in cfg.items() if k not in _CAMPAIGN_KEYS and not k.startswith("scale.")}
    EvoParams.from_mapping(shared)  # fail early on bad settings
    out = Path(out_dir or cfg.get("out_dir", "campaign_out"))
    out.mkdir(parents=True, exist_ok=True)
    frontier_cap = int(cfg.get("frontier_cap", 100_000))
    entries = {p: lookup(p) for p in programs}

    cells = []
    for method in methods:
        for prog in programs:
            for seed in seeds:
                for r in range(reps):
                    cells.append((method, prog, seed + r * 1_000_003 if reps > 1 else seed))
    runs = []
    for method, prog, seed in cells:
        entry = entries[prog]
        params = EvoParams.from_mapping({**shared, "seed": seed})
        name = f"{method}_{entry.id}_seed{seed}.json"
        try:
            program = entry.build(**scales.get(prog, {}))
            rep = run_method(method, program, params, entry, scales.get(prog, {}), frontier_cap)
            (out / name).write_text(rep.to_json() + "\n")
            runs.append({"method": method, "program": entry.id, "seed": seed, "ok": True,
                         "best_cost": rep.best_cost, "time_to_best_ms": rep.time_to_best_ms, "file": name})
        except (WcaError, ValueError) as e:
            runs.append({"method": method, "program": entry.id, "seed": seed, "ok": False,
                         "error": f"{type(e).__name__}: {e}"})
    agg = aggregate(runs)
    result = {"runs": runs, "aggregate": agg}
    (out / "aggregate.json").write_text(json.dumps(result, indent=2, sort_keys=True) + "\n")
    (out / "aggregate.csv").write_text(aggregate_csv(agg))
    return result


def aggregate(runs: list[dict]) -> list[dict]:
    groups: dict = {}
    for r in runs:
        groups.setdefault((r["method"], r["program"]), []).append(r)
    rows = []
    for (method, prog), rs in groups.items():
        ok = [r for r in rs if r["ok"]]
        costs = [r["best_cost"] for r in ok]
        ttb = [r["time_to_best_ms"] for r in ok if r.get("time_to_best_ms") is not None]
        rows.append({
            "method": method, "program": prog, "runs": len(rs), "failed": len(rs) - len(ok),
            "mean_best": statistics.fmean(costs) if costs else None,
            "max_best": max(costs) if costs else None,
            "min_best": min(costs) if costs else None,
            "min_time_to_best_ms": min(ttb) if ttb else None,
        })
    return rows


def aggregate_csv(rows: list[dict]) -> str:
    cols = ["program", "method", "runs", "failed", "mean_best", "max_best", "min_best", "min_time_to_best_ms"]
    lines = [",".join(cols)]
    for r in rows:
        lines.append(",".join("" if r[c] is None else str(r[c]) for c in cols))
    return "\n".join(lines) + "\n"


def params_field_names() -> list[str]:
    return [f.name for f in fields(EvoParams)]
