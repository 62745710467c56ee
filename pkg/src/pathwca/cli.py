"""Command line entry point: ``python -m pathwca --program 1-2 --method pathfuzz``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from ._accel import backend
from .bench.registry import lookup, registry
from .errors import ConfigError, NotFound, ProgramError, Unsupported, WcaError
from .evo import EvoParams
from .harness import METHODS, campaign, load_config, parse_scale, run_method
from .program import format_program, parse_program

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3
log = logging.getLogger("pathwca")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pathwca", description="Worst-case cost search over path strings.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({backend()})")
    p.add_argument("--program", help="benchmark id or name (see --list)")
    p.add_argument("--program-file", help="program in the text format instead of a benchmark")
    p.add_argument("--scale", action="append", default=[], metavar="K=V", help="scale override, repeatable")
    p.add_argument("--method", choices=METHODS, default=None)
    p.add_argument("--mapping", choices=("default", "skip-unsat"), default=None)
    p.add_argument("--budget-seconds", type=float)
    p.add_argument("--max-iters", type=int)
    p.add_argument("--psize", type=int)
    p.add_argument("--offspring", type=int)
    p.add_argument("--r1", type=float)
    p.add_argument("--r2", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--path-len", type=int, help="path string length M")
    p.add_argument("--estimate-m", action="store_true", help="estimate M from random inputs")
    p.add_argument("--target-cost", help="stop once this cost is reached; 'known' uses the analytic maximum")
    p.add_argument("--frontier-cap", type=int, default=100_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--config", help="key = value file with default settings")
    p.add_argument("--campaign", help="run a campaign described by a key = value file")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--list", action="store_true", help="list the benchmarks and exit")
    p.add_argument("--export-program", action="store_true", help="print the program text and exit")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


_PARAM_FLAGS = {
    "budget_seconds": "budget_seconds", "max_iters": "max_iters", "psize": "psize", "offspring": "offspring",
    "r1": "r1", "r2": "r2", "beta": "beta", "gamma": "gamma", "path_len": "M",
    "seed": "seed", "workers": "workers", "mapping": "mode",
}


def _list_text() -> str:
    rows = []
    for e in registry():
        s = e.scale()
        km = e.known_max(s)
        scale = ",".join(f"{k}={v}" for k, v in s.items())
        rows.append(f"{e.id:5} {e.name:20} {scale:12} known_max={'-' if km is None else km:<5} {e.note}")
    return "\n".join(rows)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.list:
            print(_list_text())
            return EXIT_OK
        if args.campaign:
            res = campaign(args.campaign, args.out)
            print(json.dumps(res["aggregate"], indent=2))
            return EXIT_OK if all(r["ok"] for r in res["runs"]) else EXIT_RUNTIME

        settings = load_config(args.config) if args.config else {}
        settings.pop("frontier_cap", None)
        method = args.method or settings.pop("method", "pathfuzz")
        settings.pop("method", None)
        scale = parse_scale(args.scale or settings.pop("scale", ""))
        settings.pop("scale", None)
        for flag, key in _PARAM_FLAGS.items():
            v = getattr(args, flag)
            if v is not None:
                settings[key] = v
        if method not in METHODS:
            raise ConfigError(f"unknown method {method!r}")
        target = args.target_cost if args.target_cost is not None else settings.pop("target_cost", None)
        params = EvoParams.from_mapping(settings)

        entry = None
        if args.program_file:
            program = parse_program(Path(args.program_file).read_text())
        elif args.program:
            entry = lookup(args.program)
            program = entry.build(**scale)
        else:
            raise ConfigError("--program or --program-file is required")
        if args.export_program:
            _emit(format_program(program), args.out)
            return EXIT_OK
        if target is not None:
            if str(target).strip().lower() == "known":
                km = entry.known_max(entry.scale(**scale)) if entry else None
                if km is None:
                    raise ConfigError("no known maximum for this program")
                params.target_cost = km
            else:
                try:
                    params.target_cost = int(target)
                except ValueError:
                    raise ConfigError(f"bad --target-cost {target!r}") from None
        log.info("running %s on %s (%s backend)", method, entry.id if entry else program.name, backend())
        rep = run_method(method, program, params, entry, scale if entry else None,
                         args.frontier_cap, args.estimate_m)
    except (ConfigError, NotFound, ProgramError, Unsupported) as e:
        print(f"pathwca: error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"pathwca: error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except WcaError as e:
        print(f"pathwca: runtime error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    _emit(rep.curve_csv() if args.format == "csv" else rep.to_json() + "\n", args.out)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
