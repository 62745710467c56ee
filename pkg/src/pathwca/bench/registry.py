"""The benchmark corpus: ids, default scales, known maxima and witnesses."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ..errors import NotFound, Unsupported
from ..program.model import Program
from . import programs as P


@dataclass(frozen=True)
class BenchmarkEntry:
    id: str
    name: str
    builder: Callable[..., Program]
    default_scale: dict
    # scale key -> (min, max) accepted by build()
    limits: dict
    # analytic worst cost for a scale, None where no closed form is known
    known_max: Callable[[dict], int | None] = lambda s: None
    # flat input realizing known_max, when there is one
    witness: Callable[[dict], list | None] = lambda s: None
    # upper bound on the bits any path consumes; a safe path length M
    max_bits: Callable[[dict], int] | None = None
    note: str = ""
    annotated: bool = False
    aliases: tuple = field(default_factory=tuple)

    def scale(self, **overrides) -> dict:
        s = dict(self.default_scale)
        for k, v in overrides.items():
            if k not in self.limits:
                raise Unsupported(f"{self.name} has no scale parameter {k!r}")
            s[k] = int(v)
        for k, (lo, hi) in self.limits.items():
            if not lo <= s[k] <= hi:
                raise Unsupported(f"{self.name}: {k}={s[k]} outside supported range [{lo}, {hi}]")
        return s

    def build(self, **overrides) -> Program:
        return self.builder(**self.scale(**overrides))

    def path_len(self, **overrides) -> int | None:
        if self.max_bits is None:
            return None
        return max(1, self.max_bits(self.scale(**overrides)))


def _tri(n):
    return n * (n - 1) // 2


def _heap_max(s):
    # a strictly decreasing sequence sifts every new key up to the root
    return sum((k + 1).bit_length() - 1 for k in range(1, s["N"]))


def _alternating(s):
    return [0 if i % 2 == 0 else 1 for i in range(s["N"])]


_SORT = {"N": (1, 256)}
_GRAPH = {"N": (2, 16)}

_ENTRIES = [
    BenchmarkEntry(
        "1-1", "InsertionSort", P.insertion_sort, {"N": 16}, _SORT,
        known_max=lambda s: _tri(s["N"]),
        witness=lambda s: list(range(s["N"], 0, -1)),
        max_bits=lambda s: _tri(s["N"]) + s["N"],
        note="one unit per shifted element; reversed input shifts every pair",
        annotated=True, aliases=("insertion_sort",),
    ),
    BenchmarkEntry(
        "1-2", "QuickSort", P.quicksort, {"N": 16}, _SORT,
        known_max=lambda s: s["N"] * (s["N"] + 1) // 2 - 1 if s["N"] > 1 else 0,
        witness=lambda s: list(range(s["N"], 0, -1)),
        max_bits=lambda s: s["N"] * (s["N"] - 1),
        note="n units per call on a segment of length n >= 2; sorted input peels one element per call",
        annotated=True, aliases=("quicksort",),
    ),
    BenchmarkEntry(
        "1-3", "HeapInsertion", P.heap_insertion, {"N": 16}, {"N": (1, 256)},
        known_max=_heap_max,
        witness=lambda s: list(range(255, 255 - s["N"], -1)),
        max_bits=lambda s: sum((k + 1).bit_length() for k in range(s["N"])),
        note="one unit per sift-up swap; decreasing keys climb to the root",
        annotated=True, aliases=("heap_insertion",),
    ),
    BenchmarkEntry(
        "1-4", "Dijkstra", P.dijkstra, {"N": 8}, _GRAPH,
        max_bits=lambda s: 2 * s["N"] ** 2,
        note="one unit per successful relaxation on a dense weighted graph",
        aliases=("dijkstra",),
    ),
    BenchmarkEntry(
        "1-5", "BSTInsertion", P.bst_insertion, {"N": 16}, {"N": (1, 256)},
        known_max=lambda s: _tri(s["N"]),
        witness=lambda s: list(range(s["N"])),
        max_bits=lambda s: _tri(s["N"]),
        note="one unit per visited node; sorted keys build a chain",
        annotated=True, aliases=("bst_insertion",),
    ),
    BenchmarkEntry(
        "1-6", "BellmanFord", P.bellman_ford, {"N": 8}, _GRAPH,
        max_bits=lambda s: s["N"] ** 3,
        note="one unit per successful relaxation over N-1 rounds",
        aliases=("bellman_ford",),
    ),
    BenchmarkEntry(
        "1-7", "BellmanFordQueue", P.bellman_ford_queue, {"N": 8}, _GRAPH,
        max_bits=lambda s: s["N"] ** 3,
        note="queue-driven relaxation; one unit per successful relaxation",
        aliases=("bellman_ford_queue", "spfa"),
    ),
    BenchmarkEntry(
        "1-8", "HashTable", P.hash_table, {"N": 8, "P": 13}, {"N": (1, 8), "P": (2, 13)},
        known_max=lambda s: _tri(s["N"]),
        witness=lambda s: [s["P"] * i for i in range(s["N"])],
        max_bits=lambda s: s["N"] * (s["P"] - 1) + _tri(s["N"]),
        note="chained buckets, key mod P; distinct keys in one bucket compare with every earlier key",
        aliases=("hash_table",),
    ),
    BenchmarkEntry(
        "2-1", "InsertionSortJumps", P.insertion_sort_jumps, {"N": 16}, _SORT,
        known_max=lambda s: s["N"] * s["N"] + s["N"] - 1,
        witness=lambda s: list(range(s["N"], 0, -1)),
        max_bits=lambda s: _tri(s["N"]) + s["N"],
        note="one unit per evaluated guard and per outer iteration",
        annotated=True, aliases=("insertion_sort_jumps", "InsertionSort'"),
    ),
    BenchmarkEntry(
        "3-1", "IsPalindrome", P.is_palindrome, {"N": 20}, {"N": (1, 1024)},
        known_max=lambda s: s["N"],
        witness=lambda s: [0] * s["N"],
        max_bits=lambda s: s["N"],
        note="full scan, stops at the first mismatch",
        aliases=("is_palindrome",),
    ),
    BenchmarkEntry(
        "3-2", "IsPalindromeHalf", P.is_palindrome_half, {"N": 20}, {"N": (1, 1024)},
        known_max=lambda s: s["N"] // 2,
        witness=lambda s: [0] * s["N"],
        max_bits=lambda s: s["N"] // 2,
        note="scans the first half only",
        annotated=True, aliases=("is_palindrome_half", "IsPalindrome'"),
    ),
    BenchmarkEntry(
        "3-3", "MemoryFill", P.memory_fill, {"N": 20}, {"N": (1, 1024)},
        known_max=lambda s: s["N"],
        witness=lambda s: [1] * s["N"],
        max_bits=lambda s: s["N"],
        note="one unit per copied non-zero element",
        annotated=True, aliases=("memory_fill",),
    ),
    BenchmarkEntry(
        "3-4", "Alternate0", P.alternate0, {"N": 20}, {"N": (1, 1024)},
        known_max=lambda s: 6 * s["N"],
        witness=_alternating,
        max_bits=lambda s: s["N"],
        note="six units per zero/non-zero flip starting from a non-zero predecessor",
        annotated=True, aliases=("alternate0",),
    ),
    BenchmarkEntry(
        "3-5", "DFS", P.dfs, {"N": 10}, _GRAPH,
        known_max=lambda s: s["N"] * s["N"],
        witness=lambda s: [1] * (s["N"] * (s["N"] - 1) // 2),
        max_bits=lambda s: s["N"] ** 2,
        note="every visited vertex scans all N candidates",
        aliases=("dfs",),
    ),
    BenchmarkEntry(
        "3-6", "BFS", P.bfs, {"N": 10}, _GRAPH,
        known_max=lambda s: s["N"] * s["N"],
        witness=lambda s: [1] * (s["N"] * (s["N"] - 1) // 2),
        max_bits=lambda s: s["N"] ** 2,
        note="every dequeued vertex scans all N candidates",
        aliases=("bfs",),
    ),
]


def registry() -> list[BenchmarkEntry]:
    return list(_ENTRIES)


def _norm(s: str) -> str:
    return s.lower().replace("_", "").replace("-", "").replace("'", "prime")


def lookup(key: str) -> BenchmarkEntry:
    """Find an entry by id ("1-2"), name or alias, case-insensitively."""
    for e in _ENTRIES:
        if key == e.id:
            return e
    k = _norm(key)
    for e in _ENTRIES:
        if k in {_norm(e.name), *(_norm(a) for a in e.aliases)}:
            return e
    raise NotFound(f"unknown benchmark {key!r}; known ids: {', '.join(e.id for e in _ENTRIES)}")


def build(entry: BenchmarkEntry | str, **overrides) -> Program:
    if isinstance(entry, str):
        entry = lookup(entry)
    return entry.build(**overrides)
