import pytest

from pathwca.bench.checks import annotated_ids, brute_force_max, check_annotations, input_space_size
from pathwca.bench.registry import lookup, registry
from pathwca.concrete import concrete_cost, run_concrete, ConcreteInput
from pathwca.errors import NotFound, Unsupported
from pathwca.program import validate
from pathwca.symbolic import enumerate_paths

ENTRIES = registry()
WITH_MAX = [e for e in ENTRIES if e.known_max(e.scale()) is not None]


def test_corpus_shape():
    assert len(ENTRIES) == 15
    assert len({e.id for e in ENTRIES}) == 15
    assert {e.id for e in ENTRIES} >= {"1-1", "1-8", "2-1", "3-1", "3-6"}


@pytest.mark.parametrize("key, want", [("1-2", "QuickSort"), ("quicksort", "QuickSort"), ("QUICKSORT", "QuickSort"),
                                       ("memoryfill", "MemoryFill"), ("3-4", "Alternate0")])
def test_lookup(key, want):
    assert lookup(key).name == want


def test_lookup_unknown():
    with pytest.raises(NotFound) as ei:
        lookup("bogosort")
    assert "bogosort" in str(ei.value)


def test_scale_limits():
    qs = lookup("1-2")
    assert qs.scale() == {"N": 16}
    assert qs.scale(N=5) == {"N": 5}
    with pytest.raises(Unsupported):
        qs.scale(N=10_000)
    with pytest.raises(Unsupported):
        qs.scale(K=3)


@pytest.mark.parametrize("entry", ENTRIES, ids=lambda e: e.id)
def test_default_build_is_valid(entry):
    p = entry.build()
    assert validate(p).ok
    assert entry.path_len() >= 1


@pytest.mark.parametrize("entry", WITH_MAX, ids=lambda e: e.id)
def test_witness_realizes_known_max(entry):
    s = entry.scale()
    p = entry.build()
    w = entry.witness(s)
    assert w is not None
    assert run_concrete(p, ConcreteInput.from_flat(p.input_spec, w)).total_cost == entry.known_max(s)


@pytest.mark.parametrize("entry", WITH_MAX, ids=lambda e: e.id)
def test_known_max_matches_enumeration_small(entry):
    small = {k: v for k, v in {"N": 4, "P": 3}.items() if k in entry.limits}
    p = entry.build(**small)
    paths = enumerate_paths(p, limit=50_000)
    assert max(o.cost for _, o in paths) == entry.known_max(entry.scale(**small))
    # no path consumes more bits than the advertised bound
    assert max(o.m for _, o in paths) <= entry.path_len(**small)


@pytest.mark.parametrize("entry", [e for e in ENTRIES if e.annotated], ids=lambda e: e.id)
def test_annotations_sound_small(entry):
    small = {"N": 4} if entry.limits["N"][0] <= 4 else {}
    res = check_annotations(entry, limit=20_000, samples=300, **small)
    assert res["annotated"], "entry claims annotations but has none"
    assert not res["violations"]


def test_annotate_flag_strips_markers():
    e = lookup("3-3")
    assert annotated_ids(e.builder(N=4))
    assert not annotated_ids(e.builder(N=4, annotate=False))


def test_brute_force_max():
    e = lookup("1-1")
    p = e.build(N=4)
    assert input_space_size(p) == 4 ** 4
    assert brute_force_max(p) == e.known_max(e.scale(N=4))
    assert brute_force_max(e.build(), limit=10) is None
    assert concrete_cost(p, [4, 3, 2, 1]) == 6
