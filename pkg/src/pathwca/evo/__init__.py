"""Evolutionary search over path strings."""
from .engine import (
    EvoParams, Evaluator, Individual, Population, init_population, make_offspring, run, select_next,
)
from .operators import as_bits, crossover, mutate, to_str
from .selection import crowdingness, rank_asc, rank_desc, sim, split_counts, weight

__all__ = [
    "EvoParams", "Evaluator", "Individual", "Population", "as_bits", "crossover", "crowdingness",
    "init_population", "make_offspring", "mutate", "rank_asc", "rank_desc", "run", "select_next",
    "sim", "split_counts", "to_str", "weight",
]
