"""Evolutionary engine: encoding, both init strategies, operators, generation loop.

An individual is conceptually a concatenation of one-hot blocks, one block
per requested act, each selecting exactly one candidate slot.  Internally a
block is stored as the selected position within the act's candidate list
(``None`` when the act has no candidates), which makes the one-hot property
hold by construction.  Crossover cuts only at block boundaries for the same
reason, so no repair operator is ever needed.
"""

from __future__ import annotations

import random
from bisect import bisect_left
from dataclasses import dataclass, field
from enum import Enum
from statistics import fmean
from typing import Callable, Iterable, Sequence

from .constraints import optimal_act_order
from .fitness import compute_penalties, fitness
from .model import IncompatibilityRule, Schedule, ScheduleRequest, TimeSlot


class UnschedulableError(Exception):
    """No act in the request has a single candidate slot."""


class Variant(str, Enum):
    ORDERED = "ordered"
    UNORDERED = "unordered"


@dataclass(frozen=True)
class SearchSpace:
    """Per-act candidate slot lists, each sorted by (start, id)."""

    per_act_slots: tuple[tuple[TimeSlot, ...], ...]

    @property
    def act_count(self) -> int:
        return len(self.per_act_slots)


@dataclass(frozen=True)
class Individual:
    """One gene per act: the selected position in that act's candidate block."""

    genes: tuple[int | None, ...]


@dataclass(frozen=True)
class GAConfig:
    population: int = 100
    generations: int = 200
    tournament_k: int = 7
    mutation_rate: float = 0.10
    variant: Variant = Variant.ORDERED
    seed: int = 0

    def __post_init__(self) -> None:
        if self.population < 1:
            raise ValueError("population must be at least 1")
        if self.generations < 0:
            raise ValueError("generations must be non-negative")
        if not 1 <= self.tournament_k <= self.population:
            raise ValueError("tournament_k must be in [1, population]")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("mutation_rate must be in [0, 1]")


@dataclass(frozen=True)
class GenerationStats:
    generation: int
    best_fitness: float
    mean_fitness: float
    best_individual: Individual = field(repr=False)


@dataclass(frozen=True)
class EvolveResult:
    best: Schedule
    history: tuple[GenerationStats, ...]


def filter_search_space(
    slots: Iterable[TimeSlot], request: ScheduleRequest
) -> SearchSpace:
    """Candidate slots per act: exam match, on/after start day, preference filters.

    Empty blocks are legal; the act then surfaces as a missing-slot penalty
    downstream rather than an error here.
    """
    slots = list(slots)
    facilities = request.preferred_facilities
    practitioners = request.preferred_practitioners
    blocks = []
    for exam in request.acts:
        block = [
            slot
            for slot in slots
            if slot.exam == exam
            and slot.day >= request.start_day
            and (facilities is None or slot.facility in facilities)
            and (practitioners is None or slot.practitioner in practitioners)
        ]
        block.sort(key=lambda slot: (slot.start, slot.id))
        blocks.append(tuple(block))
    return SearchSpace(per_act_slots=tuple(blocks))


def uniform_genes(space: SearchSpace, rng: random.Random) -> tuple[int | None, ...]:
    """One independent uniform draw per act block; empty blocks stay unassigned.

    Shared by the unordered initializer and the random-choice baseline so
    the two are the same distribution by construction.
    """
    return tuple(
        rng.randrange(len(block)) if block else None for block in space.per_act_slots
    )


def _ordered_genes(
    space: SearchSpace,
    order: Sequence[int],
    block_starts: Sequence[Sequence[int]],
    rng: random.Random,
) -> tuple[int | None, ...]:
    # Walk acts in precedence order; prefer candidates starting at or after the
    # previously selected slot's end, falling back to the whole block.
    genes: list[int | None] = [None] * space.act_count
    prev_end: int | None = None
    for act in order:
        block = space.per_act_slots[act]
        if not block:
            continue
        lo = 0
        if prev_end is not None:
            lo = bisect_left(block_starts[act], prev_end)
            if lo >= len(block):
                lo = 0
        gene = lo + rng.randrange(len(block) - lo)
        genes[act] = gene
        prev_end = block[gene].end
    return tuple(genes)


def init_population(
    space: SearchSpace,
    config: GAConfig,
    order: Sequence[int],
    rng: random.Random | None = None,
) -> list[Individual]:
    """Build the initial population for the configured variant.

    UNORDERED draws every gene independently; ORDERED samples acts along
    ``order`` (from ``constraints.optimal_act_order``) so each slot tends to
    start after the previous act's slot ends.
    """
    if rng is None:
        rng = random.Random(config.seed)
    if config.variant is Variant.UNORDERED:
        return [Individual(uniform_genes(space, rng)) for _ in range(config.population)]
    block_starts = [[slot.start for slot in block] for block in space.per_act_slots]
    return [
        Individual(_ordered_genes(space, order, block_starts, rng))
        for _ in range(config.population)
    ]


def decode(
    individual: Individual, space: SearchSpace, request: ScheduleRequest
) -> Schedule:
    """Map genes to slots; unassigned genes produce no assignment."""
    if len(individual.genes) != space.act_count:
        raise ValueError(
            f"individual has {len(individual.genes)} genes for {space.act_count} acts"
        )
    assignments = []
    for act, gene in enumerate(individual.genes):
        if gene is None:
            continue
        block = space.per_act_slots[act]
        if not 0 <= gene < len(block):
            raise ValueError(f"gene {gene} out of range for act {act}")
        assignments.append((act, block[gene]))
    return Schedule(assignments=tuple(assignments))


def tournament_select(
    population: Sequence[Individual],
    fitnesses: Sequence[float],
    config: GAConfig,
    rng: random.Random,
) -> Individual:
    """Fittest of ``tournament_k`` uniform draws with replacement.

    Fitness ties go to the lowest population index.
    """
    if not population:
        raise ValueError("cannot select from an empty population")
    n = len(population)
    best_idx = rng.randrange(n)
    for _ in range(config.tournament_k - 1):
        idx = rng.randrange(n)
        if fitnesses[idx] > fitnesses[best_idx] or (
            fitnesses[idx] == fitnesses[best_idx] and idx < best_idx
        ):
            best_idx = idx
    return population[best_idx]


def crossover(
    parent_a: Individual, parent_b: Individual, rng: random.Random
) -> tuple[Individual, Individual]:
    """Single-point crossover at an act-block boundary.

    Cutting between blocks keeps every block one-hot, so children are always
    valid.  Single-act parents have no interior boundary and pass through.
    """
    n = len(parent_a.genes)
    if n < 2:
        return parent_a, parent_b
    cut = rng.randrange(1, n)
    child_a = Individual(parent_a.genes[:cut] + parent_b.genes[cut:])
    child_b = Individual(parent_b.genes[:cut] + parent_a.genes[cut:])
    return child_a, child_b


def mutate(
    child: Individual,
    space: SearchSpace,
    config: GAConfig,
    rng: random.Random,
) -> Individual:
    """With probability ``mutation_rate``, redraw one uniformly chosen act's gene."""
    if rng.random() >= config.mutation_rate:
        return child
    act = rng.randrange(len(child.genes))
    block = space.per_act_slots[act]
    if not block:
        return child
    genes = list(child.genes)
    genes[act] = rng.randrange(len(block))
    return Individual(tuple(genes))


def next_generation(
    population: Sequence[Individual],
    fitnesses: Sequence[float],
    space: SearchSpace,
    config: GAConfig,
    rng: random.Random,
) -> list[Individual]:
    """Breed population-1 children by tournament/crossover/mutation, then add the elite."""
    children: list[Individual] = []
    while len(children) < config.population - 1:
        parent_a = tournament_select(population, fitnesses, config, rng)
        parent_b = tournament_select(population, fitnesses, config, rng)
        child_a, child_b = crossover(parent_a, parent_b, rng)
        children.append(mutate(child_a, space, config, rng))
        children.append(mutate(child_b, space, config, rng))
    del children[config.population - 1 :]
    elite = population[max(range(len(population)), key=fitnesses.__getitem__)]
    children.append(elite)
    return children


def make_evaluator(
    space: SearchSpace,
    request: ScheduleRequest,
    rules: Iterable[IncompatibilityRule],
) -> Callable[[Individual], float]:
    """Fitness of an individual: decode, score penalties, invert."""
    rules = tuple(rules)

    def evaluate(individual: Individual) -> float:
        schedule = decode(individual, space, request)
        return fitness(compute_penalties(schedule, request, rules))

    return evaluate


def evolve(
    space: SearchSpace,
    request: ScheduleRequest,
    rules: Iterable[IncompatibilityRule],
    config: GAConfig,
) -> EvolveResult:
    """Run the full generation loop and return the best-ever schedule plus telemetry.

    Each iteration scores the current population, records its stats, and
    breeds the next one; elitism copies the generation's best forward, so
    recorded best fitness never decreases.  ``history[0]`` describes the
    initial population.
    """
    if all(not block for block in space.per_act_slots):
        raise UnschedulableError("no candidate slots for any requested act")
    rules = tuple(rules)
    rng = random.Random(config.seed)
    if config.variant is Variant.ORDERED:
        order: Sequence[int] = optimal_act_order(request.acts, rules).order
    else:
        order = range(space.act_count)
    population = init_population(space, config, order, rng)
    evaluate = make_evaluator(space, request, rules)

    history: list[GenerationStats] = []
    best_ever: Individual | None = None
    best_ever_fitness = float("-inf")
    for generation in range(config.generations):
        fitnesses = [evaluate(individual) for individual in population]
        best_idx = max(range(len(fitnesses)), key=fitnesses.__getitem__)
        history.append(
            GenerationStats(
                generation=generation,
                best_fitness=fitnesses[best_idx],
                mean_fitness=fmean(fitnesses),
                best_individual=population[best_idx],
            )
        )
        if fitnesses[best_idx] > best_ever_fitness:
            best_ever = population[best_idx]
            best_ever_fitness = fitnesses[best_idx]
        population = next_generation(population, fitnesses, space, config, rng)

    if best_ever is None:  # generations == 0: fall back to the initial population
        fitnesses = [evaluate(individual) for individual in population]
        best_ever = population[max(range(len(fitnesses)), key=fitnesses.__getitem__)]

    return EvolveResult(
        best=decode(best_ever, space, request), history=tuple(history)
    )
