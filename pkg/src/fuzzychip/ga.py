"""Hardware-style genetic algorithm engine.

Integer-only GA mirroring a six-block micro-architecture: control loop,
fitness evaluation, roulette-wheel selection, switchable crossover and
mutation operators, and a stopping-criteria observer, all fed by 16-bit
maximal-length LFSR streams. Four independent streams are used in a fixed
order: population init, then selection / crossover / mutation, so every run
is reproducible from its four seeds.

Genomes are unsigned ints of genom_lngt bits (bit 0 = LSB); scores are
unsigned ints of score_sz bits.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Sequence

LFSR_TAPS = (16, 15, 13, 4)  # maximal-length polynomial, period 2^16 - 1

SINGLE_POINT = "single_point"
TWO_POINT = "two_point"
UNIFORM = "uniform"
CROSS_METHODS = (SINGLE_POINT, TWO_POINT, UNIFORM)

SINGLE_BIT = "single_bit"
BIT_FLIP = "bit_flip"
MUT_METHODS = (SINGLE_BIT, BIT_FLIP)

MAX_GEN = "max_gen"
FITNESS_LIMIT = "fitness_limit"


class AllZeroFitness(ValueError):
    """Roulette selection is undefined when every score is zero."""


# ---- LFSR random streams ----


def lfsr_step(state: int) -> tuple[int, int]:
    """One Fibonacci shift: output = bit shifted off the LSB end, feedback
    enters at the MSB. Taps are polynomial exponents, so the feedback XORs
    the bits at positions (tap mod 16); tap 16 reads the outgoing bit, which
    keeps the map invertible. The emitted stream obeys
    s[k+16] = s[k+15] ^ s[k+13] ^ s[k+4] ^ s[k]."""
    fb = 0
    for tap in LFSR_TAPS:
        fb ^= (state >> (tap % 16)) & 1
    return (state >> 1) | (fb << 15), state & 1


def lfsr_next(state: int) -> tuple[int, int]:
    """Sixteen single-bit steps; the emitted bits assemble LSB-first into the
    output word. Returns (new state, word). State 0 is absorbing: rejected."""
    if not 0 < state < (1 << 16):
        raise ValueError(f"LFSR state must be a nonzero 16-bit value, got {state}")
    word = 0
    for i in range(16):
        state, bit = lfsr_step(state)
        word |= bit << i
    return state, word


class Lfsr16:
    """Mutable word-at-a-time wrapper around lfsr_next."""

    def __init__(self, seed: int):
        if not 0 < seed < (1 << 16):
            raise ValueError(f"seed must be a nonzero 16-bit value, got {seed}")
        self.state = seed

    def next_word(self) -> int:
        self.state, word = lfsr_next(self.state)
        return word

    def next_words(self, count: int) -> list[int]:
        return [self.next_word() for _ in range(count)]


def _words_needed(bits: int) -> int:
    return (bits + 15) // 16


def _draw_bits(rng: Lfsr16, bits: int) -> int:
    """Assemble a bits-wide value from 16-bit words, first word lowest."""
    value = 0
    for i in range(_words_needed(bits)):
        value |= rng.next_word() << (16 * i)
    return value & ((1 << bits) - 1)


# ---- configuration and population ----


@dataclass(frozen=True)
class GaConfig:
    """Engine parameters. Defaults are the 16-bit / 32-individual profile.

    mr is compared against (word mod 2^mut_res), so the per-genome mutation
    probability is mr / 2^mut_res. cross_method / mut_method accept one name
    or a per-generation schedule (the last entry persists).
    """

    genom_lngt: int = 16
    score_sz: int = 16
    pop_sz: int = 32
    scaling_factor_res: int = 4
    elite: int = 2
    mr: int = 80
    mut_res: int = 8
    cross_method: str | tuple[str, ...] = SINGLE_POINT
    mut_method: str | tuple[str, ...] = SINGLE_BIT
    max_gen: int = 100
    fitness_limit: int | None = None
    seeds: tuple[int, int, int, int] = (0xACE1, 0x1234, 0x5EED, 0x0F0F)

    def problems(self) -> list[str]:
        out = []
        if self.genom_lngt < 2:
            out.append("genom_lngt must be >= 2")
        if self.score_sz < 1:
            out.append("score_sz must be >= 1")
        if self.pop_sz < 2 or self.pop_sz % 2:
            out.append("pop_sz must be even and >= 2")
        if not 0 <= self.elite < self.pop_sz:
            out.append("elite must be in 0 .. pop_sz - 1")
        if not 1 <= self.scaling_factor_res <= 16:
            out.append("scaling_factor_res must be 1..16")
        if not 1 <= self.mut_res <= 16:
            out.append("mut_res must be 1..16")
        if not 0 <= self.mr < (1 << self.mut_res):
            out.append("mr must be in 0 .. 2^mut_res - 1")
        if self.max_gen < 0:
            out.append("max_gen must be >= 0")
        for name in _as_schedule(self.cross_method):
            if name not in CROSS_METHODS:
                out.append(f"unknown cross_method {name!r}")
        for name in _as_schedule(self.mut_method):
            if name not in MUT_METHODS:
                out.append(f"unknown mut_method {name!r}")
        if len(self.seeds) != 4 or any(not 0 < s < (1 << 16) for s in self.seeds):
            out.append("seeds must be four nonzero 16-bit values")
        return out

    def validate(self) -> None:
        problems = self.problems()
        if problems:
            raise ValueError("; ".join(problems))


def _as_schedule(method: str | Sequence[str]) -> tuple[str, ...]:
    if isinstance(method, str):
        return (method,)
    return tuple(method)


def method_for(method: str | Sequence[str], generation: int) -> str:
    """Per-generation method schedule lookup; the last entry persists."""
    schedule = _as_schedule(method)
    return schedule[min(generation, len(schedule) - 1)]


@dataclass(frozen=True)
class Population:
    genomes: tuple[int, ...]
    scores: tuple[int, ...]

    def best_index(self) -> int:
        """Highest score, ties broken by lower index."""
        best = 0
        for i, s in enumerate(self.scores):
            if s > self.scores[best]:
                best = i
        return best


@dataclass(frozen=True)
class GaResult:
    best_genome: int
    best_score: int
    generations_run: int
    stop_reason: str


# ---- operators ----


def roulette_select(pop: Population, r: int, res: int) -> int:
    """Roulette wheel: threshold T = floor(r * sum / 2^res), pick the smallest
    index whose cumulative score strictly exceeds T. r must be < 2^res."""
    total = sum(pop.scores)
    if total == 0:
        raise AllZeroFitness("cannot spin a roulette wheel over all-zero scores")
    if not 0 <= r < (1 << res):
        raise ValueError(f"r must be in 0 .. 2^{res} - 1, got {r}")
    threshold = (r * total) >> res
    acc = 0
    for i, s in enumerate(pop.scores):
        acc += s
        if acc > threshold:
            return i
    raise AssertionError("unreachable: threshold < total by construction")


def crossover(
    p1: int, p2: int, bits: int, method: str, rng: Lfsr16
) -> tuple[int, int]:
    """Two parents to two children. Draw budget is fixed per method:
    single_point 1 word, two_point 2 words, uniform ceil(bits / 16) words."""
    if method == SINGLE_POINT:
        k = 1 + rng.next_word() % (bits - 1)  # cut in 1 .. bits - 1
        mask = (1 << k) - 1  # bits below the cut swap
    elif method == TWO_POINT:
        k1 = 1 + rng.next_word() % (bits - 1)
        k2 = 1 + rng.next_word() % (bits - 1)
        lo, hi = min(k1, k2), max(k1, k2)
        mask = ((1 << hi) - 1) ^ ((1 << lo) - 1)  # middle segment swaps
    elif method == UNIFORM:
        mask = _draw_bits(rng, bits)  # set bits swap
    else:
        raise ValueError(f"unknown cross_method {method!r}")
    c1 = (p1 & ~mask) | (p2 & mask)
    c2 = (p2 & ~mask) | (p1 & mask)
    return c1, c2


def mutate(g: int, bits: int, method: str, mr: int, mut_res: int, rng: Lfsr16) -> int:
    """Gate draw first: mutate only if (word mod 2^mut_res) < mr.

    single_bit then flips one rng-chosen bit; bit_flip re-tests every bit
    position with a fresh draw (so a gated genome may still come back
    unchanged). Draw budget when gated: 1 word or `bits` words."""
    gate = rng.next_word() & ((1 << mut_res) - 1)
    if gate >= mr:
        return g
    if method == SINGLE_BIT:
        return g ^ (1 << (rng.next_word() % bits))
    if method == BIT_FLIP:
        for b in range(bits):
            if (rng.next_word() & ((1 << mut_res) - 1)) < mr:
                g ^= 1 << b
        return g
    raise ValueError(f"unknown mut_method {method!r}")


def apply_elitism(
    old: Population,
    child_genomes: Sequence[int],
    child_scores: Sequence[int],
    elite: int,
) -> Population:
    """Elites first (top scores from the previous generation, ties by lower
    index, carried with their known scores), then the children."""
    order = sorted(range(len(old.genomes)), key=lambda i: (-old.scores[i], i))
    keep = order[:elite]
    genomes = tuple(old.genomes[i] for i in keep) + tuple(child_genomes)
    scores = tuple(old.scores[i] for i in keep) + tuple(child_scores)
    return Population(genomes, scores)


# ---- generation loop ----


def _clamp_score(value: int, score_sz: int) -> int:
    return min(max(int(value), 0), (1 << score_sz) - 1)


def step_generation(
    pop: Population,
    cfg: GaConfig,
    fitness_fn: Callable[[int], int],
    rngs: tuple[Lfsr16, Lfsr16, Lfsr16],
    generation: int = 0,
) -> Population:
    """One generation: select pop_sz - elite parents, pair them consecutively,
    cross, mutate, evaluate, then prepend the elites.

    rngs are the (selection, crossover, mutation) streams. Selection consumes
    exactly one word per parent whether or not the all-zero-fitness fallback
    (uniform pick, index = word mod pop_sz) is active. With an odd parent
    count the final parent skips crossover and is mutated as-is.
    """
    sel_rng, cross_rng, mut_rng = rngs
    n_children = cfg.pop_sz - cfg.elite
    zero_wheel = sum(pop.scores) == 0

    parents = []
    for _ in range(n_children):
        word = sel_rng.next_word()
        if zero_wheel:
            parents.append(pop.genomes[word % cfg.pop_sz])
        else:
            r = word & ((1 << cfg.scaling_factor_res) - 1)
            parents.append(pop.genomes[roulette_select(pop, r, cfg.scaling_factor_res)])

    cross = method_for(cfg.cross_method, generation)
    children = []
    for i in range(0, len(parents) - 1, 2):
        c1, c2 = crossover(parents[i], parents[i + 1], cfg.genom_lngt, cross, cross_rng)
        children.extend((c1, c2))
    if len(parents) % 2:
        children.append(parents[-1])

    mut = method_for(cfg.mut_method, generation)
    children = [
        mutate(c, cfg.genom_lngt, mut, cfg.mr, cfg.mut_res, mut_rng) for c in children
    ]
    scores = [_clamp_score(fitness_fn(c), cfg.score_sz) for c in children]
    return apply_elitism(pop, children, scores, cfg.elite)


def init_population(cfg: GaConfig, fitness_fn, rng: Lfsr16) -> Population:
    """Generation 0 drawn from the init stream, one genome at a time."""
    genomes = tuple(_draw_bits(rng, cfg.genom_lngt) for _ in range(cfg.pop_sz))
    scores = tuple(_clamp_score(fitness_fn(g), cfg.score_sz) for g in genomes)
    return Population(genomes, scores)


def run(
    cfg: GaConfig,
    fitness_fn: Callable[[int], int],
    on_generation: Callable[[int, Population], None] | None = None,
) -> GaResult:
    """Full GA run. The observer checks fitness_limit before max_gen, so a
    satisfied limit on generation 0 stops before any stepping."""
    cfg.validate()
    streams = [Lfsr16(s) for s in cfg.seeds]
    pop = init_population(cfg, fitness_fn, streams[0])
    rngs = (streams[1], streams[2], streams[3])

    generation = 0
    while True:
        if on_generation is not None:
            on_generation(generation, pop)
        best = pop.best_index()
        if cfg.fitness_limit is not None and pop.scores[best] >= cfg.fitness_limit:
            return GaResult(pop.genomes[best], pop.scores[best], generation, FITNESS_LIMIT)
        if generation >= cfg.max_gen:
            return GaResult(pop.genomes[best], pop.scores[best], generation, MAX_GEN)
        pop = step_generation(pop, cfg, fitness_fn, rngs, generation)
        generation += 1


# ---- serialization ----


def config_to_dict(cfg: GaConfig) -> dict:
    def fold(method):
        sched = _as_schedule(method)
        return sched[0] if len(sched) == 1 else list(sched)

    return {
        "genom_lngt": cfg.genom_lngt,
        "score_sz": cfg.score_sz,
        "pop_sz": cfg.pop_sz,
        "scaling_factor_res": cfg.scaling_factor_res,
        "elite": cfg.elite,
        "mr": cfg.mr,
        "mut_res": cfg.mut_res,
        "cross_method": fold(cfg.cross_method),
        "mut_method": fold(cfg.mut_method),
        "max_gen": cfg.max_gen,
        "fitness_limit": cfg.fitness_limit,
        "seeds": list(cfg.seeds),
    }


def config_from_dict(data: dict) -> GaConfig:
    def unfold(value, fallback):
        if value is None:
            return fallback
        if isinstance(value, str):
            return value
        return tuple(str(v) for v in value)

    try:
        limit = data.get("fitness_limit")
        return GaConfig(
            genom_lngt=int(data.get("genom_lngt", 16)),
            score_sz=int(data.get("score_sz", 16)),
            pop_sz=int(data.get("pop_sz", 32)),
            scaling_factor_res=int(data.get("scaling_factor_res", 4)),
            elite=int(data.get("elite", 2)),
            mr=int(data.get("mr", 80)),
            mut_res=int(data.get("mut_res", 8)),
            cross_method=unfold(data.get("cross_method"), SINGLE_POINT),
            mut_method=unfold(data.get("mut_method"), SINGLE_BIT),
            max_gen=int(data.get("max_gen", 100)),
            fitness_limit=None if limit is None else int(limit),
            seeds=tuple(int(s) for s in data.get("seeds", GaConfig.seeds)),
        )
    except (TypeError, ValueError) as exc:
        raise ValueError(f"malformed GA config document: {exc}") from exc


def load_config(path) -> GaConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))


def dump_config(cfg: GaConfig, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(config_to_dict(cfg), fh, indent=2, sort_keys=True)
        fh.write("\n")
