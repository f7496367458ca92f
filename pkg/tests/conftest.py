"""Shared generators for the test suite.

random_valid_spec builds controller specs from a random peak family with
plateau extensions capped at half the neighbor gap, which guarantees every
structural invariant (ordering, coverage, overlap degree 2, no shared
plateau points) by construction, plus a nonzero membership envelope so the
weighted-average denominator never vanishes.
"""

import random

from fuzzychip.flc import (
    MIN,
    PROD,
    STANDARD,
    FlcSpec,
    MembershipFunction,
    validate_spec,
)
from fuzzychip.ga import Lfsr16


def random_partition(rnd: random.Random, in_bits: int, m: int):
    top = (1 << in_bits) - 1
    # m distinct peaks anchored at the universe ends
    interior = rnd.sample(range(1, top), m - 2) if m > 2 else []
    peaks = [0] + sorted(interior) + [top]
    mfs = []
    for i in range(m):
        a = peaks[i - 1] if i > 0 else 0
        d = peaks[i + 1] if i < m - 1 else top
        # plateau extensions stay strictly inside the neighbor gap
        left_room = (peaks[i] - a - 1) // 2 if i > 0 else 0
        right_room = (d - peaks[i] - 1) // 2 if i < m - 1 else 0
        b = peaks[i] - rnd.randint(0, max(0, left_room))
        c = peaks[i] + rnd.randint(0, max(0, right_room))
        mfs.append(MembershipFunction(a, b, c, d))
    return tuple(mfs)


def random_valid_spec(
    rnd: random.Random,
    n=None,
    m=None,
    in_bits=None,
    alpha_bits=None,
    and_method=None,
) -> FlcSpec:
    n = n if n is not None else rnd.randint(1, 3)
    m = m if m is not None else rnd.randint(2, 5)
    in_bits = in_bits if in_bits is not None else rnd.randint(6, 9)
    alpha_bits = alpha_bits if alpha_bits is not None else rnd.randint(4, 8)
    cons_bits = rnd.randint(4, 8)
    out_bits = cons_bits + rnd.randint(0, 4)
    spec = FlcSpec(
        in_bits=in_bits,
        out_bits=out_bits,
        alpha_bits=alpha_bits,
        cons_bits=cons_bits,
        partitions=tuple(random_partition(rnd, in_bits, m) for _ in range(n)),
        singletons=tuple(
            rnd.randint(0, (1 << cons_bits) - 1) for _ in range(m**n)
        ),
        and_method=and_method if and_method is not None else rnd.choice((MIN, PROD)),
        mode=STANDARD,
        stages=rnd.randint(1, 16),
        clock_ns=rnd.choice((5.0, 10.0, 14.085)),
    )
    report = validate_spec(spec)
    assert report.ok, f"generator produced an invalid spec: {report.problems}"
    return spec


def random_inputs(rnd: random.Random, spec: FlcSpec):
    top = (1 << spec.in_bits) - 1
    return tuple(rnd.randint(0, top) for _ in range(spec.n))


def spawn_seed_sets(count: int, spawn: int):
    """Deterministic 4-seed sets drawn from one spawning LFSR stream."""
    gen = Lfsr16(spawn)
    out = []
    while len(out) < count:
        seeds = tuple(gen.next_word() for _ in range(4))
        if all(seeds):
            out.append(seeds)
    return out
