"""Fixed-point zero-order Takagi-Sugeno inference core.

Models the datapath of a pipelined fuzzy controller: trapezoidal membership
evaluation in integer arithmetic, active-rule selection under an overlap-2
partition, MIN/PROD antecedent combination, weighted-average defuzzification
with truncating division, and a cycle/latency model for the standard
(one active rule per clock) and odd-even (two active rules per clock)
processing schedules.

Width conventions:
    input codes       in_bits     unsigned
    degrees of truth  alpha_bits  0 .. 2^alpha_bits - 1
    rule singletons   cons_bits
    output            out_bits    consequent code left-shifted by
                                  (out_bits - cons_bits)
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, replace
from typing import Sequence

from .fixedq import FixedWord, round_half_away

MIN = "min"
PROD = "prod"
AND_METHODS = (MIN, PROD)

STANDARD = "standard"
ODD_EVEN = "odd_even"
MODES = (STANDARD, ODD_EVEN)


class DenominatorZero(ArithmeticError):
    """No rule fired with nonzero weight; the weighted average is undefined."""


# ---- membership functions and partitions ----


@dataclass(frozen=True)
class MembershipFunction:
    """Trapezoid breakpoints as input-universe codes; triangular iff b == c.

    Zero outside [a, d], full scale on [b, c], linear (floored) on the edges.
    """

    a: int
    b: int
    c: int
    d: int


def membership(mf: MembershipFunction, x: int, alpha_bits: int) -> int:
    """Degree of truth of code x in mf.

    Edges use integer floor division, so a long edge can truncate to zero
    strictly inside the support. Degenerate edges (a == b, c == d) hit the
    plateau branch first and return full scale at the shared point.
    """
    top = (1 << alpha_bits) - 1
    if x < mf.a or x > mf.d:
        return 0
    if mf.b <= x <= mf.c:
        return top
    if x < mf.b:
        return top * (x - mf.a) // (mf.b - mf.a)
    return top * (mf.d - x) // (mf.d - mf.c)


def uniform_partition(in_bits: int, m: int) -> tuple[MembershipFunction, ...]:
    """m triangular MFs with evenly spaced peaks over the full input universe.

    Interior peaks sit at round(i * top / (m - 1)); the end MFs shoulder the
    universe bounds. Adjacent supports meet at the peaks, so real-valued
    memberships of the two active sets always sum to full scale.
    """
    if m < 2:
        raise ValueError("a partition needs at least 2 membership functions")
    top = (1 << in_bits) - 1
    peaks = [round_half_away(i * top / (m - 1)) for i in range(m)]
    mfs = []
    for i in range(m):
        a = peaks[i - 1] if i > 0 else 0
        d = peaks[i + 1] if i < m - 1 else top
        mfs.append(MembershipFunction(a, peaks[i], peaks[i], d))
    return tuple(mfs)


# ---- specification ----


@dataclass(frozen=True)
class FlcSpec:
    """Complete parameterization of one controller instance.

    partitions: one MF tuple per input, all of equal length m.
    singletons: m^n consequent codes indexed by rule address
                (input 0 is the least significant digit, base m).
    stages/clock_ns feed the timing model only.
    """

    in_bits: int
    out_bits: int
    alpha_bits: int
    cons_bits: int
    partitions: tuple[tuple[MembershipFunction, ...], ...]
    singletons: tuple[int, ...]
    and_method: str = MIN
    mode: str = STANDARD
    stages: int = 11
    clock_ns: float = 10.0

    @property
    def n(self) -> int:
        return len(self.partitions)

    @property
    def m(self) -> int:
        return len(self.partitions[0])


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    problems: tuple[str, ...]


def validate_spec(spec: FlcSpec) -> ValidationReport:
    """Structural invariant check; collects every violation instead of raising."""
    problems: list[str] = []
    top_in = (1 << spec.in_bits) - 1

    for bits, name in (
        (spec.in_bits, "in_bits"),
        (spec.out_bits, "out_bits"),
        (spec.alpha_bits, "alpha_bits"),
        (spec.cons_bits, "cons_bits"),
    ):
        if not 1 <= bits <= 32:
            problems.append(f"{name}={bits} outside 1..32")
    if spec.out_bits < spec.cons_bits:
        problems.append("out_bits must be >= cons_bits (output is a pure left shift)")
    if spec.and_method not in AND_METHODS:
        problems.append(f"unknown and_method {spec.and_method!r}")
    if spec.mode not in MODES:
        problems.append(f"unknown mode {spec.mode!r}")
    if spec.stages < 1:
        problems.append(f"stages={spec.stages} must be >= 1")
    if spec.clock_ns <= 0:
        problems.append(f"clock_ns={spec.clock_ns} must be positive")

    if not spec.partitions:
        problems.append("no input partitions")
        return ValidationReport(False, tuple(problems))

    m = spec.m
    if m < 2:
        problems.append("partitions need at least 2 MFs for pairwise active selection")
    if any(len(p) != m for p in spec.partitions):
        problems.append("all partitions must have the same MF count")
        return ValidationReport(False, tuple(problems))

    for k, part in enumerate(spec.partitions):
        for i, mf in enumerate(part):
            if not (mf.a <= mf.b <= mf.c <= mf.d):
                problems.append(f"input {k} MF {i}: breakpoints not ordered")
            if mf.a < 0 or mf.d > top_in:
                problems.append(f"input {k} MF {i}: support outside the universe")
        for i in range(m - 1):
            if part[i].b > part[i + 1].b:
                problems.append(f"input {k}: peak order violated at MF {i}")
            if part[i + 1].a > part[i].d:
                problems.append(f"input {k}: coverage gap between MF {i} and {i + 1}")
        for i in range(m - 2):
            lo, hi = part[i], part[i + 2]
            if lo.d > hi.a:
                problems.append(f"input {k}: MFs {i} and {i + 2} overlap")
            elif lo.d == hi.a and lo.c == lo.d and hi.a == hi.b:
                # touching plateaus make three sets nonzero at one code, which
                # defeats the pairwise active-rule selection the overlap-2
                # invariant exists to guarantee
                problems.append(f"input {k}: MFs {i} and {i + 2} share a plateau point")
        if part[0].a != 0:
            problems.append(f"input {k}: first MF must start at 0")
        if part[-1].d != top_in:
            problems.append(f"input {k}: last MF must end at {top_in}")

    expected = m ** spec.n
    if len(spec.singletons) != expected:
        problems.append(
            f"singleton table has {len(spec.singletons)} entries, expected {expected}"
        )
    top_cons = (1 << spec.cons_bits) - 1
    if any(not 0 <= y <= top_cons for y in spec.singletons):
        problems.append("singleton outside the consequent universe")

    return ValidationReport(not problems, tuple(problems))


# ---- active rule selection ----


@dataclass(frozen=True)
class ActivePair:
    """The two candidate MFs of one input: indices (left, left + 1)."""

    left: int
    deg_left: int
    deg_right: int


@dataclass(frozen=True)
class ActiveRuleSet:
    """Per-input candidate pairs plus the 2^n enumerated firings.

    Each firing is (rule_address, antecedent weight, singleton).
    """

    pairs: tuple[ActivePair, ...]
    firings: tuple[tuple[int, int, int], ...]


def active_pair(
    partition: Sequence[MembershipFunction], x: int, alpha_bits: int
) -> ActivePair:
    """Lowest MF index with nonzero degree (clamped to m - 2) and both degrees.

    Under the overlap-2 invariant every nonzero degree at x lives inside the
    returned pair. If quantization floors every degree to zero the pair is
    chosen by support containment so downstream code still sees a well-formed
    (zero-weight) rule set.
    """
    m = len(partition)
    degs = [membership(mf, x, alpha_bits) for mf in partition]
    left = next((i for i, d in enumerate(degs) if d > 0), None)
    if left is None:
        left = next(
            (i for i, mf in enumerate(partition) if mf.a <= x <= mf.d), m - 1
        )
    left = min(left, m - 2)
    return ActivePair(left, degs[left], degs[left + 1])


def rule_address(indices: Sequence[int], m: int) -> int:
    """Mixed-radix rule address: input 0 is the least significant base-m digit."""
    addr = 0
    for k, idx in enumerate(indices):
        if not 0 <= idx < m:
            raise ValueError(f"MF index {idx} outside 0..{m - 1}")
        addr += idx * m**k
    return addr


def antecedent_weight(alphas: Sequence[int], method: str, alpha_bits: int) -> int:
    """Combine per-input degrees into one rule weight.

    MIN is exact; PROD folds left-to-right with (w * mu) >> alpha_bits, i.e.
    degrees renormalized as value / 2^alpha_bits, truncating each step.
    """
    if not alphas:
        raise ValueError("need at least one degree")
    if method == MIN:
        return min(alphas)
    if method == PROD:
        w = alphas[0]
        for mu in alphas[1:]:
            w = (w * mu) >> alpha_bits
        return w
    raise ValueError(f"unknown and_method {method!r}")


# ---- inference ----


def _check_inputs(spec: FlcSpec, inputs: Sequence[int]) -> None:
    if len(inputs) != spec.n:
        raise ValueError(f"expected {spec.n} inputs, got {len(inputs)}")
    top = (1 << spec.in_bits) - 1
    for k, x in enumerate(inputs):
        if not 0 <= x <= top:
            raise ValueError(f"input {k} code {x} outside 0..{top}")


def active_rules(spec: FlcSpec, inputs: Sequence[int]) -> ActiveRuleSet:
    """Select the 2^n candidate rules for one input vector and weight them."""
    _check_inputs(spec, inputs)
    m = spec.m
    pairs = tuple(
        active_pair(part, x, spec.alpha_bits)
        for part, x in zip(spec.partitions, inputs)
    )
    firings = []
    for offsets in itertools.product((0, 1), repeat=spec.n):
        idxs = [p.left + off for p, off in zip(pairs, offsets)]
        degs = [(p.deg_left, p.deg_right)[off] for p, off in zip(pairs, offsets)]
        w = antecedent_weight(degs, spec.and_method, spec.alpha_bits)
        addr = rule_address(idxs, m)
        firings.append((addr, w, spec.singletons[addr]))
    return ActiveRuleSet(pairs, tuple(firings))


def _defuzzify(spec: FlcSpec, num: int, den: int) -> FixedWord:
    if den == 0:
        raise DenominatorZero("all rule weights are zero for this input vector")
    q = num // den  # consequent-universe code, cons_bits wide
    return FixedWord(q << (spec.out_bits - spec.cons_bits), spec.out_bits)


def infer(spec: FlcSpec, inputs: Sequence[int]) -> FixedWord:
    """One inference over the active rules only (hardware datapath model)."""
    rules = active_rules(spec, inputs)
    num = sum(w * y for _, w, y in rules.firings)
    den = sum(w for _, w, _ in rules.firings)
    return _defuzzify(spec, num, den)


def infer_full_rulebase(spec: FlcSpec, inputs: Sequence[int]) -> FixedWord:
    """Same arithmetic over all m^n rules; oracle for the active-rule identity."""
    _check_inputs(spec, inputs)
    m = spec.m
    mu = [
        [membership(mf, x, spec.alpha_bits) for mf in part]
        for part, x in zip(spec.partitions, inputs)
    ]
    num = den = 0
    for idxs in itertools.product(range(m), repeat=spec.n):
        w = antecedent_weight(
            [mu[k][idx] for k, idx in enumerate(idxs)],
            spec.and_method,
            spec.alpha_bits,
        )
        if w:
            y = spec.singletons[rule_address(idxs, m)]
            num += w * y
            den += w
    return _defuzzify(spec, num, den)


# ---- timing model ----


@dataclass(frozen=True)
class TimingReport:
    latency_ns: float
    cycles_per_sample: int
    sample_rate_hz: float


def estimate_timing(spec: FlcSpec) -> TimingReport:
    """Pipeline fill latency plus steady-state throughput.

    The standard schedule processes one active rule per clock (2^n cycles per
    sample); the odd-even schedule processes two (2^(n-1) cycles).
    """
    cycles = 1 << (spec.n - 1 if spec.mode == ODD_EVEN else spec.n)
    latency = spec.stages * spec.clock_ns
    rate = 1e9 / (spec.clock_ns * cycles)
    return TimingReport(latency, cycles, rate)


# ---- factories and serialization ----


def default_core_spec(
    singletons: Sequence[int] | None = None,
    and_method: str = MIN,
    mode: str = STANDARD,
    stages: int = 11,
    clock_ns: float = 10.0,
) -> FlcSpec:
    """The shipped 4-input core: 12-bit I/O, 7 MFs per input, 2401 rules.

    Default singletons form a smooth monotone surface (mean MF index scaled
    over the consequent universe); pass an explicit table for real rulebases.
    """
    n, m = 4, 7
    parts = tuple(uniform_partition(12, m) for _ in range(n))
    if singletons is None:
        top = (1 << 8) - 1
        singletons = tuple(
            round_half_away(top * sum(idxs) / (n * (m - 1)))
            for idxs in itertools.product(range(m), repeat=n)
        )
    return FlcSpec(
        in_bits=12,
        out_bits=12,
        alpha_bits=8,
        cons_bits=8,
        partitions=parts,
        singletons=tuple(singletons),
        and_method=and_method,
        mode=mode,
        stages=stages,
        clock_ns=clock_ns,
    )


def spec_to_dict(spec: FlcSpec) -> dict:
    return {
        "in_bits": spec.in_bits,
        "out_bits": spec.out_bits,
        "alpha_bits": spec.alpha_bits,
        "cons_bits": spec.cons_bits,
        "and_method": spec.and_method,
        "mode": spec.mode,
        "stages": spec.stages,
        "clock_ns": spec.clock_ns,
        "partitions": [
            [[mf.a, mf.b, mf.c, mf.d] for mf in part] for part in spec.partitions
        ],
        "singletons": list(spec.singletons),
    }


def spec_from_dict(data: dict) -> FlcSpec:
    try:
        partitions = tuple(
            tuple(MembershipFunction(*map(int, mf)) for mf in part)
            for part in data["partitions"]
        )
        return FlcSpec(
            in_bits=int(data["in_bits"]),
            out_bits=int(data["out_bits"]),
            alpha_bits=int(data["alpha_bits"]),
            cons_bits=int(data["cons_bits"]),
            partitions=partitions,
            singletons=tuple(int(y) for y in data["singletons"]),
            and_method=str(data.get("and_method", MIN)),
            mode=str(data.get("mode", STANDARD)),
            stages=int(data.get("stages", 11)),
            clock_ns=float(data.get("clock_ns", 10.0)),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed spec document: {exc}") from exc


def load_spec(path) -> FlcSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return spec_from_dict(json.load(fh))


def dump_spec(spec: FlcSpec, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(spec_to_dict(spec), fh, indent=2, sort_keys=True)
        fh.write("\n")


def with_mode(spec: FlcSpec, mode: str, stages: int, clock_ns: float) -> FlcSpec:
    """Same rulebase under a different processing schedule."""
    return replace(spec, mode=mode, stages=stages, clock_ns=clock_ns)
