"""Floating-point reference model for the fixed-point inference core.

Lifts a fixed-point spec into the real unit interval (codes divided by
2^bits), evaluates the full rulebase in float arithmetic, and produces an
a-priori bound on the disagreement between the lifted fixed output and the
real output. Every truncation in the integer datapath only ever lowers a
weight, so the bound composes one-sided error terms.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .flc import MIN, PROD, DenominatorZero, FlcSpec, membership


@dataclass(frozen=True)
class RealFlcSpec:
    """Breakpoints and singletons scaled into [0, 1]; same rule addressing."""

    partitions: tuple[tuple[tuple[float, float, float, float], ...], ...]
    singletons: tuple[float, ...]
    and_method: str

    @property
    def n(self) -> int:
        return len(self.partitions)

    @property
    def m(self) -> int:
        return len(self.partitions[0])


def lift(spec: FlcSpec) -> RealFlcSpec:
    """Scale breakpoints by 2^-in_bits and singletons by 2^-cons_bits."""
    in_scale = float(1 << spec.in_bits)
    cons_scale = float(1 << spec.cons_bits)
    parts = tuple(
        tuple(
            (mf.a / in_scale, mf.b / in_scale, mf.c / in_scale, mf.d / in_scale)
            for mf in part
        )
        for part in spec.partitions
    )
    return RealFlcSpec(
        partitions=parts,
        singletons=tuple(y / cons_scale for y in spec.singletons),
        and_method=spec.and_method,
    )


def membership_real(mf: tuple[float, float, float, float], x: float) -> float:
    """Exact trapezoid in real arithmetic; plateau wins at degenerate edges."""
    a, b, c, d = mf
    if x < a or x > d:
        return 0.0
    if b <= x <= c:
        return 1.0
    if x < b:
        return (x - a) / (b - a)
    return (d - x) / (d - c)


def infer_real(rspec: RealFlcSpec, xs: list[float] | tuple[float, ...]) -> float:
    """Weighted average of all m^n rule singletons in float arithmetic."""
    if len(xs) != rspec.n:
        raise ValueError(f"expected {rspec.n} inputs, got {len(xs)}")
    m = rspec.m
    mu = [
        [membership_real(mf, x) for mf in part]
        for part, x in zip(rspec.partitions, xs)
    ]
    num = den = 0.0
    for idxs in itertools.product(range(m), repeat=rspec.n):
        degs = [mu[k][idx] for k, idx in enumerate(idxs)]
        w = min(degs) if rspec.and_method == MIN else math.prod(degs)
        if w > 0.0:
            addr = sum(idx * m**k for k, idx in enumerate(idxs))
            num += w * rspec.singletons[addr]
            den += w
    if den == 0.0:
        raise DenominatorZero("all real rule weights are zero for this input vector")
    return num / den


def _envelope_floor(partition, in_bits: int, alpha_bits: int) -> int:
    """Smallest over the universe of the largest fixed-point degree at a code."""
    worst = (1 << alpha_bits) - 1
    for x in range(1 << in_bits):
        worst = min(worst, max(membership(mf, x, alpha_bits) for mf in partition))
        if worst == 0:
            break
    return worst


def quantization_bound(spec: FlcSpec) -> float:
    """A-priori bound on |lifted fixed output - infer_real| in [0, 1].

    Error sources, all one-sided (the fixed weight never exceeds the real one):
      * edge truncation plus the (2^a - 1)/2^a scale mismatch: at most
        2 degree-LSBs per input degree;
      * PROD fold truncation: one further degree-LSB per fold, n - 1 folds;
      * final truncating division: one consequent-LSB.
    The weight perturbation moves the 2^n-rule weighted average by at most
    (sum of perturbations) / (fixed denominator), so the denominator is
    floored by scanning each input's degree envelope. Returns the vacuous
    bound 1.0 if that floor is zero (outputs live in [0, 1] regardless).
    """
    a = spec.alpha_bits
    deg_lsb = 1.0 / (1 << a)
    per_degree = 2.0 * deg_lsb
    if spec.and_method == MIN:
        eps_w = per_degree
    else:
        eps_w = spec.n * per_degree + (spec.n - 1) * deg_lsb

    env = [
        _envelope_floor(part, spec.in_bits, a) * deg_lsb for part in spec.partitions
    ]
    if spec.and_method == MIN:
        den_floor = min(env)
    else:
        den_floor = math.prod(env) - (spec.n - 1) * deg_lsb
    if den_floor <= 0.0:
        return 1.0

    division = 1.0 / (1 << spec.cons_bits)
    return division + (2**spec.n * eps_w) / den_floor
