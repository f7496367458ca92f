"""Walk through one fixed-point inference step by step, then compare the
integer datapath against the floating-point reference across a full sweep.

The engine evaluates only the 2^n rules that can fire (two overlapping sets
per input), computes integer rule weights, and defuzzifies with a truncating
weighted average. The reference model lifts every code into [0, 1] and does
the same in float; their disagreement stays below an a-priori bound."""

from fuzzychip import flc
from fuzzychip.flcref import infer_real, lift, quantization_bound


def narrate_single_step() -> None:
    spec = flc.default_core_spec()
    xs = (2048, 1024, 0, 4095)
    print(f"core: n={spec.n} inputs, m={spec.m} sets each, "
          f"{len(spec.singletons)} rules, {spec.alpha_bits}-bit degrees")
    print(f"input codes: {xs}")

    for k, x in enumerate(xs):
        pair = flc.active_pair(spec.partitions[k], x, spec.alpha_bits)
        print(f"  input {k}: x={x:4d} active sets ({pair.left}, {pair.left + 1}) "
              f"degrees ({pair.deg_left}, {pair.deg_right})")

    rules = flc.active_rules(spec, xs)
    print(f"{len(rules.firings)} candidate rules (address, weight, singleton):")
    for addr, weight, singleton in rules.firings[:4]:
        print(f"  rule {addr:4d} weight {weight:3d} -> singleton {singleton}")
    print("  ...")

    out = flc.infer(spec, xs)
    real = infer_real(lift(spec), [x / (1 << spec.in_bits) for x in xs])
    print(f"fixed output code {out.value} / {1 << spec.out_bits} "
          f"= {out.value / (1 << spec.out_bits):.6f}")
    print(f"float reference    = {real:.6f}")
    print(f"a-priori bound     = {quantization_bound(spec):.4f}")


def sweep_ramp() -> None:
    # 1-input surface whose real output is exactly x/256: easy to eyeball
    ramp = flc.FlcSpec(
        in_bits=8,
        out_bits=12,
        alpha_bits=8,
        cons_bits=8,
        partitions=(
            (
                flc.MembershipFunction(0, 0, 0, 255),
                flc.MembershipFunction(0, 255, 255, 255),
            ),
        ),
        singletons=(0, 255),
    )
    rspec = lift(ramp)
    bound = quantization_bound(ramp)
    worst = 0.0
    print("\nramp sweep (every 32nd code):")
    print("   x  code_out   fixed     real      |err|")
    for x in range(256):
        code = flc.infer(ramp, (x,)).value
        fixed = code / 4096.0
        real = infer_real(rspec, [x / 256.0])
        err = abs(fixed - real)
        worst = max(worst, err)
        if x % 32 == 0:
            print(f" {x:4d}  {code:8d}  {fixed:.6f}  {real:.6f}  {err:.2e}")
    print(f"worst |fixed - real| over all 256 codes: {worst:.2e} "
          f"(bound {bound:.2e})")


if __name__ == "__main__":
    narrate_single_step()
    sweep_ramp()
