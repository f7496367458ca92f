"""Generate the sample input files used by the other demos and by the CLI
walkthrough in the README. Everything lands in demos/inputs/."""

from pathlib import Path

from fuzzychip import flc, ga, problems, tracksim

INPUTS = Path(__file__).parent / "inputs"


def main() -> None:
    INPUTS.mkdir(exist_ok=True)

    # the shipped 4-input / 7-MF / 2401-rule controller
    core = flc.default_core_spec()
    flc.dump_spec(core, INPUTS / "core4x7.json")

    # a one-input ramp surface: two complementary triangles, consequents at
    # the ends of the 8-bit universe, so the output tracks the input
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
    flc.dump_spec(ramp, INPUTS / "ramp.json")

    # engine defaults plus the deep-search profile used on burma14
    ga.dump_config(ga.GaConfig(), INPUTS / "ga_default.json")
    burma_fit = problems.TspFitness(problems.load_builtin("burma14"), genom_lngt=40)
    profile = ga.GaConfig(
        genom_lngt=40,
        scaling_factor_res=16,
        elite=26,
        mr=80,
        cross_method=ga.UNIFORM,
        mut_method=ga.BIT_FLIP,
        max_gen=8000,
        fitness_limit=burma_fit.l_max - 4200,
    )
    ga.dump_config(profile, INPUTS / "burma14_profile.json")

    # the bundled instance, exported as a standalone file for the CLI
    inst = problems.load_builtin("burma14")
    (INPUTS / "burma14.tsp").write_text(problems.format_tsplib(inst))

    # tracking courses
    tracksim.save_waypoints(tracksim.straight_waypoints(), INPUTS / "straight25m.txt")
    tracksim.save_waypoints(tracksim.s_curve_waypoints(), INPUTS / "s_curve.txt")

    for p in sorted(INPUTS.iterdir()):
        print(f"wrote {p.relative_to(INPUTS.parent)} ({p.stat().st_size} bytes)")


if __name__ == "__main__":
    main()
