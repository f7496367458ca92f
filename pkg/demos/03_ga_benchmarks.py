"""Run the hardware-style GA on two-variable minimization benchmarks.

Each genome is 16 bits: two 8-bit halves mapped onto the function domain.
Fitness inverts the surface (low function value -> high score, full scale at
the best grid point), so watching best_score climb is watching f fall."""

from fuzzychip.ga import BIT_FLIP, UNIFORM, GaConfig, run
from fuzzychip.problems import BENCHMARKS, BenchmarkFitness


def solve(name: str) -> None:
    fit = BenchmarkFitness(name)
    fn, lo, hi = BENCHMARKS[name]
    cfg = GaConfig(cross_method=UNIFORM, mut_method=BIT_FLIP, max_gen=40)

    snapshots = {}

    def observe(gen, pop):
        if gen % 10 == 0 or gen == cfg.max_gen:
            best = pop.best_index()
            snapshots[gen] = (pop.scores[best], pop.genomes[best])

    result = run(cfg, fit, on_generation=observe)
    x1, x2 = fit.decode(result.best_genome)
    print(f"\n{name} on [{lo}, {hi}]^2 (grid minimum {fit.f_min:.6f}):")
    for gen, (score, genome) in sorted(snapshots.items()):
        gx1, gx2 = fit.decode(genome)
        print(f"  gen {gen:3d}: score {score:5d}  f({gx1:+.4f}, {gx2:+.4f}) "
              f"= {fn(gx1, gx2):.6f}")
    print(f"  best after {result.generations_run} generations: "
          f"f({x1:+.4f}, {x2:+.4f}) = {fn(x1, x2):.6f} "
          f"[stop: {result.stop_reason}]")


if __name__ == "__main__":
    for name in ("sphere", "rastrigin", "rosenbrock"):
        solve(name)
