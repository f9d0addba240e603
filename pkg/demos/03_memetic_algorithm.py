"""Blind crossover vs optimal BE recombination inside the memetic algorithm.

Short runs on n=12 with a generation budget, so the comparison is
repeatable: each variant gets the same seeds and the same number of
offspring.
"""
from stilllife.memetic import MAConfig, ma_run

GENERATIONS = 300
SEEDS = range(3)

print(f"n=12, popsize 100, {GENERATIONS} offspring per run (optimum is 68)\n")
print(f"{'variant':<8} {'arity':>5}  best per seed        BE calls / blind")
for variant, arity in [("TS", 2), ("BE", 2), ("BE", 4), ("BE_1F", 2), ("BE_2F", 2)]:
    bests, be, blind = [], 0, 0
    for seed in SEEDS:
        cfg = MAConfig(n=12, variant=variant, arity=arity, generations=GENERATIONS, seed=seed)
        best, trace, info = ma_run(cfg)
        bests.append(best.fit)
        be += info["be_recombinations"]
        blind += info["blind_recombinations"]
    print(f"{variant:<8} {arity:>5}  {str(bests):<20} {be:5d} / {blind}")

print("\nThe improvement trace of one MA-BE run:")
_, trace, _ = ma_run(MAConfig(n=12, generations=GENERATIONS, seed=0))
for e in trace:
    print(f"  t={e.time:6.2f}s  offspring {e.generation:4d}  fitness {e.cost}")
print("\nAny fitness above n^2 = 144 would still carry a stability penalty.")
