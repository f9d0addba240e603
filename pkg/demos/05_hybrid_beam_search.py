"""Beam search over symmetric rows with the memetic algorithm plugged in."""
import logging
import time

from stilllife.beam_hybrid import HybridConfig, beam_search, hybrid_run
from stilllife.life_core import format_board, to_rle
from stilllife.memetic import MAConfig

print("Beam search alone, symmetric rows, k_bw = 2000:")
for n in (10, 12, 14):
    for bound in ("simple", "minibucket"):
        t = time.monotonic()
        cost, _ = beam_search(n, 2000, bound)
        print(f"  n={n} bound={bound:<10} cost {cost}  ({time.monotonic() - t:.1f}s)")

print("\nThe hybrid: from depth ceil(0.75 n) on, every level seeds an MA run with")
print("the best beam nodes completed at random.")
logging.basicConfig(level=logging.INFO, format="  %(message)s")
for n in (12, 13):
    cfg = HybridConfig(n=n, bound="minibucket", ma=MAConfig(n=n, arity=4), seed=0,
                       ma_generations=300)
    best, trace, info = hybrid_run(cfg)
    print(f"n={n}: best {best.fit} after {info['ma_runs']} MA runs, {info['elapsed']:.1f}s")
    for e in trace:
        print(f"    level {e.generation}: {e.cost} at {e.time:.1f}s")

print("\nThe n=13 result as RLE:")
print(to_rle(best.board, "n=13 hybrid"))
print(format_board(best.board))
