"""Still lifes, the dead frame and the penalised fitness."""
import numpy as np

from stilllife.life_core import (delta_fitness, fitness, flip, format_board, is_still_life,
                                 parse_board, step)

spacer = "_" * 60

block = parse_board("""
....
.##.
.##.
....
""")
print("A 2x2 block in a 4x4 board:")
print(format_board(block))
print("still life?", is_still_life(block))
print("fitness =", fitness(block), "(12 dead cells, no penalty)")

print(spacer)
print("\nOne Game-of-Life step acts on the board plus its dead frame.")
blinker = np.zeros((3, 3), np.uint8)
blinker[:, 1] = 1
print("vertical blinker ->")
print(format_board(step(blinker)[1:-1, 1:-1]))
print("still life?", is_still_life(blinker))

print(spacer)
print("\nA lone live cell dies.  Its penalty is scaled by K = n^2, so any")
print("infeasible board scores worse than every still life:")
single = np.zeros((3, 3), np.uint8)
single[1, 1] = 1
print("fitness(single centre cell) =", fitness(single))
print("fitness(empty 3x3)          =", fitness(np.zeros((3, 3), np.uint8)))

print(spacer)
print("\nFlipping one cell only touches a 3x3 neighbourhood, so the change")
print("is computed locally:")
for i, j in [(2, 2), (1, 1), (3, 2)]:
    d = delta_fitness(single, i, j)
    print(f"flip ({i},{j}): delta {d:5d}  recomputed {fitness(flip(single, i, j)) - fitness(single):5d}")
