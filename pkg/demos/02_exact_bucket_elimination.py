"""Exact optima by bucket elimination over rows."""
import time

from stilllife.bucket_elim import be_solve, be_solve_symmetric_opt, full_domain, symmetric_domain
from stilllife.life_core import format_board

spacer = "_" * 60

print("Full domain: every row of width n may appear (2^n values per row).")
for n in range(3, 9):
    t = time.monotonic()
    sol = be_solve_symmetric_opt(n, full_domain(n))
    print(f"n={n}: {sol.opt:3d} dead cells   {time.monotonic() - t:.2f}s   "
          f"{sol.stats['stable_triples']} stable row triples")

print(spacer)
print("\nThe optimum for n=8:")
print(format_board(be_solve(8, full_domain(8)).board))

print(spacer)
print("\nRestricting rows to palindromes solves the symmetric relaxation;")
print("its optimum bounds the true one from above.")
for n in (12, 13, 14, 16, 18):
    t = time.monotonic()
    sol = be_solve_symmetric_opt(n, symmetric_domain(n))
    print(f"n={n}: {sol.opt} dead cells over {len(symmetric_domain(n))} rows "
          f"({time.monotonic() - t:.2f}s)")
print()
print(format_board(be_solve_symmetric_opt(14, symmetric_domain(14)).board))
