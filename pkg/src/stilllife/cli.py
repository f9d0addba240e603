"""Command line experiment harness.

Subcommands::

    stilllife exact  --n 12 --domain symmetric
    stilllife ma     --n 12 --variant be --arity 4 --replicates 10 --workers 2
    stilllife hybrid --n 12 --bound mb --kma-frac 0.75
    stilllife verify
    stilllife summary results.jsonl

Every run writes one JSON line per replicate to ``<out>/results.jsonl``
(``--out`` or ``$STILLLIFE_OUTPUT_DIR``, default ``./results``) and an RLE
file of the best board.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .life_core import format_board, is_still_life, parse_board, to_rle
from .wcsp_row import INF, total_cost

SCHEMA_VERSION = 1
OUTPUT_ENV = "STILLLIFE_OUTPUT_DIR"

log = logging.getLogger("stilllife")


@dataclasses.dataclass
class RunRecord:
    solver: str
    config: dict
    seed: int | None
    best_cost: float
    feasible: bool
    board: str | None
    rle: str | None
    time_to_best: float
    total_time: float
    trace: list
    schema_version: int = SCHEMA_VERSION

    def to_json(self) -> str:
        d = dataclasses.asdict(self)
        d["best_cost"] = None if self.best_cost == INF else self.best_cost
        return json.dumps(d, sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "RunRecord":
        d = json.loads(line)
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported record schema {d.get('schema_version')}")
        if d["best_cost"] is None:
            d["best_cost"] = INF
        return cls(**d)

    def validate(self) -> bool:
        """Re-evaluate the embedded board against the reported cost."""
        if not self.feasible:
            return True
        b = parse_board(self.board)
        return is_still_life(b) and total_cost(b) == self.best_cost


def default_ma_time(n: int) -> float:
    """Three minutes at n = 12 plus one minute per extra row."""
    return 180.0 + 60.0 * (n - 12)


def _record(solver, config, seed, board, trace, total_time) -> RunRecord:
    cost = total_cost(board) if board is not None else INF
    feasible = cost != INF
    if not trace:
        ttb = total_time
    else:
        final = trace[-1][1]
        ttb = next(t for t, c in trace if c == final)
    return RunRecord(solver=solver, config=config, seed=seed, best_cost=cost,
                     feasible=feasible,
                     board=format_board(board) if board is not None else None,
                     rle=to_rle(board, f"{solver} n={config.get('n')}") if board is not None else None,
                     time_to_best=ttb, total_time=total_time, trace=[list(e) for e in trace])


# ---------------------------------------------------------------------------
# solvers


def run_exact(n: int, domain: str = "symmetric", allow_large: bool = False,
              fold: bool = True) -> RunRecord:
    from .bucket_elim import be_solve, be_solve_symmetric_opt, full_domain, symmetric_domain
    t0 = time.monotonic()
    dom = full_domain(n, allow_large) if domain == "full" else symmetric_domain(n)
    sol = be_solve_symmetric_opt(n, dom) if fold else be_solve(n, dom)
    dt = time.monotonic() - t0
    cfg = {"n": n, "domain": domain, "fold": fold}
    trace = [] if sol.board is None else [(dt, sol.opt)]
    return _record("exact", cfg, None, sol.board, trace, dt)


def run_ma(cfg_dict: dict) -> RunRecord:
    from .memetic import MAConfig, ma_run
    cfg = MAConfig(**cfg_dict)
    best, trace, info = ma_run(cfg)
    echo = dataclasses.asdict(cfg)
    echo["generations_run"] = info["generations"]
    board = best.board if best.feasible else None
    return _record(f"ma-{cfg.variant.lower()}", echo, cfg.seed, board,
                   [(e.time, e.cost) for e in trace], info["elapsed"])


def run_hybrid(cfg_dict: dict, ma_dict: dict) -> RunRecord:
    from .beam_hybrid import HybridConfig, hybrid_run
    from .memetic import MAConfig
    cfg = HybridConfig(ma=MAConfig(**ma_dict), **cfg_dict)
    best, trace, info = hybrid_run(cfg)
    echo = dataclasses.asdict(cfg)
    echo["levels_run"] = info["levels"]
    board = best.board if best is not None and best.feasible else None
    solver = "bs-ma-" + cfg.ma.variant.lower() + ("-mb" if cfg.bound == "minibucket" else "")
    return _record(solver, echo, cfg.seed, board, [(e.time, e.cost) for e in trace],
                   info["elapsed"])


# ---------------------------------------------------------------------------
# output


def output_dir(arg: str | None) -> Path:
    return Path(arg or os.environ.get(OUTPUT_ENV) or "results")


def write_records(records, out: Path, rle: bool = True) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    path = out / "results.jsonl"
    with path.open("a") as fh:
        for r in records:
            fh.write(r.to_json() + "\n")
            if rle and r.rle:
                name = f"{r.solver}_n{r.config['n']}_seed{r.seed}.rle"
                (out / name).write_text(r.rle)
    return path


def _report(rec: RunRecord, show_board: bool) -> None:
    cost = "inf" if rec.best_cost == INF else rec.best_cost
    print(f"{rec.solver} n={rec.config['n']} seed={rec.seed} cost={cost} "
          f"time_to_best={rec.time_to_best:.2f}s total={rec.total_time:.2f}s")
    if show_board and rec.board:
        print(rec.board)


def _run_replicates(fn, jobs, workers: int):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(*j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, *zip(*jobs)))


# ---------------------------------------------------------------------------
# subcommands


def cmd_exact(args) -> int:
    try:
        rec = run_exact(args.n, args.domain, args.allow_large, not args.no_fold)
    except ValueError as e:
        print(f"error: {e} (use --allow-large to override)", file=sys.stderr)
        return 2
    _report(rec, not args.quiet)
    write_records([rec], output_dir(args.out), not args.no_rle)
    return 0


def _ma_dict(args, seed: int) -> dict:
    time_limit = args.time
    if time_limit is None and args.generations is None:
        time_limit = default_ma_time(args.n)
    return dict(n=args.n, popsize=args.popsize, p_x=args.px, p_m=args.pm, arity=args.arity,
                variant=args.variant, use_columns=not args.rows_only,
                maxiter_ts=args.ts_iters, time_limit=time_limit,
                generations=args.generations, target=args.target, seed=seed)


def cmd_ma(args) -> int:
    jobs = [(_ma_dict(args, args.seed + r),) for r in range(args.replicates)]
    records = _run_replicates(run_ma, jobs, args.workers)
    for rec in records:
        _report(rec, not args.quiet)
    write_records(records, output_dir(args.out), not args.no_rle)
    return 0


def cmd_hybrid(args) -> int:
    bound = "minibucket" if args.bound in ("mb", "minibucket") else "simple"
    arity = args.arity if args.arity is not None else (4 if bound == "minibucket" else 2)
    jobs = []
    for r in range(args.replicates):
        seed = args.seed + r
        ma = dict(n=args.n, popsize=args.popsize, p_x=args.px, p_m=args.pm, arity=arity,
                  variant=args.variant, use_columns=not args.rows_only,
                  maxiter_ts=args.ts_iters, seed=seed)
        cfg = dict(n=args.n, k_bw=args.kbw, k_ma_fraction=args.kma_frac, bound=bound,
                   M=args.segments, ma_generations=args.ma_generations, seed=seed,
                   target=args.target, table_cache=args.table_cache)
        jobs.append((cfg, ma))
    try:
        records = _run_replicates(run_hybrid, jobs, args.workers)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    for rec in records:
        _report(rec, not args.quiet)
    write_records(records, output_dir(args.out), not args.no_rle)
    return 0


def cmd_verify(args) -> int:
    from .verify import run_all
    return 0 if run_all(quick=args.quick) else 1


def cmd_summary(args) -> int:
    groups: dict[tuple, list[RunRecord]] = {}
    for path in args.files:
        with open(path) as fh:
            for line in fh:
                if line.strip():
                    rec = RunRecord.from_json(line)
                    groups.setdefault((rec.solver, rec.config["n"]), []).append(rec)
    print(f"{'solver':<16} {'n':>3} {'runs':>4} {'best':>5} {'q1':>6} {'median':>6} "
          f"{'q3':>6} {'worst':>5} {'ttb_med':>8}")
    rows = []
    for (solver, n), recs in sorted(groups.items()):
        costs = np.array([r.best_cost for r in recs], dtype=float)
        ttb = np.array([r.time_to_best for r in recs])
        q1, med, q3 = np.percentile(costs, [25, 50, 75])
        print(f"{solver:<16} {n:>3} {len(recs):>4} {costs.min():>5.0f} {q1:>6.1f} {med:>6.1f} "
              f"{q3:>6.1f} {costs.max():>5.0f} {np.median(ttb):>8.2f}")
        rows.append((f"{solver} n={n}", costs))
    if args.plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
        fig, ax = plt.subplots(figsize=(max(4, 1.2 * len(rows)), 4))
        ax.boxplot([c for _, c in rows], labels=[lab for lab, _ in rows])
        ax.set_ylabel("dead cells")
        fig.tight_layout()
        fig.savefig(args.plot)
        print(f"plot written to {args.plot}")
    return 0


def _add_common(p) -> None:
    p.add_argument("--n", type=int, required=True, help="board size")
    p.add_argument("--out", help=f"output directory (default ${OUTPUT_ENV} or ./results)")
    p.add_argument("--no-rle", action="store_true", help="skip writing RLE files")
    p.add_argument("--quiet", action="store_true", help="do not print boards")


def _add_ma_flags(p, arity_default) -> None:
    p.add_argument("--variant", default="be", choices=["ts", "be", "be_1f", "be_2f"],
                   type=str.lower)
    p.add_argument("--arity", type=int, default=arity_default)
    p.add_argument("--popsize", type=int, default=100)
    p.add_argument("--px", type=float, default=0.9, help="recombination probability")
    p.add_argument("--pm", type=float, default=None, help="mutation probability (1/n^2)")
    p.add_argument("--ts-iters", type=int, default=None, help="tabu iterations (n^2)")
    p.add_argument("--rows-only", action="store_true",
                   help="BE recombination without the parents' columns")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--replicates", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--target", type=int, default=None, help="stop at this cost")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stilllife", description=__doc__.split("\n")[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("exact", help="bucket elimination")
    _add_common(p)
    p.add_argument("--domain", choices=["full", "symmetric"], default="symmetric")
    p.add_argument("--allow-large", action="store_true",
                   help="permit the full domain beyond the default size guard")
    p.add_argument("--no-fold", action="store_true",
                   help="eliminate every row instead of using the flip symmetry")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("ma", help="memetic algorithm")
    _add_common(p)
    _add_ma_flags(p, 2)
    p.add_argument("--time", type=float, default=None,
                   help="seconds per replicate (default 180 + 60*(n-12))")
    p.add_argument("--generations", type=int, default=None)
    p.set_defaults(func=cmd_ma)

    p = sub.add_parser("hybrid", help="beam search + memetic algorithm")
    _add_common(p)
    _add_ma_flags(p, None)
    p.add_argument("--bound", choices=["simple", "mb", "minibucket"], default="mb")
    p.add_argument("--kbw", type=int, default=2000, help="beam width")
    p.add_argument("--kma-frac", type=float, default=0.75,
                   help="MA runs from depth ceil(frac*n) on")
    p.add_argument("--segments", type=int, default=3, help="mini-bucket segments M")
    p.add_argument("--ma-generations", type=int, default=1000)
    p.add_argument("--table-cache", default=None, help="directory for mini-bucket tables")
    p.set_defaults(func=cmd_hybrid)

    p = sub.add_parser("verify", help="run the oracle and property suites")
    p.add_argument("--quick", action="store_true", help="smaller sample counts")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("summary", help="quartiles of result logs")
    p.add_argument("files", nargs="+")
    p.add_argument("--plot", help="write a box plot (needs matplotlib)")
    p.set_defaults(func=cmd_summary)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
