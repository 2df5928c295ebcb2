"""Bits the experiment demos have in common."""
import argparse
from pathlib import Path

from surrogate_heat.scenarios import emit_results, load_config, read_table_csv, run_experiment

HERE = Path(__file__).resolve().parent


def parse(doc, name):
    p = argparse.ArgumentParser(description=doc)
    p.add_argument("--quick", action="store_true",
                   help="shrink realizations and run length to a couple of minutes")
    p.add_argument("--from", dest="source", metavar="DIR",
                   help="read tables from an existing output directory instead of running")
    p.add_argument("--out-dir", default=f"results/demo_{name}")
    return p.parse_args()


def tables(args, name, quick):
    """Run (or load) the demo configuration and return its CSV tables by name."""
    if args.source:
        out = Path(args.source)
    else:
        cfg = load_config(HERE / "configs" / f"{name}.yaml")
        if args.quick:
            cfg = cfg.with_updates(**quick)
        out = Path(args.out_dir)
        emit_results(run_experiment(cfg), out)
        print(f"outputs and manifest in {out}/")
    return {p.stem: read_table_csv(p) for p in out.glob("*.csv")
            if not p.stem.startswith(("series_", "density_"))}


def show(rows, keys):
    print("  ".join(f"{k:>11}" for k in keys))
    for r in rows:
        cells = []
        for k in keys:
            v = r.get(k)
            cells.append(f"{'-':>11}" if v is None else
                         f"{v:>11.4g}" if isinstance(v, float) else f"{str(v):>11}")
        print("  ".join(cells))
