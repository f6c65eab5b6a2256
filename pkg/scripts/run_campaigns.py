#!/usr/bin/env python3
"""Run every checked-in campaign config and write reports plus CSV tables.

    python scripts/run_campaigns.py [--outdir reports] [--workers 4]

Exits nonzero if any campaign has a failed verdict.  Configs whose name
ends in ``-faulty`` are negative controls and are expected to fail.
"""

import argparse
import pathlib
import sys

from spinstat import cli

ROOT = pathlib.Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--configs", default=ROOT / "configs", type=pathlib.Path)
    ap.add_argument("--outdir", default=ROOT / "reports", type=pathlib.Path)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)

    ok = True
    for path in sorted(args.configs.glob("*.json")):
        expect_fail = path.stem.endswith("-faulty")
        mode = path.stem.removesuffix("-faulty")
        report = cli.run_campaign(cli.load_config(mode, str(path)), workers=args.workers)
        (args.outdir / f"{path.stem}.json").write_text(cli.dumps_report(report))
        (args.outdir / f"{path.stem}.csv").write_text(cli.render_table(report))
        s = report["summary"]
        good = s["passed"] != expect_fail
        ok &= good
        tag = "ok" if good else "UNEXPECTED"
        print(f"{path.stem:<22} {s['items']:>5} items {s['failed']:>5} failed  {tag}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
