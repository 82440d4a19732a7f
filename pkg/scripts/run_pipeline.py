"""Generate a synthetic access log and run it through the log-to-model pipeline.

    python3 scripts/run_pipeline.py --lines 50000 --seed 2024 --k 5
    python3 scripts/run_pipeline.py --log access.log --period 144000
"""

import argparse
import time

from perfkit import ingest
from perfkit.pipeline import run_log_pipeline

# (weight, median bytes, sigma of log size): many small pages, few large downloads
MIXTURE = [(44.6, 300, 0.5), (32.3, 3000, 0.5), (20.7, 20000, 0.5),
           (2.3, 150000, 0.4), (0.15, 1.3e6, 0.3)]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--log", help="read this access log instead of generating one")
    ap.add_argument("--lines", type=int, default=50_000)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--k", type=int, default=5, help="number of workload classes")
    ap.add_argument("--period", type=float, help="observation period in seconds")
    ap.add_argument("--save-log", help="write the generated log here")
    a = ap.parse_args()

    t0 = time.perf_counter()
    if a.log:
        with open(a.log, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    else:
        lines, _ = ingest.synthetic_access_log(a.lines, a.seed, MIXTURE)
        if a.save_log:
            with open(a.save_log, "w", encoding="utf-8") as fh:
                fh.write("\n".join(lines) + "\n")
    report = run_log_pipeline(lines, k=a.k, T=a.period)
    took = time.perf_counter() - t0
    print(report.to_text(), end="")
    print(f"elapsed {took:.2f} s")


if __name__ == "__main__":
    main()
