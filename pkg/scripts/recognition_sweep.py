#!/usr/bin/env python3
"""Recognize every bundled presentation and print the verdicts with level
counts, as a quick health check of the condensation pipeline."""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from wob import corpus, ordinals as o, recognition as rec


def main():
    for p in corpus.well_order_corpus() + corpus.non_well_order_corpus():
        trace = []
        t0 = time.monotonic()
        got = rec.recognize(rec.OrderPresentation(p.structure), trace=trace)
        dt = time.monotonic() - t0
        if isinstance(got, rec.WellOrder):
            verdict = f"well-order {o.show(got.cnf)}"
        elif isinstance(got, rec.NotWellOrder):
            verdict = f"not-well-order {got.evidence}"
        else:
            verdict = f"budget-exceeded level={got.level}"
        print(f"{p.name:16s} {verdict:40s} levels={len(trace)} {dt:5.2f}s")


if __name__ == "__main__":
    main()
