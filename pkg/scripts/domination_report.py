#!/usr/bin/env python3
"""Desk-scale shadow of the cross-system domination theorem: compare the
standard and shifted fundamental-sequence hierarchies pointwise and print a
table.  The report is empirical; it does not prove the asymptotic theorem."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from wob import fgh
from wob import ordinals as o


def main():
    std, shifted = fgh.standard_system(), fgh.shifted_system()
    for table, bound in [(o.STANDARD_FS, "standard"), (o.SHIFTED_FS, "shifted")]:
        v = o.check_bachmann(table, o.parse("w^2"), samples=12)
        print(f"bachmann[{bound}] on w^2: {'ok' if v is None else v}")
    budget = fgh.Budget(max_value=10 ** 9, max_steps=10 ** 6)
    alphas = [o.from_int(1), o.from_int(2), o.OMEGA, o.OMEGA + o.from_int(1),
              o.OMEGA * o.from_int(2), o.OMEGA * o.from_int(3)]
    for i, alpha in enumerate(alphas):
        for beta in alphas[i + 1:]:
            feasible_left = alpha < o.from_int(3)
            if not feasible_left:
                continue
            report = fgh.dominates_at(std, alpha, shifted, beta, [3, 4, 5, 6], budget)
            verdicts = " ".join(f"x={p.x}:{p.verdict}" for p in report.points)
            print(f"F[std]_{o.show(alpha)} vs F[shifted]_{o.show(beta)}: {verdicts}")
    print("note: pointwise samples only; the asymptotic theorem is not thereby proved")


if __name__ == "__main__":
    main()
