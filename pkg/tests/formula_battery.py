"""Shared regression battery of first-order formulas.

Each formula is fragment-determined on the structures it is paired with:
its compiled answer restricted to the probe points equals the evaluation
where quantifiers range over a fragment two letters deeper.  Witness and
counterexample arguments per structure live in the comments.
"""

# Safe on every corpus presentation: quantified witnesses are always within
# one or two letters of the probe points (predecessors, successors, llex
# lower bounds, midpoints) or the formula is quantifier-free.
SHARED = [
    "(exists y (rel < y x))",
    "(not (exists y (rel < y x)))",
    "(and (rel < x y) (not (= x y)))",
    "(or (rel < x y) (or (rel < y x) (= x y)))",
    "(exists z (and (rel < x z) (rel < z y)))",
    "(forall y (or (not (rel < y x)) (rel < y x)))",
    "(llex x y)",
    "(and (llex x y) (rel < y x))",
    "(not (rel < x x))",
    "(exists y (llex y x))",
    "(not (llex x x))",
    "(or (= x y) (not (= x y)))",
    "(exists z (and (llex z x) (llex z y)))",
    "(and (rel < x y) (rel < y z))",
    "(exists u (and (rel < x u) (llex u y)))",
    "(forall x (not (rel < x x)))",
    "(forall x (forall y (or (not (rel < x y)) (not (rel < y x)))))",
    "(forall x (exists y (or (rel < y x) (= y x))))",
    "(forall z (or (not (llex z x)) (llex z y)))",
    "(exists y (and (llex x y) (rel < y x)))",
    "(forall y (or (not (rel < y x)) (llex y x)))",
    "(= x y)",
    "(rel < x y)",
    "(not (and (rel < x y) (rel < y x)))",
    "(or (llex x y) (or (llex y x) (= x y)))",
    "(exists z (and (rel < z x) (rel < z y)))",
    "(forall y (or (llex x y) (llex y x) (= x y)))",
    "(and (not (llex x y)) (not (llex y x)))",
]

# Only fragment-determined on discrete orders without limit points in range.
DISCRETE_ONLY = [
    # immediate predecessor exists
    "(exists y (and (rel < y x) (not (exists z (and (rel < y z) (rel < z x))))))",
]

# Only fragment-determined on well-orders (a spurious fragment-least appears
# otherwise).
WELL_ORDER_ONLY = [
    "(exists x (not (exists y (rel < y x))))",
]

# Determined only when the structure really has a greatest element.
HAS_GREATEST_ONLY = [
    "(exists x (forall y (not (rel < x y))))",
]


def battery_for(name: str) -> list:
    out = list(SHARED)
    if name in ("omega", "omega_bin", "zline"):
        out += DISCRETE_ONLY
    if name in ("omega", "omega_bin", "omega_times_2", "omega2p3"):
        out += WELL_ORDER_ONLY
    if name in ("omega2p3",):
        out += HAS_GREATEST_ONLY
    return out


def all_texts() -> list:
    return SHARED + DISCRETE_ONLY + WELL_ORDER_ONLY + HAS_GREATEST_ONLY
