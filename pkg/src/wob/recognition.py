"""Deciding well-orderedness of automatic linear orders and extracting the
Cantor normal form of the order type.

The recognizer iterates the finite condensation (quotient by "finitely many
elements in between", expressed in FO + the infinity quantifier and compiled
by the fo-engine).  In a well-order every condensation class is finite or of
type omega and only the topmost class can be finite, so the order type is
reconstructed level by level:

    type(L_i) = w * (type(L_{i+1}) - top) + t_i      when the top class is
                                                      finite with t_i elements
    type(L_i) = w * type(L_{i+1})                     otherwise

A non-well-order is caught either by a condensation class without a least
element (BadCondensationClass, with a witness element) or by the
condensation reaching a fixpoint while the order is still infinite
(DenseFixpoint: all classes are singletons, which no infinite well-order
allows).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from . import automata as au
from . import ordinals as o
from .automata import Automaton
from .errors import NotComparable, NotLinear, StateBudgetExceeded
from .logic import (
    And,
    Eq,
    ExistsInf,
    Exists,
    Forall,
    Llex,
    Not,
    Rel,
    Structure,
    compile_formula,
    define_set,
    eval_sentence,
    implies,
)
from .ordinals import CnfOrdinal

LESS = "<"
SIM = "~"

TOP_CLASS_CAP = 10 ** 5
FINITE_LEVEL_CAP = 10 ** 5


@dataclass(frozen=True)
class OrderPresentation:
    structure: Structure

    def __post_init__(self):
        if LESS not in self.structure.relations:
            raise NotLinear(f"structure {self.structure.name!r} has no relation {LESS!r}")
        if self.structure.relations[LESS][0] != 2:
            raise NotLinear(f"relation {LESS!r} must be binary")

    @property
    def domain(self) -> Automaton:
        return self.structure.domain

    @property
    def order(self) -> Automaton:
        return self.structure.relations[LESS][1]


@dataclass(frozen=True)
class BadCondensationClass:
    witness: tuple
    reason: str  # "no-least" | "infinite-within-class"

    def __str__(self):
        w = "".join(self.witness) if all(len(s) == 1 for s in self.witness) else " ".join(self.witness)
        return f"bad-class witness={w!r} ({self.reason})"


@dataclass(frozen=True)
class DenseFixpoint:
    level: int

    def __str__(self):
        return f"dense-fixpoint level={self.level}"


@dataclass(frozen=True)
class WellOrder:
    cnf: CnfOrdinal


@dataclass(frozen=True)
class NotWellOrder:
    evidence: Union[BadCondensationClass, DenseFixpoint]


@dataclass(frozen=True)
class BudgetExceeded:
    level: int


RecognitionResult = Union[WellOrder, NotWellOrder, BudgetExceeded]


# -- linearity guard --------------------------------------------------------


def _or2(a, b):
    from .logic import Or

    return Or(a, b)


def _or3(a, b, c):
    return _or2(a, _or2(b, c))


_IRREFLEXIVE = Forall("x", Not(Rel(LESS, ("x", "x"))))
_TRANSITIVE = Forall(
    "x",
    Forall(
        "y",
        Forall(
            "z",
            implies(And(Rel(LESS, ("x", "y")), Rel(LESS, ("y", "z"))), Rel(LESS, ("x", "z"))),
        ),
    ),
)
_TOTAL = Forall(
    "x",
    Forall("y", _or3(Rel(LESS, ("x", "y")), Rel(LESS, ("y", "x")), Eq("x", "y"))),
)


def check_linear(p: OrderPresentation) -> Optional[str]:
    """None when the relation is a strict linear order, else the failing law."""
    s = p.structure
    for name, sentence in (
        ("irreflexivity", _IRREFLEXIVE),
        ("transitivity", _TRANSITIVE),
        ("totality", _TOTAL),
    ):
        if not eval_sentence(s, sentence):
            return name
    return None


# -- condensation machinery --------------------------------------------------


def _between():
    # z strictly between x and y, in either orientation
    return _or2(
        And(Rel(LESS, ("x", "z")), Rel(LESS, ("z", "y"))),
        And(Rel(LESS, ("y", "z")), Rel(LESS, ("z", "x"))),
    )


def sim_automaton(p: OrderPresentation, budget: int) -> Automaton:
    """x ~ y: only finitely many elements lie between x and y."""
    f = Not(ExistsInf("z", _between()))
    return au.minimize(compile_formula(p.structure, f, state_budget=budget))


def _with_sim(p: OrderPresentation, budget: int) -> Structure:
    s = p.structure
    rels = dict(s.relations)
    rels[SIM] = (2, sim_automaton(p, budget))
    return Structure(name=s.name, domain=s.domain, relations=rels)


def finite_condensation(p: OrderPresentation, budget: int = 10 ** 6) -> OrderPresentation:
    """Quotient by ~, represented by the llex-least element of each class."""
    s2 = _with_sim(p, budget)
    rep = Not(Exists("y", And(Llex("y", "x"), Rel(SIM, ("y", "x")))))
    new_dom = define_set(s2, rep, "x", state_budget=budget)
    rep_x = Not(Exists("u", And(Llex("u", "x"), Rel(SIM, ("u", "x")))))
    rep_y = Not(Exists("v", And(Llex("v", "y"), Rel(SIM, ("v", "y")))))
    order_f = And(And(rep_x, rep_y), And(Rel(LESS, ("x", "y")), Not(Rel(SIM, ("x", "y")))))
    new_rel = au.minimize(compile_formula(s2, order_f, state_budget=budget))
    q = Structure(
        name=s2.name + "'",
        domain=new_dom,
        relations={LESS: (2, new_rel)},
    )
    return OrderPresentation(q)


@dataclass(frozen=True)
class AllFiniteOrOmega:
    pass


def classify_classes(p: OrderPresentation, budget: int = 10 ** 6):
    """Certify that every condensation class has a least element and every
    element finitely many predecessors within its class; otherwise return a
    witness element from a failing class."""
    s2 = _with_sim(p, budget)
    no_least = Not(
        Exists(
            "m",
            And(
                Rel(SIM, ("m", "x")),
                Not(Exists("z", And(Rel(SIM, ("z", "x")), Rel(LESS, ("z", "m"))))),
            ),
        )
    )
    bad1 = define_set(s2, no_least, "x", state_budget=budget)
    if not au.is_empty(bad1):
        witness = au.count_or_enumerate(bad1, 1)[0][0]
        return BadCondensationClass(witness, "no-least")
    inf_preds = ExistsInf("y", And(Rel(SIM, ("y", "x")), Rel(LESS, ("y", "x"))))
    bad2 = define_set(s2, inf_preds, "x", state_budget=budget)
    if not au.is_empty(bad2):
        witness = au.count_or_enumerate(bad2, 1)[0][0]
        return BadCondensationClass(witness, "infinite-within-class")
    return AllFiniteOrOmega()


def _top_class_size(p: OrderPresentation, budget: int):
    """Size of the topmost condensation class when finite, else 0."""
    s2 = _with_sim(p, budget)
    in_top = Not(Exists("y", And(Rel(LESS, ("x", "y")), Not(Rel(SIM, ("x", "y"))))))
    top = define_set(s2, in_top, "x", state_budget=budget)
    if au.is_empty(top) or au.is_infinite(top):
        return 0
    members = au.count_or_enumerate(top, TOP_CLASS_CAP + 1)
    if len(members) > TOP_CLASS_CAP:
        raise StateBudgetExceeded(len(members), TOP_CLASS_CAP)
    return len(members)


def recognize(
    p: OrderPresentation,
    max_levels: Optional[int] = None,
    budget: int = 10 ** 6,
    trace: Optional[list] = None,
) -> RecognitionResult:
    """Decide well-orderedness and compute the CNF of the order type."""
    failure = check_linear(p)
    if failure is not None:
        raise NotLinear(f"{p.structure.name}: {failure} fails")
    if max_levels is None:
        max_levels = max(2, p.order.n_states)

    tops: list[int] = []
    current = p
    level = 0
    while True:
        if trace is not None:
            trace.append((level, current))
        verdict = classify_classes(current, budget)
        if isinstance(verdict, BadCondensationClass):
            return NotWellOrder(verdict)
        if not au.is_infinite(current.domain):
            members = au.count_or_enumerate(current.domain, FINITE_LEVEL_CAP + 1)
            if len(members) > FINITE_LEVEL_CAP:
                return BudgetExceeded(level)
            beta = o.from_int(len(members))
            return WellOrder(_unwind(beta, tops))
        try:
            t = _top_class_size(current, budget)
        except StateBudgetExceeded:
            return BudgetExceeded(level)
        quotient = finite_condensation(current, budget)
        if au.same_language(quotient.domain, current.domain):
            return NotWellOrder(DenseFixpoint(level))
        tops.append(t)
        current = quotient
        level += 1
        if level > max_levels:
            return BudgetExceeded(level)


def _unwind(beta: CnfOrdinal, tops: list[int]) -> CnfOrdinal:
    for t in reversed(tops):
        if t > 0:
            if not beta.is_successor():
                raise AssertionError("finite top class but quotient type is a limit")
            beta = o.OMEGA * beta.pred() + o.from_int(t)
        else:
            beta = o.OMEGA * beta
    if not beta < o.omega_power(o.OMEGA):
        raise AssertionError(f"recognized CNF {beta} is not below w^w")
    return beta


def isomorphic(p: OrderPresentation, q: OrderPresentation, **kw) -> bool:
    rp = recognize(p, **kw)
    rq = recognize(q, **kw)
    if not isinstance(rp, WellOrder) or not isinstance(rq, WellOrder):
        raise NotComparable(f"{type(rp).__name__} vs {type(rq).__name__}")
    return rp.cnf == rq.cnf


# -- order-theoretic helpers used by the verification harness ----------------


def predecessors(p: OrderPresentation, word) -> Automaton:
    """{ y : y < word } as an automaton."""
    return au.section(p.order, 1, word)


def successors_set(p: OrderPresentation, word) -> Automaton:
    return au.section(p.order, 0, word)


def least_of(p: OrderPresentation, subset: Automaton) -> list:
    """Minimal elements of a regular subset (at most 2 returned)."""
    on_tape0 = au.insert_tape(subset, 1)
    dominated = au.project(au.intersect(p.order, on_tape0), 0)
    least = au.difference(subset, dominated)
    return [w[0] for w in au.count_or_enumerate(least, 2)]


def initial_chain(p: OrderPresentation, count: int) -> list:
    """The first `count` elements of the order, each certified least of the
    remaining set by an automaton emptiness argument."""
    out = []
    remaining = p.domain
    for _ in range(count):
        found = least_of(p, remaining)
        if not found:
            break
        if len(found) > 1:
            raise NotLinear("two minimal elements; order is not linear")
        x = found[0]
        out.append(x)
        remaining = au.minimize(successors_set(p, x))
    return out
