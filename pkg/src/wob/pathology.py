"""Pathological well-orderings built from a Pi^0_1 sentence, and their
mechanical verifiers.

The base order is length-lex on binary strings, i.e. a well-order of type
omega; naturals and strings are identified through the rank bijection
(rank 0 is the empty string).  Given the matrix pi_0 of the sentence, the
reordering compares

    x < y  iff  (x <_base y and all z < B(x) satisfy pi_0)
             or (y <_base x and some z < B(y) falsifies pi_0)

with B the identity, or the slow inverse g(x) = min{y : f(y) > x} when a
fast function f is supplied.  A false pi_0 flips the order above its least
witness, which is what the descent finder and the definable-subset check
exhibit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from . import automata as au
from . import fgh
from .automata import Automaton
from .errors import IllFormedSystem, PredicateDiverged, WobError
from .logic import (
    And,
    Exists,
    Forall,
    Llex,
    Not,
    Or,
    Rel,
    Structure,
    compile_formula,
    implies,
)

BINARY = ("0", "1")


# -- rank bijection: naturals <-> binary strings in llex order ---------------


def word_of_rank(n: int) -> tuple:
    if n < 0:
        raise ValueError("rank must be a natural number")
    bits = bin(n + 1)[3:]  # drop '0b1'
    return tuple(bits)


def rank_of_word(w) -> int:
    bits = "".join(w)
    return int("1" + bits, 2) - 1


# -- predicates ---------------------------------------------------------------


@dataclass(frozen=True)
class PiPredicate:
    """The matrix pi_0 of a universally quantified sentence."""

    kind: str  # "callback" | "regular"
    fn: Optional[Callable] = None  # naturals -> bool
    aut: Optional[Automaton] = None  # arity-1 over BINARY
    description: str = ""

    def __post_init__(self):
        if self.kind == "callback" and self.fn is None:
            raise WobError("callback predicate needs a function")
        if self.kind == "regular":
            if self.aut is None or self.aut.arity != 1:
                raise WobError("regular predicate needs an arity-1 automaton")

    def holds(self, z: int) -> bool:
        if self.kind == "callback":
            try:
                got = self.fn(z)
            except Exception as exc:
                raise PredicateDiverged(f"pi_0 failed at {z}: {exc}") from exc
            if not isinstance(got, bool):
                raise PredicateDiverged(f"pi_0 returned non-boolean at {z}")
            return got
        return self.aut.accepts(word_of_rank(z))


def always_true() -> PiPredicate:
    return PiPredicate(kind="callback", fn=lambda z: True, description="true")


def except_value(n: int) -> PiPredicate:
    return PiPredicate(kind="callback", fn=lambda z: z != n, description=f"z != {n}")


def regular_true() -> PiPredicate:
    return PiPredicate(kind="regular", aut=au.universe(BINARY, 1), description="all strings")


def regular_except_word(word) -> PiPredicate:
    aut = au.difference(au.universe(BINARY, 1), au.fixed_word(BINARY, word))
    return PiPredicate(kind="regular", aut=aut, description=f"all but {''.join(word)!r}")


def regular_empty() -> PiPredicate:
    return PiPredicate(kind="regular", aut=au.empty(BINARY, 1), description="no strings")


# -- the reordering ------------------------------------------------------------


@dataclass(frozen=True)
class KreiselOrder:
    pi0: PiPredicate
    g: Optional[Callable] = None  # slow inverse, naturals -> naturals

    def bound(self, x: int) -> int:
        if self.g is None:
            return x
        try:
            return self.g(x)
        except Exception as exc:
            raise PredicateDiverged(f"g failed at {x}: {exc}") from exc

    def precedes(self, x: int, y: int) -> bool:
        """Literal evaluation of the defining disjunction."""
        if x < y:
            return all(self.pi0.holds(z) for z in range(self.bound(x)))
        if y < x:
            return any(not self.pi0.holds(z) for z in range(self.bound(y)))
        return False


def slow_inverse(f: Callable) -> Callable:
    """g(x) = min{y : f(y) > x}; f must be monotone and unbounded."""

    def g(x):
        y = 0
        while f(y) <= x:
            y += 1
            if y > x + 64:
                raise PredicateDiverged(f"slow inverse of f stalled at {x}")
        return y

    return g


def kreisel_compare(k: KreiselOrder, x: int, y: int) -> str:
    if x == y:
        return "equal"
    if k.precedes(x, y):
        return "less"
    if k.precedes(y, x):
        return "greater"
    raise WobError(f"order is not total at ({x}, {y})")


def find_descent(k: KreiselOrder, start: int, max_len: int, search_span: int = 256):
    """Greedy descending chain through the order inversion.

    Successive elements are searched upward in the base order: with a true
    pi_0 everything base-above is also order-above, so nothing is found;
    with a false pi_0 the region above the witness is inverted and yields a
    chain of any requested length.
    """
    chain = [start]
    current = start
    while len(chain) < max_len:
        step = None
        for d in range(current + 1, current + 1 + search_span):
            if k.precedes(d, current):
                step = d
                break
        if step is None:
            return None
        chain.append(step)
        current = step
    return chain


# -- the automatic version -----------------------------------------------------

PI0_REL = "pi0"


def kreisel_formula():
    """x < y per the defining disjunction, over llex and the pi0 relation."""
    first = And(
        Llex("x", "y"),
        Forall("z", implies(Llex("z", "x"), Rel(PI0_REL, ("z",)))),
    )
    second = And(
        Llex("y", "x"),
        Exists("z", And(Llex("z", "y"), Not(Rel(PI0_REL, ("z",))))),
    )
    return Or(first, second)


def kreisel_as_automatic(pi0: PiPredicate, state_budget: int = 10 ** 6) -> Structure:
    """Compile the reordering into an automatic presentation over {0,1}^*."""
    if pi0.kind != "regular":
        raise WobError("only regular predicates compile to automata")
    domain = au.universe(BINARY, 1)
    helper = Structure(name="kreisel0", domain=domain, relations={PI0_REL: (1, pi0.aut)})
    rel = compile_formula(helper, kreisel_formula(), state_budget=state_budget)
    rel = au.minimize(rel)
    return Structure(name="kreisel", domain=domain, relations={"<": (2, rel)})


def tail_set(s: Structure, word, state_budget: int = 10 ** 6) -> Automaton:
    """The definable subset { y : y llex-above `word` } of a structure."""
    above = au.section(au.llex_automaton(s.domain.alphabet), 0, word)
    return au.minimize(au.intersect(above, s.domain))


def minimal_members(s: Structure, subset: Automaton, state_budget: int = 10 ** 6) -> Automaton:
    """Members of a regular subset with no order-smaller member (exact)."""
    rel = s.relations["<"][1]
    on_tape0 = au.insert_tape(subset, 1)
    dominated = au.project(au.intersect(rel, on_tape0), 0)
    return au.minimize(au.difference(subset, dominated))


# -- the omega+1 system with an inflated F_omega (Prop 2) ----------------------


TOP = ("omega",)


@dataclass(frozen=True)
class OmegaPlusOneSpec:
    """A fast function packaged with its cost model and the step bound s.

    The membership test runs the computation of f(n) for s(m) steps: if it
    has not finished, (n, m) is declared a member, which is sound whenever
    cost(n) > s(m) implies f(n) >= m.  The step bound must be supplied
    explicitly because only its existence is guaranteed, not its shape.
    """

    f: Callable
    cost: Callable  # steps needed to compute f(n)
    step_bound: Callable  # s(m)
    name: str = "omega+1"
    checked_range: int = 8

    def __post_init__(self):
        for n in range(self.checked_range):
            if self.f(n) > self.f(n + 1):
                raise IllFormedSystem(f"f is not monotone at {n}")
        for n in range(self.checked_range):
            for m in range(2 * self.checked_range):
                if self.cost(n) > self.step_bound(m) and not self.f(n) >= m:
                    raise IllFormedSystem(
                        f"step bound unsound at n={n}, m={m}: undecided but f(n) < m"
                    )


def power_of_two_spec() -> OmegaPlusOneSpec:
    f = lambda n: 2 ** n
    return OmegaPlusOneSpec(f=f, cost=f, step_bound=lambda m: m + 1, name="f=2^n")


def omega_plus_one_system(spec: OmegaPlusOneSpec) -> fgh.NotationSystem:
    f = spec.f

    def contains(a) -> bool:
        if a == TOP:
            return True
        n, m = a
        if spec.cost(n) > spec.step_bound(m):
            return True  # computation timed out: declared a member
        return m <= f(n)

    def compare(a, b) -> int:
        if a == b:
            return 0
        if a == TOP:
            return 1
        if b == TOP:
            return -1
        (n, m), (n2, m2) = a, b
        if n != n2:
            return -1 if n < n2 else 1
        return -1 if m > m2 else 1  # second coordinate inverted

    def is_zero(a) -> bool:
        return a == (0, f(0))

    def is_limit(a) -> bool:
        return a == TOP

    def unsupported_pred(a):
        raise IllFormedSystem(f"{a!r} has no predecessor")

    def pred(a):
        if a == TOP or is_zero(a):
            return unsupported_pred(a)
        n, m = a
        if m < f(n):
            return (n, m + 1)
        return (n - 1, 0)

    def fs(lam, n):
        if lam != TOP:
            raise IllFormedSystem(f"{lam!r} is not a limit")
        return (n, 0)

    ns = fgh.NotationSystem(
        name=spec.name,
        is_zero=is_zero,
        is_limit=is_limit,
        pred=pred,
        fs=fs,
        compare=compare,
        show=lambda a: "w" if a == TOP else f"({a[0]},{a[1]})",
    )
    return ns


def position(spec: OmegaPlusOneSpec, a) -> int:
    """Order position of a pair; (x,0) sits at x + sum_{y<=x} f(y)."""
    if a == TOP:
        raise ValueError("top has no finite position")
    n, m = a
    below = sum(spec.f(k) + 1 for k in range(n))
    return below + (spec.f(n) - m)
