"""Operational semantics of higher-order pushdown stores and automata:
level-indexed push/pop, configuration graphs with epsilon edges, the
epsilon-contraction convention, and the unfolding of colored graphs.

A 0-pds is a letter; an (n+1)-pds is a nonempty sequence of n-pds.  push^k
copies the topmost (k-1)-pds onto its k-pds and overwrites the topmost
letter; pop^k removes the topmost (k-1)-pds and may never empty a store.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .errors import BadLevel, EmptyPds, LoadError, WobError

EPSILON = "eps"


@dataclass(frozen=True)
class Npds:
    level: int
    content: Union[str, tuple]  # a letter at level 0, a tuple of Npds above

    def __post_init__(self):
        if self.level == 0:
            if not isinstance(self.content, str) or len(self.content) != 1:
                raise BadLevel("a 0-pds is a single letter")
        else:
            if not isinstance(self.content, tuple) or not self.content:
                raise BadLevel("an (n+1)-pds is a nonempty tuple")
            for child in self.content:
                if child.level != self.level - 1:
                    raise BadLevel("pds levels must be homogeneous")

    def serialize(self) -> str:
        if self.level == 0:
            return self.content
        return "[" + "".join(c.serialize() for c in self.content) + "]"


def letter(a: str) -> Npds:
    return Npds(0, a)


def stack(*children: Npds) -> Npds:
    return Npds(children[0].level + 1, tuple(children))


def init_pds(level: int, bottom: str) -> Npds:
    p = letter(bottom)
    for _ in range(level):
        p = Npds(p.level + 1, (p,))
    return p


def top_letter(p: Npds) -> str:
    while p.level > 0:
        p = p.content[-1]
    return p.content


def _set_top_letter(p: Npds, a: str) -> Npds:
    if p.level == 0:
        return letter(a)
    return Npds(p.level, p.content[:-1] + (_set_top_letter(p.content[-1], a),))


def push_k(p: Npds, k: int, a: str) -> Npds:
    """Copy the topmost (k-1)-pds onto its k-pds, then overwrite the topmost
    letter with `a`."""
    if not (1 <= k <= p.level):
        raise BadLevel(f"push^{k} on a level-{p.level} pds")
    if p.level == k:
        copy = _set_top_letter(p.content[-1], a)
        return Npds(k, p.content + (copy,))
    return Npds(p.level, p.content[:-1] + (push_k(p.content[-1], k, a),))


def pop_k(p: Npds, k: int) -> Npds:
    """Remove the topmost (k-1)-pds; popping may never empty a store."""
    if not (1 <= k <= p.level):
        raise BadLevel(f"pop^{k} on a level-{p.level} pds")
    if p.level == k:
        if len(p.content) <= 1:
            raise EmptyPds(f"pop^{k} would empty the store")
        return Npds(k, p.content[:-1])
    return Npds(p.level, p.content[:-1] + (pop_k(p.content[-1], k),))


def apply_op(p: Npds, op: tuple) -> Npds:
    if op[0] == "push":
        return push_k(p, op[1], op[2])
    if op[0] == "pop":
        return pop_k(p, op[1])
    if op[0] == "noop":
        return p
    raise WobError(f"unknown operation {op!r}")


# -- automata -------------------------------------------------------------------


@dataclass(frozen=True)
class Rule:
    state: str
    letter: Optional[str]  # None is an epsilon move
    guard: str  # topmost letter
    new_state: str
    op: tuple  # ("push", k, a) | ("pop", k) | ("noop",)


@dataclass(frozen=True)
class HopdaSpec:
    name: str
    level: int
    input_alphabet: tuple
    pds_alphabet: tuple
    states: tuple  # first is initial
    rules: tuple
    bottom: str
    accepting: frozenset = frozenset()

    def __post_init__(self):
        if self.level < 1:
            raise BadLevel("automaton level must be >= 1")
        if EPSILON in self.input_alphabet:
            raise WobError(f"input letter {EPSILON!r} is reserved")
        if self.bottom not in self.pds_alphabet:
            raise WobError("bottom letter must be in the pds alphabet")
        for r in self.rules:
            if r.state not in self.states or r.new_state not in self.states:
                raise WobError(f"unknown state in rule {r}")
            if r.letter is not None and r.letter not in self.input_alphabet:
                raise WobError(f"unknown input letter in rule {r}")
            if r.guard not in self.pds_alphabet:
                raise WobError(f"unknown guard letter in rule {r}")
            if r.op[0] == "push":
                if not (1 <= r.op[1] <= self.level) or r.op[2] not in self.pds_alphabet:
                    raise WobError(f"bad push in rule {r}")
            elif r.op[0] == "pop":
                if not (1 <= r.op[1] <= self.level):
                    raise WobError(f"bad pop in rule {r}")
            elif r.op[0] != "noop":
                raise WobError(f"bad op in rule {r}")

    @property
    def initial_state(self) -> str:
        return self.states[0]

    def initial_pds(self) -> Npds:
        return init_pds(self.level, self.bottom)

    def moves_from(self, state: str, pds: Npds):
        top = top_letter(pds)
        for r in self.rules:
            if r.state != state or r.guard != top:
                continue
            try:
                yield r.letter, r.new_state, apply_op(pds, r.op)
            except EmptyPds:
                continue


# -- colored graphs ---------------------------------------------------------------


@dataclass(frozen=True)
class ColoredGraph:
    vertices: tuple
    colors: tuple
    edges: dict  # color -> frozenset of (u, v)
    root: Optional[object] = None
    partial: bool = False

    def __post_init__(self):
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise WobError("duplicate vertices")
        for color, pairs in self.edges.items():
            if color not in self.colors:
                raise WobError(f"edge color {color!r} not declared")
            for (u, v) in pairs:
                if u not in vset or v not in vset:
                    raise WobError(f"edge endpoint missing: {(u, v)}")
        if self.root is not None and self.root not in vset:
            raise WobError("root is not a vertex")

    def out_edges(self, u, color=None):
        for c, pairs in self.edges.items():
            if color is not None and c != color:
                continue
            for (a, b) in pairs:
                if a == u:
                    yield c, b

    def to_dot(self) -> str:
        index = {v: i for i, v in enumerate(self.vertices)}
        lines = ["digraph g {"]
        for v, i in index.items():
            shape = ' shape="box"' if v == self.root else ""
            lines.append(f'  n{i} [label="{_vlabel(v)}"{shape}];')
        for color in self.colors:
            for (u, v) in sorted(self.edges.get(color, ()), key=lambda p: (index[p[0]], index[p[1]])):
                lines.append(f'  n{index[u]} -> n{index[v]} [label="{color}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _vlabel(v) -> str:
    if isinstance(v, tuple) and len(v) == 2 and isinstance(v[0], str):
        return f"{v[0]}:{v[1]}"
    return str(v)


def graph_from_edges(vertices, edges, root=None, partial=False) -> ColoredGraph:
    """edges: iterable of (u, color, v)."""
    by_color: dict = {}
    for (u, c, v) in edges:
        by_color.setdefault(c, set()).add((u, v))
    return ColoredGraph(
        vertices=tuple(vertices),
        colors=tuple(sorted(by_color)),
        edges={c: frozenset(ps) for c, ps in by_color.items()},
        root=root,
        partial=partial,
    )


def config_graph(h: HopdaSpec, budget: int = 1000) -> ColoredGraph:
    """BFS over configurations (state, pds) from the initial one; edges are
    labeled with input letters or the epsilon color.  A truncated graph is
    flagged partial."""
    start = (h.initial_state, h.initial_pds())

    def key(cfg):
        return (cfg[0], cfg[1].serialize())

    seen = {start}
    frontier = [start]
    order = [start]
    edges = []
    partial = False
    while frontier:
        frontier.sort(key=key)
        next_frontier = []
        for cfg in frontier:
            state, pds = cfg
            for letter_, new_state, new_pds in h.moves_from(state, pds):
                target = (new_state, new_pds)
                color = EPSILON if letter_ is None else letter_
                if target not in seen:
                    if len(seen) >= budget:
                        partial = True
                        continue
                    seen.add(target)
                    order.append(target)
                    next_frontier.append(target)
                if target in seen:
                    edges.append((cfg, color, target))
        frontier = next_frontier
    verts = [(s, p.serialize()) for (s, p) in order]
    vedges = [((u[0], u[1].serialize()), c, (v[0], v[1].serialize())) for (u, c, v) in edges]
    return graph_from_edges(verts, sorted(set(vedges)), root=verts[0], partial=partial)


def run_word(h: HopdaSpec, word, budget: int = 10 ** 4) -> bool:
    """Does some run consume the word and end in an accepting state?"""
    word = tuple(word)
    start = (h.initial_state, h.initial_pds(), 0)
    seen = {start}
    stack_ = [start]
    explored = 0
    while stack_:
        state, pds, pos = stack_.pop()
        explored += 1
        if explored > budget:
            raise WobError(f"run budget exhausted on {h.name}")
        if pos == len(word) and state in h.accepting:
            return True
        for letter_, new_state, new_pds in h.moves_from(state, pds):
            if letter_ is None:
                nxt = (new_state, new_pds, pos)
            elif pos < len(word) and word[pos] == letter_:
                nxt = (new_state, new_pds, pos + 1)
            else:
                continue
            if nxt not in seen:
                seen.add(nxt)
                stack_.append(nxt)
    return False


def reachable_configs(h: HopdaSpec, words: Iterable) -> list:
    """All configurations reached while consuming each of the given words."""
    out = {}
    for word in words:
        word = tuple(word)
        frontier = [(h.initial_state, h.initial_pds(), 0)]
        seen = set(frontier)
        while frontier:
            state, pds, pos = frontier.pop()
            out[(state, pds.serialize())] = (state, pds)
            for letter_, new_state, new_pds in h.moves_from(state, pds):
                if letter_ is None:
                    nxt = (new_state, new_pds, pos)
                elif pos < len(word) and word[pos] == letter_:
                    nxt = (new_state, new_pds, pos + 1)
                else:
                    continue
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
    return [out[k] for k in sorted(out)]


def epsilon_contract(g: ColoredGraph, eps_color: str = EPSILON) -> ColoredGraph:
    """Keep the epsilon-normal vertices plus the root; draw an a-edge u -> v
    whenever the graph has a path eps^* a eps^* from u to v with v normal."""
    if eps_color not in g.colors:
        raise WobError(f"graph has no {eps_color!r} edges")
    eps_succ = {}
    for (u, v) in g.edges.get(eps_color, ()):
        eps_succ.setdefault(u, set()).add(v)

    def closure(u):
        seen = {u}
        todo = [u]
        while todo:
            w = todo.pop()
            for v in eps_succ.get(w, ()):
                if v not in seen:
                    seen.add(v)
                    todo.append(v)
        return seen

    normal = [v for v in g.vertices if v not in eps_succ or not eps_succ[v]]
    normal_set = set(normal)
    kept = list(normal)
    if g.root is not None and g.root not in normal_set:
        kept = [g.root] + kept
    kept_set = set(kept)

    edges = []
    for u in kept:
        for w in closure(u):
            for color, pairs in g.edges.items():
                if color == eps_color:
                    continue
                for (a, b) in pairs:
                    if a != w:
                        continue
                    for v in closure(b):
                        if v in normal_set:
                            edges.append((u, color, v))
    return graph_from_edges(kept, sorted(set(edges)), root=g.root if g.root in kept_set else None,
                            partial=g.partial)


def unfold(g: ColoredGraph, root, depth: int) -> ColoredGraph:
    """The tree of paths from the root, truncated after `depth` edges; a path
    extends along an i-edge of the graph into an i-edge of the unfolding."""
    if root not in g.vertices:
        raise WobError("root is not a vertex of the graph")
    succ = {}
    for color, pairs in g.edges.items():
        for (u, v) in pairs:
            succ.setdefault(u, []).append((color, v))
    paths = [(root,)]
    edges = []
    frontier = [(root,)]
    for _ in range(depth):
        nxt = []
        for path in frontier:
            for color, v in sorted(succ.get(path[-1], [])):
                ext = path + (v,)
                paths.append(ext)
                edges.append((path, color, ext))
                nxt.append(ext)
        frontier = nxt
    return graph_from_edges(paths, edges, root=(root,))


# -- bundled machines -------------------------------------------------------------


def anbn_pda() -> HopdaSpec:
    """The classic level-1 automaton for { a^n b^n }."""
    rules = (
        Rule("p", "a", "Z", "p", ("push", 1, "A")),
        Rule("p", "a", "A", "p", ("push", 1, "A")),
        Rule("p", "b", "A", "q", ("pop", 1)),
        Rule("q", "b", "A", "q", ("pop", 1)),
        Rule("p", None, "Z", "acc", ("noop",)),
        Rule("q", None, "Z", "acc", ("noop",)),
    )
    return HopdaSpec(
        name="anbn", level=1, input_alphabet=("a", "b"), pds_alphabet=("Z", "A"),
        states=("p", "q", "acc"), rules=rules, bottom="Z", accepting=frozenset({"acc"}),
    )


def epsilon_chain_machine() -> HopdaSpec:
    """One state, one epsilon push loop; its configuration graph is a chain."""
    rules = (
        Rule("s", None, "Z", "s", ("push", 1, "A")),
        Rule("s", None, "A", "s", ("push", 1, "A")),
    )
    return HopdaSpec(
        name="eps_chain", level=1, input_alphabet=("a",), pds_alphabet=("Z", "A"),
        states=("s",), rules=rules, bottom="Z",
    )


def omega_machine() -> HopdaSpec:
    """Level 1; reachable stacks Z A^j enumerate omega."""
    rules = (
        Rule("s", "a", "Z", "s", ("push", 1, "A")),
        Rule("s", "a", "A", "s", ("push", 1, "A")),
    )
    return HopdaSpec(
        name="omega", level=1, input_alphabet=("a",), pds_alphabet=("Z", "A"),
        states=("s",), rules=rules, bottom="Z",
    )


def omega_value(pds: Npds) -> int:
    return pds.serialize().count("A")


def omega_squared_machine() -> HopdaSpec:
    """Level 1; stacks Z B^i A^j enumerate w*i + j, with an epsilon clearing
    phase between majors, so the contracted graph lives on the s-states."""
    rules = (
        Rule("s", "a", "Z", "s", ("push", 1, "A")),
        Rule("s", "a", "A", "s", ("push", 1, "A")),
        Rule("s", "a", "B", "s", ("push", 1, "A")),
        Rule("s", "b", "Z", "c", ("noop",)),
        Rule("s", "b", "A", "c", ("noop",)),
        Rule("s", "b", "B", "c", ("noop",)),
        Rule("c", None, "A", "c", ("pop", 1)),
        Rule("c", None, "Z", "s", ("push", 1, "B")),
        Rule("c", None, "B", "s", ("push", 1, "B")),
    )
    return HopdaSpec(
        name="omega_sq", level=1, input_alphabet=("a", "b"), pds_alphabet=("Z", "A", "B"),
        states=("s", "c"), rules=rules, bottom="Z",
    )


def omega_squared_value(pds: Npds):
    from . import ordinals as o

    s = pds.serialize()
    return o.OMEGA * o.from_int(s.count("B")) + o.from_int(s.count("A"))


def omega_omega_machine() -> HopdaSpec:
    """Level 2; each 1-pds Z A^k contributes w^k and the 2-pds sums them,
    so reachable stores realize every ordinal below w^w.

    '1' appends a fresh unit (exponent 0); 'w' bumps the exponent of the
    topmost 1-pds.  Appending onto a nonzero exponent goes through a marked
    copy that an epsilon phase clears back down to a unit.
    """
    rules = (
        Rule("s", "1", "Z", "s", ("push", 2, "Z")),
        Rule("s", "1", "A", "u", ("push", 2, "T")),
        Rule("u", None, "T", "u", ("pop", 1)),
        Rule("u", None, "A", "u", ("pop", 1)),
        Rule("u", None, "Z", "s", ("noop",)),
        Rule("s", "w", "Z", "s", ("push", 1, "A")),
        Rule("s", "w", "A", "s", ("push", 1, "A")),
    )
    return HopdaSpec(
        name="omega_omega", level=2, input_alphabet=("1", "w"), pds_alphabet=("Z", "A", "T"),
        states=("s", "u"), rules=rules, bottom="Z",
    )


def omega_omega_value(pds: Npds):
    from . import ordinals as o

    total = o.ZERO
    for sub in pds.content[1:]:
        k = sub.serialize().count("A")
        total = total + o.omega_power(o.from_int(k))
    return total


# -- text format --------------------------------------------------------------------


def save_hopda(h: HopdaSpec) -> str:
    lines = [
        f"hopda {h.name}",
        f"level {h.level}",
        "input " + " ".join(h.input_alphabet),
        "pds " + " ".join(h.pds_alphabet),
        f"bottom {h.bottom}",
    ]
    for q in h.states:
        lines.append(f"state {q} accept" if q in h.accepting else f"state {q}")
    for r in h.rules:
        op = {
            "push": lambda: f"push{r.op[1]}({r.op[2]})",
            "pop": lambda: f"pop{r.op[1]}",
            "noop": lambda: "noop",
        }[r.op[0]]()
        lines.append(f"rule {r.state} {r.letter or EPSILON} {r.guard} -> {r.new_state} {op}")
    return "\n".join(lines) + "\n"


def parse_hopda(text: str) -> HopdaSpec:
    name = level = bottom = None
    input_alphabet = pds_alphabet = None
    states = []
    accepting = set()
    rules = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        parts = line.split()
        try:
            if parts[0] == "hopda":
                name = parts[1]
            elif parts[0] == "level":
                level = int(parts[1])
            elif parts[0] == "input":
                input_alphabet = tuple(parts[1:])
            elif parts[0] == "pds":
                pds_alphabet = tuple(parts[1:])
            elif parts[0] == "bottom":
                bottom = parts[1]
            elif parts[0] == "state":
                states.append(parts[1])
                if len(parts) > 2 and parts[2] == "accept":
                    accepting.add(parts[1])
            elif parts[0] == "rule":
                if len(parts) != 7 or parts[4] != "->":
                    raise LoadError(f"malformed rule {line!r}", lineno)
                letter_ = None if parts[2] == EPSILON else parts[2]
                op_text = parts[6]
                if op_text == "noop":
                    op = ("noop",)
                elif op_text.startswith("push"):
                    k, a = op_text[4:].split("(")
                    op = ("push", int(k), a.rstrip(")"))
                elif op_text.startswith("pop"):
                    op = ("pop", int(op_text[3:]))
                else:
                    raise LoadError(f"unknown operation {op_text!r}", lineno)
                rules.append(Rule(parts[1], letter_, parts[3], parts[5], op))
            else:
                raise LoadError(f"unknown directive {parts[0]!r}", lineno)
        except LoadError:
            raise
        except (IndexError, ValueError) as exc:
            raise LoadError(f"cannot parse {line!r}: {exc}", lineno) from exc
    if None in (name, level, bottom) or input_alphabet is None or pds_alphabet is None or not states:
        raise LoadError("missing hopda header directives")
    return HopdaSpec(
        name=name, level=level, input_alphabet=input_alphabet, pds_alphabet=pds_alphabet,
        states=tuple(states), rules=tuple(rules), bottom=bottom, accepting=frozenset(accepting),
    )
