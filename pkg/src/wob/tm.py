"""Turing-machine configuration graphs as automatic relations, the
reversibility check, and the well-founded relation built from a reversible
comparator for the Kreisel reordering.

A configuration is serialized as a single word: one state token followed by
one packed token per tape column.  A column token of a K-tape machine is
2K characters: the K cell symbols, then K head-flag bits.  Tapes are
right-infinite with a left end-marker in column 0; transitions reading the
marker must rewrite it and move right, so the serialization never grows on
the left and a machine step only edits a bounded window, which is what
makes the one-step relation synchronous-automaton recognizable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

from . import automata as au
from .automata import PAD, Automaton
from .errors import InvalidTm, LoadError, NotReversible, WobError
from .logic import Structure

MARKER = ">"
WORD_TAG = "W"
CONF_TAG = "C"


@dataclass(frozen=True)
class TmSpec:
    name: str
    tapes: int
    blank: str
    states: tuple  # declaration order; first is initial
    accepting: frozenset
    transitions: dict  # (state, reads) -> (state, ((write, move), ...))

    def __post_init__(self):
        if not (1 <= self.tapes <= 3):
            raise InvalidTm("tape count must be between 1 and 3")
        if len(self.blank) != 1 or self.blank == MARKER:
            raise InvalidTm("blank must be a single non-marker character")
        if not self.states:
            raise InvalidTm("need at least one state")
        if len(set(self.states)) != len(self.states):
            raise InvalidTm("duplicate state names")
        for st in self.states:
            if st in (WORD_TAG, CONF_TAG):
                raise InvalidTm(f"state name {st!r} is reserved")
        if not self.accepting <= set(self.states):
            raise InvalidTm("accepting states must be declared")
        for (q, reads), (q2, actions) in self.transitions.items():
            if q not in self.states or q2 not in self.states:
                raise InvalidTm(f"unknown state in transition {q}->{q2}")
            if len(reads) != self.tapes or len(actions) != self.tapes:
                raise InvalidTm(f"transition {q}{reads} has wrong tape count")
            for r, (w, m) in zip(reads, actions):
                if len(r) != 1 or len(w) != 1:
                    raise InvalidTm("tape symbols must be single characters")
                if m not in ("L", "R"):
                    raise InvalidTm(f"bad move {m!r}")
                if r == MARKER and (w != MARKER or m != "R"):
                    raise InvalidTm("reading the end marker must rewrite it and move R")
                if w == MARKER and r != MARKER:
                    raise InvalidTm("the end marker can not be written elsewhere")

    @property
    def initial(self) -> str:
        return self.states[0]

    @cached_property
    def tape_cells(self) -> tuple:
        """Per-tape cell alphabets (marker, blank, anything read or written)."""
        cells = [{MARKER, self.blank} for _ in range(self.tapes)]
        for (q, reads), (q2, actions) in self.transitions.items():
            for i in range(self.tapes):
                cells[i].add(reads[i])
                cells[i].add(actions[i][0])
        return tuple(tuple(sorted(c)) for c in cells)

    @cached_property
    def column_tokens(self) -> tuple:
        toks = []
        for cells in itertools.product(*self.tape_cells):
            for flags in itertools.product((False, True), repeat=self.tapes):
                toks.append(column_token(cells, flags))
        return tuple(sorted(toks))

    @cached_property
    def config_alphabet(self) -> tuple:
        toks = set(self.states) | set(self.column_tokens)
        if len(toks) != len(self.states) + len(self.column_tokens):
            raise InvalidTm("state names collide with column tokens")
        return tuple(sorted(toks, key=lambda t: (len(t), t)))


def column_token(cells, flags) -> str:
    return "".join(cells) + "".join("1" if f else "0" for f in flags)


def split_column(tok: str, tapes: int):
    cells = tuple(tok[:tapes])
    flags = tuple(c == "1" for c in tok[tapes:])
    return cells, flags


# -- configurations -----------------------------------------------------------


@dataclass(frozen=True)
class Configuration:
    state: str
    columns: tuple  # tuple of per-tape cell tuples
    heads: tuple  # head column per tape

    def serialize(self) -> tuple:
        word = [self.state]
        for j, cells in enumerate(self.columns):
            word.append(column_token(cells, [h == j for h in self.heads]))
        return tuple(word)


def is_canonical(tm: TmSpec, c: Configuration) -> bool:
    """No redundant trailing column: the last column carries a head or a
    non-blank cell.  Without this, a configuration and its padded twin would
    share a successor and the step graph would not be backward deterministic."""
    last = len(c.columns) - 1
    return any(h == last for h in c.heads) or any(cell != tm.blank for cell in c.columns[last])


def parse_configuration(tm: TmSpec, word) -> Configuration:
    word = tuple(word)
    if len(word) < 2 or word[0] not in tm.states:
        raise WobError(f"not a configuration word: {word!r}")
    columns = []
    heads = [None] * tm.tapes
    for j, tok in enumerate(word[1:]):
        cells, flags = split_column(tok, tm.tapes)
        columns.append(cells)
        for i, f in enumerate(flags):
            if f:
                if heads[i] is not None:
                    raise WobError("two head flags on one tape")
                heads[i] = j
    if any(h is None for h in heads):
        raise WobError("missing head flag")
    return Configuration(word[0], tuple(columns), tuple(heads))


def initial_configuration(tm: TmSpec, inputs: Sequence) -> Configuration:
    """Heads start on the end marker in column 0."""
    if len(inputs) != tm.tapes:
        raise InvalidTm(f"expected {tm.tapes} input words")
    inputs = [tuple(w) for w in inputs]
    ncols = max(len(w) for w in inputs) + 1
    columns = []
    for j in range(ncols):
        cells = []
        for w in inputs:
            if j == 0:
                cells.append(MARKER)
            elif j - 1 < len(w):
                cells.append(w[j - 1])
            else:
                cells.append(tm.blank)
        columns.append(tuple(cells))
    return Configuration(tm.initial, tuple(columns), (0,) * tm.tapes)


def step(tm: TmSpec, c: Configuration) -> Optional[Configuration]:
    reads = tuple(c.columns[c.heads[i]][i] for i in range(tm.tapes))
    hit = tm.transitions.get((c.state, reads))
    if hit is None:
        return None
    q2, actions = hit
    columns = [list(cells) for cells in c.columns]
    heads = list(c.heads)
    grow = False
    for i, (w, m) in enumerate(actions):
        columns[c.heads[i]][i] = w
        heads[i] += 1 if m == "R" else -1
        if heads[i] < 0:
            raise InvalidTm("head fell off the left end")
        if heads[i] >= len(columns):
            grow = True
    if grow:
        columns.append([tm.blank] * tm.tapes)
    return Configuration(q2, tuple(tuple(col) for col in columns), tuple(heads))


def run(tm: TmSpec, inputs: Sequence, max_steps: int = 10 ** 5):
    """Run to halt; returns (trace of configurations, accepted)."""
    c = initial_configuration(tm, inputs)
    trace = [c]
    for _ in range(max_steps):
        nxt = step(tm, c)
        if nxt is None:
            return trace, c.state in tm.accepting
        c = nxt
        trace.append(c)
    raise InvalidTm(f"machine {tm.name} did not halt within {max_steps} steps")


# -- reversibility ------------------------------------------------------------


def check_reversible(tm: TmSpec):
    """None, or a pair of transitions with the same (target, writes, moves)
    signature; distinct signatures force in-degree <= 1 on the step graph."""
    seen = {}
    for (q, reads), (q2, actions) in sorted(tm.transitions.items()):
        sig = (q2, tuple(actions))
        if sig in seen:
            return (seen[sig], ((q, reads), (q2, actions)))
        seen[sig] = ((q, reads), (q2, actions))
    return None


# -- the one-step relation as a synchronous automaton -------------------------


def step_relation_automaton(tm: TmSpec, alphabet: Optional[tuple] = None) -> Automaton:
    """Accepts conv(c, c') iff c' is the one-step successor of c.

    For each machine transition the automaton verifies the state tokens and
    then processes columns left to right, checking that each output column
    equals the input column with head cells rewritten and head flags moved
    one column left or right.  Flags arriving from the right (an L-move)
    are guessed one column ahead and checked on arrival; a flag moving
    right past the last column forces one appended blank column.
    """
    alphabet = alphabet or tm.config_alphabet
    K = tm.tapes
    ALL = frozenset(range(K))
    cols = [(tok,) + split_column(tok, K) for tok in tm.column_tokens]

    def moves(key):
        if key == ("start",):
            for (q, reads), (q2, actions) in tm.transitions.items():
                l_movers = frozenset(i for i in range(K) if actions[i][1] == "L")
                t = (reads, actions, l_movers)
                for g0 in _subsets(l_movers):
                    yield (q, q2), (t, frozenset(), frozenset(), g0, True, (False, False))
            return
        if key == ("done",):
            return
        t, seen, carry, guessed, first, _content = key
        reads, actions, l_movers = t
        for tok, cells, flags in cols:
            fx = frozenset(i for i in range(K) if flags[i])
            if fx & seen:
                continue
            if guessed != frozenset(i for i in fx if actions[i][1] == "L"):
                continue
            if any(cells[i] != reads[i] for i in fx):
                continue
            if first and any(c != MARKER for c in cells):
                continue
            if not first and any(c == MARKER for c in cells):
                continue
            out_cells = tuple(actions[i][0] if i in fx else cells[i] for i in range(K))
            new_seen = seen | fx
            new_carry = frozenset(i for i in fx if actions[i][1] == "R")
            in_content = bool(fx) or any(c != tm.blank for c in cells)
            for g in _subsets(l_movers - new_seen):
                out_flags = carry | g
                out_content = bool(out_flags) or any(c != tm.blank for c in out_cells)
                ytok = column_token(out_cells, [i in out_flags for i in range(K)])
                yield (tok, ytok), (t, new_seen, new_carry, g, False, (in_content, out_content))
        # input exhausted while a head still moves right past the end; the
        # appended column carries a head, so the output stays canonical
        if seen == ALL and not guessed and carry and not first and _content[0]:
            extra = column_token((tm.blank,) * K, [i in carry for i in range(K)])
            yield (PAD, extra), ("done",)

    def accepting(key):
        if key == ("done",):
            return True
        if key == ("start",):
            return False
        t, seen, carry, guessed, first, content = key
        # both sides must end in a contentful column (canonical configurations)
        return seen == ALL and not carry and not guessed and not first and all(content)

    return au.trim(au._canonical(2, alphabet, ("start",), accepting, moves))


def _subsets(s: frozenset):
    items = sorted(s)
    for r in range(len(items) + 1):
        for combo in itertools.combinations(items, r):
            yield frozenset(combo)


def config_domain_automaton(tm: TmSpec, alphabet: Optional[tuple] = None) -> Automaton:
    """Syntactically valid configuration words."""
    alphabet = alphabet or tm.config_alphabet
    K = tm.tapes
    ALL = frozenset(range(K))

    def moves(key):
        if key == ("start",):
            for q in tm.states:
                yield (q,), (frozenset(), True, False)
            return
        seen, first, _content = key
        for tok in tm.column_tokens:
            cells, flags = split_column(tok, K)
            fx = frozenset(i for i in range(K) if flags[i])
            if fx & seen:
                continue
            if first and any(c != MARKER for c in cells):
                continue
            if not first and any(c == MARKER for c in cells):
                continue
            content = bool(fx) or any(c != tm.blank for c in cells)
            yield (tok,), (seen | fx, False, content)

    def accepting(key):
        return key != ("start",) and key[0] == ALL and not key[1] and key[2]

    return au.trim(au._canonical(1, alphabet, ("start",), accepting, moves))


# -- bundled machines ----------------------------------------------------------


def increment_machine() -> TmSpec:
    """Unary increment: scan right over a's, turn the first blank into an a."""
    trans = {
        ("go", (MARKER,)): ("go", ((MARKER, "R"),)),
        ("go", ("a",)): ("go", (("a", "R"),)),
        ("go", ("_",)): ("done", (("a", "R"),)),
    }
    return TmSpec(
        name="increment", tapes=1, blank="_",
        states=("go", "done"), accepting=frozenset({"done"}), transitions=trans,
    )


def copy_machine() -> TmSpec:
    """Copy tape 1 to tape 2; naturally reversible (writes determine reads)."""
    trans = {
        ("go", (MARKER, MARKER)): ("go", ((MARKER, "R"), (MARKER, "R"))),
        ("go", ("a", "_")): ("go", (("a", "R"), ("a", "R"))),
        ("go", ("b", "_")): ("go", (("b", "R"), ("b", "R"))),
        ("go", ("_", "_")): ("done", (("_", "R"), ("_", "R"))),
    }
    return TmSpec(
        name="copy", tapes=2, blank="_",
        states=("go", "done"), accepting=frozenset({"done"}), transitions=trans,
    )


def collision_machine() -> TmSpec:
    """Two transitions with the same reverse signature (planted defect)."""
    trans = {
        ("s", ("a",)): ("q", (("x", "R"),)),
        ("t", ("b",)): ("q", (("x", "R"),)),
    }
    return TmSpec(
        name="collision", tapes=1, blank="_",
        states=("s", "t", "q"), accepting=frozenset(), transitions=trans,
    )


def empty_machine() -> TmSpec:
    return TmSpec(
        name="void", tapes=1, blank="_",
        states=("s",), accepting=frozenset(), transitions={},
    )


def kreisel_comparator(false_pi: bool) -> TmSpec:
    """One-pass reversible comparator for the Kreisel reordering on binary
    strings.

    Three tapes: x and y (both written back; y is what the accept edges read
    off) and a trail tape recording the source state of each step, which
    makes reverse signatures distinct.  With a true pi_0 it accepts iff x is
    llex-below y.  With pi_0 empty (least witness at rank 0, the empty
    string) the defining disjunction reduces to: x empty and y not, or y
    nonempty and llex-below x.
    """
    B = "_"
    marks = {"go": "i", "first": "f", "eq": "e", "lt": "l", "gt": "g"}
    trans = {}

    def add(q, a, b, q2):
        if q == "go":
            trans[(q, (a, b, MARKER))] = (q2, ((a, "R"), (b, "R"), (MARKER, "R")))
        else:
            trans[(q, (a, b, B))] = (q2, ((a, "R"), (b, "R"), (marks[q], "R")))

    def llex_next(status, a, b):
        if status != "eq":
            return status
        return "eq" if a == b else ("lt" if a < b else "gt")

    add("go", MARKER, MARKER, "first")
    if not false_pi:
        # accept iff x <llex y
        for q in ("first", "eq", "lt", "gt"):
            status = "eq" if q == "first" else q
            for a in ("0", "1"):
                for b in ("0", "1"):
                    add(q, a, b, llex_next(status, a, b))
                add(q, a, B, "rej")  # y ended first: |y| < |x|
            for b in ("0", "1"):
                add(q, B, b, "acc")  # x ended first: |x| < |y|
            add(q, B, B, "acc" if status == "lt" else "rej")
    else:
        # accept iff (x empty and y not) or (y nonempty and y <llex x)
        add("first", B, B, "rej")
        for b in ("0", "1"):
            add("first", B, b, "acc")
        for a in ("0", "1"):
            add("first", a, B, "rej")
            for b in ("0", "1"):
                add("first", a, b, llex_next("eq", a, b))
        for q in ("eq", "lt", "gt"):
            for a in ("0", "1"):
                for b in ("0", "1"):
                    add(q, a, b, llex_next(q, a, b))
                add(q, a, B, "acc")  # y ended first: y < x
            for b in ("0", "1"):
                add(q, B, b, "rej")  # x ended first
            add(q, B, B, "acc" if q == "gt" else "rej")
    name = "kreisel_false" if false_pi else "kreisel_true"
    return TmSpec(
        name=name, tapes=3, blank=B,
        states=("go", "first", "eq", "lt", "gt", "acc", "rej"),
        accepting=frozenset({"acc"}),
        transitions=trans,
    )


# -- the automatic well-founded relation ---------------------------------------


@dataclass(frozen=True)
class RpiStructure:
    structure: Structure
    tm: TmSpec
    pi_tag: str

    @property
    def relation(self) -> Automaton:
        return self.structure.relations["R"][1]

    @property
    def domain(self) -> Automaton:
        return self.structure.domain


def _rpi_alphabet(tm: TmSpec) -> tuple:
    toks = set(tm.config_alphabet) | {WORD_TAG, CONF_TAG, "0", "1"}
    return tuple(sorted(toks, key=lambda t: (len(t), t)))


def _prefix_pair(a: Automaton, tags: tuple, alphabet: tuple) -> Automaton:
    """Prepend a fixed letter pair to an arity-2 automaton."""

    def moves(key):
        if key == "fresh":
            yield tags, ("old", a.initial)
            return
        _, q = key
        for letter, targets in a._delta.get(q, {}).items():
            for r in targets:
                yield letter, ("old", r)

    def acc(key):
        return key != "fresh" and key[1] in a.accepting

    return au.trim(au._canonical(2, alphabet, "fresh", acc, moves))


def _prefix_one(a: Automaton, tag: str, alphabet: tuple) -> Automaton:
    def moves(key):
        if key == "fresh":
            yield (tag,), ("old", a.initial)
            return
        _, q = key
        for letter, targets in a._delta.get(q, {}).items():
            for r in targets:
                yield letter, ("old", r)

    return au.trim(
        au._canonical(1, alphabet, "fresh", lambda k: k != "fresh" and k[1] in a.accepting, moves)
    )


def word_domain_automaton(alphabet: tuple) -> Automaton:
    def moves(key):
        if key == 0:
            yield (WORD_TAG,), 1
            return
        for b in ("0", "1"):
            yield (b,), 1

    return au._canonical(1, alphabet, 0, lambda k: k == 1, moves)


def _input_edge_automaton(tm: TmSpec, alphabet: tuple) -> Automaton:
    """Pairs (W x, C z) with z the initial configuration on input (x, y) for
    some binary y: state q0, all heads on the marker column.

    The x characters inside the configuration lag two positions behind the
    word side, so a two-character buffer carries them across.
    """
    K = tm.tapes
    q0 = tm.initial
    col0 = column_token((MARKER,) * K, (True,) * K)

    def make_col(x_cell, y_cell):
        cells = [x_cell, y_cell, tm.blank][:K]
        return column_token(tuple(cells), (False,) * K)

    def moves(key):
        if key == ("head",):
            yield (WORD_TAG, CONF_TAG), ("q",)
            return
        if key == ("q",):
            for xc in ("0", "1", PAD):
                yield (xc, q0), ("col0", (xc,))
            return
        if key[0] == "col0":
            (x1,) = key[1]
            for xc in ("0", "1", PAD):
                if x1 == PAD and xc != PAD:
                    continue
                # the marker column carries all the head flags
                yield (xc, col0), ("cols", (x1, xc), False, True)
            return
        _, buf, ydone, content = key
        x_cell = tm.blank if buf[0] == PAD else buf[0]
        y_opts = (tm.blank,) if ydone else ("0", "1", tm.blank)
        for y_cell in y_opts:
            tok = make_col(x_cell, y_cell)
            new_ydone = ydone or y_cell == tm.blank
            new_content = x_cell != tm.blank or y_cell != tm.blank
            for xc in ("0", "1", PAD):
                if buf[1] == PAD and xc != PAD:
                    continue
                yield (xc, tok), ("cols", (buf[1], xc), new_ydone, new_content)

    def acc(key):
        # all x characters emitted, and the final column is contentful
        return key[0] == "cols" and key[1] == (PAD, PAD) and key[3]

    return au.trim(au._canonical(2, alphabet, ("head",), acc, moves))


def _accept_edge_automaton(tm: TmSpec, alphabet: tuple) -> Automaton:
    """Pairs (C z, W y): z is a syntactically valid configuration in an
    accepting state whose second tape reads `> y` (blanks beyond).

    The y characters inside z run two positions ahead of the word side, so
    the pattern buffers the word characters and compares on arrival.
    """
    K = tm.tapes
    ALL = frozenset(range(K))
    ycomp = 1 if K >= 2 else 0

    def moves(key):
        if key == ("head",):
            yield (CONF_TAG, WORD_TAG), ("q",)
            return
        if key == ("q",):
            for q in sorted(tm.accepting):
                for yc in ("0", "1", PAD):
                    yield (q, yc), ("cols", (yc,), frozenset(), True, False)
            return
        _, buf, seen, is_first, _content = key
        for tok in tm.column_tokens:
            cells, flags = split_column(tok, K)
            fx = frozenset(i for i in range(K) if flags[i])
            if fx & seen:
                continue
            if is_first:
                if any(c != MARKER for c in cells):
                    continue
            else:
                if any(c == MARKER for c in cells):
                    continue
                want = tm.blank if buf[0] == PAD else buf[0]
                if cells[ycomp] != want:
                    continue
            content = bool(fx) or any(c != tm.blank for c in cells)
            for yc in ("0", "1", PAD):
                if buf[-1] == PAD and yc != PAD:
                    continue
                new_buf = (buf + (yc,)) if is_first else (buf[1:] + (yc,))
                yield (tok, yc), ("cols", new_buf, seen | fx, False, content)

    def acc(key):
        if key[0] != "cols":
            return False
        _, buf, seen, is_first, content = key
        return seen == ALL and not is_first and all(c == PAD for c in buf) and content

    return au.trim(au._canonical(2, alphabet, ("head",), acc, moves))


def build_rpi(tm: TmSpec, pi_tag: str) -> RpiStructure:
    """Assemble the relation: machine steps on configurations, input edges
    into initial configurations, accept edges out of accepting ones."""
    if tm.tapes < 2:
        raise InvalidTm("the construction needs an input tape for x and one for y")
    collision = check_reversible(tm)
    if collision is not None:
        raise NotReversible(collision)
    alphabet = _rpi_alphabet(tm)
    step_rel = step_relation_automaton(tm, alphabet)
    e_edges = _prefix_pair(step_rel, (CONF_TAG, CONF_TAG), alphabet)
    input_edges = _input_edge_automaton(tm, alphabet)
    accept_edges = _accept_edge_automaton(tm, alphabet)
    rel = au.union(au.union(e_edges, input_edges), accept_edges)

    conf_dom = _prefix_one(config_domain_automaton(tm, alphabet), CONF_TAG, alphabet)
    domain = au.union(word_domain_automaton(alphabet), conf_dom)
    s = Structure(name=f"rpi_{tm.name}", domain=domain, relations={"R": (2, rel)})
    return RpiStructure(structure=s, tm=tm, pi_tag=pi_tag)


def tag_word(x) -> tuple:
    return (WORD_TAG,) + tuple(x)


def tag_config(c: Configuration) -> tuple:
    return (CONF_TAG,) + c.serialize()


def emb_path(rpi: RpiStructure, x, y, max_steps: int = 10 ** 4):
    """The witness path x R I(x,y) R ... R F(x,y) R y when the comparator
    accepts (x, y); every hop is verified against the relation automaton."""
    tm = rpi.tm
    inputs = [tuple(x), tuple(y)] + [()] * (tm.tapes - 2)
    trace, accepted = run(tm, inputs, max_steps)
    if not accepted:
        return None
    rel = rpi.relation
    path = [tag_word(x)] + [tag_config(c) for c in trace] + [tag_word(y)]
    for u, v in zip(path, path[1:]):
        if not rel.accepts(u, v):
            raise WobError(f"edge not in the relation: {u!r} -> {v!r}")
    return path


# -- bounded verification -------------------------------------------------------


@dataclass
class ExploredFragment:
    elements: list  # words (tuples of tokens)
    edges: list  # (u, v) pairs, all automaton-verified

    def to_dot(self) -> str:
        def label(w):
            return "".join(w) if all(len(t) == 1 for t in w) else " ".join(w)

        lines = ["digraph fragment {"]
        index = {w: i for i, w in enumerate(self.elements)}
        for w, i in index.items():
            lines.append(f'  n{i} [label="{label(w)}"];')
        for u, v in self.edges:
            lines.append(f"  n{index[u]} -> n{index[v]};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def explore_fragment(
    rpi: RpiStructure,
    word_len: int = 4,
    run_input_len: int = 2,
    verify_sample: int = 50,
) -> ExploredFragment:
    """Collect binary words up to word_len and every configuration arising
    from runs on inputs up to run_input_len; compute the edge set
    structurally and verify it against the relation automaton, including a
    sample of non-edges."""
    tm = rpi.tm
    rel = rpi.relation
    words = []
    for n in range(word_len + 1):
        words.extend(tuple(bits) for bits in itertools.product("01", repeat=n))
    elements = [tag_word(w) for w in words]
    configs = {}
    for x in words:
        if len(x) > run_input_len:
            continue
        for y in words:
            if len(y) > run_input_len:
                continue
            inputs = [x, y] + [()] * (tm.tapes - 2)
            trace, accepted = run(tm, inputs)
            for c in trace:
                configs.setdefault(tag_config(c), c)
    elements.extend(sorted(configs))

    edges = []
    # structural edges: steps, input edges, accept edges
    for cw, c in configs.items():
        nxt = step(tm, c)
        if nxt is not None:
            nw = tag_config(nxt)
            if nw in configs:
                edges.append((cw, nw))
    for x in words:
        if len(x) > run_input_len:
            continue
        for y in words:
            if len(y) > run_input_len:
                continue
            inputs = [x, y] + [()] * (tm.tapes - 2)
            first = initial_configuration(tm, inputs)
            fw = tag_config(first)
            if fw in configs:
                edges.append((tag_word(x), fw))
            trace, accepted = run(tm, inputs)
            if accepted:
                lw = tag_config(trace[-1])
                if lw in configs:
                    edges.append((lw, tag_word(y)))
    edges = sorted(set(edges))

    for u, v in edges:
        if not rel.accepts(u, v):
            raise WobError(f"structural edge missing from the automaton: {u!r} -> {v!r}")
    # sampled non-edges must be rejected too
    sample = elements[:verify_sample]
    edge_set = set(edges)
    for u in sample:
        for v in sample:
            if (u, v) not in edge_set and rel.accepts(u, v):
                raise WobError(f"automaton accepts a non-edge: {u!r} -> {v!r}")
    return ExploredFragment(elements=elements, edges=edges)


@dataclass(frozen=True)
class WfWitness:
    kind: str  # "cycle" | "descent"
    chain: tuple


def bounded_wf_check(rpi: RpiStructure, fragment: Optional[ExploredFragment] = None, **kw):
    """Acyclicity of the explored fragment; on a finite acyclic fragment
    every nonempty subset has a minimal element, so None means ok."""
    fragment = fragment or explore_fragment(rpi, **kw)
    succs = {}
    for u, v in fragment.edges:
        succs.setdefault(u, []).append(v)
    WHITE, GREY, BLACK = 0, 1, 2
    color = {u: WHITE for u in fragment.elements}
    for root in fragment.elements:
        if color[root] != WHITE:
            continue
        stack = [(root, iter(succs.get(root, ())))]
        color[root] = GREY
        path = [root]
        while stack:
            node, it = stack[-1]
            advanced = False
            for v in it:
                if color.get(v, BLACK) == GREY:
                    i = path.index(v)
                    return WfWitness("cycle", tuple(path[i:] + [v]))
                if color.get(v, BLACK) == WHITE:
                    color[v] = GREY
                    path.append(v)
                    stack.append((v, iter(succs.get(v, ()))))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                path.pop()
                stack.pop()
    return None


def descent_witness(rpi: RpiStructure, ranks: Sequence[int], max_steps: int = 10 ** 4):
    """A descending chain through the relation, built by concatenating the
    embedding paths along a descending chain of the comparator order.

    ranks is a base-order descending-in-the-reordering chain r_0 > r_1 ...
    (each r_{i+1} preceding r_i); the result lists elements v_0, v_1, ...
    with every consecutive pair (v_{i+1}, v_i) an automaton-verified edge.
    """
    from .pathology import word_of_rank

    chain = []
    for hi, lo in zip(ranks, ranks[1:]):
        x, y = word_of_rank(lo), word_of_rank(hi)
        path = emb_path(rpi, x, y, max_steps)
        if path is None:
            raise WobError(f"comparator does not accept ({lo}, {hi})")
        # path runs x -> ... -> y; descending means walking it backwards
        seg = list(reversed(path))
        if chain:
            seg = seg[1:]
        chain.extend(seg)
    rel = rpi.relation
    for nxt, prev in zip(chain[1:], chain):
        if not rel.accepts(nxt, prev):
            raise WobError("descent chain edge not verified")
    return chain


# -- text format ---------------------------------------------------------------


def save_tm(tm: TmSpec) -> str:
    lines = [f"tm {tm.name}", f"tapes {tm.tapes}", f"blank {tm.blank}"]
    for q in tm.states:
        lines.append(f"state {q} accept" if q in tm.accepting else f"state {q}")
    for (q, reads), (q2, actions) in sorted(tm.transitions.items()):
        acts = "".join(f"({w},{m})" for w, m in actions)
        lines.append(f"trans {q} ({','.join(reads)}) -> {q2} {acts}")
    return "\n".join(lines) + "\n"


def parse_tm(text: str) -> TmSpec:
    name = None
    tapes = None
    blank = None
    states = []
    accepting = set()
    transitions = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        parts = line.split()
        try:
            if parts[0] == "tm":
                name = parts[1]
            elif parts[0] == "tapes":
                tapes = int(parts[1])
            elif parts[0] == "blank":
                blank = parts[1]
            elif parts[0] == "state":
                states.append(parts[1])
                if len(parts) > 2 and parts[2] == "accept":
                    accepting.add(parts[1])
            elif parts[0] == "trans":
                if len(parts) != 6 or parts[3] != "->":
                    raise LoadError(f"malformed trans line {line!r}", lineno)
                q = parts[1]
                if not (parts[2].startswith("(") and parts[2].endswith(")")):
                    raise LoadError(f"malformed reads in {line!r}", lineno)
                reads = tuple(parts[2][1:-1].split(","))
                q2 = parts[4]
                acts_text = parts[5]
                if not (acts_text.startswith("(") and acts_text.endswith(")")):
                    raise LoadError(f"malformed actions in {line!r}", lineno)
                actions = []
                for chunk in acts_text[1:-1].split(")("):
                    w, m = chunk.split(",")
                    actions.append((w, m))
                if (q, reads) in transitions:
                    raise LoadError(f"duplicate transition for {q} {reads}", lineno)
                transitions[(q, reads)] = (q2, tuple(actions))
            else:
                raise LoadError(f"unknown directive {parts[0]!r}", lineno)
        except LoadError:
            raise
        except (IndexError, ValueError) as exc:
            raise LoadError(f"cannot parse {line!r}: {exc}", lineno) from exc
    if None in (name, tapes, blank) or not states:
        raise LoadError("missing tm/tapes/blank/state directives")
    return TmSpec(
        name=name, tapes=tapes, blank=blank,
        states=tuple(states), accepting=frozenset(accepting), transitions=transitions,
    )
