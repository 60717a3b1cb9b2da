"""Synchronous multi-tape finite automata over padded convolutions.

Tuples of words are encoded as a single word over letter tuples: tape i
carries word i, right-padded with the reserved pad symbol ``#`` up to the
length of the longest word.  An automaton of arity k reads such letter
tuples.  Every constructed automaton is checked for the padding invariant
(once a tape reads pad it reads pad forever, and no letter is all-pad), so
each accepting path spells a valid convolution.

Symbols are arbitrary non-reserved tokens; when every symbol is a single
character a word prints as a plain string.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Optional, Sequence

from .errors import (
    ArityMismatch,
    CannotProject,
    InvalidAutomaton,
    InvalidSymbol,
    LoadError,
    StateBudgetExceeded,
)

PAD = "#"

Letter = tuple  # tuple of symbol tokens, length = arity
Word = tuple  # tuple of symbol tokens
WordTuple = tuple  # tuple of Words, length = arity


def as_word(w) -> Word:
    """Normalize a word given as a string (one char per symbol) or sequence."""
    if isinstance(w, str):
        return tuple(w)
    return tuple(w)


def check_symbol(sym: str) -> str:
    if not isinstance(sym, str) or not sym:
        raise InvalidSymbol(f"symbol must be a nonempty string, got {sym!r}")
    if sym == PAD:
        raise InvalidSymbol(f"the pad symbol {PAD!r} is reserved")
    if any(c.isspace() for c in sym) or any(c in "(),'" for c in sym):
        raise InvalidSymbol(f"symbol {sym!r} contains a reserved character")
    return sym


def convolve(words: Sequence) -> list[Letter]:
    """Encode k words as a sequence of k-letter tuples, right-padded with PAD."""
    ws = [as_word(w) for w in words]
    if not ws:
        raise ArityMismatch("convolution of zero words")
    for w in ws:
        for s in w:
            if s == PAD:
                raise InvalidSymbol(f"word {w!r} contains the pad symbol")
    n = max(len(w) for w in ws)
    return [tuple(w[i] if i < len(w) else PAD for w in ws) for i in range(n)]


def deconvolve(letters: Iterable[Letter]) -> WordTuple:
    """Inverse of convolve: strip per-tape pad suffixes."""
    letters = list(letters)
    if not letters:
        return ()
    k = len(letters[0])
    return tuple(tuple(l[i] for l in letters if l[i] != PAD) for i in range(k))


@dataclass(frozen=True)
class Automaton:
    """A (possibly nondeterministic) synchronous k-tape automaton.

    States are integers 0..n_states-1; transitions is a frozenset of
    (state, letter, state) triples.  Instances are immutable and validated
    at construction, including the suffix-padding invariant along every
    path reachable from the initial state.
    """

    arity: int
    alphabet: tuple
    n_states: int
    initial: int
    accepting: frozenset
    transitions: frozenset

    def __post_init__(self):
        if self.arity < 1:
            raise InvalidAutomaton("arity must be >= 1")
        if not isinstance(self.alphabet, tuple):
            object.__setattr__(self, "alphabet", tuple(self.alphabet))
        for s in self.alphabet:
            check_symbol(s)
        if len(set(self.alphabet)) != len(self.alphabet):
            raise InvalidAutomaton("duplicate symbols in alphabet")
        if self.n_states < 1:
            raise InvalidAutomaton("need at least one state")
        if not (0 <= self.initial < self.n_states):
            raise InvalidAutomaton("initial state out of range")
        if not isinstance(self.accepting, frozenset):
            object.__setattr__(self, "accepting", frozenset(self.accepting))
        if not all(0 <= q < self.n_states for q in self.accepting):
            raise InvalidAutomaton("accepting state out of range")
        if not isinstance(self.transitions, frozenset):
            object.__setattr__(self, "transitions", frozenset(self.transitions))
        symbols = set(self.alphabet) | {PAD}
        for (q, letter, r) in self.transitions:
            if not (0 <= q < self.n_states and 0 <= r < self.n_states):
                raise InvalidAutomaton(f"transition state out of range: {(q, letter, r)}")
            if len(letter) != self.arity:
                raise InvalidAutomaton(f"letter {letter!r} has wrong arity")
            if any(s not in symbols for s in letter):
                raise InvalidAutomaton(f"letter {letter!r} uses symbols outside the alphabet")
            if all(s == PAD for s in letter):
                raise InvalidAutomaton("all-pad letter is forbidden")
        self._check_padding()

    def _check_padding(self):
        # Product with the pad-mask automaton: once tape i pads, it pads forever.
        seen = {(self.initial, (False,) * self.arity)}
        stack = [(self.initial, (False,) * self.arity)]
        delta = self._delta
        while stack:
            q, mask = stack.pop()
            for letter, targets in delta.get(q, {}).items():
                if any(m and s != PAD for m, s in zip(mask, letter)):
                    raise InvalidAutomaton(
                        f"padding invariant violated at state {q} on letter {letter!r}"
                    )
                new_mask = tuple(s == PAD for s in letter)
                for r in targets:
                    if (r, new_mask) not in seen:
                        seen.add((r, new_mask))
                        stack.append((r, new_mask))

    # -- cached structure ------------------------------------------------

    @cached_property
    def _delta(self) -> dict:
        # built in sorted transition order, with tuple targets, so downstream
        # constructions number their states identically in every process
        # (string hashes vary per interpreter run)
        d: dict = {}
        for (q, letter, r) in sorted(self.transitions):
            d.setdefault(q, {}).setdefault(letter, []).append(r)
        return {q: {l: tuple(rs) for l, rs in m.items()} for q, m in d.items()}

    @cached_property
    def _letter_key(self) -> Callable:
        index = {s: i for i, s in enumerate(self.alphabet)}

        def key(letter):
            return tuple(-1 if s == PAD else index[s] for s in letter)

        return key

    @cached_property
    def _reachable(self) -> frozenset:
        seen = {self.initial}
        stack = [self.initial]
        while stack:
            q = stack.pop()
            for targets in self._delta.get(q, {}).values():
                for r in targets:
                    if r not in seen:
                        seen.add(r)
                        stack.append(r)
        return frozenset(seen)

    @cached_property
    def _coreachable(self) -> frozenset:
        back: dict = {}
        for (q, _letter, r) in self.transitions:
            back.setdefault(r, set()).add(q)
        seen = set(self.accepting)
        stack = list(self.accepting)
        while stack:
            q = stack.pop()
            for p in back.get(q, ()):
                if p not in seen:
                    seen.add(p)
                    stack.append(p)
        return frozenset(seen)

    @cached_property
    def useful_states(self) -> frozenset:
        return self._reachable & self._coreachable

    # -- running ----------------------------------------------------------

    def accepts_letters(self, letters: Iterable[Letter]) -> bool:
        current = {self.initial}
        for letter in letters:
            nxt = set()
            for q in current:
                nxt.update(self._delta.get(q, {}).get(tuple(letter), ()))
            if not nxt:
                return False
            current = nxt
        return bool(current & self.accepting)

    def accepts(self, *words) -> bool:
        """Membership of a word tuple (one word per tape)."""
        if len(words) != self.arity:
            raise ArityMismatch(f"expected {self.arity} words, got {len(words)}")
        ws = [as_word(w) for w in words]
        if any(s == PAD for w in ws for s in w):
            return False
        if all(len(w) == 0 for w in ws):
            return self.initial in self.accepting
        return self.accepts_letters(convolve(ws))


def automaton(arity, alphabet, n_states, initial, accepting, transitions) -> Automaton:
    return Automaton(
        arity=arity,
        alphabet=tuple(alphabet),
        n_states=n_states,
        initial=initial,
        accepting=frozenset(accepting),
        transitions=frozenset((q, tuple(l), r) for (q, l, r) in transitions),
    )


def _canonical(arity, alphabet, initial_key, accepting_pred, moves, max_states=None) -> Automaton:
    """Build an Automaton from an implicit graph over hashable state keys.

    moves(key) yields (letter, target_key).  States are numbered in BFS
    order with letters visited in sorted order, which makes every kernel
    operation deterministic down to the byte level.
    """
    alphabet = tuple(alphabet)
    index = {s: i for i, s in enumerate(alphabet)}

    def lkey(letter):
        return tuple(-1 if s == PAD else index[s] for s in letter)

    numbering = {initial_key: 0}
    order = [initial_key]
    transitions = []
    head = 0
    while head < len(order):
        key = order[head]
        head += 1
        out = {}
        for letter, target in moves(key):
            out.setdefault(tuple(letter), []).append(target)
        for letter in sorted(out, key=lkey):
            for target in out[letter]:
                if target not in numbering:
                    numbering[target] = len(order)
                    order.append(target)
                    if max_states is not None and len(order) > max_states:
                        raise StateBudgetExceeded(len(order), max_states)
                transitions.append((numbering[key], letter, numbering[target]))
    accepting = frozenset(numbering[k] for k in order if accepting_pred(k))
    return Automaton(
        arity=arity,
        alphabet=alphabet,
        n_states=len(order),
        initial=0,
        accepting=accepting,
        transitions=frozenset(transitions),
    )


def trim(a: Automaton) -> Automaton:
    """Restrict to useful states (reachable and co-reachable)."""
    useful = a.useful_states
    if a.initial not in useful:
        return empty(a.alphabet, a.arity)

    def moves(q):
        for letter, targets in a._delta.get(q, {}).items():
            for r in targets:
                if r in useful:
                    yield letter, r

    return _canonical(a.arity, a.alphabet, a.initial, lambda q: q in a.accepting, moves)


def empty(alphabet, arity) -> Automaton:
    return automaton(arity, alphabet, 1, 0, (), ())


def universe(alphabet, arity) -> Automaton:
    """All valid padded convolutions of the given arity (the pad-mask automaton)."""
    alphabet = tuple(alphabet)
    letters = list(_valid_letters(alphabet, arity))

    def moves(mask):
        for letter in letters:
            if any(m and s != PAD for m, s in zip(mask, letter)):
                continue
            yield letter, tuple(s == PAD for s in letter)

    return _canonical(arity, alphabet, (False,) * arity, lambda mask: True, moves)


def _valid_letters(alphabet, arity):
    """All letter tuples over alphabet+PAD except the all-pad one."""
    pool = tuple(alphabet) + (PAD,)

    def rec(i):
        if i == arity:
            yield ()
            return
        for s in pool:
            for rest in rec(i + 1):
                yield (s,) + rest

    for letter in rec(0):
        if any(s != PAD for s in letter):
            yield letter


def letter_filter(alphabet, arity, pred) -> Automaton:
    """Valid convolutions all of whose letters satisfy pred (letter -> bool)."""
    base = universe(alphabet, arity)
    keep = frozenset(t for t in base.transitions if pred(t[1]))
    return trim(
        Automaton(
            arity=arity,
            alphabet=base.alphabet,
            n_states=base.n_states,
            initial=base.initial,
            accepting=base.accepting,
            transitions=keep,
        )
    )


# -- boolean operations -------------------------------------------------


def _require_compatible(a: Automaton, b: Automaton):
    if a.arity != b.arity:
        raise ArityMismatch(f"arity {a.arity} vs {b.arity}")
    if a.alphabet != b.alphabet:
        raise ArityMismatch(f"alphabet mismatch: {a.alphabet} vs {b.alphabet}")


def intersect(a: Automaton, b: Automaton, max_states=None) -> Automaton:
    _require_compatible(a, b)

    def moves(pair):
        p, q = pair
        da = a._delta.get(p, {})
        db = b._delta.get(q, {})
        small, other, flip = (da, db, False) if len(da) <= len(db) else (db, da, True)
        for letter, targets in small.items():
            targets2 = other.get(letter)
            if not targets2:
                continue
            for r1 in targets:
                for r2 in targets2:
                    yield letter, ((r2, r1) if flip else (r1, r2))

    out = _canonical(
        a.arity,
        a.alphabet,
        (a.initial, b.initial),
        lambda pr: pr[0] in a.accepting and pr[1] in b.accepting,
        moves,
        max_states=max_states,
    )
    return trim(out)


def union(a: Automaton, b: Automaton, max_states=None) -> Automaton:
    _require_compatible(a, b)

    # Fresh initial state that mimics both initial states; no epsilon moves needed.
    def moves(key):
        tag, q = key
        if tag == 2:
            for side, aut in ((0, a), (1, b)):
                for letter, targets in aut._delta.get(aut.initial, {}).items():
                    for r in targets:
                        yield letter, (side, r)
            return
        aut = a if tag == 0 else b
        for letter, targets in aut._delta.get(q, {}).items():
            for r in targets:
                yield letter, (tag, r)

    def acc(key):
        tag, q = key
        if tag == 2:
            return a.initial in a.accepting or b.initial in b.accepting
        return q in (a.accepting if tag == 0 else b.accepting)

    return trim(_canonical(a.arity, a.alphabet, (2, None), acc, moves, max_states=max_states))


def determinize(a: Automaton, max_states=None) -> Automaton:
    """Subset construction; the result is a partial DFA over reachable subsets."""

    def moves(subset):
        out = {}
        for q in subset:
            for letter, targets in a._delta.get(q, {}).items():
                out.setdefault(letter, set()).update(targets)
        for letter, targets in out.items():
            yield letter, frozenset(targets)

    return trim(
        _canonical(
            a.arity,
            a.alphabet,
            frozenset({a.initial}),
            lambda s: bool(s & a.accepting),
            moves,
            max_states=max_states,
        )
    )


def complement(a: Automaton, max_states=None) -> Automaton:
    """Valid padded convolutions of a.arity not accepted by a."""
    letters = list(_valid_letters(a.alphabet, a.arity))

    # Complete subset construction (the empty subset is the sink), then flip
    # and restrict to the valid-convolution universe via the pad-mask product.
    def moves(key):
        subset, mask = key
        out = {}
        for q in subset:
            for letter, targets in a._delta.get(q, {}).items():
                out.setdefault(letter, set()).update(targets)
        for letter in letters:
            if any(m and s != PAD for m, s in zip(mask, letter)):
                continue
            new_mask = tuple(s == PAD for s in letter)
            yield letter, (frozenset(out.get(letter, ())), new_mask)

    start = (frozenset({a.initial}), (False,) * a.arity)
    return trim(
        _canonical(
            a.arity,
            a.alphabet,
            start,
            lambda key: not (key[0] & a.accepting),
            moves,
            max_states=max_states,
        )
    )


def difference(a: Automaton, b: Automaton, max_states=None) -> Automaton:
    return intersect(a, complement(b, max_states=max_states), max_states=max_states)


def product(a: Automaton, b: Automaton, mode: str, max_states=None) -> Automaton:
    """Pointwise boolean combination of two same-arity languages."""
    if mode == "and":
        return intersect(a, b, max_states=max_states)
    if mode == "or":
        return union(a, b, max_states=max_states)
    if mode == "minus":
        return difference(a, b, max_states=max_states)
    raise ValueError(f"unknown product mode {mode!r}")


def is_empty(a: Automaton) -> bool:
    return not (a._reachable & a.accepting)


def is_infinite(a: Automaton) -> bool:
    """True iff the language is infinite (a useful cycle exists)."""
    useful = a.useful_states
    if not useful:
        return False
    # Kahn's algorithm on the useful subgraph; leftovers mean a cycle.
    indeg = {q: 0 for q in useful}
    succs = {q: [] for q in useful}
    for (q, _letter, r) in a.transitions:
        if q in useful and r in useful:
            succs[q].append(r)
            indeg[r] += 1
    queue = deque(q for q in useful if indeg[q] == 0)
    done = 0
    while queue:
        q = queue.popleft()
        done += 1
        for r in succs[q]:
            indeg[r] -= 1
            if indeg[r] == 0:
                queue.append(r)
    return done < len(useful)


def count_or_enumerate(a: Automaton, limit: int) -> list[WordTuple]:
    """Up to `limit` accepted word tuples in length-lexicographic order.

    Length here is convolution length; ties are broken letter-wise using the
    declared symbol order with PAD sorting first.  This order restricted to
    arity 1 is the built-in llex relation.
    """
    out: list[WordTuple] = []
    if limit <= 0:
        return out
    useful = a.useful_states
    if a.initial not in useful:
        return out
    back: dict = {}
    fwd: dict = {}
    for (q, letter, r) in a.transitions:
        if q in useful and r in useful:
            back.setdefault(r, set()).add(q)
            fwd.setdefault(q, {}).setdefault(letter, set()).add(r)
    infinite = is_infinite(a)
    max_len = None if infinite else len(useful)

    if a.initial in a.accepting:
        out.append(((),) * a.arity)
        if len(out) >= limit:
            return out

    lkey = a._letter_key
    # layers[m]: states that can reach acceptance in exactly m more steps,
    # grown incrementally via the reverse edge map
    layers = [set(a.accepting & useful)]

    def extend_layers(upto):
        while len(layers) <= upto:
            prev = layers[-1]
            layers.append({p for q in prev for p in back.get(q, ())})

    length = 1
    gap = 0
    while True:
        if max_len is not None and length > max_len:
            break
        extend_layers(length)
        if a.initial not in layers[length]:
            gap += 1
            if infinite and gap > 2 * len(useful) + 2:
                break
            length += 1
            continue
        gap = 0
        found = _enumerate_length(a, fwd, layers, length, lkey, limit - len(out))
        out.extend(found)
        if len(out) >= limit:
            break
        length += 1
    return out[:limit]


def _enumerate_length(a, fwd, layers, length, lkey, want):
    # DFS over state subsets, so each letter sequence is visited exactly once
    # even when the automaton is nondeterministic.
    results = []
    path = []

    def rec(subset, remaining):
        if len(results) >= want:
            return
        if remaining == 0:
            if subset & a.accepting:
                results.append(deconvolve(path))
            return
        options = {}
        for q in subset:
            for letter, targets in fwd.get(q, {}).items():
                options.setdefault(letter, set()).update(targets)
        for letter in sorted(options, key=lkey):
            targets = options[letter] & layers[remaining - 1]
            if not targets:
                continue
            path.append(letter)
            rec(frozenset(targets), remaining - 1)
            path.pop()
            if len(results) >= want:
                return

    rec(frozenset({a.initial}), length)
    return results


def minimize(a: Automaton, max_states=None) -> Automaton:
    """Language-equivalent minimal (partial, trimmed) DFA."""
    d = determinize(a, max_states=max_states)
    if is_empty(d):
        return empty(a.alphabet, a.arity)
    d = trim(d)
    letters = sorted({t[1] for t in d.transitions}, key=d._letter_key)
    delta = {}
    for (q, letter, r) in d.transitions:
        delta[(q, letter)] = r
    # Moore refinement with an implicit dead state (block -1).
    block = {q: (1 if q in d.accepting else 0) for q in range(d.n_states)}
    while True:
        signatures = {}
        for q in range(d.n_states):
            sig = (block[q],) + tuple(
                block.get(delta.get((q, letter), -1), -1) for letter in letters
            )
            signatures.setdefault(sig, []).append(q)
        new_block = {}
        for i, (_sig, qs) in enumerate(sorted(signatures.items())):
            for q in qs:
                new_block[q] = i
        if len(set(new_block.values())) == len(set(block.values())):
            block = new_block
            break
        block = new_block

    reps = {}
    for q in range(d.n_states):
        reps.setdefault(block[q], q)

    def moves(b):
        q = reps[b]
        for letter in letters:
            r = delta.get((q, letter))
            if r is not None:
                yield letter, block[r]

    out = _canonical(
        d.arity,
        d.alphabet,
        block[d.initial],
        lambda b: reps[b] in d.accepting,
        moves,
    )
    return trim(out)


def same_language(a: Automaton, b: Automaton) -> bool:
    return is_empty(difference(a, b)) and is_empty(difference(b, a))


def is_subset_of_cube(rel: Automaton, domain: Automaton) -> bool:
    """L(rel) subseteq { conv(w_1..w_k) : each w_i in L(domain) }.

    Avoids materializing the cube automaton, whose transition table is
    quadratic in the alphabet; only letters rel actually uses are probed.
    """
    if domain.arity != 1:
        raise ArityMismatch("domain must have arity 1")
    if rel.alphabet != domain.alphabet:
        raise ArityMismatch("alphabet mismatch")
    import itertools as _it

    k = rel.arity
    DRAIN = -1
    dom_acc = domain.accepting

    def tape_step(q, s):
        if s == PAD:
            return (DRAIN,) if (q == DRAIN or q in dom_acc) else ()
        if q == DRAIN:
            return ()
        return tuple(domain._delta.get(q, {}).get((s,), ()))

    def cube_accept(tup):
        return all(q == DRAIN or q in dom_acc for q in tup)

    start_tuple = (domain.initial,) * k
    if rel.initial in rel.accepting and not cube_accept(start_tuple):
        return False
    start = (rel.initial, frozenset({start_tuple}))
    seen = {start}
    stack = [start]
    while stack:
        q, S = stack.pop()
        for letter, targets in rel._delta.get(q, {}).items():
            nxt = set()
            for tup in S:
                choices = [tape_step(tq, s) for tq, s in zip(tup, letter)]
                if all(choices):
                    nxt.update(_it.product(*choices))
            S2 = frozenset(nxt)
            for r in targets:
                key = (r, S2)
                if key in seen:
                    continue
                seen.add(key)
                if r in rel.accepting and not any(cube_accept(t) for t in S2):
                    return False
                stack.append(key)
    return True


def is_subset(small: Automaton, big: Automaton) -> bool:
    """L(small) subseteq L(big), without building a complement.

    Explores pairs (state of small, determinized subset of big) over the
    letters small actually uses; cheap when alphabets are large.
    """
    _require_compatible(small, big)
    if small.initial in small.accepting and big.initial not in big.accepting:
        return False
    start = (small.initial, frozenset({big.initial}))
    seen = {start}
    stack = [start]
    while stack:
        q, S = stack.pop()
        for letter, targets in small._delta.get(q, {}).items():
            S2 = frozenset(r for p in S for r in big._delta.get(p, {}).get(letter, ()))
            for r in targets:
                key = (r, S2)
                if key in seen:
                    continue
                seen.add(key)
                if r in small.accepting and not (S2 & big.accepting):
                    return False
                stack.append(key)
    return True


# -- tape surgery -------------------------------------------------------


def project(a: Automaton, tape: int) -> Automaton:
    """Existential projection: drop the given tape and re-normalize padding."""
    if a.arity < 2:
        raise CannotProject("cannot project an arity-1 automaton")
    if not (0 <= tape < a.arity):
        raise CannotProject(f"tape {tape} out of range for arity {a.arity}")

    real: dict = {}
    eps: dict = {}
    for (q, letter, r) in sorted(a.transitions):
        rest = letter[:tape] + letter[tape + 1 :]
        if all(s == PAD for s in rest):
            eps.setdefault(q, set()).add(r)
        else:
            real.setdefault(q, {}).setdefault(rest, []).append(r)

    def closure(qs):
        seen = set(qs)
        stack = list(qs)
        while stack:
            q = stack.pop()
            for r in eps.get(q, ()):
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return frozenset(seen)

    clo = {q: closure({q}) for q in range(a.n_states)}

    def moves(q):
        for p in clo[q]:
            for letter, targets in real.get(p, {}).items():
                for r in targets:
                    yield letter, r

    def acc(q):
        return bool(clo[q] & a.accepting)

    return trim(_canonical(a.arity - 1, a.alphabet, a.initial, acc, moves))


def permute_tapes(a: Automaton, perm: Sequence[int]) -> Automaton:
    """Reorder tapes: new tape i carries old tape perm[i]."""
    if sorted(perm) != list(range(a.arity)):
        raise ArityMismatch(f"{perm} is not a permutation of 0..{a.arity - 1}")
    transitions = frozenset(
        (q, tuple(letter[perm[i]] for i in range(a.arity)), r)
        for (q, letter, r) in a.transitions
    )
    return trim(
        Automaton(
            arity=a.arity,
            alphabet=a.alphabet,
            n_states=a.n_states,
            initial=a.initial,
            accepting=a.accepting,
            transitions=transitions,
        )
    )


def insert_tape(a: Automaton, position: int, track: Optional[Automaton] = None) -> Automaton:
    """Cylindrification: insert a fresh tape at `position` carrying any word
    accepted by `track` (default: any word over the alphabet).

    The convolution may outlive either side, so both component automata are
    run with a virtual drain state entered from acceptance on all-pad input.
    """
    if not (0 <= position <= a.arity):
        raise ArityMismatch(f"cannot insert at position {position} in arity {a.arity}")
    if track is None:
        track = universe(a.alphabet, 1)
    if track.arity != 1:
        raise ArityMismatch("track automaton must have arity 1")
    if track.alphabet != a.alphabet:
        raise ArityMismatch("track alphabet mismatch")

    DRAIN = -1
    pad_a = (PAD,) * a.arity

    def side_moves(aut, q):
        # (letter-or-None, target); None letter means the all-pad move
        if q == DRAIN:
            yield None, DRAIN
            return
        for letter, targets in aut._delta.get(q, {}).items():
            for r in targets:
                yield letter, r
        if q in aut.accepting:
            yield None, DRAIN

    def moves(key):
        qa, qt = key
        for la, ra in side_moves(a, qa):
            for lt, rt in side_moves(track, qt):
                if la is None and lt is None:
                    continue
                base = la if la is not None else pad_a
                sym = lt[0] if lt is not None else PAD
                letter = base[:position] + (sym,) + base[position:]
                yield letter, (ra, rt)

    def acc(key):
        qa, qt = key
        ok_a = qa == DRAIN or qa in a.accepting
        ok_t = qt == DRAIN or qt in track.accepting
        return ok_a and ok_t

    return trim(_canonical(a.arity + 1, a.alphabet, (a.initial, track.initial), acc, moves))


def rename_symbols(a: Automaton, mapping: dict) -> Automaton:
    """Apply a symbol bijection (unmapped symbols stay)."""
    new_alphabet = tuple(mapping.get(s, s) for s in a.alphabet)

    def m(s):
        return PAD if s == PAD else mapping.get(s, s)

    transitions = frozenset(
        (q, tuple(m(s) for s in letter), r) for (q, letter, r) in a.transitions
    )
    return Automaton(
        arity=a.arity,
        alphabet=new_alphabet,
        n_states=a.n_states,
        initial=a.initial,
        accepting=a.accepting,
        transitions=transitions,
    )


# -- common relation automata -------------------------------------------


def letter_dfa(alphabet, arity, start, step, accepting_pred) -> Automaton:
    """Automaton from a letter classifier.

    step(state, letter) returns the next classifier state or None to reject;
    the pad-mask product is composed in, so the classifier only ever sees
    valid convolutions and the result satisfies the padding invariant.
    """
    alphabet = tuple(alphabet)
    letters = list(_valid_letters(alphabet, arity))

    def moves(key):
        mask, v = key
        for letter in letters:
            if any(m and s != PAD for m, s in zip(mask, letter)):
                continue
            v2 = step(v, letter)
            if v2 is None:
                continue
            yield letter, (tuple(s == PAD for s in letter), v2)

    return trim(
        _canonical(
            arity,
            alphabet,
            ((False,) * arity, start),
            lambda key: accepting_pred(key[1]),
            moves,
        )
    )


def eq_tapes(alphabet, arity, i, j) -> Automaton:
    """Valid convolutions whose tapes i and j carry equal words."""
    return letter_filter(alphabet, arity, lambda l: l[i] == l[j])


def diagonal(alphabet) -> Automaton:
    return eq_tapes(alphabet, 2, 0, 1)


def llex_automaton(alphabet) -> Automaton:
    """Strict length-lexicographic order on tape 0 vs tape 1.

    Shorter words come first; equal lengths compare by the declared symbol
    order.  This is the built-in `llex` relation.
    """
    alphabet = tuple(alphabet)
    idx = {s: i for i, s in enumerate(alphabet)}
    EQ, LT, GT, XS, YS = range(5)

    def moves(state):
        for x in alphabet:
            for y in alphabet:
                if state in (EQ, LT, GT):
                    if state == EQ:
                        nxt = EQ if x == y else (LT if idx[x] < idx[y] else GT)
                    else:
                        nxt = state
                    yield (x, y), nxt
        if state in (EQ, LT, GT, XS):
            for y in alphabet:
                yield (PAD, y), XS
        if state in (EQ, LT, GT, YS):
            for x in alphabet:
                yield (x, PAD), YS

    return trim(_canonical(2, alphabet, EQ, lambda s: s in (LT, XS), moves))


def shorter_automaton(alphabet) -> Automaton:
    """|x| < |y| on tape 0 vs tape 1."""
    alphabet = tuple(alphabet)

    def moves(s):
        if s == 0:
            for x in alphabet:
                for y in alphabet:
                    yield (x, y), 0
        for y in alphabet:
            yield (PAD, y), 1

    return trim(_canonical(2, alphabet, 0, lambda s: s == 1, moves))


def fixed_word(alphabet, word) -> Automaton:
    """The singleton language {word} (arity 1)."""
    w = as_word(word)
    n = len(w)

    def moves(i):
        if i < n:
            yield (w[i],), i + 1

    return _canonical(1, tuple(alphabet), 0, lambda i: i == n, moves)


def section(rel: Automaton, tape: int, word) -> Automaton:
    """Fix one tape of a relation to a constant word and project it away."""
    fixed = fixed_word(rel.alphabet, word)
    cyl = rel
    constrained = intersect(cyl, _cyl_single(fixed, tape, rel.arity))
    return project(constrained, tape)


def _cyl_single(a1: Automaton, position: int, arity: int) -> Automaton:
    """Lift an arity-1 automaton to `arity` tapes with anything on the others."""
    out = a1
    for i in range(arity - 1):
        pos = 0 if i < position else out.arity
        out = insert_tape(out, pos)
    return out


# -- text format ---------------------------------------------------------


def save_automaton(a: Automaton, name: str) -> str:
    lines = [f"automaton {name}", f"arity {a.arity}", "alphabet " + " ".join(a.alphabet), f"states {a.n_states}", f"initial {a.initial}", "accepting " + " ".join(str(q) for q in sorted(a.accepting))]
    key = a._letter_key
    for (q, letter, r) in sorted(a.transitions, key=lambda t: (t[0], key(t[1]), t[2])):
        lines.append(f"trans {q} ({','.join(letter)}) {r}")
    return "\n".join(lines) + "\n"


def parse_automaton(text: str, expect_name: Optional[str] = None) -> tuple[str, Automaton]:
    name = None
    arity = None
    alphabet = None
    n_states = None
    initial = None
    accepting = None
    transitions = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        parts = line.split()
        kind = parts[0]
        try:
            if kind == "automaton":
                name = parts[1]
            elif kind == "arity":
                arity = int(parts[1])
            elif kind == "alphabet":
                alphabet = tuple(parts[1:])
            elif kind == "states":
                n_states = int(parts[1])
            elif kind == "initial":
                initial = int(parts[1])
            elif kind == "accepting":
                accepting = frozenset(int(p) for p in parts[1:])
            elif kind == "trans":
                if len(parts) != 4 or not (parts[2].startswith("(") and parts[2].endswith(")")):
                    raise LoadError(f"malformed trans line: {line!r}", lineno)
                letter = tuple(parts[2][1:-1].split(","))
                transitions.append((int(parts[1]), letter, int(parts[3])))
            else:
                raise LoadError(f"unknown directive {kind!r}", lineno)
        except LoadError:
            raise
        except (ValueError, IndexError) as exc:
            raise LoadError(f"cannot parse {line!r}: {exc}", lineno) from exc
    if None in (name, arity, alphabet, n_states, initial, accepting):
        raise LoadError("missing header directive (automaton/arity/alphabet/states/initial/accepting)")
    if expect_name is not None and name != expect_name:
        raise LoadError(f"expected automaton named {expect_name!r}, file declares {name!r}")
    try:
        a = automaton(arity, alphabet, n_states, initial, accepting, transitions)
    except InvalidAutomaton as exc:
        raise LoadError(str(exc)) from exc
    return name, a


def load_automaton(path, expect_name=None) -> tuple[str, Automaton]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_automaton(fh.read(), expect_name=expect_name)
